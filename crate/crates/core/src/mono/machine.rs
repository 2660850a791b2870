//! Tail-recursive abstract machine with refocusing, duplication and
//! one-binding-at-a-time copattern matching.

use std::fmt;
use std::rc::Rc;

use super::{MonoAnswer, TermQuestion};
use crate::error::{EvalError, Fuel};
use crate::frontend::pretty;
use crate::syntax::mono::{all_names, subst};
use crate::syntax::{Copattern, Frame, Fresh, MonoOption, MonoTerm, Spine};

#[derive(Clone, Debug)]
pub enum State {
    /// `⟨M ∣ K⟩`
    Eval(Rc<MonoTerm>, TermQuestion),
    /// `⟨L ∣ K' ∣ M ∣ O… ∣ K⟩`: remaining copattern, remaining question,
    /// partially substituted body, untried options, question to revert to.
    Match {
        lhs: Copattern,
        rest: TermQuestion,
        rhs: Rc<MonoTerm>,
        options: Rc<[MonoOption]>,
        saved: TermQuestion,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    PushArg,
    PushIdx,
    /// `⟨M. ∣ K⟩ ↦ ⟨M ∣ M K⟩`
    Duplicate,
    Enter,
    Bind,
    Project,
    /// `⟨ε ∣ K' ∣ M ∣ O… ∣ K⟩ ↦ ⟨M ∣ K'⟩`
    Commit,
    Revert,
}

pub enum Step {
    Next(Rule, State),
    Halt(MonoAnswer),
}

pub fn initial(m: &Rc<MonoTerm>) -> State {
    State::Eval(m.clone(), Spine::nop())
}

pub fn step(s: State, fresh: &mut Fresh) -> Step {
    match s {
        State::Eval(m, k) => match &*m {
            MonoTerm::Var(x) => Step::Halt(MonoAnswer::Stuck(x.clone(), k)),
            MonoTerm::App(f, n) => Step::Next(Rule::PushArg, State::Eval(f.clone(), Spine::arg(n.clone(), k))),
            MonoTerm::Idx(f, i) => Step::Next(Rule::PushIdx, State::Eval(f.clone(), Spine::idx(i.clone(), k))),
            MonoTerm::Dot(f) => Step::Next(Rule::Duplicate, State::Eval(f.clone(), Spine::arg(f.clone(), k))),
            MonoTerm::Obj(os) => match os.first() {
                None => Step::Halt(MonoAnswer::Raise(k)),
                Some(o) => Step::Next(
                    Rule::Enter,
                    State::Match {
                        lhs: o.lhs.clone(),
                        rest: k.clone(),
                        rhs: o.rhs.clone(),
                        options: os[1..].into(),
                        saved: k,
                    },
                ),
            },
        },
        State::Match { lhs, rest, rhs, options, saved } => {
            let (l, k) = match (lhs.uncons(), rest.uncons()) {
                (None, _) => return Step::Next(Rule::Commit, State::Eval(rhs, rest)),
                (Some(_), None) => {
                    return Step::Halt(MonoAnswer::Under { lhs, rhs, options, question: saved })
                }
                (Some(l), Some(k)) => (l, k),
            };
            match (l, k) {
                ((Frame::Arg(x), l2), (Frame::Arg(n), k2)) => {
                    let rhs = subst(&rhs, &[(x.clone(), n.clone())], fresh);
                    let (lhs, rest) = (l2.clone(), k2.clone());
                    Step::Next(Rule::Bind, State::Match { lhs, rest, rhs, options, saved })
                }
                ((Frame::Idx(i), l2), (Frame::Idx(j), k2)) if i == j => {
                    let (lhs, rest) = (l2.clone(), k2.clone());
                    Step::Next(Rule::Project, State::Match { lhs, rest, rhs, options, saved })
                }
                _ => Step::Next(Rule::Revert, State::Eval(Rc::new(MonoTerm::Obj(options)), saved)),
            }
        }
    }
}

/// Runs the machine, reporting every state (the initial one included) with
/// the rule that produced it.  Each transition costs one unit of fuel.
pub fn run_observed(
    m: &Rc<MonoTerm>,
    fuel: u64,
    mut observe: impl FnMut(Option<Rule>, &State),
) -> Result<MonoAnswer, EvalError> {
    let mut fuel = Fuel::new(fuel);
    let mut fresh = Fresh::for_program(&all_names(m), m.free_names());
    let mut state = initial(m);
    observe(None, &state);
    loop {
        match step(state, &mut fresh) {
            Step::Halt(a) => return Ok(a),
            Step::Next(rule, next) => {
                fuel.tick()?;
                observe(Some(rule), &next);
                state = next;
            }
        }
    }
}

pub fn run(m: &Rc<MonoTerm>, fuel: u64) -> Result<MonoAnswer, EvalError> {
    run_observed(m, fuel, |_, _| {})
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            State::Eval(m, k) => write!(f, "⟨{} ∣ {}⟩", pretty::mono_term(m), pretty::mono_question(k)),
            State::Match { lhs, rest, rhs, options, saved } => write!(
                f,
                "⟨{} ∣ {} ∣ {} ∣ {} ∣ {}⟩",
                pretty::copattern(lhs),
                pretty::mono_question(rest),
                pretty::mono_term(rhs),
                pretty::mono_options(options),
                pretty::mono_question(saved)
            ),
        }
    }
}
