//! Abstract machine with an explicit meta-continuation of pending
//! handlers.

use std::fmt;
use std::rc::Rc;

use super::{meta_string, nop, reify, CompAnswer, MetaCont, TermQuestion};
use crate::error::{EvalError, Fuel};
use crate::frontend::pretty;
use crate::syntax::comp::{all_names, all_names_option, all_names_term, subst_option, subst_response, subst_term};
use crate::syntax::{CompOption, CompResponse, CompTerm, Frame, Fresh, Spine, SubstEntry};

/// Machine configurations.  The meta-continuation is stored innermost
/// last so pushing and popping are cheap.
#[derive(Clone, Debug)]
pub enum State {
    /// `⟨R ∣ S⟩`
    Delim(Rc<CompResponse>, Vec<Rc<CompTerm>>),
    /// `⟨M ∣ K ∣ S⟩`
    Refocus(Rc<CompTerm>, TermQuestion, Vec<Rc<CompTerm>>),
    /// `⟨O ∣ M ∣ K ∣ S⟩`
    Comatch(Rc<CompOption>, Rc<CompTerm>, TermQuestion, Vec<Rc<CompTerm>>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// `⟨M ! R ∣ S⟩ ↦ ⟨R ∣ M; S⟩`
    Delimit,
    /// `⟨ε ∣ M; S⟩ ↦ ⟨M ∣ ε ∣ S⟩`
    Resume,
    PushArg,
    PushIdx,
    Handle,
    Duplicate,
    /// `⟨raise ∣ K ∣ M; S⟩ ↦ ⟨M ∣ K ∣ S⟩`
    Reraise,
    Capture,
    Pop,
    Get,
    Succeed,
    Fail,
}

pub enum Step {
    Next(Rule, State),
    Halt(CompAnswer),
}

fn innermost_first(mut s: Vec<Rc<CompTerm>>) -> MetaCont {
    s.reverse();
    s
}

pub fn step(state: State, fresh: &mut Fresh) -> Result<Step, EvalError> {
    Ok(match state {
        State::Delim(r, mut s) => match &*r {
            CompResponse::Splat(k) => Step::Halt(CompAnswer::CoStuck(innermost_first(s), k.clone())),
            CompResponse::End => match s.pop() {
                None => Step::Halt(CompAnswer::Final(nop())),
                Some(m) => Step::Next(Rule::Resume, State::Refocus(m, nop(), s)),
            },
            CompResponse::AndThen(m, rest) => {
                s.push(m.clone());
                Step::Next(Rule::Delimit, State::Delim(rest.clone(), s))
            }
        },
        State::Refocus(m, k, mut s) => match &*m {
            CompTerm::Var(x) => Step::Halt(CompAnswer::Stuck(innermost_first(s), x.clone(), k)),
            CompTerm::Dot(f) => Step::Next(Rule::Duplicate, State::Refocus(f.clone(), Spine::arg(f.clone(), k), s)),
            CompTerm::App(f, n) => Step::Next(Rule::PushArg, State::Refocus(f.clone(), Spine::arg(n.clone(), k), s)),
            CompTerm::Idx(f, i) => Step::Next(Rule::PushIdx, State::Refocus(f.clone(), Spine::idx(i.clone(), k), s)),
            CompTerm::Capture(q, r) => {
                let r = subst_response(r, &[(q.clone(), SubstEntry::Response(reify(&k)))], fresh)?;
                Step::Next(Rule::Capture, State::Delim(r, s))
            }
            CompTerm::Handle(o, f) => Step::Next(Rule::Handle, State::Comatch(o.clone(), f.clone(), k, s)),
            CompTerm::Raise => match s.pop() {
                None => Step::Halt(CompAnswer::Final(k)),
                Some(h) => Step::Next(Rule::Reraise, State::Refocus(h, k, s)),
            },
        },
        State::Comatch(o, m, k, s) => match (&*o, k.uncons()) {
            (CompOption::Done(x, n), _) => {
                let n = subst_term(n, &[(x.clone(), SubstEntry::Term(m))], fresh)?;
                Step::Next(Rule::Succeed, State::Refocus(n, k, s))
            }
            (CompOption::PopArg(x, o2), Some((Frame::Arg(n), k2))) => {
                let o2 = subst_option(o2, &[(x.clone(), SubstEntry::Term(n.clone()))], fresh)?;
                let m = CompTerm::app(m, n.clone());
                Step::Next(Rule::Pop, State::Comatch(o2, m, k2.clone(), s))
            }
            (CompOption::GetIdx(i, o2), Some((Frame::Idx(j), k2))) if i == j => {
                let m = CompTerm::idx(m, i.clone());
                Step::Next(Rule::Get, State::Comatch(o2.clone(), m, k2.clone(), s))
            }
            _ => Step::Next(Rule::Fail, State::Refocus(m, k, s)),
        },
    })
}

/// Runs the machine from `state`, reporting every state (the initial one
/// included) with the rule that produced it.  Each transition costs one
/// unit of fuel.
pub fn run_from(
    mut state: State,
    mut fresh: Fresh,
    fuel: u64,
    mut observe: impl FnMut(Option<Rule>, &State),
) -> Result<CompAnswer, EvalError> {
    let mut fuel = Fuel::new(fuel);
    observe(None, &state);
    loop {
        match step(state, &mut fresh)? {
            Step::Halt(a) => return Ok(a),
            Step::Next(rule, next) => {
                fuel.tick()?;
                observe(Some(rule), &next);
                state = next;
            }
        }
    }
}

pub fn run_observed(
    r: &Rc<CompResponse>,
    fuel: u64,
    observe: impl FnMut(Option<Rule>, &State),
) -> Result<CompAnswer, EvalError> {
    let fresh = Fresh::for_program(&all_names(r), r.free_names());
    run_from(State::Delim(r.clone(), Vec::new()), fresh, fuel, observe)
}

pub fn run(r: &Rc<CompResponse>, fuel: u64) -> Result<CompAnswer, EvalError> {
    run_observed(r, fuel, |_, _| {})
}

pub fn eval(m: &Rc<CompTerm>, fuel: u64) -> Result<CompAnswer, EvalError> {
    let fresh = Fresh::for_program(&all_names_term(m), m.free_names());
    run_from(State::Refocus(m.clone(), nop(), Vec::new()), fresh, fuel, |_, _| {})
}

pub fn try_option(o: &Rc<CompOption>, fuel: u64) -> Result<CompAnswer, EvalError> {
    let fresh = Fresh::for_program(&all_names_option(o), o.free_names());
    run_from(State::Comatch(o.clone(), CompTerm::raise(), nop(), Vec::new()), fresh, fuel, |_, _| {})
}

fn meta(s: &[Rc<CompTerm>]) -> String {
    let inner: Vec<Rc<CompTerm>> = s.iter().rev().cloned().collect();
    meta_string(&inner)
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            State::Delim(r, s) => write!(f, "⟨{} ∣ {}⟩", pretty::comp_response(r), meta(s)),
            State::Refocus(m, k, s) => write!(
                f,
                "⟨{} ∣ {} ∣ {}⟩",
                pretty::comp_term(m),
                pretty::comp_question(k),
                meta(s)
            ),
            State::Comatch(o, m, k, s) => write!(
                f,
                "⟨{} ∣ {} ∣ {} ∣ {}⟩",
                pretty::comp_option(o),
                pretty::comp_term(m),
                pretty::comp_question(k),
                meta(s)
            ),
        }
    }
}
