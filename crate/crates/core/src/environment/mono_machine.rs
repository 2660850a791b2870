//! Environment machine for monolithic copatterns.  Matching accumulates
//! bindings in a local environment that only becomes the body's
//! environment once the whole copattern has matched.

use std::fmt;
use std::rc::Rc;

use super::{flush_mono_in, flush_mono_question, mono_env_string, EnvMonoAnswer, MonoClosQuestion, MonoClosure, MonoEnv};
use crate::error::{EvalError, Fuel};
use crate::frontend::pretty;
use crate::mono::machine as subst_machine;
use crate::syntax::{Copattern, Env, Frame, Fresh, MonoOption, MonoTerm, Spine};

#[derive(Clone, Debug)]
pub enum State {
    /// `⟨M ∣ σ ∣ K⟩`
    Eval(Rc<MonoTerm>, MonoEnv, MonoClosQuestion),
    /// `⟨L ∣ K' ∣ σ ∣ M ∣ O… ∣ σ₀ ∣ K⟩`
    Match {
        lhs: Copattern,
        rest: MonoClosQuestion,
        local: MonoEnv,
        rhs: Rc<MonoTerm>,
        options: Rc<[MonoOption]>,
        env: MonoEnv,
        saved: MonoClosQuestion,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// `⟨x ∣ σ ∣ K⟩ ↦ ⟨M ∣ σ' ∣ K⟩` for `x ↦ M⟨σ'⟩ ∈ σ`
    Lookup,
    PushArg,
    PushIdx,
    Duplicate,
    Enter,
    Bind,
    Project,
    Commit,
    Revert,
}

pub enum Step {
    Next(Rule, State),
    Halt(EnvMonoAnswer),
}

pub fn initial(m: &Rc<MonoTerm>) -> State {
    State::Eval(m.clone(), Env::empty(), Spine::nop())
}

pub fn step(s: State) -> Step {
    match s {
        State::Eval(m, env, k) => match &*m {
            MonoTerm::Var(x) => match env.lookup(x) {
                Some(c) => Step::Next(Rule::Lookup, State::Eval(c.term.clone(), c.env.clone(), k)),
                None => Step::Halt(EnvMonoAnswer::Stuck(x.clone(), k)),
            },
            MonoTerm::App(f, n) => {
                let k = Spine::arg(MonoClosure::new(n.clone(), env.clone()), k);
                Step::Next(Rule::PushArg, State::Eval(f.clone(), env, k))
            }
            MonoTerm::Idx(f, i) => Step::Next(Rule::PushIdx, State::Eval(f.clone(), env, Spine::idx(i.clone(), k))),
            MonoTerm::Dot(f) => {
                let k = Spine::arg(MonoClosure::new(f.clone(), env.clone()), k);
                Step::Next(Rule::Duplicate, State::Eval(f.clone(), env, k))
            }
            MonoTerm::Obj(os) => match os.first() {
                None => Step::Halt(EnvMonoAnswer::Raise(k)),
                Some(o) => Step::Next(
                    Rule::Enter,
                    State::Match {
                        lhs: o.lhs.clone(),
                        rest: k.clone(),
                        local: env.clone(),
                        rhs: o.rhs.clone(),
                        options: os[1..].into(),
                        env,
                        saved: k,
                    },
                ),
            },
        },
        State::Match { lhs, rest, local, rhs, options, env, saved } => {
            let (l, k) = match (lhs.uncons(), rest.uncons()) {
                (None, _) => return Step::Next(Rule::Commit, State::Eval(rhs, local, rest)),
                (Some(_), None) => {
                    let rhs = MonoClosure::new(rhs, local);
                    return Step::Halt(EnvMonoAnswer::Under { lhs, rhs, options, env, question: saved });
                }
                (Some(l), Some(k)) => (l, k),
            };
            match (l, k) {
                ((Frame::Arg(x), l2), (Frame::Arg(n), k2)) => {
                    let local = local.extend(x.clone(), n.clone());
                    let (lhs, rest) = (l2.clone(), k2.clone());
                    Step::Next(Rule::Bind, State::Match { lhs, rest, local, rhs, options, env, saved })
                }
                ((Frame::Idx(i), l2), (Frame::Idx(j), k2)) if i == j => {
                    let (lhs, rest) = (l2.clone(), k2.clone());
                    Step::Next(Rule::Project, State::Match { lhs, rest, local, rhs, options, env, saved })
                }
                _ => Step::Next(Rule::Revert, State::Eval(Rc::new(MonoTerm::Obj(options)), env, saved)),
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
) -> Result<EnvMonoAnswer, EvalError> {
    let mut fuel = Fuel::new(fuel);
    let mut state = initial(m);
    observe(None, &state);
    loop {
        match step(state) {
            Step::Halt(a) => return Ok(a),
            Step::Next(rule, next) => {
                fuel.tick()?;
                observe(Some(rule), &next);
                state = next;
            }
        }
    }
}

pub fn run(m: &Rc<MonoTerm>, fuel: u64) -> Result<EnvMonoAnswer, EvalError> {
    run_observed(m, fuel, |_, _| {})
}

/// The substitution-machine state obtained by performing every delayed
/// substitution.
pub fn flush(s: &State, fresh: &mut Fresh) -> subst_machine::State {
    match s {
        State::Eval(m, env, k) => subst_machine::State::Eval(flush_mono_in(m, env, fresh), flush_mono_question(k, fresh)),
        State::Match { lhs, rest, local, rhs, options, env, saved } => {
            let obj = flush_mono_in(&Rc::new(MonoTerm::Obj(options.clone())), env, fresh);
            let options = match &*obj {
                MonoTerm::Obj(os) => os.clone(),
                _ => unreachable!("substitution preserves objects"),
            };
            subst_machine::State::Match {
                lhs: lhs.clone(),
                rest: flush_mono_question(rest, fresh),
                rhs: flush_mono_in(rhs, local, fresh),
                options,
                saved: flush_mono_question(saved, fresh),
            }
        }
    }
}

fn question(q: &MonoClosQuestion) -> String {
    pretty::question(q, |c| c.to_string())
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            State::Eval(m, env, k) => {
                write!(f, "⟨{} ∣ {} ∣ {}⟩", pretty::mono_term(m), mono_env_string(env), question(k))
            }
            State::Match { lhs, rest, local, rhs, options, env, saved } => write!(
                f,
                "⟨{} ∣ {} ∣ {} ∣ {} ∣ {} ∣ {} ∣ {}⟩",
                pretty::copattern(lhs),
                question(rest),
                mono_env_string(local),
                pretty::mono_term(rhs),
                pretty::mono_options(options),
                mono_env_string(env),
                question(saved)
            ),
        }
    }
}
