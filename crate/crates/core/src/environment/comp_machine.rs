//! Environment machine for compositional copatterns with a
//! meta-continuation of handler closures.

use std::fmt;
use std::rc::Rc;

use super::{
    comp_env_string, flush_comp, flush_comp_in, flush_comp_option, flush_comp_question, flush_comp_response, ClosEntry,
    CompClosQuestion, CompClosure, CompEnv, EnvCompAnswer,
};
use crate::comp::machine as subst_machine;
use crate::error::{EvalError, Fuel};
use crate::frontend::pretty;
use crate::syntax::{ask, CompOption, CompResponse, CompTerm, Env, Frame, Fresh, Name, Spine};

/// Reserved names for the failure closure bound by `? x -> N`.  They
/// contain no `#n` suffix, so neither the frontend nor renaming produces
/// them.
const FAIL: &str = "#fail";
const ARG: &str = "#arg";

#[derive(Clone, Debug)]
pub enum State {
    /// `⟨R ∣ σ ∣ S⟩`
    Delim(Rc<CompResponse>, CompEnv, Vec<CompClosure>),
    /// `⟨M ∣ σ ∣ K ∣ S⟩`
    Refocus(Rc<CompTerm>, CompEnv, CompClosQuestion, Vec<CompClosure>),
    /// `⟨O ∣ σ ∣ K ∣ M⟨σ₀⟩ ∣ K₀ ∣ S⟩`
    Comatch {
        option: Rc<CompOption>,
        env: CompEnv,
        rest: CompClosQuestion,
        failure: CompClosure,
        saved: CompClosQuestion,
        meta: Vec<CompClosure>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Delimit,
    Resume,
    /// `⟨q ∣ σ ∣ M⟨σ'⟩; S⟩ ↦ ⟨M ∣ σ' ∣ σ(q) ∣ S⟩`
    Splat,
    Lookup,
    PushArg,
    PushIdx,
    Duplicate,
    Reraise,
    Capture,
    Handle,
    Pop,
    Get,
    Succeed,
    Fail,
}

pub enum Step {
    Next(Rule, State),
    Halt(EnvCompAnswer),
}

fn innermost_first(mut s: Vec<CompClosure>) -> Vec<CompClosure> {
    s.reverse();
    s
}

/// The failure applied to the frames matched so far: the closure
/// `#fail #arg0 … ` over the saved failure and arguments.
pub fn consumed_failure(failure: &CompClosure, saved: &CompClosQuestion, rest: &CompClosQuestion) -> CompClosure {
    let consumed = saved.len() - rest.len();
    if consumed == 0 {
        return failure.clone();
    }
    let mut env = Env::empty().extend(Name::from(FAIL), ClosEntry::CSub(failure.clone()));
    let mut frames = Vec::with_capacity(consumed);
    for (i, frame) in saved.iter().take(consumed).enumerate() {
        frames.push(match frame {
            Frame::Arg(c) => {
                let x = Name::new(format!("{ARG}{i}"));
                env = env.extend(x.clone(), ClosEntry::CSub(c.clone()));
                Frame::Arg(CompTerm::var(x))
            }
            Frame::Idx(j) => Frame::Idx(j.clone()),
        });
    }
    let term = ask(CompTerm::var(Name::from(FAIL)), &Spine::from_frames(frames));
    CompClosure::new(term, env)
}

pub fn step(state: State) -> Result<Step, EvalError> {
    Ok(match state {
        State::Delim(r, env, mut s) => match &*r {
            CompResponse::Splat(k) => match env.lookup(k) {
                Some(ClosEntry::QSub(q)) => match s.pop() {
                    Some(m) => Step::Next(Rule::Splat, State::Refocus(m.term, m.env, q.clone(), s)),
                    None => Step::Halt(EnvCompAnswer::Final(q.clone())),
                },
                Some(ClosEntry::CSub(_)) => return Err(EvalError::KindMismatch(k.clone())),
                None => Step::Halt(EnvCompAnswer::CoStuck(innermost_first(s), k.clone())),
            },
            CompResponse::End => match s.pop() {
                Some(m) => Step::Next(Rule::Resume, State::Refocus(m.term, m.env, Spine::nop(), s)),
                None => Step::Halt(EnvCompAnswer::Final(Spine::nop())),
            },
            CompResponse::AndThen(m, rest) => {
                s.push(CompClosure::new(m.clone(), env.clone()));
                Step::Next(Rule::Delimit, State::Delim(rest.clone(), env, s))
            }
        },
        State::Refocus(m, env, k, mut s) => match &*m {
            CompTerm::Var(x) => match env.lookup(x) {
                Some(ClosEntry::CSub(c)) => Step::Next(Rule::Lookup, State::Refocus(c.term.clone(), c.env.clone(), k, s)),
                Some(ClosEntry::QSub(_)) => return Err(EvalError::KindMismatch(x.clone())),
                None => Step::Halt(EnvCompAnswer::Stuck(innermost_first(s), x.clone(), k)),
            },
            CompTerm::Dot(f) => {
                let k = Spine::arg(CompClosure::new(f.clone(), env.clone()), k);
                Step::Next(Rule::Duplicate, State::Refocus(f.clone(), env, k, s))
            }
            CompTerm::App(f, n) => {
                let k = Spine::arg(CompClosure::new(n.clone(), env.clone()), k);
                Step::Next(Rule::PushArg, State::Refocus(f.clone(), env, k, s))
            }
            CompTerm::Idx(f, i) => Step::Next(Rule::PushIdx, State::Refocus(f.clone(), env, Spine::idx(i.clone(), k), s)),
            CompTerm::Raise => match s.pop() {
                Some(h) => Step::Next(Rule::Reraise, State::Refocus(h.term, h.env, k, s)),
                None => Step::Halt(EnvCompAnswer::Final(k)),
            },
            CompTerm::Capture(q, r) => {
                let env = env.extend(q.clone(), ClosEntry::QSub(k));
                Step::Next(Rule::Capture, State::Delim(r.clone(), env, s))
            }
            CompTerm::Handle(o, f) => Step::Next(
                Rule::Handle,
                State::Comatch {
                    option: o.clone(),
                    env: env.clone(),
                    rest: k.clone(),
                    failure: CompClosure::new(f.clone(), env),
                    saved: k,
                    meta: s,
                },
            ),
        },
        State::Comatch { option, env, rest, failure, saved, meta } => match (&*option, rest.uncons()) {
            (CompOption::Done(x, n), _) => {
                let bound = consumed_failure(&failure, &saved, &rest);
                let env = env.extend(x.clone(), ClosEntry::CSub(bound));
                Step::Next(Rule::Succeed, State::Refocus(n.clone(), env, rest, meta))
            }
            (CompOption::PopArg(x, o2), Some((Frame::Arg(n), k2))) => Step::Next(
                Rule::Pop,
                State::Comatch {
                    option: o2.clone(),
                    env: env.extend(x.clone(), ClosEntry::CSub(n.clone())),
                    rest: k2.clone(),
                    failure,
                    saved,
                    meta,
                },
            ),
            (CompOption::GetIdx(i, o2), Some((Frame::Idx(j), k2))) if i == j => Step::Next(
                Rule::Get,
                State::Comatch { option: o2.clone(), env, rest: k2.clone(), failure, saved, meta },
            ),
            _ => Step::Next(Rule::Fail, State::Refocus(failure.term, failure.env, saved, meta)),
        },
    })
}

/// Runs the machine from `state`, reporting every state (the initial one
/// included) with the rule that produced it.  Each transition costs one
/// unit of fuel.
pub fn run_from(
    mut state: State,
    fuel: u64,
    mut observe: impl FnMut(Option<Rule>, &State),
) -> Result<EnvCompAnswer, EvalError> {
    let mut fuel = Fuel::new(fuel);
    observe(None, &state);
    loop {
        match step(state)? {
            Step::Halt(a) => return Ok(a),
            Step::Next(rule, next) => {
                fuel.tick()?;
                observe(Some(rule), &next);
                state = next;
            }
        }
    }
}

pub fn initial(r: &Rc<CompResponse>) -> State {
    State::Delim(r.clone(), Env::empty(), Vec::new())
}

pub fn run_observed(
    r: &Rc<CompResponse>,
    fuel: u64,
    observe: impl FnMut(Option<Rule>, &State),
) -> Result<EnvCompAnswer, EvalError> {
    run_from(initial(r), fuel, observe)
}

pub fn run(r: &Rc<CompResponse>, fuel: u64) -> Result<EnvCompAnswer, EvalError> {
    run_observed(r, fuel, |_, _| {})
}

pub fn eval(m: &Rc<CompTerm>, fuel: u64) -> Result<EnvCompAnswer, EvalError> {
    run_from(State::Refocus(m.clone(), Env::empty(), Spine::nop(), Vec::new()), fuel, |_, _| {})
}

pub fn try_option(o: &Rc<CompOption>, fuel: u64) -> Result<EnvCompAnswer, EvalError> {
    let raise = CompClosure::new(CompTerm::raise(), Env::empty());
    let state = State::Comatch {
        option: o.clone(),
        env: Env::empty(),
        rest: Spine::nop(),
        failure: raise,
        saved: Spine::nop(),
        meta: Vec::new(),
    };
    run_from(state, fuel, |_, _| {})
}

fn flush_meta(s: &[CompClosure], fresh: &mut Fresh) -> Vec<Rc<CompTerm>> {
    s.iter().map(|c| flush_comp(c, fresh)).collect()
}

/// The substitution-machine state obtained by performing every delayed
/// substitution.
pub fn flush(state: &State, fresh: &mut Fresh) -> subst_machine::State {
    match state {
        State::Delim(r, env, s) => subst_machine::State::Delim(flush_comp_response(r, env, fresh), flush_meta(s, fresh)),
        State::Refocus(m, env, k, s) => {
            subst_machine::State::Refocus(flush_comp_in(m, env, fresh), flush_comp_question(k, fresh), flush_meta(s, fresh))
        }
        State::Comatch { option, env, rest, failure, saved, meta } => subst_machine::State::Comatch(
            flush_comp_option(option, env, fresh),
            flush_comp(&consumed_failure(failure, saved, rest), fresh),
            flush_comp_question(rest, fresh),
            flush_meta(meta, fresh),
        ),
    }
}

fn question(q: &CompClosQuestion) -> String {
    pretty::question(q, |c| c.to_string())
}

fn meta_string(s: &[CompClosure]) -> String {
    if s.is_empty() {
        return "ε".into();
    }
    let parts: Vec<String> = s.iter().rev().map(|c| c.to_string()).collect();
    parts.join("; ")
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            State::Delim(r, env, s) => {
                write!(f, "⟨{} ∣ {} ∣ {}⟩", pretty::comp_response(r), comp_env_string(env), meta_string(s))
            }
            State::Refocus(m, env, k, s) => write!(
                f,
                "⟨{} ∣ {} ∣ {} ∣ {}⟩",
                pretty::comp_term(m),
                comp_env_string(env),
                question(k),
                meta_string(s)
            ),
            State::Comatch { option, env, rest, failure, saved, meta } => write!(
                f,
                "⟨{} ∣ {} ∣ {} ∣ {} ∣ {} ∣ {}⟩",
                pretty::comp_option(option),
                comp_env_string(env),
                question(rest),
                failure,
                question(saved),
                meta_string(meta)
            ),
        }
    }
}
