//! Small-step reduction where redexes carry the environment of their
//! delayed substitutions.

use std::rc::Rc;

use super::{EnvMonoAnswer, MonoClosQuestion, MonoClosure, MonoEnv};
use crate::error::{EvalError, Fuel};
use crate::mono::small_step::{comatch, Remainder};
use crate::syntax::{Copattern, Env, MonoOption, MonoTerm, Name, Spine};

#[derive(Clone, Debug)]
pub enum Redex {
    Introspect(Rc<MonoTerm>, MonoEnv),
    Respond(Rc<[MonoOption]>, MonoEnv),
    FreeVar(Name, MonoEnv),
}

#[derive(Clone, Debug)]
pub enum Reduct {
    Reduced(MonoClosure),
    Unhandled,
    Unknown(Name),
}

#[derive(Clone, Debug)]
pub enum Followup {
    Next(Reduct, MonoClosQuestion),
    More(Copattern, MonoClosure, Rc<[MonoOption]>, MonoEnv, MonoClosQuestion),
}

/// Extends `env` with a match prefix, earliest binding first.
pub(crate) fn extend_all(env: &MonoEnv, prefix: Vec<(Name, MonoClosure)>) -> MonoEnv {
    prefix.into_iter().fold(env.clone(), |env, (x, c)| env.extend(x, c))
}

pub fn reduce(r: &Redex, q: &MonoClosQuestion) -> Followup {
    match r {
        Redex::Introspect(m, env) => {
            Followup::Next(Reduct::Reduced(MonoClosure::new(MonoTerm::app(m.clone(), m.clone()), env.clone())), q.clone())
        }
        Redex::FreeVar(x, env) => match env.lookup(x) {
            Some(c) => Followup::Next(Reduct::Reduced(c.clone()), q.clone()),
            None => Followup::Next(Reduct::Unknown(x.clone()), q.clone()),
        },
        Redex::Respond(os, env) => {
            for (i, o) in os.iter().enumerate() {
                let m = comatch(&o.lhs, q);
                match m.suffix {
                    Remainder::Followup(k) => {
                        let rhs = MonoClosure::new(o.rhs.clone(), extend_all(env, m.prefix));
                        return Followup::Next(Reduct::Reduced(rhs), k);
                    }
                    Remainder::Unasked(lhs) => {
                        let rhs = MonoClosure::new(o.rhs.clone(), extend_all(env, m.prefix));
                        return Followup::More(lhs, rhs, os[i + 1..].into(), env.clone(), q.clone());
                    }
                    Remainder::Mismatch(..) => {}
                }
            }
            Followup::Next(Reduct::Unhandled, q.clone())
        }
    }
}

pub fn refocus(c: &MonoClosure, k: &MonoClosQuestion) -> (Redex, MonoClosQuestion) {
    let env = &c.env;
    let mut m = c.term.clone();
    let mut k = k.clone();
    loop {
        let next = match &*m {
            MonoTerm::Var(x) => return (Redex::FreeVar(x.clone(), env.clone()), k),
            MonoTerm::Dot(n) => return (Redex::Introspect(n.clone(), env.clone()), k),
            MonoTerm::Obj(os) => return (Redex::Respond(os.clone(), env.clone()), k),
            MonoTerm::App(f, n) => {
                k = Spine::arg(MonoClosure::new(n.clone(), env.clone()), k);
                f.clone()
            }
            MonoTerm::Idx(f, i) => {
                k = Spine::idx(i.clone(), k);
                f.clone()
            }
        };
        m = next;
    }
}

pub fn decomp(c: &MonoClosure) -> (Redex, MonoClosQuestion) {
    refocus(c, &Spine::nop())
}

/// Every call to `reduce` costs one unit of fuel.
pub fn eval(m: &Rc<MonoTerm>, fuel: u64) -> Result<EnvMonoAnswer, EvalError> {
    let mut fuel = Fuel::new(fuel);
    let (mut r, mut q) = decomp(&MonoClosure::new(m.clone(), Env::empty()));
    loop {
        fuel.tick()?;
        match reduce(&r, &q) {
            Followup::Next(Reduct::Reduced(c), k) => (r, q) = refocus(&c, &k),
            Followup::Next(Reduct::Unknown(x), k) => return Ok(EnvMonoAnswer::Stuck(x, k)),
            Followup::Next(Reduct::Unhandled, k) => return Ok(EnvMonoAnswer::Raise(k)),
            Followup::More(lhs, rhs, options, env, question) => {
                return Ok(EnvMonoAnswer::Under { lhs, rhs, options, env, question })
            }
        }
    }
}
