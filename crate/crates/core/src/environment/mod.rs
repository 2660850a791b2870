//! Environment-based artifacts.  Substitutions are delayed: a closure
//! pairs an open term with the bindings for its free variables, and
//! binders extend an environment instead of rewriting syntax.
//!
//! Forcing every delayed substitution ([`flush_mono`], [`flush_comp`])
//! maps each artifact back onto its substitution-based counterpart.

use std::collections::HashSet;
use std::fmt;
use std::rc::Rc;

use crate::canonical::{skeleton, CanonicalComp, CanonicalMono};
use crate::comp::reify;
use crate::frontend::pretty;
use crate::syntax::comp::{subst_option, subst_response, subst_term};
use crate::syntax::mono::subst;
use crate::syntax::{
    CompOption, CompResponse, CompTerm, Copattern, Env, Fresh, MonoOption, MonoTerm, Name, Question, SubstEntry,
};

pub mod comp_cps;
pub mod comp_machine;
pub mod mono_cps;
pub mod mono_machine;
pub mod mono_small_step;

/// `M⟨σ⟩` for the monolithic calculus.
#[derive(Clone, Debug)]
pub struct MonoClosure {
    pub term: Rc<MonoTerm>,
    pub env: Env<MonoClosure>,
}

pub type MonoEnv = Env<MonoClosure>;
pub type MonoClosQuestion = Question<MonoClosure>;

impl MonoClosure {
    pub fn new(term: Rc<MonoTerm>, env: MonoEnv) -> Self {
        MonoClosure { term, env }
    }
}

/// `M⟨σ⟩` for the compositional calculus.
#[derive(Clone, Debug)]
pub struct CompClosure {
    pub term: Rc<CompTerm>,
    pub env: CompEnv,
}

impl CompClosure {
    pub fn new(term: Rc<CompTerm>, env: CompEnv) -> Self {
        CompClosure { term, env }
    }
}

/// Variables are bound to closures, covariables to questions.
#[derive(Clone, Debug)]
pub enum ClosEntry {
    CSub(CompClosure),
    QSub(CompClosQuestion),
}

pub type CompEnv = Env<ClosEntry>;
pub type CompClosQuestion = Question<CompClosure>;

#[derive(Clone, Debug)]
pub enum EnvMonoAnswer {
    Under {
        lhs: Copattern,
        rhs: MonoClosure,
        options: Rc<[MonoOption]>,
        env: MonoEnv,
        question: MonoClosQuestion,
    },
    Raise(MonoClosQuestion),
    Stuck(Name, MonoClosQuestion),
}

impl EnvMonoAnswer {
    pub fn canonical(&self) -> CanonicalMono {
        match self {
            EnvMonoAnswer::Under { .. } => CanonicalMono::Under,
            EnvMonoAnswer::Raise(q) => CanonicalMono::Raise(skeleton(q)),
            EnvMonoAnswer::Stuck(x, q) => CanonicalMono::Stuck(x.clone(), skeleton(q)),
        }
    }
}

/// Pending handlers are reported innermost first.
#[derive(Clone, Debug)]
pub enum EnvCompAnswer {
    Final(CompClosQuestion),
    Stuck(Vec<CompClosure>, Name, CompClosQuestion),
    CoStuck(Vec<CompClosure>, Name),
}

impl EnvCompAnswer {
    pub fn canonical(&self) -> CanonicalComp {
        match self {
            EnvCompAnswer::Final(q) => CanonicalComp::Final(skeleton(q)),
            EnvCompAnswer::Stuck(s, x, q) => CanonicalComp::Stuck(s.len(), x.clone(), skeleton(q)),
            EnvCompAnswer::CoStuck(s, k) => CanonicalComp::CoStuck(s.len(), k.clone()),
        }
    }
}

/// Visible bindings of an environment (shadowed entries dropped), newest
/// first, restricted to `wanted`.
fn visible<'a, T>(env: &'a Env<T>, wanted: &HashSet<Name>) -> Vec<(&'a Name, &'a T)> {
    let mut seen = HashSet::new();
    env.iter()
        .filter(|(x, _)| wanted.contains(*x) && seen.insert((*x).clone()))
        .collect()
}

/// Performs every delayed substitution of a closure.
pub fn flush_mono(c: &MonoClosure, fresh: &mut Fresh) -> Rc<MonoTerm> {
    flush_mono_in(&c.term, &c.env, fresh)
}

pub fn flush_mono_in(m: &Rc<MonoTerm>, env: &MonoEnv, fresh: &mut Fresh) -> Rc<MonoTerm> {
    let bindings: Vec<(Name, Rc<MonoTerm>)> = visible(env, &m.free_names())
        .into_iter()
        .map(|(x, c)| (x.clone(), flush_mono(c, fresh)))
        .collect();
    subst(m, &bindings, fresh)
}

pub fn flush_mono_question(q: &MonoClosQuestion, fresh: &mut Fresh) -> Question<Rc<MonoTerm>> {
    q.map(|c| flush_mono(c, fresh))
}

fn comp_bindings(env: &CompEnv, free: &HashSet<Name>, fresh: &mut Fresh) -> Vec<(Name, SubstEntry)> {
    visible(env, free)
        .into_iter()
        .map(|(x, e)| {
            let entry = match e {
                ClosEntry::CSub(c) => SubstEntry::Term(flush_comp(c, fresh)),
                ClosEntry::QSub(q) => SubstEntry::Response(reify(&flush_comp_question(q, fresh))),
            };
            (x.clone(), entry)
        })
        .collect()
}

pub fn flush_comp(c: &CompClosure, fresh: &mut Fresh) -> Rc<CompTerm> {
    flush_comp_in(&c.term, &c.env, fresh)
}

// Closures are built by the machines from resolved programs, so every
// binding has the kind its uses expect and substitution cannot fail.
pub fn flush_comp_in(m: &Rc<CompTerm>, env: &CompEnv, fresh: &mut Fresh) -> Rc<CompTerm> {
    let bindings = comp_bindings(env, &m.free_names(), fresh);
    subst_term(m, &bindings, fresh).expect("closure bindings are well-kinded")
}

pub fn flush_comp_option(o: &Rc<CompOption>, env: &CompEnv, fresh: &mut Fresh) -> Rc<CompOption> {
    let bindings = comp_bindings(env, &o.free_names(), fresh);
    subst_option(o, &bindings, fresh).expect("closure bindings are well-kinded")
}

pub fn flush_comp_response(r: &Rc<CompResponse>, env: &CompEnv, fresh: &mut Fresh) -> Rc<CompResponse> {
    let bindings = comp_bindings(env, &r.free_names(), fresh);
    subst_response(r, &bindings, fresh).expect("closure bindings are well-kinded")
}

pub fn flush_comp_question(q: &CompClosQuestion, fresh: &mut Fresh) -> Question<Rc<CompTerm>> {
    q.map(|c| flush_comp(c, fresh))
}

// Trace notation.  Environments list their visible bindings; the
// environments of closures nested inside them are elided as `⟨…⟩`.

fn env_domain<T>(env: &Env<T>) -> Vec<(&Name, &T)> {
    let mut seen = HashSet::new();
    env.iter().filter(|(x, _)| seen.insert((*x).clone())).collect()
}

fn nested<T>(term: String, env: &Env<T>) -> String {
    if env.is_empty() {
        term
    } else {
        format!("{term}⟨…⟩")
    }
}

impl fmt::Display for MonoClosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&nested(pretty::mono_arg(&self.term), &self.env))
    }
}

impl fmt::Display for CompClosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&nested(pretty::comp_arg(&self.term), &self.env))
    }
}

pub fn mono_env_string(env: &MonoEnv) -> String {
    let parts: Vec<String> = env_domain(env).into_iter().map(|(x, c)| format!("{x} ↦ {c}")).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn comp_env_string(env: &CompEnv) -> String {
    let parts: Vec<String> = env_domain(env)
        .into_iter()
        .map(|(x, e)| match e {
            ClosEntry::CSub(c) => format!("{x} ↦ {c}"),
            ClosEntry::QSub(q) => format!("{x} ↦ {}", pretty::question(q, |c| c.to_string())),
        })
        .collect();
    format!("{{{}}}", parts.join(", "))
}
