//! Decompose, reduce, recompose, repeat.

use std::rc::Rc;

use super::{MonoAnswer, TermQuestion};
use crate::error::{EvalError, Fuel};
use crate::syntax::mono::{all_names, subst};
use crate::syntax::{ask, Copattern, Frame, Fresh, MonoOption, MonoTerm, Name, Question, Spine};

#[derive(Clone, Debug, PartialEq)]
pub enum Redex {
    Introspect(Rc<MonoTerm>),
    Respond(Rc<[MonoOption]>),
    FreeVar(Name),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Reduct {
    Reduced(Rc<MonoTerm>),
    Unhandled,
    Unknown(Name),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Followup {
    Next(Reduct, TermQuestion),
    /// Matching needs more context: remaining copattern, partially
    /// substituted right-hand side, untried options, original question.
    More(Copattern, Rc<MonoTerm>, Rc<[MonoOption]>, TermQuestion),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoMatch<P> {
    pub prefix: Vec<(Name, P)>,
    pub suffix: Remainder<P>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Remainder<P> {
    Followup(Question<P>),
    Unasked(Copattern),
    Mismatch(Copattern, Question<P>),
}

/// Matches a copattern against a question, binding argument slots in
/// order.  Generic in the payload so closures can be matched too.
pub fn comatch<P: Clone>(lhs: &Copattern, q: &Question<P>) -> CoMatch<P> {
    let mut prefix = Vec::new();
    let mut lhs = lhs.clone();
    let mut q = q.clone();
    loop {
        let (next_lhs, next_q) = match (lhs.uncons(), q.uncons()) {
            (None, _) => return CoMatch { prefix, suffix: Remainder::Followup(q) },
            (Some(_), None) => return CoMatch { prefix, suffix: Remainder::Unasked(lhs) },
            (Some((Frame::Arg(x), l)), Some((Frame::Arg(y), k))) => {
                prefix.push((x.clone(), y.clone()));
                (l.clone(), k.clone())
            }
            (Some((Frame::Idx(i), l)), Some((Frame::Idx(j), k))) if i == j => (l.clone(), k.clone()),
            _ => return CoMatch { prefix, suffix: Remainder::Mismatch(lhs, q) },
        };
        lhs = next_lhs;
        q = next_q;
    }
}

pub fn reduce(r: &Redex, q: &TermQuestion, fresh: &mut Fresh) -> Followup {
    match r {
        Redex::Introspect(m) => Followup::Next(Reduct::Reduced(MonoTerm::app(m.clone(), m.clone())), q.clone()),
        Redex::FreeVar(x) => Followup::Next(Reduct::Unknown(x.clone()), q.clone()),
        Redex::Respond(os) => {
            for (i, o) in os.iter().enumerate() {
                let m = comatch(&o.lhs, q);
                match m.suffix {
                    Remainder::Followup(k) => {
                        return Followup::Next(Reduct::Reduced(subst(&o.rhs, &m.prefix, fresh)), k)
                    }
                    Remainder::Unasked(lhs) => {
                        let rest: Rc<[MonoOption]> = os[i + 1..].into();
                        return Followup::More(lhs, subst(&o.rhs, &m.prefix, fresh), rest, q.clone());
                    }
                    Remainder::Mismatch(..) => {}
                }
            }
            Followup::Next(Reduct::Unhandled, q.clone())
        }
    }
}

/// Direct-style search for the next redex.
pub fn search(m: &Rc<MonoTerm>) -> (Redex, TermQuestion) {
    match &**m {
        MonoTerm::Var(x) => (Redex::FreeVar(x.clone()), Spine::nop()),
        MonoTerm::Dot(n) => (Redex::Introspect(n.clone()), Spine::nop()),
        MonoTerm::Obj(os) => (Redex::Respond(os.clone()), Spine::nop()),
        MonoTerm::App(f, n) => {
            let (r, q) = search(f);
            (r, q.snoc(Frame::Arg(n.clone())))
        }
        MonoTerm::Idx(f, i) => {
            let (r, q) = search(f);
            (r, q.snoc(Frame::Idx(i.clone())))
        }
    }
}

/// Tail-recursive decomposition with an accumulated question.
pub fn refocus(m: &Rc<MonoTerm>, k: &TermQuestion) -> (Redex, TermQuestion) {
    let mut m = m.clone();
    let mut k = k.clone();
    loop {
        let next = match &*m {
            MonoTerm::Var(x) => return (Redex::FreeVar(x.clone()), k),
            MonoTerm::Dot(n) => return (Redex::Introspect(n.clone()), k),
            MonoTerm::Obj(os) => return (Redex::Respond(os.clone()), k),
            MonoTerm::App(f, n) => {
                k = Spine::arg(n.clone(), k);
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

pub fn decomp(m: &Rc<MonoTerm>) -> (Redex, TermQuestion) {
    refocus(m, &Spine::nop())
}

pub fn recomp(m: &Rc<MonoTerm>, k: &TermQuestion) -> Rc<MonoTerm> {
    ask(m.clone(), k)
}

/// Runs the small-step loop; every call to `reduce` costs one unit of fuel.
/// The next redex is found with `refocus(m, k)` rather than
/// `decomp(recomp(m, k))`: the two agree, and rebuilding the whole term
/// makes long-running programs quadratic in their question length.
pub fn eval(m: &Rc<MonoTerm>, fuel: u64) -> Result<MonoAnswer, EvalError> {
    let mut fuel = Fuel::new(fuel);
    let mut fresh = Fresh::for_program(&all_names(m), m.free_names());
    let (mut r, mut q) = decomp(m);
    loop {
        fuel.tick()?;
        match reduce(&r, &q, &mut fresh) {
            Followup::Next(Reduct::Reduced(m), k) => (r, q) = refocus(&m, &k),
            Followup::Next(Reduct::Unknown(x), k) => return Ok(MonoAnswer::Stuck(x, k)),
            Followup::Next(Reduct::Unhandled, k) => return Ok(MonoAnswer::Raise(k)),
            Followup::More(lhs, rhs, options, question) => {
                return Ok(MonoAnswer::Under { lhs, rhs, options, question })
            }
        }
    }
}
