//! Delimited small-step interpreter: split a response into pending
//! handlers and a redex, contract it, plug the result back, repeat.

use std::rc::Rc;

use super::{reify, CompAnswer, TermQuestion};
use crate::error::{EvalError, Fuel};
use crate::syntax::comp::{all_names, subst_option, subst_response, subst_term};
use crate::syntax::{ask, CompOption, CompResponse, CompTerm, Frame, Fresh, Name, Spine, SubstEntry};

#[derive(Clone, Debug, PartialEq)]
pub enum CoFrame {
    Arg(Name),
    At(Name),
}

/// An option waiting for one more frame, with its fallback.
#[derive(Clone, Debug, PartialEq)]
pub struct CoObject {
    pub coframe: CoFrame,
    pub success: Rc<CompOption>,
    pub failure: Rc<CompTerm>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RxTerm {
    FreeVar(Name),
    Introspect(Rc<CompTerm>),
    /// `(?x -> N) ? M`
    Try(Name, Rc<CompTerm>, Rc<CompTerm>),
    Pop(CoObject, Rc<CompTerm>),
    Get(CoObject, Name),
}

#[derive(Clone, Debug, PartialEq)]
pub enum RdTerm {
    RdT(Rc<CompTerm>),
    UnknownA(Name),
}

#[derive(Clone, Debug, PartialEq)]
pub enum RxResponse {
    FreeCoVar(Name),
    /// A question raised to handler `M`.
    Reset(Rc<CompTerm>, TermQuestion),
    /// `K[capture k -> R] ! end`
    Shift(Name, Rc<CompResponse>, TermQuestion),
    /// An option that reached the end of its question.
    UnderCo(CoObject),
}

#[derive(Clone, Debug, PartialEq)]
pub enum RdResponse {
    RdR(Rc<CompResponse>),
    UnknownQ(Name),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decomp {
    Internal(RxTerm, TermQuestion),
    External(RxResponse),
    Raised(TermQuestion),
}

/// Pending handlers are kept innermost last.
#[derive(Clone, Debug, PartialEq)]
pub enum Delimit {
    Around(RxTerm, TermQuestion, Vec<Rc<CompTerm>>),
    Caught(RxResponse, Vec<Rc<CompTerm>>),
    Uncaught(TermQuestion),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Consider {
    Inward(Name, Rc<CompTerm>, Rc<CompTerm>),
    Outward(CoObject),
}

pub fn reduce(rx: &RxTerm, fresh: &mut Fresh) -> Result<RdTerm, EvalError> {
    Ok(match rx {
        RxTerm::Introspect(m) => RdTerm::RdT(CompTerm::app(m.clone(), m.clone())),
        RxTerm::Try(x, n, m) => RdTerm::RdT(subst_term(n, &[(x.clone(), SubstEntry::Term(m.clone()))], fresh)?),
        RxTerm::Pop(CoObject { coframe: CoFrame::Arg(x), success, failure }, n) => {
            let o = subst_option(success, &[(x.clone(), SubstEntry::Term(n.clone()))], fresh)?;
            RdTerm::RdT(CompTerm::handle(o, CompTerm::app(failure.clone(), n.clone())))
        }
        RxTerm::Pop(co, n) => RdTerm::RdT(CompTerm::app(co.failure.clone(), n.clone())),
        RxTerm::Get(CoObject { coframe: CoFrame::At(i), success, failure }, j) if i == j => {
            RdTerm::RdT(CompTerm::handle(success.clone(), CompTerm::idx(failure.clone(), i.clone())))
        }
        RxTerm::Get(co, j) => RdTerm::RdT(CompTerm::idx(co.failure.clone(), j.clone())),
        RxTerm::FreeVar(x) => RdTerm::UnknownA(x.clone()),
    })
}

pub fn handle(rx: &RxResponse, fresh: &mut Fresh) -> Result<RdResponse, EvalError> {
    Ok(match rx {
        RxResponse::FreeCoVar(k) => RdResponse::UnknownQ(k.clone()),
        RxResponse::Reset(m, q) => RdResponse::RdR(CompResponse::and_then(ask(m.clone(), q), CompResponse::end())),
        RxResponse::Shift(k, r, q) => {
            RdResponse::RdR(subst_response(r, &[(k.clone(), SubstEntry::Response(reify(q)))], fresh)?)
        }
        RxResponse::UnderCo(co) => RdResponse::RdR(CompResponse::and_then(co.failure.clone(), CompResponse::end())),
    })
}

pub fn consider(o: &Rc<CompOption>, m: &Rc<CompTerm>) -> Consider {
    match &**o {
        CompOption::Done(x, n) => Consider::Inward(x.clone(), n.clone(), m.clone()),
        CompOption::PopArg(x, rest) => Consider::Outward(CoObject {
            coframe: CoFrame::Arg(x.clone()),
            success: rest.clone(),
            failure: m.clone(),
        }),
        CompOption::GetIdx(i, rest) => Consider::Outward(CoObject {
            coframe: CoFrame::At(i.clone()),
            success: rest.clone(),
            failure: m.clone(),
        }),
    }
}

fn decide(c: Consider, k: TermQuestion) -> Decomp {
    match c {
        Consider::Inward(x, n, m) => Decomp::Internal(RxTerm::Try(x, n, m), k),
        Consider::Outward(co) => match k.uncons() {
            Some((Frame::Arg(n), rest)) => Decomp::Internal(RxTerm::Pop(co, n.clone()), rest.clone()),
            Some((Frame::Idx(j), rest)) => Decomp::Internal(RxTerm::Get(co, j.clone()), rest.clone()),
            None => Decomp::External(RxResponse::UnderCo(co)),
        },
    }
}

pub fn refocus(m: &Rc<CompTerm>, k: &TermQuestion) -> Decomp {
    let mut m = m.clone();
    let mut k = k.clone();
    loop {
        let next = match &*m {
            CompTerm::App(f, n) => {
                k = Spine::arg(n.clone(), k);
                f.clone()
            }
            CompTerm::Idx(f, i) => {
                k = Spine::idx(i.clone(), k);
                f.clone()
            }
            CompTerm::Handle(o, f) => return decide(consider(o, f), k),
            CompTerm::Dot(f) => return Decomp::Internal(RxTerm::Introspect(f.clone()), k),
            CompTerm::Capture(q, r) => return Decomp::External(RxResponse::Shift(q.clone(), r.clone(), k)),
            CompTerm::Raise => return Decomp::Raised(k),
            CompTerm::Var(x) => return Decomp::Internal(RxTerm::FreeVar(x.clone()), k),
        };
        m = next;
    }
}

pub fn decomp(m: &Rc<CompTerm>) -> Decomp {
    refocus(m, &Spine::nop())
}

fn catch(d: Decomp, mut s: Vec<Rc<CompTerm>>) -> Delimit {
    match d {
        Decomp::Internal(rx, q) => Delimit::Around(rx, q, s),
        Decomp::External(rx) => Delimit::Caught(rx, s),
        Decomp::Raised(q) => match s.pop() {
            Some(m) => Delimit::Caught(RxResponse::Reset(m, q), s),
            None => Delimit::Uncaught(q),
        },
    }
}

pub fn delimit(r: &Rc<CompResponse>) -> Delimit {
    delimit_within(r.clone(), Vec::new())
}

/// `delimit(unwind(s, r))` without rebuilding the response.
pub fn delimit_within(mut r: Rc<CompResponse>, mut s: Vec<Rc<CompTerm>>) -> Delimit {
    loop {
        let next = match &*r {
            CompResponse::AndThen(m, rest) => {
                s.push(m.clone());
                rest.clone()
            }
            CompResponse::End => {
                return match s.pop() {
                    Some(m) => catch(decomp(&m), s),
                    None => Delimit::Uncaught(Spine::nop()),
                }
            }
            CompResponse::Splat(k) => return Delimit::Caught(RxResponse::FreeCoVar(k.clone()), s),
        };
        r = next;
    }
}

/// Re-wraps a response in every pending handler, innermost first.
pub fn unwind(s: &[Rc<CompTerm>], r: Rc<CompResponse>) -> Rc<CompResponse> {
    s.iter().rev().fold(r, |r, m| CompResponse::and_then(m.clone(), r))
}

fn innermost_first(mut s: Vec<Rc<CompTerm>>) -> Vec<Rc<CompTerm>> {
    s.reverse();
    s
}

/// Each call to `reduce` or `handle` costs one unit of fuel.  Instead of
/// unwinding the pending handlers and delimiting the rebuilt response, the
/// loop continues from the pieces: `delimit(unwind(s, ask(m, q) ! end))` is
/// `catch(refocus(m, q), s)`, and `delimit(unwind(s, r))` is
/// `delimit_within(r, s)`.
pub fn run(r: &Rc<CompResponse>, fuel: u64) -> Result<CompAnswer, EvalError> {
    let mut fuel = Fuel::new(fuel);
    let mut fresh = Fresh::for_program(&all_names(r), r.free_names());
    let mut d = delimit(r);
    loop {
        d = match d {
            Delimit::Around(rx, q, s) => {
                fuel.tick()?;
                match reduce(&rx, &mut fresh)? {
                    RdTerm::UnknownA(x) => return Ok(CompAnswer::Stuck(innermost_first(s), x, q)),
                    RdTerm::RdT(m) => catch(refocus(&m, &q), s),
                }
            }
            Delimit::Caught(rx, s) => {
                fuel.tick()?;
                match handle(&rx, &mut fresh)? {
                    RdResponse::UnknownQ(k) => return Ok(CompAnswer::CoStuck(innermost_first(s), k)),
                    RdResponse::RdR(r) => delimit_within(r, s),
                }
            }
            Delimit::Uncaught(q) => return Ok(CompAnswer::Final(q)),
        };
    }
}

pub fn eval(m: &Rc<CompTerm>, fuel: u64) -> Result<CompAnswer, EvalError> {
    run(&CompResponse::and_then(m.clone(), CompResponse::end()), fuel)
}

pub fn try_option(o: &Rc<CompOption>, fuel: u64) -> Result<CompAnswer, EvalError> {
    eval(&CompTerm::handle(o.clone(), CompTerm::raise()), fuel)
}
