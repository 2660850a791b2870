//! CPS translation of the compositional calculus into host closures.
//!
//! Responses run in a second continuation layer: `M ! R` runs `R` first
//! and hands its raised question to `M`.  The driver keeps that layer as an
//! explicit stack of pending handlers, which also gives `Stuck` and
//! `CoStuck` their meta-continuations.

use std::fmt;
use std::rc::Rc;

use crate::canonical::{skeleton, CanonicalComp};
use crate::error::{EvalError, Fuel};
use crate::syntax::comp::{all_names, all_names_option, all_names_term, subst_option, subst_response, subst_term};
use crate::syntax::{
    CompOption, CompResponse, CompTerm, Frame, Fresh, Name, Question, Spine, SubstEntry, Variable,
};

pub type SemQuestion = Question<SemTerm>;

pub struct Ctx {
    pub(crate) fresh: Fresh,
}

impl Ctx {
    pub fn new(fresh: Fresh) -> Self {
        Ctx { fresh }
    }
}

type SemFn = dyn Fn(SemQuestion, &mut Ctx) -> Result<Bounce, EvalError>;

#[derive(Clone)]
pub struct SemTerm(Rc<SemFn>);

impl SemTerm {
    pub fn new(f: impl Fn(SemQuestion, &mut Ctx) -> Result<Bounce, EvalError> + 'static) -> Self {
        SemTerm(Rc::new(f))
    }
}

impl fmt::Debug for SemTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<sem>")
    }
}

/// Source names, or denotations substituted for term variables and
/// covariables.
#[derive(Clone, Debug)]
pub enum CpsVar {
    Name(Name),
    Term(SemTerm),
    Question(SemQuestion),
}

impl Variable for CpsVar {
    fn name(&self) -> Option<&Name> {
        match self {
            CpsVar::Name(x) => Some(x),
            _ => None,
        }
    }

    fn from_name(x: Name) -> Self {
        CpsVar::Name(x)
    }
}

pub type SemSyntax = Rc<CompTerm<CpsVar>>;

pub enum Bounce {
    /// Apply a denotation to a question.
    Call(SemTerm, SemQuestion),
    /// Hand a raised question to the innermost pending handler.
    Final(SemQuestion),
    Stuck(Name, SemQuestion),
    CoStuck(Name),
    /// Run a response.
    Respond(Rc<CompResponse<CpsVar>>),
}

#[derive(Clone, Debug)]
pub enum CpsAnswer {
    Final(SemQuestion),
    /// Pending handlers innermost first.
    Stuck(Vec<SemTerm>, Name, SemQuestion),
    CoStuck(Vec<SemTerm>, Name),
}

impl CpsAnswer {
    pub fn canonical(&self) -> CanonicalComp {
        match self {
            CpsAnswer::Final(q) => CanonicalComp::Final(skeleton(q)),
            CpsAnswer::Stuck(s, x, q) => CanonicalComp::Stuck(s.len(), x.clone(), skeleton(q)),
            CpsAnswer::CoStuck(s, k) => CanonicalComp::CoStuck(s.len(), k.clone()),
        }
    }
}

pub fn term(m: &SemSyntax) -> SemTerm {
    match &**m {
        CompTerm::Var(CpsVar::Name(x)) => {
            let x = x.clone();
            SemTerm::new(move |k, _| Ok(Bounce::Stuck(x.clone(), k)))
        }
        CompTerm::Var(CpsVar::Term(f)) => f.clone(),
        CompTerm::Var(CpsVar::Question(_)) => SemTerm::new(|_, _| Err(EvalError::KindMismatch(Name::from("<question>")))),
        CompTerm::Dot(n) => {
            let n = term(n);
            SemTerm::new(move |k, _| Ok(Bounce::Call(n.clone(), Spine::arg(n.clone(), k))))
        }
        CompTerm::App(f, n) => {
            let (f, n) = (term(f), term(n));
            SemTerm::new(move |k, _| Ok(Bounce::Call(f.clone(), Spine::arg(n.clone(), k))))
        }
        CompTerm::Idx(f, i) => {
            let (f, i) = (term(f), i.clone());
            SemTerm::new(move |k, _| Ok(Bounce::Call(f.clone(), Spine::idx(i.clone(), k))))
        }
        CompTerm::Raise => SemTerm::new(|k, _| Ok(Bounce::Final(k))),
        CompTerm::Capture(q, r) => {
            let (q, r) = (q.clone(), r.clone());
            SemTerm::new(move |k, ctx| {
                let entry = SubstEntry::Response(CompResponse::splat(CpsVar::Question(k)));
                Ok(Bounce::Respond(subst_response(&r, &[(q.clone(), entry)], &mut ctx.fresh)?))
            })
        }
        CompTerm::Handle(o, m) => {
            let (o, m) = (o.clone(), term(m));
            SemTerm::new(move |k, ctx| option(o.clone(), m.clone(), k, ctx))
        }
    }
}

fn extend(f: SemTerm, frame: Frame<SemTerm>) -> SemTerm {
    SemTerm::new(move |q, _| Ok(Bounce::Call(f.clone(), Spine::cons(frame.clone(), q))))
}

/// Option matching with a single question: the failure continuation is
/// extended with each consumed frame, so a mismatch hands it the part of
/// the question that remains.
pub fn option(
    mut o: Rc<CompOption<CpsVar>>,
    mut f: SemTerm,
    mut k: SemQuestion,
    ctx: &mut Ctx,
) -> Result<Bounce, EvalError> {
    loop {
        let (next, frame, rest) = match (&*o, k.uncons()) {
            (CompOption::Done(x, m), _) => {
                let entry = SubstEntry::Term(CompTerm::var(CpsVar::Term(f)));
                let m = subst_term(m, &[(x.clone(), entry)], &mut ctx.fresh)?;
                return Ok(Bounce::Call(term(&m), k));
            }
            (CompOption::PopArg(x, o2), Some((Frame::Arg(y), k2))) => {
                let entry = SubstEntry::Term(CompTerm::var(CpsVar::Term(y.clone())));
                let o2 = subst_option(o2, &[(x.clone(), entry)], &mut ctx.fresh)?;
                (o2, Frame::Arg(y.clone()), k2.clone())
            }
            (CompOption::GetIdx(i, o2), Some((Frame::Idx(j), k2))) if i == j => {
                (o2.clone(), Frame::Idx(i.clone()), k2.clone())
            }
            _ => return Ok(Bounce::Call(f, k)),
        };
        f = extend(f, frame);
        o = next;
        k = rest;
    }
}

/// Runs a bounce to an answer.  Each application of a denotation costs one
/// unit of fuel.
pub fn drive(start: Bounce, fuel: &mut Fuel, ctx: &mut Ctx) -> Result<CpsAnswer, EvalError> {
    let mut meta: Vec<SemTerm> = Vec::new();
    let mut next = start;
    loop {
        next = match next {
            Bounce::Call(f, k) => {
                fuel.tick()?;
                (f.0)(k, ctx)?
            }
            Bounce::Final(q) => match meta.pop() {
                Some(h) => Bounce::Call(h, q),
                None => return Ok(CpsAnswer::Final(q)),
            },
            Bounce::Stuck(x, q) => {
                meta.reverse();
                return Ok(CpsAnswer::Stuck(meta, x, q));
            }
            Bounce::CoStuck(k) => {
                meta.reverse();
                return Ok(CpsAnswer::CoStuck(meta, k));
            }
            Bounce::Respond(r) => match &*r {
                CompResponse::Splat(CpsVar::Name(k)) => Bounce::CoStuck(k.clone()),
                CompResponse::Splat(CpsVar::Question(q)) => Bounce::Final(q.clone()),
                CompResponse::Splat(CpsVar::Term(_)) => {
                    return Err(EvalError::KindMismatch(Name::from("<term>")))
                }
                CompResponse::End => Bounce::Final(Spine::nop()),
                CompResponse::AndThen(m, rest) => {
                    meta.push(term(m));
                    Bounce::Respond(rest.clone())
                }
            },
        };
    }
}

pub(crate) fn to_sem(x: &Name) -> CpsVar {
    CpsVar::Name(x.clone())
}

/// Translates a syntactic question argument by argument.
pub fn sem_question(q: &Question<Rc<CompTerm>>) -> SemQuestion {
    q.map(|m| term(&m.map_vars(&to_sem)))
}

pub fn run(r: &Rc<CompResponse>, fuel: u64) -> Result<CpsAnswer, EvalError> {
    let mut ctx = Ctx::new(Fresh::avoiding(&all_names(r)));
    let r = r.map_vars(&to_sem);
    drive(Bounce::Respond(r), &mut Fuel::new(fuel), &mut ctx)
}

pub fn eval(m: &Rc<CompTerm>, fuel: u64) -> Result<CpsAnswer, EvalError> {
    let mut ctx = Ctx::new(Fresh::avoiding(&all_names_term(m)));
    let m = m.map_vars(&to_sem);
    drive(Bounce::Call(term(&m), Spine::nop()), &mut Fuel::new(fuel), &mut ctx)
}

/// Runs an option with `raise` as its failure, at the empty question.
pub fn try_option(o: &Rc<CompOption>, fuel: u64) -> Result<CpsAnswer, EvalError> {
    let mut ctx = Ctx::new(Fresh::avoiding(&all_names_option(o)));
    let o = o.map_vars(&to_sem);
    let start = option(o, term(&CompTerm::raise()), Spine::nop(), &mut ctx)?;
    drive(start, &mut Fuel::new(fuel), &mut ctx)
}

/// Runs option `o` with failure `failure` on question `q`.
pub fn apply_option(
    o: &Rc<CompOption>,
    failure: &Rc<CompTerm>,
    q: &Question<Rc<CompTerm>>,
    fuel: u64,
) -> Result<CpsAnswer, EvalError> {
    let mut names = all_names_option(o);
    names.extend(all_names_term(failure));
    for m in q.iter().filter_map(|f| match f {
        Frame::Arg(m) => Some(m),
        Frame::Idx(_) => None,
    }) {
        names.extend(all_names_term(m));
    }
    let mut ctx = Ctx::new(Fresh::avoiding(&names));
    let f = term(&failure.map_vars(&to_sem));
    let start = option(o.map_vars(&to_sem), f, sem_question(q), &mut ctx)?;
    drive(start, &mut Fuel::new(fuel), &mut ctx)
}
