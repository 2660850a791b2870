//! CPS translation into host closures.  A translated term consumes a
//! semantic question; under a binder a source name is replaced by the
//! denotation of the argument it was matched against.
//!
//! Closures return a [`Bounce`] instead of calling each other, and a
//! driver loop runs them, so long computations do not grow the host stack.

use std::fmt;
use std::rc::Rc;

use crate::canonical::{skeleton, CanonicalMono};
use crate::error::{EvalError, Fuel};
use crate::syntax::mono::{all_names, subst};
use crate::syntax::{Copattern, Frame, Fresh, MonoOption, MonoTerm, Name, Question, Spine, Variable};

pub type SemQuestion = Question<SemTerm>;

pub struct Ctx {
    fresh: Fresh,
}

type SemFn = dyn Fn(SemQuestion, &mut Ctx) -> Result<Bounce, EvalError>;

/// A function from semantic questions to answers.
#[derive(Clone)]
pub struct SemTerm(Rc<SemFn>);

impl SemTerm {
    fn new(f: impl Fn(SemQuestion, &mut Ctx) -> Result<Bounce, EvalError> + 'static) -> Self {
        SemTerm(Rc::new(f))
    }
}

impl fmt::Debug for SemTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<sem>")
    }
}

/// A variable is either still a source name or already replaced by a
/// denotation.  Substituted variables are never equal to anything.
#[derive(Clone, Debug)]
pub enum SemVar {
    Name(Name),
    Subs(SemTerm),
}

impl Variable for SemVar {
    fn name(&self) -> Option<&Name> {
        match self {
            SemVar::Name(x) => Some(x),
            SemVar::Subs(_) => None,
        }
    }

    fn from_name(x: Name) -> Self {
        SemVar::Name(x)
    }
}

pub enum Bounce {
    Done(CpsAnswer),
    Call(SemTerm, SemQuestion),
}

#[derive(Clone, Debug)]
pub enum CpsAnswer {
    /// Resumption waiting for more of the question.
    Under(SemTerm),
    Raise(SemQuestion),
    Stuck(Name, SemQuestion),
}

impl CpsAnswer {
    pub fn canonical(&self) -> CanonicalMono {
        match self {
            CpsAnswer::Under(_) => CanonicalMono::Under,
            CpsAnswer::Raise(q) => CanonicalMono::Raise(skeleton(q)),
            CpsAnswer::Stuck(x, q) => CanonicalMono::Stuck(x.clone(), skeleton(q)),
        }
    }
}

type SemSyntax = Rc<MonoTerm<SemVar>>;

pub fn term(m: &SemSyntax) -> SemTerm {
    match &**m {
        MonoTerm::Var(SemVar::Name(x)) => {
            let x = x.clone();
            SemTerm::new(move |k, _| Ok(Bounce::Done(CpsAnswer::Stuck(x.clone(), k))))
        }
        MonoTerm::Var(SemVar::Subs(f)) => f.clone(),
        MonoTerm::Dot(n) => {
            let n = term(n);
            SemTerm::new(move |k, _| Ok(Bounce::Call(n.clone(), Spine::arg(n.clone(), k))))
        }
        MonoTerm::App(f, n) => {
            let (f, n) = (term(f), term(n));
            SemTerm::new(move |k, _| Ok(Bounce::Call(f.clone(), Spine::arg(n.clone(), k))))
        }
        MonoTerm::Idx(f, i) => {
            let (f, i) = (term(f), i.clone());
            SemTerm::new(move |k, _| Ok(Bounce::Call(f.clone(), Spine::idx(i.clone(), k))))
        }
        MonoTerm::Obj(os) => options(os.clone(), 0),
    }
}

/// `⟦L → M | O…⟧ = λk. ⟦L → M⟧ k ⟦O…⟧ k`, and `⟦ε⟧ = Raise`.
fn options(os: Rc<[MonoOption<SemVar>]>, from: usize) -> SemTerm {
    SemTerm::new(move |q, ctx| match os.get(from) {
        None => Ok(Bounce::Done(CpsAnswer::Raise(q))),
        Some(o) => {
            let fallback = options(os.clone(), from + 1);
            comatch(o.lhs.clone(), o.rhs.clone(), q.clone(), fallback, q, ctx)
        }
    })
}

fn comatch(
    mut lhs: Copattern,
    mut rhs: SemSyntax,
    saved: SemQuestion,
    fallback: SemTerm,
    mut k: SemQuestion,
    ctx: &mut Ctx,
) -> Result<Bounce, EvalError> {
    loop {
        let (l, q) = match (lhs.uncons(), k.uncons()) {
            (None, _) => return Ok(Bounce::Call(term(&rhs), k)),
            (Some(_), None) => {
                let resume = SemTerm::new(move |k2, ctx| {
                    comatch(lhs.clone(), rhs.clone(), saved.clone(), fallback.clone(), k2, ctx)
                });
                return Ok(Bounce::Done(CpsAnswer::Under(resume)));
            }
            (Some(l), Some(q)) => (l, q),
        };
        let (l2, k2) = match (l, q) {
            ((Frame::Arg(x), l2), (Frame::Arg(y), k2)) => {
                let entry = MonoTerm::var(SemVar::Subs(y.clone()));
                rhs = subst(&rhs, &[(x.clone(), entry)], &mut ctx.fresh);
                (l2.clone(), k2.clone())
            }
            ((Frame::Idx(i), l2), (Frame::Idx(j), k2)) if i == j => (l2.clone(), k2.clone()),
            _ => return Ok(Bounce::Call(fallback, saved)),
        };
        lhs = l2;
        k = k2;
    }
}

/// Runs `f` on `k`; each application of a denotation to a question costs
/// one unit of fuel.
pub fn drive(f: SemTerm, k: SemQuestion, fuel: &mut Fuel, ctx: &mut Ctx) -> Result<CpsAnswer, EvalError> {
    let mut next = Bounce::Call(f, k);
    loop {
        match next {
            Bounce::Done(a) => return Ok(a),
            Bounce::Call(f, k) => {
                fuel.tick()?;
                next = (f.0)(k, ctx)?;
            }
        }
    }
}

pub fn eval(m: &Rc<MonoTerm>, fuel: u64) -> Result<CpsAnswer, EvalError> {
    let mut ctx = Ctx { fresh: Fresh::avoiding(&all_names(m)) };
    let t = term(&m.map_vars(&|x: &Name| SemVar::Name(x.clone())));
    drive(t, Spine::nop(), &mut Fuel::new(fuel), &mut ctx)
}
