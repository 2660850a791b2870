//! CPS translation parameterized by an environment of denotations.
//! Binders extend the environment; syntax is never rewritten.

use std::fmt;
use std::rc::Rc;

use crate::canonical::{skeleton, CanonicalMono};
use crate::error::{EvalError, Fuel};
use crate::syntax::{Copattern, Env, Frame, MonoOption, MonoTerm, Name, Question, Spine};

pub type SemQuestion = Question<SemTerm>;
pub type SemEnv = Env<SemTerm>;

type SemFn = dyn Fn(SemQuestion) -> Bounce;

#[derive(Clone)]
pub struct SemTerm(Rc<SemFn>);

impl SemTerm {
    fn new(f: impl Fn(SemQuestion) -> Bounce + 'static) -> Self {
        SemTerm(Rc::new(f))
    }
}

impl fmt::Debug for SemTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<sem>")
    }
}

pub enum Bounce {
    Done(EnvCpsAnswer),
    Call(SemTerm, SemQuestion),
}

#[derive(Clone, Debug)]
pub enum EnvCpsAnswer {
    /// Resumption waiting for more of the question.
    Under(SemTerm),
    Raise(SemQuestion),
    Stuck(Name, SemQuestion),
}

impl EnvCpsAnswer {
    pub fn canonical(&self) -> CanonicalMono {
        match self {
            EnvCpsAnswer::Under(_) => CanonicalMono::Under,
            EnvCpsAnswer::Raise(q) => CanonicalMono::Raise(skeleton(q)),
            EnvCpsAnswer::Stuck(x, q) => CanonicalMono::Stuck(x.clone(), skeleton(q)),
        }
    }
}

/// `⟦M⟧[σ]`.  Subterms are translated when the denotation is applied.
pub fn term(m: &Rc<MonoTerm>, env: &SemEnv) -> SemTerm {
    match &**m {
        MonoTerm::Var(x) => match env.lookup(x) {
            Some(f) => f.clone(),
            None => {
                let x = x.clone();
                SemTerm::new(move |k| Bounce::Done(EnvCpsAnswer::Stuck(x.clone(), k)))
            }
        },
        MonoTerm::Dot(n) => {
            let n = term(n, env);
            SemTerm::new(move |k| Bounce::Call(n.clone(), Spine::arg(n.clone(), k)))
        }
        MonoTerm::App(f, n) => {
            let (f, n, env) = (f.clone(), n.clone(), env.clone());
            SemTerm::new(move |k| Bounce::Call(term(&f, &env), Spine::arg(term(&n, &env), k)))
        }
        MonoTerm::Idx(f, i) => {
            let (f, i, env) = (f.clone(), i.clone(), env.clone());
            SemTerm::new(move |k| Bounce::Call(term(&f, &env), Spine::idx(i.clone(), k)))
        }
        MonoTerm::Obj(os) => options(os.clone(), 0, env.clone()),
    }
}

/// `⟦ε⟧ = λk. k` and `⟦L → M | O…⟧ = λk. ⟦L → M⟧ k ⟦O…⟧ k`.
fn options(os: Rc<[MonoOption]>, from: usize, env: SemEnv) -> SemTerm {
    SemTerm::new(move |q| match os.get(from) {
        None => Bounce::Done(EnvCpsAnswer::Raise(q)),
        Some(o) => {
            let fallback = options(os.clone(), from + 1, env.clone());
            comatch(o.lhs.clone(), o.rhs.clone(), env.clone(), q.clone(), fallback, q)
        }
    })
}

/// `⟦L → N⟧[σ] q f k`: a mismatch hands the saved question `q` to `f`; an
/// exhausted question yields the resumption `r q f`.
fn comatch(
    mut lhs: Copattern,
    rhs: Rc<MonoTerm>,
    mut env: SemEnv,
    saved: SemQuestion,
    fallback: SemTerm,
    mut k: SemQuestion,
) -> Bounce {
    loop {
        let (l, q) = match (lhs.uncons(), k.uncons()) {
            (None, _) => return Bounce::Call(term(&rhs, &env), k),
            (Some(_), None) => {
                let resume = SemTerm::new(move |k2| {
                    comatch(lhs.clone(), rhs.clone(), env.clone(), saved.clone(), fallback.clone(), k2)
                });
                return Bounce::Done(EnvCpsAnswer::Under(resume));
            }
            (Some(l), Some(q)) => (l, q),
        };
        let (l2, k2) = match (l, q) {
            ((Frame::Arg(x), l2), (Frame::Arg(y), k2)) => {
                env = env.extend(x.clone(), y.clone());
                (l2.clone(), k2.clone())
            }
            ((Frame::Idx(i), l2), (Frame::Idx(j), k2)) if i == j => (l2.clone(), k2.clone()),
            _ => return Bounce::Call(fallback, saved),
        };
        lhs = l2;
        k = k2;
    }
}

/// Each application of a denotation to a question costs one unit of fuel.
pub fn drive(f: SemTerm, k: SemQuestion, fuel: &mut Fuel) -> Result<EnvCpsAnswer, EvalError> {
    let mut next = Bounce::Call(f, k);
    loop {
        match next {
            Bounce::Done(a) => return Ok(a),
            Bounce::Call(f, k) => {
                fuel.tick()?;
                next = (f.0)(k);
            }
        }
    }
}

pub fn eval(m: &Rc<MonoTerm>, fuel: u64) -> Result<EnvCpsAnswer, EvalError> {
    drive(term(m, &Env::empty()), Spine::nop(), &mut Fuel::new(fuel))
}
