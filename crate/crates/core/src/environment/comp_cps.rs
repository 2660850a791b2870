//! Environment-parameterized CPS for the compositional calculus.  The
//! environment maps variables to denotations and covariables to semantic
//! questions.  Option matching extends the failure with every consumed
//! frame, so a failure bound by `? x -> M` sees the whole question.

use std::fmt;
use std::rc::Rc;

use crate::canonical::{skeleton, CanonicalComp};
use crate::error::{EvalError, Fuel};
use crate::syntax::{CompOption, CompResponse, CompTerm, Env, Frame, Name, Question, Spine};

pub type SemQuestion = Question<SemTerm>;

#[derive(Clone, Debug)]
pub enum SemEntry {
    Term(SemTerm),
    Question(SemQuestion),
}

pub type SemEnv = Env<SemEntry>;

type SemFn = dyn Fn(SemQuestion) -> Result<Bounce, EvalError>;

#[derive(Clone)]
pub struct SemTerm(Rc<SemFn>);

impl SemTerm {
    fn new(f: impl Fn(SemQuestion) -> Result<Bounce, EvalError> + 'static) -> Self {
        SemTerm(Rc::new(f))
    }
}

impl fmt::Debug for SemTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<sem>")
    }
}

pub enum Bounce {
    Call(SemTerm, SemQuestion),
    /// Hand a raised question to the innermost pending handler.
    Final(SemQuestion),
    Stuck(Name, SemQuestion),
    CoStuck(Name),
    Respond(Rc<CompResponse>, SemEnv),
}

#[derive(Clone, Debug)]
pub enum EnvCpsAnswer {
    Final(SemQuestion),
    /// Pending handlers innermost first.
    Stuck(Vec<SemTerm>, Name, SemQuestion),
    CoStuck(Vec<SemTerm>, Name),
}

impl EnvCpsAnswer {
    pub fn canonical(&self) -> CanonicalComp {
        match self {
            EnvCpsAnswer::Final(q) => CanonicalComp::Final(skeleton(q)),
            EnvCpsAnswer::Stuck(s, x, q) => CanonicalComp::Stuck(s.len(), x.clone(), skeleton(q)),
            EnvCpsAnswer::CoStuck(s, k) => CanonicalComp::CoStuck(s.len(), k.clone()),
        }
    }
}

/// `⟦M⟧[σ]`.
pub fn term(m: &Rc<CompTerm>, env: &SemEnv) -> SemTerm {
    match &**m {
        CompTerm::Var(x) => match env.lookup(x) {
            Some(SemEntry::Term(f)) => f.clone(),
            Some(SemEntry::Question(_)) => {
                let x = x.clone();
                SemTerm::new(move |_| Err(EvalError::KindMismatch(x.clone())))
            }
            None => {
                let x = x.clone();
                SemTerm::new(move |k| Ok(Bounce::Stuck(x.clone(), k)))
            }
        },
        CompTerm::Dot(n) => {
            let n = term(n, env);
            SemTerm::new(move |k| Ok(Bounce::Call(n.clone(), Spine::arg(n.clone(), k))))
        }
        CompTerm::App(f, n) => {
            let (f, n, env) = (f.clone(), n.clone(), env.clone());
            SemTerm::new(move |k| Ok(Bounce::Call(term(&f, &env), Spine::arg(term(&n, &env), k))))
        }
        CompTerm::Idx(f, i) => {
            let (f, i, env) = (f.clone(), i.clone(), env.clone());
            SemTerm::new(move |k| Ok(Bounce::Call(term(&f, &env), Spine::idx(i.clone(), k))))
        }
        CompTerm::Raise => SemTerm::new(|k| Ok(Bounce::Final(k))),
        CompTerm::Capture(q, r) => {
            let (q, r, env) = (q.clone(), r.clone(), env.clone());
            SemTerm::new(move |k| Ok(Bounce::Respond(r.clone(), env.extend(q.clone(), SemEntry::Question(k)))))
        }
        CompTerm::Handle(o, m) => {
            let (o, m, env) = (o.clone(), m.clone(), env.clone());
            SemTerm::new(move |k| option(o.clone(), env.clone(), term(&m, &env), k))
        }
    }
}

fn extend(f: SemTerm, frame: Frame<SemTerm>) -> SemTerm {
    SemTerm::new(move |q| Ok(Bounce::Call(f.clone(), Spine::cons(frame.clone(), q))))
}

/// `⟦O⟧[σ] f k`.
pub fn option(mut o: Rc<CompOption>, mut env: SemEnv, mut f: SemTerm, mut k: SemQuestion) -> Result<Bounce, EvalError> {
    loop {
        let (next, frame, rest) = match (&*o, k.uncons()) {
            (CompOption::Done(x, m), _) => {
                let env = env.extend(x.clone(), SemEntry::Term(f));
                return Ok(Bounce::Call(term(m, &env), k));
            }
            (CompOption::PopArg(x, o2), Some((Frame::Arg(y), k2))) => {
                env = env.extend(x.clone(), SemEntry::Term(y.clone()));
                (o2.clone(), Frame::Arg(y.clone()), k2.clone())
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

/// Runs a bounce to an answer, keeping pending handlers on an explicit
/// stack.  Each application of a denotation costs one unit of fuel.
pub fn drive(start: Bounce, fuel: &mut Fuel) -> Result<EnvCpsAnswer, EvalError> {
    let mut meta: Vec<SemTerm> = Vec::new();
    let mut next = start;
    loop {
        next = match next {
            Bounce::Call(f, k) => {
                fuel.tick()?;
                (f.0)(k)?
            }
            Bounce::Final(q) => match meta.pop() {
                Some(h) => Bounce::Call(h, q),
                None => return Ok(EnvCpsAnswer::Final(q)),
            },
            Bounce::Stuck(x, q) => {
                meta.reverse();
                return Ok(EnvCpsAnswer::Stuck(meta, x, q));
            }
            Bounce::CoStuck(k) => {
                meta.reverse();
                return Ok(EnvCpsAnswer::CoStuck(meta, k));
            }
            Bounce::Respond(r, env) => match &*r {
                CompResponse::Splat(k) => match env.lookup(k) {
                    Some(SemEntry::Question(q)) => Bounce::Final(q.clone()),
                    Some(SemEntry::Term(_)) => return Err(EvalError::KindMismatch(k.clone())),
                    None => Bounce::CoStuck(k.clone()),
                },
                CompResponse::End => Bounce::Final(Spine::nop()),
                CompResponse::AndThen(m, rest) => {
                    meta.push(term(m, &env));
                    Bounce::Respond(rest.clone(), env)
                }
            },
        };
    }
}

pub fn run(r: &Rc<CompResponse>, fuel: u64) -> Result<EnvCpsAnswer, EvalError> {
    drive(Bounce::Respond(r.clone(), Env::empty()), &mut Fuel::new(fuel))
}

pub fn eval(m: &Rc<CompTerm>, fuel: u64) -> Result<EnvCpsAnswer, EvalError> {
    drive(Bounce::Call(term(m, &Env::empty()), Spine::nop()), &mut Fuel::new(fuel))
}

/// Runs an option with `raise` as its failure, at the empty question.
pub fn try_option(o: &Rc<CompOption>, fuel: u64) -> Result<EnvCpsAnswer, EvalError> {
    let f = term(&CompTerm::raise(), &Env::empty());
    let start = option(o.clone(), Env::empty(), f, Spine::nop())?;
    drive(start, &mut Fuel::new(fuel))
}
