//! Evaluators for the monolithic calculus: a small-step interpreter that
//! decomposes and recomposes terms, the tail-recursive machine obtained by
//! refocusing it, and a CPS translation into host closures.

use std::rc::Rc;

use crate::canonical::{skeleton, CanonicalMono};
use crate::syntax::{Copattern, MonoOption, MonoTerm, Name, Question};

pub mod cps;
pub mod machine;
pub mod small_step;

pub type TermQuestion = Question<Rc<MonoTerm>>;

#[derive(Clone, Debug)]
pub enum MonoAnswer {
    /// The question ran out while `lhs` still expected frames.
    Under {
        lhs: Copattern,
        rhs: Rc<MonoTerm>,
        options: Rc<[MonoOption]>,
        question: TermQuestion,
    },
    Raise(TermQuestion),
    Stuck(Name, TermQuestion),
}

impl MonoAnswer {
    pub fn canonical(&self) -> CanonicalMono {
        match self {
            MonoAnswer::Under { .. } => CanonicalMono::Under,
            MonoAnswer::Raise(q) => CanonicalMono::Raise(skeleton(q)),
            MonoAnswer::Stuck(x, q) => CanonicalMono::Stuck(x.clone(), skeleton(q)),
        }
    }
}
