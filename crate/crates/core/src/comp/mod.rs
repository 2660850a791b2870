//! Evaluators for the compositional calculus with delimited questions: the
//! CPS translation (with the legacy double-continuation variant of option
//! matching), the abstract machine with a meta-continuation, and the
//! delimited small-step interpreter.

use std::rc::Rc;

use crate::canonical::{skeleton, CanonicalComp};
use crate::frontend::pretty;
use crate::syntax::{CompResponse, CompTerm, Name, Question, Spine};

pub mod cps;
pub mod legacy;
pub mod machine;
pub mod small_step;

pub type TermQuestion = Question<Rc<CompTerm>>;

/// Pending handlers, innermost first.
pub type MetaCont = Vec<Rc<CompTerm>>;

#[derive(Clone, Debug)]
pub enum CompAnswer {
    Final(TermQuestion),
    Stuck(MetaCont, Name, TermQuestion),
    CoStuck(MetaCont, Name),
}

impl CompAnswer {
    pub fn canonical(&self) -> CanonicalComp {
        match self {
            CompAnswer::Final(q) => CanonicalComp::Final(skeleton(q)),
            CompAnswer::Stuck(s, x, q) => CanonicalComp::Stuck(s.len(), x.clone(), skeleton(q)),
            CompAnswer::CoStuck(s, k) => CanonicalComp::CoStuck(s.len(), k.clone()),
        }
    }
}

/// The reified question `K[raise] ! end` substituted for a captured
/// covariable.
pub fn reify(k: &TermQuestion) -> Rc<CompResponse> {
    CompResponse::and_then(crate::syntax::ask(CompTerm::raise(), k), CompResponse::end())
}

pub(crate) fn meta_string(s: &[Rc<CompTerm>]) -> String {
    if s.is_empty() {
        return "ε".into();
    }
    let parts: Vec<String> = s.iter().map(|m| pretty::comp_term(m)).collect();
    parts.join("; ")
}

pub(crate) fn nop<P>() -> Question<P> {
    Spine::nop()
}
