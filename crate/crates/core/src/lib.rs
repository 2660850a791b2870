//! Evaluators for monolithic and compositional copattern calculi, with the
//! tools to cross-check them: parser, printer, desugarer, random program
//! generator and differential runner.

pub mod canonical;
pub mod comp;
pub mod encodings;
pub mod environment;
pub mod error;
pub mod frontend;
pub mod harness;
pub mod mono;
pub mod syntax;

pub use error::{EvalError, Fuel};
