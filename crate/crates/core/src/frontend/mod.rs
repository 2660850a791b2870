//! Concrete syntax for both calculi.
//!
//! Monolithic programs (`.copat`):
//!
//! ```text
//! term   ::= atom (atom | Index | '.')*
//! atom   ::= var | '(' term ')' | 'fun' '{' [option ('|' option)*] '}'
//! option ::= (var | Index)* '->' term
//! ```
//!
//! Compositional programs (`.ccopat`) are responses:
//!
//! ```text
//! response ::= 'end' | covar | term '!' response
//! term     ::= '{' coption '}' '?' term | 'capture' covar '->' response | chain
//! chain    ::= atom (atom | Index | '.')*
//! atom     ::= var | 'raise' | '(' term ')'
//! coption  ::= var '->' coption | Index '->' coption | '?' var '->' term
//! ```
//!
//! Comments run from `--` to the end of the line.

use std::fmt;
use std::path::Path;
use std::rc::Rc;

use thiserror::Error;

use crate::syntax::comp::{self, freshen_response};
use crate::syntax::mono::{self, freshen};
use crate::syntax::{CompOption, CompResponse, CompTerm, Frame, Fresh, MonoTerm, Name};

pub mod lexer;
pub mod parser;
pub mod pretty;

/// Index reserved for the object encoding.
pub const OPEN: &str = "Open";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Calculus {
    Mono,
    Comp,
}

impl Calculus {
    /// `.copat` is monolithic, `.ccopat` compositional.
    pub fn from_path(path: &Path) -> Option<Calculus> {
        match path.extension()?.to_str()? {
            "copat" => Some(Calculus::Mono),
            "ccopat" => Some(Calculus::Comp),
            _ => None,
        }
    }
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Calculus::Mono => "mono",
            Calculus::Comp => "comp",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("the index `{0}` is reserved")]
    ReservedName(Name),
}

fn check_index(i: &Name) -> Result<(), FrontendError> {
    if i.as_str() == OPEN {
        Err(FrontendError::ReservedName(i.clone()))
    } else {
        Ok(())
    }
}

fn check_mono(m: &MonoTerm) -> Result<(), FrontendError> {
    match m {
        MonoTerm::Var(_) => Ok(()),
        MonoTerm::App(f, n) => check_mono(f).and_then(|_| check_mono(n)),
        MonoTerm::Idx(f, i) => check_index(i).and_then(|_| check_mono(f)),
        MonoTerm::Dot(f) => check_mono(f),
        MonoTerm::Obj(os) => os.iter().try_for_each(|o| {
            o.lhs.iter().try_for_each(|f| match f {
                Frame::Idx(i) => check_index(i),
                Frame::Arg(_) => Ok(()),
            })?;
            check_mono(&o.rhs)
        }),
    }
}

fn check_comp_term(m: &CompTerm) -> Result<(), FrontendError> {
    match m {
        CompTerm::Var(_) | CompTerm::Raise => Ok(()),
        CompTerm::App(f, n) => check_comp_term(f).and_then(|_| check_comp_term(n)),
        CompTerm::Idx(f, i) => check_index(i).and_then(|_| check_comp_term(f)),
        CompTerm::Dot(f) => check_comp_term(f),
        CompTerm::Handle(o, f) => check_comp_option(o).and_then(|_| check_comp_term(f)),
        CompTerm::Capture(_, r) => check_comp_response(r),
    }
}

fn check_comp_option(o: &CompOption) -> Result<(), FrontendError> {
    match o {
        CompOption::PopArg(_, o) => check_comp_option(o),
        CompOption::GetIdx(i, o) => check_index(i).and_then(|_| check_comp_option(o)),
        CompOption::Done(_, m) => check_comp_term(m),
    }
}

fn check_comp_response(r: &CompResponse) -> Result<(), FrontendError> {
    match r {
        CompResponse::Splat(_) | CompResponse::End => Ok(()),
        CompResponse::AndThen(m, r) => check_comp_term(m).and_then(|_| check_comp_response(r)),
    }
}

/// Rejects the reserved index and renames every binder apart.
pub fn resolve_mono(m: &Rc<MonoTerm>) -> Result<Rc<MonoTerm>, FrontendError> {
    check_mono(m)?;
    Ok(freshen(m, &mut Fresh::avoiding(&mono::all_names(m))))
}

pub fn resolve_comp(r: &Rc<CompResponse>) -> Result<Rc<CompResponse>, FrontendError> {
    check_comp_response(r)?;
    Ok(freshen_response(r, &mut Fresh::avoiding(&comp::all_names(r))))
}

/// Parses and resolves a monolithic program.
pub fn parse_mono(src: &str) -> Result<Rc<MonoTerm>, FrontendError> {
    resolve_mono(&parser::mono(src)?)
}

/// Parses and resolves a compositional program.
pub fn parse_comp(src: &str) -> Result<Rc<CompResponse>, FrontendError> {
    resolve_comp(&parser::comp(src)?)
}
