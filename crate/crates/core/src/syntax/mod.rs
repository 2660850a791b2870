//! Abstract syntax shared by every evaluator: names, the copattern/question
//! monoid, terms of both calculi, plugging, substitution and renaming.

use std::collections::HashSet;
use std::fmt;
use std::rc::Rc;

pub mod comp;
pub mod env;
pub mod mono;
pub mod spine;

pub use comp::{CompOption, CompResponse, CompSubst, CompTerm, KindMismatch, SubstEntry, WILDCARD};
pub use env::Env;
pub use mono::{MonoOption, MonoSubst, MonoTerm};
pub use spine::{Copattern, Frame, Question, Spine};

/// Identifier for variables, covariables and indices.  Indices start with
/// an uppercase letter; everything else is a (co)variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Rc<str>);

impl Name {
    pub fn new(s: impl AsRef<str>) -> Self {
        Name(Rc::from(s.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_index(&self) -> bool {
        self.0.chars().next().is_some_and(char::is_uppercase)
    }

    /// The name with any `#n` renaming suffix removed.
    pub fn base(&self) -> &str {
        match self.0.find('#') {
            Some(i) => &self.0[..i],
            None => &self.0,
        }
    }

    fn suffix(&self) -> Option<u64> {
        let i = self.0.rfind('#')?;
        self.0[i + 1..].parse().ok()
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// What a syntax tree stores at a variable occurrence.  Source programs use
/// [`Name`]; the CPS evaluators substitute semantic values into syntax, and
/// those carry no name at all.
pub trait Variable: Clone + fmt::Debug {
    fn name(&self) -> Option<&Name>;
    fn from_name(x: Name) -> Self;
}

impl Variable for Name {
    fn name(&self) -> Option<&Name> {
        Some(self)
    }

    fn from_name(x: Name) -> Self {
        x
    }
}

/// Case-local supply of fresh binder names (`base#n`).
#[derive(Clone, Debug, Default)]
pub struct Fresh {
    next: u64,
    free: Option<Rc<HashSet<Name>>>,
}

impl Fresh {
    pub fn new() -> Self {
        Fresh { next: 1, free: None }
    }

    /// A supply whose names never clash with `#n` suffixes already in use.
    pub fn avoiding<'a>(names: impl IntoIterator<Item = &'a Name>) -> Self {
        let max = names.into_iter().filter_map(Name::suffix).max().unwrap_or(0);
        Fresh { next: max + 1, free: None }
    }

    /// Supply for evaluating `program`.  Evaluators never reduce under a
    /// binder, so every term they substitute has its free names among the
    /// program's.  Substitution then checks binders against that set
    /// instead of traversing the substituted terms, which may be large
    /// shared graphs.
    pub fn for_program<'a>(names: impl IntoIterator<Item = &'a Name>, free: HashSet<Name>) -> Self {
        Fresh { free: Some(Rc::new(free)), ..Fresh::avoiding(names) }
    }

    /// Superset of the free names of every substituted term, if known.
    pub fn free_bound(&self) -> Option<&HashSet<Name>> {
        self.free.as_deref()
    }

    pub fn next_name(&mut self, like: &Name) -> Name {
        let n = self.next.max(1);
        self.next = n + 1;
        Name::new(format!("{}#{}", like.base(), n))
    }

    /// Fresh variant of `like` that is not in `taken`.
    pub fn rename_avoiding(&mut self, like: &Name, taken: &HashSet<Name>) -> Name {
        loop {
            let candidate = self.next_name(like);
            if !taken.contains(&candidate) {
                return candidate;
            }
        }
    }
}

/// Terms that can be plugged into a question.
pub trait Plug: Sized {
    fn apply(fun: Rc<Self>, arg: Rc<Self>) -> Rc<Self>;
    fn index(obj: Rc<Self>, index: Name) -> Rc<Self>;
}

/// Plugs `m` into the context `q`, innermost frame first:
/// `ask m (n · q) = ask (m n) q`.
pub fn ask<T: Plug>(m: Rc<T>, q: &Question<Rc<T>>) -> Rc<T> {
    q.iter().fold(m, |acc, frame| match frame {
        Frame::Arg(n) => T::apply(acc, n.clone()),
        Frame::Idx(i) => T::index(acc, i.clone()),
    })
}

/// Binder names introduced by a copattern, in order.
pub fn binders(lhs: &Copattern) -> impl Iterator<Item = &Name> {
    lhs.iter().filter_map(|f| match f {
        Frame::Arg(x) => Some(x),
        Frame::Idx(_) => None,
    })
}
