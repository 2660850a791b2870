//! Representation-erased answers.  Every evaluator of a calculus maps its
//! own answer type here so that artifacts with different payloads (terms,
//! closures, host functions) can be compared.

use std::fmt;

use crate::syntax::{Frame, Name, Question};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SkelFrame {
    Slot,
    Index(Name),
}

/// A question with every argument payload erased.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Skeleton(pub Vec<SkelFrame>);

pub fn skeleton<P>(q: &Question<P>) -> Skeleton {
    Skeleton(
        q.iter()
            .map(|f| match f {
                Frame::Arg(_) => SkelFrame::Slot,
                Frame::Idx(i) => SkelFrame::Index(i.clone()),
            })
            .collect(),
    )
}

impl fmt::Display for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, frame) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match frame {
                SkelFrame::Slot => f.write_str("_")?,
                SkelFrame::Index(x) => write!(f, "{x}")?,
            }
        }
        f.write_str("]")
    }
}

/// Observable outcome of a monolithic program.  `Under` keeps only its tag:
/// the CPS evaluator represents it as an opaque resumption.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CanonicalMono {
    Raise(Skeleton),
    Stuck(Name, Skeleton),
    Under,
}

/// Observable outcome of a compositional program; meta-continuations are
/// reduced to their depth.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CanonicalComp {
    Final(Skeleton),
    Stuck(usize, Name, Skeleton),
    CoStuck(usize, Name),
}

impl fmt::Display for CanonicalMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalMono::Raise(s) => write!(f, "raise {s}"),
            CanonicalMono::Stuck(x, s) => write!(f, "stuck {x} {s}"),
            CanonicalMono::Under => f.write_str("under"),
        }
    }
}

impl fmt::Display for CanonicalComp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalComp::Final(s) => write!(f, "final {s}"),
            CanonicalComp::Stuck(d, x, s) => write!(f, "stuck depth={d} {x} {s}"),
            CanonicalComp::CoStuck(d, k) => write!(f, "costuck depth={d} {k}"),
        }
    }
}
