//! Copatterns and questions share one shape: a list of argument and index
//! frames read left to right.  A copattern carries binders in its argument
//! slots, a question carries whatever the evaluator uses as arguments
//! (terms, closures, or semantic functions).

use std::fmt;
use std::rc::Rc;

use super::Name;

/// One frame of a copattern or question.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Frame<A> {
    Arg(A),
    Idx(Name),
}

impl<A> Frame<A> {
    pub fn map<B>(&self, f: impl FnOnce(&A) -> B) -> Frame<B> {
        match self {
            Frame::Arg(a) => Frame::Arg(f(a)),
            Frame::Idx(i) => Frame::Idx(i.clone()),
        }
    }
}

struct Link<A> {
    frame: Frame<A>,
    rest: Spine<A>,
}

/// Persistent list of frames.  Cloning is O(1) and pushing a frame in
/// front of a shared spine never copies it.
pub struct Spine<A> {
    head: Option<Rc<Link<A>>>,
}

/// Left-hand side of an option: binders and index checks.
pub type Copattern = Spine<Name>;

/// A calling context, seen inside out.
pub type Question<P> = Spine<P>;

impl<A> Spine<A> {
    pub fn nop() -> Self {
        Spine { head: None }
    }

    pub fn cons(frame: Frame<A>, rest: Spine<A>) -> Self {
        Spine {
            head: Some(Rc::new(Link { frame, rest })),
        }
    }

    pub fn arg(a: A, rest: Spine<A>) -> Self {
        Self::cons(Frame::Arg(a), rest)
    }

    pub fn idx(i: Name, rest: Spine<A>) -> Self {
        Self::cons(Frame::Idx(i), rest)
    }

    pub fn is_nop(&self) -> bool {
        self.head.is_none()
    }

    pub fn uncons(&self) -> Option<(&Frame<A>, &Spine<A>)> {
        self.head.as_ref().map(|link| (&link.frame, &link.rest))
    }

    pub fn iter(&self) -> Iter<'_, A> {
        Iter { cur: self }
    }

    pub fn len(&self) -> usize {
        self.iter().count()
    }

    pub fn is_empty(&self) -> bool {
        self.is_nop()
    }

    /// Drops the first `n` frames (sharing the remainder).
    pub fn skip(&self, n: usize) -> Spine<A> {
        let mut cur = self;
        for _ in 0..n {
            match cur.uncons() {
                Some((_, rest)) => cur = rest,
                None => break,
            }
        }
        cur.clone()
    }
}

impl<A: Clone> Spine<A> {
    pub fn from_frames(frames: Vec<Frame<A>>) -> Self {
        frames
            .into_iter()
            .rev()
            .fold(Spine::nop(), |rest, f| Spine::cons(f, rest))
    }

    pub fn frames(&self) -> Vec<Frame<A>> {
        self.iter().cloned().collect()
    }

    /// Monoid operation: `self` followed by `other`.  `Nop` is the identity.
    pub fn compose(&self, other: &Spine<A>) -> Spine<A> {
        let mine: Vec<&Frame<A>> = self.iter().collect();
        mine.into_iter()
            .rev()
            .fold(other.clone(), |rest, f| Spine::cons(f.clone(), rest))
    }

    /// Appends a single frame at the far end.
    pub fn snoc(&self, frame: Frame<A>) -> Spine<A> {
        self.compose(&Spine::cons(frame, Spine::nop()))
    }

    /// Replaces the trailing `suffix_len` frames by `tail`.
    pub fn replace_suffix(&self, suffix_len: usize, tail: &Spine<A>) -> Spine<A> {
        let frames = self.frames();
        let keep = frames.len().saturating_sub(suffix_len);
        frames[..keep]
            .iter()
            .rev()
            .fold(tail.clone(), |rest, f| Spine::cons(f.clone(), rest))
    }

    pub fn map<B>(&self, mut f: impl FnMut(&A) -> B) -> Spine<B> {
        let frames: Vec<Frame<B>> = self.iter().map(|fr| fr.map(&mut f)).collect();
        frames
            .into_iter()
            .rev()
            .fold(Spine::nop(), |rest, fr| Spine::cons(fr, rest))
    }

    pub fn try_map<B, E>(&self, mut f: impl FnMut(&A) -> Result<B, E>) -> Result<Spine<B>, E> {
        let mut frames = Vec::new();
        for fr in self.iter() {
            frames.push(match fr {
                Frame::Arg(a) => Frame::Arg(f(a)?),
                Frame::Idx(i) => Frame::Idx(i.clone()),
            });
        }
        Ok(frames
            .into_iter()
            .rev()
            .fold(Spine::nop(), |rest, fr| Spine::cons(fr, rest)))
    }
}

impl<A> Clone for Spine<A> {
    fn clone(&self) -> Self {
        Spine {
            head: self.head.clone(),
        }
    }
}

impl<A> Default for Spine<A> {
    fn default() -> Self {
        Spine::nop()
    }
}

// Long questions are built by machines one frame at a time; the default
// recursive drop would overflow the stack on them.
impl<A> Drop for Spine<A> {
    fn drop(&mut self) {
        let mut cur = self.head.take();
        while let Some(link) = cur {
            match Rc::try_unwrap(link) {
                Ok(mut link) => cur = link.rest.head.take(),
                Err(_) => break,
            }
        }
    }
}

impl<A: PartialEq> PartialEq for Spine<A> {
    fn eq(&self, other: &Self) -> bool {
        let mut a = self.iter();
        let mut b = other.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return true,
                (Some(x), Some(y)) if x == y => {}
                _ => return false,
            }
        }
    }
}

impl<A: Eq> Eq for Spine<A> {}

impl<A: fmt::Debug> fmt::Debug for Spine<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

pub struct Iter<'a, A> {
    cur: &'a Spine<A>,
}

impl<'a, A> Iterator for Iter<'a, A> {
    type Item = &'a Frame<A>;

    fn next(&mut self) -> Option<Self::Item> {
        let (frame, rest) = self.cur.uncons()?;
        self.cur = rest;
        Some(frame)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Name {
        Name::from(s)
    }

    #[test]
    fn nop_is_left_identity() {
        let q: Copattern = Spine::arg(n("x"), Spine::idx(n("Head"), Spine::nop()));
        assert_eq!(Spine::nop().compose(&q), q);
        assert_eq!(q.compose(&Spine::nop()), q);
    }

    #[test]
    fn compose_concatenates_in_order() {
        let l: Copattern = Spine::arg(n("x"), Spine::nop());
        let r: Copattern = Spine::idx(n("Head"), Spine::nop());
        let expected = Spine::arg(n("x"), Spine::idx(n("Head"), Spine::nop()));
        assert_eq!(l.compose(&r), expected);
    }

    #[test]
    fn replace_suffix_keeps_prefix() {
        let q: Spine<u32> = Spine::from_frames(vec![Frame::Arg(1), Frame::Idx(n("A")), Frame::Arg(2)]);
        let tail: Spine<u32> = Spine::from_frames(vec![Frame::Arg(9)]);
        let got = q.replace_suffix(1, &tail);
        assert_eq!(got.frames(), vec![Frame::Arg(1), Frame::Idx(n("A")), Frame::Arg(9)]);
    }

    #[test]
    fn dropping_a_long_spine_does_not_overflow() {
        let mut q: Spine<u32> = Spine::nop();
        for i in 0..1_000_000 {
            q = Spine::arg(i, q);
        }
        assert_eq!(q.len(), 1_000_000);
        drop(q);
    }
}
