use std::fmt;
use std::rc::Rc;

use super::Name;

struct Entry<T> {
    name: Name,
    value: T,
    rest: Env<T>,
}

/// Persistent association list.  Lookup returns the newest binding, so
/// extending an environment shadows older entries for the same name.
pub struct Env<T> {
    head: Option<Rc<Entry<T>>>,
}

impl<T> Env<T> {
    pub fn empty() -> Self {
        Env { head: None }
    }

    pub fn extend(&self, name: Name, value: T) -> Self {
        Env {
            head: Some(Rc::new(Entry {
                name,
                value,
                rest: self.clone(),
            })),
        }
    }

    pub fn lookup(&self, name: &Name) -> Option<&T> {
        self.iter().find(|(n, _)| *n == name).map(|(_, v)| v)
    }

    pub fn is_empty(&self) -> bool {
        self.head.is_none()
    }

    pub fn len(&self) -> usize {
        self.iter().count()
    }

    /// Entries newest first.
    pub fn iter(&self) -> impl Iterator<Item = (&Name, &T)> {
        let mut cur = self.head.as_deref();
        std::iter::from_fn(move || {
            let entry = cur?;
            cur = entry.rest.head.as_deref();
            Some((&entry.name, &entry.value))
        })
    }
}

impl<T: Clone> Env<T> {
    /// `self ++ base`: every entry of `self` shadows `base`.
    pub fn append(&self, base: &Env<T>) -> Env<T> {
        let mine: Vec<(&Name, &T)> = self.iter().collect();
        mine.into_iter()
            .rev()
            .fold(base.clone(), |acc, (n, v)| acc.extend(n.clone(), v.clone()))
    }
}

impl<T> Clone for Env<T> {
    fn clone(&self) -> Self {
        Env {
            head: self.head.clone(),
        }
    }
}

impl<T> Default for Env<T> {
    fn default() -> Self {
        Env::empty()
    }
}

impl<T> Drop for Env<T> {
    fn drop(&mut self) {
        let mut cur = self.head.take();
        while let Some(entry) = cur {
            match Rc::try_unwrap(entry) {
                Ok(mut entry) => cur = entry.rest.head.take(),
                Err(_) => break,
            }
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Env<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}
