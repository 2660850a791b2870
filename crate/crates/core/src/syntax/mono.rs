//! Terms of the monolithic calculus: variables, application, indexing,
//! self-application `M.` and copattern objects `fun { L -> M | ... }`.

use std::collections::HashSet;
use std::rc::Rc;

use super::{binders, Copattern, Frame, Fresh, Name, Plug, Spine, Variable, WILDCARD};

#[derive(Clone, Debug, PartialEq)]
pub enum MonoTerm<V = Name> {
    Var(V),
    App(Rc<MonoTerm<V>>, Rc<MonoTerm<V>>),
    Idx(Rc<MonoTerm<V>>, Name),
    Dot(Rc<MonoTerm<V>>),
    Obj(Rc<[MonoOption<V>]>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonoOption<V = Name> {
    pub lhs: Copattern,
    pub rhs: Rc<MonoTerm<V>>,
}

/// Simultaneous substitution; domain names are pairwise distinct.
pub type MonoSubst<V = Name> = Vec<(Name, Rc<MonoTerm<V>>)>;

impl<V> MonoTerm<V> {
    pub fn var(x: V) -> Rc<Self> {
        Rc::new(MonoTerm::Var(x))
    }

    pub fn app(m: Rc<Self>, n: Rc<Self>) -> Rc<Self> {
        Rc::new(MonoTerm::App(m, n))
    }

    pub fn idx(m: Rc<Self>, i: impl Into<Name>) -> Rc<Self> {
        Rc::new(MonoTerm::Idx(m, i.into()))
    }

    pub fn dot(m: Rc<Self>) -> Rc<Self> {
        Rc::new(MonoTerm::Dot(m))
    }

    pub fn obj(options: Vec<MonoOption<V>>) -> Rc<Self> {
        Rc::new(MonoTerm::Obj(options.into()))
    }

    /// Number of syntax nodes (copattern frames not counted).
    pub fn size(&self) -> usize {
        match self {
            MonoTerm::Var(_) => 1,
            MonoTerm::App(m, n) => 1 + m.size() + n.size(),
            MonoTerm::Idx(m, _) | MonoTerm::Dot(m) => 1 + m.size(),
            MonoTerm::Obj(os) => 1 + os.iter().map(|o| o.rhs.size()).sum::<usize>(),
        }
    }

    pub fn map_vars<W>(&self, f: &impl Fn(&V) -> W) -> Rc<MonoTerm<W>> {
        Rc::new(match self {
            MonoTerm::Var(x) => MonoTerm::Var(f(x)),
            MonoTerm::App(m, n) => MonoTerm::App(m.map_vars(f), n.map_vars(f)),
            MonoTerm::Idx(m, i) => MonoTerm::Idx(m.map_vars(f), i.clone()),
            MonoTerm::Dot(m) => MonoTerm::Dot(m.map_vars(f)),
            MonoTerm::Obj(os) => MonoTerm::Obj(
                os.iter()
                    .map(|o| MonoOption {
                        lhs: o.lhs.clone(),
                        rhs: o.rhs.map_vars(f),
                    })
                    .collect(),
            ),
        })
    }
}

impl<V> MonoOption<V> {
    pub fn new(lhs: Copattern, rhs: Rc<MonoTerm<V>>) -> Self {
        MonoOption { lhs, rhs }
    }
}

impl<V> Plug for MonoTerm<V> {
    fn apply(fun: Rc<Self>, arg: Rc<Self>) -> Rc<Self> {
        MonoTerm::app(fun, arg)
    }

    fn index(obj: Rc<Self>, index: Name) -> Rc<Self> {
        MonoTerm::idx(obj, index)
    }
}

impl<V: Variable> MonoTerm<V> {
    pub fn free_names(&self) -> HashSet<Name> {
        let mut out = HashSet::new();
        collect_free(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn occurs_free(&self, x: &Name) -> bool {
        self.free_names().contains(x)
    }
}

fn collect_free<V: Variable>(m: &MonoTerm<V>, bound: &mut Vec<Name>, out: &mut HashSet<Name>) {
    match m {
        MonoTerm::Var(v) => {
            if let Some(x) = v.name() {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
        }
        MonoTerm::App(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        MonoTerm::Idx(a, _) | MonoTerm::Dot(a) => collect_free(a, bound, out),
        MonoTerm::Obj(os) => {
            for o in os.iter() {
                let mark = bound.len();
                bound.extend(binders(&o.lhs).cloned());
                collect_free(&o.rhs, bound, out);
                bound.truncate(mark);
            }
        }
    }
}

/// Every name occurring in the term: free, bound, and indices.
pub fn all_names(m: &MonoTerm) -> HashSet<Name> {
    fn go(m: &MonoTerm, out: &mut HashSet<Name>) {
        match m {
            MonoTerm::Var(x) => {
                out.insert(x.clone());
            }
            MonoTerm::App(a, b) => {
                go(a, out);
                go(b, out);
            }
            MonoTerm::Idx(a, i) => {
                out.insert(i.clone());
                go(a, out);
            }
            MonoTerm::Dot(a) => go(a, out),
            MonoTerm::Obj(os) => {
                for o in os.iter() {
                    for f in o.lhs.iter() {
                        match f {
                            Frame::Arg(x) | Frame::Idx(x) => {
                                out.insert(x.clone());
                            }
                        }
                    }
                    go(&o.rhs, out);
                }
            }
        }
    }
    let mut out = HashSet::new();
    go(m, &mut out);
    out
}

struct Substituter<'a> {
    fresh: &'a mut Fresh,
    taken: Option<HashSet<Name>>,
}

impl Substituter<'_> {
    fn range_names<V: Variable>(&mut self, env: &[(Name, Rc<MonoTerm<V>>)]) -> &HashSet<Name> {
        self.taken.get_or_insert_with(|| {
            env.iter().flat_map(|(_, n)| n.free_names()).collect()
        })
    }

    fn term<V: Variable>(&mut self, m: &Rc<MonoTerm<V>>, env: &[(Name, Rc<MonoTerm<V>>)]) -> Rc<MonoTerm<V>> {
        if env.is_empty() {
            return m.clone();
        }
        match &**m {
            MonoTerm::Var(v) => match v.name().and_then(|x| env.iter().find(|(y, _)| y == x)) {
                Some((_, n)) => n.clone(),
                None => m.clone(),
            },
            MonoTerm::App(a, b) => {
                let (a2, b2) = (self.term(a, env), self.term(b, env));
                if Rc::ptr_eq(a, &a2) && Rc::ptr_eq(b, &b2) {
                    m.clone()
                } else {
                    MonoTerm::app(a2, b2)
                }
            }
            MonoTerm::Idx(a, i) => {
                let a2 = self.term(a, env);
                if Rc::ptr_eq(a, &a2) {
                    m.clone()
                } else {
                    MonoTerm::idx(a2, i.clone())
                }
            }
            MonoTerm::Dot(a) => {
                let a2 = self.term(a, env);
                if Rc::ptr_eq(a, &a2) {
                    m.clone()
                } else {
                    MonoTerm::dot(a2)
                }
            }
            MonoTerm::Obj(os) => {
                let os2: Vec<MonoOption<V>> = os.iter().map(|o| self.option(o, env)).collect();
                Rc::new(MonoTerm::Obj(os2.into()))
            }
        }
    }

    fn option<V: Variable>(&mut self, o: &MonoOption<V>, env: &[(Name, Rc<MonoTerm<V>>)]) -> MonoOption<V> {
        let bound: Vec<Name> = binders(&o.lhs).cloned().collect();
        let mut active: Vec<(Name, Rc<MonoTerm<V>>)> = env
            .iter()
            .filter(|(x, _)| !bound.contains(x))
            .cloned()
            .collect();
        if active.is_empty() {
            return o.clone();
        }
        let clashing: Vec<Name> = {
            let taken = self.range_names(env);
            bound.iter().filter(|b| taken.contains(*b)).cloned().collect()
        };
        if clashing.is_empty() {
            return MonoOption::new(o.lhs.clone(), self.term(&o.rhs, &active));
        }
        let mut avoid: HashSet<Name> = self.range_names(env).clone();
        avoid.extend(o.rhs.free_names());
        avoid.extend(bound.iter().cloned());
        let mut renaming = Vec::new();
        for b in clashing {
            let b2 = self.fresh.rename_avoiding(&b, &avoid);
            avoid.insert(b2.clone());
            if let Some(t) = self.taken.as_mut() {
                t.insert(b2.clone());
            }
            renaming.push((b, b2));
        }
        let lhs = o.lhs.map(|x| {
            renaming
                .iter()
                .find(|(b, _)| b == x)
                .map_or_else(|| x.clone(), |(_, b2)| b2.clone())
        });
        for (b, b2) in renaming {
            active.push((b, MonoTerm::var(V::from_name(b2))));
        }
        MonoOption::new(lhs, self.term(&o.rhs, &active))
    }
}

/// Capture-avoiding simultaneous substitution `m // env`.
pub fn subst<V: Variable>(m: &Rc<MonoTerm<V>>, env: &[(Name, Rc<MonoTerm<V>>)], fresh: &mut Fresh) -> Rc<MonoTerm<V>> {
    Substituter { taken: fresh.free_bound().cloned(), fresh }.term(m, env)
}

/// Renames every binder apart (`x` becomes `x#n`); free names are kept.
pub fn freshen(m: &Rc<MonoTerm>, fresh: &mut Fresh) -> Rc<MonoTerm> {
    fn go(m: &Rc<MonoTerm>, scope: &mut Vec<(Name, Name)>, fresh: &mut Fresh) -> Rc<MonoTerm> {
        match &**m {
            MonoTerm::Var(x) => match scope.iter().rev().find(|(from, _)| from == x) {
                Some((_, to)) => MonoTerm::var(to.clone()),
                None => m.clone(),
            },
            MonoTerm::App(a, b) => MonoTerm::app(go(a, scope, fresh), go(b, scope, fresh)),
            MonoTerm::Idx(a, i) => MonoTerm::idx(go(a, scope, fresh), i.clone()),
            MonoTerm::Dot(a) => MonoTerm::dot(go(a, scope, fresh)),
            MonoTerm::Obj(os) => {
                let os2 = os
                    .iter()
                    .map(|o| {
                        let mark = scope.len();
                        let lhs = o.lhs.map(|x| {
                            if x.as_str() == WILDCARD {
                                return x.clone();
                            }
                            let to = fresh.next_name(x);
                            scope.push((x.clone(), to.clone()));
                            to
                        });
                        let rhs = go(&o.rhs, scope, fresh);
                        scope.truncate(mark);
                        MonoOption::new(lhs, rhs)
                    })
                    .collect();
                MonoTerm::obj(os2)
            }
        }
    }
    go(m, &mut Vec::new(), fresh)
}

/// Equality up to consistent renaming of bound variables.
pub fn alpha_eq(a: &MonoTerm, b: &MonoTerm) -> bool {
    fn go(a: &MonoTerm, b: &MonoTerm, sa: &mut Vec<Name>, sb: &mut Vec<Name>) -> bool {
        match (a, b) {
            (MonoTerm::Var(x), MonoTerm::Var(y)) => {
                let (ix, iy) = (sa.iter().rposition(|n| n == x), sb.iter().rposition(|n| n == y));
                match (ix, iy) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (MonoTerm::App(a1, a2), MonoTerm::App(b1, b2)) => go(a1, b1, sa, sb) && go(a2, b2, sa, sb),
            (MonoTerm::Idx(a1, i), MonoTerm::Idx(b1, j)) => i == j && go(a1, b1, sa, sb),
            (MonoTerm::Dot(a1), MonoTerm::Dot(b1)) => go(a1, b1, sa, sb),
            (MonoTerm::Obj(os), MonoTerm::Obj(ps)) => {
                os.len() == ps.len()
                    && os.iter().zip(ps.iter()).all(|(o, p)| {
                        let (ma, mb) = (sa.len(), sb.len());
                        let ok = copattern_alpha(&o.lhs, &p.lhs, sa, sb) && go(&o.rhs, &p.rhs, sa, sb);
                        sa.truncate(ma);
                        sb.truncate(mb);
                        ok
                    })
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new(), &mut Vec::new())
}

fn copattern_alpha(l: &Copattern, r: &Copattern, sa: &mut Vec<Name>, sb: &mut Vec<Name>) -> bool {
    let (mut i, mut j) = (l.iter(), r.iter());
    loop {
        match (i.next(), j.next()) {
            (None, None) => return true,
            (Some(Frame::Arg(x)), Some(Frame::Arg(y))) => {
                sa.push(x.clone());
                sb.push(y.clone());
            }
            (Some(Frame::Idx(x)), Some(Frame::Idx(y))) if x == y => {}
            _ => return false,
        }
    }
}

/// Copattern built from a list of frames, mostly for tests and examples.
pub fn copattern(frames: &[&str]) -> Copattern {
    Spine::from_frames(
        frames
            .iter()
            .map(|s| {
                let n = Name::from(*s);
                if n.is_index() {
                    Frame::Idx(n)
                } else {
                    Frame::Arg(n)
                }
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> Rc<MonoTerm> {
        MonoTerm::var(Name::from(x))
    }

    fn one(lhs: &[&str], rhs: Rc<MonoTerm>) -> Rc<MonoTerm> {
        MonoTerm::obj(vec![MonoOption::new(copattern(lhs), rhs)])
    }

    #[test]
    fn substitution_replaces_free_occurrence() {
        let env = vec![(Name::from("x"), v("m"))];
        assert_eq!(subst(&v("x"), &env, &mut Fresh::new()), v("m"));
        assert_eq!(subst(&v("y"), &env, &mut Fresh::new()), v("y"));
    }

    #[test]
    fn binder_shadows_substitution() {
        let t = one(&["x"], v("x"));
        let env = vec![(Name::from("x"), v("n"))];
        assert_eq!(subst(&t, &env, &mut Fresh::new()), t);
    }

    #[test]
    fn substitution_avoids_capture() {
        // fun { y -> x } [x := y]  must not capture the free y
        let t = one(&["y"], v("x"));
        let env = vec![(Name::from("x"), v("y"))];
        let got = subst(&t, &env, &mut Fresh::new());
        let MonoTerm::Obj(os) = &*got else { panic!() };
        let bound = binders(&os[0].lhs).next().unwrap().clone();
        assert_ne!(bound, Name::from("y"));
        assert_eq!(os[0].rhs, v("y"));
    }

    #[test]
    fn freshen_renames_each_clause_apart() {
        let t = MonoTerm::obj(vec![
            MonoOption::new(copattern(&["x"]), v("x")),
            MonoOption::new(copattern(&["x"]), v("x")),
        ]);
        let f = freshen(&t, &mut Fresh::new());
        let MonoTerm::Obj(os) = &*f else { panic!() };
        let b0 = binders(&os[0].lhs).next().unwrap();
        let b1 = binders(&os[1].lhs).next().unwrap();
        assert_ne!(b0, b1);
        assert!(alpha_eq(&t, &f));
    }

    #[test]
    fn alpha_equivalence_respects_binding() {
        assert!(alpha_eq(&v("x"), &v("x")));
        assert!(alpha_eq(&one(&["x"], v("x")), &one(&["y"], v("y"))));
        assert!(!alpha_eq(&one(&["x"], v("x")), &one(&["y"], v("x"))));
        assert!(!alpha_eq(&one(&["x", "Head"], v("x")), &one(&["y", "Tail"], v("y"))));
    }
}
