//! Terms of the compositional calculus: nested options handled by a
//! fallback term (`O ? M`), question capture, `raise`, and responses
//! `M ! R` delimiting the current question.

use std::collections::HashSet;
use std::rc::Rc;

use super::{Fresh, Name, Plug, Variable};

#[derive(Clone, Debug, PartialEq)]
pub enum CompTerm<V = Name> {
    Var(V),
    App(Rc<CompTerm<V>>, Rc<CompTerm<V>>),
    Idx(Rc<CompTerm<V>>, Name),
    Dot(Rc<CompTerm<V>>),
    Handle(Rc<CompOption<V>>, Rc<CompTerm<V>>),
    Capture(Name, Rc<CompResponse<V>>),
    Raise,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CompOption<V = Name> {
    PopArg(Name, Rc<CompOption<V>>),
    GetIdx(Name, Rc<CompOption<V>>),
    Done(Name, Rc<CompTerm<V>>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum CompResponse<V = Name> {
    Splat(V),
    End,
    AndThen(Rc<CompTerm<V>>, Rc<CompResponse<V>>),
}

/// A substitution maps variables to terms and covariables to responses.
#[derive(Clone, Debug, PartialEq)]
pub enum SubstEntry<V = Name> {
    Term(Rc<CompTerm<V>>),
    Response(Rc<CompResponse<V>>),
}

pub type CompSubst<V = Name> = Vec<(Name, SubstEntry<V>)>;

/// A term variable was bound to a response or a covariable to a term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KindMismatch(pub Name);

/// Binder used by `ε -> M = ?_ -> M`; it can never occur in a term.
pub const WILDCARD: &str = "_";

impl<V> CompTerm<V> {
    pub fn var(x: V) -> Rc<Self> {
        Rc::new(CompTerm::Var(x))
    }

    pub fn app(m: Rc<Self>, n: Rc<Self>) -> Rc<Self> {
        Rc::new(CompTerm::App(m, n))
    }

    pub fn idx(m: Rc<Self>, i: impl Into<Name>) -> Rc<Self> {
        Rc::new(CompTerm::Idx(m, i.into()))
    }

    pub fn dot(m: Rc<Self>) -> Rc<Self> {
        Rc::new(CompTerm::Dot(m))
    }

    pub fn handle(o: Rc<CompOption<V>>, m: Rc<Self>) -> Rc<Self> {
        Rc::new(CompTerm::Handle(o, m))
    }

    pub fn capture(q: impl Into<Name>, r: Rc<CompResponse<V>>) -> Rc<Self> {
        Rc::new(CompTerm::Capture(q.into(), r))
    }

    pub fn raise() -> Rc<Self> {
        Rc::new(CompTerm::Raise)
    }

    pub fn size(&self) -> usize {
        match self {
            CompTerm::Var(_) | CompTerm::Raise => 1,
            CompTerm::App(m, n) => 1 + m.size() + n.size(),
            CompTerm::Idx(m, _) | CompTerm::Dot(m) => 1 + m.size(),
            CompTerm::Handle(o, m) => 1 + o.size() + m.size(),
            CompTerm::Capture(_, r) => 1 + r.size(),
        }
    }

    pub fn map_vars<W>(&self, f: &impl Fn(&V) -> W) -> Rc<CompTerm<W>> {
        Rc::new(match self {
            CompTerm::Var(x) => CompTerm::Var(f(x)),
            CompTerm::App(m, n) => CompTerm::App(m.map_vars(f), n.map_vars(f)),
            CompTerm::Idx(m, i) => CompTerm::Idx(m.map_vars(f), i.clone()),
            CompTerm::Dot(m) => CompTerm::Dot(m.map_vars(f)),
            CompTerm::Handle(o, m) => CompTerm::Handle(o.map_vars(f), m.map_vars(f)),
            CompTerm::Capture(q, r) => CompTerm::Capture(q.clone(), r.map_vars(f)),
            CompTerm::Raise => CompTerm::Raise,
        })
    }
}

impl<V> CompOption<V> {
    pub fn pop(x: impl Into<Name>, o: Rc<Self>) -> Rc<Self> {
        Rc::new(CompOption::PopArg(x.into(), o))
    }

    pub fn get(i: impl Into<Name>, o: Rc<Self>) -> Rc<Self> {
        Rc::new(CompOption::GetIdx(i.into(), o))
    }

    pub fn done(x: impl Into<Name>, m: Rc<CompTerm<V>>) -> Rc<Self> {
        Rc::new(CompOption::Done(x.into(), m))
    }

    pub fn size(&self) -> usize {
        match self {
            CompOption::PopArg(_, o) | CompOption::GetIdx(_, o) => 1 + o.size(),
            CompOption::Done(_, m) => 1 + m.size(),
        }
    }

    pub fn map_vars<W>(&self, f: &impl Fn(&V) -> W) -> Rc<CompOption<W>> {
        Rc::new(match self {
            CompOption::PopArg(x, o) => CompOption::PopArg(x.clone(), o.map_vars(f)),
            CompOption::GetIdx(i, o) => CompOption::GetIdx(i.clone(), o.map_vars(f)),
            CompOption::Done(x, m) => CompOption::Done(x.clone(), m.map_vars(f)),
        })
    }
}

impl<V> CompResponse<V> {
    pub fn splat(k: V) -> Rc<Self> {
        Rc::new(CompResponse::Splat(k))
    }

    pub fn end() -> Rc<Self> {
        Rc::new(CompResponse::End)
    }

    pub fn and_then(m: Rc<CompTerm<V>>, r: Rc<Self>) -> Rc<Self> {
        Rc::new(CompResponse::AndThen(m, r))
    }

    pub fn size(&self) -> usize {
        match self {
            CompResponse::Splat(_) | CompResponse::End => 1,
            CompResponse::AndThen(m, r) => 1 + m.size() + r.size(),
        }
    }

    pub fn map_vars<W>(&self, f: &impl Fn(&V) -> W) -> Rc<CompResponse<W>> {
        Rc::new(match self {
            CompResponse::Splat(k) => CompResponse::Splat(f(k)),
            CompResponse::End => CompResponse::End,
            CompResponse::AndThen(m, r) => CompResponse::AndThen(m.map_vars(f), r.map_vars(f)),
        })
    }
}

impl<V> Plug for CompTerm<V> {
    fn apply(fun: Rc<Self>, arg: Rc<Self>) -> Rc<Self> {
        CompTerm::app(fun, arg)
    }

    fn index(obj: Rc<Self>, index: Name) -> Rc<Self> {
        CompTerm::idx(obj, index)
    }
}

// Free names, shared by the three syntactic categories.

fn free_var<V: Variable>(v: &V, bound: &[Name], out: &mut HashSet<Name>) {
    if let Some(x) = v.name() {
        if !bound.contains(x) {
            out.insert(x.clone());
        }
    }
}

fn free_term<V: Variable>(m: &CompTerm<V>, bound: &mut Vec<Name>, out: &mut HashSet<Name>) {
    match m {
        CompTerm::Var(v) => free_var(v, bound, out),
        CompTerm::App(a, b) => {
            free_term(a, bound, out);
            free_term(b, bound, out);
        }
        CompTerm::Idx(a, _) | CompTerm::Dot(a) => free_term(a, bound, out),
        CompTerm::Handle(o, a) => {
            free_option(o, bound, out);
            free_term(a, bound, out);
        }
        CompTerm::Capture(q, r) => {
            bound.push(q.clone());
            free_response(r, bound, out);
            bound.pop();
        }
        CompTerm::Raise => {}
    }
}

fn free_option<V: Variable>(o: &CompOption<V>, bound: &mut Vec<Name>, out: &mut HashSet<Name>) {
    match o {
        CompOption::PopArg(x, o) => {
            bound.push(x.clone());
            free_option(o, bound, out);
            bound.pop();
        }
        CompOption::GetIdx(_, o) => free_option(o, bound, out),
        CompOption::Done(x, m) => {
            bound.push(x.clone());
            free_term(m, bound, out);
            bound.pop();
        }
    }
}

fn free_response<V: Variable>(r: &CompResponse<V>, bound: &mut Vec<Name>, out: &mut HashSet<Name>) {
    match r {
        CompResponse::Splat(k) => free_var(k, bound, out),
        CompResponse::End => {}
        CompResponse::AndThen(m, r) => {
            free_term(m, bound, out);
            free_response(r, bound, out);
        }
    }
}

impl<V: Variable> CompTerm<V> {
    pub fn free_names(&self) -> HashSet<Name> {
        let mut out = HashSet::new();
        free_term(self, &mut Vec::new(), &mut out);
        out
    }
}

impl<V: Variable> CompOption<V> {
    pub fn free_names(&self) -> HashSet<Name> {
        let mut out = HashSet::new();
        free_option(self, &mut Vec::new(), &mut out);
        out
    }
}

impl<V: Variable> CompResponse<V> {
    pub fn free_names(&self) -> HashSet<Name> {
        let mut out = HashSet::new();
        free_response(self, &mut Vec::new(), &mut out);
        out
    }
}

impl<V: Variable> SubstEntry<V> {
    pub fn free_names(&self) -> HashSet<Name> {
        match self {
            SubstEntry::Term(m) => m.free_names(),
            SubstEntry::Response(r) => r.free_names(),
        }
    }
}

/// Every name occurring anywhere in a response, including indices.
pub fn all_names(r: &CompResponse) -> HashSet<Name> {
    let mut out = HashSet::new();
    names_response(r, &mut out);
    out
}

pub fn all_names_term(m: &CompTerm) -> HashSet<Name> {
    let mut out = HashSet::new();
    names_term(m, &mut out);
    out
}

pub fn all_names_option(o: &CompOption) -> HashSet<Name> {
    let mut out = HashSet::new();
    names_option(o, &mut out);
    out
}

fn names_term(m: &CompTerm, out: &mut HashSet<Name>) {
    match m {
        CompTerm::Var(x) => {
            out.insert(x.clone());
        }
        CompTerm::App(a, b) => {
            names_term(a, out);
            names_term(b, out);
        }
        CompTerm::Idx(a, i) => {
            out.insert(i.clone());
            names_term(a, out);
        }
        CompTerm::Dot(a) => names_term(a, out),
        CompTerm::Handle(o, a) => {
            names_option(o, out);
            names_term(a, out);
        }
        CompTerm::Capture(q, r) => {
            out.insert(q.clone());
            names_response(r, out);
        }
        CompTerm::Raise => {}
    }
}

fn names_option(o: &CompOption, out: &mut HashSet<Name>) {
    match o {
        CompOption::PopArg(x, o) | CompOption::GetIdx(x, o) => {
            out.insert(x.clone());
            names_option(o, out);
        }
        CompOption::Done(x, m) => {
            out.insert(x.clone());
            names_term(m, out);
        }
    }
}

fn names_response(r: &CompResponse, out: &mut HashSet<Name>) {
    match r {
        CompResponse::Splat(k) => {
            out.insert(k.clone());
        }
        CompResponse::End => {}
        CompResponse::AndThen(m, r) => {
            names_term(m, out);
            names_response(r, out);
        }
    }
}

type Env<'e, V> = &'e [(Name, SubstEntry<V>)];

struct Substituter<'a> {
    fresh: &'a mut Fresh,
    taken: Option<HashSet<Name>>,
}

impl Substituter<'_> {
    fn range_names<V: Variable>(&mut self, env: Env<V>) -> &HashSet<Name> {
        self.taken
            .get_or_insert_with(|| env.iter().flat_map(|(_, e)| e.free_names()).collect())
    }

    /// Drops shadowed entries and renames `x` apart if it would capture.
    /// Returns the (possibly renamed) binder and the environment for its scope.
    fn bind<V: Variable>(
        &mut self,
        x: &Name,
        env: Env<V>,
        root: Env<V>,
        body_fv: impl FnOnce() -> HashSet<Name>,
        covariable: bool,
    ) -> (Name, Vec<(Name, SubstEntry<V>)>) {
        let mut active: Vec<(Name, SubstEntry<V>)> =
            env.iter().filter(|(y, _)| y != x).cloned().collect();
        if active.is_empty() || !self.range_names(root).contains(x) {
            return (x.clone(), active);
        }
        let mut avoid = self.range_names(root).clone();
        avoid.extend(body_fv());
        avoid.insert(x.clone());
        let x2 = self.fresh.rename_avoiding(x, &avoid);
        if let Some(t) = self.taken.as_mut() {
            t.insert(x2.clone());
        }
        let entry = if covariable {
            SubstEntry::Response(CompResponse::splat(V::from_name(x2.clone())))
        } else {
            SubstEntry::Term(CompTerm::var(V::from_name(x2.clone())))
        };
        active.push((x.clone(), entry));
        (x2, active)
    }

    fn term<V: Variable>(
        &mut self,
        m: &Rc<CompTerm<V>>,
        env: Env<V>,
        root: Env<V>,
    ) -> Result<Rc<CompTerm<V>>, KindMismatch> {
        if env.is_empty() {
            return Ok(m.clone());
        }
        Ok(match &**m {
            CompTerm::Var(v) => match v.name().and_then(|x| env.iter().find(|(y, _)| y == x)) {
                Some((_, SubstEntry::Term(n))) => n.clone(),
                Some((x, SubstEntry::Response(_))) => return Err(KindMismatch(x.clone())),
                None => m.clone(),
            },
            CompTerm::App(a, b) => CompTerm::app(self.term(a, env, root)?, self.term(b, env, root)?),
            CompTerm::Idx(a, i) => CompTerm::idx(self.term(a, env, root)?, i.clone()),
            CompTerm::Dot(a) => CompTerm::dot(self.term(a, env, root)?),
            CompTerm::Handle(o, a) => CompTerm::handle(self.option(o, env, root)?, self.term(a, env, root)?),
            CompTerm::Capture(q, r) => {
                let (q2, inner) = self.bind(q, env, root, || r.free_names(), true);
                CompTerm::capture(q2, self.response(r, &inner, root)?)
            }
            CompTerm::Raise => m.clone(),
        })
    }

    fn option<V: Variable>(
        &mut self,
        o: &Rc<CompOption<V>>,
        env: Env<V>,
        root: Env<V>,
    ) -> Result<Rc<CompOption<V>>, KindMismatch> {
        if env.is_empty() {
            return Ok(o.clone());
        }
        Ok(match &**o {
            CompOption::PopArg(x, rest) => {
                let (x2, inner) = self.bind(x, env, root, || rest.free_names(), false);
                CompOption::pop(x2, self.option(rest, &inner, root)?)
            }
            CompOption::GetIdx(i, rest) => CompOption::get(i.clone(), self.option(rest, env, root)?),
            CompOption::Done(x, m) => {
                let (x2, inner) = self.bind(x, env, root, || m.free_names(), false);
                CompOption::done(x2, self.term(m, &inner, root)?)
            }
        })
    }

    fn response<V: Variable>(
        &mut self,
        r: &Rc<CompResponse<V>>,
        env: Env<V>,
        root: Env<V>,
    ) -> Result<Rc<CompResponse<V>>, KindMismatch> {
        if env.is_empty() {
            return Ok(r.clone());
        }
        Ok(match &**r {
            CompResponse::Splat(k) => match k.name().and_then(|x| env.iter().find(|(y, _)| y == x)) {
                Some((_, SubstEntry::Response(s))) => s.clone(),
                Some((x, SubstEntry::Term(_))) => return Err(KindMismatch(x.clone())),
                None => r.clone(),
            },
            CompResponse::End => r.clone(),
            CompResponse::AndThen(m, rest) => {
                CompResponse::and_then(self.term(m, env, root)?, self.response(rest, env, root)?)
            }
        })
    }
}

pub fn subst_term<V: Variable>(
    m: &Rc<CompTerm<V>>,
    env: &[(Name, SubstEntry<V>)],
    fresh: &mut Fresh,
) -> Result<Rc<CompTerm<V>>, KindMismatch> {
    Substituter { taken: fresh.free_bound().cloned(), fresh }.term(m, env, env)
}

pub fn subst_option<V: Variable>(
    o: &Rc<CompOption<V>>,
    env: &[(Name, SubstEntry<V>)],
    fresh: &mut Fresh,
) -> Result<Rc<CompOption<V>>, KindMismatch> {
    Substituter { taken: fresh.free_bound().cloned(), fresh }.option(o, env, env)
}

pub fn subst_response<V: Variable>(
    r: &Rc<CompResponse<V>>,
    env: &[(Name, SubstEntry<V>)],
    fresh: &mut Fresh,
) -> Result<Rc<CompResponse<V>>, KindMismatch> {
    Substituter { taken: fresh.free_bound().cloned(), fresh }.response(r, env, env)
}

// Freshening: every binder except the wildcard gets a new `#n` name.

struct Freshener<'a> {
    fresh: &'a mut Fresh,
    scope: Vec<(Name, Name)>,
}

impl Freshener<'_> {
    fn rename(&self, x: &Name) -> Name {
        self.scope
            .iter()
            .rev()
            .find(|(from, _)| from == x)
            .map_or_else(|| x.clone(), |(_, to)| to.clone())
    }

    fn enter(&mut self, x: &Name) -> Name {
        if x.as_str() == WILDCARD {
            return x.clone();
        }
        let to = self.fresh.next_name(x);
        self.scope.push((x.clone(), to.clone()));
        to
    }

    fn leave(&mut self, x: &Name) {
        if x.as_str() != WILDCARD {
            self.scope.pop();
        }
    }

    fn term(&mut self, m: &Rc<CompTerm>) -> Rc<CompTerm> {
        match &**m {
            CompTerm::Var(x) => CompTerm::var(self.rename(x)),
            CompTerm::App(a, b) => {
                let a2 = self.term(a);
                CompTerm::app(a2, self.term(b))
            }
            CompTerm::Idx(a, i) => CompTerm::idx(self.term(a), i.clone()),
            CompTerm::Dot(a) => CompTerm::dot(self.term(a)),
            CompTerm::Handle(o, a) => {
                let o2 = self.option(o);
                CompTerm::handle(o2, self.term(a))
            }
            CompTerm::Capture(q, r) => {
                let q2 = self.enter(q);
                let r2 = self.response(r);
                self.leave(q);
                CompTerm::capture(q2, r2)
            }
            CompTerm::Raise => m.clone(),
        }
    }

    fn option(&mut self, o: &Rc<CompOption>) -> Rc<CompOption> {
        match &**o {
            CompOption::PopArg(x, rest) => {
                let x2 = self.enter(x);
                let rest2 = self.option(rest);
                self.leave(x);
                CompOption::pop(x2, rest2)
            }
            CompOption::GetIdx(i, rest) => CompOption::get(i.clone(), self.option(rest)),
            CompOption::Done(x, m) => {
                let x2 = self.enter(x);
                let m2 = self.term(m);
                self.leave(x);
                CompOption::done(x2, m2)
            }
        }
    }

    fn response(&mut self, r: &Rc<CompResponse>) -> Rc<CompResponse> {
        match &**r {
            CompResponse::Splat(k) => CompResponse::splat(self.rename(k)),
            CompResponse::End => r.clone(),
            CompResponse::AndThen(m, rest) => {
                let m2 = self.term(m);
                CompResponse::and_then(m2, self.response(rest))
            }
        }
    }
}

pub fn freshen_term(m: &Rc<CompTerm>, fresh: &mut Fresh) -> Rc<CompTerm> {
    Freshener { fresh, scope: Vec::new() }.term(m)
}

pub fn freshen_option(o: &Rc<CompOption>, fresh: &mut Fresh) -> Rc<CompOption> {
    Freshener { fresh, scope: Vec::new() }.option(o)
}

pub fn freshen_response(r: &Rc<CompResponse>, fresh: &mut Fresh) -> Rc<CompResponse> {
    Freshener { fresh, scope: Vec::new() }.response(r)
}

// Alpha-equivalence via parallel binder stacks.

#[derive(Default)]
struct Alpha {
    left: Vec<Name>,
    right: Vec<Name>,
}

impl Alpha {
    fn var(&self, x: &Name, y: &Name) -> bool {
        let i = self.left.iter().rposition(|n| n == x);
        let j = self.right.iter().rposition(|n| n == y);
        match (i, j) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        }
    }

    fn under<T>(&mut self, x: &Name, y: &Name, f: impl FnOnce(&mut Self) -> T) -> T {
        self.left.push(x.clone());
        self.right.push(y.clone());
        let out = f(self);
        self.left.pop();
        self.right.pop();
        out
    }

    fn term(&mut self, a: &CompTerm, b: &CompTerm) -> bool {
        match (a, b) {
            (CompTerm::Var(x), CompTerm::Var(y)) => self.var(x, y),
            (CompTerm::App(a1, a2), CompTerm::App(b1, b2)) => self.term(a1, b1) && self.term(a2, b2),
            (CompTerm::Idx(a1, i), CompTerm::Idx(b1, j)) => i == j && self.term(a1, b1),
            (CompTerm::Dot(a1), CompTerm::Dot(b1)) => self.term(a1, b1),
            (CompTerm::Handle(o, a1), CompTerm::Handle(p, b1)) => self.option(o, p) && self.term(a1, b1),
            (CompTerm::Capture(q, r), CompTerm::Capture(p, s)) => self.under(q, p, |me| me.response(r, s)),
            (CompTerm::Raise, CompTerm::Raise) => true,
            _ => false,
        }
    }

    fn option(&mut self, a: &CompOption, b: &CompOption) -> bool {
        match (a, b) {
            (CompOption::PopArg(x, o), CompOption::PopArg(y, p)) => self.under(x, y, |me| me.option(o, p)),
            (CompOption::GetIdx(i, o), CompOption::GetIdx(j, p)) => i == j && self.option(o, p),
            (CompOption::Done(x, m), CompOption::Done(y, n)) => self.under(x, y, |me| me.term(m, n)),
            _ => false,
        }
    }

    fn response(&mut self, a: &CompResponse, b: &CompResponse) -> bool {
        match (a, b) {
            (CompResponse::Splat(x), CompResponse::Splat(y)) => self.var(x, y),
            (CompResponse::End, CompResponse::End) => true,
            (CompResponse::AndThen(m, r), CompResponse::AndThen(n, s)) => self.term(m, n) && self.response(r, s),
            _ => false,
        }
    }
}

pub fn alpha_eq_term(a: &CompTerm, b: &CompTerm) -> bool {
    Alpha::default().term(a, b)
}

pub fn alpha_eq_option(a: &CompOption, b: &CompOption) -> bool {
    Alpha::default().option(a, b)
}

pub fn alpha_eq_response(a: &CompResponse, b: &CompResponse) -> bool {
    Alpha::default().response(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> Rc<CompTerm> {
        CompTerm::var(Name::from(x))
    }

    fn term_entry(x: &str, m: Rc<CompTerm>) -> (Name, SubstEntry) {
        (Name::from(x), SubstEntry::Term(m))
    }

    #[test]
    fn covariable_substitution_replaces_splat() {
        let r = CompResponse::and_then(v("f"), CompResponse::splat(Name::from("k")));
        let env = vec![(Name::from("k"), SubstEntry::Response(CompResponse::end()))];
        let got = subst_response(&r, &env, &mut Fresh::new()).unwrap();
        assert_eq!(got, CompResponse::and_then(v("f"), CompResponse::end()));
    }

    #[test]
    fn kind_mismatch_is_reported() {
        let env = vec![(Name::from("x"), SubstEntry::Response(CompResponse::end()))];
        assert_eq!(
            subst_term(&v("x"), &env, &mut Fresh::new()),
            Err(KindMismatch(Name::from("x")))
        );
        let env = vec![term_entry("k", v("m"))];
        let r = CompResponse::splat(Name::from("k"));
        assert!(subst_response(&r, &env, &mut Fresh::new()).is_err());
    }

    #[test]
    fn done_binder_avoids_capture() {
        // (?y -> x) ? raise  [x := y]
        let m = CompTerm::handle(CompOption::done("y", v("x")), CompTerm::raise());
        let got = subst_term(&m, &[term_entry("x", v("y"))], &mut Fresh::new()).unwrap();
        let CompTerm::Handle(o, _) = &*got else { panic!() };
        let CompOption::Done(b, body) = &**o else { panic!() };
        assert_ne!(b.as_str(), "y");
        assert_eq!(*body, v("y"));
    }

    #[test]
    fn capture_binder_shadows() {
        let m = CompTerm::capture("k", CompResponse::splat(Name::from("k")));
        let env = vec![(Name::from("k"), SubstEntry::Response(CompResponse::end()))];
        assert_eq!(subst_term(&m, &env, &mut Fresh::new()).unwrap(), m);
    }

    #[test]
    fn freshen_keeps_wildcard_and_alpha_class() {
        let o = CompOption::pop("x", CompOption::done(WILDCARD, v("x")));
        let f = freshen_option(&o, &mut Fresh::new());
        let CompOption::PopArg(x, rest) = &*f else { panic!() };
        assert_ne!(x.as_str(), "x");
        assert!(matches!(&**rest, CompOption::Done(w, _) if w.as_str() == WILDCARD));
        assert!(alpha_eq_option(&o, &f));
    }

    #[test]
    fn alpha_distinguishes_free_from_bound() {
        let a = CompTerm::capture("k", CompResponse::splat(Name::from("k")));
        let b = CompTerm::capture("q", CompResponse::splat(Name::from("q")));
        let c = CompTerm::capture("q", CompResponse::splat(Name::from("k")));
        assert!(alpha_eq_term(&a, &b));
        assert!(!alpha_eq_term(&a, &c));
    }
}
