//! Copattern monoid, `ask`, substitution, freshening and alpha-equivalence,
//! checked against small independent oracles.

use std::collections::HashSet;
use std::rc::Rc;

use copat_core::frontend::Calculus;
use copat_core::harness::{Gen, GenConfig};
use copat_core::syntax::comp::{subst_response, subst_term};
use copat_core::syntax::mono::{alpha_eq, copattern, freshen, subst};
use copat_core::syntax::{
    ask, binders, CompResponse, CompTerm, Frame, Fresh, KindMismatch, MonoOption, MonoTerm, Name, Question, Spine,
    SubstEntry,
};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::Rng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, rng_seed: RngSeed::Fixed(42), failure_persistence: None, ..ProptestConfig::default() }
}

fn v(x: &str) -> Rc<MonoTerm> {
    MonoTerm::var(Name::from(x))
}

fn obj1(lhs: &[&str], rhs: Rc<MonoTerm>) -> Rc<MonoTerm> {
    MonoTerm::obj(vec![MonoOption::new(copattern(lhs), rhs)])
}

fn gen(seed: u64, size: usize) -> Gen {
    Gen::new(&GenConfig::new(Calculus::Mono, seed, size))
}

fn frame() -> impl Strategy<Value = Frame<Name>> {
    prop_oneof![
        prop::sample::select(vec!["x", "y", "z"]).prop_map(|x| Frame::Arg(Name::from(x))),
        prop::sample::select(vec!["Head", "Tail"]).prop_map(|i| Frame::Idx(Name::from(i))),
    ]
}

fn spine() -> impl Strategy<Value = Spine<Name>> {
    prop::collection::vec(frame(), 0..6).prop_map(Spine::from_frames)
}

// Naive substitution: exact when no binder of `m` is free in the ranges.
fn naive(m: &MonoTerm, env: &[(Name, Rc<MonoTerm>)], bound: &mut Vec<Name>) -> Rc<MonoTerm> {
    match m {
        MonoTerm::Var(x) if !bound.contains(x) => {
            env.iter().find(|(y, _)| y == x).map_or_else(|| MonoTerm::var(x.clone()), |(_, n)| n.clone())
        }
        MonoTerm::Var(x) => MonoTerm::var(x.clone()),
        MonoTerm::App(a, b) => MonoTerm::app(naive(a, env, bound), naive(b, env, bound)),
        MonoTerm::Idx(a, i) => MonoTerm::idx(naive(a, env, bound), i.clone()),
        MonoTerm::Dot(a) => MonoTerm::dot(naive(a, env, bound)),
        MonoTerm::Obj(os) => MonoTerm::obj(
            os.iter()
                .map(|o| {
                    let mark = bound.len();
                    bound.extend(binders(&o.lhs).cloned());
                    let rhs = naive(&o.rhs, env, bound);
                    bound.truncate(mark);
                    MonoOption::new(o.lhs.clone(), rhs)
                })
                .collect(),
        ),
    }
}

/// Nameless form: bound variables become (binder depth, position).
#[derive(Debug, PartialEq)]
enum Db {
    Free(Name),
    Bound(usize),
    App(Box<Db>, Box<Db>),
    Idx(Box<Db>, Name),
    Dot(Box<Db>),
    Obj(Vec<(Vec<Option<Name>>, Db)>),
}

fn de_bruijn(m: &MonoTerm, scope: &mut Vec<Name>) -> Db {
    match m {
        MonoTerm::Var(x) => match scope.iter().rposition(|y| y == x) {
            Some(i) => Db::Bound(scope.len() - 1 - i),
            None => Db::Free(x.clone()),
        },
        MonoTerm::App(a, b) => Db::App(Box::new(de_bruijn(a, scope)), Box::new(de_bruijn(b, scope))),
        MonoTerm::Idx(a, i) => Db::Idx(Box::new(de_bruijn(a, scope)), i.clone()),
        MonoTerm::Dot(a) => Db::Dot(Box::new(de_bruijn(a, scope))),
        MonoTerm::Obj(os) => Db::Obj(
            os.iter()
                .map(|o| {
                    let mark = scope.len();
                    let shape = o
                        .lhs
                        .iter()
                        .map(|f| match f {
                            Frame::Arg(x) => {
                                scope.push(x.clone());
                                None
                            }
                            Frame::Idx(i) => Some(i.clone()),
                        })
                        .collect();
                    let body = de_bruijn(&o.rhs, scope);
                    scope.truncate(mark);
                    (shape, body)
                })
                .collect(),
        ),
    }
}

fn db_eq(a: &MonoTerm, b: &MonoTerm) -> bool {
    de_bruijn(a, &mut Vec::new()) == de_bruijn(b, &mut Vec::new())
}

fn var_count(m: &MonoTerm) -> usize {
    match m {
        MonoTerm::Var(_) => 1,
        MonoTerm::App(a, b) => var_count(a) + var_count(b),
        MonoTerm::Idx(a, _) | MonoTerm::Dot(a) => var_count(a),
        MonoTerm::Obj(os) => os.iter().map(|o| var_count(&o.rhs)).sum(),
    }
}

/// Replaces the `n`th variable occurrence by `to`.
fn mutate(m: &Rc<MonoTerm>, n: &mut usize, to: &Name) -> Rc<MonoTerm> {
    match &**m {
        MonoTerm::Var(_) => {
            let hit = *n == 0;
            *n = n.wrapping_sub(1);
            if hit {
                MonoTerm::var(to.clone())
            } else {
                m.clone()
            }
        }
        MonoTerm::App(a, b) => {
            let a = mutate(a, n, to);
            MonoTerm::app(a, mutate(b, n, to))
        }
        MonoTerm::Idx(a, i) => MonoTerm::idx(mutate(a, n, to), i.clone()),
        MonoTerm::Dot(a) => MonoTerm::dot(mutate(a, n, to)),
        MonoTerm::Obj(os) => MonoTerm::obj(os.iter().map(|o| MonoOption::new(o.lhs.clone(), mutate(&o.rhs, n, to))).collect()),
    }
}

fn all_binders(m: &MonoTerm, out: &mut Vec<Name>) {
    match m {
        MonoTerm::Var(_) => {}
        MonoTerm::App(a, b) => {
            all_binders(a, out);
            all_binders(b, out);
        }
        MonoTerm::Idx(a, _) | MonoTerm::Dot(a) => all_binders(a, out),
        MonoTerm::Obj(os) => {
            for o in os.iter() {
                out.extend(binders(&o.lhs).cloned());
                all_binders(&o.rhs, out);
            }
        }
    }
}

#[test]
fn compose_examples() {
    let q: Spine<Name> = copattern(&["x"]);
    assert_eq!(Spine::nop().compose(&q), q);
    assert_eq!(copattern(&["x"]).compose(&copattern(&["Head"])), copattern(&["x", "Head"]));
}

#[test]
fn ask_examples() {
    assert_eq!(ask(v("f"), &Question::nop()), v("f"));
    let q = Question::arg(v("x"), Question::idx(Name::from("Head"), Question::nop()));
    assert_eq!(ask(v("f"), &q), MonoTerm::idx(MonoTerm::app(v("f"), v("x")), "Head"));
}

#[test]
fn subst_examples() {
    let env = vec![(Name::from("x"), v("m"))];
    assert_eq!(subst(&v("x"), &env, &mut Fresh::new()), v("m"));
    assert_eq!(subst(&v("y"), &env, &mut Fresh::new()), v("y"));
    let shadow = obj1(&["x"], v("x"));
    assert_eq!(subst(&shadow, &[(Name::from("x"), v("n"))], &mut Fresh::new()), shadow);
}

#[test]
fn comp_subst_replaces_covariables_and_rejects_kind_mismatch() {
    let k = CompResponse::splat(Name::from("k"));
    let end = CompResponse::end();
    let env = vec![(Name::from("k"), SubstEntry::Response(end.clone()))];
    assert_eq!(subst_response(&k, &env, &mut Fresh::new()), Ok(end.clone()));
    let x = CompTerm::var(Name::from("x"));
    let wrong = vec![(Name::from("x"), SubstEntry::Response(end))];
    assert_eq!(subst_term(&x, &wrong, &mut Fresh::new()), Err(KindMismatch(Name::from("x"))));
    let wrong = vec![(Name::from("k"), SubstEntry::Term(x))];
    assert_eq!(subst_response(&k, &wrong, &mut Fresh::new()), Err(KindMismatch(Name::from("k"))));
}

#[test]
fn freshen_examples() {
    let t = MonoTerm::obj(vec![MonoOption::new(copattern(&["x"]), v("x")), MonoOption::new(copattern(&["x"]), v("x"))]);
    let f = freshen(&t, &mut Fresh::new());
    let mut bs = Vec::new();
    all_binders(&f, &mut bs);
    assert_eq!(bs.len(), 2);
    assert_ne!(bs[0], bs[1]);
    assert!(bs.iter().all(|b| b.base() == "x"));
    assert!(alpha_eq(&t, &f));
}

#[test]
fn alpha_eq_examples() {
    assert!(alpha_eq(&v("x"), &v("x")));
    assert!(alpha_eq(&obj1(&["x"], v("x")), &obj1(&["y"], v("y"))));
    assert!(!alpha_eq(&obj1(&["x"], v("x")), &obj1(&["y"], v("x"))));
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn nop_is_identity(a in spine()) {
        prop_assert_eq!(Spine::nop().compose(&a), a.clone());
        prop_assert_eq!(a.compose(&Spine::nop()), a);
    }

    #[test]
    fn compose_is_associative(a in spine(), b in spine(), c in spine()) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn ask_is_a_homomorphism(seed in any::<u64>()) {
        let mut g = gen(seed, 10);
        let m = g.mono();
        let q = g.mono_question(4, 3);
        let q2 = g.mono_question(4, 3);
        prop_assert_eq!(ask(ask(m.clone(), &q), &q2), ask(m, &q.compose(&q2)));
    }

    #[test]
    fn subst_agrees_with_naive_substitution_without_capture(seed in any::<u64>()) {
        let mut g = gen(seed, 20);
        let m = g.mono();
        let pool: Vec<Name> = ["p", "q"].iter().map(|x| Name::from(*x)).collect();
        let mut env = Vec::new();
        for x in ["a", "b", "c"] {
            if g.rng().gen_bool(0.6) {
                let n = g.rng().gen_range(1..6);
                env.push((Name::from(x), g.mono_term_over(n, &pool)));
            }
        }
        prop_assert_eq!(subst(&m, &env, &mut Fresh::avoiding(&HashSet::new())), naive(&m, &env, &mut Vec::new()));
    }

    #[test]
    fn subst_never_captures(seed in any::<u64>()) {
        // Ranges mention the generator's own binder names.
        let mut g = gen(seed, 20);
        let m = g.mono();
        let mut bs = Vec::new();
        all_binders(&m, &mut bs);
        let pool: Vec<Name> = bs.into_iter().take(3).chain([Name::from("p")]).collect();
        let n = g.rng().gen_range(1..6);
        let env = vec![(Name::from("a"), g.mono_term_over(n, &pool))];
        let got = subst(&m, &env, &mut Fresh::avoiding(&copat_core::syntax::mono::all_names(&m)));
        // Every free name of the result is free in m or in the range.
        let mut allowed = m.free_names();
        allowed.remove(&Name::from("a"));
        allowed.extend(env[0].1.free_names());
        prop_assert!(got.free_names().is_subset(&allowed));
    }

    #[test]
    fn freshen_is_alpha_equivalent_and_binders_unique(seed in any::<u64>()) {
        let m = gen(seed, 30).mono();
        let f = freshen(&m, &mut Fresh::avoiding(&copat_core::syntax::mono::all_names(&m)));
        prop_assert!(alpha_eq(&m, &f));
        prop_assert!(db_eq(&m, &f));
        let mut bs = Vec::new();
        all_binders(&f, &mut bs);
        let distinct: HashSet<&Name> = bs.iter().collect();
        prop_assert_eq!(distinct.len(), bs.len());
        let ff = freshen(&f, &mut Fresh::avoiding(&copat_core::syntax::mono::all_names(&f)));
        prop_assert!(alpha_eq(&f, &ff));
    }

    #[test]
    fn freshen_is_deterministic(seed in any::<u64>()) {
        let m = gen(seed, 30).mono();
        prop_assert_eq!(freshen(&m, &mut Fresh::new()), freshen(&m, &mut Fresh::new()));
    }

    #[test]
    fn alpha_eq_agrees_with_de_bruijn(seed in any::<u64>(), pick in any::<usize>()) {
        let mut g = gen(seed, 12);
        let m = g.mono();
        let f = freshen(&m, &mut Fresh::new());
        let mut bs = Vec::new();
        all_binders(&f, &mut bs);
        let names: Vec<Name> = bs.into_iter().chain(["a", "b"].map(Name::from)).collect();
        let to = &names[pick % names.len()];
        let mutated = mutate(&f, &mut (pick % var_count(&f).max(1)), to);
        prop_assert_eq!(alpha_eq(&m, &mutated), db_eq(&m, &mutated));
        let other = g.mono();
        prop_assert_eq!(alpha_eq(&m, &other), db_eq(&m, &other));
    }

    #[test]
    fn alpha_eq_is_an_equivalence(seed in any::<u64>()) {
        let m = gen(seed, 20).mono();
        let a = freshen(&m, &mut Fresh::new());
        let b = freshen(&a, &mut Fresh::avoiding(&copat_core::syntax::mono::all_names(&a)));
        prop_assert!(alpha_eq(&m, &m));
        prop_assert_eq!(alpha_eq(&m, &a), alpha_eq(&a, &m));
        prop_assert!(alpha_eq(&m, &a) && alpha_eq(&a, &b) && alpha_eq(&m, &b));
    }
}
