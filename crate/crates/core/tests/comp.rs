//! Compositional calculus: CPS, machine and delimited small-step
//! evaluators, the legacy option translation, and their agreement.

use std::rc::Rc;

use copat_core::canonical::{CanonicalComp, SkelFrame, Skeleton};
use copat_core::comp::machine::{self, Rule, State};
use copat_core::comp::small_step::{
    self, decomp, delimit, handle, reduce, CoFrame, CoObject, Decomp, Delimit, RdResponse, RdTerm, RxResponse, RxTerm,
};
use copat_core::comp::{cps, legacy, CompAnswer};
use copat_core::frontend::{parse_comp, Calculus};
use copat_core::harness::{Gen, GenConfig};
use copat_core::syntax::{ask, CompOption, CompResponse, CompTerm, Fresh, Name, Question, Spine};
use copat_core::EvalError;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

const FUEL: u64 = 100_000;

fn v(x: &str) -> Rc<CompTerm> {
    CompTerm::var(Name::from(x))
}

fn n(x: &str) -> Name {
    Name::from(x)
}

fn gen(seed: u64) -> Gen {
    Gen::new(&GenConfig::new(Calculus::Comp, seed, 30))
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, rng_seed: RngSeed::Fixed(42), failure_persistence: None, ..ProptestConfig::default() }
}

fn final_nop() -> CanonicalComp {
    CanonicalComp::Final(Skeleton::default())
}

fn all_three(r: &Rc<CompResponse>) -> [Result<CanonicalComp, EvalError>; 3] {
    [
        small_step::run(r, FUEL).map(|a| a.canonical()),
        machine::run(r, FUEL).map(|a| a.canonical()),
        cps::run(r, FUEL).map(|a| a.canonical()),
    ]
}

fn answers(src: &str) -> [Result<CanonicalComp, EvalError>; 3] {
    all_three(&parse_comp(src).unwrap())
}

#[test]
fn cps_examples() {
    let r = CompResponse::and_then(CompTerm::raise(), CompResponse::end());
    assert_eq!(cps::run(&r, FUEL).map(|a| a.canonical()), Ok(final_nop()));
    let o = CompOption::done("x", v("x"));
    assert_eq!(cps::try_option(&o, FUEL).map(|a| a.canonical()), Ok(final_nop()));
    let cap = CompTerm::capture("q", CompResponse::splat(n("q")));
    assert_eq!(cps::eval(&cap, FUEL).map(|a| a.canonical()), Ok(final_nop()));
    assert_eq!(cps::eval(&CompTerm::raise(), FUEL).map(|a| a.canonical()), Ok(final_nop()));
}

#[test]
fn legacy_option_examples() {
    let q: Question<Rc<CompTerm>> = Question::arg(v("n"), Question::nop());
    let f = v("f");
    for o in [CompOption::done("x", v("x")), CompOption::pop("x", CompOption::done("y", v("y")))] {
        let old = legacy::apply_option(&o, &f, &q, FUEL).map(|a| a.canonical());
        let new = cps::apply_option(&o, &f, &q, FUEL).map(|a| a.canonical());
        assert_eq!(old, new);
        assert!(old.is_ok());
    }
}

#[test]
fn machine_examples() {
    let fresh = &mut Fresh::new();
    let k: Question<Rc<CompTerm>> = Question::idx(n("Head"), Question::nop());
    match machine::step(State::Refocus(CompTerm::raise(), k.clone(), vec![]), fresh).unwrap() {
        machine::Step::Halt(CompAnswer::Final(q)) => assert_eq!(q, k),
        _ => panic!("raise with no handler should halt"),
    }
    // ⟨?x → N ∣ M ∣ K ∣ S⟩ ↦ ⟨N[x ↦ M] ∣ K ∣ S⟩
    let o = CompOption::done("x", CompTerm::app(v("x"), v("y")));
    let s = vec![v("h")];
    match machine::step(State::Comatch(o, v("m"), k.clone(), s.clone()), fresh).unwrap() {
        machine::Step::Next(Rule::Succeed, State::Refocus(m, k2, s2)) => {
            assert_eq!(m, CompTerm::app(v("m"), v("y")));
            assert_eq!(k2, k);
            assert_eq!(s2, s);
        }
        _ => panic!("expected a success step"),
    }
    // ⟨M ! R ∣ S⟩ ↦ ⟨R ∣ M; S⟩
    let r = CompResponse::and_then(v("m"), CompResponse::end());
    match machine::step(State::Delim(r, vec![]), fresh).unwrap() {
        machine::Step::Next(Rule::Delimit, State::Delim(rest, s)) => {
            assert_eq!(rest, CompResponse::end());
            assert_eq!(s, vec![v("m")]);
        }
        _ => panic!("expected a delimiting step"),
    }
}

#[test]
fn reduce_and_handle_examples() {
    let fresh = &mut Fresh::new();
    assert_eq!(reduce(&RxTerm::Introspect(v("m")), fresh), Ok(RdTerm::RdT(CompTerm::app(v("m"), v("m")))));
    let co = CoObject { coframe: CoFrame::At(n("Head")), success: CompOption::done("f", v("a")), failure: v("m") };
    assert_eq!(reduce(&RxTerm::Get(co, n("Tail")), fresh), Ok(RdTerm::RdT(CompTerm::idx(v("m"), "Tail"))));
    assert_eq!(reduce(&RxTerm::FreeVar(n("x")), fresh), Ok(RdTerm::UnknownA(n("x"))));
    let q: Question<Rc<CompTerm>> = Question::arg(v("n"), Question::nop());
    let reset = handle(&RxResponse::Reset(v("m"), q.clone()), fresh);
    assert_eq!(reset, Ok(RdResponse::RdR(CompResponse::and_then(CompTerm::app(v("m"), v("n")), CompResponse::end()))));
    assert_eq!(handle(&RxResponse::FreeCoVar(n("k")), fresh), Ok(RdResponse::UnknownQ(n("k"))));
}

#[test]
fn delimit_and_decomp_examples() {
    assert_eq!(delimit(&CompResponse::end()), Delimit::Uncaught(Spine::nop()));
    let m = CompTerm::app(CompTerm::raise(), v("n"));
    assert_eq!(decomp(&m), Decomp::Raised(Question::arg(v("n"), Question::nop())));
    let r = CompResponse::and_then(v("m"), CompResponse::and_then(CompTerm::raise(), CompResponse::end()));
    assert_eq!(delimit(&r), Delimit::Caught(RxResponse::Reset(v("m"), Spine::nop()), vec![]));
}

#[test]
fn small_step_examples() {
    assert_eq!(small_step::run(&CompResponse::end(), FUEL).map(|a| a.canonical()), Ok(final_nop()));
    // ((X -> ? f -> m) ? fb) X ↦ (? f -> m) ? (fb X)
    for a in answers("({ X -> ? f -> m } ? fb) X ! end") {
        assert_eq!(a, Ok(CanonicalComp::Stuck(0, n("m"), Skeleton::default())));
    }
    // (capture k -> k) n ! end ↦ raise n ! end
    for a in answers("(capture k -> k) n ! end") {
        assert_eq!(a, Ok(CanonicalComp::Final(Skeleton(vec![SkelFrame::Slot]))));
    }
}

#[test]
fn failed_match_at_end_of_question_falls_through() {
    for a in answers("({ x -> ? f -> x } ? fb) ! end") {
        assert_eq!(a, Ok(CanonicalComp::Stuck(0, n("fb"), Skeleton::default())));
    }
}

#[test]
fn handlers_count_towards_stuck_depth() {
    for a in answers("h1 ! h2 ! x ! end") {
        assert_eq!(a, Ok(CanonicalComp::Stuck(2, n("x"), Skeleton::default())));
    }
    for a in answers("h ! k") {
        assert_eq!(a, Ok(CanonicalComp::CoStuck(1, n("k"))));
    }
}

/// The term a decomposition focuses on, rebuilt.
fn focus(rx: &RxTerm) -> Rc<CompTerm> {
    let handler = |co: &CoObject| {
        let o = match &co.coframe {
            CoFrame::Arg(x) => CompOption::pop(x.clone(), co.success.clone()),
            CoFrame::At(i) => CompOption::get(i.clone(), co.success.clone()),
        };
        CompTerm::handle(o, co.failure.clone())
    };
    match rx {
        RxTerm::FreeVar(x) => CompTerm::var(x.clone()),
        RxTerm::Introspect(m) => CompTerm::dot(m.clone()),
        RxTerm::Try(x, body, m) => CompTerm::handle(CompOption::done(x.clone(), body.clone()), m.clone()),
        RxTerm::Pop(co, arg) => CompTerm::app(handler(co), arg.clone()),
        RxTerm::Get(co, j) => CompTerm::idx(handler(co), j.clone()),
    }
}

proptest! {
    #![proptest_config(config(300))]

    #[test]
    fn evaluators_agree(seed in any::<u64>()) {
        let r = gen(seed).comp();
        let [a, b, c] = all_three(&r);
        if a.is_ok() && b.is_ok() && c.is_ok() {
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(&a, &c);
        }
    }

    #[test]
    fn evaluators_are_deterministic(seed in any::<u64>()) {
        let r = gen(seed).comp();
        prop_assert_eq!(all_three(&r), all_three(&r));
    }

    #[test]
    fn capture_reset_round_trip(seed in any::<u64>()) {
        // M ! (E[raise] ! end) behaves as E[M] ! end
        let mut g = gen(seed);
        let m = g.comp_term(8, &mut Vec::new(), &mut Vec::new());
        let q = g.comp_question(4, 4);
        let lhs = CompResponse::and_then(m.clone(), CompResponse::and_then(ask(CompTerm::raise(), &q), CompResponse::end()));
        let rhs = CompResponse::and_then(ask(m, &q), CompResponse::end());
        let (a, b) = (all_three(&lhs), all_three(&rhs));
        for (x, y) in a.iter().zip(&b) {
            if x.is_ok() && y.is_ok() {
                prop_assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn internal_decomposition_recomposes(seed in any::<u64>()) {
        let m = gen(seed).comp_term(20, &mut Vec::new(), &mut Vec::new());
        if let Decomp::Internal(rx, q) = decomp(&m) {
            prop_assert_eq!(ask(focus(&rx), &q), m);
        }
    }

    #[test]
    fn legacy_option_agrees_with_single_pass(seed in any::<u64>()) {
        let mut g = gen(seed);
        let o = g.comp_option(8, &mut Vec::new(), &mut Vec::new());
        let f = g.comp_term(4, &mut Vec::new(), &mut Vec::new());
        let q = g.comp_question(4, 4);
        let old = legacy::apply_option(&o, &f, &q, FUEL).map(|a| a.canonical());
        let new = cps::apply_option(&o, &f, &q, FUEL).map(|a| a.canonical());
        prop_assert_eq!(old, new);
    }
}
