//! Parser, pretty-printer and name resolution.

use std::rc::Rc;

use copat_core::frontend::{parse_comp, parse_mono, parser, pretty, resolve_mono, Calculus, FrontendError};
use copat_core::harness::{Gen, GenConfig};
use copat_core::syntax::comp::alpha_eq_response;
use copat_core::syntax::mono::{alpha_eq, copattern};
use copat_core::syntax::{binders, CompOption, CompResponse, CompTerm, MonoOption, MonoTerm, Name};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, rng_seed: RngSeed::Fixed(42), failure_persistence: None, ..ProptestConfig::default() }
}

fn v(x: &str) -> Rc<MonoTerm> {
    MonoTerm::var(Name::from(x))
}

#[test]
fn parses_objects() {
    let m = parser::mono("fun { x Head -> x }").unwrap();
    assert_eq!(m, MonoTerm::obj(vec![MonoOption::new(copattern(&["x", "Head"]), v("x"))]));
    assert_eq!(parser::mono("fun { }").unwrap(), MonoTerm::obj(vec![]));
}

#[test]
fn parses_the_count_probe() {
    let m = parser::mono("count. From x Tail Tail Head").unwrap();
    let from = MonoTerm::idx(MonoTerm::dot(v("count")), "From");
    let want = MonoTerm::idx(MonoTerm::idx(MonoTerm::idx(MonoTerm::app(from, v("x")), "Tail"), "Tail"), "Head");
    assert_eq!(m, want);
}

#[test]
fn parses_handlers_and_responses() {
    let r = parser::comp("{ ? x -> x } ? raise ! end").unwrap();
    let x = CompTerm::var(Name::from("x"));
    let want = CompResponse::and_then(CompTerm::handle(CompOption::done("x", x), CompTerm::raise()), CompResponse::end());
    assert_eq!(r, want);
    // Handler chains nest to the right.
    let r = parser::comp("{ ? x -> a } ? { ? y -> b } ? c ! k").unwrap();
    let inner = CompTerm::handle(CompOption::done("y", CompTerm::var(Name::from("b"))), CompTerm::var(Name::from("c")));
    let want = CompResponse::and_then(
        CompTerm::handle(CompOption::done("x", CompTerm::var(Name::from("a"))), inner),
        CompResponse::splat(Name::from("k")),
    );
    assert_eq!(r, want);
}

#[test]
fn application_is_left_associative() {
    let m = parser::mono("f a b").unwrap();
    assert_eq!(m, MonoTerm::app(MonoTerm::app(v("f"), v("a")), v("b")));
    let m = parser::mono("f (a b)").unwrap();
    assert_eq!(m, MonoTerm::app(v("f"), MonoTerm::app(v("a"), v("b"))));
}

#[test]
fn comments_are_ignored() {
    let m = parser::mono("-- the identity\nfun { x -> x } -- applied\n a").unwrap();
    assert_eq!(m, parser::mono("fun { x -> x } a").unwrap());
}

#[test]
fn pretty_examples() {
    assert_eq!(pretty::comp_term(&*CompTerm::<Name>::raise()), "raise");
    assert_eq!(pretty::mono_term(&*MonoTerm::<Name>::obj(vec![])), "fun { }");
    let m = parser::mono("f (g a) . Head").unwrap();
    assert_eq!(pretty::mono_term(&m), "f (g a). Head");
}

#[test]
fn resolution_renames_binders_apart_and_keeps_free_names() {
    let m = parse_mono("fun { x -> x | x -> y }").unwrap();
    let MonoTerm::Obj(os) = &*m else { panic!() };
    let b0 = binders(&os[0].lhs).next().unwrap();
    let b1 = binders(&os[1].lhs).next().unwrap();
    assert_ne!(b0, b1);
    assert_eq!(os[1].rhs, v("y"));
    assert!(alpha_eq(&m, &parser::mono("fun { x -> x | x -> y }").unwrap()));
}

#[test]
fn open_is_reserved() {
    assert_eq!(parse_mono("fun { x Open -> x }"), Err(FrontendError::ReservedName(Name::from("Open"))));
    assert!(matches!(parse_comp("a Open ! end"), Err(FrontendError::ReservedName(_))));
    assert!(resolve_mono(&parser::mono("f Opened").unwrap()).is_ok());
}

#[test]
fn parse_errors_report_positions() {
    let FrontendError::Parse(e) = parse_mono("fun { x ->\n  }").unwrap_err() else { panic!() };
    assert_eq!((e.line, e.col), (2, 3));
    let FrontendError::Parse(e) = parse_comp("a !").unwrap_err() else { panic!() };
    assert_eq!(e.line, 1);
    assert!(e.col >= 3);
}

/// A position is in bounds if it names a character of the input or the
/// place just past the end of a line.
fn in_bounds(src: &str, line: usize, col: usize) -> bool {
    let lines: Vec<&str> = src.split('\n').collect();
    line >= 1 && line <= lines.len() && col >= 1 && col <= lines[line - 1].chars().count() + 1
}

fn mutated(src: &str, at: usize, edit: u8) -> String {
    let chars: Vec<char> = src.chars().collect();
    let at = at % (chars.len() + 1);
    let mut out: Vec<char> = chars[..at].to_vec();
    match edit % 4 {
        0 => {}
        1 => out.push('('),
        2 => out.push('}'),
        _ => out.push('\n'),
    }
    out.extend(chars.iter().skip(at + usize::from(edit.is_multiple_of(4))));
    out.into_iter().collect()
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn mono_round_trip(seed in any::<u64>()) {
        let m = Gen::new(&GenConfig::new(Calculus::Mono, seed, 30)).mono();
        let back = parse_mono(&pretty::mono_term(&m)).unwrap();
        prop_assert!(alpha_eq(&m, &back));
    }

    #[test]
    fn comp_round_trip(seed in any::<u64>()) {
        let r = Gen::new(&GenConfig::new(Calculus::Comp, seed, 30)).comp();
        let back = parse_comp(&pretty::comp_response(&r)).unwrap();
        prop_assert!(alpha_eq_response(&r, &back));
    }

    #[test]
    fn error_positions_are_in_bounds(seed in any::<u64>(), at in any::<usize>(), edit in any::<u8>()) {
        let mono = pretty::mono_term(&Gen::new(&GenConfig::new(Calculus::Mono, seed, 15)).mono());
        let src = mutated(&mono, at, edit);
        if let Err(FrontendError::Parse(e)) = parse_mono(&src) {
            prop_assert!(in_bounds(&src, e.line, e.col), "{e} in {src:?}");
        }
        let comp = pretty::comp_response(&Gen::new(&GenConfig::new(Calculus::Comp, seed, 15)).comp());
        let src = mutated(&comp, at, edit);
        if let Err(FrontendError::Parse(e)) = parse_comp(&src) {
            prop_assert!(in_bounds(&src, e.line, e.col), "{e} in {src:?}");
        }
    }
}
