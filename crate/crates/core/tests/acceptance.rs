//! Acceptance suite: one PASS/FAIL line per criterion.  Runs without the
//! libtest harness so the lines are always printed.

use std::collections::HashSet;
use std::rc::Rc;
use std::time::{Duration, Instant};

use copat_core::canonical::{skeleton, CanonicalComp, CanonicalMono};
use copat_core::comp::{cps as comp_cps, legacy, machine as comp_machine, small_step as comp_small_step};
use copat_core::encodings::{answers_open, compose_enc, desugar, object_enc, object_enc_chain};
use copat_core::frontend::{parse_comp, parse_mono, pretty, Calculus};
use copat_core::harness::{case_seed, diff_check, eval_mono, with_big_stack, CheckConfig, DiffReport, Gen, GenConfig, Semantics};
use copat_core::mono::machine::{self as mono_machine, Rule};
use copat_core::mono::small_step as mono_small_step;
use copat_core::mono::MonoAnswer;
use copat_core::syntax::comp::alpha_eq_response;
use copat_core::syntax::mono::{alpha_eq, all_names, subst};
use copat_core::syntax::{ask, CompOption, CompResponse, CompTerm, Fresh, MonoTerm, Name, Question};
use copat_core::EvalError;
use rand::Rng;

const SEED: u64 = 42;
const FUEL: u64 = 100_000;
const SIZE: usize = 30;
const TIME_LIMIT: Duration = Duration::from_secs(300);

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn first_failures(report: &DiffReport) -> String {
    report
        .failures
        .iter()
        .take(3)
        .map(|f| format!("\n    seed {} `{}`: {:?}", f.seed, f.input, f.answers))
        .collect()
}

fn suite(calculus: Calculus, semantics: Vec<Semantics>) -> Outcome {
    let cfg = CheckConfig { semantics, ..CheckConfig::new(calculus, SEED, 10_000, SIZE, FUEL) };
    let start = Instant::now();
    let report = diff_check(&cfg);
    let elapsed = start.elapsed();
    let names: Vec<&str> = cfg.semantics.iter().map(|s| s.name()).collect();
    let detail = format!("{report} [{}] in {:.1}s{}", names.join(", "), elapsed.as_secs_f64(), first_failures(&report));
    let skipped_ok = report.skipped_fuel * 5 < report.cases;
    let agreed_ok = report.agreed + report.skipped_fuel == report.cases;
    if report.ok() && skipped_ok && agreed_ok && elapsed < TIME_LIMIT {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn mono_suite() -> Outcome {
    suite(Calculus::Mono, vec![Semantics::SmallStep, Semantics::Machine, Semantics::Cps])
}

fn comp_suite() -> Outcome {
    suite(Calculus::Comp, vec![Semantics::Cps, Semantics::Machine, Semantics::SmallStep])
}

fn env_suites() -> Outcome {
    let mono = suite(Calculus::Mono, Semantics::for_calculus(Calculus::Mono));
    let comp = suite(Calculus::Comp, Semantics::for_calculus(Calculus::Comp));
    Outcome { ok: mono.ok && comp.ok, detail: format!("mono: {}; comp: {}", mono.detail, comp.detail) }
}

fn decomp_recomp() -> Outcome {
    let mut bad = 0;
    for i in 0..1000 {
        let mut g = Gen::new(&GenConfig::new(Calculus::Mono, case_seed(SEED, i), SIZE));
        let m = g.mono();
        let k = g.mono_question(5, 6);
        if mono_small_step::decomp(&mono_small_step::recomp(&m, &k)) != mono_small_step::refocus(&m, &k) {
            bad += 1;
        }
    }
    let detail = format!("1000 (m, k) pairs, {bad} failures");
    if bad == 0 {
        pass(detail)
    } else {
        fail(detail)
    }
}

/// Environment over `domain` whose ranges only mention `range_free`.
fn gen_env(g: &mut Gen, domain: &[&str], range_free: &[Name]) -> Vec<(Name, Rc<MonoTerm>)> {
    let mut env = Vec::new();
    for x in domain {
        if g.rng().gen_bool(0.7) {
            let n = g.rng().gen_range(1..=8);
            env.push((Name::from(*x), g.mono_term_over(n, range_free)));
        }
    }
    env
}

fn subst_reassociation() -> Outcome {
    let names = |xs: &[&str]| -> Vec<Name> { xs.iter().map(|x| Name::from(*x)).collect() };
    let (dom1, dom2) = (["a", "b", "c"], ["d", "e"]);
    let range_free = names(&["p", "q", "r"]);
    let mut bad = Vec::new();
    for i in 0..1000 {
        let cfg = GenConfig { free_vars: names(&["a", "b", "c", "d", "e", "p"]), ..GenConfig::new(Calculus::Mono, case_seed(SEED, i), 20) };
        let mut g = Gen::new(&cfg);
        let m = g.mono();
        let e1 = gen_env(&mut g, &dom1, &range_free);
        let e2 = gen_env(&mut g, &dom2, &range_free);
        let mut fresh = Fresh::avoiding(&all_names(&m));
        let both: Vec<_> = e1.iter().chain(&e2).cloned().collect();
        let lhs = subst(&m, &both, &mut fresh);
        let rhs = subst(&subst(&m, &e1, &mut fresh), &e2, &mut fresh);
        if !alpha_eq(&lhs, &rhs) {
            bad.push(pretty::mono_term(&*m));
        }
    }
    let detail = format!("1000 (m, e, e') triples, {} failures{}", bad.len(), bad.first().map(|m| format!(": {m}")).unwrap_or_default());
    if bad.is_empty() {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn opt_corollary() -> Outcome {
    let mut bad = Vec::new();
    let (mut compared, mut skipped) = (0, 0);
    for i in 0..1000 {
        let mut g = Gen::new(&GenConfig::new(Calculus::Comp, case_seed(SEED, i), SIZE));
        let budget = g.rng().gen_range(2..=12);
        let o = g.comp_option(budget, &mut Vec::new(), &mut Vec::new());
        let n = g.rng().gen_range(1..=6);
        let f = g.comp_term(n, &mut Vec::new(), &mut Vec::new());
        let q = g.comp_question(5, 5);
        let old = legacy::apply_option(&o, &f, &q, FUEL).map(|a| a.canonical());
        let new = comp_cps::apply_option(&o, &f, &q, FUEL).map(|a| a.canonical());
        match (old, new) {
            (Err(EvalError::FuelExhausted), Err(EvalError::FuelExhausted)) => skipped += 1,
            (a, b) if a == b && a.is_ok() => compared += 1,
            (a, b) => bad.push(format!("{} / {}: {a:?} vs {b:?}", pretty::comp_option(&*o), pretty::comp_term(&*f))),
        }
    }
    let detail = format!("1000 (option, question) pairs: {compared} agreed, {skipped} skipped, {} failures{}", bad.len(), bad.first().map(|b| format!(": {b}")).unwrap_or_default());
    if bad.is_empty() {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn count_probe() -> Outcome {
    let m = parse_mono(include_str!("../../../examples/count.copat")).expect("count example parses");
    let answers: Vec<String> = [Semantics::SmallStep, Semantics::Machine, Semantics::Cps]
        .into_iter()
        .map(|s| eval_mono(s, &m, FUEL).map_or_else(|e| e.to_string(), |a| a.to_string()))
        .collect();
    let mut rules = Vec::new();
    let traced = mono_machine::run_observed(&m, FUEL, |r, _| rules.extend(r));
    let dup = rules.iter().filter(|r| **r == Rule::Duplicate).count();
    let commit = rules.iter().filter(|r| **r == Rule::Commit).count();
    let detail = format!("answers {answers:?}; machine: {dup} Duplicate, {commit} Commit");
    let answers_ok = answers.iter().all(|a| a == "stuck succ [_]");
    let traced_ok = matches!(traced, Ok(MonoAnswer::Stuck(..)));
    if answers_ok && traced_ok && dup == 3 && commit == 3 {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn comp_answers(m: &Rc<CompTerm>) -> Vec<Result<CanonicalComp, EvalError>> {
    vec![
        comp_small_step::eval(m, FUEL).map(|a| a.canonical()),
        comp_machine::eval(m, FUEL).map(|a| a.canonical()),
        comp_cps::eval(m, FUEL).map(|a| a.canonical()),
    ]
}

fn compose_law() -> Outcome {
    let opt = |src: &str| -> Rc<CompOption> {
        match &*parse_comp(&format!("({src} ? raise) ! end")).expect("option parses") {
            CompResponse::AndThen(m, _) => match &**m {
                CompTerm::Handle(o, _) => o.clone(),
                _ => unreachable!(),
            },
            _ => unreachable!(),
        }
    };
    let fixed = [
        ("{ Fst -> ? f -> a }", "{ Snd -> ? f -> b }"),
        // First match wins: both handle Fst.
        ("{ Fst -> ? f -> a }", "{ Fst -> ? f -> b }"),
        ("{ x -> Fst -> ? f -> x }", "{ y -> Snd -> ? f -> f y }"),
    ];
    let mut pairs: Vec<(Rc<CompOption>, Rc<CompOption>)> = fixed.iter().map(|(o1, o2)| (opt(o1), opt(o2))).collect();
    let mut g = Gen::new(&GenConfig::new(Calculus::Comp, SEED, SIZE));
    while pairs.len() < 20 {
        let b1 = g.rng().gen_range(2..=8);
        let o1 = g.comp_option(b1, &mut Vec::new(), &mut Vec::new());
        let b2 = g.rng().gen_range(2..=8);
        let o2 = g.comp_option(b2, &mut Vec::new(), &mut Vec::new());
        // Options answering `Open` shadow the extension method.
        if !answers_open(&o1) && !answers_open(&o2) {
            pairs.push((o1, o2));
        }
    }
    let mut questions: Vec<(usize, Question<Rc<CompTerm>>)> = vec![(1, Question::idx(Name::from("Fst"), Question::nop()))];
    let fst_snd = [Name::from("Fst"), Name::from("Snd")];
    while questions.len() < 200 {
        let i = questions.len() % pairs.len();
        let mut q = g.comp_question(4, 3);
        // Bias towards the indices the fixed options dispatch on.
        if i < fixed.len() && g.rng().gen_bool(0.5) {
            let j = fst_snd[g.rng().gen_range(0..2)].clone();
            q = Question::idx(j, q);
        }
        questions.push((i, q));
    }
    let mut bad = Vec::new();
    let mut skipped = 0;
    for (i, q) in &questions {
        let (o1, o2) = &pairs[*i];
        let composed = compose_enc(&object_enc(o1), &object_enc(o2));
        let chained = object_enc_chain(&[o1.clone(), o2.clone()]);
        let a = comp_answers(&ask(composed, q));
        let b = comp_answers(&ask(chained, q));
        if a.iter().chain(&b).all(|x| *x == Err(EvalError::FuelExhausted)) {
            skipped += 1;
        } else if a.iter().chain(&b).any(|x| *x != b[0]) || b[0].is_err() {
            bad.push(format!("{} | {} at {}: {a:?} vs {b:?}", pretty::comp_option(&**o1), pretty::comp_option(&**o2), pretty::comp_question(q)));
        }
    }
    let priority = comp_answers(&ask(compose_enc(&object_enc(&pairs[1].0), &object_enc(&pairs[1].1)), &questions[0].1));
    let priority_ok = priority.iter().all(|a| *a == Ok(CanonicalComp::Stuck(0, Name::from("a"), Default::default())));
    let detail = format!(
        "200 questions over {} option pairs: {} failures, {skipped} skipped; first-match case answers {}{}",
        pairs.len(),
        bad.len(),
        priority.first().map_or(String::new(), |a| format!("{a:?}")),
        bad.first().map(|b| format!("\n    {b}")).unwrap_or_default()
    );
    if bad.is_empty() && priority_ok {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn desugar_preservation() -> Outcome {
    let (mut checked, mut skipped, mut bad) = (0, 0, Vec::new());
    let mut i = 0;
    while checked + skipped + bad.len() < 5000 {
        let m = Gen::new(&GenConfig::new(Calculus::Mono, case_seed(SEED, i), SIZE)).mono();
        i += 1;
        let expected = match mono_small_step::eval(&m, FUEL) {
            Ok(MonoAnswer::Raise(q)) => CanonicalComp::Final(skeleton(&q)),
            Ok(MonoAnswer::Stuck(x, q)) => CanonicalComp::Stuck(0, x, skeleton(&q)),
            _ => continue,
        };
        let out = desugar(&m).output;
        match comp_small_step::eval(&out, FUEL) {
            Ok(a) if a.canonical() == expected => checked += 1,
            Err(EvalError::FuelExhausted) => skipped += 1,
            other => bad.push(format!("{} => {}: {other:?}", pretty::mono_term(&*m), expected)),
        }
    }
    let detail = format!("{checked} corresponded, {skipped} skipped, {} failures (from {i} generated terms){}", bad.len(), bad.first().map(|b| format!("\n    {b}")).unwrap_or_default());
    if bad.is_empty() && checked > 0 {
        pass(detail)
    } else {
        fail(detail)
    }
}

const GOLDEN_ANSWERS: &[(&str, &str, &str)] = &[
    ("mono", "fun { }", "raise []"),
    ("mono", "fun { } a Head", "raise [_ Head]"),
    ("mono", "f X", "stuck f [X]"),
    ("mono", "fun { x Head -> x } a", "under"),
    ("mono", "(fun { self From x Head -> x | self From x Tail -> self. From (succ x) }). From 0 Tail Tail Head", "stuck succ [_]"),
    ("comp", "raise ! end", "final []"),
    ("comp", "raise a Head ! end", "final [_ Head]"),
    ("comp", "f X ! g ! end", "stuck depth=1 g []"),
    ("comp", "a ! k", "costuck depth=1 k"),
    ("comp", "k", "costuck depth=0 k"),
    ("comp", "(capture k -> b ! k) Head ! end", "stuck depth=0 b [Head]"),
];

fn mono_line(src: &str) -> String {
    let m = parse_mono(src).expect("golden program parses");
    let lines: HashSet<String> = [Semantics::SmallStep, Semantics::Machine, Semantics::Cps]
        .into_iter()
        .map(|s| eval_mono(s, &m, FUEL).map(|a: CanonicalMono| a.to_string()).unwrap_or_else(|e| e.to_string()))
        .collect();
    lines.into_iter().collect::<Vec<_>>().join(" / ")
}

fn comp_line(src: &str) -> String {
    let r = parse_comp(src).expect("golden program parses");
    let lines: HashSet<String> = [
        comp_small_step::run(&r, FUEL).map(|a| a.canonical()),
        comp_machine::run(&r, FUEL).map(|a| a.canonical()),
        comp_cps::run(&r, FUEL).map(|a| a.canonical()),
    ]
    .into_iter()
    .map(|a| a.map(|a| a.to_string()).unwrap_or_else(|e| e.to_string()))
    .collect();
    lines.into_iter().collect::<Vec<_>>().join(" / ")
}

fn trace_of(src: &str) -> String {
    let m = parse_mono(src).expect("golden program parses");
    let mut out = String::new();
    let mut n = 0;
    let _ = mono_machine::run_observed(&m, FUEL, |_, s| {
        out += &format!("#{n}: {s}\n");
        n += 1;
    });
    out
}

fn comp_trace_of(src: &str) -> String {
    let r = parse_comp(src).expect("golden program parses");
    let mut out = String::new();
    let mut n = 0;
    let _ = comp_machine::run_observed(&r, FUEL, |_, s| {
        out += &format!("#{n}: {s}\n");
        n += 1;
    });
    out
}

fn round_trip() -> Outcome {
    let mut bad = Vec::new();
    for i in 0..1000 {
        let seed = case_seed(SEED, i);
        let m = Gen::new(&GenConfig::new(Calculus::Mono, seed, SIZE)).mono();
        let text = pretty::mono_term(&*m);
        if !parse_mono(&text).is_ok_and(|m2| alpha_eq(&m, &m2)) {
            bad.push(text);
        }
        let r = Gen::new(&GenConfig::new(Calculus::Comp, seed, SIZE)).comp();
        let text = pretty::comp_response(&*r);
        if !parse_comp(&text).is_ok_and(|r2| alpha_eq_response(&r, &r2)) {
            bad.push(text);
        }
    }
    let mut golden_bad = Vec::new();
    for (calculus, src, want) in GOLDEN_ANSWERS {
        let got = if *calculus == "mono" { mono_line(src) } else { comp_line(src) };
        if got != *want {
            golden_bad.push(format!("`{src}`: want `{want}`, got `{got}`"));
        }
    }
    for (got, want) in [
        (trace_of("fun { x -> x } a"), include_str!("golden/identity.trace")),
        (trace_of(include_str!("../../../examples/count.copat")), include_str!("golden/count.trace")),
        (comp_trace_of("({ x -> ? f -> x } ? raise) a ! end"), include_str!("golden/handle.trace")),
    ] {
        if got != want {
            golden_bad.push(format!("trace mismatch:\n{got}"));
        }
    }
    let detail = format!(
        "2000 round trips, {} failures; {} golden answer lines and 3 golden traces, {} mismatches{}{}",
        bad.len(),
        GOLDEN_ANSWERS.len(),
        golden_bad.len(),
        bad.first().map(|b| format!("\n    {b}")).unwrap_or_default(),
        golden_bad.first().map(|b| format!("\n    {b}")).unwrap_or_default()
    );
    if bad.is_empty() && golden_bad.is_empty() {
        pass(detail)
    } else {
        fail(detail)
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("mono differential suite (small-step, machine, CPS)", mono_suite),
        ("comp differential suite (CPS, machine, small-step)", comp_suite),
        ("env machine and env CPS join both suites", env_suites),
        ("decomp (recomp m k) = refocus m k", decomp_recomp),
        ("substitution reassociation", subst_reassociation),
        ("legacy Opt agrees with Opt'", opt_corollary),
        ("count probe", count_probe),
        ("compose law", compose_law),
        ("desugaring preservation", desugar_preservation),
        ("parse/pretty round trip and golden formats", round_trip),
    ];
    let failed = with_big_stack(move || {
        let mut failed = 0;
        for (i, (name, check)) in criteria.iter().enumerate() {
            let Outcome { ok, detail } = check();
            println!("{} criterion {}: {name}: {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
            failed += usize::from(!ok);
        }
        failed
    });
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
