//! Differential testing: every artifact of a calculus runs on the same
//! generated programs and must produce the same canonical answer.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::gen::{case_seed, Gen, GenConfig};
use super::{eval_comp, eval_mono, Semantics, STACK_SIZE};
use crate::frontend::{pretty, Calculus};
use crate::EvalError;

/// A run exhausting its budget is retried with this much more fuel when
/// some other artifact finished.
pub const RETRY_FACTOR: u64 = 100;

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub calculus: Calculus,
    pub seed: u64,
    pub cases: u64,
    pub size: usize,
    pub fuel: u64,
    pub semantics: Vec<Semantics>,
}

impl CheckConfig {
    pub fn new(calculus: Calculus, seed: u64, cases: u64, size: usize, fuel: u64) -> Self {
        CheckConfig {
            calculus,
            seed,
            cases,
            size,
            fuel,
            semantics: Semantics::for_calculus(calculus),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Answer {
    pub semantics: String,
    pub answer: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub seed: u64,
    pub input: String,
    pub answers: Vec<Answer>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffReport {
    pub cases: u64,
    pub agreed: u64,
    pub skipped_fuel: u64,
    /// Sorted by seed.
    pub failures: Vec<Failure>,
}

impl DiffReport {
    /// One JSON object per failure.
    pub fn jsonl(&self) -> String {
        self.failures
            .iter()
            .map(|f| serde_json::to_string(f).expect("failure records serialize") + "\n")
            .collect()
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cases={} agreed={} skipped={} failures={}",
            self.cases,
            self.agreed,
            self.skipped_fuel,
            self.failures.len()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Agreed,
    Skipped,
    Failed(Failure),
}

/// Outcome of one artifact on one program, erased to text.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Outcome {
    Answer(String),
    FuelExhausted,
    Error(String),
}

impl Outcome {
    fn of<A: fmt::Display>(r: Result<A, EvalError>) -> Outcome {
        match r {
            Ok(a) => Outcome::Answer(a.to_string()),
            Err(EvalError::FuelExhausted) => Outcome::FuelExhausted,
            Err(e) => Outcome::Error(format!("error: {e}")),
        }
    }

    fn text(&self) -> String {
        match self {
            Outcome::Answer(a) => a.clone(),
            Outcome::FuelExhausted => "fuel-exhausted".to_string(),
            Outcome::Error(e) => e.clone(),
        }
    }
}

/// Applies the mixed-outcome policy to the per-artifact outcomes of one
/// case.  `rerun(i, fuel)` evaluates artifact `i` again.
fn judge(mut outcomes: Vec<Outcome>, fuel: u64, mut rerun: impl FnMut(usize, u64) -> Outcome) -> (Option<bool>, Vec<Outcome>) {
    if outcomes.iter().all(|o| *o == Outcome::FuelExhausted) {
        return (None, outcomes);
    }
    for (i, o) in outcomes.iter_mut().enumerate() {
        if *o == Outcome::FuelExhausted {
            *o = rerun(i, fuel.saturating_mul(RETRY_FACTOR));
        }
    }
    let agreed = matches!(&outcomes[0], Outcome::Answer(_)) && outcomes.iter().all(|o| *o == outcomes[0]);
    (Some(agreed), outcomes)
}

/// Checks the program generated from `seed`; replays a reported failure.
pub fn check_case(cfg: &CheckConfig, seed: u64) -> Verdict {
    let gen_cfg = GenConfig::new(cfg.calculus, seed, cfg.size);
    let sems = &cfg.semantics;
    let (verdict, outcomes, input) = match cfg.calculus {
        Calculus::Mono => {
            let m = Gen::new(&gen_cfg).mono();
            let run = |i: usize, fuel: u64| Outcome::of(eval_mono(sems[i], &m, fuel));
            let first = (0..sems.len()).map(|i| run(i, cfg.fuel)).collect();
            let (v, o) = judge(first, cfg.fuel, run);
            (v, o, pretty::mono_term(&m))
        }
        Calculus::Comp => {
            let r = Gen::new(&gen_cfg).comp();
            let run = |i: usize, fuel: u64| Outcome::of(eval_comp(sems[i], &r, fuel));
            let first = (0..sems.len()).map(|i| run(i, cfg.fuel)).collect();
            let (v, o) = judge(first, cfg.fuel, run);
            (v, o, pretty::comp_response(&r))
        }
    };
    match verdict {
        None => Verdict::Skipped,
        Some(true) => Verdict::Agreed,
        Some(false) => Verdict::Failed(Failure {
            seed,
            input,
            answers: sems
                .iter()
                .zip(&outcomes)
                .map(|(s, o)| Answer { semantics: s.name().to_string(), answer: o.text() })
                .collect(),
        }),
    }
}

/// Runs `cfg.cases` generated programs through every selected artifact.
/// Case `i` uses the program generated from `case_seed(cfg.seed, i)`.
pub fn diff_check(cfg: &CheckConfig) -> DiffReport {
    let pool = rayon::ThreadPoolBuilder::new()
        .stack_size(STACK_SIZE)
        .build()
        .expect("build worker pool");
    let verdicts: Vec<Verdict> = pool.install(|| {
        (0..cfg.cases)
            .into_par_iter()
            .map(|i| check_case(cfg, case_seed(cfg.seed, i)))
            .collect()
    });
    let mut report = DiffReport { cases: cfg.cases, ..DiffReport::default() };
    for v in verdicts {
        match v {
            Verdict::Agreed => report.agreed += 1,
            Verdict::Skipped => report.skipped_fuel += 1,
            Verdict::Failed(f) => report.failures.push(f),
        }
    }
    report.failures.sort_by_key(|f| f.seed);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ans(s: &str) -> Outcome {
        Outcome::Answer(s.to_string())
    }

    #[test]
    fn all_exhausted_is_skipped() {
        let (v, _) = judge(vec![Outcome::FuelExhausted, Outcome::FuelExhausted], 10, |_, _| unreachable!());
        assert_eq!(v, None);
    }

    #[test]
    fn exhausted_runs_are_retried_with_more_fuel() {
        let mut asked = Vec::new();
        let (v, _) = judge(vec![ans("under"), Outcome::FuelExhausted], 10, |i, fuel| {
            asked.push((i, fuel));
            ans("under")
        });
        assert_eq!(v, Some(true));
        assert_eq!(asked, vec![(1, 1000)]);
    }

    #[test]
    fn still_mixed_after_retry_fails() {
        let (v, o) = judge(vec![ans("under"), Outcome::FuelExhausted], 10, |_, _| Outcome::FuelExhausted);
        assert_eq!(v, Some(false));
        assert_eq!(o[1].text(), "fuel-exhausted");
    }

    #[test]
    fn internal_errors_never_agree() {
        let e = Outcome::Error("error: kind mismatch".into());
        let (v, _) = judge(vec![e.clone(), e], 10, |_, _| unreachable!());
        assert_eq!(v, Some(false));
    }

    #[test]
    fn report_counts_add_up() {
        let cfg = CheckConfig::new(Calculus::Mono, 3, 40, 12, 10_000);
        let r = diff_check(&cfg);
        assert_eq!(r.agreed + r.skipped_fuel + r.failures.len() as u64, r.cases);
    }
}
