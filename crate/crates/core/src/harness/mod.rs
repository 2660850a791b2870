//! Random testing: a seeded program generator, one entry point per
//! evaluator returning its canonical answer, and the differential runner.

use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use crate::canonical::{CanonicalComp, CanonicalMono};
use crate::environment::{comp_cps as env_comp_cps, comp_machine as env_comp_machine};
use crate::environment::{mono_cps as env_mono_cps, mono_machine as env_mono_machine, mono_small_step as env_mono_small_step};
use crate::frontend::Calculus;
use crate::syntax::{CompResponse, MonoTerm};
use crate::{comp, mono, EvalError};

pub mod diff;
pub mod gen;

pub use diff::{check_case, diff_check, CheckConfig, DiffReport, Failure, Verdict};
pub use gen::{case_seed, gen_comp, gen_mono, Gen, GenConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    SmallStep,
    Machine,
    Cps,
    EnvMachine,
    EnvCps,
    EnvSmallStep,
}

impl Semantics {
    pub const ALL: [Semantics; 6] = [
        Semantics::SmallStep,
        Semantics::Machine,
        Semantics::Cps,
        Semantics::EnvMachine,
        Semantics::EnvCps,
        Semantics::EnvSmallStep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Semantics::SmallStep => "smallstep",
            Semantics::Machine => "machine",
            Semantics::Cps => "cps",
            Semantics::EnvMachine => "env-machine",
            Semantics::EnvCps => "env-cps",
            Semantics::EnvSmallStep => "env-smallstep",
        }
    }

    /// The compositional calculus has no environment-based small-step
    /// interpreter.
    pub fn supports(self, calculus: Calculus) -> bool {
        !(calculus == Calculus::Comp && self == Semantics::EnvSmallStep)
    }

    /// Every artifact of `calculus`, in the order the differential suite
    /// reports them.
    pub fn for_calculus(calculus: Calculus) -> Vec<Semantics> {
        Semantics::ALL.into_iter().filter(|s| s.supports(calculus)).collect()
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Semantics::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown semantics `{s}`"))
    }
}

pub fn eval_mono(sem: Semantics, m: &Rc<MonoTerm>, fuel: u64) -> Result<CanonicalMono, EvalError> {
    Ok(match sem {
        Semantics::SmallStep => mono::small_step::eval(m, fuel)?.canonical(),
        Semantics::Machine => mono::machine::run(m, fuel)?.canonical(),
        Semantics::Cps => mono::cps::eval(m, fuel)?.canonical(),
        Semantics::EnvMachine => env_mono_machine::run(m, fuel)?.canonical(),
        Semantics::EnvCps => env_mono_cps::eval(m, fuel)?.canonical(),
        Semantics::EnvSmallStep => env_mono_small_step::eval(m, fuel)?.canonical(),
    })
}

/// # Panics
/// On [`Semantics::EnvSmallStep`], which has no compositional variant.
pub fn eval_comp(sem: Semantics, r: &Rc<CompResponse>, fuel: u64) -> Result<CanonicalComp, EvalError> {
    Ok(match sem {
        Semantics::SmallStep => comp::small_step::run(r, fuel)?.canonical(),
        Semantics::Machine => comp::machine::run(r, fuel)?.canonical(),
        Semantics::Cps => comp::cps::run(r, fuel)?.canonical(),
        Semantics::EnvMachine => env_comp_machine::run(r, fuel)?.canonical(),
        Semantics::EnvCps => env_comp_cps::run(r, fuel)?.canonical(),
        Semantics::EnvSmallStep => panic!("no environment small-step semantics for the compositional calculus"),
    })
}

/// Runs `f` on a thread with room for deep recursion over large terms.
pub fn with_big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new()
        .stack_size(STACK_SIZE)
        .spawn(f)
        .expect("spawn evaluator thread")
        .join()
        .unwrap_or_else(|e| std::panic::resume_unwind(e))
}

pub const STACK_SIZE: usize = 256 << 20;
