use thiserror::Error;

use crate::syntax::{KindMismatch, Name};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("fuel exhausted")]
    FuelExhausted,
    /// A term variable was bound to a question or a covariable to a term.
    /// Unreachable for programs accepted by the frontend.
    #[error("kind mismatch for `{0}`")]
    KindMismatch(Name),
}

impl From<KindMismatch> for EvalError {
    fn from(e: KindMismatch) -> Self {
        EvalError::KindMismatch(e.0)
    }
}

/// Step budget shared by one evaluation.
#[derive(Clone, Debug)]
pub struct Fuel {
    left: u64,
}

impl Fuel {
    pub fn new(budget: u64) -> Self {
        Fuel { left: budget }
    }

    pub fn tick(&mut self) -> Result<(), EvalError> {
        if self.left == 0 {
            return Err(EvalError::FuelExhausted);
        }
        self.left -= 1;
        Ok(())
    }

    pub fn remaining(&self) -> u64 {
        self.left
    }
}
