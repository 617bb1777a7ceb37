//! Decidable equality extracted from a `NoethAcc` witness.
//!
//! To compare `x` and `y`: feed `x` forever and note the earlier iteration
//! `t1` of the duplicate the witness reports. Then replay, feeding `y` at
//! iteration `t1` only. If `x` and `y` are the same element the replay is
//! the same play and reports the same pair. If they differ, no honest
//! evidence can point at `t1`, because the element there is the only `y`
//! among copies of `x`. So the answer is `Equal` iff `t1` appears in the
//! second evidence pair.
//!
//! This needs repeated answers, so it only exists for `NoethAcc`; the
//! fresh-only encodings cannot be replayed this way.

use thiserror::Error;

use crate::carrier::Equality;
use crate::evidence::{Accumulator, DupEvidence};
use crate::value::Value;
use crate::witnesses::{NoethAcc, WitnessError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DeciderError {
    #[error("FuelExhausted after {0} node visits")]
    FuelExhausted(u64),
    #[error("DishonestWitness: {0}")]
    DishonestWitness(String),
}

impl From<WitnessError> for DeciderError {
    fn from(e: WitnessError) -> Self {
        match e {
            WitnessError::FuelExhausted(n) => DeciderError::FuelExhausted(n),
            other => DeciderError::DishonestWitness(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StopRun {
    pub evidence: DupEvidence,
    pub depth: usize,
    pub accumulator: Accumulator,
}

/// Descends `w`, answering iteration `t` with `feed(t)`.
pub fn run_to_stop<F>(w: &NoethAcc, feed: F, fuel: u64) -> Result<StopRun, DeciderError>
where
    F: Fn(usize) -> Value,
{
    let mut node = w.clone();
    let mut acc = Accumulator::new();
    for _ in 0..fuel {
        match node {
            NoethAcc::Stop(e) => {
                if acc.len() < 2 || e.t_early >= e.t_late || e.t_late >= acc.len() {
                    return Err(DeciderError::DishonestWitness(format!(
                        "evidence ({}, {}) does not fit an accumulator of length {}",
                        e.t_early,
                        e.t_late,
                        acc.len()
                    )));
                }
                return Ok(StopRun {
                    evidence: e,
                    depth: acc.len(),
                    accumulator: acc,
                });
            }
            NoethAcc::Ask(f) => {
                let v = feed(acc.len());
                node = f.apply(&v)?;
                acc.push(v);
            }
        }
    }
    Err(DeciderError::FuelExhausted(fuel))
}

/// An equality decider backed only by a witness.
#[derive(Clone, Debug)]
pub struct Decider {
    witness: NoethAcc,
    fuel: u64,
}

impl Decider {
    pub fn decide(&self, x: &Value, y: &Value) -> Result<Equality, DeciderError> {
        let first = run_to_stop(&self.witness, |_| x.clone(), self.fuel)?;
        let t1 = first.evidence.t_early;
        let second = self.probe(x, y, t1)?;
        Ok(second.evidence.contains(t1).into())
    }

    /// The replay that feeds `y` at iteration `t1` and `x` elsewhere.
    pub fn probe(&self, x: &Value, y: &Value, t1: usize) -> Result<StopRun, DeciderError> {
        run_to_stop(
            &self.witness,
            |t| if t == t1 { y.clone() } else { x.clone() },
            self.fuel,
        )
    }
}

pub fn extract_decider(w: &NoethAcc, fuel: u64) -> Decider {
    Decider {
        witness: w.clone(),
        fuel,
    }
}
