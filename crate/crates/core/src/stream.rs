//! Streams, colists, and the streamless encodings.
//!
//! Sources are index functions, so every run can be replayed exactly.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::carrier::{Carrier, CarrierError};
use crate::decider::{run_to_stop, DeciderError};
use crate::evidence::{scan_for_dup, Accumulator, DupEvidence};
use crate::value::Value;
use crate::witnesses::{NoethAcc, NoethAccS, WitnessError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StreamError {
    #[error("FuelExhausted after {0} node visits")]
    FuelExhausted(u64),
    #[error("DishonestWitness: {0}")]
    DishonestWitness(String),
    #[error("bad stream descriptor: {0}")]
    Descriptor(String),
    #[error(transparent)]
    Carrier(#[from] CarrierError),
}

impl From<DeciderError> for StreamError {
    fn from(e: DeciderError) -> Self {
        match e {
            DeciderError::FuelExhausted(n) => StreamError::FuelExhausted(n),
            DeciderError::DishonestWitness(m) => StreamError::DishonestWitness(m),
        }
    }
}

/// An infinite source: position `i` holds `next(i)`.
#[derive(Clone)]
pub struct StreamSource {
    next: Arc<dyn Fn(usize) -> Value + Send + Sync>,
}

impl StreamSource {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(usize) -> Value + Send + Sync + 'static,
    {
        StreamSource { next: Arc::new(f) }
    }

    pub fn constant(v: Value) -> Self {
        StreamSource::new(move |_| v.clone())
    }

    /// Repeats `values` forever. Panics on an empty cycle.
    pub fn cycle(values: Vec<Value>) -> Self {
        assert!(!values.is_empty(), "a cycle needs at least one value");
        StreamSource::new(move |i| values[i % values.len()].clone())
    }

    /// `prefix` once, then `period` forever.
    pub fn eventually_periodic(prefix: Vec<Value>, period: Vec<Value>) -> Self {
        assert!(!period.is_empty(), "a period needs at least one value");
        StreamSource::new(move |i| match prefix.get(i) {
            Some(v) => v.clone(),
            None => period[(i - prefix.len()) % period.len()].clone(),
        })
    }

    /// A pseudo-random eventually periodic stream over the elements of `c`:
    /// prefix of length 0..8, period of length 1..6.
    pub fn seeded(seed: u64, c: &Carrier) -> Result<Self, StreamError> {
        let elems = c.opponent_view();
        if elems.is_empty() {
            return Err(StreamError::Descriptor(format!("no stream over empty carrier {c}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let prefix_len = rng.gen_range(0..8);
        let period_len = rng.gen_range(1..6);
        let mut pick =
            |n: usize| -> Vec<Value> { (0..n).map(|_| elems[rng.gen_range(0..elems.len())].clone()).collect() };
        let prefix = pick(prefix_len);
        let period = pick(period_len);
        Ok(StreamSource::eventually_periodic(prefix, period))
    }

    /// Parses `const:<v>`, `cycle:<v1,v2,...>` or `seeded:<seed>`.
    pub fn from_descriptor(desc: &str, c: &Carrier) -> Result<Self, StreamError> {
        let bad = || StreamError::Descriptor(desc.to_string());
        let (kind, arg) = desc.split_once(':').ok_or_else(bad)?;
        match kind {
            "const" => Ok(StreamSource::constant(arg.parse()?)),
            "cycle" => {
                let values = Value::parse_list(arg)?;
                if values.is_empty() {
                    return Err(bad());
                }
                Ok(StreamSource::cycle(values))
            }
            "seeded" => StreamSource::seeded(arg.parse().map_err(|_| bad())?, c),
            _ => Err(bad()),
        }
    }

    pub fn at(&self, i: usize) -> Value {
        (self.next)(i)
    }

    pub fn prefix(&self, n: usize) -> Vec<Value> {
        (0..n).map(|i| self.at(i)).collect()
    }
}

impl fmt::Debug for StreamSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.prefix(8)).finish()?;
        f.write_str("...")
    }
}

/// A possibly finite source; once `next(i)` is `None` it stays `None`.
#[derive(Clone)]
pub struct ColistSource {
    next: Arc<dyn Fn(usize) -> Option<Value> + Send + Sync>,
}

impl ColistSource {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(usize) -> Option<Value> + Send + Sync + 'static,
    {
        ColistSource { next: Arc::new(f) }
    }

    pub fn finite(values: Vec<Value>) -> Self {
        ColistSource::new(move |i| values.get(i).cloned())
    }

    pub fn infinite(s: StreamSource) -> Self {
        ColistSource::new(move |i| Some(s.at(i)))
    }

    pub fn at(&self, i: usize) -> Option<Value> {
        (self.next)(i)
    }
}

impl fmt::Debug for ColistSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ColistSource(..)")
    }
}

/// Runs `w` on the stream; the returned indices are stream positions.
pub fn acc_to_streamless(w: &NoethAcc, s: &StreamSource, fuel: u64) -> Result<DupEvidence, StreamError> {
    Ok(run_to_stop(w, |i| s.at(i), fuel)?.evidence)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome")]
pub enum StreamlessOutcome {
    /// The colist ended after `n` elements.
    FiniteLength {
        n: usize,
        prefix: Vec<Value>,
    },
    /// The source repeated an element, at the given positions.
    SourceNotDupFree {
        dup: Option<DupEvidence>,
    },
    WitnessDishonest,
}

/// Feeds the colist into a strict witness as fresh answers.
///
/// With equality, each element is checked against the prefix as it
/// arrives. Without it, the only check is counting: more elements than the
/// carrier's size bound cannot all be distinct.
pub fn strict_to_streamless_s(
    w: &NoethAccS,
    cs: &ColistSource,
    c: &Carrier,
    fuel: u64,
) -> Result<StreamlessOutcome, StreamError> {
    let mut node = w.clone();
    let mut prefix = Accumulator::new();
    let has_eq = c.caps().has_eq;
    let exceeds_bound = |len: usize| c.caps().size_bound.is_some_and(|n| len > n);
    for _ in 0..fuel {
        match node {
            NoethAccS::Ask(f) => {
                let Some(v) = cs.at(prefix.len()) else {
                    let n = prefix.len();
                    return Ok(StreamlessOutcome::FiniteLength {
                        n,
                        prefix: prefix.items().to_vec(),
                    });
                };
                prefix.push(v.clone());
                if has_eq {
                    if let Some(dup) = scan_for_dup(c, &prefix)? {
                        return Ok(StreamlessOutcome::SourceNotDupFree { dup: Some(dup) });
                    }
                } else if exceeds_bound(prefix.len()) {
                    return Ok(StreamlessOutcome::SourceNotDupFree { dup: None });
                }
                node = match f.apply(&v) {
                    Ok(n) => n,
                    Err(WitnessError::FuelExhausted(n)) => return Err(StreamError::FuelExhausted(n)),
                    Err(e) => return Err(StreamError::DishonestWitness(e.to_string())),
                };
            }
            NoethAccS::Absurd => return Ok(StreamlessOutcome::WitnessDishonest),
        }
    }
    Err(StreamError::FuelExhausted(fuel))
}
