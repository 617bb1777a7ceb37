//! Positional certificates and their validators.
//!
//! All indices are *iteration numbers*: position `t` is the element that
//! arrived at the `t`-th ask or tell of a play, counting from zero. A
//! head-cons list view (newest element first) of a length-`L` accumulator
//! puts iteration `t` at position `L - 1 - t`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::af::Relation;
use crate::carrier::Carrier;
use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvidenceError {
    #[error("evidence index {index} out of range for accumulator of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("PigeonholeViolated: no two elements share an index among {len} values")]
    PigeonholeViolated { len: usize },
    #[error("index map sent a value to {index}, outside bound {bound}")]
    IndexMapOutOfRange { index: usize, bound: usize },
}

/// The elements fed into a play so far, oldest first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Accumulator {
    items: Vec<Value>,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, iteration: usize) -> Option<&Value> {
        self.items.get(iteration)
    }

    pub fn push(&mut self, v: Value) {
        self.items.push(v);
    }

    pub fn pushed(&self, v: Value) -> Self {
        let mut next = self.clone();
        next.push(v);
        next
    }

    pub fn items(&self) -> &[Value] {
        &self.items
    }

    /// Position of `iteration` in the newest-first list view.
    pub fn head_position(&self, iteration: usize) -> usize {
        self.items.len() - 1 - iteration
    }
}

impl From<Vec<Value>> for Accumulator {
    fn from(items: Vec<Value>) -> Self {
        Accumulator { items }
    }
}

impl FromIterator<Value> for Accumulator {
    fn from_iter<I: IntoIterator<Item = Value>>(iter: I) -> Self {
        Accumulator {
            items: iter.into_iter().collect(),
        }
    }
}

/// Claim that the elements at two iterations are equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DupEvidence {
    pub t_early: usize,
    pub t_late: usize,
}

impl DupEvidence {
    pub fn new(t_early: usize, t_late: usize) -> Self {
        DupEvidence { t_early, t_late }
    }

    pub fn contains(&self, t: usize) -> bool {
        self.t_early == t || self.t_late == t
    }
}

/// Claim that the older element is related to the newer one:
/// `R(elem@t_from, elem@t_to)` with `t_from < t_to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelEvidence {
    pub t_from: usize,
    pub t_to: usize,
}

impl RelEvidence {
    pub fn new(t_from: usize, t_to: usize) -> Self {
        RelEvidence { t_from, t_to }
    }
}

impl From<DupEvidence> for RelEvidence {
    fn from(d: DupEvidence) -> Self {
        RelEvidence::new(d.t_early, d.t_late)
    }
}

impl From<RelEvidence> for DupEvidence {
    fn from(r: RelEvidence) -> Self {
        DupEvidence::new(r.t_from, r.t_to)
    }
}

/// Points at the position holding a given element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MemEvidence {
    pub index: usize,
}

impl MemEvidence {
    pub fn at(index: usize) -> Self {
        MemEvidence { index }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Validity {
    Valid,
    Invalid,
    /// The carrier cannot check the claim (no equality); accepted on trust.
    Unverifiable,
}

pub fn validate_dup(c: &Carrier, acc: &Accumulator, e: DupEvidence) -> Validity {
    if e.t_early >= e.t_late || e.t_late >= acc.len() {
        return Validity::Invalid;
    }
    if !c.caps().has_eq {
        return Validity::Unverifiable;
    }
    let (a, b) = (&acc.items[e.t_early], &acc.items[e.t_late]);
    match c.value_eq(a, b) {
        Ok(eq) if eq.is_equal() => Validity::Valid,
        Ok(_) => Validity::Invalid,
        Err(_) => Validity::Unverifiable,
    }
}

pub fn validate_dup_r(rel: &Relation, acc: &Accumulator, e: RelEvidence) -> Result<Validity, EvidenceError> {
    for index in [e.t_from, e.t_to] {
        if index >= acc.len() {
            return Err(EvidenceError::IndexOutOfRange { index, len: acc.len() });
        }
    }
    if e.t_from >= e.t_to {
        return Ok(Validity::Invalid);
    }
    let holds = rel.eval(&acc.items[e.t_from], &acc.items[e.t_to]);
    Ok(if holds { Validity::Valid } else { Validity::Invalid })
}

/// Checks membership evidence by canonical encoding, which is what an
/// enumerator audit compares against.
pub fn validate_mem(acc: &Accumulator, v: &Value, e: MemEvidence) -> Validity {
    match acc.get(e.index) {
        Some(x) if x == v => Validity::Valid,
        _ => Validity::Invalid,
    }
}

/// Lexicographically least honest duplicate pair, if any.
pub fn scan_for_dup(c: &Carrier, acc: &Accumulator) -> Result<Option<DupEvidence>, crate::carrier::CarrierError> {
    c.require(crate::carrier::Capability::Equality)?;
    for (i, a) in acc.items.iter().enumerate() {
        for (j, b) in acc.items.iter().enumerate().skip(i + 1) {
            if c.value_eq(a, b)?.is_equal() {
                return Ok(Some(DupEvidence::new(i, j)));
            }
        }
    }
    Ok(None)
}

/// Finds the lexicographically least pair of iterations whose elements
/// land in the same bucket of `index_of`.
pub fn pigeonhole_dup<F>(acc: &Accumulator, index_of: F, bound: usize) -> Result<DupEvidence, EvidenceError>
where
    F: Fn(&Value) -> Option<usize>,
{
    // first and second occurrence per bucket
    let mut buckets: Vec<(Option<usize>, Option<usize>)> = vec![(None, None); bound];
    for (t, v) in acc.items.iter().enumerate() {
        let index = index_of(v).unwrap_or(usize::MAX);
        let slot = buckets
            .get_mut(index)
            .ok_or(EvidenceError::IndexMapOutOfRange { index, bound })?;
        match slot {
            (None, _) => slot.0 = Some(t),
            (Some(_), None) => slot.1 = Some(t),
            _ => {}
        }
    }
    buckets
        .iter()
        .filter_map(|&(a, b)| Some(DupEvidence::new(a?, b?)))
        .min()
        .ok_or(EvidenceError::PigeonholeViolated { len: acc.len() })
}
