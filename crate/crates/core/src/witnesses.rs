//! Witness trees for each finiteness encoding, and the direct builders.
//!
//! A witness is a strategy tree: `Ask` nodes hold a total function from
//! carrier values to subtrees, built lazily on demand. Branch functions must
//! be pure and depend only on the canonical encoding of their argument;
//! that contract is what makes two plays fed equal sequences identical.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::carrier::{Capability, Carrier, CarrierError};
use crate::evidence::{pigeonhole_dup, Accumulator, DupEvidence, EvidenceError, MemEvidence};
use crate::value::Value;

/// Default evaluation budget, in node visits.
pub const DEFAULT_FUEL: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error(transparent)]
    Carrier(#[from] CarrierError),
    #[error(transparent)]
    Evidence(#[from] EvidenceError),
    #[error("DishonestWitness: {0}")]
    Dishonest(String),
    #[error("value {0} lies outside the carrier the witness was built for")]
    OutOfCarrier(Value),
    #[error("FuelExhausted after {0} node visits")]
    FuelExhausted(u64),
    #[error("TagScanFailed: {0}")]
    TagScanFailed(String),
    #[error(
        "EvidenceDemotionFailed: no disjunct of the extended relation holds between iterations {t_from} and {t_to}"
    )]
    EvidenceDemotionFailed { t_from: usize, t_to: usize },
    #[error("unknown witness `{0}`")]
    UnknownWitness(String),
    #[error("witness `{name}` does not apply to carrier `{carrier}`")]
    WrongCarrier { name: String, carrier: String },
}

impl WitnessError {
    pub fn is_fuel(&self) -> bool {
        matches!(self, WitnessError::FuelExhausted(_))
    }
}

type BranchFn<T> = dyn Fn(&Value) -> Result<T, WitnessError> + Send + Sync;

/// A total function from carrier values to subtrees.
pub struct Branch<T>(Arc<BranchFn<T>>);

impl<T> Branch<T> {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&Value) -> Result<T, WitnessError> + Send + Sync + 'static,
    {
        Branch(Arc::new(f))
    }

    pub fn total<F>(f: F) -> Self
    where
        F: Fn(&Value) -> T + Send + Sync + 'static,
    {
        Branch(Arc::new(move |v| Ok(f(v))))
    }

    pub fn apply(&self, v: &Value) -> Result<T, WitnessError> {
        (self.0)(v)
    }
}

impl<T> Clone for Branch<T> {
    fn clone(&self) -> Self {
        Branch(Arc::clone(&self.0))
    }
}

impl<T> fmt::Debug for Branch<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<branch>")
    }
}

pub type Locate = Arc<dyn Fn(&Value) -> Result<MemEvidence, WitnessError> + Send + Sync>;
pub type DupFinder = Arc<dyn Fn(&Accumulator) -> Result<DupEvidence, WitnessError> + Send + Sync>;

/// Ask until the accumulator provably holds a duplicate.
#[derive(Clone, Debug)]
pub enum NoethAcc {
    Stop(DupEvidence),
    Ask(Branch<NoethAcc>),
}

impl NoethAcc {
    pub fn stop(t_early: usize, t_late: usize) -> Self {
        NoethAcc::Stop(DupEvidence::new(t_early, t_late))
    }

    pub fn ask<F>(f: F) -> Self
    where
        F: Fn(&Value) -> Result<NoethAcc, WitnessError> + Send + Sync + 'static,
    {
        NoethAcc::Ask(Branch::new(f))
    }
}

/// Ask only for fresh elements. `Absurd` is the vacuous leaf: legal play
/// never reaches it, because the opponent runs out of fresh elements first.
#[derive(Clone, Debug)]
pub enum NoethAccS {
    Absurd,
    Ask(Branch<NoethAccS>),
}

/// Same tree shape as [`NoethAccS`], evaluated by removing each answered
/// element from the carrier instead of keeping an accumulator.
#[derive(Clone, Debug)]
pub enum NoethSet {
    Absurd,
    Ask(Branch<NoethSet>),
}

/// Fresh asks, plus prover-supplied elements.
#[derive(Clone, Debug)]
pub enum NoethGame {
    Absurd,
    Tell(Value, Arc<NoethGame>),
    Ask(Branch<NoethGame>),
}

/// Unrestricted asks and tells, ending with a proof that the accumulator
/// holds every element.
#[derive(Clone)]
pub enum NoethExpose {
    Stop(Locate),
    Tell(Value, Arc<NoethExpose>),
    Ask(Branch<NoethExpose>),
}

impl fmt::Debug for NoethExpose {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoethExpose::Stop(_) => f.write_str("Stop(<completeness>)"),
            NoethExpose::Tell(v, next) => f.debug_tuple("Tell").field(v).field(next).finish(),
            NoethExpose::Ask(b) => f.debug_tuple("Ask").field(b).finish(),
        }
    }
}

/// A complete listing with a locator for every element.
#[derive(Clone)]
pub struct Listable {
    pub items: Vec<Value>,
    pub locate: Locate,
}

impl fmt::Debug for Listable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Listable")
            .field("items", &self.items)
            .finish_non_exhaustive()
    }
}

/// A size bound with a duplicate finder for every accumulator at least
/// that long.
#[derive(Clone)]
pub struct Bounded {
    pub bound: usize,
    pub dup_finder: DupFinder,
}

impl fmt::Debug for Bounded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Bounded")
            .field("bound", &self.bound)
            .finish_non_exhaustive()
    }
}

fn as_bool(v: &Value) -> Result<bool, WitnessError> {
    match v {
        Value::Bool(b) => Ok(*b),
        other => Err(WitnessError::OutOfCarrier(other.clone())),
    }
}

/// The hand-written depth-three witness for the booleans.
///
/// After a first answer `x`: a repeat stops at once; otherwise one more
/// element must repeat either the first (iterations 0,2) or the second
/// (iterations 1,2).
pub fn build_bool_noeth_acc() -> NoethAcc {
    NoethAcc::ask(|first| {
        let first = as_bool(first)?;
        Ok(NoethAcc::ask(move |second| {
            if as_bool(second)? == first {
                return Ok(NoethAcc::stop(0, 1));
            }
            Ok(NoethAcc::ask(move |third| {
                Ok(if as_bool(third)? == first {
                    NoethAcc::stop(0, 2)
                } else {
                    NoethAcc::stop(1, 2)
                })
            }))
        }))
    })
}

/// Locates by canonical encoding; no equality calls are made.
pub fn listable_from_enum(c: &Carrier) -> Result<Listable, WitnessError> {
    let items = c.enumerate()?;
    let table = items.clone();
    Ok(Listable {
        items,
        locate: Arc::new(move |v| {
            table
                .iter()
                .position(|x| x == v)
                .map(MemEvidence::at)
                .ok_or_else(|| WitnessError::OutOfCarrier(v.clone()))
        }),
    })
}

/// Bound `len + 1`; duplicates come from bucketing by the locator.
pub fn listable_to_bounded(l: &Listable) -> Bounded {
    let buckets = l.items.len();
    let locate = Arc::clone(&l.locate);
    Bounded {
        bound: buckets + 1,
        dup_finder: Arc::new(move |acc| Ok(pigeonhole_dup(acc, |v| locate(v).ok().map(|m| m.index), buckets)?)),
    }
}

pub fn bounded_to_noeth_acc(b: &Bounded) -> Result<NoethAcc, WitnessError> {
    bounded_chain(b.clone(), Accumulator::new())
}

/// Ask until `acc` reaches the bound, then stop with the finder's evidence
/// for the accumulator actually fed.
pub(crate) fn bounded_chain(b: Bounded, acc: Accumulator) -> Result<NoethAcc, WitnessError> {
    if acc.len() >= b.bound {
        return (b.dup_finder)(&acc)
            .map(NoethAcc::Stop)
            .map_err(|e| WitnessError::Dishonest(e.to_string()));
    }
    Ok(NoethAcc::ask(move |v| bounded_chain(b.clone(), acc.pushed(v.clone()))))
}

/// `n + 1` fresh asks over `Absurd`. Never looks at the answers.
pub fn strict_from_bound(n: usize) -> NoethAccS {
    strict_chain(n + 1)
}

fn strict_chain(remaining: usize) -> NoethAccS {
    if remaining == 0 {
        NoethAccS::Absurd
    } else {
        NoethAccS::Ask(Branch::total(move |_| strict_chain(remaining - 1)))
    }
}

/// Ask once; whatever arrives already covers a propositional carrier.
pub fn expose_from_prop(c: &Carrier) -> Result<NoethExpose, WitnessError> {
    c.require(Capability::Propositional)?;
    Ok(NoethExpose::Ask(Branch::total(|_| {
        NoethExpose::Stop(Arc::new(|_| Ok(MemEvidence::at(0))))
    })))
}

/// Bound 3 on `sum:unit,<inner>` for propositional `inner`: among any three
/// values two share a tag, and two right-tagged values are equal because
/// the inner carrier is a proposition.
pub fn maybe_prop_bounded(c_inner: &Carrier) -> Result<Bounded, WitnessError> {
    c_inner.require(Capability::Propositional)?;
    Ok(Bounded {
        bound: 3,
        dup_finder: Arc::new(scan_tags),
    })
}

fn scan_tags(acc: &Accumulator) -> Result<DupEvidence, WitnessError> {
    let tag = |v: &Value| match v {
        Value::Left(_) => Ok(false),
        Value::Right(_) => Ok(true),
        other => Err(WitnessError::TagScanFailed(format!("{other} is not sum-tagged"))),
    };
    let items = acc.items();
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            if tag(&items[i])? != tag(&items[j])? {
                continue;
            }
            if items[i] != items[j] {
                return Err(WitnessError::TagScanFailed(format!(
                    "{} and {} share a tag but differ; inner carrier is not a proposition",
                    items[i], items[j]
                )));
            }
            return Ok(DupEvidence::new(i, j));
        }
    }
    Err(WitnessError::TagScanFailed(format!(
        "no repeated tag among {} values",
        items.len()
    )))
}

/// Tell every listed item, then stop with the listing's locator.
pub fn listable_to_expose(l: &Listable) -> NoethExpose {
    let mut node = NoethExpose::Stop(Arc::clone(&l.locate));
    for item in l.items.iter().rev() {
        node = NoethExpose::Tell(item.clone(), Arc::new(node));
    }
    node
}

/// A built-in witness, as produced by [`build_named`].
#[derive(Clone, Debug)]
pub enum Builtin {
    Acc(NoethAcc),
    Strict(NoethAccS),
    Expose(NoethExpose),
    Bounded(Bounded),
}

pub const BUILTIN_NAMES: [&str; 5] = [
    "bool-acc",
    "from-listable",
    "strict-bound:<n>",
    "expose-prop",
    "maybe-prop-bounded",
];

/// Builds a witness by name over `c`.
///
/// `maybe-prop-bounded` expects `c` to be `sum:unit,<inner>`.
pub fn build_named(name: &str, c: &Carrier) -> Result<Builtin, WitnessError> {
    let wrong = || WitnessError::WrongCarrier {
        name: name.to_string(),
        carrier: c.to_string(),
    };
    match name {
        "bool-acc" => {
            c.require(Capability::Enumeration)?;
            if c.spec() != "bool" || !c.exclusions().is_empty() {
                return Err(wrong());
            }
            Ok(Builtin::Acc(build_bool_noeth_acc()))
        }
        "from-listable" => Ok(Builtin::Acc(bounded_to_noeth_acc(&listable_to_bounded(
            &listable_from_enum(c)?,
        ))?)),
        "expose-prop" => Ok(Builtin::Expose(expose_from_prop(c)?)),
        "maybe-prop-bounded" => {
            let inner = c.spec().strip_prefix("sum:unit,").ok_or_else(wrong)?;
            Ok(Builtin::Bounded(maybe_prop_bounded(&Carrier::parse(inner)?)?))
        }
        other => {
            let n = other
                .strip_prefix("strict-bound:")
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| WitnessError::UnknownWitness(other.to_string()))?;
            Ok(Builtin::Strict(strict_from_bound(n)))
        }
    }
}
