//! Almost-full relations.
//!
//! An [`Af`] tree either claims its current relation is total (`Afzt`) or
//! asks for a pivot `x` and continues with the extended relation
//! `R'(y, z) = R(y, z) ∨ R(x, y)`. [`NoethAccR`] is the accumulator form:
//! ask until two accumulated elements are related, older to newer.
//! The two are interconvertible; the pivot bookkeeping needed for that
//! lives in the descent state, never in the trees.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::carrier::Carrier;
use crate::evidence::{Accumulator, RelEvidence, Validity};
use crate::value::Value;
use crate::witnesses::{bounded_chain, Bounded, Branch, NoethAcc, WitnessError};

type Predicate = Arc<dyn Fn(&Value, &Value) -> bool + Send + Sync>;

/// A decidable base relation.
#[derive(Clone)]
pub enum BaseRelation {
    Equality,
    Total,
    Empty,
    Named { name: String, holds: Predicate },
}

impl BaseRelation {
    pub fn named<F>(name: &str, holds: F) -> Self
    where
        F: Fn(&Value, &Value) -> bool + Send + Sync + 'static,
    {
        BaseRelation::Named {
            name: name.to_string(),
            holds: Arc::new(holds),
        }
    }

    /// Same parity of position in the carrier's element order.
    pub fn parity(c: &Carrier) -> Self {
        let order = ordinal_table(c);
        BaseRelation::named("parity", move |a, b| match (order(a), order(b)) {
            (Some(i), Some(j)) => i % 2 == j % 2,
            _ => false,
        })
    }

    /// `a ≤ b` in the carrier's element order.
    pub fn leq(c: &Carrier) -> Self {
        let order = ordinal_table(c);
        BaseRelation::named("leq", move |a, b| match (order(a), order(b)) {
            (Some(i), Some(j)) => i <= j,
            _ => false,
        })
    }

    /// Parses `eq | total | empty | parity | leq`.
    pub fn from_descriptor(desc: &str, c: &Carrier) -> Option<Self> {
        Some(match desc {
            "eq" => BaseRelation::Equality,
            "total" => BaseRelation::Total,
            "empty" => BaseRelation::Empty,
            "parity" => BaseRelation::parity(c),
            "leq" => BaseRelation::leq(c),
            _ => return None,
        })
    }

    pub fn name(&self) -> &str {
        match self {
            BaseRelation::Equality => "eq",
            BaseRelation::Total => "total",
            BaseRelation::Empty => "empty",
            BaseRelation::Named { name, .. } => name,
        }
    }

    pub fn holds(&self, a: &Value, b: &Value) -> bool {
        match self {
            BaseRelation::Equality => a == b,
            BaseRelation::Total => true,
            BaseRelation::Empty => false,
            BaseRelation::Named { holds, .. } => holds(a, b),
        }
    }

    /// Reflexivity over the opponent-side listing of `c`.
    pub fn is_reflexive_on(&self, c: &Carrier) -> bool {
        c.opponent_view().iter().all(|x| self.holds(x, x))
    }
}

impl fmt::Debug for BaseRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn ordinal_table(c: &Carrier) -> impl Fn(&Value) -> Option<usize> + Send + Sync + 'static {
    let elems = c.opponent_view();
    move |v| elems.iter().position(|x| x == v)
}

/// A base relation extended by a stack of pivots, oldest first.
#[derive(Clone, Debug)]
pub struct Relation {
    pub base: BaseRelation,
    pub pivots: Vec<Value>,
}

impl Relation {
    pub fn new(base: BaseRelation) -> Self {
        Relation {
            base,
            pivots: Vec::new(),
        }
    }

    pub fn with_pivots(base: BaseRelation, pivots: Vec<Value>) -> Self {
        Relation { base, pivots }
    }

    pub fn extended(&self, pivot: Value) -> Self {
        let mut next = self.clone();
        next.pivots.push(pivot);
        next
    }

    /// `R_k(y, z) = R_{k-1}(y, z) ∨ R_{k-1}(x_k, y)`, `R_0` the base.
    pub fn eval(&self, y: &Value, z: &Value) -> bool {
        self.eval_at(self.pivots.len(), y, z)
    }

    fn eval_at(&self, k: usize, y: &Value, z: &Value) -> bool {
        if k == 0 {
            return self.base.holds(y, z);
        }
        self.eval_at(k - 1, y, z) || self.eval_at(k - 1, &self.pivots[k - 1], y)
    }

    /// Turns a proof of the extended relation between the elements at
    /// iterations `ty < tz` into base-relation evidence. Pivot `i` sits at
    /// iteration `i`.
    fn demote(&self, k: usize, y: (&Value, usize), z: (&Value, usize)) -> Option<RelEvidence> {
        if k == 0 {
            return self.base.holds(y.0, z.0).then(|| RelEvidence::new(y.1, z.1));
        }
        self.demote(k - 1, y, z)
            .or_else(|| self.demote(k - 1, (&self.pivots[k - 1], k - 1), y))
    }
}

pub fn eval_relation(rel: &Relation, y: &Value, z: &Value) -> bool {
    rel.eval(y, z)
}

/// Why an `Afzt` leaf's relation is total.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "claim", rename_all = "snake_case")]
pub enum TotalityClaim {
    /// The base relation itself is total.
    BaseTotal,
    /// The unfolded relation contains the constant disjunct
    /// `base(pivot@t_from, pivot@t_to)`, which holds.
    ConstantDisjunct { t_from: usize, t_to: usize },
}

#[derive(Clone, Debug)]
pub enum Af {
    Afzt(TotalityClaim),
    Afsup(Branch<Af>),
}

#[derive(Clone, Debug)]
pub enum NoethAccR {
    Stop(RelEvidence),
    Ask(Branch<NoethAccR>),
}

/// Audits an `Afzt` leaf reached with the given pivots.
///
/// A valid claim implies totality of the extended relation: the base
/// relation is contained in it, and so is every `base(x_i, x_j)`, `i < j`.
pub fn audit_totality(rel: &Relation, claim: TotalityClaim, c: &Carrier) -> Validity {
    let holds = match claim {
        TotalityClaim::ConstantDisjunct { t_from, t_to } => constant_disjunct_holds(rel, t_from, t_to),
        TotalityClaim::BaseTotal => {
            if !c.caps().has_enum {
                return Validity::Unverifiable;
            }
            let xs = c.opponent_view();
            xs.iter().all(|y| xs.iter().all(|z| rel.base.holds(y, z)))
        }
    };
    if holds {
        Validity::Valid
    } else {
        Validity::Invalid
    }
}

fn constant_disjunct_holds(rel: &Relation, t_from: usize, t_to: usize) -> bool {
    t_from < t_to && t_to < rel.pivots.len() && rel.base.holds(&rel.pivots[t_from], &rel.pivots[t_to])
}

/// AF → NoethAccR. A leaf whose claim is a constant disjunct over the
/// pivots already names related iterations, so it stops there. Otherwise,
/// with `d` pivots, ask two more elements `a@d`, `b@d+1`; the extended
/// relation holds between them by totality, and demotion finds the
/// base-relation disjunct responsible.
pub fn af_to_noeth_acc_r(w: &Af, base: &BaseRelation) -> NoethAccR {
    af_descend(w.clone(), Relation::new(base.clone()))
}

fn af_descend(node: Af, rel: Relation) -> NoethAccR {
    match node {
        Af::Afsup(f) => NoethAccR::Ask(Branch::new(move |x| {
            Ok(af_descend(f.apply(x)?, rel.extended(x.clone())))
        })),
        Af::Afzt(TotalityClaim::ConstantDisjunct { t_from, t_to }) if constant_disjunct_holds(&rel, t_from, t_to) => {
            NoethAccR::Stop(RelEvidence::new(t_from, t_to))
        }
        Af::Afzt(_) => {
            let d = rel.pivots.len();
            NoethAccR::Ask(Branch::total(move |a| {
                let rel = rel.clone();
                let a = a.clone();
                NoethAccR::Ask(Branch::new(move |b| {
                    rel.demote(d, (&a, d), (b, d + 1))
                        .map(NoethAccR::Stop)
                        .ok_or(WitnessError::EvidenceDemotionFailed { t_from: d, t_to: d + 1 })
                }))
            }))
        }
    }
}

/// NoethAccR → AF. A stop with evidence `(i, j)` becomes a totality claim
/// resting on the constant disjunct `base(x_i, x_j)`.
pub fn noeth_acc_r_to_af(w: &NoethAccR) -> Af {
    match w {
        NoethAccR::Stop(e) => Af::Afzt(TotalityClaim::ConstantDisjunct {
            t_from: e.t_from,
            t_to: e.t_to,
        }),
        NoethAccR::Ask(f) => {
            let f = f.clone();
            Af::Afsup(Branch::new(move |x| Ok(noeth_acc_r_to_af(&f.apply(x)?))))
        }
    }
}

pub fn noeth_acc_to_noeth_acc_r(w: &NoethAcc) -> NoethAccR {
    match w {
        NoethAcc::Stop(d) => NoethAccR::Stop((*d).into()),
        NoethAcc::Ask(f) => {
            let f = f.clone();
            NoethAccR::Ask(Branch::new(move |x| Ok(noeth_acc_to_noeth_acc_r(&f.apply(x)?))))
        }
    }
}

/// Reads relation evidence as duplicate evidence; meaningful when the
/// relation is equality.
pub fn noeth_acc_r_to_noeth_acc(w: &NoethAccR) -> NoethAcc {
    match w {
        NoethAccR::Stop(r) => NoethAcc::Stop((*r).into()),
        NoethAccR::Ask(f) => {
            let f = f.clone();
            NoethAcc::Ask(Branch::new(move |x| Ok(noeth_acc_r_to_noeth_acc(&f.apply(x)?))))
        }
    }
}

pub fn afeq_to_noeth_acc(w: &Af) -> NoethAcc {
    noeth_acc_r_to_noeth_acc(&af_to_noeth_acc_r(w, &BaseRelation::Equality))
}

pub fn noeth_acc_to_afeq(w: &NoethAcc) -> Af {
    noeth_acc_r_to_af(&noeth_acc_to_noeth_acc_r(w))
}

/// NoethAccR from a size bound, for relations reflexive on the carrier:
/// a pigeonhole duplicate is an equal pair, and reflexivity relates it.
pub fn noeth_acc_r_from_bounded(b: &Bounded, base: &BaseRelation, c: &Carrier) -> Result<NoethAccR, WitnessError> {
    if !base.is_reflexive_on(c) {
        return Err(WitnessError::Dishonest(format!(
            "relation `{}` is not reflexive on {c}",
            base.name()
        )));
    }
    Ok(noeth_acc_to_noeth_acc_r(&bounded_chain(b.clone(), Accumulator::new())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(n: u32) -> Value {
        Value::Nat(n)
    }

    #[test]
    fn extension_law_examples() {
        let fin3 = Carrier::parse("fin:3").unwrap();
        let leq = Relation::with_pivots(BaseRelation::leq(&fin3), vec![nat(1)]);
        assert!(eval_relation(&leq, &nat(2), &nat(0)));
        let bare = Relation::new(BaseRelation::leq(&fin3));
        assert!(!bare.eval(&nat(2), &nat(0)));
        assert!(bare.eval(&nat(0), &nat(2)));
        let eq = Relation::with_pivots(BaseRelation::Equality, vec![nat(0), nat(0)]);
        assert!(eq.eval(&nat(1), &nat(2)));
        let eq1 = Relation::with_pivots(BaseRelation::Equality, vec![nat(0)]);
        assert!(!eq1.eval(&nat(1), &nat(2)));
        assert!(eq1.eval(&nat(0), &nat(2)));
    }

    #[test]
    fn demotion_orients_older_to_newer() {
        // pivots [0,1]; at depth 2 ask a=1, b=2: R(x_1 = 1, a = 1) is the
        // disjunct that holds.
        let rel = Relation::with_pivots(BaseRelation::Equality, vec![nat(0), nat(1)]);
        assert_eq!(rel.demote(2, (&nat(1), 2), (&nat(2), 3)), Some(RelEvidence::new(1, 2)));
        let rel = Relation::with_pivots(BaseRelation::Equality, vec![nat(0), nat(0)]);
        assert_eq!(rel.demote(2, (&nat(1), 2), (&nat(2), 3)), Some(RelEvidence::new(0, 1)));
        let rel = Relation::with_pivots(BaseRelation::Equality, vec![nat(0), nat(1)]);
        assert_eq!(rel.demote(2, (&nat(2), 2), (&nat(3), 3)), None);
    }

    #[test]
    fn base_total_audit() {
        let bool_c = Carrier::parse("bool").unwrap();
        let total = Relation::new(BaseRelation::Total);
        assert_eq!(
            audit_totality(&total, TotalityClaim::BaseTotal, &bool_c),
            Validity::Valid
        );
        let empty = Relation::new(BaseRelation::Empty);
        let fin1 = Carrier::parse("fin:1").unwrap();
        assert_eq!(
            audit_totality(&empty, TotalityClaim::BaseTotal, &fin1),
            Validity::Invalid
        );
        let eq = Relation::new(BaseRelation::Equality);
        assert_eq!(
            audit_totality(&eq, TotalityClaim::BaseTotal, &bool_c),
            Validity::Invalid
        );
        assert_eq!(audit_totality(&eq, TotalityClaim::BaseTotal, &fin1), Validity::Valid);
    }

    #[test]
    fn constant_disjunct_audit() {
        let fin1 = Carrier::parse("fin:1").unwrap();
        let rel = Relation::with_pivots(BaseRelation::Equality, vec![nat(0), nat(0)]);
        let claim = TotalityClaim::ConstantDisjunct { t_from: 0, t_to: 1 };
        assert_eq!(audit_totality(&rel, claim, &fin1), Validity::Valid);
        let fin3 = Carrier::parse("fin:3").unwrap();
        let rel = Relation::with_pivots(BaseRelation::Equality, vec![nat(0), nat(2)]);
        assert_eq!(audit_totality(&rel, claim, &fin3), Validity::Invalid);
        let out_of_range = TotalityClaim::ConstantDisjunct { t_from: 0, t_to: 5 };
        assert_eq!(audit_totality(&rel, out_of_range, &fin3), Validity::Invalid);
    }

    #[test]
    fn reflexivity_gate() {
        let fin1 = Carrier::parse("fin:1").unwrap();
        let b = crate::witnesses::listable_to_bounded(&crate::witnesses::listable_from_enum(&fin1).unwrap());
        assert!(noeth_acc_r_from_bounded(&b, &BaseRelation::Empty, &fin1).is_err());
        assert!(noeth_acc_r_from_bounded(&b, &BaseRelation::Equality, &fin1).is_ok());
        assert!(noeth_acc_r_from_bounded(&b, &BaseRelation::parity(&fin1), &fin1).is_ok());
    }

    #[test]
    fn noeth_acc_r_to_af_maps_stop_to_constant_disjunct() {
        let w = NoethAccR::Stop(RelEvidence::new(0, 1));
        assert!(matches!(
            noeth_acc_r_to_af(&w),
            Af::Afzt(TotalityClaim::ConstantDisjunct { t_from: 0, t_to: 1 })
        ));
    }

    #[test]
    fn base_total_leaf_asks_two_more() {
        use crate::games::{play_noeth_acc_r, Opponent, Verdict, WinReason};
        let fin3 = Carrier::parse("fin:3").unwrap();
        let w = af_to_noeth_acc_r(&Af::Afzt(TotalityClaim::BaseTotal), &BaseRelation::Total);
        let o = Opponent::Scripted(vec![nat(2), nat(0)]);
        let t = play_noeth_acc_r(&w, &fin3, &BaseRelation::Total, &o, crate::DEFAULT_FUEL);
        assert_eq!(t.verdict, Verdict::ProverWins(WinReason::EvidenceValidated));
        assert_eq!(t.asks(), 2);
    }

    #[test]
    fn constant_disjunct_leaf_stops_at_once() {
        let leaf = Af::Afsup(Branch::total(|_| {
            Af::Afsup(Branch::total(|_| {
                Af::Afzt(TotalityClaim::ConstantDisjunct { t_from: 0, t_to: 1 })
            }))
        }));
        let NoethAccR::Ask(f) = af_to_noeth_acc_r(&leaf, &BaseRelation::Equality) else {
            panic!("expected an ask")
        };
        let NoethAccR::Ask(g) = f.apply(&nat(1)).unwrap() else {
            panic!("expected an ask")
        };
        // x_0 = x_1: the claim holds, stop with it
        assert!(matches!(g.apply(&nat(1)).unwrap(), NoethAccR::Stop(e) if e == RelEvidence::new(0, 1)));
        // x_0 != x_1: the claim is false, fall back to two more asks
        assert!(matches!(g.apply(&nat(2)).unwrap(), NoethAccR::Ask(_)));
    }
}
