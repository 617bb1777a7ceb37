use itertools::Itertools;
use proptest::prelude::*;

use noeth::af::{eval_relation, noeth_acc_r_from_bounded, BaseRelation, Relation};
use noeth::carrier::Carrier;
use noeth::decider::extract_decider;
use noeth::evidence::{pigeonhole_dup, scan_for_dup, validate_dup, Accumulator, DupEvidence, Validity};
use noeth::games::{explore, play, Arena, Opponent, Transcript, Verdict, WinReason};
use noeth::witnesses::{build_named, listable_from_enum, listable_to_bounded, strict_from_bound, Builtin, NoethAcc};
use noeth::{Value, DEFAULT_FUEL};

fn spec_strategy() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("bool".to_string()),
        Just("unit".to_string()),
        Just("empty".to_string()),
        (0u32..4).prop_map(|n| format!("fin:{n}")),
        (0u32..4).prop_map(|n| format!("opaque:{n}")),
    ];
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("sum:{a},{b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("prod:{a},{b}")),
            inner.prop_map(|a| format!("prop:{a}")),
        ]
    })
}

/// Small enumerable carriers, sizes 0..=6.
fn small_carrier() -> impl Strategy<Value = Carrier> {
    prop_oneof![
        Just("bool"),
        Just("unit"),
        Just("empty"),
        Just("fin:3"),
        Just("fin:5"),
        Just("sum:unit,bool"),
        Just("prod:bool,fin:3"),
        Just("sum:bool,fin:2"),
    ]
    .prop_map(|s| Carrier::parse(s).unwrap())
}

fn acc_of(c: &Carrier) -> NoethAcc {
    match build_named("from-listable", c).unwrap() {
        Builtin::Acc(w) => w,
        other => panic!("unexpected {other:?}"),
    }
}

/// Lexicographically least pair of equal positions.
fn least_dup(xs: &[u32]) -> Option<(usize, usize)> {
    (0..xs.len()).tuple_combinations().find(|&(i, j)| xs[i] == xs[j])
}

proptest! {
    #[test]
    fn spec_display_round_trips(spec in spec_strategy()) {
        let c = Carrier::parse(&spec).unwrap();
        prop_assert_eq!(c.to_string(), spec.clone());
        let again = Carrier::parse(&c.to_string()).unwrap();
        prop_assert_eq!(again.caps(), c.caps());
    }

    #[test]
    fn enumeration_matches_size(spec in spec_strategy()) {
        let c = Carrier::parse(&spec).unwrap();
        if let Ok(elems) = c.enumerate() {
            prop_assert_eq!(Some(elems.len()), c.caps().size_bound);
            prop_assert!(elems.iter().all_unique());
            for v in &elems {
                prop_assert!(c.contains(v));
                prop_assert_eq!(&v.to_string().parse::<Value>().unwrap(), v);
            }
        } else {
            prop_assert!(!c.caps().has_enum);
        }
    }

    #[test]
    fn without_shrinks_once(spec in spec_strategy(), pick in 0usize..16) {
        let c = Carrier::parse(&spec).unwrap();
        let view = c.opponent_view();
        prop_assume!(!view.is_empty());
        let x = &view[pick % view.len()];
        let once = c.without(x);
        let twice = once.without(x);
        prop_assert_eq!(once.caps().size_bound, c.caps().size_bound.map(|n| n - 1));
        prop_assert_eq!(twice.caps(), once.caps());
        prop_assert!(!once.opponent_view().contains(x));
    }

    #[test]
    fn scan_finds_least_duplicate(xs in prop::collection::vec(0u32..5, 0..10)) {
        let c = Carrier::parse("fin:5").unwrap();
        let acc: Accumulator = xs.iter().copied().map(Value::Nat).collect();
        let found = scan_for_dup(&c, &acc).unwrap();
        prop_assert_eq!(found.map(|e| (e.t_early, e.t_late)), least_dup(&xs));
        if let Some(e) = found {
            prop_assert_eq!(validate_dup(&c, &acc, e), Validity::Valid);
        }
    }

    #[test]
    fn pigeonhole_is_valid_past_the_bound(xs in prop::collection::vec(0u32..4, 5..12)) {
        let c = Carrier::parse("fin:4").unwrap();
        let acc: Accumulator = xs.iter().copied().map(Value::Nat).collect();
        let index_of = |v: &Value| match v {
            Value::Nat(n) => Some(*n as usize),
            _ => None,
        };
        let e = pigeonhole_dup(&acc, index_of, 4).unwrap();
        prop_assert_eq!(validate_dup(&c, &acc, e), Validity::Valid);
    }

    #[test]
    fn transcripts_round_trip(c in small_carrier(), seed in any::<u64>()) {
        let w = acc_of(&c);
        let t = play(&w, Arena::new(&c), &Opponent::Random(seed), DEFAULT_FUEL);
        let back: Transcript = serde_json::from_str(&t.to_json()).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert!(t.verdict.prover_wins());
        let s = strict_from_bound(c.caps().size_bound.unwrap());
        let t = play(&s, Arena::new(&c), &Opponent::Random(seed), DEFAULT_FUEL);
        let back: Transcript = serde_json::from_str(&t.to_json()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn decider_agrees_with_encoding(c in small_carrier(), i in 0usize..64, j in 0usize..64) {
        let elems = c.enumerate().unwrap();
        prop_assume!(!elems.is_empty());
        let (x, y) = (&elems[i % elems.len()], &elems[j % elems.len()]);
        let d = extract_decider(&acc_of(&c), DEFAULT_FUEL);
        prop_assert_eq!(d.decide(x, y).unwrap().is_equal(), x == y);
        prop_assert_eq!(c.eq_calls(), 0);
    }

    #[test]
    fn extension_matches_closed_form(
        pivots in prop::collection::vec(0u32..4, 0..7),
        y in 0u32..4,
        z in 0u32..4,
        which in 0usize..5,
    ) {
        let fin4 = Carrier::parse("fin:4").unwrap();
        let desc = ["eq", "total", "empty", "parity", "leq"][which];
        let base = BaseRelation::from_descriptor(desc, &fin4).unwrap();
        let xs: Vec<Value> = pivots.iter().copied().map(Value::Nat).collect();
        let (y, z) = (Value::Nat(y), Value::Nat(z));
        let closed = base.holds(&y, &z)
            || xs.iter().any(|x| base.holds(x, &y))
            || xs.iter().tuple_combinations().any(|(a, b)| base.holds(a, b));
        let rel = Relation::with_pivots(base, xs);
        prop_assert_eq!(eval_relation(&rel, &y, &z), closed);
    }
}

#[test]
fn exploration_counts() {
    // play counts are |X|^depth for chains that always run to their bound
    let cases = [("bool", 8), ("fin:3", 81), ("unit", 1), ("empty", 1)];
    for (spec, expected) in cases {
        let c = Carrier::parse(spec).unwrap();
        let plays = explore(&acc_of(&c), Arena::new(&c), DEFAULT_FUEL);
        assert_eq!(plays.len(), expected, "{spec}");
    }
    let bool_c = Carrier::parse("bool").unwrap();
    let strict = explore(&strict_from_bound(2), Arena::new(&bool_c), DEFAULT_FUEL);
    assert_eq!(strict.len(), 2);
    assert!(strict
        .iter()
        .all(|t| t.verdict == Verdict::ProverWins(WinReason::OpponentExhausted)));
}

#[test]
fn every_pigeonhole_instance_over_fin3() {
    let c = Carrier::parse("fin:3").unwrap();
    let elems = c.enumerate().unwrap();
    let b = listable_to_bounded(&listable_from_enum(&c).unwrap());
    assert_eq!(b.bound, 4);
    let mut n = 0;
    for seq in std::iter::repeat_n(elems.iter().cloned(), 4).multi_cartesian_product() {
        let acc: Accumulator = seq.into();
        let e = (b.dup_finder)(&acc).unwrap();
        assert_eq!(validate_dup(&c, &acc, e), Validity::Valid);
        n += 1;
    }
    assert_eq!(n, 81);
}

#[test]
fn relation_witness_over_leq() {
    let c = Carrier::parse("fin:3").unwrap();
    let leq = BaseRelation::leq(&c);
    let b = listable_to_bounded(&listable_from_enum(&c).unwrap());
    let r = noeth_acc_r_from_bounded(&b, &leq, &c).unwrap();
    let plays = explore(&r, Arena::with_relation(&c, &leq), DEFAULT_FUEL);
    assert_eq!(plays.len(), 81);
    assert!(plays.iter().all(|t| t.verdict.prover_wins()));
    assert!(noeth_acc_r_from_bounded(&b, &BaseRelation::Empty, &c).is_err());
}

#[test]
fn bool_acc_evidence_table() {
    // (first, second, third) answers to the hand-written witness
    let c = Carrier::parse("bool").unwrap();
    let w = match build_named("bool-acc", &c).unwrap() {
        Builtin::Acc(w) => w,
        other => panic!("unexpected {other:?}"),
    };
    let cases = [
        ("true,true", DupEvidence::new(0, 1)),
        ("false,false", DupEvidence::new(0, 1)),
        ("true,false,true", DupEvidence::new(0, 2)),
        ("true,false,false", DupEvidence::new(1, 2)),
        ("false,true,false", DupEvidence::new(0, 2)),
        ("false,true,true", DupEvidence::new(1, 2)),
    ];
    for (script, expected) in cases {
        let o = Opponent::Scripted(Value::parse_list(script).unwrap());
        let t = play(&w, Arena::new(&c), &o, DEFAULT_FUEL);
        assert_eq!(t.verdict, Verdict::ProverWins(WinReason::EvidenceValidated), "{script}");
        assert_eq!(t.evidence, Some(noeth::games::Evidence::Dup(expected)), "{script}");
    }
}
