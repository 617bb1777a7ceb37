//! The implication matrix between finiteness encodings.
//!
//! Every constructive arrow is checked on a concrete carrier by building
//! source witnesses, converting them, and playing the result against every
//! opponent behaviour. Arrows that need a nonconstructive principle are
//! only reported, with the principle as their label.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::af::{
    af_to_noeth_acc_r, afeq_to_noeth_acc, noeth_acc_r_from_bounded, noeth_acc_r_to_af, noeth_acc_to_afeq, BaseRelation,
};
use crate::carrier::{Capability, Carrier};
use crate::convert::{acc_to_strict, expose_to_acc, expose_to_listable, set_to_strict, strict_to_game, strict_to_set};
use crate::evidence::{validate_dup, validate_mem, Accumulator, Validity};
use crate::games::{explore, Arena, GameNode, Transcript, Verdict, WinReason};
use crate::stream::{acc_to_streamless, strict_to_streamless_s, ColistSource, StreamSource, StreamlessOutcome};
use crate::value::Value;
use crate::witnesses::{
    bounded_to_noeth_acc, build_bool_noeth_acc, expose_from_prop, listable_from_enum, listable_to_bounded,
    listable_to_expose, maybe_prop_bounded, strict_from_bound, NoethAcc, NoethAccS, NoethExpose,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Encoding {
    Listable,
    NoethExpose,
    Bounded,
    NoethAcc,
    NoethAccS,
    NoethSet,
    NoethGame,
    Streamless,
    StreamlessS,
    AFEq,
    AF,
    NoethAccR,
}

impl Encoding {
    pub const ALL: [Encoding; 12] = [
        Encoding::Listable,
        Encoding::NoethExpose,
        Encoding::Bounded,
        Encoding::NoethAcc,
        Encoding::NoethAccS,
        Encoding::NoethSet,
        Encoding::NoethGame,
        Encoding::Streamless,
        Encoding::StreamlessS,
        Encoding::AFEq,
        Encoding::AF,
        Encoding::NoethAccR,
    ];
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Encoding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Encoding::ALL
            .into_iter()
            .find(|e| e.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown encoding `{s}`"))
    }
}

/// A constructive arrow, with any side condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub from: Encoding,
    pub to: Encoding,
    pub condition: Option<&'static str>,
}

const fn arrow(from: Encoding, to: Encoding) -> Arrow {
    Arrow {
        from,
        to,
        condition: None,
    }
}

use Encoding as E;

pub const IMPLEMENTED: [Arrow; 15] = [
    arrow(E::NoethAcc, E::NoethAccS),
    arrow(E::NoethAccS, E::NoethSet),
    arrow(E::NoethSet, E::NoethAccS),
    arrow(E::NoethAccS, E::NoethGame),
    arrow(E::Listable, E::NoethExpose),
    Arrow {
        from: E::NoethExpose,
        to: E::Listable,
        condition: Some("given an inhabitant"),
    },
    arrow(E::NoethExpose, E::NoethAcc),
    arrow(E::Listable, E::Bounded),
    arrow(E::Bounded, E::NoethAcc),
    arrow(E::NoethAcc, E::Streamless),
    arrow(E::NoethAccS, E::StreamlessS),
    arrow(E::AFEq, E::NoethAcc),
    arrow(E::NoethAcc, E::AFEq),
    arrow(E::AF, E::NoethAccR),
    arrow(E::NoethAccR, E::AF),
];

/// Arrows that fail constructively, labelled with what they would imply.
/// `?` marks a direction that is not known either way.
pub const SEPARATED: [(Encoding, Encoding, &str); 10] = [
    (E::NoethExpose, E::Listable, "LEM_prop"),
    (E::Bounded, E::Listable, "LEM_prop"),
    (E::NoethExpose, E::Bounded, "LPO"),
    (E::Bounded, E::NoethExpose, "LEM_prop"),
    (E::NoethAcc, E::Bounded, "LPO"),
    (E::NoethAcc, E::NoethExpose, "LEM_prop"),
    (E::NoethAccS, E::NoethAcc, "DEQ"),
    (E::StreamlessS, E::Streamless, "DEQ"),
    (E::NoethGame, E::NoethAccS, "?"),
    (E::Streamless, E::NoethAcc, "conjectured"),
];

pub fn separation_label(from: Encoding, to: Encoding) -> Option<&'static str> {
    SEPARATED
        .iter()
        .find(|(f, t, _)| *f == from && *t == to)
        .map(|(_, _, label)| *label)
}

pub fn implemented(from: Encoding, to: Encoding) -> Option<Arrow> {
    IMPLEMENTED.iter().copied().find(|a| a.from == from && a.to == to)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixEntry {
    pub from: Encoding,
    pub to: Encoding,
    /// `verified`, `separated:<label>`, `skipped:<capability>` or `failed:<detail>`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reverse: Option<&'static str>,
    pub checks: usize,
}

impl MatrixEntry {
    pub fn failed(&self) -> bool {
        self.status.starts_with("failed")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Matrix {
    pub carrier: String,
    pub entries: Vec<MatrixEntry>,
    pub dishonest_verdicts: usize,
}

impl Matrix {
    pub fn failures(&self) -> impl Iterator<Item = &MatrixEntry> {
        self.entries.iter().filter(|e| e.failed())
    }

    pub fn entry(&self, from: Encoding, to: Encoding) -> Option<&MatrixEntry> {
        self.entries
            .iter()
            .find(|e| e.from == from && e.to == to && !e.status.starts_with("separated"))
    }
}

enum CheckError {
    Skipped(Capability),
    Failed(String),
}

#[derive(Default)]
struct Tally {
    checks: usize,
    dishonest: usize,
}

type CheckResult = Result<Tally, CheckError>;

struct Sources {
    carrier: Carrier,
    fuel: u64,
}

fn need(c: &Carrier, cap: Capability) -> Result<(), CheckError> {
    c.require(cap).map_err(|_| CheckError::Skipped(cap))
}

fn fail(detail: impl Into<String>) -> CheckError {
    CheckError::Failed(detail.into())
}

impl Sources {
    fn acc(&self) -> Result<Vec<(&'static str, NoethAcc)>, CheckError> {
        let c = &self.carrier;
        need(c, Capability::Enumeration)?;
        let listing = listable_from_enum(c).map_err(|e| fail(e.to_string()))?;
        let mut out = vec![(
            "from-listable",
            bounded_to_noeth_acc(&listable_to_bounded(&listing)).map_err(|e| fail(e.to_string()))?,
        )];
        out.push(("from-expose", expose_to_acc(&listable_to_expose(&listing))));
        if c.spec() == "bool" && c.exclusions().is_empty() {
            out.push(("bool-acc", build_bool_noeth_acc()));
        }
        if let Some(w) = self.prop_expose() {
            out.push(("expose-prop", expose_to_acc(&w)));
        }
        Ok(out)
    }

    fn prop_expose(&self) -> Option<NoethExpose> {
        let c = &self.carrier;
        if c.prop_flag_consistent() {
            expose_from_prop(c).ok()
        } else {
            None
        }
    }

    /// `X` when the carrier is `sum:unit,X` for an honest proposition `X`.
    fn prop_summand(&self) -> Option<Carrier> {
        let inner = Carrier::parse(self.carrier.spec().strip_prefix("sum:unit,")?).ok()?;
        (inner.caps().is_prop && inner.prop_flag_consistent() && self.carrier.exclusions().is_empty()).then_some(inner)
    }

    fn strict(&self) -> Vec<(&'static str, NoethAccS)> {
        let n = self.carrier.caps().size_bound.unwrap_or(0);
        let mut out = vec![("strict-bound", strict_from_bound(n))];
        if let Ok(accs) = self.acc() {
            out.extend(accs.into_iter().map(|(_, w)| ("acc-to-strict", acc_to_strict(&w))));
        }
        out
    }

    fn expose(&self) -> Result<Vec<NoethExpose>, CheckError> {
        need(&self.carrier, Capability::Enumeration)?;
        let listing = listable_from_enum(&self.carrier).map_err(|e| fail(e.to_string()))?;
        let mut out = vec![listable_to_expose(&listing)];
        out.extend(self.prop_expose());
        Ok(out)
    }
}

fn tally_plays(plays: &[Transcript], what: &str, tally: &mut Tally) -> Result<(), CheckError> {
    for t in plays {
        tally.checks += 1;
        if t.verdict == Verdict::WitnessDishonest {
            tally.dishonest += 1;
        }
        if !t.verdict.prover_wins() {
            return Err(fail(format!("{what}: {} after {}", t.verdict, t.to_json())));
        }
    }
    Ok(())
}

fn play_all<N: GameNode>(
    w: &N,
    arena: Arena<'_>,
    fuel: u64,
    what: &str,
    tally: &mut Tally,
) -> Result<Vec<Transcript>, CheckError> {
    let plays = explore(w, arena, fuel);
    tally_plays(&plays, what, tally)?;
    Ok(plays)
}

/// Every sequence of length `len` over `elems`.
fn sequences(elems: &[Value], len: usize) -> Vec<Vec<Value>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                elems.iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v.clone());
                    next
                })
            })
            .collect();
    }
    out
}

/// One element per equality class; without equality, every stored element.
fn representatives(c: &Carrier) -> Vec<Value> {
    let mut out: Vec<Value> = Vec::new();
    for v in c.opponent_view() {
        let seen = c.caps().has_eq && out.iter().any(|u| c.value_eq(u, &v).is_ok_and(|e| e.is_equal()));
        if !seen {
            out.push(v);
        }
    }
    out
}

/// Every duplicate-free sequence over `elems`, of every length.
fn injective_sequences(elems: &[Value]) -> Vec<Vec<Value>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::<Value>::new()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for prefix in &frontier {
            for v in elems {
                if !prefix.contains(v) {
                    let mut longer = prefix.clone();
                    longer.push(v.clone());
                    next.push(longer);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

const RELATIONS: [&str; 3] = ["eq", "total", "parity"];

fn check_arrow(arrow: Arrow, src: &Sources) -> CheckResult {
    let c = &src.carrier;
    let fuel = src.fuel;
    let arena = Arena::new(c);
    let mut tally = Tally::default();
    let exhausted = Verdict::ProverWins(WinReason::OpponentExhausted);
    match (arrow.from, arrow.to) {
        (E::NoethAcc, E::NoethAccS) => {
            for (name, w) in src.acc()? {
                let plays = play_all(&acc_to_strict(&w), arena, fuel, name, &mut tally)?;
                if plays.iter().any(|t| t.verdict != exhausted) {
                    return Err(fail(format!("{name}: strict play ended without exhaustion")));
                }
            }
        }
        (E::NoethAccS, E::NoethSet) => {
            for (name, w) in src.strict() {
                play_all(&strict_to_set(&w), arena, fuel, name, &mut tally)?;
            }
        }
        (E::NoethSet, E::NoethAccS) => {
            for (name, w) in src.strict() {
                let set = strict_to_set(&w);
                let back = set_to_strict(&set);
                let direct = explore(&w, arena, fuel);
                let plays = play_all(&back, arena, fuel, name, &mut tally)?;
                if plays != direct {
                    return Err(fail(format!("{name}: round trip through NoethSet changed transcripts")));
                }
            }
        }
        (E::NoethAccS, E::NoethGame) => {
            for (name, w) in src.strict() {
                let direct = explore(&w, arena, fuel);
                let plays = play_all(&strict_to_game(&w), arena, fuel, name, &mut tally)?;
                if plays != direct {
                    return Err(fail(format!("{name}: game injection changed transcripts")));
                }
            }
        }
        (E::Listable, E::NoethExpose) => {
            need(c, Capability::Enumeration)?;
            let listing = listable_from_enum(c).map_err(|e| fail(e.to_string()))?;
            play_all(&listable_to_expose(&listing), arena, fuel, "listable", &mut tally)?;
        }
        (E::NoethExpose, E::Listable) => {
            let elems = c
                .enumerate()
                .map_err(|_| CheckError::Skipped(Capability::Enumeration))?;
            for w in src.expose()? {
                for x0 in &elems {
                    let listing = expose_to_listable(&w, x0, fuel).map_err(|e| fail(e.to_string()))?;
                    let acc: Accumulator = listing.items.iter().cloned().collect();
                    for v in &elems {
                        tally.checks += 1;
                        let ok = (listing.locate)(v)
                            .map(|m| validate_mem(&acc, v, m) == Validity::Valid)
                            .unwrap_or(false);
                        if !ok {
                            return Err(fail(format!("listing from {x0} does not locate {v}")));
                        }
                    }
                }
            }
        }
        (E::NoethExpose, E::NoethAcc) => {
            for w in src.expose()? {
                play_all(&expose_to_acc(&w), arena, fuel, "expose", &mut tally)?;
            }
        }
        (E::Listable, E::Bounded) => {
            let elems = c
                .enumerate()
                .map_err(|_| CheckError::Skipped(Capability::Enumeration))?;
            let listing = listable_from_enum(c).map_err(|e| fail(e.to_string()))?;
            let b = listable_to_bounded(&listing);
            for seq in sequences(&elems, b.bound) {
                tally.checks += 1;
                let acc: Accumulator = seq.into();
                let e = (b.dup_finder)(&acc).map_err(|e| fail(e.to_string()))?;
                if validate_dup(c, &acc, e) != Validity::Valid {
                    return Err(fail(format!("bound {} finder is wrong on {:?}", b.bound, acc.items())));
                }
            }
        }
        (E::Bounded, E::NoethAcc) => {
            need(c, Capability::Enumeration)?;
            let listing = listable_from_enum(c).map_err(|e| fail(e.to_string()))?;
            let w = bounded_to_noeth_acc(&listable_to_bounded(&listing)).map_err(|e| fail(e.to_string()))?;
            let plays = play_all(&w, arena, fuel, "bounded", &mut tally)?;
            let depth = c.caps().size_bound.unwrap_or(0) + 1;
            if c.caps().size_bound != Some(0) && plays.iter().any(|t| t.asks() != depth) {
                return Err(fail("bounded chain stopped off its bound"));
            }
            if let Some(inner) = src.prop_summand() {
                let b = maybe_prop_bounded(&inner).map_err(|e| fail(e.to_string()))?;
                let w = bounded_to_noeth_acc(&b).map_err(|e| fail(e.to_string()))?;
                play_all(&w, arena, fuel, "maybe-prop-bounded", &mut tally)?;
            }
        }
        (E::NoethAcc, E::Streamless) => {
            let sources = src.acc()?;
            let elems = c
                .enumerate()
                .map_err(|_| CheckError::Skipped(Capability::Enumeration))?;
            let len = c.caps().size_bound.unwrap_or(0) + 1;
            for (name, w) in sources {
                for seq in sequences(&elems, len) {
                    tally.checks += 1;
                    let period = seq.clone();
                    let s = StreamSource::cycle(period);
                    let e = acc_to_streamless(&w, &s, fuel).map_err(|e| fail(format!("{name}: {e}")))?;
                    let acc: Accumulator = s.prefix(e.t_late + 1).into();
                    if validate_dup(c, &acc, e) != Validity::Valid {
                        return Err(fail(format!("{name}: stream evidence {e:?} invalid")));
                    }
                }
            }
        }
        (E::NoethAccS, E::StreamlessS) => {
            let size = c.caps().size_bound.unwrap_or(0);
            for (name, w) in src.strict() {
                for seq in injective_sequences(&representatives(c)) {
                    tally.checks += 1;
                    let out = strict_to_streamless_s(&w, &ColistSource::finite(seq.clone()), c, fuel)
                        .map_err(|e| fail(format!("{name}: {e}")))?;
                    match out {
                        StreamlessOutcome::FiniteLength { n, .. } if n <= size && n == seq.len() => {}
                        other => return Err(fail(format!("{name}: {other:?} on {seq:?}"))),
                    }
                }
            }
        }
        (E::AFEq, E::NoethAcc) => {
            for (name, w) in src.acc()? {
                let original = explore(&w, arena, fuel);
                let deepest = original.iter().map(Transcript::asks).max().unwrap_or(0);
                let back = afeq_to_noeth_acc(&noeth_acc_to_afeq(&w));
                let plays = play_all(&back, arena, fuel, name, &mut tally)?;
                if plays.iter().any(|t| t.asks() > deepest + 2) {
                    return Err(fail(format!("{name}: round trip deeper than original + 2")));
                }
            }
        }
        (E::NoethAcc, E::AFEq) => {
            let eq = BaseRelation::Equality;
            for (name, w) in src.acc()? {
                play_all(
                    &noeth_acc_to_afeq(&w),
                    Arena::with_relation(c, &eq),
                    fuel,
                    name,
                    &mut tally,
                )?;
            }
        }
        (E::AF, E::NoethAccR) | (E::NoethAccR, E::AF) => {
            need(c, Capability::Enumeration)?;
            let listing = listable_from_enum(c).map_err(|e| fail(e.to_string()))?;
            let bounded = listable_to_bounded(&listing);
            for desc in RELATIONS {
                let rel = BaseRelation::from_descriptor(desc, c).expect("known relation");
                let arena = Arena::with_relation(c, &rel);
                let r = noeth_acc_r_from_bounded(&bounded, &rel, c).map_err(|e| fail(e.to_string()))?;
                let af = noeth_acc_r_to_af(&r);
                play_all(&af, arena, fuel, desc, &mut tally)?;
                if arrow.from == E::AF {
                    play_all(&af_to_noeth_acc_r(&af, &rel), arena, fuel, desc, &mut tally)?;
                }
            }
        }
        (from, to) => return Err(fail(format!("no check for {from}→{to}"))),
    }
    let strict_side = arrow.from == E::NoethAccS || arrow.to == E::NoethAccS;
    if strict_side && !c.caps().has_eq && c.eq_calls() != 0 {
        return Err(fail("equality consulted on a carrier without it"));
    }
    Ok(tally)
}

/// Verifies one implemented arrow on `c`.
pub fn check_one(arrow: Arrow, c: &Carrier, fuel: u64) -> MatrixEntry {
    check_cell(arrow, c, fuel).0
}

fn check_cell(arrow: Arrow, c: &Carrier, fuel: u64) -> (MatrixEntry, usize) {
    // each cell gets its own counter
    let src = Sources {
        carrier: c.detached(),
        fuel,
    };
    let (status, checks, dishonest) = match check_arrow(arrow, &src) {
        Ok(t) => ("verified".to_string(), t.checks, t.dishonest),
        Err(CheckError::Skipped(cap)) => (format!("skipped:{}", skip_label(cap)), 0, 0),
        Err(CheckError::Failed(detail)) => (format!("failed:{detail}"), 0, 0),
    };
    let entry = MatrixEntry {
        from: arrow.from,
        to: arrow.to,
        status,
        condition: arrow.condition,
        reverse: separation_label(arrow.to, arrow.from),
        checks,
    };
    (entry, dishonest)
}

/// Verifies every implemented arrow on `c` and lists every separation.
pub fn check_matrix(c: &Carrier, fuel: u64) -> Matrix {
    let results: Vec<(MatrixEntry, usize)> = IMPLEMENTED.par_iter().map(|&a| check_cell(a, c, fuel)).collect();
    let dishonest_verdicts = results.iter().map(|(_, d)| d).sum();
    let mut entries: Vec<MatrixEntry> = results.into_iter().map(|(e, _)| e).collect();
    entries.extend(SEPARATED.iter().map(|&(from, to, label)| MatrixEntry {
        from,
        to,
        status: format!("separated:{label}"),
        condition: None,
        reverse: None,
        checks: 0,
    }));
    Matrix {
        carrier: c.to_string(),
        entries,
        dishonest_verdicts,
    }
}

fn skip_label(_cap: Capability) -> &'static str {
    "CapabilityMissing"
}
