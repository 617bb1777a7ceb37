//! The prover-opponent game engine.
//!
//! A witness tree plays the prover. At `Ask` nodes the opponent supplies an
//! element; `Tell` nodes let the prover supply one; leaves carry a claim
//! that the referee checks against the accumulated moves. Each encoding
//! fixes a [`Discipline`] for opponent moves:
//!
//! * `Free`: any element, repeats allowed;
//! * `Fresh`: only elements not yet in the accumulator;
//! * `Shrinking`: each answer is removed from the carrier.
//!
//! Every run produces a [`Transcript`] with exactly one [`Verdict`]. Runs
//! are deterministic in (witness, carrier, opponent, fuel).

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::af::{audit_totality, Af, BaseRelation, NoethAccR, Relation, TotalityClaim};
use crate::carrier::Carrier;
use crate::evidence::{validate_dup, validate_dup_r, validate_mem, Accumulator, DupEvidence, RelEvidence, Validity};
use crate::value::Value;
use crate::witnesses::{Branch, Locate, NoethAcc, NoethAccS, NoethExpose, NoethGame, NoethSet, WitnessError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Discipline {
    Free,
    Fresh,
    Shrinking,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Opponent {
    /// Plays the listed moves in order; running out ends the play as
    /// [`Verdict::IncompletePlay`].
    Scripted(Vec<Value>),
    /// Walks the enumeration in order (cyclically when repeats are allowed).
    Exhaustive,
    /// Uniform choice among legal moves from a seeded generator.
    Random(u64),
    /// Avoids repeats as long as possible; in fresh games, walks the
    /// enumeration backwards.
    Adversarial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WinReason {
    EvidenceValidated,
    OpponentExhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    ProverWins(WinReason),
    WitnessDishonest,
    IllegalOpponentMove,
    FuelExhausted,
    IncompletePlay,
}

impl Verdict {
    pub fn prover_wins(self) -> bool {
        matches!(self, Verdict::ProverWins(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::ProverWins(WinReason::EvidenceValidated) => f.write_str("ProverWins(EvidenceValidated)"),
            Verdict::ProverWins(WinReason::OpponentExhausted) => f.write_str("ProverWins(OpponentExhausted)"),
            Verdict::WitnessDishonest => f.write_str("WitnessDishonest"),
            Verdict::IllegalOpponentMove => f.write_str("IllegalOpponentMove"),
            Verdict::FuelExhausted => f.write_str("FuelExhausted"),
            Verdict::IncompletePlay => f.write_str("IncompletePlay"),
        }
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "ProverWins(EvidenceValidated)" => Verdict::ProverWins(WinReason::EvidenceValidated),
            "ProverWins(OpponentExhausted)" => Verdict::ProverWins(WinReason::OpponentExhausted),
            "WitnessDishonest" => Verdict::WitnessDishonest,
            "IllegalOpponentMove" => Verdict::IllegalOpponentMove,
            "FuelExhausted" => Verdict::FuelExhausted,
            "IncompletePlay" => Verdict::IncompletePlay,
            other => return Err(format!("unknown verdict `{other}`")),
        })
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Verdict {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Move {
    Ask(Value),
    Tell(Value),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Location {
    pub value: Value,
    pub index: usize,
}

/// The claim found at the leaf of a play.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Evidence {
    Dup(DupEvidence),
    Rel(RelEvidence),
    /// Completeness audit: where each enumerated element was located.
    Complete {
        locations: Vec<Location>,
    },
    Total(TotalityClaim),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub moves: Vec<Move>,
    pub evidence: Option<Evidence>,
    pub verdict: Verdict,
    pub fuel_used: u64,
    pub freshness_verified: bool,
    pub eq_calls: u64,
}

impl Transcript {
    /// Number of opponent answers.
    pub fn asks(&self) -> usize {
        self.moves.iter().filter(|m| matches!(m, Move::Ask(_))).count()
    }

    pub fn accumulator(&self) -> Accumulator {
        self.moves
            .iter()
            .map(|m| match m {
                Move::Ask(v) | Move::Tell(v) => v.clone(),
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transcripts always serialise")
    }
}

/// Leaf claims, as seen by the referee.
pub enum Claim {
    Dup(DupEvidence),
    Rel(RelEvidence),
    Complete(Locate),
    Total(TotalityClaim),
}

pub enum View<N> {
    Stop(Claim),
    Absurd,
    Tell(Value, N),
    Ask(Branch<N>),
}

/// A witness tree the engine can run.
pub trait GameNode: Clone {
    const DISCIPLINE: Discipline;
    fn view(&self) -> View<Self>;
}

impl GameNode for NoethAcc {
    const DISCIPLINE: Discipline = Discipline::Free;
    fn view(&self) -> View<Self> {
        match self {
            NoethAcc::Stop(e) => View::Stop(Claim::Dup(*e)),
            NoethAcc::Ask(b) => View::Ask(b.clone()),
        }
    }
}

impl GameNode for NoethAccS {
    const DISCIPLINE: Discipline = Discipline::Fresh;
    fn view(&self) -> View<Self> {
        match self {
            NoethAccS::Absurd => View::Absurd,
            NoethAccS::Ask(b) => View::Ask(b.clone()),
        }
    }
}

impl GameNode for NoethSet {
    const DISCIPLINE: Discipline = Discipline::Shrinking;
    fn view(&self) -> View<Self> {
        match self {
            NoethSet::Absurd => View::Absurd,
            NoethSet::Ask(b) => View::Ask(b.clone()),
        }
    }
}

impl GameNode for NoethGame {
    const DISCIPLINE: Discipline = Discipline::Fresh;
    fn view(&self) -> View<Self> {
        match self {
            NoethGame::Absurd => View::Absurd,
            NoethGame::Tell(v, next) => View::Tell(v.clone(), (**next).clone()),
            NoethGame::Ask(b) => View::Ask(b.clone()),
        }
    }
}

impl GameNode for NoethExpose {
    const DISCIPLINE: Discipline = Discipline::Free;
    fn view(&self) -> View<Self> {
        match self {
            NoethExpose::Stop(locate) => View::Stop(Claim::Complete(locate.clone())),
            NoethExpose::Tell(v, next) => View::Tell(v.clone(), (**next).clone()),
            NoethExpose::Ask(b) => View::Ask(b.clone()),
        }
    }
}

impl GameNode for NoethAccR {
    const DISCIPLINE: Discipline = Discipline::Free;
    fn view(&self) -> View<Self> {
        match self {
            NoethAccR::Stop(e) => View::Stop(Claim::Rel(*e)),
            NoethAccR::Ask(b) => View::Ask(b.clone()),
        }
    }
}

impl GameNode for Af {
    const DISCIPLINE: Discipline = Discipline::Free;
    fn view(&self) -> View<Self> {
        match self {
            Af::Afzt(claim) => View::Stop(Claim::Total(*claim)),
            Af::Afsup(b) => View::Ask(b.clone()),
        }
    }
}

/// Where a play happens: the carrier, and for relation-valued encodings the
/// base relation (equality when absent).
#[derive(Clone, Copy)]
pub struct Arena<'a> {
    pub carrier: &'a Carrier,
    pub relation: Option<&'a BaseRelation>,
}

impl<'a> Arena<'a> {
    pub fn new(carrier: &'a Carrier) -> Self {
        Arena {
            carrier,
            relation: None,
        }
    }

    pub fn with_relation(carrier: &'a Carrier, relation: &'a BaseRelation) -> Self {
        Arena {
            carrier,
            relation: Some(relation),
        }
    }
}

enum Answer {
    Move(Value),
    Exhausted,
    Illegal(Value),
    Incomplete,
}

struct Runner<'a> {
    origin: Carrier,
    current: Carrier,
    relation: BaseRelation,
    discipline: Discipline,
    opponent: &'a Opponent,
    rng: ChaCha8Rng,
    acc: Accumulator,
    moves: Vec<Move>,
    answers: usize,
    fuel: u64,
    fuel_used: u64,
    verified: bool,
}

/// Result of one run; `pending` lists the legal opponent moves at the point
/// a script ran out, for exploration.
pub struct Outcome {
    pub transcript: Transcript,
    pub pending: Option<Vec<Value>>,
}

impl<'a> Runner<'a> {
    fn new(arena: Arena<'_>, discipline: Discipline, opponent: &'a Opponent, fuel: u64) -> Self {
        let origin = arena.carrier.detached();
        let seed = match opponent {
            Opponent::Random(seed) => *seed,
            _ => 0,
        };
        Runner {
            current: origin.clone(),
            origin,
            relation: arena.relation.cloned().unwrap_or(BaseRelation::Equality),
            discipline,
            opponent,
            rng: ChaCha8Rng::seed_from_u64(seed),
            acc: Accumulator::new(),
            moves: Vec::new(),
            answers: 0,
            fuel,
            fuel_used: 0,
            verified: true,
        }
    }

    fn finish(self, verdict: Verdict, evidence: Option<Evidence>, pending: Option<Vec<Value>>) -> Outcome {
        Outcome {
            transcript: Transcript {
                moves: self.moves,
                evidence,
                verdict,
                fuel_used: self.fuel_used,
                freshness_verified: self.verified,
                eq_calls: self.origin.eq_calls(),
            },
            pending,
        }
    }

    fn is_fresh(&mut self, v: &Value) -> Result<bool, ()> {
        for seen in self.acc.items() {
            match self.origin.value_eq(v, seen) {
                Ok(eq) if eq.is_equal() => return Ok(false),
                Ok(_) => {}
                Err(_) => return Err(()),
            }
        }
        Ok(true)
    }

    /// Legal moves the opponent could make now, computed from the
    /// opponent-side listing.
    fn candidates(&mut self) -> Vec<Value> {
        match self.discipline {
            Discipline::Free => self.origin.opponent_view(),
            Discipline::Shrinking => self.current.opponent_view(),
            Discipline::Fresh => {
                let all = self.origin.opponent_view();
                if self.origin.caps().has_eq {
                    all.into_iter().filter(|v| self.is_fresh(v).unwrap_or(false)).collect()
                } else {
                    let seen = self.acc.items().to_vec();
                    all.into_iter().filter(|v| !seen.contains(v)).collect()
                }
            }
        }
    }

    fn exhausted(&mut self) -> bool {
        match self.discipline {
            Discipline::Free => self.origin.is_exhausted(),
            Discipline::Shrinking => self.current.is_exhausted(),
            Discipline::Fresh => {
                let caps = self.origin.caps();
                if caps.has_enum {
                    self.candidates().is_empty()
                } else {
                    caps.size_bound.is_some_and(|n| self.acc.len() >= n)
                }
            }
        }
    }

    fn choose(&mut self) -> Option<Value> {
        if let Opponent::Scripted(script) = self.opponent {
            return script.get(self.answers).cloned();
        }
        if !self.origin.caps().has_enum {
            return None;
        }
        let cands = self.candidates();
        let fresh = self.discipline != Discipline::Free;
        match self.opponent {
            Opponent::Scripted(_) => unreachable!(),
            Opponent::Exhaustive if fresh => cands.first().cloned(),
            Opponent::Exhaustive => cands.get(self.answers % cands.len().max(1)).cloned(),
            Opponent::Adversarial if fresh => cands.last().cloned(),
            Opponent::Adversarial => {
                let last_seen = |v: &Value| self.acc.items().iter().rposition(|x| x == v);
                cands.iter().min_by_key(|v| last_seen(v).map_or(0, |t| t + 1)).cloned()
            }
            Opponent::Random(_) => cands.choose(&mut self.rng).cloned(),
        }
    }

    fn answer(&mut self) -> Answer {
        if self.exhausted() {
            return Answer::Exhausted;
        }
        let Some(v) = self.choose() else {
            return Answer::Incomplete;
        };
        let member = match self.discipline {
            Discipline::Shrinking => self.current.contains(&v),
            _ => self.origin.contains(&v),
        };
        if !member {
            return Answer::Illegal(v);
        }
        if self.discipline != Discipline::Free && !self.origin.caps().has_eq {
            self.verified = false;
        }
        if self.discipline == Discipline::Fresh && self.origin.caps().has_eq && !self.is_fresh(&v).unwrap_or(true) {
            return Answer::Illegal(v);
        }
        Answer::Move(v)
    }

    fn judge(&mut self, claim: Claim) -> (Verdict, Option<Evidence>) {
        let win = Verdict::ProverWins(WinReason::EvidenceValidated);
        let (validity, evidence) = match claim {
            Claim::Dup(e) => (validate_dup(&self.origin, &self.acc, e), Evidence::Dup(e)),
            Claim::Rel(e) => {
                let rel = Relation::new(self.relation.clone());
                let validity = validate_dup_r(&rel, &self.acc, e).unwrap_or(Validity::Invalid);
                (validity, Evidence::Rel(e))
            }
            Claim::Total(claim) => {
                let rel = Relation::with_pivots(self.relation.clone(), self.acc.items().to_vec());
                (audit_totality(&rel, claim, &self.origin), Evidence::Total(claim))
            }
            Claim::Complete(locate) => self.audit(&locate),
        };
        match validity {
            Validity::Valid => (win, Some(evidence)),
            Validity::Unverifiable => {
                self.verified = false;
                (win, Some(evidence))
            }
            Validity::Invalid => (Verdict::WitnessDishonest, Some(evidence)),
        }
    }

    fn audit(&mut self, locate: &Locate) -> (Validity, Evidence) {
        let Ok(all) = self.origin.enumerate() else {
            return (Validity::Unverifiable, Evidence::Complete { locations: Vec::new() });
        };
        let mut locations = Vec::with_capacity(all.len());
        let mut validity = Validity::Valid;
        for v in all {
            match locate(&v) {
                Ok(m) => {
                    if validate_mem(&self.acc, &v, m) != Validity::Valid {
                        validity = Validity::Invalid;
                    }
                    locations.push(Location {
                        value: v,
                        index: m.index,
                    });
                }
                Err(_) => validity = Validity::Invalid,
            }
        }
        (validity, Evidence::Complete { locations })
    }

    fn run<N: GameNode>(mut self, root: &N) -> Outcome {
        let mut node = root.clone();
        loop {
            if self.fuel_used >= self.fuel {
                return self.finish(Verdict::FuelExhausted, None, None);
            }
            self.fuel_used += 1;
            match node.view() {
                View::Stop(claim) => {
                    let (verdict, evidence) = self.judge(claim);
                    return self.finish(verdict, evidence, None);
                }
                View::Absurd => return self.finish(Verdict::WitnessDishonest, None, None),
                View::Tell(v, next) => {
                    let ok = self.origin.contains(&v);
                    self.moves.push(Move::Tell(v.clone()));
                    if !ok {
                        return self.finish(Verdict::WitnessDishonest, None, None);
                    }
                    self.acc.push(v);
                    node = next;
                }
                View::Ask(branch) => match self.answer() {
                    Answer::Exhausted => {
                        let verdict = Verdict::ProverWins(WinReason::OpponentExhausted);
                        return self.finish(verdict, None, None);
                    }
                    Answer::Incomplete => {
                        let pending = self.candidates();
                        return self.finish(Verdict::IncompletePlay, None, Some(pending));
                    }
                    Answer::Illegal(v) => {
                        self.moves.push(Move::Ask(v));
                        return self.finish(Verdict::IllegalOpponentMove, None, None);
                    }
                    Answer::Move(v) => {
                        self.moves.push(Move::Ask(v.clone()));
                        self.answers += 1;
                        if self.discipline == Discipline::Shrinking {
                            self.current = self.current.without(&v);
                        }
                        let next = branch.apply(&v);
                        self.acc.push(v);
                        node = match next {
                            Ok(n) => n,
                            Err(WitnessError::FuelExhausted(_)) => {
                                return self.finish(Verdict::FuelExhausted, None, None)
                            }
                            Err(_) => return self.finish(Verdict::WitnessDishonest, None, None),
                        };
                    }
                },
            }
        }
    }
}

/// Runs one play and keeps the exploration hint.
pub fn run<N: GameNode>(root: &N, arena: Arena<'_>, opponent: &Opponent, fuel: u64) -> Outcome {
    Runner::new(arena, N::DISCIPLINE, opponent, fuel).run(root)
}

pub fn play<N: GameNode>(root: &N, arena: Arena<'_>, opponent: &Opponent, fuel: u64) -> Transcript {
    run(root, arena, opponent, fuel).transcript
}

/// Plays `root` against every opponent behaviour, depth first in
/// enumeration order. Over carriers without equality the opponent's
/// fresh answers are tracked by encoding, so this yields every fresh
/// ordering.
pub fn explore<N: GameNode>(root: &N, arena: Arena<'_>, fuel: u64) -> Vec<Transcript> {
    let mut out = Vec::new();
    let mut stack = vec![Vec::new()];
    while let Some(script) = stack.pop() {
        let opponent = Opponent::Scripted(script);
        let outcome = run(root, arena, &opponent, fuel);
        match outcome.pending {
            Some(cands) if !cands.is_empty() => {
                let Opponent::Scripted(script) = opponent else {
                    unreachable!()
                };
                for v in cands.into_iter().rev() {
                    let mut next = script.clone();
                    next.push(v);
                    stack.push(next);
                }
            }
            _ => out.push(outcome.transcript),
        }
    }
    out
}

pub fn play_noeth_acc(w: &NoethAcc, c: &Carrier, o: &Opponent, fuel: u64) -> Transcript {
    play(w, Arena::new(c), o, fuel)
}

pub fn play_strict(w: &NoethAccS, c: &Carrier, o: &Opponent, fuel: u64) -> Transcript {
    play(w, Arena::new(c), o, fuel)
}

pub fn play_set(w: &NoethSet, c: &Carrier, o: &Opponent, fuel: u64) -> Transcript {
    play(w, Arena::new(c), o, fuel)
}

pub fn play_game(w: &NoethGame, c: &Carrier, o: &Opponent, fuel: u64) -> Transcript {
    play(w, Arena::new(c), o, fuel)
}

pub fn play_expose(w: &NoethExpose, c: &Carrier, o: &Opponent, fuel: u64) -> Transcript {
    play(w, Arena::new(c), o, fuel)
}

pub fn play_noeth_acc_r(w: &NoethAccR, c: &Carrier, rel: &BaseRelation, o: &Opponent, fuel: u64) -> Transcript {
    play(w, Arena::with_relation(c, rel), o, fuel)
}

pub fn play_af(w: &Af, c: &Carrier, rel: &BaseRelation, o: &Opponent, fuel: u64) -> Transcript {
    play(w, Arena::with_relation(c, rel), o, fuel)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::evidence::MemEvidence;
    use crate::witnesses::{
        build_bool_noeth_acc, expose_from_prop, listable_from_enum, listable_to_expose, strict_from_bound, DEFAULT_FUEL,
    };

    fn carrier(spec: &str) -> Carrier {
        Carrier::parse(spec).unwrap()
    }

    fn script(text: &str) -> Opponent {
        Opponent::Scripted(Value::parse_list(text).unwrap())
    }

    const WIN: Verdict = Verdict::ProverWins(WinReason::EvidenceValidated);
    const EXHAUSTED: Verdict = Verdict::ProverWins(WinReason::OpponentExhausted);

    #[test]
    fn bool_acc_scripted_repeat() {
        let t = play_noeth_acc(
            &build_bool_noeth_acc(),
            &carrier("bool"),
            &script("true,true"),
            DEFAULT_FUEL,
        );
        assert_eq!(t.verdict, WIN);
        assert_eq!(t.evidence, Some(Evidence::Dup(DupEvidence::new(0, 1))));
        assert!(t.freshness_verified);
        assert_eq!(t.eq_calls, 1);
    }

    #[test]
    fn any_acc_witness_over_empty_is_exhausted_immediately() {
        let t = play_noeth_acc(
            &build_bool_noeth_acc(),
            &carrier("empty"),
            &Opponent::Exhaustive,
            DEFAULT_FUEL,
        );
        assert_eq!(t.verdict, EXHAUSTED);
        assert!(t.moves.is_empty());
    }

    #[test]
    fn bool_acc_explores_to_depth_three() {
        let plays = explore(&build_bool_noeth_acc(), Arena::new(&carrier("bool")), DEFAULT_FUEL);
        assert_eq!(plays.len(), 6);
        assert!(plays.iter().all(|t| t.verdict == WIN && t.asks() <= 3));
    }

    #[test]
    fn script_running_out_is_incomplete() {
        let t = play_noeth_acc(&build_bool_noeth_acc(), &carrier("bool"), &script("true"), DEFAULT_FUEL);
        assert_eq!(t.verdict, Verdict::IncompletePlay);
    }

    #[test]
    fn foreign_move_is_illegal() {
        let t = play_noeth_acc(&build_bool_noeth_acc(), &carrier("bool"), &script("3"), DEFAULT_FUEL);
        assert_eq!(t.verdict, Verdict::IllegalOpponentMove);
    }

    #[test]
    fn strict_examples() {
        let bool_c = carrier("bool");
        let t = play_strict(&strict_from_bound(2), &bool_c, &Opponent::Adversarial, DEFAULT_FUEL);
        assert_eq!((t.verdict, t.asks()), (EXHAUSTED, 2));
        let t = play_strict(&strict_from_bound(1), &bool_c, &Opponent::Adversarial, DEFAULT_FUEL);
        assert_eq!(t.verdict, Verdict::WitnessDishonest);
        let t = play_strict(&strict_from_bound(2), &bool_c, &script("true,true"), DEFAULT_FUEL);
        assert_eq!(t.verdict, Verdict::IllegalOpponentMove);
        let t = play_strict(
            &strict_from_bound(0),
            &carrier("empty"),
            &Opponent::Exhaustive,
            DEFAULT_FUEL,
        );
        assert_eq!((t.verdict, t.asks()), (EXHAUSTED, 0));
    }

    #[test]
    fn strict_over_opaque_is_trusted_and_eq_free() {
        let o = carrier("opaque:2");
        let t = play_strict(&strict_from_bound(2), &o, &script("1,0"), DEFAULT_FUEL);
        assert_eq!(t.verdict, EXHAUSTED);
        assert_eq!(t.eq_calls, 0);
        assert!(!t.freshness_verified);
        // Exhaustive needs an enumerator
        let t = play_strict(&strict_from_bound(2), &o, &Opponent::Exhaustive, DEFAULT_FUEL);
        assert_eq!(t.verdict, Verdict::IncompletePlay);
    }

    #[test]
    fn set_play_shrinks_and_refuses_excluded() {
        let w = crate::convert::strict_to_set(&strict_from_bound(2));
        let t = play_set(&w, &carrier("bool"), &Opponent::Exhaustive, DEFAULT_FUEL);
        assert_eq!((t.verdict, t.asks()), (EXHAUSTED, 2));
        let t = play_set(&w, &carrier("bool"), &script("false,false"), DEFAULT_FUEL);
        assert_eq!(t.verdict, Verdict::IllegalOpponentMove);
    }

    #[test]
    fn told_value_removes_a_fresh_option() {
        let w = NoethGame::Tell(
            Value::Bool(true),
            Arc::new(crate::convert::strict_to_game(&strict_from_bound(2))),
        );
        let t = play_game(&w, &carrier("bool"), &Opponent::Adversarial, DEFAULT_FUEL);
        assert_eq!(t.verdict, EXHAUSTED);
        assert_eq!(t.asks(), 1);
        assert_eq!(t.moves[0], Move::Tell(Value::Bool(true)));
    }

    #[test]
    fn expose_examples() {
        let unit = carrier("unit");
        let t = play_expose(&expose_from_prop(&unit).unwrap(), &unit, &script("()"), DEFAULT_FUEL);
        assert_eq!(t.verdict, WIN);
        let bool_c = carrier("bool");
        let w = listable_to_expose(&listable_from_enum(&bool_c).unwrap());
        for o in [
            Opponent::Exhaustive,
            Opponent::Adversarial,
            Opponent::Random(7),
            script(""),
        ] {
            let t = play_expose(&w, &bool_c, &o, DEFAULT_FUEL);
            assert_eq!(t.verdict, WIN);
            match t.evidence {
                Some(Evidence::Complete { locations }) => assert_eq!(locations.len(), 2),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn dishonest_expose_stop_is_caught() {
        // after seeing only `true`, claim everything sits at index 0
        let lie = NoethExpose::Ask(Branch::total(|_| {
            NoethExpose::Stop(Arc::new(|_| Ok(MemEvidence::at(0))))
        }));
        let t = play_expose(&lie, &carrier("bool"), &script("true"), DEFAULT_FUEL);
        assert_eq!(t.verdict, Verdict::WitnessDishonest);
        // same witness on a carrier falsely flagged propositional
        let fake = carrier("prop:bool");
        let t = play_expose(&expose_from_prop(&fake).unwrap(), &fake, &script("true"), DEFAULT_FUEL);
        assert_eq!(t.verdict, Verdict::WitnessDishonest);
    }

    #[test]
    fn fuel_accounting() {
        let t = play_noeth_acc(&build_bool_noeth_acc(), &carrier("bool"), &script("true,false,true"), 2);
        assert_eq!(t.verdict, Verdict::FuelExhausted);
        assert_eq!(t.fuel_used, 2);
        assert!(t.evidence.is_none());
    }

    #[test]
    fn random_opponent_is_reproducible() {
        let w = build_bool_noeth_acc();
        let c = carrier("bool");
        let a = play_noeth_acc(&w, &c, &Opponent::Random(42), DEFAULT_FUEL).to_json();
        let b = play_noeth_acc(&w, &c, &Opponent::Random(42), DEFAULT_FUEL).to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn adversarial_avoids_repeats_in_free_games() {
        let w = crate::witnesses::bounded_to_noeth_acc(&crate::witnesses::listable_to_bounded(
            &listable_from_enum(&carrier("fin:3")).unwrap(),
        ))
        .unwrap();
        let t = play_noeth_acc(&w, &carrier("fin:3"), &Opponent::Adversarial, DEFAULT_FUEL);
        let firsts: Vec<Value> = t.accumulator().items()[..3].to_vec();
        assert_eq!(firsts, vec![Value::Nat(0), Value::Nat(1), Value::Nat(2)]);
        assert_eq!(t.verdict, WIN);
    }

    #[test]
    fn transcript_json_shape() {
        let t = play_noeth_acc(
            &build_bool_noeth_acc(),
            &carrier("bool"),
            &script("true,false,true"),
            DEFAULT_FUEL,
        );
        let json: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(json["moves"][0], serde_json::json!({"ask": "true"}));
        assert_eq!(
            json["evidence"],
            serde_json::json!({"kind": "dup", "t_early": 0, "t_late": 2})
        );
        assert_eq!(json["verdict"], "ProverWins(EvidenceValidated)");
        let back: Transcript = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }
}
