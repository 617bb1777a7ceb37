//! Executable constructive finiteness.
//!
//! Witness trees for several encodings of "a set is finite because any
//! long enough interrogation must repeat itself", a game engine that
//! checks them against adversarial opponents, the conversions between
//! encodings, and an equality decider extracted from a witness.
//!
//! Module map:
//!
//! * [`carrier`]: element universes and their capabilities
//! * [`evidence`]: duplicate / membership / relation certificates
//! * [`witnesses`]: witness trees and direct builders
//! * [`games`]: the prover-opponent engine and transcripts
//! * [`convert`]: conversions between encodings
//! * [`decider`]: equality decisions from a `NoethAcc` witness
//! * [`stream`]: streamless encodings
//! * [`af`]: almost-full relations
//! * [`lattice`]: the implication matrix checker

pub mod af;
pub mod carrier;
pub mod convert;
pub mod decider;
pub mod evidence;
pub mod games;
pub mod lattice;
pub mod stream;
pub mod value;
pub mod witnesses;

pub use carrier::{Capabilities, Capability, Carrier, CarrierError, Equality};
pub use evidence::{Accumulator, DupEvidence, MemEvidence, RelEvidence, Validity};
pub use games::{Opponent, Transcript, Verdict, WinReason};
pub use value::Value;
pub use witnesses::{WitnessError, DEFAULT_FUEL};
