//! Tooling for k-head two-way nondeterministic finite automata and the
//! constant-randomness one-way verifiers built on top of them.
//!
//! The crate is organised bottom-up:
//!
//! * [`automaton`] defines machines, simulates them and provides the
//!   endmarker-clamping and halting transformations.
//! * [`multistep`] enumerates multi-step computation logs and filters them
//!   for single-head consistency.
//! * [`windability`] searches for winding witnesses and classifies heads.
//! * [`certificates`] builds honest and single-head-lie certificates.
//! * [`verifier`] interprets the V1, V1', V2 and V2' verification loops.
//! * [`analysis`] holds the exact-rational error formulas.
//! * [`experiment`] runs seeded Monte Carlo estimates and sweeps.
//! * [`examples`] contains built-in machines.
//! * [`format`] reads and writes the text formats used by the CLI.
//!
//! Heads are indexed from zero in the library; the CLI numbers them from one.

pub mod analysis;
pub mod automaton;
pub mod certificates;
pub mod examples;
pub mod experiment;
pub mod format;
pub mod multistep;
pub mod verifier;
pub mod windability;

pub use automaton::{AutomatonSpec, Configuration, Outcome, RunVerdict, StateId, Sym, Tape};
pub use certificates::{Certificate, CertificateStep};
pub use windability::{HeadClassification, HeadKind, SearchBounds};
