//! Core dynamics of the naming game with sentence-level utterances.
//!
//! A population of agents sits on a generated complex network ([`net`]) and
//! plays an iterated speaker/hearer game. In the multi-word variant an
//! utterance is a whole sentence: a grammatical pattern plus one word drawn
//! from the speaker's memory for each slot ([`lexicon`], [`agent`]). The
//! classic single-word game is the degenerate case with one category and one
//! single-slot pattern. The [`engine`] drives interactions to global
//! consensus, [`metrics`] records population-level time series, and
//! [`analysis`] aggregates batches of runs.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature
//! (default) only adds `std::error::Error` impls for the error types.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod agent;
pub mod analysis;
pub mod engine;
pub mod lexicon;
pub mod metrics;
pub mod net;
pub mod rng;

pub use agent::AgentMemory;
pub use engine::{RunResult, SimConfig};
pub use lexicon::{PatternSet, Sentence, Word};
pub use net::{NetSpec, Network};
