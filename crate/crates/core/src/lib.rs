//! Follow-the-Perturbed-Leader learners for adversarial multi-armed bandits.
//!
//! The crate is `no_std` with `alloc`. Randomness comes from named seeded
//! streams ([`rng::RandomStreams`]) so every game is reproducible from its
//! seed and configuration.

#![no_std]

extern crate alloc;

pub mod adversaries;
pub mod error;
pub mod harness;
pub mod learners;
pub mod oracle;
pub mod rng;
pub mod types;

pub use error::{FplError, Result};
pub use rng::{RandomStreams, Stream, StreamName};
pub use types::{CostVector, EstimateVector, LearnerState, ScheduleParams, Variant};
