//! Core library for dyadic interaction-network analysis.
//!
//! The crate turns timestamped proximity contacts and node-level survey data
//! into dyadic matrices, and fits linear models on those matrices with
//! permutation-based inference (node relabeling of the dependent matrix).
//! Everything here is deterministic given a seed and runs without the
//! standard library; IO and parallelism live in companion crates.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod builders;
pub mod contacts;
pub mod correlate;
pub mod error;
pub mod matrix;
pub mod ols;
pub mod panel;
pub mod perm;
pub mod qap;
pub mod roster;
pub mod selection;
pub mod stats;
pub mod synth;
pub mod terms;

pub use error::{Error, Result};
pub use matrix::DyadicMatrix;
pub use panel::{NodePanel, NominationNetwork};
pub use roster::{NodeId, Roster, SampleId};
