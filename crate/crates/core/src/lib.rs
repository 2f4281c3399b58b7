//! Optimal timing of feigned ignorance.
//!
//! An informed player chooses, each period, between a success and a
//! deliberate failure. The observer holds a Beta prior over the player's hit
//! probability, updates it after every outcome, and walks away for good once
//! the posterior mean strictly exceeds a threshold `c`. This crate computes the
//! family of candidate optimal strategies, classifies which of them is optimal
//! for a given discount factor, and carries brute-force oracles that check the
//! classification independently.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod belief;
mod error;
pub mod oracle;
pub mod sim;
pub mod solver;
pub mod strategy;
pub mod valuation;

pub use belief::{BeliefState, Threshold};
pub use error::{Error, Result};
pub use oracle::OracleResult;
pub use sim::{GuesserConfig, Trajectory, TrajectoryRecord};
pub use solver::{
    OptimalKind, OptimalSet, OrderingReport, ProblemInstance, SweepRow, DEFAULT_TIE_TOL,
};
pub use strategy::{Action, Decomposition, FamilyIndex, Strategy};
pub use valuation::{Discount, RootResult, DEFAULT_ROOT_TOL};
