//! Capacity-achieving input covariance matrices from channel symmetries.
//!
//! A single-user multiantenna channel `y = Hx + n` with channel distribution
//! information at the transmitter has ergodic capacity
//! `C_H = sup_Q E[log det(I + H Q H*)]` over unit-trace covariance inputs.
//! When the law of `H*H` is invariant under conjugation by a group of
//! unitaries, Haar-averaging over that group is an idempotent, trace- and
//! positivity-preserving projector that never decreases mutual information,
//! so the capacity search can be restricted to the projector's image.
//!
//! The crate is organized as:
//!
//! * [`matcore`] — dense complex matrices, covariance/unitary newtypes,
//!   seeded random streams, log-det kernels and covariance projection;
//! * [`symgroups`] — structured unitary subgroups, Haar sampling, exact
//!   average (twirl) operators, reduced covariance sets, and the
//!   standard-symmetry machinery (rational independence, torus closures,
//!   fixed-set intersections);
//! * [`channels`] — sampleable channel models with their known symmetry
//!   groups and a statistical symmetry-membership probe;
//! * [`infocap`] — Monte Carlo mutual information, closed forms for the
//!   two-antenna worked channels, and a capacity-finiteness diagnostic;
//! * [`capopt`] — sample-average capacity optimization over reduced sets
//!   plus runnable verification suites for the capacity theorems.

pub mod capopt;
pub mod channels;
mod error;
pub mod infocap;
pub mod matcore;
pub mod symgroups;

pub use error::{Error, Result};
