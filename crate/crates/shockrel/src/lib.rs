//! Reliability of a system exposed to an external shock environment.
//!
//! A system fails through three competing modes: a fatal shock, the
//! degradation level of one component crossing a threshold, and a sudden
//! failure governed by a hazard rate. Shocks arrive according to a
//! non-homogeneous Poisson process; each non-fatal shock adds a random
//! (possibly dependent) pair of increments to the hazard rate and to the
//! degradation level. The crate evaluates the survival probability of such
//! a system by four routes:
//!
//! 1. full-trajectory Monte Carlo ([`montecarlo::reliability_mc1`]),
//! 2. Monte Carlo over the shock environment only ([`montecarlo::reliability_mc2`]),
//! 3. a truncated series with a rigorous truncation bound ([`series`]),
//! 4. numerical Laplace-transform inversion ([`laplace`]).
//!
//! The [`analysis`] module checks ageing (new-better-than-used) and
//! stochastic-comparison properties of the lifetime on grids, and
//! [`cli`] exposes everything as a command-line tool.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod laplace;
pub mod model;
pub mod montecarlo;
pub mod numerics;
pub mod series;
pub mod specdoc;

pub use error::{Error, Result};
pub use model::{
    DegradationLaw, FatalityProfile, HazardProfile, IncrementLaw, IntensityProfile, MarginalLaw,
    Method, ModelSpec, ReliabilityEstimate, Uncertainty,
};
