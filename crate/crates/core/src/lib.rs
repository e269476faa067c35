//! Quantum and classical Liouville dynamics of two coupled kicked spins.
//!
//! Two angular momenta precess freely about the z-axis and are coupled once
//! per period by an impulsive spin-spin kick. This crate provides the
//! finite-dimensional quantum propagator, the corresponding classical map on
//! S^2 x S^2 with Monte-Carlo ensembles, the discretized marginal probability
//! distributions both sides are compared on, and the scalar diagnostics
//! (Shannon entropies, relaxation rates, quantum-classical difference
//! statistics).
//!
//! The crate is `no_std` + `alloc`; all IO, configuration, and the experiment
//! CLI live in the companion `spinsim-cli` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod classical;
mod eigen;
pub mod floquet;
mod linalg;
pub mod marginals;
pub mod rng;
pub mod spin;
pub mod state;

pub use spin::{MagneticLabel, SpinMagnitude, XBasisTransform};

use core::fmt;

/// Errors surfaced by the simulation library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// State dimensions do not match the operator or plan they are used with.
    DimensionMismatch,
    /// The tridiagonal eigensolver failed to converge.
    EigenNonConvergence,
    /// Two distributions were compared on different label grids.
    LabelMismatch,
    /// A fit or estimate was requested with too little data.
    InsufficientData(&'static str),
    /// Tangent dynamics evaluated exactly at a coordinate pole (|z| = 1).
    ChartPole,
    /// A parameter was outside its documented domain.
    InvalidParameter(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch => write!(f, "state dimensions do not match the operator"),
            Error::EigenNonConvergence => write!(f, "tridiagonal eigensolver did not converge"),
            Error::LabelMismatch => write!(f, "distributions have different label grids"),
            Error::InsufficientData(what) => write!(f, "insufficient data: {what}"),
            Error::ChartPole => write!(f, "tangent map evaluated at a coordinate pole"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
