//! Decay-rate analysis for quadratic Markov branching processes.
//!
//! A process with rates `q_ij = i² b_{j−i+1}` is described by its rate
//! sequence ([`law`]). From it the crate computes the Hardy index `D²` and
//! the interval `[1/(4D²), 1/D²]` it puts around the decay parameter
//! ([`hardy`]), closed-form brackets on `D²` ([`bounds`]), the first
//! eigenvalue of the associated Sturm–Liouville problem ([`sl_eigen`]), and
//! direct estimates from the process itself ([`ctmc`]).
//!
//! The numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix `f64`.

pub mod bounds;
pub mod ctmc;
pub mod error;
pub mod export;
pub mod golden;
pub mod hardy;
pub mod law;
pub mod poly;
pub mod quadrature;
mod scalar;
pub mod sl_eigen;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Law = law::BranchingLaw<f64>;
pub type Hardy = hardy::HardyResult<f64>;
pub type Bounds = bounds::BoundsReport<f64>;
pub type Eigen = sl_eigen::EigenResult<f64>;
pub type Decay = ctmc::DecayEstimate<f64>;
pub type Generator = ctmc::TruncatedGenerator<f64>;
