//! Numerical toolkit for subordinate Brownian motions `X_t = B_{S_t}` whose
//! subordinator has Laplace exponent `phi(lambda) = lambda^{alpha/2}
//! ell(lambda)` with `ell` slowly varying at infinity.
//!
//! The crate has three layers:
//!
//! * closed-form and Laplace-inverted evaluators for the subordinator
//!   ([`bernstein`]), one-dimensional ladder/fluctuation quantities
//!   ([`fluctuation`]), and the free-space Green function and jump kernel via
//!   subordination integrals ([`kernels`]);
//! * a reproducible Monte Carlo engine for exit times, harmonic measures and
//!   occupation densities ([`simulate`], [`geometry`]);
//! * statistical verifiers for the Harnack inequality, the boundary Harnack
//!   principle, Carleson-type bounds and Martin-kernel boundary limits
//!   ([`estimators`], [`martin`]), reported through [`report`].

pub mod bernstein;
pub mod conditions;
pub mod error;
pub mod estimators;
pub mod fluctuation;
pub mod geometry;
pub mod kernels;
pub mod math;
pub mod report;
pub mod simulate;
pub mod stats;

pub use bernstein::{BernsteinFamily, FamilyKind, SubordinatorModel};
pub use error::{Result, SbmError};
pub use report::{AssumptionReport, VerificationReport};
