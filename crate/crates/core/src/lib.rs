//! Revival phenomena for the Schrödinger flow on circles, spheres and abstract
//! operators with integer spectrum.
//!
//! At rational times `t = 2πn/m` the fundamental solution on the circle is a
//! finite comb of point masses weighted by quadratic Gauss sums, and the same
//! weights decompose `exp(-itL²)` into half-wave propagators `exp(-i(2πj/m)L)`
//! for any self-adjoint `L` with integer spectrum. This crate makes those
//! identities computable:
//!
//! * [`gauss`]: Gauss sums, comb weights, and their vanishing pattern.
//! * [`circle`]: truncated Fourier evolution on S¹, distributional pairings,
//!   symmetries and Talbot carpets.
//! * [`operator`]: finite Hermitian models with integer spectrum, functional
//!   calculus by quadrature, projection recovery and one averaging step.
//! * [`sphere`]: zonal evolution on S^d and Huygens focusing at rational times.
//! * [`singularity`]: windowed local-Sobolev growth indicators.
//! * [`report`] and [`cli`]: encoders, manifests, verification suites and the
//!   `zoll` command line.

pub mod circle;
pub mod cli;
pub mod error;
pub mod gauss;
pub mod operator;
pub mod phase;
pub mod quadrature;
pub mod report;
pub mod singularity;
pub mod sphere;

pub use error::{Error, Result};
pub use gauss::{CombRepresentation, GaussWeight, Pattern, RationalTime};
pub use phase::Time;
