//! # microbeam
//!
//! Spectral analysis, boundary observability, and exact modal simulation of
//! a strain-gradient Euler-Bernoulli micro-cantilever.
//!
//! The dimensionless model is a sixth-order beam equation
//! `w_tt + w_xxxx - zeta w_xxxxxx = 0` on [0, 1], clamped at the root with
//! free-end conditions involving the stiffness ratio `zeta > 0`. The crate
//! computes:
//!
//! - roots of the characteristic polynomial `zeta s^6 - s^4 + lambda^2 = 0`
//!   ([`charpoly`]), exactly and asymptotically;
//! - the eigenvalues and orthonormal eigenfunctions of the spatial operator
//!   via a scaled boundary determinant ([`spectrum`], [`modes`]);
//! - the three root-of-beam boundary observations on the lifted eigenmodes
//!   and their admissibility / exact-observability classification
//!   ([`observability`]);
//! - exact (undiscretized-in-time) modal evolution with output traces,
//!   energy traces, the multiplier identity, and the two-sided
//!   observability estimate ([`simulate`]);
//! - the inverse-operator solve A0 f = h by variation of parameters
//!   ([`modes::greens_apply`]).
//!
//! Numeric kernels are generic over the scalar type through the [`Real`]
//! trait (f64 for production accuracy, f32 instantiable for experiments);
//! concrete aliases are exported at the crate root.

// `!(x > 0)` deliberately treats NaN as invalid input, and index loops over
// the fixed 6x6 kernels read better than iterator chains here.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod charpoly;
pub mod error;
pub mod linalg;
pub mod model;
pub mod modes;
pub mod observability;
pub mod quadrature;
pub mod scalar;
pub mod simulate;
pub mod spectrum;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::{real, Real};

/// f64 instantiations (the working precision of the CLI and test suites).
pub type BeamParams64 = model::BeamParams<f64>;
pub type MaterialParams64 = model::MaterialParams<f64>;
pub type EnergySnapshot64 = model::EnergySnapshot<f64>;
pub type CharRoots64 = charpoly::CharRoots<f64>;
pub type SpectralBasis64 = spectrum::SpectralBasis<f64>;
pub type Mode64 = modes::Mode<f64>;
pub type Quadrature64 = quadrature::Quadrature<f64>;

/// f32 instantiations; usable for low mode counts, with the determinant
/// indicator reporting precision exhaustion when the arithmetic runs out.
pub type BeamParams32 = model::BeamParams<f32>;
pub type CharRoots32 = charpoly::CharRoots<f32>;
pub type SpectralBasis32 = spectrum::SpectralBasis<f32>;
pub type Mode32 = modes::Mode<f32>;
