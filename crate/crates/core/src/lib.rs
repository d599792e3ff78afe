//! Numerical laboratory for the periodic Benjamin-Ono equation
//!
//! `∂ₜu + ℋ∂ₓ²u = ∂ₓ(u²)` on a torus of period `L`, with `u = Σ cₙ e^{i kₙ x}`
//! and `kₙ = 2πn/L`.
//!
//! * [`spectral`]: grids, Fourier fields, Fourier multipliers, norms.
//! * [`solver`]: integrating-factor time stepping and trajectory files.
//! * [`gauge`]: mean reduction and the gauge transform `w = ∂ₓP₊e^{-iF}`.
//! * [`normalform`]: resonance functions, multipliers, multilinear sums and
//!   the integrated normal-form identity.
//! * [`experiments`]: smoothing, Strichartz and difference scans.

pub mod error;
pub mod experiments;
pub mod gauge;
pub mod normalform;
pub mod solver;
pub mod spectral;

pub use error::{BolabError, Result};
pub use num_complex::Complex64;
