//! Spectral simulation and diagnostics for the periodic modified KdV equation
//!
//! ```text
//! ∂ₜu + ∂ₓ³u ± ∂ₓ(u³) = 0,          x ∈ 𝕋 = ℝ/ℤ
//! ∂ₜu + ∂ₓ³u ± ∂ₓ(u³ − 3P₀(u²)u) = 0   (renormalized)
//! ```
//!
//! Modules, bottom up:
//! - [`fourier_core`]: coefficients, Littlewood–Paley projectors, norms.
//! - [`resonance`]: exact-integer resonance functions and frequency-set classification.
//! - [`pseudoproducts`]: trilinear Fourier multipliers and the integration-by-parts identity.
//! - [`modified_energy`]: per-mode modified energies and the difference energy.
//! - [`evolution`]: integrating-factor RK4 time stepping and the gauge map.
//! - [`diagnostics`]: identity suites, experiments and the `mkdv` CLI plumbing.

pub mod diagnostics;
pub mod error;
pub mod evolution;
pub mod fourier_core;
pub mod modified_energy;
pub mod pseudoproducts;
pub mod resonance;

pub use error::{Error, Result};
pub use fourier_core::{FourierField, Trajectory};
