//! Discrete Fourier representation of real periodic fields on 𝕋 = ℝ/ℤ.
//!
//! Convention: û(k) = ∫_𝕋 e^{−2πikx} u(x) dx, so ∂ₓ ↔ 2πik.

pub mod cutoff;
mod field;
mod ops;
mod trajectory;
mod transform;

pub use cutoff::{chi, dyadics_upto, is_dyadic, phi, phi_n};
pub use field::FourierField;
pub use ops::{
    bessel, deriv, derivative, project_dyadic, project_geq, project_leq, project_mode, riesz,
    sobolev_norm, RieszOutput,
};
pub use trajectory::{
    linear_frequency, lq_norm, space_time_norm, trapezoid_weights, xsb_norm_diagnostic,
    xsb_norm_with_window, Exponent, Trajectory, Window,
};
pub use transform::{evaluate, fast_size, synthesize, SpectralGrid};
