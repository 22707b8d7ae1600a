//! The gauge Ψ between plain and renormalized mKdV.
//!
//! If u solves u_t + ∂ₓ³u + σ∂ₓ(u³) = 0 then v(t,x) = u(t, x + 3σα(t)),
//! α(t) = ∫₀ᵗ P₀(u²), solves the renormalized equation: the translation
//! speed 3σP₀(u²) is exactly the transport term removed by renormalizing.
//! In Fourier a translation by β is the phase e^{2πikβ}.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier_core::Trajectory;

/// Spatial shift β(t) = 3σα(t) applied by Ψ.
pub fn gauge_shift(alpha: f64, sign: i8) -> f64 {
    3.0 * f64::from(sign) * alpha
}

fn translate(traj: &Trajectory, sign: f64) -> Result<Trajectory> {
    let alphas = traj.alphas().ok_or(Error::MissingAlpha)?;
    Ok(traj.map_snapshots(|i, s| {
        let beta = sign * alphas[i];
        s.apply_complex_multiplier(|k| Complex64::from_polar(1.0, TAU * k as f64 * beta))
    }))
}

/// Ψ: plain solution → renormalized solution. P₀(u²) is invariant under
/// translation, so the recorded α is carried over unchanged.
pub fn gauge_forward(traj: &Trajectory, sign: i8) -> Result<Trajectory> {
    translate(traj, gauge_shift(1.0, sign))
}

/// Ψ⁻¹: renormalized solution → plain solution.
pub fn gauge_backward(traj: &Trajectory, sign: i8) -> Result<Trajectory> {
    translate(traj, -gauge_shift(1.0, sign))
}
