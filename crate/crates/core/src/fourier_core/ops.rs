use num_complex::Complex64;

use super::cutoff::{check_dyadic, phi_leq, phi_n};
use super::FourierField;
use crate::error::{Error, Result};

/// P_k: keep the single mode k.
pub fn project_mode(field: &FourierField, k: i64) -> FourierField {
    field.apply_multiplier(|j| if j == k { 1.0 } else { 0.0 })
}

/// P_N = 𝓕⁻¹(φ_N 𝓕·).
pub fn project_dyadic(field: &FourierField, n: u64) -> Result<FourierField> {
    check_dyadic(n)?;
    Ok(field.apply_multiplier(|k| phi_n(n, k)))
}

/// P_{≤N} = Σ_{M ≤ N} P_M.
pub fn project_leq(field: &FourierField, n: u64) -> Result<FourierField> {
    check_dyadic(n)?;
    Ok(field.apply_multiplier(|k| phi_leq(n, k)))
}

/// P_{≥N} = Σ_{M ≥ N} P_M = I − P_{≤N/2}.
pub fn project_geq(field: &FourierField, n: u64) -> Result<FourierField> {
    check_dyadic(n)?;
    Ok(match n {
        0 => field.clone(),
        1 => field.apply_multiplier(|k| 1.0 - phi_leq(0, k)),
        _ => field.apply_multiplier(|k| 1.0 - phi_leq(n / 2, k)),
    })
}

/// J^s = (1 + |k|²)^{s/2}.
pub fn bessel(field: &FourierField, s: f64) -> FourierField {
    field.apply_multiplier(|k| (1.0 + (k * k) as f64).powf(0.5 * s))
}

/// Result of a Riesz potential; `dropped_mean` records that a nonzero û(0)
/// was discarded (s = 0, where |0|^0 is taken as 0).
#[derive(Clone, Debug)]
pub struct RieszOutput {
    pub field: FourierField,
    pub dropped_mean: bool,
}

/// D^s = |k|^s with the zero mode always mapped to 0.
pub fn riesz(field: &FourierField, s: f64) -> Result<RieszOutput> {
    let mean = field.get(0);
    let nonzero_mean = mean.norm() != 0.0;
    if s < 0.0 && nonzero_mean {
        return Err(Error::SingularMode);
    }
    let out = field.apply_multiplier(|k| if k == 0 { 0.0 } else { (k.abs() as f64).powf(s) });
    Ok(RieszOutput {
        field: out,
        dropped_mean: s <= 0.0 && nonzero_mean,
    })
}

/// ‖u‖_{H^s} = (Σ_k (1+k²)^s |û(k)|²)^{1/2}.
pub fn sobolev_norm(field: &FourierField, s: f64) -> f64 {
    field
        .modes()
        .map(|(k, c)| (1.0 + (k * k) as f64).powf(s) * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// ∂ₓ ↔ DERIV(k) = 2πik. Every derivative in the crate goes through here.
#[inline]
pub fn deriv(k: i64) -> Complex64 {
    Complex64::new(0.0, std::f64::consts::TAU * k as f64)
}

/// ∂ₓ applied coefficient-wise.
pub fn derivative(field: &FourierField) -> FourierField {
    field.apply_complex_multiplier(deriv)
}
