//! Modified energy of the difference w = u − v
//!
//! ```text
//! 𝓔_N = ½‖P_N w‖²                 (N ≤ N₀)
//! 𝓔_N = ½‖P_N w‖² + 𝓔³_N[u,v]     (N > N₀)
//! 𝓔³_N = σ/(2π)² Σ_k Σ_{D¹(k)} k φ_N(k)²/Ω₃ · Re[(û₁û₂ + û₁v̂₂ + v̂₁v̂₂) ŵ(k₃) ŵ(−k)]
//! E^{s'} = Σ_{N ≥ 1} N^{2s'} 𝓔_N
//! ```

use serde::Serialize;

use super::quartic_prefactor;
use crate::error::{Error, Result};
use crate::fourier_core::cutoff::{check_dyadic, phi_n, support};
use crate::fourier_core::{sobolev_norm, FourierField};
use crate::resonance::{d1_triples, omega3};

fn block_l2_sq(w: &FourierField, n: u64) -> f64 {
    w.modes().map(|(k, c)| phi_n(n, k).powi(2) * c.norm_sqr()).sum()
}

fn cubic_correction(u: &FourierField, v: &FourierField, w: &FourierField, n: u64, sign: i8) -> f64 {
    let km = u.max_mode() as i64;
    let (lo, hi) = support(n);
    let mut acc = 0.0;
    for a in lo as i64..=(hi as i64).min(km) {
        for k in [a, -a] {
            let weight = k as f64 * phi_n(n, k).powi(2);
            let wk = w.get(-k);
            for t in d1_triples(k, km) {
                let (a1, a2, b1, b2) = (u.get(t[0]), u.get(t[1]), v.get(t[0]), v.get(t[1]));
                let z = (a1 * a2 + a1 * b2 + b1 * b2) * w.get(t[2]) * wk;
                acc += weight * z.re / omega3(t[0], t[1], t[2]) as f64;
            }
        }
    }
    quartic_prefactor(sign) * acc
}

/// 𝓔_N[u,v,N₀] for the focusing/defocusing sign σ = +1.
pub fn diff_energy_dyadic(u: &FourierField, v: &FourierField, n: u64, n0: u64) -> Result<f64> {
    diff_energy_dyadic_signed(u, v, n, n0, 1)
}

pub fn diff_energy_dyadic_signed(
    u: &FourierField,
    v: &FourierField,
    n: u64,
    n0: u64,
    sign: i8,
) -> Result<f64> {
    u.check_same_modes(v)?;
    check_dyadic(n)?;
    let w = u.sub(v)?;
    let mut e = 0.5 * block_l2_sq(&w, n);
    if n > n0 {
        e += cubic_correction(u, v, &w, n, sign);
    }
    Ok(e)
}

fn blocks(max_mode: usize) -> impl Iterator<Item = u64> {
    let top = 2 * max_mode.max(1) as u64;
    std::iter::successors(Some(1u64), |n| Some(n * 2)).take_while(move |&n| n <= top)
}

/// E^{s'}[u,v,N₀] = Σ_{1 ≤ N ≤ 2K} N^{2s'} 𝓔_N, σ = +1.
pub fn diff_energy_total(u: &FourierField, v: &FourierField, s_prime: f64, n0: u64) -> Result<f64> {
    diff_energy_total_signed(u, v, s_prime, n0, 1)
}

pub fn diff_energy_total_signed(
    u: &FourierField,
    v: &FourierField,
    s_prime: f64,
    n0: u64,
    sign: i8,
) -> Result<f64> {
    u.check_same_modes(v)?;
    blocks(u.max_mode())
        .map(|n| Ok((n as f64).powf(2.0 * s_prime) * diff_energy_dyadic_signed(u, v, n, n0, sign)?))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoercivityReport {
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// E^{s'} divided by the block proxy ½Σ_{N≥1} N^{2s'}‖P_N w‖².
    pub ratio: f64,
    pub energy: f64,
    pub proxy: f64,
}

/// N₀ = 2^9·⌈(‖u‖_{H^s} + ‖v‖_{H^s})^{1/s}⌉, a concrete "N₀ ≫ (‖u‖+‖v‖)^{1/s}".
pub fn coercivity_n0(u: &FourierField, v: &FourierField, s: f64) -> u64 {
    let r = sobolev_norm(u, s) + sobolev_norm(v, s);
    512 * (r.powf(1.0 / s).ceil() as u64).max(1)
}

/// Check ½ ≤ E^{s'}/proxy ≤ 2 with proxy = ½Σ_{N≥1} N^{2s'}‖P_N(u−v)‖².
///
/// The proxy is E^{s'} with the cubic corrections removed, so the ratio
/// measures exactly how far the corrections move the energy.
pub fn coercivity_margin(
    u: &FourierField,
    v: &FourierField,
    s: f64,
    s_prime: f64,
    n0: u64,
    sign: i8,
) -> Result<CoercivityReport> {
    if !(s > 0.0) {
        return Err(Error::InvalidInput(format!("coercivity needs s > 0, got {s}")));
    }
    let w = u.sub(v)?;
    let proxy: f64 = blocks(u.max_mode())
        .map(|n| 0.5 * (n as f64).powf(2.0 * s_prime) * block_l2_sq(&w, n))
        .sum();
    let energy = diff_energy_total_signed(u, v, s_prime, n0, sign)?;
    let ratio = if proxy == 0.0 { 1.0 } else { energy / proxy };
    Ok(CoercivityReport {
        lower_ok: ratio >= 0.5,
        upper_ok: ratio <= 2.0,
        ratio,
        energy,
        proxy,
    })
}
