//! Modified energies
//!
//! Per mode k > 0 (with k₄ = −k):
//!
//! ```text
//! 𝓔ₖ = k/2 |û(k)|² + α 𝓔ₖ^{3,1} + β 𝓔ₖ^{3,2} + γ 𝓔ₖ⁵
//! ```
//!
//! Normalisation: under ∂ₓ ↔ 2πik the quartic correction must carry σ/(2π)²
//! and the sextic one 1/(2π)⁴ for α = γ = 1 to cancel the leading drift of the
//! quadratic term (σ is the sign of the nonlinearity); see [`quartic_prefactor`].

mod difference;

pub use difference::{
    coercivity_margin, coercivity_n0, diff_energy_dyadic, diff_energy_dyadic_signed,
    diff_energy_total, diff_energy_total_signed, CoercivityReport,
};

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier_core::cutoff::dyadic_floor;
use crate::fourier_core::FourierField;
use crate::resonance::{d1_triples, d2_triples_with_small_median, omega3};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnergyConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// 𝓔^{3,1} keeps dyadic M < k^theta1.
    pub theta1: f64,
    /// 𝓔^{3,2} keeps k_med < k^theta2.
    pub theta2: f64,
    /// "Ω₃(outer) ≪ Ω₃(inner)" as |Ω₃(outer)| ≤ ll_ratio·|Ω₃(inner)|.
    pub ll_ratio: f64,
    /// Corrections are switched on for k > k_threshold.
    pub k_threshold: i64,
    /// Sign σ of the nonlinearity the energy is built for.
    pub sign: i8,
}

impl Default for EnergyConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
            theta1: 7.0 / 12.0,
            theta2: 2.0 / 3.0,
            ll_ratio: 1.0 / 64.0,
            k_threshold: 512,
            sign: 1,
        }
    }
}

impl EnergyConfig {
    pub fn validate(&self) -> Result<()> {
        let open01 = |x: f64| x > 0.0 && x < 1.0;
        if !open01(self.theta1) || !open01(self.theta2) || !open01(self.ll_ratio) {
            return Err(Error::InvalidInput(
                "theta1, theta2 and ll_ratio must lie in (0, 1)".into(),
            ));
        }
        if self.sign != 1 && self.sign != -1 {
            return Err(Error::InvalidInput(format!("sign must be ±1, got {}", self.sign)));
        }
        if self.k_threshold < 0 {
            return Err(Error::InvalidInput("k_threshold must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyReport {
    pub k: i64,
    pub quadratic: f64,
    pub e31: f64,
    pub e32: f64,
    pub e5: f64,
    pub total: f64,
}

/// σ/(2π)²: factor on the quartic corrections.
pub fn quartic_prefactor(sign: i8) -> f64 {
    sign as f64 / (TAU * TAU)
}

/// 1/(2π)⁴: factor on the sextic correction.
pub fn sextic_prefactor() -> f64 {
    1.0 / TAU.powi(4)
}

#[inline]
fn prod3(u: &FourierField, t: &[i64; 3]) -> Complex64 {
    u.get(t[0]) * u.get(t[1]) * u.get(t[2])
}

/// 𝓔ₖ and its pieces for one mode.
pub fn energy_mode(u: &FourierField, k: i64, cfg: &EnergyConfig) -> Result<EnergyReport> {
    ModeEnergyPlan::new(k, u.max_mode(), cfg)?.eval(u)
}

/// Frequency sets and weights of 𝓔ₖ for a fixed (k, K), so that evaluating
/// along a trajectory only costs the sums.
#[derive(Clone, Debug)]
pub struct ModeEnergyPlan {
    k: i64,
    max_mode: usize,
    cfg: EnergyConfig,
    /// (triple, q k²/Ω₃)
    e31: Vec<([i64; 3], f64)>,
    e32: Vec<([i64; 3], f64)>,
    /// (the three outer factors other than kᵢ, inner triple, weight)
    e5: Vec<([i64; 3], [i64; 3], f64)>,
}

impl ModeEnergyPlan {
    pub fn new(k: i64, max_mode: usize, cfg: &EnergyConfig) -> Result<Self> {
        cfg.validate()?;
        if k <= 0 {
            return Err(Error::InvalidInput(format!("mode must be positive, got {k}")));
        }
        let km = max_mode as i64;
        if k > km {
            return Err(Error::InvalidInput(format!("mode {k} exceeds max mode {km}")));
        }
        let mut plan = Self {
            k,
            max_mode,
            cfg: cfg.clone(),
            e31: Vec::new(),
            e32: Vec::new(),
            e5: Vec::new(),
        };
        if k <= cfg.k_threshold {
            return Ok(plan);
        }
        let kf = k as f64;
        let qk2 = quartic_prefactor(cfg.sign) * kf * kf;
        let weighted = |t: [i64; 3]| (t, qk2 / omega3(t[0], t[1], t[2]) as f64);
        let d1 = d1_triples(k, km);
        let m_cut = kf.powf(cfg.theta1);
        plan.e31 = d1.iter().copied().filter(|t| dyadic_bucket_below(t, m_cut)).map(weighted).collect();
        plan.e32 = d2_triples_with_small_median(k, km, kf.powf(cfg.theta2))
            .into_iter()
            .map(weighted)
            .collect();
        plan.e5 = sextic_terms(k, km, &d1, cfg.ll_ratio);
        Ok(plan)
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn eval(&self, u: &FourierField) -> Result<EnergyReport> {
        if u.max_mode() != self.max_mode {
            return Err(Error::MismatchedModes(u.max_mode(), self.max_mode));
        }
        if !u.is_hermitian() {
            return Err(Error::NonHermitian);
        }
        let k = self.k;
        let u4 = u.get(-k);
        let quartic = |list: &[([i64; 3], f64)]| -> f64 {
            list.iter().map(|(t, w)| w * (prod3(u, t) * u4).re).sum()
        };
        let e31 = quartic(&self.e31);
        let e32 = quartic(&self.e32);
        let e5: f64 = self.e5.iter().map(|(o, s, w)| w * (prod3(u, o) * prod3(u, s)).re).sum();
        let quadratic = 0.5 * k as f64 * u.get(k).norm_sqr();
        let cfg = &self.cfg;
        Ok(EnergyReport {
            k,
            quadratic,
            e31,
            e32,
            e5,
            total: quadratic + cfg.alpha * e31 + cfg.beta * e32 + cfg.gamma * e5,
        })
    }
}

fn min_pair_sum(t: &[i64; 3]) -> u64 {
    (t[1] + t[2])
        .unsigned_abs()
        .min((t[0] + t[2]).unsigned_abs())
        .min((t[0] + t[1]).unsigned_abs())
}

/// The cut is on the dyadic label M of m_min, not on m_min itself.
fn dyadic_bucket_below(t: &[i64; 3], m_cut: f64) -> bool {
    (dyadic_floor(min_pair_sum(t)) as f64) < m_cut
}

/// Terms of
/// Re Σᵢ Σ_{outer ∈ D¹(k)} Σ_{inner ∈ D¹(kᵢ), |Ω₃(outer)| ≤ ρ|Ω₃(inner)|}
/// kᵢ/(Ω₃(outer) Ω₅) Π_{j≠i} û(kⱼ) Π_q û(k_{i,q}), times k²/(2π)⁴.
fn sextic_terms(k: i64, km: i64, d1: &[[i64; 3]], rho: f64) -> Vec<([i64; 3], [i64; 3], f64)> {
    let pre = sextic_prefactor() * (k as f64).powi(2);
    let mut out = Vec::new();
    let mut inner_cache: std::collections::HashMap<i64, Vec<[i64; 3]>> = Default::default();
    for t in d1 {
        let outer = [t[0], t[1], t[2], -k];
        let om_out = omega3(t[0], t[1], t[2]);
        for i in 0..4 {
            let ki = outer[i];
            let mut others = [0i64; 3];
            let mut n = 0;
            for (j, &kj) in outer.iter().enumerate() {
                if j != i {
                    others[n] = kj;
                    n += 1;
                }
            }
            let inner = inner_cache.entry(ki).or_insert_with(|| d1_triples(ki, km));
            for s in inner.iter() {
                let om_in = omega3(s[0], s[1], s[2]);
                if (om_out.abs() as f64) > rho * om_in.abs() as f64 {
                    continue;
                }
                let om5 = om_out + om_in;
                out.push((others, *s, pre * ki as f64 / (om_out as f64 * om5 as f64)));
            }
        }
    }
    out
}
