//! Exact-identity suite. Every check is a relative residual against a
//! tolerance; failures are report rows, never errors.
//!
//! - (a) resonance arithmetic and the frequency partitions
//! - (b) the integration-by-parts identity for T_{M,N}
//! - (c) Re Σ DERIV φ_N² 𝓕[B(u,u,u)] û(−k) = 0
//! - (d) Re Σ DERIV φ_N² 𝓕[B(u,u,w)] ŵ(−k) = 0
//! - (e) C^{21,low}_k = 0
//! - (f) B^{42}_k = 0

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::IdentityConfig;
use crate::error::Result;
use crate::evolution::resonant_pairing;
use crate::fourier_core::cutoff::{dyadics_upto, phi_n};
use crate::fourier_core::FourierField;
use crate::pseudoproducts::{ibp_symbols, verify_ibp};
use crate::resonance::{a_class, d_class, omega3, omega3_poly, omega5, omega7, DClass, D1_SHIFT};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityRow {
    pub suite: char,
    pub name: String,
    pub cases: u64,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub rows: Vec<IdentityRow>,
    pub pass: bool,
}

impl IdentityReport {
    fn new(rows: Vec<IdentityRow>) -> Self {
        let pass = rows.iter().all(|r| r.pass);
        Self { rows, pass }
    }

    pub fn suite(&self, s: char) -> impl Iterator<Item = &IdentityRow> {
        self.rows.iter().filter(move |r| r.suite == s)
    }
}

fn row(suite: char, name: impl Into<String>, cases: u64, max_residual: f64, tolerance: f64) -> IdentityRow {
    IdentityRow {
        suite,
        name: name.into(),
        cases,
        max_residual,
        tolerance,
        pass: max_residual <= tolerance,
    }
}

/// |x| / scale, or |x| itself when the scale vanishes.
pub fn relative(x: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        x.abs() / scale
    } else {
        x.abs()
    }
}

/// Exact integer identities: residuals are 0 or a count of violations.
pub fn resonance_rows(bound: i64, bound5: i64, random_triples: usize, random_tuples: usize, seed: u64) -> Vec<IdentityRow> {
    let mut rows = Vec::new();

    let (mut n, mut bad) = (0u64, 0u64);
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                n += 1;
                bad += u64::from(omega3(a, b, c) != omega3_poly(a, b, c));
            }
        }
    }
    rows.push(row('a', format!("omega3 factored = sum of cubes, |k| <= {bound}"), n, bad as f64, 0.0));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wide = 1i64 << 39;
    let mut bad = 0u64;
    for _ in 0..random_triples {
        let [a, b, c] = [0; 3].map(|_| rng.gen_range(-wide..=wide));
        bad += u64::from(omega3(a, b, c) != omega3_poly(a, b, c));
    }
    rows.push(row('a', "omega3 factored = sum of cubes, random |k| <= 2^39", random_triples as u64, bad as f64, 0.0));

    // Γ⁵(0): k₆ = −(k₁+…+k₅); Ω₅ = Ω₃(k₁,k₂,k₃₄₅) + Ω₃(k₃,k₄,k₅)
    let (mut n, mut bad) = (0u64, 0u64);
    let r = bound5;
    for k1 in -r..=r {
        for k2 in -r..=r {
            for k3 in -r..=r {
                for k4 in -r..=r {
                    for k5 in -r..=r {
                        let k6 = -(k1 + k2 + k3 + k4 + k5);
                        if k6.abs() > r {
                            continue;
                        }
                        n += 1;
                        let q = k3 + k4 + k5;
                        let split = omega3(k1, k2, q) + omega3(k3, k4, k5);
                        bad += u64::from(omega5(&[k1, k2, k3, k4, k5, k6]).ok() != Some(split));
                    }
                }
            }
        }
    }
    rows.push(row('a', format!("omega5 additivity on Gamma5(0), |k| <= {r}"), n, bad as f64, 0.0));

    // Ω₇ = Ω₃(k₁,k₂,q) + Ω₃(k₃,k₄,p) + Ω₃(k₅,k₆,k₇), p = k₅+k₆+k₇, q = k₃+k₄+p
    let span = 1i64 << 20;
    let mut bad = 0u64;
    for _ in 0..random_tuples {
        let k: [i64; 7] = [0; 7].map(|_| rng.gen_range(-span..=span));
        let k8 = -k.iter().sum::<i64>();
        let p = k[4] + k[5] + k[6];
        let q = k[2] + k[3] + p;
        let split = omega3(k[0], k[1], q) + omega3(k[2], k[3], p) + omega3(k[4], k[5], k[6]);
        let full = [k[0], k[1], k[2], k[3], k[4], k[5], k[6], k8];
        bad += u64::from(omega7(&full).ok() != Some(split));
    }
    rows.push(row('a', "omega7 additivity, random |k| <= 2^20", random_tuples as u64, bad as f64, 0.0));
    rows
}

/// Σ_j χ_{A_j} = 1, Σ_N φ_N = 1 and the D¹/D²/none split.
pub fn partition_rows(bound: i64, lp_bound: i64) -> Vec<IdentityRow> {
    let mut rows = Vec::new();
    let (mut n, mut bad_a, mut bad_d) = (0u64, 0u64, 0u64);
    for k1 in -bound..=bound {
        for k2 in -bound..=bound {
            for k3 in -bound..=bound {
                n += 1;
                let m = [(k2 + k3).unsigned_abs(), (k1 + k3).unsigned_abs(), (k1 + k2).unsigned_abs()];
                // indicator of each A_j written out independently
                let chi = [
                    m[0] <= m[1] && m[0] <= m[2],
                    m[1] < m[0] && m[1] <= m[2],
                    m[2] < m[0] && m[2] < m[1],
                ];
                let count = chi.iter().filter(|&&c| c).count();
                let j = chi.iter().position(|&c| c).map(|i| i as u8 + 1);
                bad_a += u64::from(count != 1 || j != Some(a_class(k1, k2, k3)));

                let mut s = m;
                s.sort_unstable();
                let k = (k1 + k2 + k3).unsigned_abs();
                let in_d = s[0] > 0;
                let in_d1 = in_d && s[1] * (1 << D1_SHIFT) <= k;
                let in_d2 = in_d && !in_d1;
                let members = [!in_d, in_d1, in_d2].iter().filter(|&&c| c).count();
                let expect = if in_d1 {
                    DClass::D1
                } else if in_d2 {
                    DClass::D2
                } else {
                    DClass::None
                };
                bad_d += u64::from(members != 1 || d_class(k1, k2, k3) != expect);
            }
        }
    }
    rows.push(row('a', format!("sum of chi_A_j = 1, |k| <= {bound}"), n, bad_a as f64, 0.0));
    rows.push(row('a', format!("D1/D2/none total and disjoint, |k| <= {bound}"), n, bad_d as f64, 0.0));

    let ns = dyadics_upto(4 * lp_bound.max(1) as u64);
    let worst = (-lp_bound..=lp_bound)
        .map(|k| (ns.iter().map(|&n| phi_n(n, k)).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    rows.push(row('a', format!("sum_N phi_N = 1, |k| <= {lp_bound}"), 2 * lp_bound as u64 + 1, worst, 1e-12));
    rows
}

/// Default lattice cutoff L = ⌊k^{2/3}⌋.
pub fn default_cutoff(k: i64) -> i64 {
    let l = (k.unsigned_abs() as f64).powf(2.0 / 3.0).floor() as i64;
    // guard against cbrt round-off just below an integer
    if (l + 1).pow(3) <= k.abs().pow(2) {
        l + 1
    } else {
        l
    }
}

/// Brute-force C^{21,low} bracket for real u:
/// Σ 1/(k₂+k₃) û(k₁₂)û(k₁₃)û(k₂)û(k₃) over |k₂|,|k₃|,|k₁₂|,|k₁₃| ≤ L,
/// k₂+k₃ ≠ 0, k₁₂+k₁₃ = −(k₂+k₃). Returns (sum, Σ|terms|); the prefactor
/// k|û(k)|² multiplies both and is left out.
pub fn c21_low(u: &FourierField, l: i64) -> (Complex64, f64) {
    let (mut sum, mut scale) = (Complex64::new(0.0, 0.0), 0.0);
    for k2 in -l..=l {
        for k3 in -l..=l {
            let s = k2 + k3;
            if s == 0 {
                continue;
            }
            let p = u.get(k2) * u.get(k3) / s as f64;
            for k12 in -l..=l {
                let k13 = -s - k12;
                if k13.abs() > l {
                    continue;
                }
                let t = p * u.get(k12) * u.get(k13);
                sum += t;
                scale += t.norm();
            }
        }
    }
    (sum, scale)
}

/// Brute-force B^{42}_k over Λ(k):
/// Im Σ k/(k₂+k₃) |û(k₁)|² û(k₂)û(k₃)û(k₄₂)û(k₄₃), k₁ = k − k₂ − k₃,
/// k₄₂+k₄₃ = −(k₂+k₃) ≠ 0, |k₂|,|k₃|,|k₄₂|,|k₄₃| ≤ L. Returns (Im sum, Σ|terms|).
pub fn b42(u: &FourierField, k: i64, l: i64) -> (f64, f64) {
    let (mut sum, mut scale) = (Complex64::new(0.0, 0.0), 0.0);
    for k2 in -l..=l {
        for k3 in -l..=l {
            let s = k2 + k3;
            if s == 0 {
                continue;
            }
            let p = u.get(k - s).norm_sqr() * k as f64 / s as f64 * u.get(k2) * u.get(k3);
            for k42 in -l..=l {
                let k43 = -s - k42;
                if k43.abs() > l {
                    continue;
                }
                let t = p * u.get(k42) * u.get(k43);
                sum += t;
                scale += t.norm();
            }
        }
    }
    (sum.im, scale)
}

/// Scale Σ_k |DERIV(k)| φ_N² · 3|f̂(k)|²|ĝ(k)|² of the resonant pairing.
fn pairing_scale(f: &FourierField, g: &FourierField, n: u64) -> f64 {
    f.modes()
        .map(|(k, c)| 3.0 * TAU * k.abs() as f64 * phi_n(n, k).powi(2) * c.norm_sqr() * g.get(k).norm_sqr())
        .sum()
}

fn random_field(km: usize, rng: &mut ChaCha8Rng) -> FourierField {
    FourierField::random_real(km, rng, |k| (1.0 + k.abs() as f64).powf(-0.5))
}

/// Fields the suites run on: `trials` random triples, or the given data.
fn sources(cfg: &IdentityConfig, seed: u64, data: Option<&FourierField>) -> Vec<[FourierField; 3]> {
    match data {
        Some(u) => vec![[u.clone(), u.clone(), u.clone()]],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..cfg.trials)
                .map(|_| [0; 3].map(|_| random_field(cfg.max_mode, &mut rng)))
                .collect()
        }
    }
}

/// (b): T_{M,N} identity for N ∈ {16,32,64}, M ∈ {1,2,4} with 16M ≤ N, and
/// the sampled sup of η₃.
pub fn ibp_rows(fields: &[[FourierField; 3]], tol: f64) -> Result<Vec<IdentityRow>> {
    let mut rows = Vec::new();
    let (mut worst, mut cases, mut sup) = (0.0f64, 0u64, 0.0f64);
    for n in [16u64, 32, 64] {
        for m in [1u64, 2, 4].into_iter().filter(|m| 16 * m <= n) {
            for [f1, f2, g] in fields {
                worst = worst.max(verify_ibp(m, n, f1, f2, g)?);
                cases += 1;
            }
            sup = sup.max(ibp_symbols(m, n)?.eta3.sampled_sup(n as i64));
        }
    }
    rows.push(row('b', "integration-by-parts identity", cases, worst, tol));
    rows.push(IdentityRow {
        suite: 'b',
        name: "sampled sup |eta3| <= 8".into(),
        cases: 6,
        max_residual: sup,
        tolerance: 8.0,
        pass: sup <= 8.0,
    });
    Ok(rows)
}

/// (c) and (d) over all blocks N ≤ 2K.
pub fn pairing_rows(fields: &[[FourierField; 3]], tol: f64) -> Result<Vec<IdentityRow>> {
    let (mut wc, mut wd, mut cases) = (0.0f64, 0.0f64, 0u64);
    for [u, w, _] in fields {
        for n in dyadics_upto(2 * u.max_mode() as u64) {
            let c = resonant_pairing(u, u, n)?;
            wc = wc.max(relative(c.re, pairing_scale(u, u, n)));
            let d = resonant_pairing(u, w, n)?;
            wd = wd.max(relative(d.re, pairing_scale(u, w, n)));
            cases += 1;
        }
    }
    Ok(vec![
        row('c', "Re of resonant pairing (u,u)", cases, wc, tol),
        row('d', "Re of difference-flow pairing D_N (u,w)", cases, wd, tol),
    ])
}

/// (e) and (f) for each k.
pub fn lattice_rows(fields: &[[FourierField; 3]], modes: &[i64], cutoff: Option<i64>, tol: f64) -> Vec<IdentityRow> {
    let mut rows = Vec::new();
    for &k in modes {
        let l = cutoff.unwrap_or_else(|| default_cutoff(k));
        let (mut we, mut wf) = (0.0f64, 0.0f64);
        for [u, _, _] in fields {
            let (c, sc) = c21_low(u, l);
            we = we.max(relative(c.norm(), sc));
            let (b, sb) = b42(u, k, l);
            wf = wf.max(relative(b, sb));
        }
        let n = fields.len() as u64;
        rows.push(row('e', format!("C21low_k = 0, k = {k}, L = {l}"), n, we, tol));
        rows.push(row('f', format!("B42_k = 0, k = {k}, L = {l}"), n, wf, tol));
    }
    rows
}

/// Run all six suites. `data` replaces the random fields when given.
pub fn run_identities(cfg: &IdentityConfig, seed: u64, data: Option<&FourierField>) -> Result<IdentityReport> {
    let fields = sources(cfg, seed, data);
    let tol = cfg.tolerance;
    let mut rows = resonance_rows(cfg.scan_bound, cfg.scan_bound_5, cfg.random_triples, cfg.random_tuples, seed);
    rows.extend(partition_rows(cfg.scan_bound, 4096));
    rows.extend(ibp_rows(&fields, tol)?);
    rows.extend(pairing_rows(&fields, tol)?);
    rows.extend(lattice_rows(&fields, &cfg.modes, cfg.cutoff, tol));
    Ok(IdentityReport::new(rows))
}
