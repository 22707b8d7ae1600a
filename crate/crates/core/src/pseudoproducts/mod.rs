//! Trilinear Fourier multipliers ("pseudo-products")
//!
//! ```text
//! 𝓕(Π_η(f,g,h))(k)      = Σ_{k₁+k₂+k₃=k} η(k₁,k₂,k₃) f̂(k₁) ĝ(k₂) ĥ(k₃)
//! 𝓕(Π^j_{η,M}(f,g,h))(k) = same sum weighted by χ_{A_j}(k₁,k₂,k₃) φ_M(Σ_{q≠j} k_q)
//! ```
//!
//! Sums run over |kᵢ| ≤ K with no padding, so every identity below is exact on
//! the truncated lattice.

mod ibp;
mod symbol;

pub use ibp::{ibp_sides, ibp_symbols, t_functional, verify_ibp, IbpSides, IbpSymbols};
pub use symbol::SymbolFn;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier_core::cutoff::{check_dyadic, phi_n, support};
use crate::fourier_core::{FourierField, Trajectory};
use crate::resonance::a_class;

fn check_three(f: &FourierField, g: &FourierField, h: &FourierField) -> Result<usize> {
    f.check_same_modes(g)?;
    f.check_same_modes(h)?;
    Ok(f.max_mode())
}

/// Π_η(f,g,h) on output modes |k| ≤ K.
pub fn pseudoproduct(
    eta: &SymbolFn,
    f: &FourierField,
    g: &FourierField,
    h: &FourierField,
) -> Result<FourierField> {
    pseudoproduct_truncated(eta, f, g, h, f.max_mode())
}

/// Π_η(f,g,h) on output modes |k| ≤ `k_out`.
pub fn pseudoproduct_truncated(
    eta: &SymbolFn,
    f: &FourierField,
    g: &FourierField,
    h: &FourierField,
    k_out: usize,
) -> Result<FourierField> {
    let km = check_three(f, g, h)? as i64;
    let ko = k_out as i64;
    let coeffs: Vec<Complex64> = (-ko..=ko)
        .into_par_iter()
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k1 in -km..=km {
                let a = f.get(k1);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rest = k - k1;
                for k2 in (-km).max(rest - km)..=km.min(rest + km) {
                    let k3 = rest - k2;
                    acc += eta.eval(k1, k2, k3) * a * g.get(k2) * h.get(k3);
                }
            }
            acc
        })
        .collect();
    FourierField::from_coeffs(coeffs)
}

/// Integer values s with φ_M(s) ≠ 0.
fn bucket_values(m: u64) -> Vec<i64> {
    if m == 0 {
        return vec![0];
    }
    let (lo, hi) = support(m);
    let mut v: Vec<i64> = (lo as i64..=hi as i64).collect();
    v.extend((lo as i64..=hi as i64).map(|s| -s));
    v
}

/// Π^j_{η,M}(f,g,h): the restriction to A_j with φ_M of the pair sum excluding kⱼ.
///
/// Cost O(K²·M): only pair sums inside supp φ_M are visited.
pub fn pseudoproduct_restricted(
    eta: &SymbolFn,
    j: u8,
    m: u64,
    f: &FourierField,
    g: &FourierField,
    h: &FourierField,
) -> Result<FourierField> {
    if !(1..=3).contains(&j) {
        return Err(Error::InvalidInput(format!("A_j index must be 1, 2 or 3, got {j}")));
    }
    check_dyadic(m)?;
    let km = check_three(f, g, h)? as i64;
    let sums: Vec<(i64, f64)> = bucket_values(m)
        .into_iter()
        .filter(|s| s.abs() <= 2 * km)
        .map(|s| (s, phi_n(m, s)))
        .collect();
    let coeffs: Vec<Complex64> = (-km..=km)
        .into_par_iter()
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(s, w) in &sums {
                // the excluded index carries k − s
                let lone = k - s;
                if lone.abs() > km {
                    continue;
                }
                for x in (-km).max(s - km)..=km.min(s + km) {
                    let y = s - x;
                    let (k1, k2, k3) = match j {
                        1 => (lone, x, y),
                        2 => (x, lone, y),
                        _ => (x, y, lone),
                    };
                    if a_class(k1, k2, k3) != j {
                        continue;
                    }
                    acc += eta.eval(k1, k2, k3) * w * f.get(k1) * g.get(k2) * h.get(k3);
                }
            }
            acc
        })
        .collect();
    FourierField::from_coeffs(coeffs)
}

/// G^T_{η,M}(u₁,…,u₄) = ∫₀^T ∫_𝕋 Π^j_{η,M}(u₁,u₂,u₃) u₄ dx dt by the trapezoid rule.
pub fn g_functional(
    eta: &SymbolFn,
    j: u8,
    m: u64,
    trajs: [&Trajectory; 4],
) -> Result<Complex64> {
    for t in &trajs[1..] {
        if !trajs[0].same_times(t) {
            return Err(Error::MismatchedTimes);
        }
    }
    let w = trajs[0].trapezoid_weights();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, wi) in w.iter().enumerate() {
        let s = |n: usize| &trajs[n].snapshots()[i];
        let p = pseudoproduct_restricted(eta, j, m, s(0), s(1), s(2))?;
        acc += p.pairing(s(3))? * *wi;
    }
    Ok(acc)
}

/// max over random real fields of |∫ Π^j_{η,M}(f₁,f₂,f₃) f₄| / (M Π‖fᵢ‖_{L²}).
///
/// An empirical constant, not a bound; for M = 0 the normalisation uses M = 1.
pub fn estimate_quadrilinear_ratio(
    eta: &SymbolFn,
    j: u8,
    m: u64,
    trials: usize,
    max_mode: usize,
    seed: u64,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 0.0;
    for _ in 0..trials {
        let f: Vec<FourierField> = (0..4)
            .map(|_| FourierField::random_real(max_mode, &mut rng, |_| 1.0))
            .collect();
        best = best.max(quadrilinear_ratio(eta, j, m, [&f[0], &f[1], &f[2], &f[3]])?);
    }
    Ok(best)
}

/// |∫ Π^j_{η,M}(f₁,f₂,f₃) f₄| / (M Π‖fᵢ‖_{L²}) for given fields.
pub fn quadrilinear_ratio(eta: &SymbolFn, j: u8, m: u64, f: [&FourierField; 4]) -> Result<f64> {
    let p = pseudoproduct_restricted(eta, j, m, f[0], f[1], f[2])?;
    let num = p.pairing(f[3])?.norm();
    let den = m.max(1) as f64 * f.iter().map(|x| x.l2_norm_sq().sqrt()).product::<f64>();
    Ok(if den == 0.0 { 0.0 } else { num / den })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier_core::dyadics_upto;
    use crate::resonance::d_class;
    use crate::resonance::DClass;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn delta(km: usize, k: i64) -> FourierField {
        let mut f = FourierField::zeros(km);
        f.set(k, Complex64::new(1.0, 0.0));
        f
    }

    #[test]
    fn mean_only_inputs() {
        let mut f = FourierField::zeros(3);
        f.set(0, Complex64::new(1.0, 0.0));
        let eta = SymbolFn::constant(Complex64::new(0.5, 0.25));
        let p = pseudoproduct(&eta, &f, &f, &f).unwrap();
        assert_eq!(p.get(0), Complex64::new(0.5, 0.25));
        assert!(p.resized(3).modes().filter(|(k, _)| *k != 0).all(|(_, c)| c.norm() == 0.0));
    }

    #[test]
    fn mismatched_modes() {
        let a = FourierField::zeros(3);
        let b = FourierField::zeros(4);
        assert!(pseudoproduct(&SymbolFn::one(), &a, &a, &b).is_err());
    }

    #[test]
    fn trilinear() {
        let mut r = rng(5);
        let km = 10;
        let f = FourierField::random_real(km, &mut r, |_| 1.0);
        let f2 = FourierField::random_real(km, &mut r, |_| 1.0);
        let g = FourierField::random_real(km, &mut r, |_| 1.0);
        let h = FourierField::random_real(km, &mut r, |_| 1.0);
        let eta = SymbolFn::real(1.0, |a, b, c| ((a - 2 * b + c) as f64).cos());
        let lhs = pseudoproduct(&eta, &f.scaled(2.0).add(&f2.scaled(-3.0)).unwrap(), &g, &h).unwrap();
        let rhs = pseudoproduct(&eta, &f, &g, &h)
            .unwrap()
            .scaled(2.0)
            .add(&pseudoproduct(&eta, &f2, &g, &h).unwrap().scaled(-3.0))
            .unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn single_mode_restricted() {
        let km = 12;
        let (f, g, h) = (delta(km, 2), delta(km, 3), delta(km, 5));
        let eta = SymbolFn::real(3.0, |a, b, c| (a + 2 * b + 3 * c) as f64 / 10.0);
        // (2,3,5): m = (8, 7, 5) → A₃, pair sum k₁+k₂ = 5
        for m in dyadics_upto(16) {
            let p = pseudoproduct_restricted(&eta, 3, m, &f, &g, &h).unwrap();
            let expect = 2.3 * phi_n(m, 5);
            for (k, c) in p.modes() {
                let want = if k == 10 { expect } else { 0.0 };
                assert!((c - Complex64::new(want, 0.0)).norm() < 1e-15, "M={m} k={k}");
            }
            for j in [1u8, 2] {
                assert!(pseudoproduct_restricted(&eta, j, m, &f, &g, &h).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn restricted_rejects_bad_j() {
        let f = FourierField::zeros(2);
        assert!(pseudoproduct_restricted(&SymbolFn::one(), 0, 1, &f, &f, &f).is_err());
        assert!(pseudoproduct_restricted(&SymbolFn::one(), 4, 1, &f, &f, &f).is_err());
        assert!(pseudoproduct_restricted(&SymbolFn::one(), 1, 3, &f, &f, &f).is_err());
    }

    #[test]
    fn restricted_empty_support() {
        let km = 16;
        let f = delta(km, 9);
        let g = delta(km, 6);
        let h = delta(km, -2);
        // k₁+k₂ = 15 lies outside supp φ_2
        let p = pseudoproduct_restricted(&SymbolFn::one(), 3, 2, &f, &g, &h).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn restricted_partition_recovers_product() {
        let mut r = rng(11);
        let km = 32;
        let f = FourierField::random_real(km, &mut r, |_| 1.0);
        let g = FourierField::random_real(km, &mut r, |_| 1.0);
        let h = FourierField::random_real(km, &mut r, |_| 1.0);
        let eta = SymbolFn::one();
        let mut total = FourierField::zeros(km);
        let mut in_d = FourierField::zeros(km);
        for j in 1..=3u8 {
            for m in dyadics_upto(128) {
                let p = pseudoproduct_restricted(&eta, j, m, &f, &g, &h).unwrap();
                total = total.add(&p).unwrap();
                if m >= 1 {
                    in_d = in_d.add(&p).unwrap();
                }
            }
        }
        let full = pseudoproduct(&eta, &f, &g, &h).unwrap();
        assert!(total.max_abs_diff(&full) < 1e-10);
        let d_only = pseudoproduct(
            &SymbolFn::real(1.0, |a, b, c| if d_class(a, b, c) == DClass::None { 0.0 } else { 1.0 }),
            &f,
            &g,
            &h,
        )
        .unwrap();
        assert!(in_d.max_abs_diff(&d_only) < 1e-10);
    }

    #[test]
    fn quadrilinear_ratio_trivial_cases() {
        let zero = SymbolFn::constant(Complex64::new(0.0, 0.0));
        assert_eq!(estimate_quadrilinear_ratio(&zero, 3, 2, 5, 8, 1).unwrap(), 0.0);
        // complex single modes: a one-term sum ≤ ‖η‖∞ φ_M ≤ 1 ≤ M
        let km = 16;
        for m in [1u64, 2, 4] {
            let r = quadrilinear_ratio(
                &SymbolFn::one(),
                3,
                m,
                [&delta(km, 2), &delta(km, m as i64 - 2), &delta(km, 7), &delta(km, -7 - m as i64)],
            )
            .unwrap();
            assert!(r <= 1.0 && r > 0.0, "M={m}: {r}");
        }
    }

    #[test]
    fn g_functional_constant_in_time() {
        let mut r = rng(8);
        let km = 8;
        let u: Vec<FourierField> = (0..4).map(|_| FourierField::random_real(km, &mut r, |_| 1.0)).collect();
        let times = vec![0.0, 0.1, 0.2, 0.3];
        let trajs: Vec<Trajectory> = u
            .iter()
            .map(|f| Trajectory::new(times.clone(), vec![f.clone(); 4], 0.1).unwrap())
            .collect();
        let eta = SymbolFn::one();
        let g = g_functional(&eta, 2, 1, [&trajs[0], &trajs[1], &trajs[2], &trajs[3]]).unwrap();
        let spatial = pseudoproduct_restricted(&eta, 2, 1, &u[0], &u[1], &u[2])
            .unwrap()
            .pairing(&u[3])
            .unwrap();
        assert!((g - spatial * 0.3).norm() < 1e-12 * (1.0 + spatial.norm()));

        let other = Trajectory::new(vec![0.0, 0.1, 0.2, 0.35], vec![u[0].clone(); 4], 0.1).unwrap();
        assert!(matches!(
            g_functional(&eta, 2, 1, [&trajs[0], &trajs[1], &trajs[2], &other]),
            Err(Error::MismatchedTimes)
        ));
    }
}
