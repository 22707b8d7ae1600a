//! Time evolution of mKdV and renormalized mKdV in Fourier space.
//!
//! ```text
//! u_t + ∂ₓ³u + σ ∂ₓ(u³) = 0                  (plain)
//! u_t + ∂ₓ³u + σ ∂ₓ(u³ − 3P₀(u²)u) = 0       (renormalized)
//! ```
//!
//! With ∂ₓ ↔ 2πik the linear part is û_t = iω(k)û, ω(k) = (2πk)³.

mod gauge;
mod integrator;

pub use gauge::{gauge_backward, gauge_forward, gauge_shift};
pub use integrator::{simulate, step, SimulationState, Solver};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier_core::{deriv, fast_size, linear_frequency, FourierField, SpectralGrid};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntegratorKind {
    /// Integrating-factor classical Runge–Kutta 4.
    #[default]
    #[serde(rename = "IFRK4")]
    Ifrk4,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    /// σ = ±1 in front of the nonlinearity.
    pub sign: i8,
    pub renormalized: bool,
    pub max_mode: usize,
    pub dt: f64,
    pub t_final: f64,
    /// Evaluate u³ on ≥ 4K+1 points (exact for |k| ≤ K); otherwise 2K+1 points.
    pub dealias: bool,
    pub integrator: IntegratorKind,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            sign: 1,
            renormalized: true,
            max_mode: 128,
            dt: 1e-4,
            t_final: 0.5,
            dealias: true,
            integrator: IntegratorKind::Ifrk4,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sign != 1 && self.sign != -1 {
            return Err(Error::Config(format!("sign must be ±1, got {}", self.sign)));
        }
        if self.max_mode == 0 {
            return Err(Error::Config("max_mode must be positive".into()));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::Config(format!("t_final must be ≥ 0, got {}", self.t_final)));
        }
        self.steps()?;
        Ok(())
    }

    /// Number of steps; t_final must be an integer multiple of dt.
    pub fn steps(&self) -> Result<usize> {
        let n = (self.t_final / self.dt).round();
        if (n * self.dt - self.t_final).abs() > 1e-9 * self.t_final.max(self.dt) {
            return Err(Error::Config(format!(
                "t_final = {} is not a multiple of dt = {}",
                self.t_final, self.dt
            )));
        }
        Ok(n as usize)
    }

    pub(crate) fn grid(&self) -> SpectralGrid {
        if self.dealias {
            SpectralGrid::for_cubic(self.max_mode)
        } else {
            SpectralGrid::new(fast_size(2 * self.max_mode + 1))
        }
    }
}

/// Symbol of the linear part: 𝓕[−∂ₓ³u](k) = iω(k)û(k).
pub fn linear_symbol(k: i64) -> Complex64 {
    Complex64::new(0.0, linear_frequency(k))
}

fn check_real(fields: &[&FourierField]) -> Result<()> {
    if fields.iter().any(|f| !f.is_hermitian()) {
        return Err(Error::NonHermitian);
    }
    Ok(())
}

/// 𝓕[f g h] on |k| ≤ K (alias free).
pub(crate) fn cubic_product(
    grid: &SpectralGrid,
    f: &FourierField,
    g: &FourierField,
    h: &FourierField,
) -> Result<FourierField> {
    let km = f.max_mode();
    let mut a = Vec::new();
    grid.to_physical(f, &mut a)?;
    let mut b = Vec::new();
    grid.to_physical(g, &mut b)?;
    let mut c = Vec::new();
    grid.to_physical(h, &mut c)?;
    for ((x, y), z) in a.iter_mut().zip(&b).zip(&c) {
        *x = *x * y * z;
    }
    Ok(grid.to_spectral(&mut a, km))
}

/// Nonresonant and resonant trilinear forms, without the derivative:
///
/// ```text
/// 𝓕[A(f,g,h)](k) = Σ_{k₁+k₂+k₃=k, (k₁+k₂)(k₁+k₃)(k₂+k₃)≠0} f̂(k₁)ĝ(k₂)ĥ(k₃)
/// 𝓕[B(f,g,h)](k) = −3 f̂(k) ĝ(−k) ĥ(k)
/// ```
///
/// so that u³ − 3P₀(u²)u = A(u,u,u) + B(u,u,u) on every mode k ≠ 0.
/// A is computed from 𝓕[fgh] by inclusion–exclusion over the three
/// resonant planes k_i + k_j = 0.
pub fn trilinear_split(
    f: &FourierField,
    g: &FourierField,
    h: &FourierField,
) -> Result<(FourierField, FourierField)> {
    f.check_same_modes(g)?;
    f.check_same_modes(h)?;
    let grid = SpectralGrid::for_cubic(f.max_mode());
    let full = cubic_product(&grid, f, g, h)?;
    let p = |a: &FourierField, b: &FourierField| a.pairing(b);
    let (fg, fh, gh) = (p(f, g)?, p(f, h)?, p(g, h)?);
    let mut a = full;
    let mut b = FourierField::zeros(f.max_mode());
    for k in -(f.max_mode() as i64)..=f.max_mode() as i64 {
        let (fk, gk, hk) = (f.get(k), g.get(k), h.get(k));
        let (fm, gm, hm) = (f.get(-k), g.get(-k), h.get(-k));
        let mut z = a.get(k) - fg * hk - fh * gk - gh * fk + fm * gk * hk + fk * gm * hk + fk * gk * hm;
        if k == 0 {
            z -= fk * gk * hk;
        }
        a.set(k, z);
        b.set(k, -3.0 * fk * gm * hk);
    }
    Ok((a, b))
}

/// (𝓕[∂ₓA(u,u,u)], 𝓕[∂ₓB(u,u,u)]) for real u.
///
/// A_part + B_part = 𝓕[∂ₓ(u³ − 3P₀(u²)u)] exactly; mode 0 of both vanishes.
pub fn rhs_split(u: &FourierField) -> Result<(FourierField, FourierField)> {
    check_real(&[u])?;
    let (a, b) = trilinear_split(u, u, u)?;
    Ok((a.apply_complex_multiplier(deriv), b.apply_complex_multiplier(deriv)))
}

/// Nonlinear part of the right-hand side; the dispersion is `linear_symbol`.
///
/// Plain: −σ𝓕[∂ₓ(u³)]; renormalized: −σ𝓕[∂ₓ(u³ − 3P₀(u²)u)].
pub fn rhs(u: &FourierField, model: &ModelConfig) -> Result<FourierField> {
    check_real(&[u])?;
    if u.max_mode() != model.max_mode {
        return Err(Error::MismatchedModes(u.max_mode(), model.max_mode));
    }
    nonlinear(&model.grid(), u, model)
}

pub(crate) fn nonlinear(grid: &SpectralGrid, u: &FourierField, model: &ModelConfig) -> Result<FourierField> {
    let mut buf = Vec::new();
    grid.to_physical_real(u, &mut buf)?;
    buf.iter_mut().for_each(|x| *x = *x * *x * *x);
    let mut cube = grid.to_spectral_real(&mut buf, u.max_mode());
    let mass = if model.renormalized { 3.0 * u.l2_norm_sq() } else { 0.0 };
    let sigma = f64::from(model.sign);
    let km = u.max_mode() as i64;
    for (i, c) in cube.coeffs_mut().iter_mut().enumerate() {
        let k = i as i64 - km;
        *c = -sigma * deriv(k) * (*c - mass * u.get(k));
    }
    Ok(cube)
}

/// Nonlinear part of the difference equation for w = u − v (renormalized flow):
///
/// ```text
/// −σ∂ₓ[A(u,u,w) + A(u,v,w) + A(v,v,w) + B(u,u,w) + B(u,u,v) − B(v,v,v)]
/// ```
pub fn difference_rhs(u: &FourierField, v: &FourierField, sign: i8) -> Result<FourierField> {
    check_real(&[u, v])?;
    let w = u.sub(v)?;
    let (a1, b1) = trilinear_split(u, u, &w)?;
    let (a2, _) = trilinear_split(u, v, &w)?;
    let (a3, _) = trilinear_split(v, v, &w)?;
    let (_, b2) = trilinear_split(u, u, v)?;
    let (_, b3) = trilinear_split(v, v, v)?;
    let sum = a1.add(&a2)?.add(&a3)?.add(&b1)?.add(&b2)?.sub(&b3)?;
    let sigma = f64::from(sign);
    Ok(sum.apply_complex_multiplier(|k| -sigma * deriv(k)))
}

/// ∫ ∂ₓP_N B(f,f,g) · P_N g = Σ_k DERIV(k) φ_N(k)² 𝓕[B(f,f,g)](k) ĝ(−k).
///
/// Purely imaginary for real f, g: the summand is −3·2πik φ_N²|f̂(k)|²|ĝ(k)|².
pub fn resonant_pairing(f: &FourierField, g: &FourierField, n: u64) -> Result<Complex64> {
    crate::fourier_core::cutoff::check_dyadic(n)?;
    let (_, b) = trilinear_split(f, f, g)?;
    Ok(b.modes()
        .map(|(k, c)| {
            let p = crate::fourier_core::phi_n(n, k);
            deriv(k) * p * p * c * g.get(-k)
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier_core::phi_n;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random(km: usize, seed: u64) -> FourierField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        FourierField::random_real(km, &mut rng, |k| 1.0 / (1.0 + k.abs() as f64))
    }

    fn max_abs(f: &FourierField) -> f64 {
        f.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn slow_split(f: &FourierField, g: &FourierField, h: &FourierField) -> FourierField {
        let km = f.max_mode() as i64;
        FourierField::from_fn(f.max_mode(), |k| {
            let mut s = Complex64::new(0.0, 0.0);
            for k1 in -km..=km {
                for k2 in -km..=km {
                    let k3 = k - k1 - k2;
                    if k3.abs() > km || (k1 + k2) * (k1 + k3) * (k2 + k3) == 0 {
                        continue;
                    }
                    s += f.get(k1) * g.get(k2) * h.get(k3);
                }
            }
            s
        })
    }

    #[test]
    fn config_validation() {
        assert!(ModelConfig::default().validate().is_ok());
        let bad = [
            ModelConfig { sign: 0, ..Default::default() },
            ModelConfig { dt: 0.0, ..Default::default() },
            ModelConfig { max_mode: 0, ..Default::default() },
            ModelConfig { t_final: 0.25, dt: 0.1, ..Default::default() },
        ];
        for c in bad {
            assert!(matches!(c.validate(), Err(Error::Config(_))), "{c:?}");
        }
        let parsed: ModelConfig = serde_json::from_str(r#"{"integrator":"IFRK4","sign":-1}"#).unwrap();
        assert_eq!(parsed.sign, -1);
        assert!(serde_json::from_str::<ModelConfig>(r#"{"integrator":"RK45"}"#).is_err());
        assert!(serde_json::from_str::<ModelConfig>(r#"{"dtt":1}"#).is_err());
    }

    #[test]
    fn constant_field_has_no_nonlinearity() {
        let mut u = FourierField::zeros(8);
        u.set(0, Complex64::new(0.7, 0.0));
        let (a, b) = rhs_split(&u).unwrap();
        // exact zero up to FFT round-off
        assert!(a.max_abs_diff(&FourierField::zeros(8)) < 1e-15 && b.is_zero());
        for renormalized in [false, true] {
            let m = ModelConfig { max_mode: 8, renormalized, ..Default::default() };
            assert!(rhs(&u, &m).unwrap().max_abs_diff(&FourierField::zeros(8)) < 1e-13);
            assert!(rhs(&FourierField::zeros(8), &m).unwrap().is_zero());
        }
    }

    #[test]
    fn fast_split_matches_triple_loop() {
        let eps = Complex64::new(0.01, 0.0);
        let mut u = FourierField::zeros(8);
        u.set_pair(1, eps);
        let (a, _) = trilinear_split(&u, &u, &u).unwrap();
        let slow = slow_split(&u, &u, &u);
        assert!(a.max_abs_diff(&slow) < 1e-16);
        let (f, g, h) = (random(10, 1), random(10, 2), random(10, 3));
        let (a, _) = trilinear_split(&f, &g, &h).unwrap();
        assert!(a.max_abs_diff(&slow_split(&f, &g, &h)) < 1e-14);
        // inclusion–exclusion also holds for complex (non-Hermitian) inputs
        let c = FourierField::from_fn(6, |k| Complex64::new(0.1 * k as f64, 0.3 - 0.05 * (k * k) as f64));
        let (a, _) = trilinear_split(&c, &random(6, 4), &c).unwrap();
        assert!(a.max_abs_diff(&slow_split(&c, &random(6, 4), &c)) < 1e-13);
    }

    #[test]
    fn split_reassembles_cube() {
        let u = random(32, 5);
        let (a, b) = rhs_split(&u).unwrap();
        let mass = u.l2_norm_sq();
        let grid = SpectralGrid::for_cubic(32);
        let cube = cubic_product(&grid, &u, &u, &u).unwrap().apply_complex_multiplier(deriv);
        let re = FourierField::from_fn(32, |k| a.get(k) + b.get(k) + 3.0 * mass * deriv(k) * u.get(k));
        assert!(re.max_abs_diff(&cube) < 1e-14 * max_abs(&cube));
        assert!(!a.is_zero());
    }

    #[test]
    fn renormalized_minus_plain_is_transport() {
        let u = random(24, 6);
        for sign in [1i8, -1] {
            let plain = ModelConfig { max_mode: 24, sign, renormalized: false, ..Default::default() };
            let ren = ModelConfig { renormalized: true, ..plain.clone() };
            let d = rhs(&u, &ren).unwrap().sub(&rhs(&u, &plain).unwrap()).unwrap();
            let m = u.l2_norm_sq();
            for (k, c) in d.modes() {
                let expect = f64::from(sign) * 3.0 * m * deriv(k) * u.get(k);
                assert!((c - expect).norm() < 1e-14, "k={k}");
            }
        }
    }

    #[test]
    fn rejects_complex_fields() {
        let mut u = random(8, 7);
        u.set(2, Complex64::new(1.0, 1.0));
        assert!(matches!(rhs_split(&u), Err(Error::NonHermitian)));
        assert!(matches!(rhs(&u, &ModelConfig { max_mode: 8, ..Default::default() }), Err(Error::NonHermitian)));
    }

    #[test]
    fn dealiasing_matters() {
        let u = random(16, 8);
        let on = ModelConfig { max_mode: 16, ..Default::default() };
        let off = ModelConfig { dealias: false, ..on.clone() };
        let (a, b) = rhs_split(&u).unwrap();
        let exact = a.add(&b).unwrap().scaled(-1.0);
        let scale = max_abs(&exact);
        assert!(rhs(&u, &on).unwrap().max_abs_diff(&exact) < 1e-14 * scale);
        assert!(rhs(&u, &off).unwrap().max_abs_diff(&exact) > 1e-3 * scale);
    }

    #[test]
    fn resonant_pairing_is_imaginary() {
        for seed in 0..10 {
            let (u, w) = (random(64, 10 + seed), random(64, 40 + seed));
            for n in [4u64, 16, 32, 64] {
                // scale: Σ_k |summand|
                let scale: f64 = u
                    .modes()
                    .map(|(k, c)| 3.0 * std::f64::consts::TAU * (k.abs() as f64) * phi_n(n, k).powi(2) * c.norm_sqr() * w.get(k).norm_sqr())
                    .sum();
                let z = resonant_pairing(&u, &w, n).unwrap();
                assert!(z.re.abs() <= 1e-15 * scale, "{z} vs {scale}");
                // ±k terms cancel as well, so even the imaginary part vanishes
                assert!(z.im.abs() <= 1e-13 * scale, "{z} vs {scale}");
                let z = resonant_pairing(&u, &u, n).unwrap();
                assert!(z.re.abs() <= 1e-15 * scale.max(1.0));
            }
        }
    }

    #[test]
    fn difference_equation_matches() {
        let (u, v) = (random(20, 11), random(20, 12));
        for sign in [1i8, -1] {
            let m = ModelConfig { max_mode: 20, sign, ..Default::default() };
            let direct = rhs(&u, &m).unwrap().sub(&rhs(&v, &m).unwrap()).unwrap();
            let split = difference_rhs(&u, &v, sign).unwrap();
            assert!(split.max_abs_diff(&direct) < 1e-14 * max_abs(&direct));
        }
    }
}
