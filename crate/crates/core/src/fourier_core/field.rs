use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fourier coefficients û(k), k = −K..K, of a function on the unit torus.
///
/// Coefficients are stored at index `k + K`. Real-valued fields satisfy
/// û(−k) = conj(û(k)); the type itself does not force this, because complex
/// multipliers and pseudo-products legitimately produce non-Hermitian data.
/// Constructors that build a field from real data always return an exactly
/// Hermitian field; use [`FourierField::is_hermitian`] to check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierField {
    max_mode: usize,
    coeffs: Vec<Complex64>,
}

impl FourierField {
    pub fn zeros(max_mode: usize) -> Self {
        Self {
            max_mode,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * max_mode + 1],
        }
    }

    /// Build from a coefficient vector ordered k = −K..K.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::InvalidInput(format!(
                "coefficient vector must have odd length, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        Ok(Self {
            max_mode: coeffs.len() / 2,
            coeffs,
        })
    }

    /// Field with û(k) = f(k) for |k| ≤ K.
    pub fn from_fn(max_mode: usize, f: impl Fn(i64) -> Complex64) -> Self {
        let km = max_mode as i64;
        Self {
            max_mode,
            coeffs: (-km..=km).map(f).collect(),
        }
    }

    /// Hermitian field with prescribed û(k) for k ≥ 0; û(0) keeps only its real part.
    pub fn from_positive_modes(max_mode: usize, f: impl Fn(i64) -> Complex64) -> Self {
        let mut out = Self::zeros(max_mode);
        out.set(0, Complex64::new(f(0).re, 0.0));
        for k in 1..=max_mode as i64 {
            out.set_pair(k, f(k));
        }
        out
    }

    /// Random real-valued field with standard Gaussian coefficients on 1 ≤ |k| ≤ K
    /// weighted by `weight(k)`, and zero mean.
    pub fn random_real<R: Rng + ?Sized>(
        max_mode: usize,
        rng: &mut R,
        weight: impl Fn(i64) -> f64,
    ) -> Self {
        let mut out = Self::zeros(max_mode);
        for k in 1..=max_mode as i64 {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            out.set_pair(k, Complex64::new(re, im) * weight(k));
        }
        out
    }

    pub fn max_mode(&self) -> usize {
        self.max_mode
    }

    /// Coefficients ordered k = −K..K.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// û(k), zero outside |k| ≤ K.
    #[inline]
    pub fn get(&self, k: i64) -> Complex64 {
        let idx = k + self.max_mode as i64;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// # Panics
    /// Panics when |k| > K.
    #[inline]
    pub fn set(&mut self, k: i64, value: Complex64) {
        let idx = k + self.max_mode as i64;
        assert!(
            idx >= 0 && (idx as usize) < self.coeffs.len(),
            "mode {k} outside ±{}",
            self.max_mode
        );
        self.coeffs[idx as usize] = value;
    }

    /// Set û(k) = value and û(−k) = conj(value).
    pub fn set_pair(&mut self, k: i64, value: Complex64) {
        if k == 0 {
            self.set(0, Complex64::new(value.re, 0.0));
        } else {
            self.set(k, value);
            self.set(-k, value.conj());
        }
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let km = self.max_mode as i64;
        self.coeffs.iter().enumerate().map(move |(i, c)| (i as i64 - km, *c))
    }

    /// Exact Hermitian check: û(−k) == conj(û(k)) bitwise, û(0) real.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() == 0.0
    }

    /// max_k |û(−k) − conj(û(k))|.
    pub fn hermitian_defect(&self) -> f64 {
        (0..=self.max_mode as i64)
            .map(|k| (self.get(-k) - self.get(k).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Replace û(k) by (û(k) + conj(û(−k)))/2; the result is exactly Hermitian.
    pub fn symmetrize(&mut self) {
        let z = self.get(0);
        self.set(0, Complex64::new(z.re, 0.0));
        for k in 1..=self.max_mode as i64 {
            let avg = (self.get(k) + self.get(-k).conj()) * 0.5;
            self.set(k, avg);
            self.set(-k, avg.conj());
        }
    }

    pub fn symmetrized(mut self) -> Self {
        self.symmetrize();
        self
    }

    /// Multiply each coefficient by `m(k)`.
    pub fn apply_multiplier(&self, m: impl Fn(i64) -> f64) -> Self {
        let mut out = self.clone();
        let km = self.max_mode as i64;
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            *c *= m(i as i64 - km);
        }
        out
    }

    pub fn apply_complex_multiplier(&self, m: impl Fn(i64) -> Complex64) -> Self {
        let mut out = self.clone();
        let km = self.max_mode as i64;
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            *c *= m(i as i64 - km);
        }
        out
    }

    /// Copy onto a different max mode, truncating or zero-padding.
    pub fn resized(&self, max_mode: usize) -> Self {
        Self::from_fn(max_mode, |k| self.get(k))
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= a);
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.check_same_modes(other)?;
        Ok(Self {
            max_mode: self.max_mode,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        })
    }

    pub fn check_same_modes(&self, other: &Self) -> Result<()> {
        if self.max_mode != other.max_mode {
            return Err(Error::MismatchedModes(self.max_mode, other.max_mode));
        }
        Ok(())
    }

    /// Σ_k |û(k)|² = ‖u‖²_{L²} = P₀(u²) for real u.
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// ∫_𝕋 f g dx = Σ_k f̂(k) ĝ(−k).
    pub fn pairing(&self, other: &Self) -> Result<Complex64> {
        self.check_same_modes(other)?;
        Ok(self.modes().map(|(k, a)| a * other.get(-k)).sum())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let km = self.max_mode.max(other.max_mode) as i64;
        (-km..=km)
            .map(|k| (self.get(k) - other.get(k)).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn odd_length_required() {
        assert!(FourierField::from_coeffs(vec![Complex64::new(1.0, 0.0); 4]).is_err());
        let f = FourierField::from_coeffs(vec![Complex64::new(1.0, 0.0); 5]).unwrap();
        assert_eq!(f.max_mode(), 2);
    }

    #[test]
    fn rejects_nan() {
        let mut c = vec![Complex64::new(0.0, 0.0); 3];
        c[1].re = f64::NAN;
        assert!(FourierField::from_coeffs(c).is_err());
    }

    #[test]
    fn symmetrize_is_exact() {
        let mut f = FourierField::from_fn(6, |k| Complex64::new(k as f64, 0.3 * k as f64 + 1.0));
        assert!(!f.is_hermitian());
        f.symmetrize();
        assert!(f.is_hermitian());
    }

    #[test]
    fn random_real_is_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = FourierField::random_real(10, &mut rng, |_| 1.0);
        assert!(f.is_hermitian());
        assert_eq!(f.get(0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn get_outside_range_is_zero() {
        let f = FourierField::from_fn(2, |_| Complex64::new(1.0, 0.0));
        assert_eq!(f.get(3), Complex64::new(0.0, 0.0));
        assert_eq!(f.get(-3), Complex64::new(0.0, 0.0));
    }
}
