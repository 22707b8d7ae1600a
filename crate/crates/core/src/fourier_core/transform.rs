use std::sync::Arc;

use num_complex::Complex64;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use rustfft::{Fft, FftPlanner};

use super::FourierField;
use crate::error::{Error, Result};

/// Smallest 5-smooth integer ≥ n (fast sizes for the mixed-radix FFT).
pub fn fast_size(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

/// Uniform grid x_j = j/n on the torus with cached FFT plans.
///
/// Forward transforms use û(k) = n⁻¹ Σ_j f(x_j) e^{−2πikx_j}, the discrete
/// counterpart of û(k) = ∫ e^{−2πikx} f(x) dx.
#[derive(Clone)]
pub struct SpectralGrid {
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
}

impl std::fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralGrid").field("size", &self.size).finish()
    }
}

impl SpectralGrid {
    pub fn new(size: usize) -> Self {
        let mut planner = FftPlanner::new();
        let mut real = RealFftPlanner::new();
        Self {
            size,
            forward: planner.plan_fft_forward(size),
            inverse: planner.plan_fft_inverse(size),
            r2c: real.plan_fft_forward(size),
            c2r: real.plan_fft_inverse(size),
        }
    }

    /// Grid on which a cubic product of max-mode-K fields is alias free for |k| ≤ K.
    pub fn for_cubic(max_mode: usize) -> Self {
        Self::new(fast_size(4 * max_mode + 1))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn check_fits(&self, km: usize) -> Result<()> {
        if self.size < 2 * km + 1 {
            return Err(Error::Aliasing {
                grid: self.size,
                max_mode: km,
                required: 2 * km + 1,
            });
        }
        Ok(())
    }

    /// Complex samples Σ_k û(k) e^{2πikx_j}.
    pub fn to_physical(&self, field: &FourierField, buf: &mut Vec<Complex64>) -> Result<()> {
        let km = field.max_mode();
        self.check_fits(km)?;
        buf.clear();
        buf.resize(self.size, Complex64::new(0.0, 0.0));
        for (k, c) in field.modes() {
            buf[k.rem_euclid(self.size as i64) as usize] = c;
        }
        self.inverse.process(buf);
        Ok(())
    }

    /// Coefficients |k| ≤ `max_mode` of the sampled function; `buf` is overwritten.
    pub fn to_spectral(&self, buf: &mut [Complex64], max_mode: usize) -> FourierField {
        assert_eq!(buf.len(), self.size);
        self.forward.process(buf);
        let n = self.size as i64;
        let scale = 1.0 / self.size as f64;
        FourierField::from_fn(max_mode, |k| {
            if 2 * k.unsigned_abs() as i64 >= n {
                Complex64::new(0.0, 0.0)
            } else {
                buf[k.rem_euclid(n) as usize] * scale
            }
        })
    }
}

impl SpectralGrid {
    /// Real samples of a Hermitian field (half-length transform; the
    /// negative modes are never read).
    pub fn to_physical_real(&self, field: &FourierField, buf: &mut Vec<f64>) -> Result<()> {
        let km = field.max_mode();
        self.check_fits(km)?;
        let mut spec = self.c2r.make_input_vec();
        for (k, c) in spec.iter_mut().enumerate().take(km + 1) {
            *c = field.get(k as i64);
        }
        spec[0].im = 0.0;
        buf.clear();
        buf.resize(self.size, 0.0);
        self.c2r
            .process(&mut spec, buf)
            .map_err(|e| Error::InvalidInput(e.to_string()))
    }

    /// Hermitian coefficients |k| ≤ `max_mode` of real samples; `buf` is overwritten.
    pub fn to_spectral_real(&self, buf: &mut [f64], max_mode: usize) -> FourierField {
        assert_eq!(buf.len(), self.size);
        let mut spec = self.r2c.make_output_vec();
        self.r2c.process(buf, &mut spec).expect("lengths match the plan");
        let scale = 1.0 / self.size as f64;
        let n = self.size;
        FourierField::from_fn(max_mode, |k| {
            let a = k.unsigned_abs() as usize;
            if 2 * a >= n {
                Complex64::new(0.0, 0.0)
            } else if k >= 0 {
                spec[a] * scale
            } else {
                spec[a].conj() * scale
            }
        })
    }
}

/// Discrete Fourier coefficients of real samples on the grid x_j = j/(2K+1).
pub fn synthesize(samples: &[f64]) -> Result<FourierField> {
    let n = samples.len();
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "sample count must be odd and at least 3, got {n}"
        )));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite sample".into()));
    }
    let grid = SpectralGrid::new(n);
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    Ok(grid.to_spectral(&mut buf, n / 2).symmetrized())
}

/// Point values Re Σ_k û(k) e^{2πikj/n}, j = 0..n−1.
pub fn evaluate(field: &FourierField, grid_size: usize) -> Result<Vec<f64>> {
    let grid = SpectralGrid::new(grid_size);
    let mut buf = Vec::new();
    grid.to_physical(field, &mut buf)?;
    Ok(buf.into_iter().map(|c| c.re).collect())
}
