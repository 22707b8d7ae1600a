use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::transform::{fast_size, SpectralGrid};
use super::FourierField;
use crate::error::{Error, Result};

/// Time-stamped snapshots of one run.
///
/// `alphas[i]` is ∫₀^{tᵢ} P₀(u²) dτ as accumulated by the integrator; it is
/// what the gauge map needs and is absent for trajectories built by hand.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Trajectory {
    times: Vec<f64>,
    snapshots: Vec<FourierField>,
    dt: f64,
    alphas: Option<Vec<f64>>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, snapshots: Vec<FourierField>, dt: f64) -> Result<Self> {
        if times.len() != snapshots.len() {
            return Err(Error::InvalidInput(format!(
                "{} times for {} snapshots",
                times.len(),
                snapshots.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("times must be strictly increasing".into()));
        }
        if let Some(first) = snapshots.first() {
            for s in &snapshots[1..] {
                first.check_same_modes(s)?;
            }
        }
        Ok(Self {
            times,
            snapshots,
            dt,
            alphas: None,
        })
    }

    pub fn with_alphas(mut self, alphas: Vec<f64>) -> Result<Self> {
        if alphas.len() != self.times.len() {
            return Err(Error::InvalidInput("one alpha per snapshot required".into()));
        }
        self.alphas = Some(alphas);
        Ok(self)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn snapshots(&self) -> &[FourierField] {
        &self.snapshots
    }

    pub fn alphas(&self) -> Option<&[f64]> {
        self.alphas.as_deref()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_mode(&self) -> Option<usize> {
        self.snapshots.first().map(FourierField::max_mode)
    }

    pub fn last(&self) -> Option<(f64, &FourierField)> {
        self.times.last().map(|&t| (t, self.snapshots.last().unwrap()))
    }

    /// Same times and alphas, snapshots replaced by `f(i, snapshot)`.
    pub fn map_snapshots(&self, f: impl Fn(usize, &FourierField) -> FourierField) -> Self {
        Self {
            times: self.times.clone(),
            snapshots: self.snapshots.iter().enumerate().map(|(i, s)| f(i, s)).collect(),
            dt: self.dt,
            alphas: self.alphas.clone(),
        }
    }

    /// Composite trapezoid weights on the snapshot times.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        trapezoid_weights(&self.times)
    }

    pub(crate) fn same_times(&self, other: &Self) -> bool {
        self.times.len() == other.times.len()
            && self
                .times
                .iter()
                .zip(&other.times)
                .all(|(a, b)| (a - b).abs() <= 1e-12 * (1.0 + a.abs()))
    }
}

pub fn trapezoid_weights(times: &[f64]) -> Vec<f64> {
    let n = times.len();
    let mut w = vec![0.0; n];
    for i in 1..n {
        let h = times[i] - times[i - 1];
        w[i - 1] += 0.5 * h;
        w[i] += 0.5 * h;
    }
    w
}

/// Lebesgue exponent in [1, ∞].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Finite(f64),
    Infinity(InfinityTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum InfinityTag {
    #[serde(rename = "inf")]
    Inf,
}

impl Exponent {
    pub const INF: Exponent = Exponent::Infinity(InfinityTag::Inf);

    fn validate(self) -> Result<Self> {
        match self {
            Exponent::Finite(p) if !(p >= 1.0 && p.is_finite()) => {
                Err(Error::InvalidInput(format!("exponent {p} outside [1, ∞]")))
            }
            e => Ok(e),
        }
    }
}

impl From<f64> for Exponent {
    fn from(p: f64) -> Self {
        if p == f64::INFINITY {
            Exponent::INF
        } else {
            Exponent::Finite(p)
        }
    }
}

/// ‖u‖_{L^q_x} by the grid average (n⁻¹ Σ_j |u(x_j)|^q)^{1/q}.
///
/// The grid has more than q·K points for finite q, so even integer q is
/// integrated exactly; L^∞ is the grid maximum on a 4× oversampled grid.
pub fn lq_norm(field: &FourierField, q: Exponent) -> Result<f64> {
    let q = q.validate()?;
    let km = field.max_mode();
    let n = match q {
        Exponent::Finite(q) => fast_size((2 * (q / 2.0).ceil() as usize * km).max(8 * km) + 1),
        Exponent::Infinity(_) => fast_size(8 * km + 4),
    };
    let grid = SpectralGrid::new(n);
    let mut buf = Vec::new();
    grid.to_physical(field, &mut buf)?;
    Ok(match q {
        Exponent::Finite(q) => {
            (buf.iter().map(|c| c.norm().powf(q)).sum::<f64>() / n as f64).powf(1.0 / q)
        }
        Exponent::Infinity(_) => buf.iter().map(|c| c.norm()).fold(0.0, f64::max),
    })
}

/// L^p_T L^q_x: per-snapshot L^q norm, then trapezoid in time (max for p = ∞).
pub fn space_time_norm(traj: &Trajectory, p: Exponent, q: Exponent) -> Result<f64> {
    if traj.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let p = p.validate()?;
    let norms = traj
        .snapshots()
        .iter()
        .map(|s| lq_norm(s, q))
        .collect::<Result<Vec<_>>>()?;
    Ok(match p {
        Exponent::Infinity(_) => norms.iter().cloned().fold(0.0, f64::max),
        Exponent::Finite(p) => traj
            .trapezoid_weights()
            .iter()
            .zip(&norms)
            .map(|(w, n)| w * n.powf(p))
            .sum::<f64>()
            .powf(1.0 / p),
    })
}

/// Time window for the X^{s,b} diagnostic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    #[default]
    RaisedCosine,
    Rectangular,
}

/// Linear frequency ω(k) = (2πk)³: free solutions satisfy û(t,k) = e^{iω(k)t} û(0,k).
#[inline]
pub fn linear_frequency(k: i64) -> f64 {
    let a = TAU * k as f64;
    a * a * a
}

/// Approximate ‖u‖_{X^{s,b}} with the default raised-cosine window.
pub fn xsb_norm_diagnostic(traj: &Trajectory, s: f64, b: f64) -> Result<f64> {
    xsb_norm_with_window(traj, s, b, Window::RaisedCosine)
}

/// Approximate ‖u‖_{X^{s,b}} from uniformly sampled snapshots.
///
/// Works in the interaction picture v̂(t,k) = e^{−iω(k)t}û(t,k), where the
/// weight ⟨τ − ω(k)⟩ becomes ⟨τ⟩. Samples are multiplied by the window and by
/// the square root of the trapezoid weights, transformed in time, and summed
/// with weight ⟨τ_m⟩^{2b}⟨k⟩^{2s}, τ_m = 2πm/(n·dt). The window is scaled so
/// that Σ_j c_j w_j² = T; hence b = 0 returns exactly (∫₀^T ‖u‖²_{H^s} dt)^{1/2}
/// for free solutions. This is a diagnostic, not the restriction norm.
pub fn xsb_norm_with_window(traj: &Trajectory, s: f64, b: f64, window: Window) -> Result<f64> {
    let n = traj.len();
    if n < 2 {
        return Err(Error::InvalidInput(
            "X^{s,b} diagnostic needs at least two snapshots".into(),
        ));
    }
    let times = traj.times();
    let span = times[n - 1] - times[0];
    let h = span / (n - 1) as f64;
    if times
        .windows(2)
        .any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1e-300))
    {
        return Err(Error::NonUniformSampling);
    }

    let c = traj.trapezoid_weights();
    let raw: Vec<f64> = (0..n)
        .map(|j| match window {
            Window::Rectangular => 1.0,
            Window::RaisedCosine => {
                let x = PI * j as f64 / (n - 1) as f64;
                x.sin().powi(2)
            }
        })
        .collect();
    let energy: f64 = raw.iter().zip(&c).map(|(w, c)| c * w * w).sum();
    let scale = if energy > 0.0 { (span / energy).sqrt() } else { 0.0 };
    let weights: Vec<f64> = raw.iter().zip(&c).map(|(w, c)| w * scale * c.sqrt()).collect();

    let tau_weight: Vec<f64> = (0..n)
        .map(|m| {
            let mm = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
            let tau = TAU * mm / (n as f64 * h);
            (1.0 + tau * tau).powf(b)
        })
        .collect();

    let km = traj.max_mode().unwrap() as i64;
    let fft = FftPlanner::new().plan_fft_forward(n);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    let mut total = 0.0;
    for k in -km..=km {
        let w = linear_frequency(k);
        for (j, (snap, t)) in traj.snapshots().iter().zip(times).enumerate() {
            buf[j] = snap.get(k) * Complex64::from_polar(weights[j], -w * t);
        }
        fft.process(&mut buf);
        let sum: f64 = buf.iter().zip(&tau_weight).map(|(x, tw)| tw * x.norm_sqr()).sum();
        total += (1.0 + (k * k) as f64).powf(s) * sum / n as f64;
    }
    Ok(total.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier_core::sobolev_norm;

    fn pair(km: usize, k: i64, v: f64) -> FourierField {
        let mut f = FourierField::zeros(km);
        f.set_pair(k, Complex64::new(v, 0.0));
        f
    }

    fn constant_traj(f: &FourierField, n: usize, dt: f64) -> Trajectory {
        let times = (0..n).map(|i| i as f64 * dt).collect();
        Trajectory::new(times, vec![f.clone(); n], dt).unwrap()
    }

    #[test]
    fn validation() {
        let f = FourierField::zeros(2);
        assert!(Trajectory::new(vec![0.0, 0.0], vec![f.clone(), f.clone()], 0.1).is_err());
        assert!(Trajectory::new(vec![0.0, 1.0], vec![f.clone(), FourierField::zeros(3)], 0.1).is_err());
        let t = Trajectory::new(vec![], vec![], 0.1).unwrap();
        assert!(matches!(
            space_time_norm(&t, Exponent::Finite(2.0), Exponent::Finite(2.0)),
            Err(Error::EmptyTrajectory)
        ));
    }

    #[test]
    fn constant_in_time() {
        let f = pair(4, 1, 1.0);
        let tr = constant_traj(&f, 11, 0.05);
        // ‖2cos 2πx‖_{L²} = √2, T = 0.5
        let v = space_time_norm(&tr, Exponent::Finite(2.0), Exponent::Finite(2.0)).unwrap();
        assert!((v - (0.5f64).sqrt() * 2f64.sqrt()).abs() < 1e-13);
        let v = space_time_norm(&tr, Exponent::Finite(4.0), Exponent::INF).unwrap();
        assert!((v - 0.5f64.powf(0.25) * 2.0).abs() < 1e-12);
    }

    #[test]
    fn single_snapshot_sup() {
        let f = pair(4, 2, 1.0);
        let tr = constant_traj(&f, 1, 0.1);
        let v = space_time_norm(&tr, Exponent::INF, Exponent::Finite(2.0)).unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn l4_of_cosine_exact() {
        // ∫(2cos)^4 = 16·3/8 = 6
        let v = lq_norm(&pair(3, 1, 1.0), Exponent::Finite(4.0)).unwrap();
        assert!((v - 6f64.powf(0.25)).abs() < 1e-13);
    }

    #[test]
    fn exponent_serde() {
        let e: Exponent = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(e, Exponent::INF);
        let e: Exponent = serde_json::from_str("2.5").unwrap();
        assert_eq!(e, Exponent::Finite(2.5));
        assert!(lq_norm(&pair(3, 1, 1.0), Exponent::Finite(0.5)).is_err());
    }

    #[test]
    fn xsb_free_evolution() {
        let mut u0 = FourierField::zeros(6);
        u0.set_pair(2, Complex64::new(0.3, -0.1));
        u0.set_pair(5, Complex64::new(0.0, 0.2));
        let dt = 1e-3;
        let n = 101;
        let times: Vec<f64> = (0..n).map(|i| i as f64 * dt).collect();
        let snaps = times
            .iter()
            .map(|&t| u0.apply_complex_multiplier(|k| Complex64::from_polar(1.0, linear_frequency(k) * t)))
            .collect();
        let tr = Trajectory::new(times, snaps, dt).unwrap();
        let expect = (0.1f64).sqrt() * sobolev_norm(&u0, 0.5);
        for w in [Window::RaisedCosine, Window::Rectangular] {
            let v = xsb_norm_with_window(&tr, 0.5, 0.0, w).unwrap();
            assert!((v - expect).abs() < 1e-12 * expect, "{w:?}: {v} vs {expect}");
        }
        // b > 0 only adds weight
        assert!(xsb_norm_diagnostic(&tr, 0.5, 0.5).unwrap() >= expect);
    }

    #[test]
    fn xsb_rejects_nonuniform() {
        let f = FourierField::zeros(2);
        let tr = Trajectory::new(vec![0.0, 0.1, 0.3], vec![f.clone(), f.clone(), f], 0.1).unwrap();
        assert!(matches!(xsb_norm_diagnostic(&tr, 0.0, 0.5), Err(Error::NonUniformSampling)));
    }

    #[test]
    fn xsb_zero() {
        let tr = constant_traj(&FourierField::zeros(3), 5, 0.1);
        assert_eq!(xsb_norm_diagnostic(&tr, 1.0, 1.0).unwrap(), 0.0);
    }
}
