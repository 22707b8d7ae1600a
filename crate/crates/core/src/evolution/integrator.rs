use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_real, linear_symbol, nonlinear, ModelConfig};
use crate::error::{Error, Result};
use crate::fourier_core::{FourierField, SpectralGrid, Trajectory};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationState {
    pub t: f64,
    pub field: FourierField,
    /// α(t) = ∫₀ᵗ P₀(u²) dτ.
    pub alpha_accum: f64,
}

impl SimulationState {
    pub fn initial(field: FourierField) -> Self {
        Self {
            t: 0.0,
            field,
            alpha_accum: 0.0,
        }
    }
}

/// Integrating-factor RK4 with cached FFT plans and phase tables.
///
/// With E = e^{iω dt}, E½ = e^{iω dt/2} and 𝒩 the nonlinear part:
///
/// ```text
/// a = 𝒩(u)
/// b = 𝒩(E½(u + dt/2·a))
/// c = 𝒩(E½u + dt/2·b)
/// d = 𝒩(Eu + dt·E½c)
/// u⁺ = Eu + dt/6·(Ea + 2E½(b + c) + d)
/// ```
#[derive(Clone, Debug)]
pub struct Solver {
    model: ModelConfig,
    grid: SpectralGrid,
    full: Vec<Complex64>,
    half: Vec<Complex64>,
}

impl Solver {
    pub fn new(model: &ModelConfig) -> Result<Self> {
        model.validate()?;
        let km = model.max_mode as i64;
        let phase = |h: f64| -> Vec<Complex64> {
            (-km..=km).map(|k| (linear_symbol(k) * h).exp()).collect()
        };
        Ok(Self {
            model: model.clone(),
            grid: model.grid(),
            full: phase(model.dt),
            half: phase(0.5 * model.dt),
        })
    }

    pub fn model(&self) -> &ModelConfig {
        &self.model
    }

    /// Physical grid size used for the cubic term.
    pub fn grid_points(&self) -> usize {
        self.grid.size()
    }

    fn n(&self, u: &FourierField) -> Result<FourierField> {
        nonlinear(&self.grid, u, &self.model)
    }

    fn combine(&self, f: impl Fn(usize, Complex64) -> Complex64, u: &FourierField) -> FourierField {
        let mut out = u.clone();
        for (i, c) in out.coeffs_mut().iter_mut().enumerate() {
            *c = f(i, *c);
        }
        out
    }

    /// One step of size dt. A non-finite result is a `BlowUp` carrying the
    /// last good state.
    pub fn step(&self, state: &SimulationState) -> Result<SimulationState> {
        let u = &state.field;
        check_real(&[u])?;
        if u.max_mode() != self.model.max_mode {
            return Err(Error::MismatchedModes(u.max_mode(), self.model.max_mode));
        }
        let h = self.model.dt;
        let (e, e2) = (&self.full, &self.half);

        let a = self.n(u)?;
        let ac = a.coeffs();
        let b = self.n(&self.combine(|i, c| e2[i] * (c + 0.5 * h * ac[i]), u))?;
        let bc = b.coeffs();
        let c = self.n(&self.combine(|i, x| e2[i] * x + 0.5 * h * bc[i], u))?;
        let cc = c.coeffs();
        let d = self.n(&self.combine(|i, x| e[i] * x + h * e2[i] * cc[i], u))?;
        let dc = d.coeffs();
        let mut next = self.combine(
            |i, x| e[i] * x + h / 6.0 * (e[i] * ac[i] + 2.0 * e2[i] * (bc[i] + cc[i]) + dc[i]),
            u,
        );
        next.symmetrize();

        let t = state.t + h;
        if next.coeffs().iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(blow_up(state));
        }
        let alpha_accum = state.alpha_accum + 0.5 * h * (u.l2_norm_sq() + next.l2_norm_sq());
        Ok(SimulationState {
            t,
            field: next,
            alpha_accum,
        })
    }
}

fn blow_up(last: &SimulationState) -> Error {
    let partial = Trajectory::new(vec![last.t], vec![last.field.clone()], 0.0)
        .and_then(|t| t.with_alphas(vec![last.alpha_accum]))
        .expect("single snapshot trajectory");
    Error::BlowUp {
        t: last.t,
        partial: Box::new(partial),
    }
}

/// One IFRK4 step; builds the FFT plans each call (use `Solver` in loops).
pub fn step(state: &SimulationState, model: &ModelConfig) -> Result<SimulationState> {
    Solver::new(model)?.step(state)
}

/// Run from t = 0 to `model.t_final`, recording every `sample_every`-th step
/// (and t = 0 and the final time). Snapshot times are exact multiples of dt.
///
/// On blow-up the error carries every snapshot recorded so far.
pub fn simulate(u0: &FourierField, model: &ModelConfig, sample_every: usize) -> Result<Trajectory> {
    if sample_every == 0 {
        return Err(Error::Config("sample_every must be positive".into()));
    }
    check_real(&[u0])?;
    let solver = Solver::new(model)?;
    if u0.max_mode() != model.max_mode {
        return Err(Error::MismatchedModes(u0.max_mode(), model.max_mode));
    }
    let steps = model.steps()?;
    let mut state = SimulationState::initial(u0.clone());
    let (mut times, mut snaps, mut alphas) = (vec![0.0], vec![u0.clone()], vec![0.0]);
    for i in 1..=steps {
        state = match solver.step(&state) {
            Ok(s) => s,
            Err(Error::BlowUp { t, .. }) => {
                let partial = Trajectory::new(times, snaps, model.dt)?.with_alphas(alphas)?;
                return Err(Error::BlowUp {
                    t,
                    partial: Box::new(partial),
                });
            }
            Err(e) => return Err(e),
        };
        state.t = i as f64 * model.dt;
        if i % sample_every == 0 || i == steps {
            times.push(state.t);
            snaps.push(state.field.clone());
            alphas.push(state.alpha_accum);
        }
    }
    Trajectory::new(times, snaps, model.dt)?.with_alphas(alphas)
}
