//! Experiment runners. Each `cmd_*` writes its files into the output
//! directory and returns the report it wrote; the `run_*` functions are the
//! file-free kernels.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::{ExperimentConfig, MixedNorm, XsbIndex};
use super::identities::{run_identities, IdentityReport};
use crate::error::{Error, Result};
use crate::evolution::{simulate, ModelConfig, SimulationState, Solver};
use crate::fourier_core::{sobolev_norm, space_time_norm, xsb_norm_diagnostic, FourierField, Trajectory};
use crate::modified_energy::{EnergyConfig, ModeEnergyPlan};

pub const SMOOTHING_FOOTNOTE: &str = "The bound controlling this quantity involves Z^s_T norms that are \
not computed here; the amplitude exponent tests the quartic homogeneity of the bound, not its constant.";

/// Step from `u0` to `model.t_final`, calling `observe(step, state)` at step 0
/// and then after every step.
pub fn run_observed(
    u0: &FourierField,
    model: &ModelConfig,
    mut observe: impl FnMut(usize, &SimulationState) -> Result<()>,
) -> Result<SimulationState> {
    let solver = Solver::new(model)?;
    if u0.max_mode() != model.max_mode {
        return Err(Error::MismatchedModes(u0.max_mode(), model.max_mode));
    }
    let steps = model.steps()?;
    let mut state = SimulationState::initial(u0.clone());
    observe(0, &state)?;
    for i in 1..=steps {
        state = solver.step(&state)?;
        state.t = i as f64 * model.dt;
        observe(i, &state)?;
    }
    Ok(state)
}

fn fmt(x: f64) -> String {
    format!("{x:.17e}")
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<FileEntry> {
    std::fs::write(dir.join(name), bytes)?;
    Ok(FileEntry {
        name: name.to_string(),
        sha256: Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect(),
        columns: None,
    })
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<FileEntry> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::InvalidInput(e.to_string()))?;
    text.push('\n');
    write_file(dir, name, text.as_bytes())
}

fn prepare_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    // surface an unwritable directory before any long run
    let probe = dir.join(".mkdv-write-test");
    std::fs::write(&probe, b"")?;
    std::fs::remove_file(probe)?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FileEntry {
    pub name: String,
    pub sha256: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub columns: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: ExperimentConfig,
    pub grid_points: usize,
    pub steps: usize,
    pub files: Vec<FileEntry>,
}

fn write_manifest(dir: &Path, command: &str, cfg: &ExperimentConfig, files: Vec<FileEntry>) -> Result<()> {
    let m = Manifest {
        tool: "mkdv",
        version: env!("CARGO_PKG_VERSION"),
        command: command.to_string(),
        config: cfg.clone(),
        grid_points: Solver::new(&cfg.model)?.grid_points(),
        steps: cfg.model.steps()?,
        files,
    };
    write_json(dir, "manifest.json", &m)?;
    Ok(())
}

// ---------------------------------------------------------------- simulate

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConservationReport {
    pub amplitude: Option<f64>,
    pub t_reached: f64,
    pub snapshots: usize,
    pub mass_initial: f64,
    /// max_t |‖u(t)‖² − ‖u₀‖²| / ‖u₀‖² (absolute when u₀ = 0).
    pub max_mass_drift: f64,
    /// max_t |û(t,0) − û(0,0)|
    pub max_mean_drift: f64,
    pub blow_up_at: Option<f64>,
}

pub fn conservation(traj: &Trajectory, amplitude: Option<f64>, blow_up_at: Option<f64>) -> Result<ConservationReport> {
    let snaps = traj.snapshots();
    let u0 = snaps.first().ok_or(Error::EmptyTrajectory)?;
    let m0 = u0.l2_norm_sq();
    let scale = if m0 > 0.0 { m0 } else { 1.0 };
    let mass = snaps.iter().map(|s| (s.l2_norm_sq() - m0).abs() / scale).fold(0.0, f64::max);
    let mean = snaps.iter().map(|s| (s.get(0) - u0.get(0)).norm()).fold(0.0, f64::max);
    Ok(ConservationReport {
        amplitude,
        t_reached: traj.last().map_or(0.0, |(t, _)| t),
        snapshots: traj.len(),
        mass_initial: m0,
        max_mass_drift: mass,
        max_mean_drift: mean,
        blow_up_at,
    })
}

/// `t,k,re,im` for k ≥ 0 (negative modes are the conjugates).
pub fn snapshots_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,k,re,im\n");
    for (t, s) in traj.times().iter().zip(traj.snapshots()) {
        for k in 0..=s.max_mode() as i64 {
            let c = s.get(k);
            let _ = writeln!(out, "{},{k},{},{}", fmt(*t), fmt(c.re), fmt(c.im));
        }
    }
    out
}

/// Run the configured model (first amplitude of the sweep) and write
/// manifest.json, snapshots.csv and conservation.json. On blow-up the partial
/// trajectory is written and the error returned.
pub fn cmd_simulate(cfg: &ExperimentConfig, out: &Path) -> Result<ConservationReport> {
    prepare_dir(out)?;
    let amp = cfg.sweep()[0];
    let u0 = cfg.initial_field(amp)?;
    let (traj, blow) = match simulate(&u0, &cfg.model, cfg.sample_every) {
        Ok(t) => (t, None),
        Err(Error::BlowUp { t, partial }) => (*partial, Some(t)),
        Err(e) => return Err(e),
    };
    let report = conservation(&traj, amp, blow)?;
    let mut csv = write_file(out, "snapshots.csv", snapshots_csv(&traj).as_bytes())?;
    csv.columns = Some("t: time; k: mode (k >= 0); re, im: coefficient of exp(2 pi i k x)".into());
    let cons = write_json(out, "conservation.json", &report)?;
    write_manifest(out, "simulate", cfg, vec![csv, cons])?;
    match blow {
        Some(t) => Err(Error::BlowUp { t, partial: Box::new(traj) }),
        None => Ok(report),
    }
}

// --------------------------------------------------------------- smoothing

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothingRow {
    pub amplitude: f64,
    /// sup_t k·||û(t,k)|² − |û₀(k)|²| for each mode of interest.
    pub values: Vec<f64>,
    /// max/min of `values` (None if some value is 0).
    pub max_over_min: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothingReport {
    pub modes: Vec<i64>,
    pub rows: Vec<SmoothingRow>,
    /// Least-squares slope of log(value) against log(amplitude), per mode.
    pub exponents: Vec<Option<f64>>,
    pub footnote: &'static str,
}

/// sup over all steps of k·||û(t,k)|² − |û₀(k)|²|.
pub fn smoothing_sup(u0: &FourierField, model: &ModelConfig, modes: &[i64]) -> Result<Vec<f64>> {
    let base: Vec<f64> = modes.iter().map(|&k| u0.get(k).norm_sqr()).collect();
    let mut sup = vec![0.0f64; modes.len()];
    run_observed(u0, model, |_, s| {
        for ((v, &k), b) in sup.iter_mut().zip(modes).zip(&base) {
            *v = v.max(k as f64 * (s.field.get(k).norm_sqr() - b).abs());
        }
        Ok(())
    })?;
    Ok(sup)
}

fn amplitude_of(cfg: &ExperimentConfig, a: Option<f64>) -> f64 {
    a.or(cfg.u0_spec.epsilon()).unwrap_or(1.0)
}

/// Slope of the least-squares line through (ln x, ln y); None with fewer
/// than two positive points or a single distinct x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx)
}

fn max_over_min(v: &[f64]) -> Option<f64> {
    let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = v.iter().cloned().fold(0.0, f64::max);
    (min > 0.0).then(|| max / min)
}

pub fn run_smoothing(cfg: &ExperimentConfig) -> Result<SmoothingReport> {
    let modes = cfg.modes_of_interest.clone();
    let rows = cfg
        .sweep()
        .into_par_iter()
        .map(|a| {
            let u0 = cfg.initial_field(a)?;
            let values = smoothing_sup(&u0, &cfg.model, &modes)?;
            Ok(SmoothingRow {
                amplitude: amplitude_of(cfg, a),
                max_over_min: max_over_min(&values),
                values,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let amps: Vec<f64> = rows.iter().map(|r| r.amplitude).collect();
    let exponents = (0..modes.len())
        .map(|j| loglog_slope(&amps, &rows.iter().map(|r| r.values[j]).collect::<Vec<_>>()))
        .collect();
    Ok(SmoothingReport { modes, rows, exponents, footnote: SMOOTHING_FOOTNOTE })
}

pub fn cmd_smoothing(cfg: &ExperimentConfig, out: &Path) -> Result<SmoothingReport> {
    prepare_dir(out)?;
    let r = run_smoothing(cfg)?;
    let mut csv = String::from("amplitude,k,sup_drift\n");
    for row in &r.rows {
        for (k, v) in r.modes.iter().zip(&row.values) {
            let _ = writeln!(csv, "{},{k},{}", fmt(row.amplitude), fmt(*v));
        }
    }
    let mut c = write_file(out, "smoothing.csv", csv.as_bytes())?;
    c.columns = Some("amplitude; k; sup_drift = sup_t k*| |u(t,k)|^2 - |u0(k)|^2 |".into());
    let j = write_json(out, "smoothing.json", &r)?;
    write_manifest(out, "smoothing", cfg, vec![c, j])?;
    Ok(r)
}

// ------------------------------------------------------------ energy-drift

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DriftRow {
    pub amplitude: f64,
    pub k: i64,
    /// max_t |q(t) − q(0)|, q = k/2·|û(k)|²
    pub quadratic_drift: f64,
    /// max_t |𝓔ₖ(t) − 𝓔ₖ(0)|
    pub modified_drift: f64,
    pub ratio: Option<f64>,
    /// max_t of |𝓔^{3,1}|, |𝓔^{3,2}|, |𝓔⁵|
    pub max_e31: f64,
    pub max_e32: f64,
    pub max_e5: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DriftExponent {
    pub k: i64,
    pub quadratic: Option<f64>,
    pub modified: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DriftReport {
    pub rows: Vec<DriftRow>,
    pub exponents: Vec<DriftExponent>,
    pub sample_every: usize,
}

/// One time series sample per mode: (t, report).
pub type EnergySeries = Vec<Vec<(f64, crate::modified_energy::EnergyReport)>>;

/// Energy drifts along one run, energies evaluated every `every` steps and at
/// the final step. Optionally returns the sampled series.
pub fn energy_drift_run(
    u0: &FourierField,
    model: &ModelConfig,
    energy: &EnergyConfig,
    modes: &[i64],
    every: usize,
    keep_series: bool,
) -> Result<(Vec<DriftRow>, EnergySeries)> {
    if every == 0 {
        return Err(Error::Config("sample_every must be positive".into()));
    }
    let plans = modes
        .iter()
        .map(|&k| ModeEnergyPlan::new(k, model.max_mode, energy))
        .collect::<Result<Vec<_>>>()?;
    let steps = model.steps()?;
    let first = plans.iter().map(|p| p.eval(u0)).collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<DriftRow> = first
        .iter()
        .map(|e| DriftRow {
            amplitude: 0.0,
            k: e.k,
            quadratic_drift: 0.0,
            modified_drift: 0.0,
            ratio: None,
            max_e31: e.e31.abs(),
            max_e32: e.e32.abs(),
            max_e5: e.e5.abs(),
        })
        .collect();
    let mut series: EnergySeries = vec![Vec::new(); modes.len()];
    if keep_series {
        for (s, e) in series.iter_mut().zip(&first) {
            s.push((0.0, *e));
        }
    }
    run_observed(u0, model, |i, s| {
        if i == 0 || (i % every != 0 && i != steps) {
            return Ok(());
        }
        for (j, p) in plans.iter().enumerate() {
            let e = p.eval(&s.field)?;
            let r = &mut rows[j];
            r.quadratic_drift = r.quadratic_drift.max((e.quadratic - first[j].quadratic).abs());
            r.modified_drift = r.modified_drift.max((e.total - first[j].total).abs());
            r.max_e31 = r.max_e31.max(e.e31.abs());
            r.max_e32 = r.max_e32.max(e.e32.abs());
            r.max_e5 = r.max_e5.max(e.e5.abs());
            if keep_series {
                series[j].push((s.t, e));
            }
        }
        Ok(())
    })?;
    for r in &mut rows {
        r.ratio = (r.quadratic_drift > 0.0).then(|| r.modified_drift / r.quadratic_drift);
    }
    Ok((rows, series))
}

pub fn run_energy_drift(cfg: &ExperimentConfig) -> Result<(DriftReport, Vec<(f64, EnergySeries)>)> {
    cfg.validate_drift_modes()?;
    let runs = cfg
        .sweep()
        .into_par_iter()
        .map(|a| {
            let u0 = cfg.initial_field(a)?;
            let (mut rows, series) = energy_drift_run(
                &u0,
                &cfg.model,
                &cfg.energy,
                &cfg.modes_of_interest,
                cfg.sample_every,
                cfg.write_series,
            )?;
            let amp = amplitude_of(cfg, a);
            rows.iter_mut().for_each(|r| r.amplitude = amp);
            Ok((rows, (amp, series)))
        })
        .collect::<Result<Vec<_>>>()?;
    let (rows, series): (Vec<Vec<DriftRow>>, Vec<_>) = runs.into_iter().unzip();
    let rows: Vec<DriftRow> = rows.into_iter().flatten().collect();
    let exponents = cfg
        .modes_of_interest
        .iter()
        .map(|&k| {
            let sel: Vec<&DriftRow> = rows.iter().filter(|r| r.k == k).collect();
            let amps: Vec<f64> = sel.iter().map(|r| r.amplitude).collect();
            DriftExponent {
                k,
                quadratic: loglog_slope(&amps, &sel.iter().map(|r| r.quadratic_drift).collect::<Vec<_>>()),
                modified: loglog_slope(&amps, &sel.iter().map(|r| r.modified_drift).collect::<Vec<_>>()),
            }
        })
        .collect();
    Ok((DriftReport { rows, exponents, sample_every: cfg.sample_every }, series))
}

pub fn cmd_energy_drift(cfg: &ExperimentConfig, out: &Path) -> Result<DriftReport> {
    prepare_dir(out)?;
    let (r, series) = run_energy_drift(cfg)?;
    let mut csv = String::from("amplitude,k,quadratic_drift,modified_drift,ratio\n");
    for row in &r.rows {
        let ratio = row.ratio.map_or_else(|| "nan".to_string(), fmt);
        let _ = writeln!(
            csv,
            "{},{},{},{},{ratio}",
            fmt(row.amplitude),
            row.k,
            fmt(row.quadratic_drift),
            fmt(row.modified_drift)
        );
    }
    let mut files = vec![write_file(out, "drift.csv", csv.as_bytes())?];
    files[0].columns = Some("amplitude; k; max_t drift of k/2|u(k)|^2; max_t drift of modified energy; ratio".into());
    if cfg.write_series {
        let mut s = String::from("amplitude,k,t,quadratic,e31,e32,e5,total\n");
        for (amp, per_mode) in &series {
            for e in per_mode.iter().flatten() {
                let (t, e) = e;
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    fmt(*amp),
                    e.k,
                    fmt(*t),
                    fmt(e.quadratic),
                    fmt(e.e31),
                    fmt(e.e32),
                    fmt(e.e5),
                    fmt(e.total)
                );
            }
        }
        let mut f = write_file(out, "energy_series.csv", s.as_bytes())?;
        f.columns = Some("amplitude; k; t; quadratic, e31, e32, e5, total energy pieces".into());
        files.push(f);
    }
    files.push(write_json(out, "drift.json", &r)?);
    write_manifest(out, "energy-drift", cfg, files)?;
    Ok(r)
}

// ------------------------------------------------------------------- norms

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SobolevTrace {
    pub s: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixedNormValue {
    #[serde(flatten)]
    pub index: MixedNorm,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XsbValue {
    #[serde(flatten)]
    pub index: XsbIndex,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormsReport {
    pub times: Vec<f64>,
    /// values[i][j] = ‖u(tⱼ)‖_{H^{sᵢ}}
    pub sobolev_values: Vec<Vec<f64>>,
    pub sobolev: Vec<SobolevTrace>,
    pub mixed: Vec<MixedNormValue>,
    pub xsb: Vec<XsbValue>,
}

pub fn norms_of(traj: &Trajectory, cfg: &super::config::NormsConfig) -> Result<NormsReport> {
    let sobolev_values: Vec<Vec<f64>> = cfg
        .sobolev
        .iter()
        .map(|&s| traj.snapshots().iter().map(|u| sobolev_norm(u, s)).collect())
        .collect();
    let sobolev = cfg
        .sobolev
        .iter()
        .zip(&sobolev_values)
        .map(|(&s, v)| SobolevTrace {
            s,
            min: v.iter().cloned().fold(f64::INFINITY, f64::min),
            max: v.iter().cloned().fold(0.0, f64::max),
        })
        .collect();
    let mixed = cfg
        .mixed
        .iter()
        .map(|m| Ok(MixedNormValue { index: *m, value: space_time_norm(traj, m.p, m.q)? }))
        .collect::<Result<_>>()?;
    let xsb = cfg
        .xsb
        .iter()
        .map(|x| Ok(XsbValue { index: *x, value: xsb_norm_diagnostic(traj, x.s, x.b)? }))
        .collect::<Result<_>>()?;
    Ok(NormsReport { times: traj.times().to_vec(), sobolev_values, sobolev, mixed, xsb })
}

pub fn run_norms(cfg: &ExperimentConfig) -> Result<NormsReport> {
    let u0 = cfg.initial_field(cfg.sweep()[0])?;
    let traj = simulate(&u0, &cfg.model, cfg.sample_every)?;
    norms_of(&traj, &cfg.norms)
}

pub fn cmd_norms(cfg: &ExperimentConfig, out: &Path) -> Result<NormsReport> {
    prepare_dir(out)?;
    let r = run_norms(cfg)?;
    let mut csv = String::from("t");
    for s in &cfg.norms.sobolev {
        let _ = write!(csv, ",H^{s}");
    }
    csv.push('\n');
    for (j, t) in r.times.iter().enumerate() {
        csv.push_str(&fmt(*t));
        for v in &r.sobolev_values {
            let _ = write!(csv, ",{}", fmt(v[j]));
        }
        csv.push('\n');
    }
    let mut c = write_file(out, "hs_trace.csv", csv.as_bytes())?;
    c.columns = Some("t; H^s norm for each configured s".into());
    let j = write_json(out, "norms.json", &r)?;
    write_manifest(out, "norms", cfg, vec![c, j])?;
    Ok(r)
}

// -------------------------------------------------------------- identities

pub fn cmd_identities(cfg: &ExperimentConfig, out: &Path) -> Result<IdentityReport> {
    prepare_dir(out)?;
    let data = if cfg.identities.use_initial_data {
        Some(cfg.initial_field(cfg.sweep()[0])?)
    } else {
        None
    };
    let r = run_identities(&cfg.identities, cfg.seed, data.as_ref())?;
    let mut csv = String::from("suite,name,cases,max_residual,tolerance,pass\n");
    for row in &r.rows {
        let _ = writeln!(
            csv,
            "{},\"{}\",{},{},{},{}",
            row.suite,
            row.name,
            row.cases,
            fmt(row.max_residual),
            fmt(row.tolerance),
            row.pass
        );
    }
    let mut c = write_file(out, "identities.csv", csv.as_bytes())?;
    c.columns = Some("suite (a-f); name; cases; max relative residual; tolerance; pass".into());
    let j = write_json(out, "identities.json", &r)?;
    write_manifest(out, "identities", cfg, vec![c, j])?;
    Ok(r)
}

/// Output directory: the CLI flag wins over the config.
pub fn output_dir(cfg: &ExperimentConfig, flag: Option<&Path>) -> PathBuf {
    flag.map(Path::to_path_buf).unwrap_or_else(|| cfg.output_dir.clone())
}
