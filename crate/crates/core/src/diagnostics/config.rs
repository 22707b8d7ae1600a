use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::evolution::ModelConfig;
use crate::fourier_core::{Exponent, FourierField};
use crate::modified_energy::EnergyConfig;

/// Initial data. Random phases are drawn from the experiment seed, so all
/// amplitudes of a sweep share one phase pattern.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    /// û(±k) = ε, i.e. u = 2ε cos 2πkx.
    SingleMode { k: i64, epsilon: f64 },
    /// |û(k)| = ε⟨k⟩^{−σ} for 1 ≤ |k| ≤ K, random phases, zero mean.
    Decaying { epsilon: f64, sigma: f64 },
    /// |û(k)| = ε for |k − center| ≤ half_width (and the mirror modes), random phases.
    WavePacket { epsilon: f64, center: i64, half_width: i64 },
    /// CSV with header `k,re,im`; rows with k ≥ 0 define the field, rows with
    /// k < 0 must be the conjugates.
    File { path: PathBuf },
}

impl Default for InitialData {
    fn default() -> Self {
        Self::SingleMode { k: 1, epsilon: 0.1 }
    }
}

fn phases(seed: u64, km: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..=km).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect()
}

impl InitialData {
    pub fn epsilon(&self) -> Option<f64> {
        match self {
            Self::SingleMode { epsilon, .. } | Self::Decaying { epsilon, .. } | Self::WavePacket { epsilon, .. } => {
                Some(*epsilon)
            }
            Self::File { .. } => None,
        }
    }

    /// The field on |k| ≤ K; `amplitude` replaces ε (for files it scales the data).
    pub fn build(&self, max_mode: usize, seed: u64, amplitude: Option<f64>) -> Result<FourierField> {
        let km = max_mode as i64;
        let eps = amplitude.or(self.epsilon()).unwrap_or(1.0);
        let f = match self {
            Self::SingleMode { k, .. } => {
                if *k < 0 || *k > km {
                    return Err(Error::Config(format!("single_mode k = {k} outside 0..={km}")));
                }
                let mut f = FourierField::zeros(max_mode);
                f.set_pair(*k, Complex64::new(eps, 0.0));
                f
            }
            Self::Decaying { sigma, .. } => {
                let th = phases(seed, max_mode);
                FourierField::from_positive_modes(max_mode, |k| {
                    if k == 0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        Complex64::from_polar(eps * (1.0 + (k * k) as f64).powf(-sigma / 2.0), th[k as usize])
                    }
                })
            }
            Self::WavePacket { center, half_width, .. } => {
                if *half_width < 0 || center - half_width < 1 || center + half_width > km {
                    return Err(Error::Config(format!(
                        "wave packet {center} ± {half_width} must lie in 1..={km}"
                    )));
                }
                let th = phases(seed, max_mode);
                FourierField::from_positive_modes(max_mode, |k| {
                    if (k - center).abs() <= *half_width {
                        Complex64::from_polar(eps, th[k as usize])
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
            }
            Self::File { path } => read_field_csv(path, max_mode)?.scaled(amplitude.unwrap_or(1.0)),
        };
        Ok(f)
    }
}

/// Read `k,re,im` rows into a Hermitian field on |k| ≤ K.
pub fn read_field_csv(path: &Path, max_mode: usize) -> Result<FourierField> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut f = FourierField::zeros(max_mode);
    let mut negative = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (line_no == 0 && line.starts_with('k')) {
            continue;
        }
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || Error::Config(format!("{}:{}: expected k,re,im", path.display(), line_no + 1));
        if parts.len() != 3 {
            return Err(bad());
        }
        let k: i64 = parts[0].parse().map_err(|_| bad())?;
        let re: f64 = parts[1].parse().map_err(|_| bad())?;
        let im: f64 = parts[2].parse().map_err(|_| bad())?;
        if k.unsigned_abs() as usize > max_mode {
            return Err(Error::Config(format!("mode {k} exceeds max_mode {max_mode}")));
        }
        let z = Complex64::new(re, im);
        if k >= 0 {
            f.set_pair(k, if k == 0 { Complex64::new(re, 0.0) } else { z });
            if k == 0 && im != 0.0 {
                return Err(Error::Config("mode 0 must be real".into()));
            }
        } else {
            negative.push((k, z));
        }
    }
    for (k, z) in negative {
        if (f.get(k) - z).norm() > 1e-12 * (1.0 + z.norm()) {
            return Err(Error::Config(format!("mode {k} is not the conjugate of mode {}", -k)));
        }
    }
    Ok(f)
}

/// Settings of the exact-identity suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentityConfig {
    /// Modes k for the C^{21,low} and B^{42} sums.
    pub modes: Vec<i64>,
    /// Lattice cutoff L for those sums; default ⌊k^{2/3}⌋.
    pub cutoff: Option<i64>,
    /// Random fields per suite.
    pub trials: usize,
    /// Max mode of the random fields.
    pub max_mode: usize,
    /// Exhaustive scan radius for the resonance identities.
    pub scan_bound: i64,
    /// Scan radius for Ω₅ additivity on Γ⁵(0).
    pub scan_bound_5: i64,
    /// Random wide triples for the two Ω₃ formulas.
    pub random_triples: usize,
    /// Random tuples for Ω₇ additivity.
    pub random_tuples: usize,
    pub tolerance: f64,
    /// Use the configured initial data instead of random fields.
    pub use_initial_data: bool,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        Self {
            modes: vec![32, 64],
            cutoff: None,
            trials: 20,
            max_mode: 128,
            scan_bound: 64,
            scan_bound_5: 12,
            random_triples: 1_000_000,
            random_tuples: 100_000,
            tolerance: 1e-10,
            use_initial_data: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixedNorm {
    pub p: Exponent,
    pub q: Exponent,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XsbIndex {
    pub s: f64,
    pub b: f64,
}

/// Norms evaluated along a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormsConfig {
    pub sobolev: Vec<f64>,
    pub mixed: Vec<MixedNorm>,
    pub xsb: Vec<XsbIndex>,
}

impl Default for NormsConfig {
    fn default() -> Self {
        let s = 1.0 / 3.0;
        Self {
            sobolev: vec![0.0, s, 0.5],
            mixed: vec![
                MixedNorm { p: Exponent::Finite(4.0), q: Exponent::Finite(20.0) },
                MixedNorm { p: Exponent::INF, q: Exponent::Finite(2.0) },
            ],
            // Z^s = X^{s−11/10, 1} ∩ L^∞H^s
            xsb: vec![XsbIndex { s: s - 1.1, b: 1.0 }],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    pub energy: EnergyConfig,
    pub u0_spec: InitialData,
    /// x-translation applied to the initial data.
    pub u0_shift: f64,
    /// Amplitude sweep (replaces ε of the profile); empty = profile ε only.
    pub amplitudes: Vec<f64>,
    pub modes_of_interest: Vec<i64>,
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Steps between recorded snapshots / energy evaluations.
    pub sample_every: usize,
    /// energy-drift: also write the per-sample energy series.
    pub write_series: bool,
    pub identities: IdentityConfig,
    pub norms: NormsConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: ModelConfig::default(),
            energy: EnergyConfig::default(),
            u0_spec: InitialData::default(),
            u0_shift: 0.0,
            amplitudes: Vec::new(),
            modes_of_interest: vec![32, 64, 128],
            seed: 0,
            output_dir: PathBuf::from("out"),
            sample_every: 100,
            write_series: false,
            identities: IdentityConfig::default(),
            norms: NormsConfig::default(),
        }
    }
}

impl ExperimentConfig {
    /// Defaults, merged with the config file, then `key.path=value`
    /// overrides, then validation.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut value = serde_json::to_value(Self::default()).expect("default config serializes");
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
            let file: Value =
                serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            if !file.is_object() {
                return Err(Error::Config(format!("{}: top level must be an object", p.display())));
            }
            merge(&mut value, file);
        }
        for o in overrides {
            apply_override(&mut value, o)?;
        }
        let cfg: Self = serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.energy.validate().map_err(|e| Error::Config(e.to_string()))?;
        if self.amplitudes.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
            return Err(Error::Config("amplitudes must be positive".into()));
        }
        let km = self.model.max_mode as i64;
        if let Some(k) = self.modes_of_interest.iter().find(|&&k| k < 1 || k > km) {
            return Err(Error::Config(format!("mode of interest {k} outside 1..={km}")));
        }
        if self.sample_every == 0 {
            return Err(Error::Config("sample_every must be positive".into()));
        }
        if !self.u0_shift.is_finite() {
            return Err(Error::Config("u0_shift must be finite".into()));
        }
        let id = &self.identities;
        if id.modes.iter().any(|&k| k < 1) || id.cutoff.is_some_and(|l| l < 1) {
            return Err(Error::Config("identity modes and cutoff must be positive".into()));
        }
        if id.max_mode == 0 || id.scan_bound < 1 || id.scan_bound_5 < 1 || !(id.tolerance > 0.0) {
            return Err(Error::Config("invalid identity settings".into()));
        }
        Ok(())
    }

    /// energy-drift corrections only act above the threshold.
    pub fn validate_drift_modes(&self) -> Result<()> {
        let km = self.model.max_mode as i64;
        match self
            .modes_of_interest
            .iter()
            .find(|&&k| k <= self.energy.k_threshold || k > km)
        {
            Some(k) => Err(Error::Config(format!(
                "energy-drift mode {k} outside ({}, {km}]",
                self.energy.k_threshold
            ))),
            None => Ok(()),
        }
    }

    /// Amplitudes of a sweep; the profile's own ε when none are given.
    pub fn sweep(&self) -> Vec<Option<f64>> {
        if self.amplitudes.is_empty() {
            vec![None]
        } else {
            self.amplitudes.iter().copied().map(Some).collect()
        }
    }

    pub fn initial_field(&self, amplitude: Option<f64>) -> Result<FourierField> {
        let f = self.u0_spec.build(self.model.max_mode, self.seed, amplitude)?;
        if self.u0_shift == 0.0 {
            return Ok(f);
        }
        let beta = self.u0_shift;
        Ok(f.apply_complex_multiplier(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 * beta)))
    }
}

/// Recursive object merge; a tagged object (one with a `profile` key) or any
/// non-object replaces the destination wholesale.
fn merge(dst: &mut Value, src: Value) {
    match (dst, src) {
        (Value::Object(d), Value::Object(s)) if !s.contains_key("profile") => {
            for (k, v) in s {
                match d.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        d.insert(k, v);
                    }
                }
            }
        }
        (d, s) => *d = s,
    }
}

/// `a.b.c=value`: value parsed as JSON, falling back to a plain string.
pub fn apply_override(root: &mut Value, spec: &str) -> Result<()> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override '{spec}' is not key=value")))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(Error::Config(format!("bad override path '{path}'")));
    }
    let mut node = root;
    for key in &keys[..keys.len() - 1] {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| Error::Config(format!("override '{path}': '{key}' is not inside an object")))?;
        node = obj.entry(key.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    node.as_object_mut()
        .ok_or_else(|| Error::Config(format!("override '{path}' does not address an object field")))?
        .insert(keys[keys.len() - 1].to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        let v = serde_json::to_value(&c).unwrap();
        let back: ExperimentConfig = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn overrides() {
        let c = ExperimentConfig::load(
            None,
            &[
                "model.max_mode=64".into(),
                "model.t_final=0.01".into(),
                "u0_spec={\"profile\":\"decaying\",\"epsilon\":0.2,\"sigma\":1.0}".into(),
                "output_dir=results".into(),
                "amplitudes=[0.05,0.1]".into(),
                "modes_of_interest=[8]".into(),
            ],
        )
        .unwrap();
        assert_eq!(c.model.max_mode, 64);
        assert_eq!(c.output_dir, PathBuf::from("results"));
        assert_eq!(c.u0_spec, InitialData::Decaying { epsilon: 0.2, sigma: 1.0 });
        assert_eq!(c.sweep(), vec![Some(0.05), Some(0.1)]);
        let c = ExperimentConfig::load(None, &["u0_spec.epsilon=0.3".into()]).unwrap();
        assert_eq!(c.u0_spec.epsilon(), Some(0.3));
    }

    #[test]
    fn file_merges_over_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.json");
        std::fs::write(
            &p,
            r#"{"model": {"dt": 5e-5}, "u0_spec": {"profile": "wave_packet", "epsilon": 0.05, "center": 20, "half_width": 1}}"#,
        )
        .unwrap();
        let c = ExperimentConfig::load(Some(&p), &["model.t_final=0.001".into()]).unwrap();
        assert_eq!(c.model.dt, 5e-5);
        assert_eq!(c.model.max_mode, 128);
        assert_eq!(c.model.t_final, 0.001);
        assert_eq!(c.u0_spec, InitialData::WavePacket { epsilon: 0.05, center: 20, half_width: 1 });
        std::fs::write(&p, "[1]").unwrap();
        assert!(ExperimentConfig::load(Some(&p), &[]).is_err());
        std::fs::write(&p, r#"{"model": {"typo": 1}}"#).unwrap();
        assert!(ExperimentConfig::load(Some(&p), &[]).is_err());
        assert!(ExperimentConfig::load(Some(&dir.path().join("missing.json")), &[]).is_err());
    }

    #[test]
    fn bad_configs() {
        for o in [
            "model.dtt=1",
            "model.dt=-1",
            "amplitudes=[0]",
            "modes_of_interest=[500]",
            "nonsense",
            "model.max_mode.x=1",
            "u0_spec.profile=spiral",
        ] {
            assert!(matches!(ExperimentConfig::load(None, &[o.into()]), Err(Error::Config(_))), "{o}");
        }
        let c = ExperimentConfig::default();
        assert!(c.validate_drift_modes().is_err());
    }

    #[test]
    fn profiles() {
        let f = InitialData::SingleMode { k: 3, epsilon: 0.1 }.build(8, 0, None).unwrap();
        assert_eq!(f.get(3), Complex64::new(0.1, 0.0));
        assert_eq!(f.get(-3), Complex64::new(0.1, 0.0));
        assert!(InitialData::SingleMode { k: 9, epsilon: 0.1 }.build(8, 0, None).is_err());

        let d = InitialData::Decaying { epsilon: 0.5, sigma: 2.0 };
        let f = d.build(32, 7, None).unwrap();
        assert!(f.is_hermitian() && f.get(0).norm() == 0.0);
        assert!((f.get(3).norm() - 0.5 / 10.0).abs() < 1e-15);
        // same seed → same phases for every amplitude
        let g = d.build(32, 7, Some(1.0)).unwrap();
        assert!(g.scaled(0.5).max_abs_diff(&f) < 1e-16);
        assert!(d.build(32, 8, None).unwrap().max_abs_diff(&f) > 1e-3);

        let p = InitialData::WavePacket { epsilon: 0.05, center: 20, half_width: 1 };
        let f = p.build(32, 1, None).unwrap();
        let support: Vec<i64> = f.modes().filter(|(_, c)| c.norm() > 0.0).map(|(k, _)| k).collect();
        assert_eq!(support, vec![-21, -20, -19, 19, 20, 21]);
        assert!(InitialData::WavePacket { epsilon: 0.05, center: 32, half_width: 1 }.build(32, 1, None).is_err());
    }

    #[test]
    fn field_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("u0.csv");
        std::fs::write(&p, "k,re,im\n0,0.5,0\n2,0.1,-0.2\n-2,0.1,0.2\n").unwrap();
        let f = InitialData::File { path: p.clone() }.build(4, 0, Some(2.0)).unwrap();
        assert_eq!(f.get(2), Complex64::new(0.2, -0.4));
        assert_eq!(f.get(-2), Complex64::new(0.2, 0.4));
        assert_eq!(f.get(0), Complex64::new(1.0, 0.0));
        std::fs::write(&p, "k,re,im\n2,0.1,-0.2\n-2,0.1,-0.2\n").unwrap();
        assert!(read_field_csv(&p, 4).is_err());
        std::fs::write(&p, "k,re,im\n7,0.1,-0.2\n").unwrap();
        assert!(read_field_csv(&p, 4).is_err());
    }

    #[test]
    fn translation() {
        let c = ExperimentConfig {
            u0_spec: InitialData::SingleMode { k: 2, epsilon: 0.1 },
            u0_shift: 0.125,
            ..Default::default()
        };
        let f = c.initial_field(None).unwrap();
        // shift by 1/8 rotates mode 2 by a quarter turn
        assert!((f.get(2) - Complex64::new(0.0, 0.1)).norm() < 1e-16);
        assert!(f.is_hermitian());
    }
}
