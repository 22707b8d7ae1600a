//! `mkdv`: simulation and diagnostics runner.
//!
//! Exit codes: 0 success, 1 identity failure, 2 runtime error or blow-up,
//! 3 bad configuration.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mkdv_core::diagnostics::experiments::output_dir;
use mkdv_core::diagnostics::{
    cmd_energy_drift, cmd_identities, cmd_norms, cmd_simulate, cmd_smoothing, ExperimentConfig,
};
use mkdv_core::fourier_core::Exponent;
use mkdv_core::Error;

#[derive(Parser)]
#[command(name = "mkdv", version, about = "Periodic modified KdV: spectral runs and diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the model; write manifest.json, snapshots.csv, conservation.json.
    Simulate(Common),
    /// Run the exact-identity suite; exit 1 if any row fails.
    Identities(Common),
    /// sup_t k·||û(t,k)|² − |û₀(k)|²| per mode and amplitude.
    Smoothing(Common),
    /// Drift of the quadratic and modified energies per mode and amplitude.
    EnergyDrift(Common),
    /// Sobolev, mixed space-time and X^{s,b} norms along a run.
    Norms(Common),
}

#[derive(Args)]
struct Common {
    /// JSON config; unspecified keys take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// RNG seed (overrides `seed`).
    #[arg(long)]
    seed: Option<u64>,
    /// Dotted-path override, e.g. `model.dt=5e-5`; repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

const EXIT_FAIL: u8 = 1;
const EXIT_RUNTIME: u8 = 2;
const EXIT_CONFIG: u8 = 3;

fn load(c: &Common) -> Result<ExperimentConfig, Error> {
    let mut overrides = c.overrides.clone();
    if let Some(seed) = c.seed {
        overrides.push(format!("seed={seed}"));
    }
    ExperimentConfig::load(c.config.as_deref(), &overrides)
}

fn run(cli: Cli) -> Result<bool, Error> {
    let common = match &cli.command {
        Command::Simulate(c)
        | Command::Identities(c)
        | Command::Smoothing(c)
        | Command::EnergyDrift(c)
        | Command::Norms(c) => c,
    };
    let cfg = load(common)?;
    let out = output_dir(&cfg, common.out.as_deref());
    match cli.command {
        Command::Simulate(_) => {
            let r = cmd_simulate(&cfg, &out)?;
            println!("t = {:.6e}  snapshots = {}", r.t_reached, r.snapshots);
            println!("max relative L2 drift = {:.3e}", r.max_mass_drift);
            println!("max mean drift        = {:.3e}", r.max_mean_drift);
            Ok(true)
        }
        Command::Identities(_) => {
            let r = cmd_identities(&cfg, &out)?;
            for row in &r.rows {
                println!(
                    "{} ({}) {:<55} cases={:<10} residual={:.3e} tol={:.1e}",
                    if row.pass { "PASS" } else { "FAIL" },
                    row.suite,
                    row.name,
                    row.cases,
                    row.max_residual,
                    row.tolerance
                );
            }
            Ok(r.pass)
        }
        Command::Smoothing(_) => {
            let r = cmd_smoothing(&cfg, &out)?;
            for row in &r.rows {
                let vals: Vec<String> = row.values.iter().map(|v| format!("{v:.4e}")).collect();
                println!("amplitude {:.4e}: {}", row.amplitude, vals.join(" "));
            }
            for (k, e) in r.modes.iter().zip(&r.exponents) {
                match e {
                    Some(e) => println!("k = {k}: amplitude exponent {e:.3}"),
                    None => println!("k = {k}: amplitude exponent n/a"),
                }
            }
            Ok(true)
        }
        Command::EnergyDrift(_) => {
            let r = cmd_energy_drift(&cfg, &out)?;
            for row in &r.rows {
                println!(
                    "amplitude {:.4e} k = {}: quadratic {:.4e} modified {:.4e} ratio {}",
                    row.amplitude,
                    row.k,
                    row.quadratic_drift,
                    row.modified_drift,
                    row.ratio.map_or("n/a".into(), |x| format!("{x:.4e}"))
                );
            }
            for e in &r.exponents {
                let f = |x: Option<f64>| x.map_or("n/a".into(), |x| format!("{x:.3}"));
                println!("k = {}: exponents quadratic {} modified {}", e.k, f(e.quadratic), f(e.modified));
            }
            Ok(true)
        }
        Command::Norms(_) => {
            let r = cmd_norms(&cfg, &out)?;
            for t in &r.sobolev {
                println!("H^{:.4}: min {:.6e} max {:.6e}", t.s, t.min, t.max);
            }
            for m in &r.mixed {
                println!("L^{}_T L^{}_x = {:.6e}", exponent(m.index.p), exponent(m.index.q), m.value);
            }
            for x in &r.xsb {
                println!("X^{{{:.4},{:.4}}} = {:.6e}", x.index.s, x.index.b, x.value);
            }
            Ok(true)
        }
    }
}

fn exponent(e: Exponent) -> String {
    match e {
        Exponent::Finite(p) => format!("{p}"),
        Exponent::Infinity(_) => "inf".into(),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e @ Error::Config(_)) => {
            eprintln!("mkdv: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(e) => {
            eprintln!("mkdv: {e}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
