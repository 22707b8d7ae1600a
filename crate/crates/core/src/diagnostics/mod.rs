//! Experiment configuration, the exact-identity suite and the experiment
//! runners behind the `mkdv` CLI.

pub mod config;
pub mod experiments;
pub mod identities;

pub use config::{apply_override, ExperimentConfig, IdentityConfig, InitialData, NormsConfig};
pub use experiments::{
    cmd_energy_drift, cmd_identities, cmd_norms, cmd_simulate, cmd_smoothing, energy_drift_run, loglog_slope,
    run_energy_drift, run_norms, run_observed, run_smoothing, smoothing_sup, ConservationReport, DriftReport,
    DriftRow, NormsReport, SmoothingReport,
};
pub use identities::{run_identities, IdentityReport, IdentityRow};
