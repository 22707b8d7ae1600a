//! Smoothing effect on a small, time-resolved problem.

use mkdv_core::diagnostics::{run_smoothing, ExperimentConfig, InitialData};
use mkdv_core::evolution::ModelConfig;

fn run(dt: f64) -> Vec<Vec<f64>> {
    let cfg = ExperimentConfig {
        model: ModelConfig { max_mode: 64, dt, t_final: 0.01, ..Default::default() },
        u0_spec: InitialData::Decaying { epsilon: 0.05, sigma: 2.0 },
        amplitudes: vec![0.05, 0.1],
        modes_of_interest: vec![8, 16, 32],
        ..Default::default()
    };
    run_smoothing(&cfg).unwrap().rows.into_iter().map(|r| r.values).collect()
}

/// ε = 0.05 values at dt = 5e-8 for k = 8, 16, 32.
const GOLDEN: [f64; 3] = [9.516371e-11, 5.624875e-12, 3.525866e-13];

#[test]
fn resolved_values_scale_quartically() {
    let (coarse, fine) = (run(1e-7), run(5e-8));
    for (rc, rf) in coarse.iter().zip(&fine) {
        for (x, y) in rc.iter().zip(rf) {
            assert!((x - y).abs() <= 2e-3 * y, "not converged in dt: {x:e} vs {y:e}");
        }
    }
    for j in 0..3 {
        assert!((fine[0][j] - GOLDEN[j]).abs() <= 1e-3 * GOLDEN[j], "k index {j}: {:e}", fine[0][j]);
        let ratio = fine[1][j] / fine[0][j];
        assert!((ratio - 16.0).abs() <= 0.01, "ratio {ratio}");
    }
}
