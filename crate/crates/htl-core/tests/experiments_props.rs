//! Experiment-level invariants at small scale: oracle agreement, witness
//! soundness, monotone coupling, and the crossover direction of the
//! codimension-1 window sweep.

use htl_core::experiments::{
    count_empty_boundaries, exact_prob_top_nonzero, lm_sweep, moment_report, sweep, SweepConfig,
    SweepTarget,
};
use htl_core::homology::{betti_top, CoefficientSpec};
use htl_core::model::{sample, ModelParams};

#[test]
fn monte_carlo_matches_exact_oracle_small() {
    // fast version of the full-oracle run: one configuration, 2e4 trials
    let (n, d, p) = (5usize, 2usize, 0.5f64);
    let exact = exact_prob_top_nonzero(n, d, p, 22).unwrap();
    let trials = 20_000u64;
    let params = ModelParams::new(n, d, p).unwrap();
    let hits = (0..trials)
        .filter(|&t| betti_top(&sample(&params, 77, t), CoefficientSpec::Gf2) > 0)
        .count() as u64;
    let estimate = hits as f64 / trials as f64;
    let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
    assert!(
        (estimate - exact).abs() <= 3.0 * sigma,
        "estimate {estimate} vs exact {exact}"
    );
}

#[test]
fn witnesses_imply_nonzero_top_homology() {
    // X > 0 forces beta_d > 0: each witness is the boundary of an empty
    // (d+1)-simplex, a nonzero cycle
    let params = ModelParams::new(12, 2, 0.35).unwrap();
    let mut witnessed = 0;
    for t in 0..400 {
        let delta = sample(&params, 0xA5, t);
        if count_empty_boundaries(&delta) > 0 {
            witnessed += 1;
            assert!(betti_top(&delta, CoefficientSpec::Gf2) > 0);
        }
    }
    assert!(witnessed > 10, "want some witnessed trials, got {witnessed}");
}

#[test]
fn estimates_grow_along_the_w_grid() {
    // beta_d > 0 is monotone: estimates may only decrease within CI noise
    let config = SweepConfig {
        n: 30,
        d: 2,
        w_grid: vec![0.5, 2.0, 6.0, 15.0],
        trials: 300,
        master_seed: 5,
        coeff: CoefficientSpec::Gf2,
        target: SweepTarget::Top,
    };
    let result = sweep(&config).unwrap();
    for pair in result.points.windows(2) {
        let noise = 3.0 * (pair[0].ci_high - pair[0].ci_low + pair[1].ci_high - pair[1].ci_low) / 2.0;
        assert!(
            pair[1].estimate + noise >= pair[0].estimate,
            "estimate dropped: {} -> {}",
            pair[0].estimate,
            pair[1].estimate
        );
    }
}

#[test]
fn codim1_window_sweep_is_monotone_in_c() {
    let result = lm_sweep(60, 1, &[-3.0, 0.0, 3.0], 400, 9).unwrap();
    let est: Vec<f64> = result.points.iter().map(|p| p.estimate).collect();
    assert!(
        est[0] < est[2],
        "vanishing probability must rise across the window: {est:?}"
    );
    // p values follow (d log n + c) / n
    let expect = (60f64.ln() - 3.0) / 60.0;
    assert!((result.points[0].p - expect).abs() < 1e-12);
}

#[test]
fn moment_mean_tracks_expectation_small() {
    let stats = moment_report(20, 2, 0.15, 3000, 17).unwrap();
    let sem = (stats.var_x / stats.trials as f64).sqrt();
    assert!(
        (stats.mean_x - stats.expected_x()).abs() <= 4.0 * sem.max(1e-9),
        "mean {} vs E(X) {}",
        stats.mean_x,
        stats.expected_x()
    );
    // ratio bound evaluates per the closed form
    let w = 0.15 * 20.0;
    let expect = 4.0 * 24.0 / (w * (20.0 - 3.0_f64).powi(2));
    assert!((stats.ratio_bound().unwrap() - expect).abs() < 1e-12);
}

#[test]
fn sweep_codim1_target_runs() {
    let config = SweepConfig {
        n: 25,
        d: 1,
        w_grid: vec![2.0, 4.5],
        trials: 200,
        master_seed: 3,
        coeff: CoefficientSpec::Gf2,
        target: SweepTarget::Codim1,
    };
    let result = sweep(&config).unwrap();
    // at w < log n the graph is disconnected almost surely
    assert!(result.points[0].estimate > 0.8);
    assert!(result.points[0].bound.is_none());
}
