//! Monte Carlo threshold sweeps along a grid of `w = p n` values (or along
//! an additive window around `p = (d log n + c) / n` for the codimension-1
//! vanishing).
//!
//! Trials fan out over (grid point, trial) with per-trial derived seeds and
//! reduce by integer counting, so results are independent of thread count
//! and execution order.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{betti_codim1, betti_top, codim1_nonzero, CoefficientSpec};
use crate::model::{sample, ModelParams};
use crate::rng::derive_stream;
use crate::stats::wilson_interval;

use super::curves::bound_curve;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepTarget {
    /// Event: `beta_d > 0`.
    Top,
    /// Event: codimension-1 homology nonzero.
    Codim1,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub n: usize,
    pub d: usize,
    pub w_grid: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
    pub coeff: CoefficientSpec,
    pub target: SweepTarget,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials must be >= 1".into()));
        }
        if self.w_grid.is_empty() {
            return Err(Error::InvalidParams("empty w grid".into()));
        }
        for &w in &self.w_grid {
            if !(w >= 0.0) || w > self.n as f64 {
                return Err(Error::InvalidParams(format!(
                    "w = {w} gives p outside [0, 1] at n = {}",
                    self.n
                )));
            }
        }
        Ok(())
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    /// Grid coordinate: `w` for w-sweeps, the additive constant `c` for
    /// log-window sweeps.
    pub w: f64,
    pub p: f64,
    pub trials: u64,
    /// Trials on which the tracked event held (`beta > 0` for w-sweeps,
    /// vanishing for log-window sweeps).
    pub count_positive: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Analytic bound at this point, when one is defined.
    pub bound: Option<f64>,
    pub mean_beta: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
}

fn run_point<F>(
    params: &ModelParams,
    trials: u64,
    point_seed: u64,
    per_trial: F,
) -> (u64, u64)
where
    F: Fn(&crate::model::ComplexSample) -> (bool, u64) + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let delta = sample(params, point_seed, t);
            let (event, beta) = per_trial(&delta);
            (u64::from(event), beta)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

/// Monte Carlo estimates of `Prob(beta_target > 0)` along the `w` grid.
pub fn sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let mut points = Vec::with_capacity(config.w_grid.len());
    for (pi, &w) in config.w_grid.iter().enumerate() {
        let start = Instant::now();
        let p = w / config.n as f64;
        let params = ModelParams::new(config.n, config.d, p)?;
        let point_seed = derive_stream(config.master_seed, pi as u64);
        let coeff = config.coeff;
        let target = config.target;
        let (count, beta_sum) = run_point(&params, config.trials, point_seed, |delta| {
            match target {
                SweepTarget::Top => {
                    let beta = betti_top(delta, coeff);
                    (beta > 0, beta)
                }
                SweepTarget::Codim1 => {
                    let beta = betti_codim1(delta, coeff);
                    (codim1_nonzero(delta, coeff), beta)
                }
            }
        });
        let (ci_low, ci_high) = wilson_interval(count, config.trials);
        points.push(SweepPoint {
            w,
            p,
            trials: config.trials,
            count_positive: count,
            estimate: count as f64 / config.trials as f64,
            ci_low,
            ci_high,
            bound: match config.target {
                SweepTarget::Top => bound_curve(config.d, w),
                SweepTarget::Codim1 => None,
            },
            mean_beta: beta_sum as f64 / config.trials as f64,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    Ok(SweepResult { points })
}

/// Estimates of `Prob(H_(d-1)(GF2) = 0)` along an additive grid `c`, with
/// `p = (d log n + c) / n`: the finite-n crossover window of the
/// codimension-1 vanishing threshold.
pub fn lm_sweep(
    n: usize,
    d: usize,
    c_grid: &[f64],
    trials: u64,
    master_seed: u64,
) -> Result<SweepResult> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be >= 1".into()));
    }
    let mut points = Vec::with_capacity(c_grid.len());
    for (pi, &c) in c_grid.iter().enumerate() {
        let start = Instant::now();
        let p = (d as f64 * (n as f64).ln() + c) / n as f64;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParams(format!(
                "c = {c} gives p = {p} outside [0, 1]"
            )));
        }
        let params = ModelParams::new(n, d, p)?;
        let point_seed = derive_stream(master_seed, pi as u64);
        let (count, beta_sum) = run_point(&params, trials, point_seed, |delta| {
            let beta = betti_codim1(delta, CoefficientSpec::Gf2);
            (beta == 0, beta)
        });
        let (ci_low, ci_high) = wilson_interval(count, trials);
        points.push(SweepPoint {
            w: c,
            p,
            trials,
            count_positive: count,
            estimate: count as f64 / trials as f64,
            ci_low,
            ci_high,
            bound: None,
            mean_beta: beta_sum as f64 / trials as f64,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    Ok(SweepResult { points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph_has_no_cycles() {
        let config = SweepConfig {
            n: 100,
            d: 1,
            w_grid: vec![0.0],
            trials: 50,
            master_seed: 3,
            coeff: CoefficientSpec::Gf2,
            target: SweepTarget::Top,
        };
        let r = sweep(&config).unwrap();
        assert_eq!(r.points[0].count_positive, 0);
        assert_eq!(r.points[0].estimate, 0.0);
    }

    #[test]
    fn determinism_across_runs() {
        let config = SweepConfig {
            n: 20,
            d: 2,
            w_grid: vec![0.5, 2.0],
            trials: 200,
            master_seed: 99,
            coeff: CoefficientSpec::Gf2,
            target: SweepTarget::Top,
        };
        let a = sweep(&config).unwrap();
        let b = sweep(&config).unwrap();
        for (x, y) in a.points.iter().zip(&b.points) {
            assert_eq!(x.count_positive, y.count_positive);
            assert_eq!(x.mean_beta, y.mean_beta);
        }
    }

    #[test]
    fn rejects_bad_grid() {
        let config = SweepConfig {
            n: 10,
            d: 1,
            w_grid: vec![11.0],
            trials: 10,
            master_seed: 0,
            coeff: CoefficientSpec::Gf2,
            target: SweepTarget::Top,
        };
        assert!(sweep(&config).is_err());
    }

    #[test]
    fn lm_sweep_rejects_out_of_range_p() {
        assert!(lm_sweep(10, 2, &[100.0], 10, 0).is_err());
        assert!(lm_sweep(200, 1, &[-2.0, 2.0], 20, 1).is_ok());
    }
}
