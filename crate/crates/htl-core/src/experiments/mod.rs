//! Monte Carlo threshold sweeps, analytic bound curves, second-moment
//! statistics, and the exact enumeration oracle.

mod curves;
mod exact;
mod moment;
mod sweep;

pub use curves::{bell_number, bound_curve};
pub use exact::{
    exact_prob_top_nonzero, exact_prob_top_nonzero_rational, parse_probability_rational,
};
pub use moment::{
    count_empty_boundaries, count_for_trial, dependency_degree_direct, moment_report, MomentStats,
};
pub use sweep::{lm_sweep, sweep, SweepConfig, SweepPoint, SweepResult, SweepTarget};
