//! Fixed-budget optimization of the delays between identical delta-kicks,
//! minimizing the final localization factor.
//!
//! The objective at zero temperature is evaluated by deterministic
//! quadrature over the initial angle (the Lagrangian form of the branch
//! sum), so the optimizer sees a smooth noise-free function; thermal
//! objectives use common-random-numbers Monte Carlo, which is likewise a
//! fixed deterministic function of the delays for a given seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classical2d::{ClassicalEnsemble2D, ThermalSpec};
use crate::nelder_mead::{self, Options as NmOptions};
use crate::squeeze::run_accumulative;

/// Nonnegative delays between kicks; the `k`-th delay precedes the
/// `(k+1)`-th kick and the last delay precedes the measurement. A zero
/// delay merges the adjacent kicks into an effective double pulse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DelayVector(pub Vec<f64>);

impl DelayVector {
    pub fn new(delays: Vec<f64>) -> Self {
        assert!(
            delays.iter().all(|&d| d >= 0.0 && d.is_finite()),
            "delays must be nonnegative"
        );
        Self(delays)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min_delay(&self) -> f64 {
        self.0.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// Outcome of a multistart delay optimization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best_delays: DelayVector,
    pub best_o: f64,
    pub evaluations: usize,
    pub restarts: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Error)]
pub enum OptimizeError {
    #[error("no restart converged within the iteration cap; best O so far {}", .0.best_o)]
    BudgetExhausted(OptimizationResult),
}

/// Restart count and per-restart iteration cap; the evaluation budget is
/// their product times the per-iteration cost of the simplex.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OptBudget {
    pub restarts: usize,
    pub max_iters: usize,
}

impl Default for OptBudget {
    fn default() -> Self {
        Self {
            restarts: 24,
            max_iters: 2000,
        }
    }
}

/// Number of quadrature nodes for the deterministic cold objective.
const COLD_QUAD_POINTS: usize = 4096;

/// Simulate the kick/drift chain on the ensemble and return the final
/// localization factor. The ensemble depends only on `(thermal, seed)`, so
/// candidate delay vectors are compared on common random numbers.
pub fn evaluate_sequence(
    delays: &DelayVector,
    p: f64,
    thermal: ThermalSpec,
    n_particles: usize,
    seed: u64,
) -> f64 {
    let ens = ClassicalEnsemble2D::sample_uniform(n_particles, thermal, seed);
    chain_factor(ens, &delays.0, p)
}

/// Deterministic zero-temperature objective: the branch-sum localization
/// factor evaluated by uniform quadrature over the initial angle.
pub fn cold_localization(delays: &[f64], p: f64, quad_points: usize) -> f64 {
    chain_factor(ClassicalEnsemble2D::cold_grid(quad_points), delays, p)
}

fn chain_factor(mut ens: ClassicalEnsemble2D, delays: &[f64], p: f64) -> f64 {
    for &d in delays {
        ens = ens.kicked(p).drifted(d);
    }
    ens.localization_factor()
}

fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Delays produced by the accumulative strategy, used as the first
/// multistart seed (it is always a feasible point).
pub fn accumulative_delays(n_kicks: usize, p: f64, thermal: ThermalSpec) -> Vec<f64> {
    if thermal.sigma_omega == 0.0 {
        let (trace, _) = run_accumulative(ClassicalEnsemble2D::cold_grid(COLD_QUAD_POINTS), p, n_kicks)
            .expect("cold accumulative run");
        trace.delays()
    } else {
        let ens = ClassicalEnsemble2D::sample_uniform(50_000, thermal, 0x5EED);
        let (trace, _) = run_accumulative(ens, p, n_kicks).expect("thermal accumulative run");
        trace.delays()
    }
}

/// Multistart derivative-free minimization of the localization factor over
/// the nonnegative orthant of delay vectors.
///
/// Restart seeds: (a) the accumulative schedule, (b) uniform random delays
/// in `(0, 4/P]`, (c) random vectors with zeroed components probing merged
/// pulses. Negative coordinates are folded by reflection, so the search
/// space boundary `delay = 0` is crossed freely.
pub fn optimize_delays(
    n_kicks: usize,
    p: f64,
    thermal: ThermalSpec,
    budget: OptBudget,
    seed: u64,
) -> Result<OptimizationResult, OptimizeError> {
    assert!((1..=16).contains(&n_kicks), "supported kick counts: 1..=16");
    assert!(budget.restarts >= 1);
    let cold = thermal.sigma_omega == 0.0;
    let mc_particles = 100_000;
    let base_ensemble = if cold {
        ClassicalEnsemble2D::cold_grid(COLD_QUAD_POINTS)
    } else {
        ClassicalEnsemble2D::sample_uniform(mc_particles, thermal, seed)
    };

    let objective = |x: &[f64]| -> f64 {
        let folded: Vec<f64> = x.iter().map(|d| d.abs()).collect();
        chain_factor(base_ensemble.clone(), &folded, p)
    };

    let acc_seed = accumulative_delays(n_kicks, p, thermal);
    let starts: Vec<Vec<f64>> = (0..budget.restarts)
        .map(|r| {
            if r == 0 {
                acc_seed.clone()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, r as u64));
                let mut x: Vec<f64> = (0..n_kicks)
                    .map(|_| rng.random_range(0.0..4.0 / p.abs()))
                    .collect();
                if r % 2 == 0 {
                    for d in x.iter_mut() {
                        if rng.random_range(0.0..1.0) < 0.35 {
                            *d = 0.0;
                        }
                    }
                }
                x
            }
        })
        .collect();

    let opts = NmOptions {
        max_iters: budget.max_iters,
        f_tol: 1e-10,
        x_tol: 1e-8,
    };
    let outcomes: Vec<nelder_mead::Outcome> = starts
        .par_iter()
        .map(|x0| {
            let steps: Vec<f64> = x0
                .iter()
                .map(|&d| (0.25 * d).max(0.08 / p.abs()))
                .collect();
            nelder_mead::minimize(objective, x0, &steps, &opts)
        })
        .collect();

    let mut best = 0;
    for i in 1..outcomes.len() {
        if outcomes[i].f < outcomes[best].f {
            best = i;
        }
    }
    let evaluations: usize = outcomes.iter().map(|o| o.evals).sum();
    let result = OptimizationResult {
        best_delays: DelayVector::new(outcomes[best].x.iter().map(|d| d.abs()).collect()),
        best_o: outcomes[best].f,
        evaluations,
        restarts: budget.restarts,
        seed,
    };
    if outcomes.iter().any(|o| o.converged) {
        Ok(result)
    } else {
        Err(OptimizeError::BudgetExhausted(result))
    }
}

/// Side-by-side accumulative vs optimized localization for the same kick
/// count.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub kicks: usize,
    pub o_accumulative: f64,
    pub o_optimized: f64,
    pub optimized: OptimizationResult,
}

/// Run the accumulative strategy and the delay optimizer with matched
/// budgets and report both localization factors.
pub fn compare_accumulative(
    n_kicks: usize,
    p: f64,
    thermal: ThermalSpec,
    budget: OptBudget,
    seed: u64,
) -> Result<ComparisonRow, OptimizeError> {
    let acc = accumulative_delays(n_kicks, p, thermal);
    let o_acc = if thermal.sigma_omega == 0.0 {
        cold_localization(&acc, p, COLD_QUAD_POINTS)
    } else {
        evaluate_sequence(&DelayVector::new(acc), p, thermal, 1_000_000, seed)
    };
    let optimized = optimize_delays(n_kicks, p, thermal, budget, seed)?;
    Ok(ComparisonRow {
        kicks: n_kicks,
        o_accumulative: o_acc,
        o_optimized: optimized.best_o,
        optimized,
    })
}
