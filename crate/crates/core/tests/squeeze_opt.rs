//! Scheduler and optimizer behavior beyond single modules: parabolic-limit
//! agreement, budget handling, and schedule simulation equivalences.

mod common;

use common::loglog_slope;
use rotor_core::classical2d::{ClassicalEnsemble2D, ThermalSpec};
use rotor_core::pulse::{Provenance, PulseSequence};
use rotor_core::pulse_opt::{
    cold_localization, evaluate_sequence, optimize_delays, DelayVector, OptBudget, OptimizeError,
};
use rotor_core::quantum2d::QuantumState2D;
use rotor_core::squeeze::{parabolic_recurrence, run_accumulative, simulate_sequence};

/// Once squeezing is well developed, the measured inter-kick delays follow
/// the parabolic-limit prediction delta_tau = u / (P (u + w)).
#[test]
fn quantum_trace_approaches_parabolic_delays() {
    let p = 85.0;
    let (trace, _) = run_accumulative(QuantumState2D::ground(900), p, 50).unwrap();
    let mut checked = 0;
    for w in trace.steps.windows(2) {
        let (prev, next) = (&w[0], &w[1]);
        if prev.factor >= 0.05 {
            continue;
        }
        let predicted = prev.theta_variance / (p * (prev.theta_variance + prev.velocity_variance));
        let rel = (next.delta_tau - predicted).abs() / predicted;
        assert!(
            rel < 0.10,
            "step {}: delay {} vs parabolic {} (rel {rel})",
            next.index,
            next.delta_tau,
            predicted
        );
        checked += 1;
    }
    assert!(checked >= 3, "only {checked} steps reached O < 0.05");
}

/// The parabolic recurrence reproduces the measured u_k along the same
/// deep-squeezing stretch.
#[test]
fn parabolic_recurrence_tracks_quantum_variances() {
    let p = 85.0;
    let (trace, _) = run_accumulative(QuantumState2D::ground(900), p, 50).unwrap();
    let start = trace
        .steps
        .iter()
        .position(|s| s.factor < 0.055)
        .expect("deep squeezing reached");
    let u0 = trace.steps[start].theta_variance;
    let w0 = trace.steps[start].velocity_variance;
    let horizon = trace.steps.len() - start - 1;
    let predicted = parabolic_recurrence(u0, w0, horizon);
    for (k, step) in predicted.iter().zip(&trace.steps[start + 1..]) {
        let rel = (k.u - step.theta_variance).abs() / step.theta_variance;
        assert!(
            rel < 0.10,
            "step {}: u {} vs parabolic {} (rel {rel})",
            step.index,
            step.theta_variance,
            k.u
        );
    }
}

#[test]
fn budget_exhaustion_carries_best_so_far() {
    let budget = OptBudget {
        restarts: 2,
        max_iters: 3,
    };
    match optimize_delays(3, 1.0, ThermalSpec::cold(), budget, 5) {
        Err(OptimizeError::BudgetExhausted(result)) => {
            assert_eq!(result.best_delays.len(), 3);
            assert!(result.best_o.is_finite() && result.best_o < 1.0);
        }
        Ok(r) => panic!("3 iterations should not converge, got O = {}", r.best_o),
    }
}

/// The thermal Monte-Carlo objective and the cold quadrature objective
/// agree in the sigma -> 0 limit on common sequences.
#[test]
fn monte_carlo_objective_consistent_with_quadrature() {
    let delays = DelayVector::new(vec![1.841, 0.59, 0.42]);
    let n = 400_000;
    let mc = evaluate_sequence(&delays, 1.0, ThermalSpec::cold(), n, 31);
    let quad = cold_localization(&delays.0, 1.0, 4096);
    assert!(
        (mc - quad).abs() < 4.0 / (n as f64).sqrt(),
        "mc {mc} vs quadrature {quad}"
    );
}

/// Simulating an accumulative trace as a plain schedule reproduces its
/// factor sequence on both engines.
#[test]
fn schedules_replay_traces() {
    let ens = ClassicalEnsemble2D::sample_uniform(50_000, ThermalSpec::new(0.2), 8);
    let (trace, _) = run_accumulative(ens.clone(), 1.0, 5).unwrap();
    let schedule = PulseSequence::uniform_strength(1.0, &trace.delays(), Provenance::Accumulative);
    let (factors, _) = simulate_sequence(ens, &schedule);
    for (f, s) in factors.iter().zip(&trace.steps) {
        assert!((f - s.factor).abs() < 1e-12);
    }
}

/// Temperature never helps: optimized O at sigma > 0 is no better than the
/// cold optimum for the same budget and seeds.
#[test]
fn optimization_at_temperature_is_no_better_than_cold() {
    let budget = OptBudget {
        restarts: 6,
        max_iters: 800,
    };
    let cold = optimize_delays(2, 1.0, ThermalSpec::cold(), budget, 17).unwrap();
    let warm = optimize_delays(2, 1.0, ThermalSpec::new(0.5), budget, 17)
        .map(|r| r.best_o)
        .unwrap_or_else(|OptimizeError::BudgetExhausted(r)| r.best_o);
    assert!(
        warm >= cold.best_o - 3e-3,
        "warm optimum {warm} beat cold {}",
        cold.best_o
    );
}
