//! Focusing-time prediction for arbitrary pulse shapes from the linearized
//! small-angle equation `theta'' + eps(tau) theta = 0`.
//!
//! By linearity the zeros do not depend on the initial angle, so the solver
//! normalizes to `theta(tau0) = 1`, `theta'(tau0) = 0` and reports every
//! simple zero in the window. Integration is an adaptive Dormand-Prince
//! 5(4) pair split at envelope breakpoints; zeros are bracketed by sign
//! changes between accepted steps and pinned by bisection to 1e-12.

use thiserror::Error;

use crate::pulse::PulseEnvelope;

#[derive(Debug, Clone, Error)]
pub enum FocalError {
    #[error("no focal point: theta has no sign change in the window")]
    NoFocus,
}

/// Focal times plus integrator statistics.
#[derive(Debug, Clone)]
pub struct FocusReport {
    /// Strictly increasing times with `theta(tau_f) = 0` and
    /// `theta'(tau_f) != 0`.
    pub focal_times: Vec<f64>,
    pub accepted_steps: usize,
    pub rhs_evals: usize,
}

/// Solve with the normalized initial condition and report all zeros in
/// `[tau0, tau_end]`.
pub fn solve_linearized(
    pulse: &PulseEnvelope,
    tau0: f64,
    tau_end: f64,
    tol: f64,
) -> Result<FocusReport, FocalError> {
    solve_linearized_from(pulse, tau0, tau_end, tol, 1.0)
}

/// Same solver with an explicit initial angle; zeros are theta0-independent
/// and this entry point exists to check exactly that.
pub fn solve_linearized_from(
    pulse: &PulseEnvelope,
    tau0: f64,
    tau_end: f64,
    tol: f64,
    theta0: f64,
) -> Result<FocusReport, FocalError> {
    assert!(tau_end > tau0 && tol > 0.0 && theta0 != 0.0);
    let mut y = [theta0, 0.0];
    let mut zeros = Vec::new();
    let mut accepted = 0usize;
    let mut evals = 0usize;

    for (a, b, impulse) in segments(pulse, tau0, tau_end) {
        if let Some(p) = impulse {
            // delta kick: instantaneous velocity change -P * theta
            y[1] -= p * y[0];
            continue;
        }
        integrate_segment(pulse, a, b, &mut y, tol, &mut zeros, &mut accepted, &mut evals);
    }

    if zeros.is_empty() {
        return Err(FocalError::NoFocus);
    }
    Ok(FocusReport {
        focal_times: zeros,
        accepted_steps: accepted,
        rhs_evals: evals,
    })
}

/// Sample `(tau, theta, dtheta)` on a uniform grid, for file export.
pub fn trajectory(
    pulse: &PulseEnvelope,
    tau0: f64,
    tau_end: f64,
    samples: usize,
) -> Vec<(f64, f64, f64)> {
    assert!(samples >= 2);
    let h = (tau_end - tau0) / (samples - 1) as f64;
    let mut y = [1.0, 0.0];
    let mut out = Vec::with_capacity(samples);
    out.push((tau0, y[0], y[1]));
    let deltas: Vec<(f64, f64)> = match pulse {
        PulseEnvelope::Delta { strength, time } => vec![(*time, *strength)],
        _ => Vec::new(),
    };
    for i in 1..samples {
        let a = tau0 + (i - 1) as f64 * h;
        let b = tau0 + i as f64 * h;
        for &(t, p) in &deltas {
            if a < t && t <= b {
                rk4_advance(pulse, a, t, &mut y, 64);
                y[1] -= p * y[0];
                rk4_advance(pulse, t, b, &mut y, 64);
            }
        }
        if deltas.iter().all(|&(t, _)| !(a < t && t <= b)) {
            rk4_advance(pulse, a, b, &mut y, 64);
        }
        out.push((b, y[0], y[1]));
    }
    out
}

/// Split the window at envelope breakpoints; delta kicks appear as zero-
/// length impulse segments.
fn segments(pulse: &PulseEnvelope, tau0: f64, tau_end: f64) -> Vec<(f64, f64, Option<f64>)> {
    let mut cuts: Vec<f64> = pulse
        .breakpoints()
        .into_iter()
        .filter(|&t| t > tau0 && t < tau_end)
        .collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let mut out = Vec::new();
    let mut prev = tau0;
    for &c in &cuts {
        if c > prev {
            out.push((prev, c, None));
        }
        if let PulseEnvelope::Delta { strength, time } = pulse {
            if (*time - c).abs() < 1e-300 {
                out.push((c, c, Some(*strength)));
            }
        }
        prev = c;
    }
    if tau_end > prev {
        out.push((prev, tau_end, None));
    }
    out
}

fn rhs(pulse: &PulseEnvelope, t: f64, y: [f64; 2]) -> [f64; 2] {
    [y[1], -pulse.eval(t) * y[0]]
}

/// Largest step that cannot jump across the envelope structure.
fn max_step(pulse: &PulseEnvelope, window: f64) -> f64 {
    let scale = match pulse {
        PulseEnvelope::Gaussian { width, .. } => width / 4.0,
        PulseEnvelope::Step { start, stop, .. } => ((stop - start) / 4.0).max(window / 256.0),
        PulseEnvelope::Tabulated { times, .. } => {
            let mut m = f64::INFINITY;
            for w in times.windows(2) {
                m = m.min(w[1] - w[0]);
            }
            m
        }
        PulseEnvelope::Delta { .. } => f64::INFINITY,
    };
    scale.min(window / 16.0)
}

// Dormand-Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[allow(clippy::too_many_arguments)]
fn integrate_segment(
    pulse: &PulseEnvelope,
    a: f64,
    b: f64,
    y: &mut [f64; 2],
    tol: f64,
    zeros: &mut Vec<f64>,
    accepted: &mut usize,
    evals: &mut usize,
) {
    let h_cap = max_step(pulse, b - a);
    let mut t = a;
    let mut h = ((b - a) / 64.0).min(h_cap);
    while t < b - 1e-15 {
        h = h.min(b - t);
        let mut k = [[0.0; 2]; 7];
        k[0] = rhs(pulse, t, *y);
        for s in 1..7 {
            let mut ys = *y;
            for (j, kj) in k.iter().enumerate().take(s) {
                ys[0] += h * A[s][j] * kj[0];
                ys[1] += h * A[s][j] * kj[1];
            }
            k[s] = rhs(pulse, t + C[s] * h, ys);
        }
        *evals += 7;
        let mut y5 = *y;
        let mut y4 = *y;
        for (j, kj) in k.iter().enumerate() {
            y5[0] += h * B5[j] * kj[0];
            y5[1] += h * B5[j] * kj[1];
            y4[0] += h * B4[j] * kj[0];
            y4[1] += h * B4[j] * kj[1];
        }
        let scale0 = tol * (1.0 + y[0].abs().max(y5[0].abs()));
        let scale1 = tol * (1.0 + y[1].abs().max(y5[1].abs()));
        let err = ((y5[0] - y4[0]) / scale0)
            .abs()
            .max(((y5[1] - y4[1]) / scale1).abs());
        if err <= 1.0 {
            let y_prev = *y;
            let t_prev = t;
            *y = y5;
            t += h;
            *accepted += 1;
            if y_prev[0] * y[0] < 0.0 {
                let tz = bisect_zero(pulse, t_prev, y_prev, t);
                // simple zeros only
                let mut yz = y_prev;
                rk4_advance(pulse, t_prev, tz, &mut yz, 64);
                if yz[1].abs() > 0.0 {
                    zeros.push(tz);
                }
            }
        }
        let grow = 0.9 * (1.0 / err.max(1e-10)).powf(0.2);
        h *= grow.clamp(0.2, 5.0);
        h = h.min(h_cap);
    }
}

/// theta at time `t` inside an accepted step, by fixed-step RK4 from the
/// stored left state.
fn theta_at(pulse: &PulseEnvelope, t_left: f64, y_left: [f64; 2], t: f64) -> f64 {
    let mut y = y_left;
    rk4_advance(pulse, t_left, t, &mut y, 64);
    y[0]
}

fn rk4_advance(pulse: &PulseEnvelope, from: f64, to: f64, y: &mut [f64; 2], steps: usize) {
    if to <= from {
        return;
    }
    let h = (to - from) / steps as f64;
    let mut t = from;
    for _ in 0..steps {
        let k1 = rhs(pulse, t, *y);
        let k2 = rhs(pulse, t + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
        let k3 = rhs(pulse, t + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
        let k4 = rhs(pulse, t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        y[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        y[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        t += h;
    }
}

fn bisect_zero(pulse: &PulseEnvelope, t_left: f64, y_left: [f64; 2], t_right: f64) -> f64 {
    let mut a = t_left;
    let mut b = t_right;
    let fa = y_left[0];
    for _ in 0..100 {
        let mid = 0.5 * (a + b);
        let fm = theta_at(pulse, t_left, y_left, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
        } else {
            b = mid;
        }
        if b - a < 1e-12 {
            break;
        }
    }
    0.5 * (a + b)
}
