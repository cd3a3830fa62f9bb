//! Shared oracle tooling for the integration suites: singular quadrature,
//! slope fits, and the branch-sum probability audit.

use rotor_core::classical2d::{classical_density, find_branches, wrap_angle};
use std::f64::consts::PI;

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

/// tanh-sinh (double-exponential) quadrature over `(a, b)`; handles
/// integrable endpoint singularities.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let h = 0.02_f64;
    let t_max = 4.0_f64;
    let mut sum = 0.0;
    let mut t: f64 = -t_max;
    while t <= t_max {
        let s = (0.5 * PI * t.sinh()).tanh();
        let w = 0.5 * PI * t.cosh() / (0.5 * PI * t.sinh()).cosh().powi(2);
        if 1.0 - s.abs() > 1e-15 {
            sum += w * f(mid + half * s);
        }
        t += h;
    }
    sum * h * half
}

/// Angles at which the single-kick map has `d theta / d theta_0 = 0`,
/// wrapped to `[-pi, pi)`.
pub fn caustic_angles(tau: f64, p: f64) -> Vec<f64> {
    let pt = p * tau;
    if pt < 1.0 {
        return Vec::new();
    }
    if (pt - 1.0).abs() < 1e-12 {
        return vec![0.0];
    }
    let theta0 = (1.0 / pt).acos();
    let mapped = wrap_angle(theta0 - pt * theta0.sin());
    let mut v = vec![mapped, -mapped];
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    v
}

/// Total probability of the branch-sum density.
///
/// Panels run between caustic angles; each half-panel is integrated in the
/// cube-root variable `u = cbrt(theta - anchor)` anchored at its outer
/// end, which regularizes both the fold (`|x|^-1/2`) and the cusp
/// (`|x|^-2/3`) singularities sitting at panel boundaries.
pub fn branch_sum_total_probability(tau: f64, p: f64) -> f64 {
    let density = |theta: f64| find_branches(tau, p, theta).density();
    let mut cuts = caustic_angles(tau, p);
    cuts.insert(0, -PI);
    cuts.push(PI);
    // offsets below the anchor's floating-point granularity would evaluate
    // exactly at the caustic; the skipped mass is O(sqrt(ulp))
    let guarded = |anchor: f64, sign: f64| {
        move |u: f64| {
            let delta = u * u * u;
            if delta <= anchor.abs() * 1e-15 {
                0.0
            } else {
                density(anchor + sign * delta) * 3.0 * u * u
            }
        }
    };
    let mut total = 0.0;
    for w in cuts.windows(2) {
        if w[1] <= w[0] + 1e-14 {
            continue;
        }
        let mid = 0.5 * (w[0] + w[1]);
        // left half, singularity (if any) at w[0]
        total += tanh_sinh(guarded(w[0], 1.0), 0.0, (mid - w[0]).cbrt());
        // right half, singularity (if any) at w[1]
        total += tanh_sinh(guarded(w[1], -1.0), 0.0, (w[1] - mid).cbrt());
    }
    total
}

/// Bin-averaged branch-sum density on `bins` uniform cells over
/// `[-pi, pi)`, via 5-point Gauss-Legendre per cell. Cells within
/// `guard` bins of a caustic return `None`.
pub fn branch_density_binned(tau: f64, p: f64, bins: usize, guard: usize) -> Vec<Option<f64>> {
    const GL_X: [f64; 5] = [
        -0.906_179_845_938_664,
        -0.538_469_310_105_683,
        0.0,
        0.538_469_310_105_683,
        0.906_179_845_938_664,
    ];
    const GL_W: [f64; 5] = [
        0.236_926_885_056_189,
        0.478_628_670_499_366,
        0.568_888_888_888_889,
        0.478_628_670_499_366,
        0.236_926_885_056_189,
    ];
    let caustics = caustic_angles(tau, p);
    let width = 2.0 * PI / bins as f64;
    let profile = classical_density(
        tau,
        p,
        &(0..bins)
            .map(|i| -PI + (i as f64 + 0.5) * width)
            .collect::<Vec<_>>(),
    );
    (0..bins)
        .map(|i| {
            let lo = -PI + i as f64 * width;
            let center = lo + width / 2.0;
            let near_caustic = caustics
                .iter()
                .any(|&c| (wrap_angle(c - center)).abs() <= (guard as f64 + 0.5) * width);
            if near_caustic || profile.caustic_flags[i] {
                return None;
            }
            let mut avg = 0.0;
            for (x, w) in GL_X.iter().zip(&GL_W) {
                let theta = center + 0.5 * width * x;
                avg += w * find_branches(tau, p, theta).density();
            }
            Some(avg / 2.0)
        })
        .collect()
}
