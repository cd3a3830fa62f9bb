//! Classical ensemble dynamics of the 2D kicked rotor.
//!
//! Equivalently describes atoms in a pulsed optical lattice through the
//! relabeling `theta = 2 k_l x`; see [`crate::thermal`] for the temperature
//! mapping. Angles are always stored wrapped to `[-pi, pi)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Fixed chunk length for parallel reductions; partial sums are combined in
/// chunk order so results do not depend on the worker count.
const CHUNK: usize = 1 << 12;

/// Wrap an angle to `[-pi, pi)`.
pub fn wrap_angle(x: f64) -> f64 {
    let w = x - (2.0 * PI) * ((x + PI) / (2.0 * PI)).floor();
    // guard against the boundary case w == pi from rounding
    if w >= PI {
        w - 2.0 * PI
    } else {
        w
    }
}

fn mix_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 of the (seed, index) pair
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Thermal spread of the initial angular velocity (gaussian).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSpec {
    pub sigma_omega: f64,
}

impl ThermalSpec {
    pub fn cold() -> Self {
        Self { sigma_omega: 0.0 }
    }

    pub fn new(sigma_omega: f64) -> Self {
        assert!(sigma_omega >= 0.0);
        Self { sigma_omega }
    }
}

/// Monte-Carlo ensemble of planar rotors `(theta, omega)`.
#[derive(Debug, Clone)]
pub struct ClassicalEnsemble2D {
    theta: Vec<f64>,
    omega: Vec<f64>,
    tau: f64,
    seed: u64,
}

impl ClassicalEnsemble2D {
    /// `n` particles with `theta_0` i.i.d. uniform on `[-pi, pi)` and
    /// `omega_0` gaussian. Each particle owns its RNG stream derived from
    /// `(seed, index)`, so the sample is independent of how the work is
    /// partitioned.
    pub fn sample_uniform(n: usize, thermal: ThermalSpec, seed: u64) -> Self {
        assert!(n >= 1);
        let sigma = thermal.sigma_omega;
        let pairs: Vec<(f64, f64)> = (0..n as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, i));
                let theta = rng.random_range(-PI..PI);
                let omega = if sigma > 0.0 {
                    sigma * rng.sample::<f64, _>(StandardNormal)
                } else {
                    0.0
                };
                (theta, omega)
            })
            .collect();
        let (theta, omega) = pairs.into_iter().unzip();
        Self {
            theta,
            omega,
            tau: 0.0,
            seed,
        }
    }

    /// Deterministic zero-temperature ensemble: midpoints of a uniform
    /// `theta_0` grid with `omega = 0`. The ensemble mean over this grid is
    /// the periodic-trapezoid quadrature of the corresponding phase-space
    /// integral, so cold observables evaluate without Monte-Carlo noise.
    pub fn cold_grid(n: usize) -> Self {
        assert!(n >= 1);
        let h = 2.0 * PI / n as f64;
        let theta = (0..n).map(|i| -PI + (i as f64 + 0.5) * h).collect();
        Self {
            theta,
            omega: vec![0.0; n],
            tau: 0.0,
            seed: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn thetas(&self) -> &[f64] {
        &self.theta
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omega
    }

    /// Kick of strength `p`: `omega <- omega - p sin(theta)`, angles
    /// untouched.
    pub fn kicked(mut self, p: f64) -> Self {
        self.omega
            .par_iter_mut()
            .zip(self.theta.par_iter())
            .for_each(|(w, &t)| *w -= p * t.sin());
        self
    }

    /// Free drift by `dtau >= 0`: `theta <- wrap(theta + omega dtau)`.
    pub fn drifted(mut self, dtau: f64) -> Self {
        assert!(dtau >= 0.0);
        self.theta
            .par_iter_mut()
            .zip(self.omega.par_iter())
            .for_each(|(t, &w)| *t = wrap_angle(*t + w * dtau));
        self.tau += dtau;
        self
    }

    /// Localization (orientation) factor `O = 1 - mean cos(theta)`.
    pub fn localization_factor(&self) -> f64 {
        assert!(!self.is_empty());
        let partials: Vec<f64> = self
            .theta
            .par_chunks(CHUNK)
            .map(|c| c.iter().map(|t| t.cos()).sum::<f64>())
            .collect();
        1.0 - partials.iter().sum::<f64>() / self.len() as f64
    }

    /// `O(tau0 + m dt)` for `m = 0..count` without mutating the ensemble.
    ///
    /// Uses one unit-complex rotation per particle per sample instead of a
    /// fresh cosine, which keeps dense scans over candidate drift times
    /// affordable.
    pub fn localization_profile(&self, t0: f64, dt: f64, count: usize) -> Vec<f64> {
        let partials: Vec<Vec<f64>> = self
            .theta
            .par_chunks(CHUNK)
            .zip(self.omega.par_chunks(CHUNK))
            .map(|(ts, ws)| {
                let mut acc = vec![0.0; count];
                for (&t, &w) in ts.iter().zip(ws) {
                    let (mut zre, mut zim) = {
                        let a = t + w * t0;
                        (a.cos(), a.sin())
                    };
                    let (rre, rim) = {
                        let a = w * dt;
                        (a.cos(), a.sin())
                    };
                    for a in acc.iter_mut() {
                        *a += zre;
                        let nre = zre * rre - zim * rim;
                        zim = zre * rim + zim * rre;
                        zre = nre;
                    }
                }
                acc
            })
            .collect();
        let n = self.len() as f64;
        (0..count)
            .map(|m| 1.0 - partials.iter().map(|p| p[m]).sum::<f64>() / n)
            .collect()
    }

    /// Sample variance of `omega`.
    pub fn omega_variance(&self) -> f64 {
        let n = self.len() as f64;
        let mean: f64 = self.omega.iter().sum::<f64>() / n;
        self.omega.iter().map(|w| (w - mean) * (w - mean)).sum::<f64>() / n
    }

    /// Mean of `omega^2` (twice the mean kinetic energy).
    pub fn mean_omega_sq(&self) -> f64 {
        self.omega.iter().map(|w| w * w).sum::<f64>() / self.len() as f64
    }

    /// Mean of the wrapped `theta^2`.
    pub fn theta_variance(&self) -> f64 {
        self.theta.iter().map(|t| t * t).sum::<f64>() / self.len() as f64
    }

    /// Normalized bin-count density over `[-pi, pi)`; integrates to 1.
    pub fn histogram(&self, bins: usize) -> Histogram {
        assert!(bins >= 2);
        let width = 2.0 * PI / bins as f64;
        let mut counts = vec![0u64; bins];
        for &t in &self.theta {
            let mut i = ((t + PI) / width) as usize;
            if i >= bins {
                i = bins - 1;
            }
            counts[i] += 1;
        }
        let norm = self.len() as f64 * width;
        Histogram {
            centers: (0..bins).map(|i| -PI + (i as f64 + 0.5) * width).collect(),
            density: counts.iter().map(|&c| c as f64 / norm).collect(),
        }
    }
}

/// Binned angular density.
#[derive(Debug, Clone)]
pub struct Histogram {
    pub centers: Vec<f64>,
    pub density: Vec<f64>,
}

/// One root of the cold single-kick map at fixed `(tau, theta)`.
#[derive(Debug, Clone, Copy)]
pub struct Branch {
    pub theta0: f64,
    /// `1 / |d theta / d theta_0|`, capped once the derivative drops below
    /// `WEIGHT_GUARD`.
    pub weight: f64,
    /// Set when `|d theta / d theta_0| < 1e-8`: the branch sits on (or
    /// numerically at) a caustic and its weight must not be read as a
    /// converged density.
    pub caustic: bool,
}

/// All map branches contributing to a target angle.
#[derive(Debug, Clone)]
pub struct BranchSet {
    pub branches: Vec<Branch>,
}

impl BranchSet {
    pub fn has_caustic(&self) -> bool {
        self.branches.iter().any(|b| b.caustic)
    }

    /// Branch-summed density value `(1/2pi) sum_a w_a` for a uniform cold
    /// ensemble.
    pub fn density(&self) -> f64 {
        self.branches.iter().map(|b| b.weight).sum::<f64>() / (2.0 * PI)
    }
}

/// Derivative threshold below which a branch is flagged caustic.
const CAUSTIC_FLAG: f64 = 1e-8;
/// Derivative floor for the weight itself; kept far below the flag level
/// so integrable singularities retain their mass under refined quadrature.
const WEIGHT_GUARD: f64 = 1e-15;

/// Roots `theta_0` of `theta_0 - p tau sin(theta_0) = theta (mod 2pi)` on
/// `[-pi, pi)`, for the cold (`omega_0 = 0`) single-kick map.
///
/// Sign-change bracketing on a grid of `16 (1 + ceil(p tau))` intervals,
/// refined by bisection to 1e-12. Grid cells whose endpoints show no sign
/// change but contain an extremum of the map are probed for tangent
/// (caustic) roots as well.
pub fn find_branches(tau: f64, p: f64, theta: f64) -> BranchSet {
    assert!(tau > 0.0, "branch analysis needs tau > 0");
    let pt = p * tau;
    let g = |x: f64| x - pt * x.sin();
    let dg = |x: f64| 1.0 - pt * x.cos();

    let span = PI + pt.abs();
    let m = 16 * (1 + pt.abs().ceil() as usize);
    let h = 2.0 * PI / m as f64;

    let mut roots: Vec<f64> = Vec::new();
    let j_lo = ((-span - theta) / (2.0 * PI)).ceil() as i64;
    let j_hi = ((span - theta) / (2.0 * PI)).floor() as i64;
    for j in j_lo..=j_hi {
        let target = theta + 2.0 * PI * j as f64;
        for i in 0..m {
            let a = -PI + i as f64 * h;
            let b = a + h;
            let fa = g(a) - target;
            let fb = g(b) - target;
            if fa == 0.0 {
                roots.push(a);
                continue;
            }
            if fa * fb < 0.0 {
                roots.push(bisect(|x| g(x) - target, a, b));
            } else if dg(a) * dg(b) < 0.0 {
                // no sign change across the cell, but an extremum inside may
                // still dip past the target: split at the extremum and
                // bracket each monotone half separately
                let xe = bisect(dg, a, b);
                let fe = g(xe) - target;
                if fe == 0.0 {
                    roots.push(xe);
                } else {
                    if fa * fe < 0.0 {
                        roots.push(bisect(|x| g(x) - target, a, xe));
                    }
                    if fe * fb < 0.0 {
                        roots.push(bisect(|x| g(x) - target, xe, b));
                    }
                }
            }
        }
    }
    roots.iter_mut().for_each(|r| *r = wrap_angle(*r));
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);

    let branches = roots
        .into_iter()
        .map(|r| {
            let d = dg(r).abs();
            Branch {
                theta0: r,
                weight: 1.0 / d.max(WEIGHT_GUARD),
                caustic: d < CAUSTIC_FLAG,
            }
        })
        .collect();
    BranchSet { branches }
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    if fa > 0.0 {
        std::mem::swap(&mut a, &mut b);
        fa = f(a);
        debug_assert!(fa <= 0.0);
    }
    for _ in 0..100 {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm <= 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        if (b - a).abs() < 1e-12 {
            break;
        }
    }
    0.5 * (a + b)
}

/// Branch-summed cold density on a grid, with per-point caustic flags.
pub fn classical_density(tau: f64, p: f64, grid: &[f64]) -> DensityProfile {
    let pairs: Vec<(f64, bool)> = grid
        .par_iter()
        .map(|&theta| {
            let set = find_branches(tau, p, theta);
            (set.density(), set.has_caustic())
        })
        .collect();
    DensityProfile {
        values: pairs.iter().map(|p| p.0).collect(),
        caustic_flags: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Density values plus caustic flags; flagged entries hold capped weights
/// and are excluded from quadrature by callers.
#[derive(Debug, Clone)]
pub struct DensityProfile {
    pub values: Vec<f64>,
    pub caustic_flags: Vec<bool>,
}
