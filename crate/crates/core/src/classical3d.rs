//! Monte-Carlo dynamics of 3D rigid rotors (linear molecules) under
//! delta-pulses.
//!
//! Particles are stored as a unit axis vector plus a tangential
//! angular-velocity vector instead of `(theta, phi, p_theta, p_phi)`, which
//! avoids coordinate singularities at the poles. The azimuthal momentum
//! `p_phi = (axis x angvel) . z` is conserved by both free flight and the
//! azimuthally symmetric kicks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::f64::consts::PI;

type V3 = [f64; 3];

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn scale(a: V3, s: f64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn add(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}

fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Ensemble of rigid rotors on the unit sphere.
#[derive(Debug, Clone)]
pub struct ClassicalEnsemble3D {
    axis: Vec<V3>,
    angvel: Vec<V3>,
    tau: f64,
    seed: u64,
}

/// Which pole a near-pole diagnostic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pole {
    North,
    South,
}

impl ClassicalEnsemble3D {
    /// Axes uniform on the sphere, angular velocities gaussian with standard
    /// deviation `sigma` per tangential component. Per-particle RNG streams
    /// keep the sample independent of work partitioning.
    pub fn sample_isotropic(n: usize, sigma: f64, seed: u64) -> Self {
        assert!(n >= 1);
        assert!(sigma >= 0.0);
        let pairs: Vec<(V3, V3)> = (0..n as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, i));
                let ct: f64 = rng.random_range(-1.0..1.0);
                let phi: f64 = rng.random_range(0.0..2.0 * PI);
                let st = (1.0 - ct * ct).sqrt();
                let axis = [st * phi.cos(), st * phi.sin(), ct];
                let v = if sigma > 0.0 {
                    let g1: f64 = rng.sample(StandardNormal);
                    let g2: f64 = rng.sample(StandardNormal);
                    let (e1, e2) = tangent_pair(axis);
                    add(scale(e1, sigma * g1), scale(e2, sigma * g2))
                } else {
                    [0.0; 3]
                };
                (axis, v)
            })
            .collect();
        let (axis, angvel) = pairs.into_iter().unzip();
        Self {
            axis,
            angvel,
            tau: 0.0,
            seed,
        }
    }

    pub fn len(&self) -> usize {
        self.axis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axis.is_empty()
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn axes(&self) -> &[V3] {
        &self.axis
    }

    pub fn angvels(&self) -> &[V3] {
        &self.angvel
    }

    /// Polar angles `theta = acos(axis_z)` of all particles.
    pub fn thetas(&self) -> Vec<f64> {
        self.axis
            .iter()
            .map(|a| a[2].clamp(-1.0, 1.0).acos())
            .collect()
    }

    /// Azimuthal angular momentum `p_phi = (axis x angvel) . z` per
    /// particle.
    pub fn p_phi(&self) -> Vec<f64> {
        self.axis
            .iter()
            .zip(&self.angvel)
            .map(|(&a, &v)| cross(a, v)[2])
            .collect()
    }

    /// Delta-kick of strength `p`: the angular velocity gains `-p sin(theta)`
    /// along the local polar direction; axes unchanged.
    pub fn kicked(mut self, p: f64) -> Self {
        self.angvel
            .par_iter_mut()
            .zip(self.axis.par_iter())
            .for_each(|(v, &a)| {
                let ct = a[2];
                let st2 = 1.0 - ct * ct;
                if st2 <= 0.0 {
                    return; // at a pole the impulse vanishes
                }
                let st = st2.sqrt();
                // e_theta = e_phi x axis, with e_phi = (-a_y, a_x, 0)/sin(theta)
                let ephi = [-a[1] / st, a[0] / st, 0.0];
                let etheta = cross(ephi, a);
                *v = add(*v, scale(etheta, -p * st));
            });
        self
    }

    /// Free rigid-rotor flight: each particle rotates along the great circle
    /// spanned by `(axis, angvel)` at rate `|angvel|`, in closed form.
    pub fn drifted(mut self, dtau: f64) -> Self {
        assert!(dtau >= 0.0);
        self.axis
            .par_iter_mut()
            .zip(self.angvel.par_iter_mut())
            .for_each(|(a, v)| {
                let s = norm(*v);
                if s == 0.0 {
                    return;
                }
                let e = scale(*v, 1.0 / s);
                let (sin, cos) = (s * dtau).sin_cos();
                let new_a = add(scale(*a, cos), scale(e, sin));
                let new_e = add(scale(*a, -sin), scale(e, cos));
                // re-enforce the invariants against rounding drift
                let na = scale(new_a, 1.0 / norm(new_a));
                let mut nv = scale(new_e, s);
                nv = add(nv, scale(na, -dot(na, nv)));
                *a = na;
                *v = nv;
            });
        self.tau += dtau;
        self
    }

    /// Histogram uniform in `cos(theta)`, normalized per unit solid angle
    /// (phi-averaged).
    pub fn solid_angle_density(&self, bins: usize) -> SphereHistogram {
        assert!(bins >= 8);
        let dct = 2.0 / bins as f64;
        let mut counts = vec![0u64; bins];
        for a in &self.axis {
            let ct = a[2].clamp(-1.0, 1.0);
            let mut i = ((ct + 1.0) / dct) as usize;
            if i >= bins {
                i = bins - 1;
            }
            counts[i] += 1;
        }
        let norm = self.len() as f64 * 2.0 * PI * dct;
        SphereHistogram {
            cos_theta_centers: (0..bins).map(|i| -1.0 + (i as f64 + 0.5) * dct).collect(),
            density: counts.iter().map(|&c| c as f64 / norm).collect(),
        }
    }

    /// Marginal density in the polar angle (probability per unit `theta`,
    /// phi-integrated) on uniform `theta` bins starting at the given pole.
    ///
    /// This is the quantity in which the thermal polar hole lives: with
    /// `p_phi` conserved, a thermal ensemble has finite density per solid
    /// angle at the pole, so the marginal vanishes linearly there, while a
    /// cold focused ensemble piles up faster than `1/sin(theta)` and keeps
    /// the marginal flat or rising into the pole.
    pub fn polar_marginal(&self, pole: Pole, bin_width: f64, bins: usize) -> Vec<f64> {
        assert!(bin_width > 0.0 && bins >= 2);
        let mut counts = vec![0u64; bins];
        for a in &self.axis {
            let th = a[2].clamp(-1.0, 1.0).acos();
            let d = match pole {
                Pole::North => th,
                Pole::South => PI - th,
            };
            let i = (d / bin_width) as usize;
            if i < bins {
                counts[i] += 1;
            }
        }
        counts
            .iter()
            .map(|&c| c as f64 / (self.len() as f64 * bin_width))
            .collect()
    }
}

/// Orthonormal pair spanning the tangent plane at `axis`.
fn tangent_pair(axis: V3) -> (V3, V3) {
    let reference = if axis[2].abs() < 0.9 {
        [0.0, 0.0, 1.0]
    } else {
        [1.0, 0.0, 0.0]
    };
    let mut e1 = cross(axis, reference);
    e1 = scale(e1, 1.0 / norm(e1));
    let e2 = cross(axis, e1);
    (e1, e2)
}

/// Sphere-surface histogram, phi-averaged.
#[derive(Debug, Clone)]
pub struct SphereHistogram {
    pub cos_theta_centers: Vec<f64>,
    /// Probability per unit solid angle in each bin.
    pub density: Vec<f64>,
}

impl SphereHistogram {
    /// Total probability `sum value * dOmega`; 1 up to rounding.
    pub fn total(&self) -> f64 {
        let dct = 2.0 / self.density.len() as f64;
        self.density.iter().sum::<f64>() * 2.0 * PI * dct
    }
}
