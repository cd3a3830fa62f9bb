//! Planar quantum rotor driven by delta-kicks.
//!
//! The state lives in the angular-momentum basis `n in [-n_max, n_max]`
//! with dimensionless time `tau`. Free flight is a diagonal phase
//! `exp(-i n^2 dtau / 2)`; a kick of strength `P` is the banded unitary
//! `c_n <- sum_m i^(n-m) J_(n-m)(P) c_m`, which realizes `exp(+i P cos
//! theta)` and accelerates rotors toward `theta = 0`. Negative `P` orients
//! toward `theta = pi`.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

use crate::bessel;

/// Full revival period of the free planar rotor.
pub const T_REV: f64 = 4.0 * PI;

/// Maximum tolerated population on the outermost basis states after a kick.
pub const EDGE_TOLERANCE: f64 = 1e-12;

/// Raised when a kick drives noticeable population onto the basis edge,
/// meaning the angular-momentum cutoff is too small for the result to be
/// trusted.
#[derive(Debug, Clone, Error)]
#[error("basis edge population {edge_population:.3e} exceeds {tolerance:.1e} at n_max={n_max}")]
pub struct TruncationError {
    pub edge_population: f64,
    pub tolerance: f64,
    pub n_max: usize,
}

/// A single delta-kick: integrated strength `P = \int eps(tau) dtau` and the
/// (informational) time at which it is applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KickSpec {
    pub strength: f64,
    pub tau_k: f64,
}

impl KickSpec {
    pub fn new(strength: f64) -> Self {
        Self {
            strength,
            tau_k: 0.0,
        }
    }
}

/// Wave function of the planar rotor in the free-rotor basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState2D {
    coeffs: Vec<Complex64>,
    tau: f64,
    n_max: usize,
}

/// Basis cutoff for a planned total applied strength: Bessel coefficients
/// decay super-exponentially past order ~ argument, and this margin keeps
/// the edge mass below `EDGE_TOLERANCE`.
pub fn n_max_for(total_strength: f64) -> usize {
    let p = total_strength.abs();
    (p.ceil() + 4.0 * p.cbrt().ceil() + 32.0) as usize
}

impl QuantumState2D {
    /// Ground s-state (`c_0 = 1`) at `tau = 0`.
    pub fn ground(n_max: usize) -> Self {
        let mut coeffs = vec![Complex64::ZERO; 2 * n_max + 1];
        coeffs[n_max] = Complex64::ONE;
        Self {
            coeffs,
            tau: 0.0,
            n_max,
        }
    }

    /// State from explicit coefficients `c_{-n_max} .. c_{n_max}`.
    pub fn from_coeffs(coeffs: Vec<Complex64>, tau: f64) -> Self {
        assert!(coeffs.len() % 2 == 1, "basis must be symmetric around n=0");
        let n_max = (coeffs.len() - 1) / 2;
        Self { coeffs, tau, n_max }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Coefficient for angular momentum `n`.
    pub fn coeff(&self, n: i64) -> Complex64 {
        let i = n + self.n_max as i64;
        if i < 0 || i as usize >= self.coeffs.len() {
            Complex64::ZERO
        } else {
            self.coeffs[i as usize]
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Population on the outermost two basis states.
    pub fn edge_population(&self) -> f64 {
        let n = self.coeffs.len();
        self.coeffs[0].norm_sqr().max(self.coeffs[n - 1].norm_sqr())
    }

    /// Embed into a larger basis, padding with zeros.
    pub fn grown(&self, new_n_max: usize) -> Self {
        assert!(new_n_max >= self.n_max);
        let mut coeffs = vec![Complex64::ZERO; 2 * new_n_max + 1];
        let off = new_n_max - self.n_max;
        coeffs[off..off + self.coeffs.len()].copy_from_slice(&self.coeffs);
        Self {
            coeffs,
            tau: self.tau,
            n_max: new_n_max,
        }
    }

    /// Free evolution by `dtau >= 0`: pure phase rotation, norm exactly
    /// preserved.
    pub fn free_evolve(&self, dtau: f64) -> Self {
        assert!(dtau >= 0.0, "free evolution runs forward in time");
        let mut out = self.clone();
        out.free_evolve_in_place(dtau);
        out
    }

    fn free_evolve_in_place(&mut self, dtau: f64) {
        let n_max = self.n_max as i64;
        for (i, c) in self.coeffs.iter_mut().enumerate() {
            let n = (i as i64 - n_max) as f64;
            *c *= Complex64::from_polar(1.0, -n * n * dtau / 2.0);
        }
        self.tau += dtau;
    }

    /// Kick transform `c_n <- sum_k i^k J_k(P) c_{n-k}` over the band where
    /// `|J_k(P)|` is above machine cutoff.
    ///
    /// Fails with [`TruncationError`] if the result carries population on
    /// the basis edge.
    pub fn kicked(&self, kick: KickSpec) -> Result<Self, TruncationError> {
        let p = kick.strength;
        let band = bessel::band_limit(p);
        let j = bessel::jn_array(p, band);
        let n = self.coeffs.len();
        let mut out = vec![Complex64::ZERO; n];
        // i^k J_k for k >= 0; the matrix is symmetric because
        // i^{-k} J_{-k}(P) = i^k J_k(P).
        let weights: Vec<Complex64> = j
            .iter()
            .enumerate()
            .map(|(k, &jk)| match k % 4 {
                0 => Complex64::new(jk, 0.0),
                1 => Complex64::new(0.0, jk),
                2 => Complex64::new(-jk, 0.0),
                _ => Complex64::new(0.0, -jk),
            })
            .collect();
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = weights[0] * self.coeffs[i];
            let k_lo = i.min(band);
            let k_hi = (n - 1 - i).min(band);
            let k_both = k_lo.min(k_hi);
            for k in 1..=k_both {
                acc += weights[k] * (self.coeffs[i - k] + self.coeffs[i + k]);
            }
            for k in (k_both + 1)..=k_lo {
                acc += weights[k] * self.coeffs[i - k];
            }
            for k in (k_both + 1)..=k_hi {
                acc += weights[k] * self.coeffs[i + k];
            }
            *o = acc;
        }
        let result = Self {
            coeffs: out,
            tau: self.tau,
            n_max: self.n_max,
        };
        let edge = result.edge_population();
        if edge >= EDGE_TOLERANCE {
            return Err(TruncationError {
                edge_population: edge,
                tolerance: EDGE_TOLERANCE,
                n_max: self.n_max,
            });
        }
        Ok(result)
    }

    /// Kick that transparently enlarges the basis until the edge is clean.
    pub fn kicked_autogrow(&self, kick: KickSpec) -> Self {
        let mut state = self.clone();
        loop {
            match state.kicked(kick) {
                Ok(s) => return s,
                Err(_) => {
                    let bigger = state.n_max + state.n_max / 2 + 32;
                    state = state.grown(bigger);
                }
            }
        }
    }

    /// `|Psi(theta)|^2` on the given grid.
    pub fn angular_density(&self, grid: &[f64]) -> Vec<f64> {
        assert!(!grid.is_empty(), "density grid must be nonempty");
        grid.iter()
            .map(|&theta| {
                let z = Complex64::from_polar(1.0, theta);
                // Horner sum of c_n z^(n + n_max); the dropped prefactor
                // z^(-n_max) is a pure phase.
                let mut s = Complex64::ZERO;
                for c in self.coeffs.iter().rev() {
                    s = s * z + c;
                }
                s.norm_sqr() / (2.0 * PI)
            })
            .collect()
    }

    /// Orientation factor `O = 1 - <cos theta>`, computed exactly from
    /// nearest-neighbor coefficient products.
    pub fn orientation_factor(&self) -> f64 {
        let mut re = 0.0;
        for i in 0..self.coeffs.len() - 1 {
            re += (self.coeffs[i + 1].conj() * self.coeffs[i]).re;
        }
        1.0 - re
    }

    /// Orientation factor at times `t0 + m dt` (offsets from the current
    /// state), for `m = 0..count`, without materializing the evolved states.
    ///
    /// Each pair product `conj(c_{n+1}) c_n` rotates by `exp(i (2n+1) dt/2)`
    /// per step, so the whole profile costs one complex multiply per basis
    /// pair per sample.
    pub fn orientation_profile(&self, t0: f64, dt: f64, count: usize) -> Vec<f64> {
        let n_max = self.n_max as i64;
        let m = self.coeffs.len() - 1;
        let mut pair: Vec<Complex64> = Vec::with_capacity(m);
        let mut rot: Vec<Complex64> = Vec::with_capacity(m);
        for i in 0..m {
            let n = (i as i64 - n_max) as f64;
            let a = self.coeffs[i + 1].conj() * self.coeffs[i];
            pair.push(a * Complex64::from_polar(1.0, (2.0 * n + 1.0) * t0 / 2.0));
            rot.push(Complex64::from_polar(1.0, (2.0 * n + 1.0) * dt / 2.0));
        }
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let mut re = 0.0;
            for p in &pair {
                re += p.re;
            }
            out.push(1.0 - re);
            for (p, r) in pair.iter_mut().zip(&rot) {
                *p *= *r;
            }
        }
        out
    }

    /// `<theta^2>` on the branch `[-pi, pi)`, from the Fourier series of
    /// `theta^2`. Only the occupied band contributes: `rho_k` vanishes
    /// identically once `k` exceeds the populated bandwidth.
    pub fn theta_variance(&self) -> f64 {
        let occupied = |c: &Complex64| c.norm_sqr() > 1e-30;
        let lo = match self.coeffs.iter().position(occupied) {
            Some(i) => i,
            None => return PI * PI / 3.0,
        };
        let hi = self.coeffs.iter().rposition(occupied).unwrap();
        let band = &self.coeffs[lo..=hi];
        let mut total = PI * PI / 3.0;
        for k in 1..band.len() {
            let mut rho = Complex64::ZERO;
            for i in 0..band.len() - k {
                rho += band[i + k].conj() * band[i];
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            total += 4.0 * sign / (k as f64 * k as f64) * rho.re;
        }
        total
    }

    /// `<n^2>`, the squared angular-momentum spread.
    pub fn kinetic_moment(&self) -> f64 {
        let n_max = self.n_max as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let n = (i as i64 - n_max) as f64;
                n * n * c.norm_sqr()
            })
            .sum()
    }
}

/// True iff `n` kicks of strength `p` separated by exactly `spacing` produce
/// the same angular density as one kick of strength `n * p`, to 1e-8 in sup
/// norm over a 1024-point grid.
pub fn resonance_equivalence_with_spacing(
    p: f64,
    n: usize,
    spacing: f64,
) -> Result<bool, TruncationError> {
    assert!(n >= 1);
    let n_max = n_max_for(p * n as f64);
    let kick = KickSpec::new(p);
    let mut multi = QuantumState2D::ground(n_max).kicked(kick)?;
    for _ in 1..n {
        multi = multi.free_evolve(spacing).kicked(kick)?;
    }
    let single = QuantumState2D::ground(n_max).kicked(KickSpec::new(p * n as f64))?;
    let grid: Vec<f64> = (0..1024)
        .map(|i| -PI + 2.0 * PI * i as f64 / 1024.0)
        .collect();
    let da = multi.angular_density(&grid);
    let db = single.angular_density(&grid);
    let sup = da
        .iter()
        .zip(&db)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(sup < 1e-8)
}

/// Resonant spacing case: kicks separated by the full revival `T_REV`.
pub fn resonance_equivalence_check(p: f64, n: usize) -> Result<bool, TruncationError> {
    resonance_equivalence_with_spacing(p, n, T_REV)
}
