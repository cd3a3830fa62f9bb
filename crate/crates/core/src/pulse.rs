//! Pulse envelopes and kick schedules shared by the engines, the scheduler
//! and the optimizer.

use serde::{Deserialize, Serialize};

/// Time profile of the effective interaction strength `eps(tau)`.
///
/// For the polarization interaction this is the dimensionless
/// `eps_eff(tau) = E^2(tau) (alpha_par - alpha_perp) I / 4 hbar^2`, which is
/// nonnegative and integrable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum PulseEnvelope {
    /// Impulsive kick of integrated strength `strength` at `time`.
    Delta { strength: f64, time: f64 },
    /// `amplitude * exp(-((tau - center) / width)^2)`.
    Gaussian {
        amplitude: f64,
        width: f64,
        center: f64,
    },
    /// Constant `amplitude` on `[start, stop)`.
    Step {
        amplitude: f64,
        start: f64,
        stop: f64,
    },
    /// Piecewise-linear interpolation of `(times, values)`; zero outside.
    Tabulated { times: Vec<f64>, values: Vec<f64> },
}

impl PulseEnvelope {
    pub fn gaussian(amplitude: f64, width: f64, center: f64) -> Self {
        assert!(width > 0.0);
        Self::Gaussian {
            amplitude,
            width,
            center,
        }
    }

    /// `eps(tau)`; the delta shape evaluates to zero everywhere (its action
    /// is the integrated impulse, handled specially by consumers).
    pub fn eval(&self, tau: f64) -> f64 {
        match self {
            Self::Delta { .. } => 0.0,
            Self::Gaussian {
                amplitude,
                width,
                center,
            } => {
                let u = (tau - center) / width;
                amplitude * (-u * u).exp()
            }
            Self::Step {
                amplitude,
                start,
                stop,
            } => {
                if tau >= *start && tau < *stop {
                    *amplitude
                } else {
                    0.0
                }
            }
            Self::Tabulated { times, values } => {
                if times.is_empty() || tau < times[0] || tau > *times.last().unwrap() {
                    return 0.0;
                }
                match times.binary_search_by(|t| t.partial_cmp(&tau).unwrap()) {
                    Ok(i) => values[i],
                    Err(i) => {
                        let (t0, t1) = (times[i - 1], times[i]);
                        let w = (tau - t0) / (t1 - t0);
                        values[i - 1] * (1.0 - w) + values[i] * w
                    }
                }
            }
        }
    }

    /// `\int eps(tau) dtau`.
    pub fn integral(&self) -> f64 {
        match self {
            Self::Delta { strength, .. } => *strength,
            Self::Gaussian {
                amplitude, width, ..
            } => amplitude * width * std::f64::consts::PI.sqrt(),
            Self::Step {
                amplitude,
                start,
                stop,
            } => amplitude * (stop - start).max(0.0),
            Self::Tabulated { times, values } => {
                let mut s = 0.0;
                for i in 1..times.len() {
                    s += 0.5 * (values[i] + values[i - 1]) * (times[i] - times[i - 1]);
                }
                s
            }
        }
    }

    /// Interval outside which the envelope is machine-negligible.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Self::Delta { time, .. } => (*time, *time),
            Self::Gaussian { width, center, .. } => (center - 10.0 * width, center + 10.0 * width),
            Self::Step { start, stop, .. } => (*start, *stop),
            Self::Tabulated { times, .. } => {
                if times.is_empty() {
                    (0.0, 0.0)
                } else {
                    (times[0], *times.last().unwrap())
                }
            }
        }
    }

    /// Peak value, used by step-size rules.
    pub fn peak(&self) -> f64 {
        match self {
            Self::Delta { .. } => 0.0,
            Self::Gaussian { amplitude, .. } | Self::Step { amplitude, .. } => amplitude.abs(),
            Self::Tabulated { values, .. } => values.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }

    /// Points where the envelope is not smooth; integrators split there.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Self::Delta { time, .. } => vec![*time],
            Self::Step { start, stop, .. } => vec![*start, *stop],
            Self::Tabulated { times, .. } => times.clone(),
            Self::Gaussian { .. } => Vec::new(),
        }
    }
}

/// How a kick schedule came to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Accumulative,
    Optimized,
    Manual,
}

/// One kick plus the free delay that follows it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseEvent {
    pub strength: f64,
    pub delay: f64,
}

/// Ordered kick schedule. The first kick fires at `tau = 0`; each `delay`
/// is the free flight after its kick, so the last delay is the wait before
/// measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSequence {
    pub pulses: Vec<PulseEvent>,
    pub provenance: Provenance,
}

impl PulseSequence {
    pub fn uniform_strength(strength: f64, delays: &[f64], provenance: Provenance) -> Self {
        Self {
            pulses: delays
                .iter()
                .map(|&delay| PulseEvent { strength, delay })
                .collect(),
            provenance,
        }
    }

    pub fn total_strength(&self) -> f64 {
        self.pulses.iter().map(|p| p.strength.abs()).sum()
    }

    pub fn total_duration(&self) -> f64 {
        self.pulses.iter().map(|p| p.delay).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integral_and_support() {
        let p = PulseEnvelope::gaussian(3.0e3, 0.01, 0.0);
        assert!((p.integral() - 3.0e3 * 0.01 * std::f64::consts::PI.sqrt()).abs() < 1e-9);
        let (lo, hi) = p.support();
        assert!(p.eval(lo).abs() < 1e-30 && p.eval(hi).abs() < 1e-30);
        assert!((p.eval(0.0) - 3.0e3).abs() < 1e-12);
    }

    #[test]
    fn tabulated_interpolates() {
        let p = PulseEnvelope::Tabulated {
            times: vec![0.0, 1.0, 2.0],
            values: vec![0.0, 2.0, 0.0],
        };
        assert_eq!(p.eval(0.5), 1.0);
        assert_eq!(p.eval(1.5), 1.0);
        assert_eq!(p.eval(3.0), 0.0);
        assert!((p.integral() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn step_evaluates_on_interval() {
        let p = PulseEnvelope::Step {
            amplitude: 4.0,
            start: 0.0,
            stop: 0.5,
        };
        assert_eq!(p.eval(0.25), 4.0);
        assert_eq!(p.eval(0.75), 0.0);
        assert!((p.integral() - 2.0).abs() < 1e-14);
    }
}
