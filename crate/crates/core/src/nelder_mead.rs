//! Minimal Nelder-Mead downhill simplex for low-dimensional,
//! derivative-free objectives.

/// Convergence and budget controls.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub max_iters: usize,
    /// Stop when the simplex function spread falls below this.
    pub f_tol: f64,
    /// Stop when the simplex diameter falls below this.
    pub x_tol: f64,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            f_tol: 1e-12,
            x_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub iters: usize,
    pub converged: bool,
}

/// Standard reflection/expansion/contraction/shrink iteration with
/// coefficients (1, 2, 1/2, 1/2).
pub fn minimize(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    steps: &[f64],
    opts: &Options,
) -> Outcome {
    let dim = x0.len();
    assert!(dim >= 1 && steps.len() == dim);
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += steps[i];
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();

    let mut iters = 0;
    let mut converged = false;
    while iters < opts.max_iters {
        iters += 1;
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];

        let spread = values[worst] - values[best];
        let diam = simplex
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[best])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread < opts.f_tol || diam < opts.x_tol {
            converged = true;
            break;
        }

        // centroid of all but the worst vertex
        let mut centroid = vec![0.0; dim];
        for (i, v) in simplex.iter().enumerate() {
            if i == worst {
                continue;
            }
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x;
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }

        let blend = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
        };

        // reflect the worst vertex through the centroid
        let reflected = blend(&centroid, &simplex[worst], -1.0);
        let f_r = eval(&reflected, &mut evals);
        if f_r < values[best] {
            let expanded = blend(&centroid, &simplex[worst], -2.0);
            let f_e = eval(&expanded, &mut evals);
            if f_e < f_r {
                simplex[worst] = expanded;
                values[worst] = f_e;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_r;
            }
            continue;
        }
        if f_r < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = f_r;
            continue;
        }
        // contract
        let contracted = if f_r < values[worst] {
            blend(&centroid, &reflected, 0.5)
        } else {
            blend(&centroid, &simplex[worst], 0.5)
        };
        let f_c = eval(&contracted, &mut evals);
        if f_c < values[worst].min(f_r) {
            simplex[worst] = contracted;
            values[worst] = f_c;
            continue;
        }
        // shrink toward the best vertex
        let best_point = simplex[best].clone();
        for i in 0..=dim {
            if i == best {
                continue;
            }
            simplex[i] = blend(&best_point, &simplex[i], 0.5);
            values[i] = eval(&simplex[i], &mut evals);
        }
    }

    let mut best = 0;
    for i in 1..=dim {
        if values[i] < values[best] {
            best = i;
        }
    }
    Outcome {
        x: simplex[best].clone(),
        f: values[best],
        evals,
        iters,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let out = minimize(
            |x| (x[0] - 1.5).powi(2) + 2.0 * (x[1] + 0.5).powi(2),
            &[0.0, 0.0],
            &[0.5, 0.5],
            &Options::default(),
        );
        assert!(out.converged);
        assert!((out.x[0] - 1.5).abs() < 1e-6);
        assert!((out.x[1] + 0.5).abs() < 1e-6);
    }

    #[test]
    fn rosenbrock_2d() {
        let out = minimize(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
            &[0.3, 0.3],
            &Options {
                max_iters: 5000,
                ..Options::default()
            },
        );
        assert!(out.f < 1e-10, "f = {}", out.f);
    }
}
