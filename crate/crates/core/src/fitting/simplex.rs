//! Nelder-Mead simplex minimization on the unit box [0, 1]^n. Trial points are
//! projected onto the box before evaluation.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Initial edge length in box coordinates.
    pub initial_step: f64,
    /// Stop when every coordinate's spread across the simplex is below this.
    pub xtol: f64,
    pub max_evals: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.1,
            xtol: 1e-9,
            max_evals: 20_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub evals: usize,
    /// Largest per-coordinate spread of the final simplex.
    pub diameter: f64,
}

fn project(x: &mut [f64]) {
    for v in x {
        *v = v.clamp(0.0, 1.0);
    }
}

fn diameter(simplex: &[Vec<f64>]) -> f64 {
    let n = simplex[0].len();
    (0..n)
        .map(|j| {
            let (lo, hi) = simplex
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                    (lo.min(p[j]), hi.max(p[j]))
                });
            hi - lo
        })
        .fold(0.0, f64::max)
}

pub fn minimize<F>(f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexResult
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let evals = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    if n == 0 {
        let fx = eval(x0);
        return SimplexResult {
            x: Vec::new(),
            fx,
            evals: evals.get(),
            diameter: 0.0,
        };
    }

    let mut start = x0.to_vec();
    project(&mut start);
    let mut simplex = vec![start.clone()];
    for j in 0..n {
        let mut p = start.clone();
        // step inward when the start sits on the upper face
        p[j] = if p[j] + opts.initial_step <= 1.0 {
            p[j] + opts.initial_step
        } else {
            p[j] - opts.initial_step
        };
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| eval(p)).collect();

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    loop {
        // order best → worst, index tiebreak keeps this deterministic
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let d = diameter(&simplex);
        if d < opts.xtol || evals.get() >= opts.max_evals {
            return SimplexResult {
                x: simplex[0].clone(),
                fx: values[0],
                evals: evals.get(),
                diameter: d,
            };
        }

        let mut centroid = vec![0.0; n];
        for p in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / n as f64;
            }
        }
        let toward = |coef: f64, from: &[f64]| -> Vec<f64> {
            let mut p: Vec<f64> = centroid
                .iter()
                .zip(from)
                .map(|(c, w)| c + coef * (c - w))
                .collect();
            project(&mut p);
            p
        };

        let worst = simplex[n].clone();
        let xr = toward(alpha, &worst);
        let fr = eval(&xr);
        if fr < values[0] {
            let xe = toward(gamma, &worst);
            let fe = eval(&xe);
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[n] {
            let xc = toward(rho * alpha, &worst);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = toward(-rho, &worst);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < values[n].min(fr) {
            simplex[n] = xc;
            values[n] = fc;
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].clone();
        for i in 1..=n {
            for (v, b) in simplex[i].iter_mut().zip(&best) {
                *v = b + sigma * (*v - b);
            }
            values[i] = eval(&simplex[i]);
        }
    }
}

/// Repeated simplex runs from the previous optimum until the objective stops
/// improving; guards against a simplex that collapsed onto a box face.
pub fn minimize_with_restarts<F>(f: F, x0: &[f64], opts: &SimplexOptions, max_restarts: usize) -> SimplexResult
where
    F: Fn(&[f64]) -> f64,
{
    let mut best = minimize(&f, x0, opts);
    let mut total = best.evals;
    for _ in 0..max_restarts {
        let next = minimize(&f, &best.x, opts);
        total += next.evals;
        let improved = next.fx < best.fx - 1e-12 * best.fx.abs();
        if next.fx <= best.fx {
            best = next;
        }
        if !improved {
            break;
        }
    }
    best.evals = total;
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_quadratic_minimum() {
        let f = |x: &[f64]| (x[0] - 0.3).powi(2) + 10.0 * (x[1] - 0.7).powi(2) + (x[2] - 0.5).powi(2);
        let r = minimize(f, &[0.9, 0.1, 0.2], &SimplexOptions::default());
        assert!((r.x[0] - 0.3).abs() < 1e-6);
        assert!((r.x[1] - 0.7).abs() < 1e-6);
        assert!((r.x[2] - 0.5).abs() < 1e-6);
        assert!(r.diameter < 1e-9);
    }

    #[test]
    fn respects_box() {
        // unconstrained minimum at (-1, 2) projects to (0, 1)
        let f = |x: &[f64]| (x[0] + 1.0).powi(2) + (x[1] - 2.0).powi(2);
        let r = minimize_with_restarts(f, &[0.5, 0.5], &SimplexOptions::default(), 3);
        assert!(r.x[0].abs() < 1e-8 && (r.x[1] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rosenbrock_in_box() {
        let f = |x: &[f64]| {
            let (a, b) = (4.0 * x[0] - 2.0, 4.0 * x[1] - 2.0);
            (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2)
        };
        let r = minimize_with_restarts(f, &[0.1, 0.9], &SimplexOptions::default(), 5);
        assert!((r.x[0] - 0.75).abs() < 1e-6 && (r.x[1] - 0.75).abs() < 1e-6, "{:?}", r.x);
    }

    #[test]
    fn deterministic() {
        let f = |x: &[f64]| (x[0] - 0.123).abs() + (x[1] - 0.456).powi(2);
        let a = minimize(f, &[0.5, 0.5], &SimplexOptions::default());
        let b = minimize(f, &[0.5, 0.5], &SimplexOptions::default());
        assert_eq!(a.x, b.x);
        assert_eq!(a.evals, b.evals);
    }
}
