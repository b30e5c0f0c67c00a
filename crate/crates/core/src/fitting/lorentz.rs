//! Lorentzian dip fit for the resonator quality factor.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QFit {
    /// f₀/(2γ), or the grid bound f₀/Δf when the dip is unresolved.
    pub q: f64,
    pub f0: f64,
    /// Half-width at half-depth γ (Hz).
    pub half_width: f64,
    pub depth: f64,
    pub baseline: f64,
    /// False when the dip is narrower than the frequency grid can resolve; `q`
    /// is then a lower bound.
    pub resolved: bool,
}

fn model(x: f64, p: &[f64; 4]) -> f64 {
    let [x0, h, depth, base] = *p;
    let d = x - x0;
    base - depth * h * h / (d * d + h * h)
}

fn jacobian_row(x: f64, p: &[f64; 4]) -> [f64; 4] {
    let [x0, h, depth, _] = *p;
    let d = x - x0;
    let den = d * d + h * h;
    let l = h * h / den;
    [
        -depth * 2.0 * h * h * d / (den * den),
        -depth * 2.0 * h * d * d / (den * den),
        -l,
        1.0,
    ]
}

fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..4 {
            let k = a[row][col] / a[col][col];
            for c in col..4 {
                a[row][c] -= k * a[col][c];
            }
            b[row] -= k * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let s: f64 = (row + 1..4).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

fn cost(xs: &[f64], ys: &[f64], p: &[f64; 4]) -> f64 {
    xs.iter().zip(ys).map(|(&x, &y)| (y - model(x, p)).powi(2)).sum()
}

fn levenberg_marquardt(xs: &[f64], ys: &[f64], mut p: [f64; 4]) -> Option<[f64; 4]> {
    let mut lambda = 1e-3;
    let mut c = cost(xs, ys, &p);
    for _ in 0..1000 {
        let mut jtj = [[0.0; 4]; 4];
        let mut jtr = [0.0; 4];
        for (&x, &y) in xs.iter().zip(ys) {
            let j = jacobian_row(x, &p);
            let r = y - model(x, &p);
            for a in 0..4 {
                jtr[a] += j[a] * r;
                for b in 0..4 {
                    jtj[a][b] += j[a] * j[b];
                }
            }
        }
        let mut accepted = false;
        while lambda < 1e12 {
            let mut m = jtj;
            for (k, row) in m.iter_mut().enumerate() {
                row[k] += lambda * jtj[k][k].max(1e-30);
            }
            let Some(step) = solve4(m, jtr) else {
                lambda *= 10.0;
                continue;
            };
            let mut trial = p;
            for k in 0..4 {
                trial[k] += step[k];
            }
            trial[1] = trial[1].abs();
            let tc = cost(xs, ys, &trial);
            if tc <= c {
                let small = step
                    .iter()
                    .zip(&p)
                    .all(|(s, v)| s.abs() <= 1e-13 * (v.abs() + 1e-13));
                p = trial;
                let done = small || c - tc <= 1e-30 + 1e-15 * c;
                c = tc;
                lambda = (lambda / 10.0).max(1e-15);
                accepted = true;
                if done {
                    return Some(p);
                }
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            // no downhill step at any damping: at the minimum to working precision
            return Some(p);
        }
    }
    None
}

/// Fit T(f) = baseline − depth·γ²/((f − f₀)² + γ²) to one frequency cut on a
/// uniform grid and report Q = f₀/(2γ).
pub fn fit_quality_factor(freqs: &[f64], trans: &[f64]) -> Result<QFit> {
    if freqs.len() != trans.len() || freqs.len() < 5 {
        return Err(Error::param("cut", "need >= 5 (f, T) samples of equal length"));
    }
    if freqs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::param("cut", "frequencies must be strictly increasing"));
    }
    let n = freqs.len();
    let df = (freqs[n - 1] - freqs[0]) / (n - 1) as f64;
    let (i_min, &y_min) = trans
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    let base0 = trans[0].max(trans[n - 1]);
    let depth0 = base0 - y_min;
    if !(depth0 > 0.0) {
        return Err(Error::NonConvergence("cut contains no dip".into()));
    }
    let half = base0 - 0.5 * depth0;
    let mut lo = i_min;
    while lo > 0 && trans[lo - 1] < half {
        lo -= 1;
    }
    let mut hi = i_min;
    while hi + 1 < n && trans[hi + 1] < half {
        hi += 1;
    }
    if lo == hi {
        // only the minimum sample is below half depth: narrower than the grid
        let f0 = freqs[i_min];
        return Ok(QFit {
            q: f0 / df,
            f0,
            half_width: 0.5 * df,
            depth: depth0,
            baseline: base0,
            resolved: false,
        });
    }

    // work in grid units centred on the minimum
    let centre = freqs[i_min];
    let xs: Vec<f64> = freqs.iter().map(|f| (f - centre) / df).collect();
    let p0 = [0.0, 0.5 * (hi - lo + 1) as f64, depth0, base0];
    let p = levenberg_marquardt(&xs, trans, p0)
        .ok_or_else(|| Error::NonConvergence("Lorentzian dip fit did not settle".into()))?;
    if !p.iter().all(|v| v.is_finite()) || p[2] <= 0.0 {
        return Err(Error::NonConvergence(format!("degenerate dip fit {p:?}")));
    }
    let f0 = centre + p[0] * df;
    let half_width = p[1] * df;
    let resolved = half_width >= 0.5 * df;
    let q = if resolved {
        f0 / (2.0 * half_width)
    } else {
        (f0 / (2.0 * half_width)).max(f0 / df)
    };
    Ok(QFit {
        q,
        f0,
        half_width,
        depth: p[2],
        baseline: p[3],
        resolved,
    })
}
