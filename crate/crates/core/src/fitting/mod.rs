//! Parameter extraction from dispersion data: peak picking on transmission
//! maps, nearest-branch least squares for (f_cav, η, m*/m_e, f_p), residual
//! bootstrap uncertainties, and the Lorentzian quality-factor fit.
//!
//! The nearest-branch residual switches branch assignment across the
//! anti-crossing, so the objective is only piecewise smooth. The minimizer is a
//! bounded Nelder-Mead simplex restarted from several deterministic seeds.

mod lorentz;
mod peaks;
pub mod simplex;

pub use lorentz::{fit_quality_factor, QFit};
pub use peaks::{extract_peaks, parabolic_offset, Peak, PeakList};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::constants::M_E;
use crate::error::{Error, Result};
use crate::params::{MaterialParams, ResonatorParams};
use crate::polariton::{branch_point_unchecked, BranchPoint, PolaritonModelKind};
use simplex::{minimize_with_restarts, SimplexOptions};

pub const MIN_FIT_POINTS: usize = 4;

/// Dispersion-model parameters. Frequencies in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionParams {
    pub f_cav: f64,
    pub eta: f64,
    pub m_star_ratio: f64,
    pub f_p: f64,
}

impl DispersionParams {
    pub fn from_params(m: &MaterialParams, r: &ResonatorParams) -> Self {
        Self {
            f_cav: r.f_cav,
            eta: r.eta,
            m_star_ratio: m.m_star_ratio(),
            f_p: r.f_p,
        }
    }

    fn to_array(self) -> [f64; 4] {
        [self.f_cav, self.eta, self.m_star_ratio, self.f_p]
    }

    fn from_array(a: [f64; 4]) -> Self {
        Self {
            f_cav: a[0],
            eta: a[1],
            m_star_ratio: a[2],
            f_p: a[3],
        }
    }

    /// Apply onto full parameter records; fields the dispersion does not see
    /// are taken from `m` and `r`.
    pub fn apply(&self, m: &MaterialParams, r: &ResonatorParams) -> (MaterialParams, ResonatorParams) {
        let m = MaterialParams {
            m_star: self.m_star_ratio * M_E,
            ..*m
        };
        let r = ResonatorParams {
            f_cav: self.f_cav,
            eta: self.eta,
            f_p: self.f_p,
            ..*r
        };
        (m, r)
    }

    pub fn branch_point(&self, kind: PolaritonModelKind, b: f64) -> BranchPoint {
        let (m, r) = self.apply(&MaterialParams::default(), &ResonatorParams::default());
        branch_point_unchecked(kind, b, &r, &m)
    }
}

/// Box constraints. A parameter with lo == hi is held fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamBounds {
    pub lo: DispersionParams,
    pub hi: DispersionParams,
}

impl ParamBounds {
    /// Default search box around a starting guess.
    pub fn around(theta0: &DispersionParams) -> Self {
        Self {
            lo: DispersionParams {
                f_cav: 0.5 * theta0.f_cav,
                eta: 0.0,
                m_star_ratio: 0.04,
                f_p: 0.0,
            },
            hi: DispersionParams {
                f_cav: 1.5 * theta0.f_cav,
                eta: 0.8,
                m_star_ratio: 0.10,
                f_p: 200e9,
            },
        }
    }

    pub fn fix_m_star(mut self, ratio: f64) -> Self {
        self.lo.m_star_ratio = ratio;
        self.hi.m_star_ratio = ratio;
        self
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = (self.lo.to_array(), self.hi.to_array());
        if lo.iter().zip(&hi).any(|(l, h)| !(l <= h) || !l.is_finite() || !h.is_finite()) {
            return Err(Error::param("bounds", "need finite lo <= hi for every parameter"));
        }
        if !(self.lo.f_cav > 0.0 && self.lo.m_star_ratio > 0.0 && self.lo.eta >= 0.0 && self.lo.f_p >= 0.0) {
            return Err(Error::param("bounds", "f_cav and m* must be > 0, eta and f_p >= 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    /// Multi-start count (start 0 is the caller's guess).
    pub starts: usize,
    pub seed: u64,
    /// Residual-bootstrap resamples; 0 disables uncertainty estimation.
    pub bootstrap_samples: usize,
    /// Convergence threshold on the simplex spread, relative to each bound span.
    pub xtol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            starts: 8,
            seed: 0,
            bootstrap_samples: 200,
            xtol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub theta: DispersionParams,
    /// Weighted residual sum of squares (Hz²).
    pub rss: f64,
    pub n_points: usize,
    /// Bootstrap half-widths (16–84 % spread / 2), same units as `theta`.
    pub uncertainty: Option<DispersionParams>,
    pub converged: bool,
    pub n_restarts_used: usize,
}

/// Scaled parameterization over the free coordinates of the box.
struct BoxMap {
    lo: [f64; 4],
    span: [f64; 4],
    free: Vec<usize>,
}

impl BoxMap {
    fn new(bounds: &ParamBounds) -> Self {
        let lo = bounds.lo.to_array();
        let hi = bounds.hi.to_array();
        let span = [hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2], hi[3] - lo[3]];
        let free = (0..4).filter(|&k| span[k] > 0.0).collect();
        Self { lo, span, free }
    }

    fn to_params(&self, u: &[f64]) -> DispersionParams {
        let mut a = self.lo;
        for (&k, &v) in self.free.iter().zip(u) {
            a[k] = self.lo[k] + v.clamp(0.0, 1.0) * self.span[k];
        }
        DispersionParams::from_array(a)
    }

    fn to_unit(&self, theta: &DispersionParams) -> Vec<f64> {
        let a = theta.to_array();
        self.free
            .iter()
            .map(|&k| ((a[k] - self.lo[k]) / self.span[k]).clamp(0.0, 1.0))
            .collect()
    }
}

fn nearest_branch(bp: &BranchPoint, f: f64) -> f64 {
    if (f - bp.f_lp).abs() <= (f - bp.f_up).abs() {
        bp.f_lp
    } else {
        bp.f_up
    }
}

/// Model value (nearest branch) for each point.
pub fn fitted_frequencies(points: &[Peak], kind: PolaritonModelKind, theta: &DispersionParams) -> Vec<f64> {
    points
        .iter()
        .map(|p| nearest_branch(&theta.branch_point(kind, p.b), p.f))
        .collect()
}

/// Σ wᵢ (fᵢ − nearest branch)² in Hz².
pub fn objective(points: &[Peak], kind: PolaritonModelKind, theta: &DispersionParams) -> f64 {
    let (m, r) = theta.apply(&MaterialParams::default(), &ResonatorParams::default());
    points
        .iter()
        .map(|p| {
            let bp = branch_point_unchecked(kind, p.b, &r, &m);
            let d = p.f - nearest_branch(&bp, p.f);
            p.weight * d * d
        })
        .sum()
}

struct Solution {
    theta: DispersionParams,
    rss: f64,
    diameter: f64,
}

fn solve_from(points: &[Peak], kind: PolaritonModelKind, map: &BoxMap, u0: &[f64], opts: &FitOptions) -> Solution {
    // GHz² keeps the simplex comparisons well scaled
    let f = |u: &[f64]| objective(points, kind, &map.to_params(u)) * 1e-18;
    let sopts = SimplexOptions {
        xtol: (opts.xtol * 1e-3).max(1e-12),
        ..Default::default()
    };
    let res = minimize_with_restarts(f, u0, &sopts, 4);
    let theta = map.to_params(&res.x);
    Solution {
        rss: objective(points, kind, &theta),
        theta,
        diameter: res.diameter,
    }
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let j = (i + 1).min(sorted.len() - 1);
    sorted[i] + (pos - i as f64) * (sorted[j] - sorted[i])
}

/// Weighted nearest-branch least-squares fit of a dispersion model to peaks.
pub fn fit_dispersion(
    peaks: &PeakList,
    kind: PolaritonModelKind,
    theta0: &DispersionParams,
    bounds: &ParamBounds,
    opts: &FitOptions,
) -> Result<FitResult> {
    if peaks.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints {
            required: MIN_FIT_POINTS,
            actual: peaks.len(),
        });
    }
    bounds.validate()?;
    let map = BoxMap::new(bounds);
    let points = peaks.points();
    let n_free = map.free.len();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut starts = vec![map.to_unit(theta0)];
    for _ in 1..opts.starts.max(1) {
        starts.push((0..n_free).map(|_| rng.random::<f64>()).collect());
    }

    let solutions: Vec<Solution> = starts
        .par_iter()
        .map(|u0| solve_from(points, kind, &map, u0, opts))
        .collect();
    let best = solutions
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.rss.total_cmp(&b.1.rss).then(a.0.cmp(&b.0)))
        .map(|(_, s)| s)
        .expect("at least one start");
    let converged = best.rss.is_finite() && best.diameter < opts.xtol;

    let uncertainty = if opts.bootstrap_samples > 0 && converged {
        Some(bootstrap(points, kind, &map, best, opts))
    } else {
        None
    };

    Ok(FitResult {
        theta: best.theta,
        rss: best.rss,
        n_points: points.len(),
        uncertainty,
        converged,
        n_restarts_used: starts.len(),
    })
}

fn bootstrap(points: &[Peak], kind: PolaritonModelKind, map: &BoxMap, best: &Solution, opts: &FitOptions) -> DispersionParams {
    let fitted = fitted_frequencies(points, kind, &best.theta);
    let residuals: Vec<f64> = points.iter().zip(&fitted).map(|(p, f)| p.f - f).collect();
    let u_best = map.to_unit(&best.theta);
    let n = points.len();
    let refits: Vec<[f64; 4]> = (0..opts.bootstrap_samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed_b007_0000_0000 ^ s as u64);
            let synth: Vec<Peak> = points
                .iter()
                .zip(&fitted)
                .map(|(p, f)| Peak {
                    f: f + residuals[rng.random_range(0..n)],
                    ..*p
                })
                .collect();
            solve_from(&synth, kind, map, &u_best, opts).theta.to_array()
        })
        .collect();
    let mut half = [0.0; 4];
    for (k, h) in half.iter_mut().enumerate() {
        let mut col: Vec<f64> = refits.iter().map(|a| a[k]).collect();
        col.sort_by(f64::total_cmp);
        *h = 0.5 * (percentile(&col, 0.84) - percentile(&col, 0.16));
    }
    DispersionParams::from_array(half)
}

/// Synthetic dispersion points on both branches at each field, for round-trip
/// checks and demos.
pub fn synthesize_peaks(
    b_values: &[f64],
    kind: PolaritonModelKind,
    theta: &DispersionParams,
    noise_sigma: f64,
    seed: u64,
) -> Result<PeakList> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = rand_distr::Normal::new(0.0, noise_sigma.max(0.0))
        .map_err(|e| Error::param("noise_sigma", e.to_string()))?;
    let mut points = Vec::with_capacity(2 * b_values.len());
    for &b in b_values {
        let bp = theta.branch_point(kind, b);
        for f in [bp.f_lp, bp.f_up] {
            let noise = if noise_sigma > 0.0 { rng.sample(normal) } else { 0.0 };
            points.push(Peak {
                b,
                f: f + noise,
                weight: 1.0,
            });
        }
    }
    PeakList::new(points, format!("synthetic {} sigma={noise_sigma}", kind.name()))
}
