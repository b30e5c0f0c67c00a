//! Magneto-plasmon dispersion, Landau-polariton branches and synthetic THz
//! transmission maps.
//!
//! Two branch models are provided. [`PolaritonModelKind::CoupledMode`] is the
//! 2×2 rotating-wave anti-crossing; [`PolaritonModelKind::Hopfield`] keeps the
//! counter-rotating and diamagnetic terms, whose secular equation in ordinary
//! frequencies is
//!
//! ```text
//! f⁴ − f²(f_cav² + f_mp² + 4Ω_f²) + f_cav² f_mp² = 0
//! ```
//!
//! and which opens a gap at B = 0. Both use a B-independent coupling
//! Ω_f = η·f_cav unless the caller goes through the `*_with_coupling` entry
//! points.

use rayon::prelude::*;

use crate::constants::PLANCK;
use crate::error::{Error, Result};
use crate::grid::{Grid1D, Grid2D, Quantity, ResponseMap};
use crate::landau::cyclotron_frequency_unchecked;
use crate::lineshape::lorentzian_peak1;
use crate::params::{MaterialParams, ResonatorParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PolaritonModelKind {
    CoupledMode,
    #[default]
    Hopfield,
}

impl PolaritonModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            PolaritonModelKind::CoupledMode => "coupled",
            PolaritonModelKind::Hopfield => "hopfield",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Lower,
    Upper,
}

impl Branch {
    pub fn label(&self) -> &'static str {
        match self {
            Branch::Lower => "LP",
            Branch::Upper => "UP",
        }
    }
}

/// Both branches at one field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPoint {
    pub b: f64,
    pub f_lp: f64,
    pub f_up: f64,
    pub w_phot_lp: f64,
    pub w_phot_up: f64,
    pub w_mat_lp: f64,
    pub w_mat_up: f64,
}

impl BranchPoint {
    pub fn frequency(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Lower => self.f_lp,
            Branch::Upper => self.f_up,
        }
    }

    pub fn photonic_weight(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Lower => self.w_phot_lp,
            Branch::Upper => self.w_phot_up,
        }
    }

    pub fn matter_weight(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Lower => self.w_mat_lp,
            Branch::Upper => self.w_mat_up,
        }
    }

    pub fn splitting(&self) -> f64 {
        self.f_up - self.f_lp
    }
}

/// Confined-2DEG magneto-plasmon √(f_c² + f_p²) (Hz).
pub fn magneto_plasmon_frequency(b: f64, r: &ResonatorParams, m: &MaterialParams) -> Result<f64> {
    check_field(b)?;
    Ok(magneto_plasmon_unchecked(b, r, m))
}

#[inline]
pub(crate) fn magneto_plasmon_unchecked(b: f64, r: &ResonatorParams, m: &MaterialParams) -> f64 {
    cyclotron_frequency_unchecked(b, m).hypot(r.f_p)
}

fn check_field(b: f64) -> Result<()> {
    if b >= 0.0 && b.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidField {
            value: b,
            expected: ">= 0",
        })
    }
}

/// Eigenfrequencies of [[f_cav, Ω], [Ω, f_mp]], ascending.
pub fn coupled_mode_roots(f_cav: f64, f_mp: f64, omega: f64) -> (f64, f64) {
    let mean = 0.5 * (f_cav + f_mp);
    let half_split = 0.5 * (f_cav - f_mp).hypot(2.0 * omega);
    (mean - half_split, mean + half_split)
}

/// Positive roots of f⁴ − f²(f_cav² + f_mp² + 4Ω²) + f_cav² f_mp² = 0, ascending.
pub fn hopfield_roots(f_cav: f64, f_mp: f64, omega: f64) -> (f64, f64) {
    let a = f_cav * f_cav;
    let b = f_mp * f_mp;
    let c = 4.0 * omega * omega;
    let sum = a + b + c;
    // S² − 4P written as a sum of non-negative terms
    let disc = (a - b) * (a - b) + c * (2.0 * (a + b) + c);
    assert!(disc >= 0.0, "Hopfield discriminant negative: {disc}");
    let x_up = 0.5 * (sum + disc.sqrt());
    let x_lp = if x_up > 0.0 { a * b / x_up } else { 0.0 };
    (x_lp.sqrt(), x_up.sqrt())
}

/// Photonic weight of an eigenmode at `f` from the 2×2 eigenvector
/// (Ω, f − f_cav).
fn photonic_weight(f: f64, f_cav: f64, omega: f64) -> f64 {
    let o2 = omega * omega;
    let d = f - f_cav;
    o2 / (o2 + d * d)
}

/// Branch point for an explicit coupling Ω_f (Hz). This is the hook for
/// field-dependent couplings.
pub fn branch_point_with_coupling(
    kind: PolaritonModelKind,
    b: f64,
    f_cav: f64,
    f_mp: f64,
    omega: f64,
) -> BranchPoint {
    let (f_lp, f_up) = match kind {
        PolaritonModelKind::CoupledMode => coupled_mode_roots(f_cav, f_mp, omega),
        PolaritonModelKind::Hopfield => hopfield_roots(f_cav, f_mp, omega),
    };
    let (w_phot_lp, w_phot_up) = if omega == 0.0 {
        // decoupled: the branch sitting on f_cav is the photon
        if f_cav <= f_mp {
            (1.0, 0.0)
        } else {
            (0.0, 1.0)
        }
    } else {
        (
            photonic_weight(f_lp, f_cav, omega),
            photonic_weight(f_up, f_cav, omega),
        )
    };
    BranchPoint {
        b,
        f_lp,
        f_up,
        w_phot_lp,
        w_phot_up,
        w_mat_lp: 1.0 - w_phot_lp,
        w_mat_up: 1.0 - w_phot_up,
    }
}

pub(crate) fn branch_point_unchecked(
    kind: PolaritonModelKind,
    b: f64,
    r: &ResonatorParams,
    m: &MaterialParams,
) -> BranchPoint {
    branch_point_with_coupling(
        kind,
        b,
        r.f_cav,
        magneto_plasmon_unchecked(b, r, m),
        r.coupling(),
    )
}

pub fn branch_point(
    kind: PolaritonModelKind,
    b: f64,
    r: &ResonatorParams,
    m: &MaterialParams,
) -> Result<BranchPoint> {
    check_field(b)?;
    Ok(branch_point_unchecked(kind, b, r, m))
}

pub fn branches_coupled_mode(b: f64, r: &ResonatorParams, m: &MaterialParams) -> Result<BranchPoint> {
    branch_point(PolaritonModelKind::CoupledMode, b, r, m)
}

pub fn branches_hopfield(b: f64, r: &ResonatorParams, m: &MaterialParams) -> Result<BranchPoint> {
    branch_point(PolaritonModelKind::Hopfield, b, r, m)
}

/// One branch point per B sample.
pub fn dispersion_sweep(
    b_axis: &Grid1D,
    kind: PolaritonModelKind,
    r: &ResonatorParams,
    m: &MaterialParams,
) -> Result<Vec<BranchPoint>> {
    check_field(b_axis.start())?;
    Ok(b_axis
        .samples()
        .map(|b| branch_point_unchecked(kind, b, r, m))
        .collect())
}

/// Field where the bare magneto-plasmon meets the cavity, if it does.
pub fn crossing_field(r: &ResonatorParams, m: &MaterialParams) -> Option<f64> {
    if r.f_p >= r.f_cav {
        return None;
    }
    let f_c = (r.f_cav * r.f_cav - r.f_p * r.f_p).sqrt();
    // invert f_c = eB/(2π m*)
    Some(f_c / cyclotron_frequency_unchecked(1.0, m))
}

/// Golden-section minimum of f_UP − f_LP over [b_lo, b_hi]. Returns (B, gap).
pub fn minimum_splitting(
    kind: PolaritonModelKind,
    r: &ResonatorParams,
    m: &MaterialParams,
    b_lo: f64,
    b_hi: f64,
) -> Result<(f64, f64)> {
    check_field(b_lo)?;
    if !(b_hi > b_lo) {
        return Err(Error::InvalidGrid(format!("empty field interval {b_lo}..{b_hi}")));
    }
    let gap = |b: f64| branch_point_unchecked(kind, b, r, m).splitting();
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut d) = (b_lo, b_hi);
    let mut b = d - inv_phi * (d - a);
    let mut c = a + inv_phi * (d - a);
    let (mut gb, mut gc) = (gap(b), gap(c));
    for _ in 0..200 {
        if (d - a) <= 1e-14 * d.abs().max(1e-300) {
            break;
        }
        if gb < gc {
            d = c;
            c = b;
            gc = gb;
            b = d - inv_phi * (d - a);
            gb = gap(b);
        } else {
            a = b;
            b = c;
            gb = gc;
            c = a + inv_phi * (d - a);
            gc = gap(c);
        }
    }
    let x = 0.5 * (a + d);
    Ok((x, gap(x)))
}

/// Full widths (Hz) of the two branches: photon-weighted cavity loss plus
/// matter-weighted level broadening Γ/h.
pub fn branch_linewidths(bp: &BranchPoint, r: &ResonatorParams, m: &MaterialParams) -> (f64, f64) {
    let kappa = r.linewidth();
    let gamma_hz = crate::constants::HBAR / m.tau_q / PLANCK;
    (
        kappa * bp.w_phot_lp + gamma_hz * bp.w_mat_lp,
        kappa * bp.w_phot_up + gamma_hz * bp.w_mat_up,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionOptions {
    /// Peak dip depth for a purely photonic branch.
    pub dip_depth: f64,
}

impl Default for TransmissionOptions {
    fn default() -> Self {
        Self { dip_depth: 0.8 }
    }
}

/// Transmission at one cell given the branch point at that field.
pub fn transmission_at(
    f: f64,
    bp: &BranchPoint,
    r: &ResonatorParams,
    m: &MaterialParams,
    opts: &TransmissionOptions,
) -> f64 {
    let (k_lp, k_up) = branch_linewidths(bp, r, m);
    let dip = opts.dip_depth * bp.w_phot_lp * lorentzian_peak1(f - bp.f_lp, 0.5 * k_lp)
        + opts.dip_depth * bp.w_phot_up * lorentzian_peak1(f - bp.f_up, 0.5 * k_up);
    (1.0 - dip).clamp(0.0, 1.0)
}

/// Synthetic THz transmission over a (B × f) grid. No filling-factor input
/// enters; the map depends only on the branch structure.
pub fn transmission_map(
    b_axis: &Grid1D,
    f_axis: &Grid1D,
    kind: PolaritonModelKind,
    r: &ResonatorParams,
    m: &MaterialParams,
    opts: &TransmissionOptions,
) -> Result<ResponseMap> {
    check_field(b_axis.start())?;
    let mut grid = Grid2D::new(*b_axis, *f_axis);
    let nf = f_axis.count();
    grid.values_mut()
        .par_chunks_mut(nf)
        .enumerate()
        .for_each(|(ib, row)| {
            let bp = branch_point_unchecked(kind, b_axis.sample(ib), r, m);
            for (jf, cell) in row.iter_mut().enumerate() {
                *cell = transmission_at(f_axis.sample(jf), &bp, r, m, opts);
            }
        });
    Ok(ResponseMap {
        grid,
        quantity: Quantity::Transmission,
    })
}
