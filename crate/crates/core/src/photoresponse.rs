//! Irradiation photo-response maps R(B, f) = Δρ_xx/P_irr and the polariton
//! decay loci.
//!
//! The response has two channels gated by the character of the states at the
//! Fermi level: delocalized states (half-integer ν) respond where the drive is
//! resonant with a polariton branch, weighted by the branch's matter fraction;
//! localized states (integer ν) respond on the inter-Landau-level line n·f_c and
//! its harmonics.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::grid::{Grid1D, Grid2D, Quantity, ResponseMap};
use crate::landau::{cyclotron_frequency_unchecked, fermi_state_unchecked, filling_factor_unchecked};
use crate::lineshape::lorentzian_peak1;
use crate::params::{MaterialParams, ResonatorParams};
use crate::polariton::{
    branch_linewidths, branch_point_unchecked, Branch, BranchPoint, PolaritonModelKind,
};

/// Channel amplitudes in Ω per unit normalized power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotoResponseParams {
    /// Polariton channel, negative.
    pub a_pol: f64,
    /// Fundamental inter-Landau-level line.
    pub a_1: f64,
    /// Every harmonic n ≥ 2.
    pub a_hi: f64,
    pub n_max_harmonic: u32,
    /// Inter-Landau-level line half-width (Hz).
    pub gamma_ll: f64,
}

impl Default for PhotoResponseParams {
    fn default() -> Self {
        Self {
            a_pol: -2.0,
            a_1: 1.0,
            a_hi: 0.3,
            n_max_harmonic: 4,
            gamma_ll: 10e9,
        }
    }
}

impl PhotoResponseParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.a_pol < 0.0) {
            return Err(Error::param("A_pol", "must be negative"));
        }
        if !(self.a_hi > 0.0 && self.a_hi <= self.a_1) {
            return Err(Error::param("A_hi", "need 0 < A_hi <= A_1"));
        }
        if self.n_max_harmonic < 1 {
            return Err(Error::param("n_max_harmonic", "must be >= 1"));
        }
        if !(self.gamma_ll > 0.0) {
            return Err(Error::param("gamma_LL", "must be > 0"));
        }
        Ok(())
    }

    fn harmonic_amplitude(&self, n: u32) -> f64 {
        if n == 1 {
            self.a_1
        } else {
            self.a_hi
        }
    }
}

/// Everything the two channels need at one field.
#[derive(Debug, Clone, Copy)]
struct RowContext {
    bp: BranchPoint,
    hw_lp: f64,
    hw_up: f64,
    f_c: f64,
    w_deloc: f64,
    w_loc: f64,
}

impl RowContext {
    fn new(kind: PolaritonModelKind, b: f64, r: &ResonatorParams, m: &MaterialParams) -> Self {
        let bp = branch_point_unchecked(kind, b, r, m);
        let (k_lp, k_up) = branch_linewidths(&bp, r, m);
        let st = fermi_state_unchecked(b, m);
        Self {
            bp,
            hw_lp: 0.5 * k_lp,
            hw_up: 0.5 * k_up,
            f_c: cyclotron_frequency_unchecked(b, m),
            w_deloc: st.w_deloc,
            w_loc: st.w_loc,
        }
    }

    fn polariton_term(&self, f: f64, p: &PhotoResponseParams) -> f64 {
        p.a_pol * self.bp.w_mat_lp * lorentzian_peak1(f - self.bp.f_lp, self.hw_lp)
            + p.a_pol * self.bp.w_mat_up * lorentzian_peak1(f - self.bp.f_up, self.hw_up)
    }

    fn harmonic_term(&self, f: f64, p: &PhotoResponseParams) -> f64 {
        (1..=p.n_max_harmonic)
            .map(|n| p.harmonic_amplitude(n) * lorentzian_peak1(f - n as f64 * self.f_c, p.gamma_ll))
            .sum()
    }

    fn response(&self, f: f64, p: &PhotoResponseParams) -> f64 {
        self.w_deloc * self.polariton_term(f, p) + self.w_loc * self.harmonic_term(f, p)
    }
}

/// Ungated channel values at one point: (polariton term, harmonic term).
pub fn photoresponse_channels_at(
    b: f64,
    f: f64,
    kind: PolaritonModelKind,
    r: &ResonatorParams,
    m: &MaterialParams,
    p: &PhotoResponseParams,
) -> Result<(f64, f64)> {
    check_positive(b)?;
    let ctx = RowContext::new(kind, b, r, m);
    Ok((ctx.polariton_term(f, p), ctx.harmonic_term(f, p)))
}

/// Gated response at one point.
pub fn photoresponse_at(
    b: f64,
    f: f64,
    kind: PolaritonModelKind,
    r: &ResonatorParams,
    m: &MaterialParams,
    p: &PhotoResponseParams,
) -> Result<f64> {
    check_positive(b)?;
    Ok(RowContext::new(kind, b, r, m).response(f, p))
}

fn check_positive(b: f64) -> Result<()> {
    if b > 0.0 && b.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidField {
            value: b,
            expected: "> 0",
        })
    }
}

fn build_map(
    b_axis: &Grid1D,
    f_axis: &Grid1D,
    kind: PolaritonModelKind,
    r: &ResonatorParams,
    m: &MaterialParams,
    cell: impl Fn(&RowContext, f64) -> f64 + Sync,
) -> Result<Grid2D> {
    check_positive(b_axis.start())?;
    let mut grid = Grid2D::new(*b_axis, *f_axis);
    let nf = f_axis.count();
    grid.values_mut()
        .par_chunks_mut(nf)
        .enumerate()
        .for_each(|(ib, row)| {
            let ctx = RowContext::new(kind, b_axis.sample(ib), r, m);
            for (jf, v) in row.iter_mut().enumerate() {
                *v = cell(&ctx, f_axis.sample(jf));
            }
        });
    Ok(grid)
}

/// R(B, f) over a grid with B > 0.
pub fn photoresponse_map(
    b_axis: &Grid1D,
    f_axis: &Grid1D,
    kind: PolaritonModelKind,
    r: &ResonatorParams,
    m: &MaterialParams,
    p: &PhotoResponseParams,
) -> Result<ResponseMap> {
    p.validate()?;
    let grid = build_map(b_axis, f_axis, kind, r, m, |ctx, f| ctx.response(f, p))?;
    Ok(ResponseMap {
        grid,
        quantity: Quantity::Photoresponse,
    })
}

/// The two ungated channels as separate maps: (polariton, harmonic).
pub fn photoresponse_channel_maps(
    b_axis: &Grid1D,
    f_axis: &Grid1D,
    kind: PolaritonModelKind,
    r: &ResonatorParams,
    m: &MaterialParams,
    p: &PhotoResponseParams,
) -> Result<(Grid2D, Grid2D)> {
    p.validate()?;
    let pol = build_map(b_axis, f_axis, kind, r, m, |ctx, f| ctx.polariton_term(f, p))?;
    let harm = build_map(b_axis, f_axis, kind, r, m, |ctx, f| ctx.harmonic_term(f, p))?;
    Ok((pol, harm))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FillingSlice {
    Integer,
    HalfInteger,
}

impl FillingSlice {
    /// Distance of ν from the nearest integer or half-integer.
    pub fn distance(&self, nu: f64) -> f64 {
        match self {
            FillingSlice::Integer => (nu - nu.round()).abs(),
            FillingSlice::HalfInteger => (nu - nu.floor() - 0.5).abs(),
        }
    }
}

/// Keep the B rows whose ν is within `tol` of an integer (or half-integer) and
/// linearly interpolate them back onto the full B axis. Outside the first and
/// last kept rows the nearest kept row is repeated.
pub fn slice_by_filling(
    map: &ResponseMap,
    m: &MaterialParams,
    which: FillingSlice,
    tol: f64,
) -> Result<ResponseMap> {
    let b_axis = *map.b_axis();
    let kept: Vec<usize> = (0..b_axis.count())
        .filter(|&i| {
            let b = b_axis.sample(i);
            b > 0.0 && which.distance(filling_factor_unchecked(b, m)) <= tol
        })
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptySlice { tol });
    }
    let nf = map.f_axis().count();
    let mut out = Grid2D::new(b_axis, *map.f_axis());
    for i in 0..b_axis.count() {
        let dst = &mut out.values_mut()[i * nf..(i + 1) * nf];
        match kept.binary_search(&i) {
            Ok(_) => dst.copy_from_slice(map.grid.row(i)),
            Err(pos) => {
                if pos == 0 {
                    dst.copy_from_slice(map.grid.row(kept[0]));
                } else if pos == kept.len() {
                    dst.copy_from_slice(map.grid.row(kept[pos - 1]));
                } else {
                    let (lo, hi) = (kept[pos - 1], kept[pos]);
                    let (b_lo, b_hi) = (b_axis.sample(lo), b_axis.sample(hi));
                    let t = (b_axis.sample(i) - b_lo) / (b_hi - b_lo);
                    let (r_lo, r_hi) = (map.grid.row(lo), map.grid.row(hi));
                    for (j, v) in dst.iter_mut().enumerate() {
                        *v = r_lo[j] + t * (r_hi[j] - r_lo[j]);
                    }
                }
            }
        }
    }
    Ok(ResponseMap {
        grid: out,
        quantity: map.quantity,
    })
}

/// Field and frequency where a polariton branch meets the n-th harmonic of the
/// cyclotron line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayLocus {
    pub n: u32,
    pub branch: Branch,
    pub b_star: f64,
    pub f_star: f64,
}

const LOCI_SCAN_INTERVALS: usize = 4096;
const LOCI_REL_TOL: f64 = 1e-10;

/// Residual f_branch(B) − n·f_c(B) whose zeros are decay loci.
pub fn decay_residual(
    kind: PolaritonModelKind,
    branch: Branch,
    n: u32,
    b: f64,
    r: &ResonatorParams,
    m: &MaterialParams,
) -> f64 {
    branch_point_unchecked(kind, b, r, m).frequency(branch) - n as f64 * cyclotron_frequency_unchecked(b, m)
}

fn bisect(mut lo: f64, mut hi: f64, mut g_lo: f64, g: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= LOCI_REL_TOL * mid {
            return mid;
        }
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return mid;
        }
        if (g_mid < 0.0) == (g_lo < 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All crossings of each branch with n·f_c for n in `n_range` inside
/// [b_lo, b_hi]. Sign changes are bracketed on a uniform scan and refined by
/// bisection to 1e-10 relative in B. Sorted by B*, then n.
pub fn decay_loci(
    kind: PolaritonModelKind,
    r: &ResonatorParams,
    m: &MaterialParams,
    n_range: RangeInclusive<u32>,
    b_lo: f64,
    b_hi: f64,
) -> Result<Vec<DecayLocus>> {
    if *n_range.start() < 2 {
        return Err(Error::param("n", "decay harmonics start at n = 2"));
    }
    check_positive(b_lo)?;
    if !(b_hi > b_lo) {
        return Err(Error::InvalidGrid(format!("empty field interval {b_lo}..{b_hi}")));
    }
    let scan = Grid1D::new(b_lo, b_hi, LOCI_SCAN_INTERVALS + 1)?;
    let jobs: Vec<(u32, Branch)> = n_range
        .flat_map(|n| [(n, Branch::Lower), (n, Branch::Upper)])
        .collect();
    let mut loci: Vec<DecayLocus> = jobs
        .par_iter()
        .flat_map_iter(|&(n, branch)| {
            let g = move |b: f64| decay_residual(kind, branch, n, b, r, m);
            let values: Vec<f64> = scan.samples().map(g).collect();
            let mut found = Vec::new();
            for i in 0..values.len() {
                let b_i = scan.sample(i);
                if values[i] == 0.0 {
                    found.push(b_i);
                } else if i + 1 < values.len()
                    && values[i + 1] != 0.0
                    && (values[i] < 0.0) != (values[i + 1] < 0.0)
                {
                    found.push(bisect(b_i, scan.sample(i + 1), values[i], g));
                }
            }
            found.into_iter().map(move |b_star| DecayLocus {
                n,
                branch,
                b_star,
                f_star: n as f64 * cyclotron_frequency_unchecked(b_star, m),
            })
        })
        .collect();
    loci.sort_by(|a, b| {
        a.b_star
            .total_cmp(&b.b_star)
            .then(a.n.cmp(&b.n))
            .then((a.branch as u8).cmp(&(b.branch as u8)))
    });
    Ok(loci)
}

/// Steady-state polariton number N = a·P·τ_pol/(ħω_cav), τ_pol = Q/ω_cav,
/// with `absorbed_fraction` a ∈ [0, 1].
pub fn estimate_polariton_population(
    p_irr: f64,
    r: &ResonatorParams,
    absorbed_fraction: f64,
) -> Result<f64> {
    if !(p_irr >= 0.0 && p_irr.is_finite()) {
        return Err(Error::param("P_irr", format!("must be >= 0, got {p_irr}")));
    }
    if !(0.0..=1.0).contains(&absorbed_fraction) {
        return Err(Error::param(
            "absorbed_fraction",
            format!("must be in [0, 1], got {absorbed_fraction}"),
        ));
    }
    let omega = 2.0 * PI * r.f_cav;
    let lifetime = r.q / omega;
    Ok(absorbed_fraction * p_irr * lifetime / (HBAR * omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polariton::crossing_field;

    const GHZ: f64 = 1e9;

    fn m() -> MaterialParams {
        MaterialParams::default()
    }

    fn nu1() -> f64 {
        filling_factor_unchecked(1.0, &m())
    }

    #[test]
    fn params_validation() {
        assert!(PhotoResponseParams::default().validate().is_ok());
        let bad = PhotoResponseParams {
            a_pol: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = PhotoResponseParams {
            a_hi: 2.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = PhotoResponseParams {
            n_max_harmonic: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn integer_filling_kills_polariton_channel() {
        let (mat, r, p) = (m(), ResonatorParams::default(), PhotoResponseParams::default());
        let kind = PolaritonModelKind::Hopfield;
        for k in 6..30 {
            let b = nu1() / k as f64;
            let ctx = RowContext::new(kind, b, &r, &mat);
            let at_lp = ctx.response(ctx.bp.f_lp, &p);
            assert!((at_lp - ctx.harmonic_term(ctx.bp.f_lp, &p)).abs() < 1e-12);
            // on the cyclotron line the fundamental dominates
            let at_fc = photoresponse_at(b, ctx.f_c, kind, &r, &mat, &p).unwrap();
            assert!(at_fc >= 1.0 && at_fc < 1.05, "nu = {k}: {at_fc}");
        }
    }

    #[test]
    fn half_integer_filling_is_polariton_only() {
        let (mat, r, p) = (m(), ResonatorParams::default(), PhotoResponseParams::default());
        let kind = PolaritonModelKind::CoupledMode;
        for k in 6..30 {
            let b = nu1() / (k as f64 + 0.5);
            let ctx = RowContext::new(kind, b, &r, &mat);
            for f in [ctx.bp.f_lp, ctx.bp.f_up, ctx.f_c, 2.0 * ctx.f_c] {
                let v = ctx.response(f, &p);
                assert!((v - ctx.polariton_term(f, &p)).abs() < 1e-12);
                assert!(v <= 0.0);
            }
            let (branch_f, w_mat) = if ctx.bp.w_mat_lp >= 0.5 {
                (ctx.bp.f_lp, ctx.bp.w_mat_lp)
            } else {
                (ctx.bp.f_up, ctx.bp.w_mat_up)
            };
            let v = ctx.response(branch_f, &p);
            assert!(v <= p.a_pol * w_mat + 1e-12);
            assert!((-3.0..=-1.0).contains(&v), "nu = {k}.5: {v}");
        }
    }

    #[test]
    fn map_decomposes_into_channels() {
        let (mat, r, p) = (m(), ResonatorParams::default(), PhotoResponseParams::default());
        let b_axis = Grid1D::new(0.1, 1.2, 57).unwrap();
        let f_axis = Grid1D::new(60.0 * GHZ, 600.0 * GHZ, 41).unwrap();
        let kind = PolaritonModelKind::Hopfield;
        let map = photoresponse_map(&b_axis, &f_axis, kind, &r, &mat, &p).unwrap();
        let (pol, harm) = photoresponse_channel_maps(&b_axis, &f_axis, kind, &r, &mat, &p).unwrap();
        for ib in 0..b_axis.count() {
            let st = fermi_state_unchecked(b_axis.sample(ib), &mat);
            for jf in 0..f_axis.count() {
                let v = st.w_deloc * pol.get(ib, jf) + st.w_loc * harm.get(ib, jf);
                assert_eq!(v.to_bits(), map.grid.get(ib, jf).to_bits());
            }
        }
        assert_eq!(map.quantity, Quantity::Photoresponse);
    }

    #[test]
    fn map_rejects_zero_field() {
        let b_axis = Grid1D::new(0.0, 1.2, 5).unwrap();
        let f_axis = Grid1D::new(60.0 * GHZ, 600.0 * GHZ, 5).unwrap();
        let res = photoresponse_map(&b_axis, &f_axis, Default::default(), &Default::default(), &m(), &Default::default());
        assert!(res.is_err());
    }

    #[test]
    fn slice_with_half_tolerance_is_identity() {
        let (mat, r, p) = (m(), ResonatorParams::default(), PhotoResponseParams::default());
        let b_axis = Grid1D::new(0.1, 1.2, 80).unwrap();
        let f_axis = Grid1D::new(60.0 * GHZ, 600.0 * GHZ, 30).unwrap();
        let map = photoresponse_map(&b_axis, &f_axis, Default::default(), &r, &mat, &p).unwrap();
        for which in [FillingSlice::Integer, FillingSlice::HalfInteger] {
            assert_eq!(slice_by_filling(&map, &mat, which, 0.5).unwrap(), map);
        }
    }

    #[test]
    fn integer_slice_of_polariton_channel_vanishes() {
        // gating oracle: the polariton channel times w_deloc, evaluated directly
        let (mat, r, p) = (m(), ResonatorParams::default(), PhotoResponseParams::default());
        let b_axis = Grid1D::new(0.2, 1.2, 20_001).unwrap();
        let f_axis = Grid1D::new(60.0 * GHZ, 600.0 * GHZ, 28).unwrap();
        let kind = PolaritonModelKind::Hopfield;
        let (pol, _) = photoresponse_channel_maps(&b_axis, &f_axis, kind, &r, &mat, &p).unwrap();
        let mut gated = pol.clone();
        let nf = f_axis.count();
        for ib in 0..b_axis.count() {
            let w = fermi_state_unchecked(b_axis.sample(ib), &mat).w_deloc;
            for v in &mut gated.values_mut()[ib * nf..(ib + 1) * nf] {
                *v *= w;
            }
        }
        let map = ResponseMap {
            grid: gated,
            quantity: Quantity::Photoresponse,
        };
        let sl = slice_by_filling(&map, &mat, FillingSlice::Integer, 0.005).unwrap();
        let worst = sl.grid.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
        assert!(worst < 1e-3 * p.a_pol.abs(), "{worst}");
    }

    #[test]
    fn slice_errors_when_nothing_matches() {
        let mat = m();
        // ν between 6.8 and 6.9 only
        let b_axis = Grid1D::new(nu1() / 6.9, nu1() / 6.8, 10).unwrap();
        let f_axis = Grid1D::new(60.0 * GHZ, 600.0 * GHZ, 4).unwrap();
        let map = ResponseMap {
            grid: Grid2D::new(b_axis, f_axis),
            quantity: Quantity::Photoresponse,
        };
        assert!(matches!(
            slice_by_filling(&map, &mat, FillingSlice::Integer, 0.05),
            Err(Error::EmptySlice { .. })
        ));
        assert!(slice_by_filling(&map, &mat, FillingSlice::HalfInteger, 0.35).is_ok());
    }

    #[test]
    fn slice_interpolates_between_kept_rows() {
        let mat = m();
        let b_axis = Grid1D::new(0.5, 1.2, 200).unwrap();
        let f_axis = Grid1D::new(60.0 * GHZ, 600.0 * GHZ, 3).unwrap();
        // value = B makes linear interpolation exact
        let vals = b_axis.samples().flat_map(|b| [b, b, b]).collect();
        let map = ResponseMap {
            grid: Grid2D::from_values(b_axis, f_axis, vals).unwrap(),
            quantity: Quantity::Photoresponse,
        };
        let sl = slice_by_filling(&map, &mat, FillingSlice::Integer, 0.02).unwrap();
        let kept: Vec<usize> = (0..200)
            .filter(|&i| FillingSlice::Integer.distance(filling_factor_unchecked(b_axis.sample(i), &mat)) <= 0.02)
            .collect();
        let (first, last) = (kept[0], *kept.last().unwrap());
        for i in first..=last {
            assert!((sl.grid.get(i, 1) - b_axis.sample(i)).abs() < 1e-12);
        }
        assert_eq!(sl.grid.get(0, 0), b_axis.sample(first));
        assert_eq!(sl.grid.get(199, 2), b_axis.sample(last));
    }

    #[test]
    fn no_loci_for_bare_cyclotron() {
        let mat = m();
        let r = ResonatorParams {
            eta: 0.0,
            f_p: 0.0,
            ..Default::default()
        };
        let loci = decay_loci(PolaritonModelKind::CoupledMode, &r, &mat, 2..=5, 1e-3, 2.0).unwrap();
        // LP is the bare cyclotron line below the cavity; the only crossings are
        // the flat cavity line f_cav = n f_c on the upper branch
        assert!(loci.iter().all(|l| l.branch == Branch::Upper));
        assert_eq!(loci.len(), 4);
        assert!(loci.iter().all(|l| (l.f_star - r.f_cav).abs() / r.f_cav < 1e-8));
        assert!(loci.iter().all(|l| l.b_star < crossing_field(&r, &mat).unwrap()));
    }

    #[test]
    fn second_harmonic_crossing_without_plasmon() {
        let mat = m();
        let r = ResonatorParams {
            f_p: 0.0,
            ..Default::default()
        };
        let kind = PolaritonModelKind::CoupledMode;
        let loci = decay_loci(kind, &r, &mat, 2..=2, 1e-4, 1.0).unwrap();
        let lower: Vec<_> = loci.iter().filter(|l| l.branch == Branch::Lower).collect();
        let upper: Vec<_> = loci.iter().filter(|l| l.branch == Branch::Upper).collect();
        assert!(lower.is_empty());
        assert_eq!(upper.len(), 1);
        // mpmath root of f_UP(B) = 2 f_c(B)
        assert!((upper[0].b_star - 0.263_600_288_190_262).abs() < 1e-9);

        // brute-force sign scan oracle on 10⁵ points
        let n = 100_000;
        let count = |branch| {
            let mut c = 0;
            let mut prev = decay_residual(kind, branch, 2, 1e-4, &r, &mat);
            for i in 1..=n {
                let b = 1e-4 + (1.0 - 1e-4) * i as f64 / n as f64;
                let g = decay_residual(kind, branch, 2, b, &r, &mat);
                if (g < 0.0) != (prev < 0.0) {
                    c += 1;
                }
                prev = g;
            }
            c
        };
        assert_eq!(count(Branch::Lower), 0);
        assert_eq!(count(Branch::Upper), 1);
    }

    #[test]
    fn loci_satisfy_both_equalities() {
        let mat = m();
        for r in [ResonatorParams::ch205(), ResonatorParams::ch140()] {
            for kind in [PolaritonModelKind::CoupledMode, PolaritonModelKind::Hopfield] {
                let loci = decay_loci(kind, &r, &mat, 2..=6, 0.02, 1.5).unwrap();
                assert!(!loci.is_empty());
                for l in &loci {
                    assert!((0.02..=1.5).contains(&l.b_star));
                    let f_branch = branch_point_unchecked(kind, l.b_star, &r, &mat).frequency(l.branch);
                    let f_harm = l.n as f64 * cyclotron_frequency_unchecked(l.b_star, &mat);
                    assert!((f_branch - l.f_star).abs() / l.f_star < 1e-8);
                    assert!((f_harm - l.f_star).abs() / l.f_star < 1e-8);
                }
                assert!(loci.windows(2).all(|w| w[0].b_star <= w[1].b_star));
            }
        }
    }

    #[test]
    fn loci_reject_first_harmonic() {
        let r = ResonatorParams::default();
        assert!(decay_loci(PolaritonModelKind::Hopfield, &r, &m(), 1..=3, 0.1, 1.0).is_err());
        assert!(decay_loci(PolaritonModelKind::Hopfield, &r, &m(), 2..=3, 0.0, 1.0).is_err());
    }

    #[test]
    fn population_estimate() {
        let r = ResonatorParams::default();
        assert_eq!(estimate_polariton_population(0.0, &r, 1.0).unwrap(), 0.0);
        let n1 = estimate_polariton_population(1e-6, &r, 1.0).unwrap();
        let n2 = estimate_polariton_population(2e-6, &r, 1.0).unwrap();
        assert_eq!(n2, 2.0 * n1);
        // python: P·Q/(ħω²) at 1 µW, 205 GHz, Q = 5
        assert!((n1 - 28_577.641_541).abs() / n1 < 1e-9);
        let six = estimate_polariton_population(1e-6, &r, 2.099_543_446e-4).unwrap();
        assert!((six - 6.0).abs() < 1e-6);
        assert!(estimate_polariton_population(-1.0, &r, 1.0).is_err());
        assert!(estimate_polariton_population(1.0, &r, 1.5).is_err());
    }

    #[test]
    fn harmonic_lines_weaker_than_fundamental() {
        let p = PhotoResponseParams::default();
        assert!(p.harmonic_amplitude(2) < p.harmonic_amplitude(1));
        assert!((2..=p.n_max_harmonic).all(|n| p.harmonic_amplitude(n) == p.a_hi));
    }
}
