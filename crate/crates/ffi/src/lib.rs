//! C ABI over `landau_polariton`.
//!
//! A `LpModel` handle owns one parameter set and a polariton model choice.
//! Every fallible function returns an `LpStatus`; on failure a message for
//! the calling thread is available from `lp_last_error_message`. Output
//! arrays are caller-allocated and their capacity is passed alongside.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use landau_polariton::fitting::{self, DispersionParams, FitOptions, ParamBounds, Peak, PeakList};
use landau_polariton::photoresponse::{self, PhotoResponseParams};
use landau_polariton::polariton::{self, TransmissionOptions};
use landau_polariton::{landau, transport};
use landau_polariton::{Branch, Error, Grid1D, MaterialParams, ParamFile, PolaritonModelKind, ResonatorParams};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    InvalidGrid = 3,
    BufferTooSmall = 4,
    NonConvergence = 5,
    Config = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpModelKind {
    Coupled = 0,
    Hopfield = 1,
}

impl From<LpModelKind> for PolaritonModelKind {
    fn from(k: LpModelKind) -> Self {
        match k {
            LpModelKind::Coupled => PolaritonModelKind::CoupledMode,
            LpModelKind::Hopfield => PolaritonModelKind::Hopfield,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpBranch {
    Lower = 0,
    Upper = 1,
}

/// Uniform axis: start + i·(stop − start)/(count − 1).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpAxis {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

/// Both polariton branches at one field. Frequencies in Hz.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LpBranchPoint {
    pub b: f64,
    pub f_lp: f64,
    pub f_up: f64,
    pub w_phot_lp: f64,
    pub w_phot_up: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpDecayLocus {
    pub n: u32,
    pub branch: LpBranch,
    pub b_star: f64,
    pub f_star: f64,
}

/// Dispersion parameters; frequencies in Hz.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LpDispersionParams {
    pub f_cav: f64,
    pub eta: f64,
    pub m_star_ratio: f64,
    pub f_p: f64,
}

impl From<DispersionParams> for LpDispersionParams {
    fn from(p: DispersionParams) -> Self {
        Self {
            f_cav: p.f_cav,
            eta: p.eta,
            m_star_ratio: p.m_star_ratio,
            f_p: p.f_p,
        }
    }
}

/// Opaque parameter handle.
pub struct LpModel {
    material: MaterialParams,
    resonator: ResonatorParams,
    kind: PolaritonModelKind,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> LpStatus {
    match e {
        Error::InvalidParameter { .. } | Error::InvalidField { .. } | Error::TooFewPoints { .. } => {
            LpStatus::InvalidParameter
        }
        Error::InvalidGrid(_) | Error::CountMismatch { .. } => LpStatus::InvalidGrid,
        Error::NonConvergence(_) => LpStatus::NonConvergence,
        _ => LpStatus::Config,
    }
}

fn fail(status: LpStatus, msg: &str) -> LpStatus {
    set_last_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), LpStatus>) -> LpStatus {
    set_last_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LpStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(LpStatus::Panic, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, LpStatus>;
}

impl<T> OrStatus<T> for landau_polariton::Result<T> {
    fn or_status(self) -> Result<T, LpStatus> {
        self.map_err(|e| fail(status_of(&e), &e.to_string()))
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), LpStatus> {
    if p.is_null() {
        Err(fail(LpStatus::NullPointer, &format!("`{name}` is NULL")))
    } else {
        Ok(())
    }
}

unsafe fn model_ref<'a>(h: *const LpModel) -> Result<&'a LpModel, LpStatus> {
    non_null(h, "model")?;
    Ok(&*h)
}

unsafe fn out_slice<'a>(out: *mut f64, len: usize, needed: usize) -> Result<&'a mut [f64], LpStatus> {
    non_null(out, "out")?;
    if len < needed {
        return Err(fail(
            LpStatus::BufferTooSmall,
            &format!("buffer holds {len} values, need {needed}"),
        ));
    }
    Ok(std::slice::from_raw_parts_mut(out, needed))
}

fn axis(a: &LpAxis) -> Result<Grid1D, LpStatus> {
    Grid1D::new(a.start, a.stop, a.count).or_status()
}

fn store(h: *mut *mut LpModel, m: LpModel) {
    unsafe { *h = Box::into_raw(Box::new(m)) };
}

/// Message for the last failure on this thread; empty after a success. Valid
/// until the next call on the same thread.
#[no_mangle]
pub extern "C" fn lp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// New handle with the default CH205 parameters and the Hopfield model.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn lp_model_new_default(out: *mut *mut LpModel) -> LpStatus {
    guard(|| {
        non_null(out, "out")?;
        store(
            out,
            LpModel {
                material: MaterialParams::default(),
                resonator: ResonatorParams::default(),
                kind: PolaritonModelKind::Hopfield,
            },
        );
        Ok(())
    })
}

/// New handle from a JSON parameter document (same keys as the CLI config).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` as for `lp_model_new_default`.
#[no_mangle]
pub unsafe extern "C" fn lp_model_from_json(json: *const c_char, out: *mut *mut LpModel) -> LpStatus {
    guard(|| {
        non_null(json, "json")?;
        non_null(out, "out")?;
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| fail(LpStatus::Config, "config is not UTF-8"))?;
        let (material, resonator) = ParamFile::parse(text).and_then(ParamFile::into_params).or_status()?;
        store(
            out,
            LpModel {
                material,
                resonator,
                kind: PolaritonModelKind::Hopfield,
            },
        );
        Ok(())
    })
}

/// Release a handle. NULL is ignored.
///
/// # Safety
/// `model` must come from an `lp_model_*` constructor and not be used again.
#[no_mangle]
pub unsafe extern "C" fn lp_model_free(model: *mut LpModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lp_model_set_kind(model: *mut LpModel, kind: LpModelKind) -> LpStatus {
    guard(|| {
        non_null(model, "model")?;
        (*model).kind = kind.into();
        Ok(())
    })
}

/// Override the normalized coupling η (≥ 0).
///
/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lp_model_set_eta(model: *mut LpModel, eta: f64) -> LpStatus {
    guard(|| {
        non_null(model, "model")?;
        let r = (*model).resonator.with_eta(eta);
        r.validate().or_status()?;
        (*model).resonator = r;
        Ok(())
    })
}

/// f_c = eB/(2π m*) in Hz.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_cyclotron_frequency(model: *const LpModel, b: f64, out: *mut f64) -> LpStatus {
    guard(|| {
        let m = model_ref(model)?;
        non_null(out, "out")?;
        *out = landau::cyclotron_frequency(b, &m.material).or_status()?;
        Ok(())
    })
}

/// ν = h n_s/(2eB).
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_filling_factor(model: *const LpModel, b: f64, out: *mut f64) -> LpStatus {
    guard(|| {
        let m = model_ref(model)?;
        non_null(out, "out")?;
        *out = landau::filling_factor(b, &m.material).or_status()?;
        Ok(())
    })
}

/// Polariton branches at field `b` (T, ≥ 0).
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_branches(model: *const LpModel, b: f64, out: *mut LpBranchPoint) -> LpStatus {
    guard(|| {
        let m = model_ref(model)?;
        non_null(out, "out")?;
        let bp = polariton::branch_point(m.kind, b, &m.resonator, &m.material).or_status()?;
        *out = LpBranchPoint {
            b: bp.b,
            f_lp: bp.f_lp,
            f_up: bp.f_up,
            w_phot_lp: bp.w_phot_lp,
            w_phot_up: bp.w_phot_up,
        };
        Ok(())
    })
}

/// Dark ρ_xx (Ω/sq) on a positive field axis; writes `b_axis.count` values.
///
/// # Safety
/// `model` must be a live handle and `out` valid for `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn lp_rho_xx(model: *const LpModel, b_axis: LpAxis, out: *mut f64, out_len: usize) -> LpStatus {
    guard(|| {
        let m = model_ref(model)?;
        let b = axis(&b_axis)?;
        let dst = out_slice(out, out_len, b.count())?;
        let trace = transport::rho_xx_dark(&b, &m.resonator, &m.material).or_status()?;
        dst.copy_from_slice(&trace.rho_xx);
        Ok(())
    })
}

/// Transmission map, row-major over (B, f); writes `b.count·f.count` values.
///
/// # Safety
/// `model` must be a live handle and `out` valid for `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn lp_transmission_map(
    model: *const LpModel,
    b_axis: LpAxis,
    f_axis: LpAxis,
    out: *mut f64,
    out_len: usize,
) -> LpStatus {
    guard(|| {
        let m = model_ref(model)?;
        let (b, f) = (axis(&b_axis)?, axis(&f_axis)?);
        let dst = out_slice(out, out_len, b.count() * f.count())?;
        let map = polariton::transmission_map(&b, &f, m.kind, &m.resonator, &m.material, &TransmissionOptions::default())
            .or_status()?;
        dst.copy_from_slice(map.grid.values());
        Ok(())
    })
}

/// Photo-response map with default channel amplitudes, row-major over (B, f).
///
/// # Safety
/// `model` must be a live handle and `out` valid for `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn lp_photoresponse_map(
    model: *const LpModel,
    b_axis: LpAxis,
    f_axis: LpAxis,
    out: *mut f64,
    out_len: usize,
) -> LpStatus {
    guard(|| {
        let m = model_ref(model)?;
        let (b, f) = (axis(&b_axis)?, axis(&f_axis)?);
        let dst = out_slice(out, out_len, b.count() * f.count())?;
        let map = photoresponse::photoresponse_map(
            &b,
            &f,
            m.kind,
            &m.resonator,
            &m.material,
            &PhotoResponseParams::default(),
        )
        .or_status()?;
        dst.copy_from_slice(map.grid.values());
        Ok(())
    })
}

/// Decay loci for n = 2..=n_max in [b_lo, b_hi]. `*count` receives the number
/// found even when `capacity` is too small (status `BUFFER_TOO_SMALL`).
///
/// # Safety
/// `model` must be a live handle, `out` valid for `capacity` elements (may be
/// NULL when `capacity` is 0) and `count` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_decay_loci(
    model: *const LpModel,
    n_max: u32,
    b_lo: f64,
    b_hi: f64,
    out: *mut LpDecayLocus,
    capacity: usize,
    count: *mut usize,
) -> LpStatus {
    guard(|| {
        let m = model_ref(model)?;
        non_null(count, "count")?;
        let loci = photoresponse::decay_loci(m.kind, &m.resonator, &m.material, 2..=n_max, b_lo, b_hi).or_status()?;
        *count = loci.len();
        if loci.len() > capacity {
            return Err(fail(
                LpStatus::BufferTooSmall,
                &format!("{} loci found, capacity {capacity}", loci.len()),
            ));
        }
        if loci.is_empty() {
            return Ok(());
        }
        non_null(out, "out")?;
        let dst = std::slice::from_raw_parts_mut(out, loci.len());
        for (d, l) in dst.iter_mut().zip(&loci) {
            *d = LpDecayLocus {
                n: l.n,
                branch: match l.branch {
                    Branch::Lower => LpBranch::Lower,
                    Branch::Upper => LpBranch::Upper,
                },
                b_star: l.b_star,
                f_star: l.f_star,
            };
        }
        Ok(())
    })
}

/// Fit the dispersion to `n` points (B in T, f in Hz, weights > 0) starting
/// from the handle's parameters, with the default search box and without
/// bootstrap. `m_star_fixed` ≠ 0 holds m*/m_e at the handle's value.
///
/// # Safety
/// `model` must be a live handle, the three arrays valid for `n` doubles and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_fit_dispersion(
    model: *const LpModel,
    b: *const f64,
    f: *const f64,
    weight: *const f64,
    n: usize,
    seed: u64,
    m_star_fixed: i32,
    out: *mut LpDispersionParams,
) -> LpStatus {
    guard(|| {
        let m = model_ref(model)?;
        non_null(out, "out")?;
        let points = if n == 0 {
            Vec::new()
        } else {
            non_null(b, "b")?;
            non_null(f, "f")?;
            non_null(weight, "weight")?;
            let (b, f, w) = (
                std::slice::from_raw_parts(b, n),
                std::slice::from_raw_parts(f, n),
                std::slice::from_raw_parts(weight, n),
            );
            (0..n).map(|i| Peak { b: b[i], f: f[i], weight: w[i] }).collect()
        };
        let peaks = PeakList::new(points, "ffi").or_status()?;
        let theta0 = DispersionParams::from_params(&m.material, &m.resonator);
        let mut bounds = ParamBounds::around(&theta0);
        if m_star_fixed != 0 {
            bounds = bounds.fix_m_star(theta0.m_star_ratio);
        }
        let opts = FitOptions {
            seed,
            bootstrap_samples: 0,
            ..Default::default()
        };
        let fit = fitting::fit_dispersion(&peaks, m.kind, &theta0, &bounds, &opts).or_status()?;
        if !fit.converged {
            return Err(fail(LpStatus::NonConvergence, "simplex did not contract"));
        }
        *out = fit.theta.into();
        Ok(())
    })
}
