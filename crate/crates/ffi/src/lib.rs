//! C interface to heightbound.
//!
//! Every function returns an [`HbStatus`]; on anything other than
//! `HB_OK` the message is available from [`hb_last_error`] on the same
//! thread. Handles are opaque and must be released with their `_free`
//! function. Strings returned through `char **` are owned by the caller
//! and released with [`hb_string_free`].

use heightbound::analytic::{faltings_height, injectivity_diameter, matrix_lemma_check, AnalyticError, ErrReal};
use heightbound::arith::{format_rational, parse_rational, ArithError};
use heightbound::bounds::{rank_bound, RankBoundInputs};
use heightbound::curve::{conductor_norms, minimal_model, CurveError, MinimalModelResult, WeierstrassCurve};
use heightbound::harness::{emit, ingest, run_corpus, Config, CurveReport, Format, HarnessError};
use heightbound::heights::{canonical_height, HeightError};
use libc::{c_char, c_double, size_t};
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HbStatus {
    HB_OK = 0,
    HB_NULL_POINTER = 1,
    HB_INVALID_ARGUMENT = 2,
    HB_PARSE = 3,
    HB_SINGULAR = 4,
    HB_NOT_ON_CURVE = 5,
    HB_PRECISION = 6,
    HB_IO = 7,
    HB_INTERNAL = 8,
}

/// A real number known to lie in [mid - rad, mid + rad]. The radius
/// covers the rounding of the midpoint to double.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HbBall {
    pub mid: c_double,
    pub rad: c_double,
}

#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HbFormat {
    HB_FORMAT_JSONL = 0,
    HB_FORMAT_CSV = 1,
}

/// Conductor norms as logarithms.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HbConductor {
    pub log_n0: HbBall,
    pub log_nst: HbBall,
    pub log_nuns: HbBall,
}

/// Analytic invariants of the minimal model.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HbFaltings {
    pub hf_plus: HbBall,
    pub hf_classical: HbBall,
    pub tau_re: HbBall,
    pub tau_im: HbBall,
    pub rho: HbBall,
    /// 16 hF+ + 39 - rho^-2
    pub matrix_lemma_slack: HbBall,
    pub bits: u32,
}

/// Minimal model of an elliptic curve over Q.
pub struct HbCurve {
    min: MinimalModelResult,
}

/// Reports from a corpus run.
pub struct HbReports {
    reports: Vec<CurveReport>,
}

struct Failure(HbStatus, String);

impl From<CurveError> for Failure {
    fn from(e: CurveError) -> Failure {
        let code = match &e {
            CurveError::SingularCurve => HbStatus::HB_SINGULAR,
            CurveError::NotOnCurve(..) => HbStatus::HB_NOT_ON_CURVE,
            CurveError::Arith(ArithError::BadRational(_)) => HbStatus::HB_PARSE,
            _ => HbStatus::HB_INVALID_ARGUMENT,
        };
        Failure(code, e.to_string())
    }
}

impl From<ArithError> for Failure {
    fn from(e: ArithError) -> Failure {
        CurveError::from(e).into()
    }
}

impl From<AnalyticError> for Failure {
    fn from(e: AnalyticError) -> Failure {
        Failure(HbStatus::HB_PRECISION, e.to_string())
    }
}

impl From<HeightError> for Failure {
    fn from(e: HeightError) -> Failure {
        let code = match &e {
            HeightError::NotOnCurve => HbStatus::HB_NOT_ON_CURVE,
            HeightError::InfinityPoint => HbStatus::HB_INVALID_ARGUMENT,
            HeightError::Analytic(_) => HbStatus::HB_PRECISION,
        };
        Failure(code, e.to_string())
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Failure {
        let code = match &e {
            HarnessError::Parse { .. } => HbStatus::HB_PARSE,
            HarnessError::Io(_) => HbStatus::HB_IO,
            _ => HbStatus::HB_INTERNAL,
        };
        Failure(code, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> HbStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HbStatus::HB_OK,
        Ok(Err(Failure(code, msg))) => {
            set_error(&msg);
            code
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&msg);
            HbStatus::HB_INTERNAL
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(HbStatus::HB_NULL_POINTER, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(HbStatus::HB_PARSE, format!("{what} is not UTF-8")))
}

fn tolerance(tol: c_double) -> Result<f64, Failure> {
    if tol > 0.0 && tol < 1.0 {
        Ok(tol)
    } else {
        Err(Failure(
            HbStatus::HB_INVALID_ARGUMENT,
            format!("tolerance {tol} outside (0, 1)"),
        ))
    }
}

fn ball(x: &ErrReal) -> HbBall {
    let mid = x.mid_f64();
    let rad = x.err_f64() + mid.abs() * f64::EPSILON;
    HbBall {
        mid,
        rad: rad.next_up(),
    }
}

fn give_string(s: String, dst: &mut *mut c_char) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure(HbStatus::HB_INTERNAL, e.to_string()))?;
    *dst = c.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or "" after success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn hb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn hb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn hb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the minimal model of the curve with Weierstrass coefficients
/// a1, a2, a3, a4, a6 given as rationals ("3", "-7/2").
///
/// # Safety
/// `ainvs` must point to five readable C strings; `out_curve` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hb_curve_new(ainvs: *const *const c_char, out_curve: *mut *mut HbCurve) -> HbStatus {
    guard(|| {
        let dst = out(out_curve, "out_curve")?;
        *dst = ptr::null_mut();
        if ainvs.is_null() {
            return Err(null("ainvs"));
        }
        let mut a = Vec::with_capacity(5);
        for i in 0..5 {
            a.push(parse_rational(text(*ainvs.add(i), "coefficient")?)?);
        }
        let e = WeierstrassCurve::new(a.try_into().expect("five coefficients"))?;
        let min = minimal_model(&e)?;
        *dst = Box::into_raw(Box::new(HbCurve { min }));
        Ok(())
    })
}

/// # Safety
/// `curve` must be null or a handle from [`hb_curve_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hb_curve_free(curve: *mut HbCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Minimal-model coefficients as "[a1,a2,a3,a4,a6]".
///
/// # Safety
/// `curve` must be a live handle; `out_text` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hb_curve_minimal_ainvs(curve: *const HbCurve, out_text: *mut *mut c_char) -> HbStatus {
    guard(|| {
        let c = borrow(curve, "curve")?;
        let dst = out(out_text, "out_text")?;
        let parts: Vec<String> = c.min.curve.ainvs().iter().map(format_rational).collect();
        give_string(format!("[{}]", parts.join(",")), dst)
    })
}

/// Minimal discriminant as a decimal string.
///
/// # Safety
/// `curve` must be a live handle; `out_text` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hb_curve_discriminant(curve: *const HbCurve, out_text: *mut *mut c_char) -> HbStatus {
    guard(|| {
        let c = borrow(curve, "curve")?;
        give_string(c.min.disc_min.to_string(), out(out_text, "out_text")?)
    })
}

/// # Safety
/// `curve` must be a live handle; `out_norms` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hb_curve_conductor(curve: *const HbCurve, out_norms: *mut HbConductor) -> HbStatus {
    guard(|| {
        let c = borrow(curve, "curve")?;
        let dst = out(out_norms, "out_norms")?;
        let n = conductor_norms(&c.min, 128)?;
        *dst = HbConductor {
            log_n0: ball(&n.log_n0),
            log_nst: ball(&n.log_nst),
            log_nuns: ball(&n.log_nuns),
        };
        Ok(())
    })
}

/// Stable Faltings height and period data, doubling working precision
/// up to `max_bits` until the radius of hF+ is at most `tol`.
///
/// # Safety
/// `curve` must be a live handle; `out_faltings` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hb_curve_faltings(
    curve: *const HbCurve,
    tol: c_double,
    max_bits: u32,
    out_faltings: *mut HbFaltings,
) -> HbStatus {
    guard(|| {
        let c = borrow(curve, "curve")?;
        let dst = out(out_faltings, "out_faltings")?;
        let r = faltings_height(&c.min, "", tolerance(tol)?, max_bits)?;
        let rho = injectivity_diameter(&r.tau)?;
        *dst = HbFaltings {
            hf_plus: ball(&r.hf_plus),
            hf_classical: ball(&r.hf_classical()),
            tau_re: ball(&r.tau.re),
            tau_im: ball(&r.tau.im),
            rho: ball(&rho),
            matrix_lemma_slack: ball(&matrix_lemma_check(&r).slack),
            bits: r.bits,
        };
        Ok(())
    })
}

/// Canonical height of the affine point (x, y) on the minimal model,
/// normalized as (1/2) lim 4^-n h(x(2^n P)).
///
/// # Safety
/// `curve` must be a live handle; `x`, `y` readable C strings;
/// `out_height` writable.
#[no_mangle]
pub unsafe extern "C" fn hb_curve_canonical_height(
    curve: *const HbCurve,
    x: *const c_char,
    y: *const c_char,
    tol: c_double,
    out_height: *mut HbBall,
) -> HbStatus {
    guard(|| {
        let c = borrow(curve, "curve")?;
        let dst = out(out_height, "out_height")?;
        let p = c
            .min
            .curve
            .point(parse_rational(text(x, "x")?)?, parse_rational(text(y, "y")?)?)?;
        *dst = ball(&canonical_height(&c.min, &p, tolerance(tol)?)?.value);
        Ok(())
    })
}

/// Upper bound for the Mordell-Weil rank of the curve over Q.
///
/// # Safety
/// `curve` must be a live handle; `out_bound` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hb_curve_rank_bound(curve: *const HbCurve, out_bound: *mut HbBall) -> HbStatus {
    guard(|| {
        let c = borrow(curve, "curve")?;
        let dst = out(out_bound, "out_bound")?;
        let n = conductor_norms(&c.min, 128)?;
        *dst = ball(&rank_bound(&RankBoundInputs::over_q(1, n.log_n0)));
        Ok(())
    })
}

/// Runs every check over a corpus file with `jobs` worker threads.
///
/// # Safety
/// `path` must be a readable C string; `out_reports` writable.
#[no_mangle]
pub unsafe extern "C" fn hb_run_corpus(
    path: *const c_char,
    format: HbFormat,
    tol: c_double,
    jobs: u32,
    out_reports: *mut *mut HbReports,
) -> HbStatus {
    guard(|| {
        let dst = out(out_reports, "out_reports")?;
        *dst = ptr::null_mut();
        let path = text(path, "path")?;
        let cfg = Config {
            tol: tolerance(tol)?,
            ..Config::default()
        };
        let entries = ingest(Path::new(path), format.into())?;
        let reports = run_corpus(&entries, &cfg, jobs.max(1) as usize)?;
        *dst = Box::into_raw(Box::new(HbReports { reports }));
        Ok(())
    })
}

/// # Safety
/// `reports` must be a live handle from [`hb_run_corpus`].
#[no_mangle]
pub unsafe extern "C" fn hb_reports_len(reports: *const HbReports) -> size_t {
    reports.as_ref().map_or(0, |r| r.reports.len())
}

/// Serializes the reports, one per line for JSONL or with a header row
/// for CSV.
///
/// # Safety
/// `reports` must be a live handle; `out_text` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hb_reports_emit(
    reports: *const HbReports,
    format: HbFormat,
    out_text: *mut *mut c_char,
) -> HbStatus {
    guard(|| {
        let r = borrow(reports, "reports")?;
        let dst = out(out_text, "out_text")?;
        let mut buf = Vec::new();
        emit(&r.reports, &mut buf, format.into())?;
        give_string(String::from_utf8(buf).expect("reports are UTF-8"), dst)
    })
}

/// # Safety
/// `reports` must be null or a handle from [`hb_run_corpus`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hb_reports_free(reports: *mut HbReports) {
    if !reports.is_null() {
        drop(Box::from_raw(reports));
    }
}

impl From<HbFormat> for Format {
    fn from(f: HbFormat) -> Format {
        match f {
            HbFormat::HB_FORMAT_JSONL => Format::Jsonl,
            HbFormat::HB_FORMAT_CSV => Format::Csv,
        }
    }
}
