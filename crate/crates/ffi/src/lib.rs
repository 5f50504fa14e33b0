//! C interface to `cantorlab`.
//!
//! Fallible functions return a [`ClStatus`]; on failure the message is kept
//! per thread and can be read with [`cl_last_error`]. Objects cross the
//! boundary as opaque handles that must be released with their `_free`
//! function. Strings returned to the caller are released with
//! [`cl_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cantorlab::boxdim::{count_series, regress_dim};
use cantorlab::digit_sets::{enumerate_points, Budget, CantorSpec, PointSet1D};
use cantorlab::exact::{big_to_f64, fmt_big_rational, rational_to_f64, Rational};
use cantorlab::furstenberg::{bounds_report, project_px, sumset};
use cantorlab::integrals::{constants, verify_sequence, Estimate, VerifyConfig};
use cantorlab::spectral::{lambda_hat, pk_coefficients, pk_eval, pk_lp_norm_exact, TrigPolynomial};
use cantorlab::Error;
use libc::c_char;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClStatus {
    Ok = 0,
    InvalidArgument = 1,
    BudgetExceeded = 2,
    Precondition = 3,
    Numeric = 4,
    NullPointer = 5,
    Panic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> ClStatus {
    match e {
        Error::BudgetExceeded { .. } | Error::Overflow(_) => ClStatus::BudgetExceeded,
        Error::InvalidSpec(_) => ClStatus::InvalidArgument,
        Error::Precondition(_) => ClStatus::Precondition,
        Error::NonReal { .. } | Error::Transform { .. } => ClStatus::Numeric,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard<F: FnOnce() -> Result<(), Error>>(f: F) -> ClStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ClStatus::Ok,
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            ClStatus::Panic
        }
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            set_error(concat!("null pointer: ", stringify!($p)));
            return ClStatus::NullPointer;
        })+
    };
}

fn rational(num: i64, den: i64) -> Result<Rational, Error> {
    if den == 0 {
        return Err(Error::InvalidSpec("zero denominator".into()));
    }
    Ok(Rational::new(num as i128, den as i128))
}

/// Message of the last failure on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn into_c(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// Output pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cl_constants(c: *mut f64, c_prime: *mut f64) -> ClStatus {
    non_null!(c, c_prime);
    guard(|| {
        let k = constants();
        *c = k.c;
        *c_prime = k.c_prime;
        Ok(())
    })
}

/// `P_K(s) = prod_{l<K} cos^2(2 pi 4^l s)`.
#[no_mangle]
pub extern "C" fn cl_pk_eval(k: u32, s: f64) -> f64 {
    pk_eval(k, s)
}

/// Transform of the Cantor–Lebesgue measure at `s`, truncated to `tol`.
///
/// # Safety
/// Output pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cl_lambda_hat(s: f64, tol: f64, re: *mut f64, im: *mut f64) -> ClStatus {
    non_null!(re, im);
    guard(|| {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidSpec(format!("tol must be positive, got {tol}")));
        }
        let v = lambda_hat(s, tol);
        *re = v.re;
        *im = v.im;
        Ok(())
    })
}

/// Exact `int_0^1 P_K^p` as a string `"p/q"` (release with
/// [`cl_string_free`]) and as a double.
///
/// # Safety
/// Output pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cl_pk_power_integral(
    k: u32,
    p: u32,
    exact: *mut *mut c_char,
    value: *mut f64,
) -> ClStatus {
    non_null!(exact, value);
    guard(|| {
        let v = pk_lp_norm_exact(k, p, &Budget::default())?;
        *value = big_to_f64(&v);
        *exact = into_c(fmt_big_rational(&v));
        Ok(())
    })
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ClBoundsReport {
    pub alpha: f64,
    pub lower_elementary: f64,
    pub lower_l2: f64,
    pub lower_l3: f64,
    pub upper: f64,
    pub c: f64,
    pub c_prime: f64,
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cl_bounds_report(alpha: f64, out: *mut ClBoundsReport) -> ClStatus {
    non_null!(out);
    guard(|| {
        let b = bounds_report(alpha)?;
        *out = ClBoundsReport {
            alpha: b.alpha,
            lower_elementary: b.lower_elementary,
            lower_l2: b.lower_l2,
            lower_l3: b.lower_l3,
            upper: b.upper,
            c: b.c,
            c_prime: b.c_prime,
        };
        Ok(())
    })
}

/// Exact finite point set on the line.
pub struct ClPointSet(PointSet1D);

unsafe fn emit_set(out: *mut *mut ClPointSet, set: PointSet1D) {
    *out = Box::into_raw(Box::new(ClPointSet(set)));
}

/// Depth-`depth` points of the set with the given base and digits.
///
/// # Safety
/// `digits` must point to `n_digits` values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cl_digit_points(
    base: u32,
    digits: *const u32,
    n_digits: usize,
    depth: u32,
    out: *mut *mut ClPointSet,
) -> ClStatus {
    non_null!(digits, out);
    guard(|| {
        let spec = CantorSpec::new(base, std::slice::from_raw_parts(digits, n_digits))?;
        emit_set(out, enumerate_points(&spec, depth, &Budget::default())?);
        Ok(())
    })
}

/// `C + (t_num / t_den) C` at depth `depth`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cl_sumset(t_num: i64, t_den: i64, depth: u32, out: *mut *mut ClPointSet) -> ClStatus {
    non_null!(out);
    guard(|| {
        emit_set(out, sumset(&rational(t_num, t_den)?, depth, &Budget::default())?);
        Ok(())
    })
}

/// `P_x(C x C)` for `x = x_num / x_den` at depth `depth`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cl_project(x_num: i64, x_den: i64, depth: u32, out: *mut *mut ClPointSet) -> ClStatus {
    non_null!(out);
    guard(|| {
        emit_set(out, project_px(&rational(x_num, x_den)?, depth, &Budget::default())?);
        Ok(())
    })
}

/// # Safety
/// `set` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn cl_point_set_len(set: *const ClPointSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.len())
}

/// Copies up to `cap` points, increasing, into `buf`; `written` receives
/// the number copied.
///
/// # Safety
/// `set` must be a live handle, `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn cl_point_set_values(
    set: *const ClPointSet,
    buf: *mut f64,
    cap: usize,
    written: *mut usize,
) -> ClStatus {
    non_null!(set, buf, written);
    guard(|| {
        let s = &(*set).0;
        let n = s.len().min(cap);
        let out = std::slice::from_raw_parts_mut(buf, n);
        for (slot, p) in out.iter_mut().zip(s.iter()) {
            *slot = rational_to_f64(&p);
        }
        *written = n;
        Ok(())
    })
}

/// Number of base-`base` cells of level `m` meeting the set.
///
/// # Safety
/// `set` must be a live handle, `count` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cl_point_set_box_count(
    set: *const ClPointSet,
    base: u32,
    m: u32,
    count: *mut u64,
) -> ClStatus {
    non_null!(set, count);
    guard(|| {
        *count = cantorlab::boxdim::box_count_1d(&(*set).0, base, m)?;
        Ok(())
    })
}

/// Least-squares box dimension over base-4 levels `m_lo..=m_hi`.
///
/// # Safety
/// `set` must be a live handle; outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cl_point_set_box_dim(
    set: *const ClPointSet,
    m_lo: u32,
    m_hi: u32,
    slope: *mut f64,
    r_squared: *mut f64,
) -> ClStatus {
    non_null!(set, slope, r_squared);
    guard(|| {
        let est = regress_dim(&count_series(&(*set).0, 4, m_lo, m_hi)?)?;
        *slope = est.slope;
        *r_squared = est.r_squared;
        Ok(())
    })
}

/// # Safety
/// `set` must come from this library and not have been freed, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn cl_point_set_free(set: *mut ClPointSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Exact trigonometric polynomial.
pub struct ClTrigPoly(TrigPolynomial);

/// Coefficients of `P_K`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cl_pk_coefficients(k: u32, out: *mut *mut ClTrigPoly) -> ClStatus {
    non_null!(out);
    guard(|| {
        let p = pk_coefficients(k, &Budget::default())?;
        *out = Box::into_raw(Box::new(ClTrigPoly(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn cl_trig_poly_len(p: *const ClTrigPoly) -> usize {
    p.as_ref().map_or(0, |p| p.0.len())
}

/// Term `i` in increasing frequency order.
///
/// # Safety
/// `p` must be a live handle; outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cl_trig_poly_term(
    p: *const ClTrigPoly,
    i: usize,
    frequency: *mut i64,
    coefficient: *mut f64,
) -> ClStatus {
    non_null!(p, frequency, coefficient);
    guard(|| {
        let poly = &(*p).0;
        let (n, c) = poly
            .iter()
            .nth(i)
            .ok_or_else(|| Error::InvalidSpec(format!("term {i} out of range ({})", poly.len())))?;
        *frequency = n;
        *coefficient = big_to_f64(&c);
        Ok(())
    })
}

/// # Safety
/// `p` must be a live handle; outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cl_trig_poly_eval(p: *const ClTrigPoly, s: f64, re: *mut f64, im: *mut f64) -> ClStatus {
    non_null!(p, re, im);
    guard(|| {
        let v = (*p).0.eval(s);
        *re = v.re;
        *im = v.im;
        Ok(())
    })
}

/// # Safety
/// `p` must come from this library and not have been freed, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn cl_trig_poly_free(p: *mut ClTrigPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ClVerifyRow {
    pub k: u32,
    pub lhs: f64,
    pub envelope: f64,
    pub ratio: f64,
    pub error_bound: f64,
}

/// Rows `k_lo..=k_hi` of a named estimate check with default settings and
/// the Cantor–Lebesgue test measure. `rows` must hold `k_hi - k_lo + 1`
/// entries.
///
/// # Safety
/// `estimate` must be a NUL-terminated string; `rows` valid for `cap`
/// writes.
#[no_mangle]
pub unsafe extern "C" fn cl_verify(
    estimate: *const c_char,
    k_lo: u32,
    k_hi: u32,
    rows: *mut ClVerifyRow,
    cap: usize,
) -> ClStatus {
    non_null!(estimate, rows);
    guard(|| {
        let name = CStr::from_ptr(estimate)
            .to_str()
            .map_err(|_| Error::InvalidSpec("estimate name is not UTF-8".into()))?;
        let est: Estimate = name.parse()?;
        if k_lo > k_hi || ((k_hi - k_lo) as usize) >= cap {
            return Err(Error::InvalidSpec(format!(
                "range {k_lo}..{k_hi} does not fit in {cap} rows"
            )));
        }
        let out = verify_sequence(est, k_lo..=k_hi, &VerifyConfig::default())?;
        let dst = std::slice::from_raw_parts_mut(rows, out.len());
        for (d, r) in dst.iter_mut().zip(&out) {
            *d = ClVerifyRow {
                k: r.k,
                lhs: r.lhs,
                envelope: r.envelope,
                ratio: r.ratio,
                error_bound: r.error_bound,
            };
        }
        Ok(())
    })
}
