//! C ABI over `lowlying`.
//!
//! Objects cross the boundary as opaque handles created by `ll_*_new` and
//! released by the matching `ll_*_free`. Every fallible call returns an
//! `LlStatus`; on failure `ll_last_error_message` describes the error for the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use lowlying::central::{CompletedLSeries, DEFAULT_THRESHOLD};
use lowlying::characters::{enumerate_family, CharValue, Family, WeightFunction};
use lowlying::cubic::{enumerate_cubic_fields, family_average_cubic_over, CubicField, Signature};
use lowlying::curve::{ApTable, EllipticCurve, Reduction};
use lowlying::density::{
    family_average_over, prime_cutoffs, rank_bound_cyclic, rank_bound_sd, DensityReport, Fejer, TestFunction,
};
use lowlying::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LlStatus {
    Ok = 0,
    BadReduction = 1,
    NonminimalModel = 2,
    InvalidCurve = 3,
    OutOfMemory = 4,
    ConductorClash = 5,
    EmptyFamily = 6,
    InsufficientCoefficients = 7,
    IllConditioned = 8,
    RankOverflow = 9,
    EnumerationBoundTooSmall = 10,
    IndexPrime = 11,
    ConfigError = 12,
    CacheCorruption = 13,
    Io = 14,
    NullPointer = 15,
    OutOfRange = 16,
    Panic = 17,
}

impl From<&Error> for LlStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::BadReduction { .. } => LlStatus::BadReduction,
            Error::NonminimalModel { .. } => LlStatus::NonminimalModel,
            Error::InvalidCurve(_) => LlStatus::InvalidCurve,
            Error::OutOfMemory { .. } => LlStatus::OutOfMemory,
            Error::ConductorClash { .. } => LlStatus::ConductorClash,
            Error::EmptyFamily => LlStatus::EmptyFamily,
            Error::InsufficientCoefficients { .. } => LlStatus::InsufficientCoefficients,
            Error::IllConditioned(_) => LlStatus::IllConditioned,
            Error::RankOverflow { .. } => LlStatus::RankOverflow,
            Error::EnumerationBoundTooSmall { .. } => LlStatus::EnumerationBoundTooSmall,
            Error::IndexPrime { .. } => LlStatus::IndexPrime,
            Error::Config(_) => LlStatus::ConfigError,
            Error::CacheCorruption(_) => LlStatus::CacheCorruption,
            Error::Io(_) => LlStatus::Io,
        }
    }
}

/// Weight on conductors for character families.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LlWeight {
    SmoothBump = 0,
    Sharp = 1,
}

impl From<LlWeight> for WeightFunction {
    fn from(w: LlWeight) -> Self {
        match w {
            LlWeight::SmoothBump => WeightFunction::SMOOTH,
            LlWeight::Sharp => WeightFunction::SHARP,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LlReduction {
    Good = 0,
    SplitMultiplicative = 1,
    NonsplitMultiplicative = 2,
    Additive = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LlDensityReport {
    pub conductor_term: f64,
    pub s1: f64,
    pub s2: f64,
    pub total: f64,
    pub predicted: f64,
    pub family_size: f64,
    pub l_param: f64,
    pub error_budget: f64,
    /// 0 for unitary, 1 for orthogonal.
    pub symmetry: i32,
}

impl From<&DensityReport> for LlDensityReport {
    fn from(r: &DensityReport) -> Self {
        LlDensityReport {
            conductor_term: r.conductor_term,
            s1: r.s1,
            s2: r.s2,
            total: r.total,
            predicted: r.predicted,
            family_size: r.family_size,
            l_param: r.l_param,
            error_budget: r.error_budget,
            symmetry: match r.symmetry {
                lowlying::density::SymmetryType::Unitary => 0,
                lowlying::density::SymmetryType::Orthogonal => 1,
            },
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LlCubicField {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub disc_field: i64,
    pub index_sq: i64,
    /// 1 when totally real.
    pub totally_real: i32,
}

/// Opaque elliptic curve.
pub struct LlCurve {
    curve: EllipticCurve,
}

/// Opaque character family.
pub struct LlFamily {
    family: Family,
}

/// Opaque list of cubic fields.
pub struct LlFieldList {
    fields: Vec<CubicField>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard<F: FnOnce() -> Result<(), LlStatus>>(f: F) -> LlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LlStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            LlStatus::Panic
        }
    }
}

fn fail(e: Error) -> LlStatus {
    let s = LlStatus::from(&e);
    set_error(e.to_string());
    s
}

fn null(what: &str) -> LlStatus {
    set_error(format!("{what} is null"));
    LlStatus::NullPointer
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, LlStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(p: *mut T, v: T, what: &str) -> Result<(), LlStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

/// Message for the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ll_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a curve from Weierstrass coefficients. `rank < 0` means unknown.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn ll_curve_new(
    a1: i64,
    a2: i64,
    a3: i64,
    a4: i64,
    a6: i64,
    conductor: u64,
    rank: i32,
    out: *mut *mut LlCurve,
) -> LlStatus {
    guard(|| {
        let rank = (rank >= 0).then_some(rank as u32);
        let curve = EllipticCurve::new([a1, a2, a3, a4, a6], conductor, rank).map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(LlCurve { curve })), "out")
    })
}

/// Built-in curve by label: "11a1", "37a1" or "389a1".
///
/// # Safety
/// `label` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ll_curve_builtin(label: *const c_char, out: *mut *mut LlCurve) -> LlStatus {
    guard(|| {
        if label.is_null() {
            return Err(null("label"));
        }
        let label = CStr::from_ptr(label).to_string_lossy();
        let curve = EllipticCurve::builtin(&label)
            .ok_or_else(|| fail(Error::Config(format!("unknown curve label {label}"))))?;
        write_out(out, Box::into_raw(Box::new(LlCurve { curve })), "out")
    })
}

/// # Safety
/// `curve` must come from `ll_curve_new`/`ll_curve_builtin` or be null.
#[no_mangle]
pub unsafe extern "C" fn ll_curve_free(curve: *mut LlCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Reduction type and trace of Frobenius at a prime.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ll_curve_local_data(
    curve: *const LlCurve,
    p: u64,
    reduction: *mut LlReduction,
    a_p: *mut i64,
) -> LlStatus {
    guard(|| {
        let c = deref(curve, "curve")?;
        if !lowlying::arith::is_prime(p) {
            return Err(fail(Error::Config(format!("{p} is not prime"))));
        }
        let d = c.curve.reduction_type(p);
        let r = match d.reduction {
            Reduction::Good => LlReduction::Good,
            Reduction::SplitMultiplicative => LlReduction::SplitMultiplicative,
            Reduction::NonsplitMultiplicative => LlReduction::NonsplitMultiplicative,
            Reduction::Additive => LlReduction::Additive,
        };
        write_out(reduction, r, "reduction")?;
        write_out(a_p, d.a_p, "a_p")
    })
}

/// `sum_{p <= x} a_f(p^2) log p`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ll_curve_theta(curve: *const LlCurve, x: f64, out: *mut f64) -> LlStatus {
    guard(|| {
        let c = deref(curve, "curve")?;
        if !(x >= 2.0 && x.is_finite()) {
            return Err(fail(Error::Config(format!("x = {x} must be >= 2"))));
        }
        write_out(out, c.curve.theta_f(x), "out")
    })
}

/// Analytic rank of the curve itself and its root number.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ll_curve_analytic_rank(
    curve: *const LlCurve,
    order: *mut u32,
    root_number: *mut f64,
) -> LlStatus {
    guard(|| {
        let c = deref(curve, "curve")?;
        let series = CompletedLSeries::untwisted(&c.curve).map_err(fail)?;
        let rank = series.analytic_rank(DEFAULT_THRESHOLD).map_err(fail)?;
        write_out(order, rank.order, "order")?;
        write_out(root_number, series.root_number.re, "root_number")
    })
}

/// Primitive order-`l` characters with conductor prime to `curve_conductor`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ll_family_new(
    l: u32,
    x: f64,
    curve_conductor: u64,
    weight: LlWeight,
    out: *mut *mut LlFamily,
) -> LlStatus {
    guard(|| {
        let family = enumerate_family(l, x, curve_conductor, weight.into()).map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(LlFamily { family })), "out")
    })
}

/// # Safety
/// `family` must come from `ll_family_new` or be null.
#[no_mangle]
pub unsafe extern "C" fn ll_family_free(family: *mut LlFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Number of characters; 0 for a null handle.
///
/// # Safety
/// `family` must be a valid handle or null.
#[no_mangle]
pub unsafe extern "C" fn ll_family_len(family: *const LlFamily) -> usize {
    family.as_ref().map_or(0, |f| f.family.len())
}

/// Conductor and weight of character `index`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ll_family_member(
    family: *const LlFamily,
    index: usize,
    conductor: *mut u64,
    weight: *mut f64,
) -> LlStatus {
    guard(|| {
        let f = &deref(family, "family")?.family;
        if index >= f.len() {
            set_error(format!("index {index} out of range"));
            return Err(LlStatus::OutOfRange);
        }
        write_out(conductor, f.characters[index].conductor, "conductor")?;
        write_out(weight, f.weights[index], "weight")
    })
}

/// `chi(n)` as an exponent `e` with `chi(n) = exp(2 pi i e / l)`, or -1 when
/// `chi(n) = 0`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ll_family_eval(family: *const LlFamily, index: usize, n: u64, exponent: *mut i32) -> LlStatus {
    guard(|| {
        let f = &deref(family, "family")?.family;
        if index >= f.len() {
            set_error(format!("index {index} out of range"));
            return Err(LlStatus::OutOfRange);
        }
        let e = match f.characters[index].eval(n) {
            CharValue::Zero => -1,
            CharValue::Root(e) => e as i32,
        };
        write_out(exponent, e, "exponent")
    })
}

/// Weighted family average of the one-level density over order-`l` twists.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ll_density_cyclic(
    curve: *const LlCurve,
    l: u32,
    x: f64,
    sigma: f64,
    weight: LlWeight,
    out: *mut LlDensityReport,
) -> LlStatus {
    guard(|| {
        let c = &deref(curve, "curve")?.curve;
        let phi = Fejer::new(sigma).map_err(fail)?;
        let family = enumerate_family(l, x, c.conductor, weight.into()).map_err(fail)?;
        let table = ApTable::compute(c, prime_cutoffs(x, phi.sigma()).0);
        let report = family_average_over(c, &family, &table, &phi, 1.0).map_err(fail)?;
        write_out(out, LlDensityReport::from(&report), "out")
    })
}

/// Average of the one-level density over S3 cubic fields with `|D_F| <= x`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ll_density_cubic(
    curve: *const LlCurve,
    x: f64,
    sigma: f64,
    out: *mut LlDensityReport,
) -> LlStatus {
    guard(|| {
        let c = &deref(curve, "curve")?.curve;
        let phi = Fejer::new(sigma).map_err(fail)?;
        let fields = enumerate_cubic_fields(x, c.conductor).map_err(fail)?;
        let table = ApTable::compute(c, prime_cutoffs(x, phi.sigma()).0);
        let report = family_average_cubic_over(c, &fields, &table, x, &phi, 1.0).map_err(fail)?;
        write_out(out, LlDensityReport::from(&report), "out")
    })
}

/// S3 cubic fields with `|D_F| <= x` and discriminant prime to `conductor`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ll_fields_new(x: f64, conductor: u64, out: *mut *mut LlFieldList) -> LlStatus {
    guard(|| {
        let fields = enumerate_cubic_fields(x, conductor).map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(LlFieldList { fields })), "out")
    })
}

/// # Safety
/// `list` must come from `ll_fields_new` or be null.
#[no_mangle]
pub unsafe extern "C" fn ll_fields_free(list: *mut LlFieldList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

/// # Safety
/// `list` must be a valid handle or null.
#[no_mangle]
pub unsafe extern "C" fn ll_fields_len(list: *const LlFieldList) -> usize {
    list.as_ref().map_or(0, |l| l.fields.len())
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ll_fields_get(list: *const LlFieldList, index: usize, out: *mut LlCubicField) -> LlStatus {
    guard(|| {
        let fields = &deref(list, "list")?.fields;
        let Some(f) = fields.get(index) else {
            set_error(format!("index {index} out of range"));
            return Err(LlStatus::OutOfRange);
        };
        let v = LlCubicField {
            a: f.poly[0],
            b: f.poly[1],
            c: f.poly[2],
            disc_field: f.disc_field,
            index_sq: f.index_sq,
            totally_real: (f.signature == Signature::TotallyReal) as i32,
        };
        write_out(out, v, "out")
    })
}

/// `phi_hat(0) / phi(0)` for the Fejer pair; NaN unless `0 < sigma <= 1`.
#[no_mangle]
pub extern "C" fn ll_rank_bound_cyclic(sigma: f64) -> f64 {
    Fejer::new(sigma).map_or(f64::NAN, |phi| rank_bound_cyclic(&phi))
}

/// `(phi_hat(0) + phi(0)/2) / phi(0)` for the Fejer pair; NaN unless `0 < sigma <= 1`.
#[no_mangle]
pub extern "C" fn ll_rank_bound_sd(sigma: f64) -> f64 {
    Fejer::new(sigma).map_or(f64::NAN, |phi| rank_bound_sd(&phi))
}
