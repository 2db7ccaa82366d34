//! C ABI over `dlv-symmetry`.
//!
//! Objects cross the boundary as opaque handles created by `*_parse` /
//! `*_new` functions and released by the matching `*_free`. Every fallible
//! call returns a [`DlvStatus`]; on failure, [`dlv_last_error`] describes the
//! error for the calling thread. Strings returned through `char **` are
//! owned by the caller and released with [`dlv_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dlv_symmetry::catalog;
use dlv_symmetry::expr::Dep;
use dlv_symmetry::harness::{self, CampaignConfig, Mode};
use dlv_symmetry::jet::VectorField;
use dlv_symmetry::model::{parse_system, ManifoldKind, RdSystem};
use dlv_symmetry::reduction::{ExampleParams, Grid, Profile};
use dlv_symmetry::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DlvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    UnknownIdentifier = 4,
    InvalidSystem = 5,
    InvalidField = 6,
    CaseNotFound = 7,
    Degenerate = 8,
    Config = 9,
    Evaluation = 10,
    Other = 11,
    Panic = 12,
}

/// Manifold selector for invariance checks.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DlvKind {
    Lie = 0,
    FirstTypeU = 1,
    FirstTypeV = 2,
    FirstTypeW = 3,
    NonClassical = 4,
}

impl DlvKind {
    fn manifold(self) -> ManifoldKind {
        match self {
            DlvKind::Lie => ManifoldKind::Lie,
            DlvKind::FirstTypeU => ManifoldKind::FirstType(Dep::U),
            DlvKind::FirstTypeV => ManifoldKind::FirstType(Dep::V),
            DlvKind::FirstTypeW => ManifoldKind::FirstType(Dep::W),
            DlvKind::NonClassical => ManifoldKind::NonClassical,
        }
    }
}

/// A reaction-diffusion system.
pub struct DlvSystem {
    inner: RdSystem,
}

/// A point-symmetry operator.
pub struct DlvField {
    inner: VectorField,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> DlvStatus {
    match e {
        Error::Syntax { .. } => DlvStatus::Syntax,
        Error::UnknownIdentifier { .. } => DlvStatus::UnknownIdentifier,
        Error::InvalidSystem(_) => DlvStatus::InvalidSystem,
        Error::InvalidField(_) | Error::ZeroXi0 => DlvStatus::InvalidField,
        Error::CaseNotFound { .. } => DlvStatus::CaseNotFound,
        Error::Degenerate(_) | Error::RestrictionViolated(_) => DlvStatus::Degenerate,
        Error::Config(_) => DlvStatus::Config,
        Error::Evaluation(_) => DlvStatus::Evaluation,
        _ => DlvStatus::Other,
    }
}

enum Failure {
    Status(DlvStatus, String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DlvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            DlvStatus::Ok
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            DlvStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Status(DlvStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Status(DlvStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

fn null(name: &str) -> Failure {
    Failure::Status(DlvStatus::NullPointer, format!("{name} is null"))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| Failure::Status(DlvStatus::Other, "string contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn dlv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn dlv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a system definition (`key = expression` lines).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dlv_system_parse(text: *const c_char, out: *mut *mut DlvSystem) -> DlvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = str_arg(text, "text")?;
        let inner = parse_system(text)?.rd()?;
        *out = Box::into_raw(Box::new(DlvSystem { inner }));
        Ok(())
    })
}

/// # Safety
/// `sys` must come from [`dlv_system_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn dlv_system_free(sys: *mut DlvSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Parse an operator `xi0; xi1; eta1; eta2; eta3`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dlv_field_parse(text: *const c_char, out: *mut *mut DlvField) -> DlvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = harness::parse_operator(str_arg(text, "text")?)?;
        *out = Box::into_raw(Box::new(DlvField { inner }));
        Ok(())
    })
}

/// # Safety
/// `field` must come from [`dlv_field_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn dlv_field_free(field: *mut DlvField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Invariance check. `passed` receives 1 or 0; when `witness` is non-null
/// it receives a description of the first nonzero jet coefficient, or null
/// when the check passes.
///
/// # Safety
/// Handles must be live; `passed` valid; `witness` null or valid.
#[no_mangle]
pub unsafe extern "C" fn dlv_check(
    sys: *const DlvSystem,
    field: *const DlvField,
    kind: DlvKind,
    passed: *mut i32,
    witness: *mut *mut c_char,
) -> DlvStatus {
    guard(|| {
        let sys = sys.as_ref().ok_or_else(|| null("sys"))?;
        let field = field.as_ref().ok_or_else(|| null("field"))?;
        if passed.is_null() {
            return Err(null("passed"));
        }
        let v = dlv_symmetry::checker::check_invariance(&sys.inner, &field.inner, kind.manifold())?;
        *passed = v.passed as i32;
        if !witness.is_null() {
            match v.witness {
                Some(w) => put_string(
                    witness,
                    format!("S{}: coefficient of {} is {}", w.equation, w.monomial, w.coefficient),
                )?,
                None => *witness = ptr::null_mut(),
            }
        }
        Ok(())
    })
}

/// Determining equations, one `expr = 0` per line.
///
/// # Safety
/// `sys` must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dlv_detgen(sys: *const DlvSystem, kind: DlvKind, out: *mut *mut c_char) -> DlvStatus {
    guard(|| {
        let sys = sys.as_ref().ok_or_else(|| null("sys"))?;
        let (_, rep) = harness::run_detgen(&sys.inner, kind.manifold())?;
        put_string(out, rep.to_text())
    })
}

/// Verify catalog rows; `table == 0` means every table and `case == 0`
/// every case. With `seed_count == 0` rows are checked with symbolic
/// parameters, otherwise once per seed. The JSON report goes to `json`
/// (when non-null) and the number of expectation mismatches to
/// `mismatches`.
///
/// # Safety
/// `seeds` must hold `seed_count` values; out pointers valid or null.
#[no_mangle]
pub unsafe extern "C" fn dlv_verify_catalog(
    table: u32,
    case: u32,
    seeds: *const u64,
    seed_count: usize,
    json: *mut *mut c_char,
    mismatches: *mut usize,
) -> DlvStatus {
    guard(|| {
        let seeds: Vec<u64> = if seed_count == 0 {
            Vec::new()
        } else {
            if seeds.is_null() {
                return Err(null("seeds"));
            }
            std::slice::from_raw_parts(seeds, seed_count).to_vec()
        };
        let config = CampaignConfig {
            tables: if table == 0 { Vec::new() } else { vec![table] },
            case: (case != 0).then_some(case),
            mode: if seeds.is_empty() { Mode::Symbolic } else { Mode::Instance },
            seeds,
        };
        if table == 0 && case != 0 {
            return Err(Failure::Status(DlvStatus::Config, "a case needs a table".into()));
        }
        let report = harness::run_verify(&config, false)?;
        if !mismatches.is_null() {
            *mismatches = report.mismatches.len();
        }
        if !json.is_null() {
            put_string(json, report.to_json())?;
        }
        Ok(())
    })
}

/// Number of rows in a table (0 for an unknown table).
#[no_mangle]
pub extern "C" fn dlv_catalog_size(table: u32) -> usize {
    catalog::table(table).map(|v| v.len()).unwrap_or(0)
}

/// The reduction example on the unit square: parameters from `params`
/// (`key = value` lines; null for the defaults), a `nt x nx` grid. Writes
/// whether the symbolic residual vanishes and the numeric maximum.
///
/// # Safety
/// `params` null or NUL-terminated; out pointers valid.
#[no_mangle]
pub unsafe extern "C" fn dlv_reduce_example(
    params: *const c_char,
    nt: usize,
    nx: usize,
    symbolic_zero: *mut i32,
    max_residual: *mut f64,
) -> DlvStatus {
    guard(|| {
        if symbolic_zero.is_null() || max_residual.is_null() {
            return Err(null("output"));
        }
        let p = if params.is_null() {
            ExampleParams::default_numeric()
        } else {
            ExampleParams::parse(str_arg(params, "params")?)?
        };
        let rep = harness::run_reduce(&p, &Grid::unit(nt, nx), Profile::Even)?;
        *symbolic_zero = rep.residuals.symbolic_zero as i32;
        *max_residual = rep.residuals.numeric_max.iter().copied().fold(0.0, f64::max);
        Ok(())
    })
}
