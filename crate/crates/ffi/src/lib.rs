//! C interface to `vsa-core`.
//!
//! Every entry point returns a [`VsaStatus`]. On failure the message is kept
//! per thread and can be fetched with [`vsa_last_error`]. Strings handed out
//! by this library are owned by the caller and released with
//! [`vsa_string_free`]; generator sets are opaque handles released with
//! [`vsa_generators_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use vsa_core::combinatorics::{l_matrix, pascal_matrix, s_matrix, straightening_coeffs};
use vsa_core::fockspace::{Heisenberg, Partition};
use vsa_core::parse::parse_expression;
use vsa_core::rational;
use vsa_core::rewrite::{span_check, ExpressionJson, Straightener, TraceJson};
use vsa_core::subspaces::GeneratorSet;
use vsa_core::verify::{Suite, Verifier};
use vsa_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VsaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Domain = 3,
    Assertion = 4,
    TerminationGuard = 5,
    Parse = 6,
    Cache = 7,
    Io = 8,
    /// A verification run finished but some criterion failed.
    Failed = 9,
    Internal = 10,
}

/// Quotient representatives for one difference `N`, together with the
/// algebra they were computed in.
pub struct VsaGenerators {
    alg: Heisenberg,
    gens: GeneratorSet<Partition>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(VsaStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Domain(_) => VsaStatus::Domain,
            Error::AssertionFailure(_) => VsaStatus::Assertion,
            Error::TerminationGuardExceeded(_) => VsaStatus::TerminationGuard,
            Error::Parse { .. } => VsaStatus::Parse,
            Error::Cache(_) => VsaStatus::Cache,
            Error::Io(_) => VsaStatus::Io,
            Error::Json(_) => VsaStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(VsaStatus::Internal, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(VsaStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, turning errors and panics into a status code.
fn guarded(body: impl FnOnce() -> Result<(), Failure>) -> VsaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            VsaStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            VsaStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(VsaStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(VsaStatus::Internal, "output holds a NUL byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn handle<'a>(g: *const VsaGenerators) -> Result<&'a VsaGenerators, Failure> {
    g.as_ref().ok_or_else(|| null("generator handle"))
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn vsa_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned through an `out` parameter. Null is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vsa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// JSON object with the Pascal matrix, `L_N(m)`, `S_N(m)` and `det S_N(m)`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn vsa_matrix_json(n_diff: u32, m: i64, out: *mut *mut c_char) -> VsaStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if n_diff == 0 {
            return Err(Error::domain("N must be at least 1").into());
        }
        let n = n_diff as usize;
        let s = s_matrix(n, m);
        let det = s.determinant()?;
        let json = serde_json::json!({
            "N": n,
            "m": m,
            "P": pascal_matrix(n),
            "L": l_matrix(n, m),
            "S": s,
            "det": rational::to_string(&det),
        });
        write_string(out, json.to_string())
    })
}

/// Straightening coefficients as a JSON array of `"p/q"` strings.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn vsa_coeffs_json(n_diff: u32, n: i64, out: *mut *mut c_char) -> VsaStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let c = straightening_coeffs(n_diff as usize, n)?;
        let values: Vec<String> = c.values.iter().map(rational::to_string).collect();
        write_string(out, serde_json::to_string(&values)?)
    })
}

/// Builds the quotient representatives up to `max_weight`. When `cache_path`
/// is not null the set is read from, or written to, that file.
///
/// # Safety
/// `cache_path` must be null or a NUL-terminated string; `out` must be a valid
/// pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn vsa_generators_new(
    n_diff: u32,
    max_weight: i64,
    cache_path: *const c_char,
    out: *mut *mut VsaGenerators,
) -> VsaStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if n_diff == 0 {
            return Err(Error::domain("N must be at least 1").into());
        }
        if !(0..=vsa_core::cli::MAX_WEIGHT_CAP).contains(&max_weight) {
            return Err(Error::domain(format!("max weight {max_weight} is out of range")).into());
        }
        let path = if cache_path.is_null() {
            None
        } else {
            Some(Path::new(read_str(cache_path, "cache_path")?))
        };
        let alg = Heisenberg::new();
        let gens = GeneratorSet::load_or_build(&alg, n_diff as usize, max_weight, path)?;
        *out = Box::into_raw(Box::new(VsaGenerators { alg, gens }));
        Ok(())
    })
}

/// Releases a generator handle. Null is ignored.
///
/// # Safety
/// `g` must come from [`vsa_generators_new`] and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vsa_generators_free(g: *mut VsaGenerators) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of representatives of weight `weight`.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vsa_generators_count(g: *const VsaGenerators, weight: i64, out: *mut usize) -> VsaStatus {
    guarded(|| {
        let g = handle(g)?;
        if out.is_null() {
            return Err(null("out"));
        }
        if !(0..=g.gens.max_weight).contains(&weight) {
            return Err(Error::domain(format!("weight {weight} is outside 0..={}", g.gens.max_weight)).into());
        }
        *out = g.gens.reps(weight).len();
        Ok(())
    })
}

/// The generator set in the cache file format.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vsa_generators_json(g: *const VsaGenerators, out: *mut *mut c_char) -> VsaStatus {
    guarded(|| {
        let g = handle(g)?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_string(out, g.gens.to_json()?)
    })
}

/// Normal form of `expression`. Writes `{"input", "output"}` JSON, or the full
/// rewrite trace when `with_trace` is set.
///
/// # Safety
/// `g` must be a live handle, `expression` a NUL-terminated string and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vsa_straighten(
    g: *const VsaGenerators,
    expression: *const c_char,
    with_trace: bool,
    out: *mut *mut c_char,
) -> VsaStatus {
    guarded(|| {
        let g = handle(g)?;
        let text = read_str(expression, "expression")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let e = parse_expression(text)?;
        let mut s = Straightener::new(&g.alg, &g.gens);
        let (normal, trace) = s.straighten(&e)?;
        let json = if with_trace {
            serde_json::to_string(&TraceJson::from(&trace))?
        } else {
            serde_json::json!({
                "input": ExpressionJson::from(&e),
                "output": ExpressionJson::from(&normal),
            })
            .to_string()
        };
        write_string(out, json)
    })
}

/// Rank of the normal monomials of weight `weight` and `dim V_weight`.
///
/// # Safety
/// `g` must be a live handle; `rank` and `dim` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn vsa_span_check(
    g: *const VsaGenerators,
    weight: i64,
    rank: *mut usize,
    dim: *mut usize,
) -> VsaStatus {
    guarded(|| {
        let g = handle(g)?;
        if rank.is_null() || dim.is_null() {
            return Err(null("rank/dim"));
        }
        let report = span_check(&g.alg, weight, &g.gens)?;
        *rank = report.rank;
        *dim = report.dim;
        Ok(())
    })
}

/// Runs a verification suite (`combinatorics`, `algebra`, `identities`,
/// `rewrite` or `all`) and writes the per-criterion reports as JSON. Returns
/// `Failed` when some criterion did not pass; the report is written anyway.
///
/// # Safety
/// `suite` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vsa_verify(suite: *const c_char, seed: u64, out: *mut *mut c_char) -> VsaStatus {
    let mut failed = false;
    let status = guarded(|| {
        let suite: Suite = read_str(suite, "suite")?.parse()?;
        if out.is_null() {
            return Err(null("out"));
        }
        let reports = Verifier::new(seed).run(suite);
        failed = reports.iter().any(|r| !r.passed);
        write_string(out, serde_json::to_string(&reports)?)
    });
    if status == VsaStatus::Ok && failed {
        set_error("some criteria failed");
        return VsaStatus::Failed;
    }
    status
}
