//! C ABI over `cpsd`.
//!
//! Matrices and graphs cross the boundary as opaque handles created from JSON
//! or DIMACS text and released with the matching `*_free`. Every function
//! returns a [`CpsdStatus`]; on failure [`cpsd_last_error`] describes the
//! problem. Strings returned through out-parameters are owned by the caller
//! and released with [`cpsd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cpsd::cert::{self, Certificate, CertificateFile};
use cpsd::cones;
use cpsd::game::{self, Variant};
use cpsd::graph::{self, Graph};
use cpsd::gridgen;
use cpsd::{CpsdError, DenominatorRule, Limits, SymMatrix};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CpsdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    ResourceCap = 4,
    Certificate = 5,
    Io = 6,
    Panic = 7,
}

/// Which cone a membership query refers to.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CpsdCone {
    C = 0,
    D = 1,
    O = 2,
    Ostar = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CpsdVariant {
    Q = 0,
    Qa = 1,
}

/// Resource caps; pass `NULL` wherever accepted for the defaults.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct CpsdLimits {
    pub max_tuples: u64,
    pub max_pivots: u64,
}

/// Opaque symmetric rational matrix.
pub struct CpsdMatrix(SymMatrix);

/// Opaque graph.
pub struct CpsdGraph(Graph);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &CpsdError) -> CpsdStatus {
    match e {
        CpsdError::ResourceCap { .. } | CpsdError::PivotLimit(_) => CpsdStatus::ResourceCap,
        CpsdError::Parse { .. } | CpsdError::Json(_) => CpsdStatus::Parse,
        CpsdError::Certificate(_) => CpsdStatus::Certificate,
        CpsdError::Io(_) => CpsdStatus::Io,
        _ => CpsdStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), CpsdStatusError>) -> CpsdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CpsdStatus::Ok
        }
        Ok(Err(CpsdStatusError(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CpsdStatus::Panic
        }
    }
}

struct CpsdStatusError(CpsdStatus, String);

impl From<CpsdError> for CpsdStatusError {
    fn from(e: CpsdError) -> Self {
        CpsdStatusError(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> CpsdStatusError {
    CpsdStatusError(CpsdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, CpsdStatusError> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| CpsdStatusError(CpsdStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn limits_from(p: *const CpsdLimits) -> Limits {
    match p.as_ref() {
        Some(l) => Limits {
            max_tuples: l.max_tuples,
            max_pivots: l.max_pivots,
        },
        None => Limits::default(),
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .unwrap_or_default()
        .into_raw()
}

/// Message for the last failed call on this thread, or `NULL`. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn cpsd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Default resource caps.
#[no_mangle]
pub extern "C" fn cpsd_default_limits() -> CpsdLimits {
    let l = Limits::default();
    CpsdLimits {
        max_tuples: l.max_tuples,
        max_pivots: l.max_pivots,
    }
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cpsd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a matrix from JSON: `{"dim": n, "upper": [...]}` or an array of rows.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cpsd_matrix_from_json(
    json: *const c_char,
    out: *mut *mut CpsdMatrix,
) -> CpsdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let m: SymMatrix = serde_json::from_str(text).map_err(CpsdError::from)?;
        *out = Box::into_raw(Box::new(CpsdMatrix(m)));
        Ok(())
    })
}

/// # Safety
/// `m` must come from [`cpsd_matrix_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cpsd_matrix_free(m: *mut CpsdMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Dimension of `m`, or 0 for `NULL`.
///
/// # Safety
/// `m` must be `NULL` or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cpsd_matrix_dim(m: *const CpsdMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.dim())
}

/// Exact positive semidefiniteness.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cpsd_matrix_is_psd(m: *const CpsdMatrix, out: *mut bool) -> CpsdStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("matrix"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = cpsd::is_psd_exact(&m.0);
        Ok(())
    })
}

/// Parses a graph from DIMACS `.col` text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cpsd_graph_from_dimacs(
    text: *const c_char,
    out: *mut *mut CpsdGraph,
) -> CpsdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let g = graph::parse_dimacs(read_str(text, "text")?)?;
        *out = Box::into_raw(Box::new(CpsdGraph(g)));
        Ok(())
    })
}

/// # Safety
/// `g` must come from [`cpsd_graph_from_dimacs`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cpsd_graph_free(g: *mut CpsdGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be `NULL` or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cpsd_graph_vertex_count(g: *const CpsdGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// # Safety
/// `g` must be `NULL` or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cpsd_graph_edge_count(g: *const CpsdGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.m())
}

/// Chromatic number by exhaustive search; writes 0 when more than `t_max`
/// colors are needed.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cpsd_graph_chromatic_number(
    g: *const CpsdGraph,
    t_max: usize,
    out: *mut usize,
) -> CpsdStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = graph::chromatic_number(&g.0, t_max)?.unwrap_or(0);
        Ok(())
    })
}

/// Number of tuples in the grid for `(n, r)`, as a decimal string.
///
/// # Safety
/// `out` must be a valid pointer; free the result with [`cpsd_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cpsd_count_tuples(
    n: usize,
    r: usize,
    out: *mut *mut c_char,
) -> CpsdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if n == 0 || r == 0 {
            return Err(CpsdError::InvalidArgument("n and r must be positive".into()).into());
        }
        let c = gridgen::count_tuples(n, r, DenominatorRule::PerEntry);
        *out = into_c_string(c.to_string());
        Ok(())
    })
}

/// Membership of `m` in the chosen cone at level `r`. Writes whether `m` is a
/// member and, when `certificate` is non-null, the JSON certificate.
///
/// # Safety
/// `m` must be a live handle, `member` a valid pointer, `limits` and
/// `certificate` either `NULL` or valid.
#[no_mangle]
pub unsafe extern "C" fn cpsd_cone_member(
    m: *const CpsdMatrix,
    cone: CpsdCone,
    r: usize,
    limits: *const CpsdLimits,
    member: *mut bool,
    certificate: *mut *mut c_char,
) -> CpsdStatus {
    guard(|| {
        let m = &m.as_ref().ok_or_else(|| null("matrix"))?.0;
        let member = member.as_mut().ok_or_else(|| null("member"))?;
        if r == 0 {
            return Err(CpsdError::InvalidArgument("r must be positive".into()).into());
        }
        let lim = limits_from(limits);
        let (is_member, body) = match cone {
            CpsdCone::C | CpsdCone::Ostar => {
                let (res, kind) = if cone == CpsdCone::C {
                    (cones::member_c(m, r, &lim)?, cert::ConeKind::C)
                } else {
                    (cones::member_ostar(m, r, &lim)?, cert::ConeKind::Ostar)
                };
                let body = Certificate::Conic {
                    cone: kind,
                    r,
                    matrix: m.clone(),
                    result: res,
                };
                let ok = matches!(&body, Certificate::Conic { result, .. } if result.is_member());
                (ok, body)
            }
            CpsdCone::D => {
                let d = cones::member_d(m, r, &lim)?;
                (d.is_member(), Certificate::from_dual_d(m, r, d))
            }
            CpsdCone::O => {
                let d = cones::member_o(m, r)?;
                (d.is_member(), Certificate::from_dual_o(m, r, d))
            }
        };
        *member = is_member;
        if !certificate.is_null() {
            *certificate = into_c_string(CertificateFile::new(body).to_json()?);
        }
        Ok(())
    })
}

/// Smallest `t ≤ t_max` for which the game program is feasible, or 0.
///
/// # Safety
/// `g` must be a live handle, `t_out` a valid pointer, `limits` and
/// `certificate` either `NULL` or valid.
#[no_mangle]
pub unsafe extern "C" fn cpsd_game_solve(
    g: *const CpsdGraph,
    variant: CpsdVariant,
    k: usize,
    r: usize,
    t_max: usize,
    limits: *const CpsdLimits,
    t_out: *mut usize,
    certificate: *mut *mut c_char,
) -> CpsdStatus {
    guard(|| {
        let g = &g.as_ref().ok_or_else(|| null("graph"))?.0;
        let t_out = t_out.as_mut().ok_or_else(|| null("t_out"))?;
        let lim = limits_from(limits);
        let v = match variant {
            CpsdVariant::Q => Variant::Q,
            CpsdVariant::Qa => Variant::Qa,
        };
        let res = game::solve_game(g, v, k, r, t_max, &lim, &game::GeneratorCache::new(), 1)?;
        *t_out = res.t.unwrap_or(0);
        if !certificate.is_null() {
            let file = CertificateFile::new(Certificate::Game { result: res });
            *certificate = into_c_string(file.to_json()?);
        }
        Ok(())
    })
}

/// Re-checks a JSON certificate.
///
/// # Safety
/// `json` must be a NUL-terminated string, `valid` a valid pointer and
/// `limits` either `NULL` or valid.
#[no_mangle]
pub unsafe extern "C" fn cpsd_verify_certificate(
    json: *const c_char,
    limits: *const CpsdLimits,
    valid: *mut bool,
) -> CpsdStatus {
    guard(|| {
        let valid = valid.as_mut().ok_or_else(|| null("valid"))?;
        let file = CertificateFile::from_json(read_str(json, "json")?)?;
        *valid = cert::verify(&file, None, &limits_from(limits))?;
        Ok(())
    })
}
