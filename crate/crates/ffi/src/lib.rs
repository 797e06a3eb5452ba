//! C interface to the g2cover workbench.
//!
//! Objects are opaque handles released with their `_free` function. Every
//! fallible call returns a `G2Status`; on failure a message is available from
//! `g2_last_error_message` on the same thread until the next failing call.
//! Strings returned through out-parameters are owned by the caller and
//! released with `g2_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use g2cover::amalgam::certify_universal;
use g2cover::covers::{flag_complex, sheets};
use g2cover::incidence::{GeometryJson, IncidenceGeometry};
use g2cover::workbench::Workbench;
use g2cover::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum G2Status {
    Ok = 0,
    NullPointer = 1,
    Config = 2,
    Domain = 3,
    Resource = 4,
    Hypothesis = 5,
    Parse = 6,
    InvalidUtf8 = 7,
    Panic = 8,
}

/// The hexagon model over GF(q) with its line and plane classification.
pub struct G2Workbench {
    inner: Workbench,
}

/// A rank-3 incidence geometry.
pub struct G2Geometry {
    geometry: IncidenceGeometry,
    q: Option<usize>,
    variant: Option<u8>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> G2Status {
    match e {
        Error::Config(_) => G2Status::Config,
        Error::Domain(_) => G2Status::Domain,
        Error::Resource(_) => G2Status::Resource,
        Error::Hypothesis(_) => G2Status::Hypothesis,
        Error::Parse { .. } => G2Status::Parse,
    }
}

/// Runs `f`, converting errors and panics into a status and a message.
fn guard(f: impl FnOnce() -> Result<(), (G2Status, String)>) -> G2Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => G2Status::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            G2Status::Panic
        }
    }
}

fn lib(e: Error) -> (G2Status, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (G2Status, String) {
    (G2Status::NullPointer, format!("{name} is null"))
}

fn out_string(s: String, out: *mut *mut c_char) -> Result<(), (G2Status, String)> {
    let c = CString::new(s).map_err(|_| (G2Status::InvalidUtf8, "string contains a nul byte".to_string()))?;
    // SAFETY: callers check `out` for null before calling.
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn json_text<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("values serialise")
}

/// Message of the last failing call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn g2_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static version string.
#[no_mangle]
pub extern "C" fn g2_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds the workbench over GF(q); q must be a power of two.
///
/// # Safety
/// `out` must be null or point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn g2_workbench_new(q: u32, out: *mut *mut G2Workbench) -> G2Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = Workbench::new(q).map_err(lib)?;
        unsafe { *out = Box::into_raw(Box::new(G2Workbench { inner })) };
        Ok(())
    })
}

/// # Safety
/// `wb` must be null or a handle from `g2_workbench_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn g2_workbench_free(wb: *mut G2Workbench) {
    if !wb.is_null() {
        drop(unsafe { Box::from_raw(wb) });
    }
}

/// Line and plane census as JSON.
///
/// # Safety
/// `wb` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn g2_census_json(wb: *const G2Workbench, out: *mut *mut c_char) -> G2Status {
    guard(|| {
        let wb = unsafe { wb.as_ref() }.ok_or_else(|| null("wb"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        out_string(json_text(&wb.inner.census()), out)
    })
}

/// Builds the geometry Γ`variant` (0..3).
///
/// # Safety
/// `wb` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn g2_geometry_build(wb: *const G2Workbench, variant: u8, out: *mut *mut G2Geometry) -> G2Status {
    guard(|| {
        let wb = unsafe { wb.as_ref() }.ok_or_else(|| null("wb"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let gamma = wb.inner.gamma(variant).map_err(lib)?;
        let g = G2Geometry { geometry: gamma.geometry, q: Some(wb.inner.q()), variant: Some(variant) };
        unsafe { *out = Box::into_raw(Box::new(g)) };
        Ok(())
    })
}

/// Parses a geometry from the JSON written by `g2_geometry_to_json` or the
/// `build` command.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn g2_geometry_from_json(json: *const c_char, out: *mut *mut G2Geometry) -> G2Status {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|_| (G2Status::InvalidUtf8, "json is not UTF-8".to_string()))?;
        let parsed: GeometryJson =
            serde_json::from_str(text).map_err(|e| (G2Status::Parse, format!("invalid geometry JSON: {e}")))?;
        let geometry = IncidenceGeometry::from_json(&parsed).map_err(lib)?;
        let g = G2Geometry { geometry, q: parsed.q, variant: parsed.variant };
        unsafe { *out = Box::into_raw(Box::new(g)) };
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a geometry handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn g2_geometry_free(g: *mut G2Geometry) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Number of elements of the given type (1, 2 or 3).
///
/// # Safety
/// `g` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn g2_geometry_count(g: *const G2Geometry, element_type: u8, out: *mut usize) -> G2Status {
    guard(|| {
        let g = unsafe { g.as_ref() }.ok_or_else(|| null("g"))?;
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        *out = g.geometry.count_of_type(element_type);
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn g2_geometry_to_json(g: *const G2Geometry, out: *mut *mut c_char) -> G2Status {
    guard(|| {
        let g = unsafe { g.as_ref() }.ok_or_else(|| null("g"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        out_string(json_text(&g.geometry.to_json(g.q, g.variant)), out)
    })
}

/// Order of the fundamental group of the flag complex, enumerating at most
/// `cap` live cosets. `*finite` is false when the cap was reached, in which
/// case `*order` is 0.
///
/// # Safety
/// `g` must be a live handle; `order` and `finite` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn g2_geometry_pi1_order(
    g: *const G2Geometry,
    cap: usize,
    order: *mut u64,
    finite: *mut bool,
) -> G2Status {
    guard(|| {
        let g = unsafe { g.as_ref() }.ok_or_else(|| null("g"))?;
        let order = unsafe { order.as_mut() }.ok_or_else(|| null("order"))?;
        let finite = unsafe { finite.as_mut() }.ok_or_else(|| null("finite"))?;
        let r = flag_complex(&g.geometry).and_then(|c| sheets(&c, cap)).map_err(lib)?;
        *order = r.pi1_order.unwrap_or(0);
        *finite = r.pi1_order.is_some();
        Ok(())
    })
}

/// Certificate for the amalgam of parabolics of Γ`variant` as JSON; q must
/// be 2. `*concluded` tells whether the certificate reached its conclusion.
///
/// # Safety
/// `wb` must be a live handle; `out` and `concluded` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn g2_certify_json(
    wb: *const G2Workbench,
    variant: u8,
    cap: usize,
    concluded: *mut bool,
    out: *mut *mut c_char,
) -> G2Status {
    guard(|| {
        let wb = unsafe { wb.as_ref() }.ok_or_else(|| null("wb"))?;
        let concluded = unsafe { concluded.as_mut() }.ok_or_else(|| null("concluded"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let groups = wb.inner.groups().map_err(lib)?;
        let gamma = wb.inner.gamma(variant).map_err(lib)?;
        let cert = certify_universal(&format!("Γ{variant}"), &gamma.geometry, &groups, cap);
        *concluded = cert.passed();
        out_string(json_text(&cert), out)
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn g2_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
