//! C ABI for the shadow-computation engine: opaque engine handles, status
//! codes, and UTF-8 string reports.
//!
//! Ownership rules:
//! * `bigmcg_engine_new` allocates; release with `bigmcg_engine_free`.
//! * Functions returning `char **` allocate the string; release with
//!   `bigmcg_string_free`.
//! * Input strings are NUL-terminated UTF-8 owned by the caller.
//!
//! Every entry point catches panics and reports `BIGMCG_INTERNAL_ERROR`
//! instead of unwinding across the boundary.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use bigmcg::atlas::{parse_curve, Atlas, SepClass};
use bigmcg::flux::{flux_vector, phi};
use bigmcg::polish::{cauchy_report, pointwise_limit, shift_example};
use bigmcg::suites::run_suite;
use bigmcg::words::{curve_image, equal_up_to, parse, render, trivial_up_to, CurveTerm, Verdict};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BigmcgStatus {
    /// Success; for verdict-producing calls this means `Verified`.
    BigmcgOk = 0,
    /// A refuted identity or a failed suite step.
    BigmcgRefuted = 1,
    /// The layered check could not decide within the window and budget.
    BigmcgUnknown = 2,
    BigmcgParseError = 3,
    BigmcgUsageError = 4,
    BigmcgNullPointer = 5,
    BigmcgInvalidUtf8 = 6,
    BigmcgInternalError = 7,
}

use BigmcgStatus::*;

/// Opaque engine handle: the atlas for a fixed number of ends.
pub struct BigmcgEngine {
    atlas: Atlas,
}

fn guarded(body: impl FnOnce() -> BigmcgStatus) -> BigmcgStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => BigmcgInternalError,
    }
}

/// # Safety
/// `ptr` must be either null or a valid NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, BigmcgStatus> {
    if ptr.is_null() {
        return Err(BigmcgNullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| BigmcgInvalidUtf8)
}

fn give_string(out: *mut *mut c_char, text: String) -> Result<(), BigmcgStatus> {
    if out.is_null() {
        return Err(BigmcgNullPointer);
    }
    let c = CString::new(text.replace('\0', " ")).map_err(|_| BigmcgInternalError)?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn bigmcg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Creates an engine for `ends >= 3` ends.
///
/// # Safety
/// `out` must be a valid pointer to an engine pointer.
#[no_mangle]
pub unsafe extern "C" fn bigmcg_engine_new(ends: u32, out: *mut *mut BigmcgEngine) -> BigmcgStatus {
    guarded(|| {
        if out.is_null() {
            return BigmcgNullPointer;
        }
        match Atlas::new(ends) {
            Ok(atlas) => {
                let engine = Box::new(BigmcgEngine { atlas });
                unsafe { *out = Box::into_raw(engine) };
                BigmcgOk
            }
            Err(_) => BigmcgUsageError,
        }
    })
}

/// Releases an engine created by [`bigmcg_engine_new`].
///
/// # Safety
/// `engine` must be null or a pointer returned by `bigmcg_engine_new` that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn bigmcg_engine_free(engine: *mut BigmcgEngine) {
    if !engine.is_null() {
        drop(unsafe { Box::from_raw(engine) });
    }
}

/// Number of ends the engine was built for; 0 on a null handle.
///
/// # Safety
/// `engine` must be null or a live engine pointer.
#[no_mangle]
pub unsafe extern "C" fn bigmcg_engine_ends(engine: *const BigmcgEngine) -> u32 {
    if engine.is_null() {
        0
    } else {
        unsafe { &*engine }.atlas.ends()
    }
}

/// Releases a string returned through a `char **` out-parameter.
///
/// # Safety
/// `s` must be null or a string pointer produced by this library.
#[no_mangle]
pub unsafe extern "C" fn bigmcg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Parses a word; on success writes its canonical rendering.
///
/// # Safety
/// `engine` must be a live engine pointer; `word` a valid string;
/// `canonical_out` null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn bigmcg_parse_check(
    engine: *const BigmcgEngine,
    word: *const c_char,
    canonical_out: *mut *mut c_char,
) -> BigmcgStatus {
    guarded(|| {
        if engine.is_null() {
            return BigmcgNullPointer;
        }
        let atlas = unsafe { &*engine }.atlas;
        let text = match unsafe { read_str(word) } {
            Ok(t) => t,
            Err(e) => return e,
        };
        match parse(text, &atlas) {
            Ok(w) => {
                if !canonical_out.is_null() && give_string(canonical_out, render(&w)).is_err() {
                    return BigmcgInternalError;
                }
                BigmcgOk
            }
            Err(_) => BigmcgParseError,
        }
    })
}

fn verdict_status(v: &Verdict) -> BigmcgStatus {
    match v {
        Verdict::Verified { .. } => BigmcgOk,
        Verdict::Refuted(_) => BigmcgRefuted,
        Verdict::Unknown { .. } => BigmcgUnknown,
    }
}

/// Layered shadow equality of two words. `detail_out` (optional) receives
/// the verdict text, including any witness.
///
/// # Safety
/// `engine` must be a live engine pointer; `w1`, `w2` valid strings;
/// `detail_out` null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn bigmcg_equal(
    engine: *const BigmcgEngine,
    w1: *const c_char,
    w2: *const c_char,
    window: u32,
    budget: u64,
    detail_out: *mut *mut c_char,
) -> BigmcgStatus {
    guarded(|| {
        if engine.is_null() {
            return BigmcgNullPointer;
        }
        let atlas = unsafe { &*engine }.atlas;
        let (t1, t2) = match (unsafe { read_str(w1) }, unsafe { read_str(w2) }) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return e,
        };
        let (word1, word2) = match (parse(t1, &atlas), parse(t2, &atlas)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return BigmcgParseError,
        };
        match equal_up_to(&atlas, &word1, &word2, window, budget) {
            Ok(verdict) => {
                if !detail_out.is_null() && give_string(detail_out, verdict.to_string()).is_err() {
                    return BigmcgInternalError;
                }
                verdict_status(&verdict)
            }
            Err(_) => BigmcgUsageError,
        }
    })
}

/// Truncated triviality of one word.
///
/// # Safety
/// As for [`bigmcg_equal`].
#[no_mangle]
pub unsafe extern "C" fn bigmcg_trivial(
    engine: *const BigmcgEngine,
    word: *const c_char,
    window: u32,
    detail_out: *mut *mut c_char,
) -> BigmcgStatus {
    guarded(|| {
        if engine.is_null() {
            return BigmcgNullPointer;
        }
        let atlas = unsafe { &*engine }.atlas;
        let text = match unsafe { read_str(word) } {
            Ok(t) => t,
            Err(e) => return e,
        };
        let w = match parse(text, &atlas) {
            Ok(w) => w,
            Err(_) => return BigmcgParseError,
        };
        match trivial_up_to(&atlas, &w, window) {
            Ok(verdict) => {
                if !detail_out.is_null() && give_string(detail_out, verdict.to_string()).is_err() {
                    return BigmcgInternalError;
                }
                verdict_status(&verdict)
            }
            Err(_) => BigmcgUsageError,
        }
    })
}

/// Applies a word to an atlas curve. Returns `BIGMCG_OK` when the image
/// fully reduces, `BIGMCG_UNKNOWN` when it stays suspended; either way the
/// term text goes to `image_out` when provided.
///
/// # Safety
/// As for [`bigmcg_equal`]; `curve` must be a valid string.
#[no_mangle]
pub unsafe extern "C" fn bigmcg_curve_image(
    engine: *const BigmcgEngine,
    word: *const c_char,
    curve: *const c_char,
    budget: u64,
    image_out: *mut *mut c_char,
) -> BigmcgStatus {
    guarded(|| {
        if engine.is_null() {
            return BigmcgNullPointer;
        }
        let atlas = unsafe { &*engine }.atlas;
        let (wt, ct) = match (unsafe { read_str(word) }, unsafe { read_str(curve) }) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return e,
        };
        let w = match parse(wt, &atlas) {
            Ok(w) => w,
            Err(_) => return BigmcgParseError,
        };
        let c = match parse_curve(ct) {
            Ok(c) if atlas.well_formed(c) => c,
            _ => return BigmcgParseError,
        };
        let image = curve_image(&atlas, &w, &CurveTerm::atlas(c), budget.max(1));
        let reduced = image.as_atlas().is_some();
        if !image_out.is_null() && give_string(image_out, image.to_string()).is_err() {
            return BigmcgInternalError;
        }
        if reduced {
            BigmcgOk
        } else {
            BigmcgUnknown
        }
    })
}

/// Genus flux of a pure word across the cut around `end`. Writes the value
/// through `value_out`; `BIGMCG_UNKNOWN` when undefined.
///
/// # Safety
/// `engine` live, `word` a valid string, `value_out` valid for one i64.
#[no_mangle]
pub unsafe extern "C" fn bigmcg_phi(
    engine: *const BigmcgEngine,
    end: u32,
    word: *const c_char,
    window: u32,
    value_out: *mut i64,
) -> BigmcgStatus {
    guarded(|| {
        if engine.is_null() || value_out.is_null() {
            return BigmcgNullPointer;
        }
        let atlas = unsafe { &*engine }.atlas;
        if end == 0 || end > atlas.ends() {
            return BigmcgUsageError;
        }
        let text = match unsafe { read_str(word) } {
            Ok(t) => t,
            Err(e) => return e,
        };
        let w = match parse(text, &atlas) {
            Ok(w) => w,
            Err(_) => return BigmcgParseError,
        };
        match phi(&atlas, SepClass::singleton(end), &w, window) {
            Some(v) => {
                unsafe { *value_out = v };
                BigmcgOk
            }
            None => BigmcgUnknown,
        }
    })
}

/// Full flux vector of a pure word: writes `ends` coordinates into
/// `coords_out`, which must hold at least `coords_len >= ends` entries.
///
/// # Safety
/// `engine` live, `word` valid, `coords_out` valid for `coords_len` i64s.
#[no_mangle]
pub unsafe extern "C" fn bigmcg_flux(
    engine: *const BigmcgEngine,
    word: *const c_char,
    window: u32,
    coords_out: *mut i64,
    coords_len: usize,
) -> BigmcgStatus {
    guarded(|| {
        if engine.is_null() || coords_out.is_null() {
            return BigmcgNullPointer;
        }
        let atlas = unsafe { &*engine }.atlas;
        if coords_len < atlas.ends() as usize {
            return BigmcgUsageError;
        }
        let text = match unsafe { read_str(word) } {
            Ok(t) => t,
            Err(e) => return e,
        };
        let w = match parse(text, &atlas) {
            Ok(w) => w,
            Err(_) => return BigmcgParseError,
        };
        match flux_vector(&atlas, &w, window) {
            Some(f) => {
                for (i, &c) in f.coords().iter().enumerate() {
                    unsafe { *coords_out.add(i) = c };
                }
                BigmcgOk
            }
            None => BigmcgUnknown,
        }
    })
}

/// Runs a catalog suite and hands back the full line report. Returns
/// `BIGMCG_OK` when every step passes, `BIGMCG_REFUTED` when any step
/// fails, `BIGMCG_UNKNOWN` otherwise.
///
/// # Safety
/// `engine` live, `name` valid, `report_out` null or valid for one pointer.
#[no_mangle]
pub unsafe extern "C" fn bigmcg_suite_run(
    engine: *const BigmcgEngine,
    name: *const c_char,
    window: u32,
    seed: u64,
    report_out: *mut *mut c_char,
) -> BigmcgStatus {
    guarded(|| {
        if engine.is_null() {
            return BigmcgNullPointer;
        }
        let atlas = unsafe { &*engine }.atlas;
        let name = match unsafe { read_str(name) } {
            Ok(t) => t,
            Err(e) => return e,
        };
        match run_suite(&atlas, name, window, seed) {
            Ok(report) => {
                if !report_out.is_null() && give_string(report_out, report.render_lines()).is_err()
                {
                    return BigmcgInternalError;
                }
                if report.all_pass() {
                    BigmcgOk
                } else if report.any_fail() {
                    BigmcgRefuted
                } else {
                    BigmcgUnknown
                }
            }
            Err(_) => BigmcgUsageError,
        }
    })
}

/// The metric-lab demo on the complete graph: Cauchy bounds for the
/// forward and inverse families plus the limit certificate, as a text
/// report. `BIGMCG_OK` when the demo expectation (forward Cauchy, inverse
/// not) is met.
///
/// # Safety
/// `report_out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn bigmcg_metric_demo(
    threshold: u64,
    depth: u64,
    report_out: *mut *mut c_char,
) -> BigmcgStatus {
    guarded(|| {
        let cauchy = match cauchy_report(&shift_example, threshold, depth) {
            Ok(c) => c,
            Err(_) => return BigmcgUsageError,
        };
        let limit = match pointwise_limit(&shift_example, depth.min(100)) {
            Ok(l) => l,
            Err(_) => return BigmcgUsageError,
        };
        let mut text = String::new();
        text.push_str(&format!(
            "forward within 1/2^{}: {}\n",
            threshold, cauchy.forward_within_bound
        ));
        text.push_str(&format!(
            "inverse within 1/2^{}: {} (distances {})\n",
            threshold,
            cauchy.inverse_within_bound,
            cauchy
                .inverse_constant
                .map(|c| format!("identically {c}"))
                .unwrap_or_else(|| "varying".to_string()),
        ));
        text.push_str(&format!(
            "limit omits the first vertex up to {}: {}\n",
            limit.bound, limit.no_preimage_of_first
        ));
        if !report_out.is_null() && give_string(report_out, text).is_err() {
            return BigmcgInternalError;
        }
        if cauchy.forward_within_bound && !cauchy.inverse_within_bound {
            BigmcgOk
        } else {
            BigmcgRefuted
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    fn take_string(p: *mut c_char) -> String {
        assert!(!p.is_null());
        let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
        unsafe { bigmcg_string_free(p) };
        s
    }

    #[test]
    fn engine_lifecycle_and_validation() {
        let mut engine: *mut BigmcgEngine = ptr::null_mut();
        assert_eq!(
            unsafe { bigmcg_engine_new(2, &mut engine) },
            BigmcgUsageError
        );
        assert_eq!(unsafe { bigmcg_engine_new(4, &mut engine) }, BigmcgOk);
        assert_eq!(unsafe { bigmcg_engine_ends(engine) }, 4);
        unsafe { bigmcg_engine_free(engine) };
        assert_eq!(
            unsafe { bigmcg_engine_new(4, ptr::null_mut()) },
            BigmcgNullPointer
        );
    }

    #[test]
    fn parse_and_canonical_rendering() {
        let mut engine: *mut BigmcgEngine = ptr::null_mut();
        unsafe { bigmcg_engine_new(4, &mut engine) };
        let mut out: *mut c_char = ptr::null_mut();
        let word = cstr("inv(h[1,2])*R^2");
        assert_eq!(
            unsafe { bigmcg_parse_check(engine, word.as_ptr(), &mut out) },
            BigmcgOk
        );
        assert_eq!(take_string(out), "inv(h[1,2])*R*R");
        let bad = cstr("T[q,1,1]");
        assert_eq!(
            unsafe { bigmcg_parse_check(engine, bad.as_ptr(), ptr::null_mut()) },
            BigmcgParseError
        );
        assert_eq!(
            unsafe { bigmcg_parse_check(engine, ptr::null(), ptr::null_mut()) },
            BigmcgNullPointer
        );
        unsafe { bigmcg_engine_free(engine) };
    }

    #[test]
    fn verdicts_across_the_boundary() {
        let mut engine: *mut BigmcgEngine = ptr::null_mut();
        unsafe { bigmcg_engine_new(3, &mut engine) };
        let w1 = cstr("tau1*tau2");
        let w2 = cstr("h[1,2]");
        let mut detail: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { bigmcg_equal(engine, w1.as_ptr(), w2.as_ptr(), 12, 512, &mut detail) },
            BigmcgOk
        );
        assert!(take_string(detail).contains("Verified"));

        let h = cstr("h[1,2]");
        let mut detail: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { bigmcg_trivial(engine, h.as_ptr(), 8, &mut detail) },
            BigmcgRefuted
        );
        assert!(take_string(detail).contains("Refuted"));
        unsafe { bigmcg_engine_free(engine) };
    }

    #[test]
    fn curve_images_and_flux() {
        let mut engine: *mut BigmcgEngine = ptr::null_mut();
        unsafe { bigmcg_engine_new(4, &mut engine) };
        let word = cstr("T[a,1,1]*T[b,1,1]");
        let curve = cstr("a[1,1]");
        let mut image: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { bigmcg_curve_image(engine, word.as_ptr(), curve.as_ptr(), 64, &mut image) },
            BigmcgOk
        );
        assert_eq!(take_string(image), "b[1,1]");

        let shift = cstr("h[1,2]");
        let mut coords = [0i64; 4];
        assert_eq!(
            unsafe { bigmcg_flux(engine, shift.as_ptr(), 10, coords.as_mut_ptr(), 4) },
            BigmcgOk
        );
        assert_eq!(coords, [-1, 1, 0, 0]);
        let mut value = 0i64;
        assert_eq!(
            unsafe { bigmcg_phi(engine, 2, shift.as_ptr(), 10, &mut value) },
            BigmcgOk
        );
        assert_eq!(value, 1);
        unsafe { bigmcg_engine_free(engine) };
    }

    #[test]
    fn suites_and_metric_demo() {
        let mut engine: *mut BigmcgEngine = ptr::null_mut();
        unsafe { bigmcg_engine_new(4, &mut engine) };
        let name = cstr("lemma1");
        let mut report: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { bigmcg_suite_run(engine, name.as_ptr(), 10, 0, &mut report) },
            BigmcgOk
        );
        let text = take_string(report);
        assert!(text.lines().all(|l| l.starts_with("PASS")));

        let bad = cstr("nonsense");
        assert_eq!(
            unsafe { bigmcg_suite_run(engine, bad.as_ptr(), 10, 0, ptr::null_mut()) },
            BigmcgUsageError
        );
        unsafe { bigmcg_engine_free(engine) };

        let mut report: *mut c_char = ptr::null_mut();
        assert_eq!(unsafe { bigmcg_metric_demo(5, 20, &mut report) }, BigmcgOk);
        let text = take_string(report);
        assert!(text.contains("forward within 1/2^5: true"));
        assert!(text.contains("inverse within 1/2^5: false"));
    }

    #[test]
    fn version_is_a_static_string() {
        let v = unsafe { CStr::from_ptr(bigmcg_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
