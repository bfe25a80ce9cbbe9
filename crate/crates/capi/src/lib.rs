//! C ABI for the tiling enumeration engine.
//!
//! Opaque handles, integer status codes, decimal-string counts. Every
//! entry point catches panics and reports them as `WC_ERR_INTERNAL`;
//! the per-thread message from [`wc_last_error`] carries the detail.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use wangcount::engine::EngineError;
use wangcount::modmath::PrimePlan;
use wangcount::polyomino;
use wangcount::regions;
use wangcount::tiles::{parse_tile_set, WeightedTileSet};

/// Status codes returned by every fallible entry point.
pub const WC_OK: i32 = 0;
pub const WC_ERR_NULL_ARG: i32 = 1;
pub const WC_ERR_UTF8: i32 = 2;
pub const WC_ERR_PARSE: i32 = 3;
pub const WC_ERR_INVALID: i32 = 4;
pub const WC_ERR_UNCONVERGED: i32 = 5;
pub const WC_ERR_INTERNAL: i32 = 6;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

/// Message describing the most recent failure on this thread. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn wc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// An immutable weighted Wang tile set.
pub struct WcTileSet {
    inner: WeightedTileSet,
}

/// Exact counts from one enumeration, as decimal strings.
pub struct WcCounts {
    values: Vec<CString>,
    primes_used: usize,
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, i32> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(WC_ERR_NULL_ARG);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        WC_ERR_UTF8
    })
}

fn guard(body: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic");
            WC_ERR_INTERNAL
        }
    }
}

/// Loads a tile set from the built-in catalog (for example "I-family",
/// "I2", "tetrominoes", "pentominoes"). On success writes an owned
/// handle to `out`.
///
/// # Safety
/// `name` must be a valid NUL-terminated string and `out` a valid
/// pointer; the returned handle must be released with
/// [`wc_tileset_free`].
#[no_mangle]
pub unsafe extern "C" fn wc_tileset_from_catalog(
    name: *const c_char,
    out: *mut *mut WcTileSet,
) -> i32 {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return WC_ERR_NULL_ARG;
        }
        let name = match read_str(name) {
            Ok(s) => s,
            Err(code) => return code,
        };
        match polyomino::catalog(name) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(WcTileSet { inner: d.tiles }));
                WC_OK
            }
            Err(e) => {
                set_error(&e.to_string());
                WC_ERR_INVALID
            }
        }
    })
}

/// Parses the tile-set text format (`left top bottom right weight` per
/// line, `#` boundary, `%` comments).
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid
/// pointer; the returned handle must be released with
/// [`wc_tileset_free`].
#[no_mangle]
pub unsafe extern "C" fn wc_tileset_parse(text: *const c_char, out: *mut *mut WcTileSet) -> i32 {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return WC_ERR_NULL_ARG;
        }
        let text = match read_str(text) {
            Ok(s) => s,
            Err(code) => return code,
        };
        match parse_tile_set(text) {
            Ok(ts) => {
                *out = Box::into_raw(Box::new(WcTileSet { inner: ts }));
                WC_OK
            }
            Err(e) => {
                set_error(&e.to_string());
                WC_ERR_PARSE
            }
        }
    })
}

/// Releases a tile set handle. A null handle is ignored.
///
/// # Safety
/// `ts` must be a handle returned by this library, released once.
#[no_mangle]
pub unsafe extern "C" fn wc_tileset_free(ts: *mut WcTileSet) {
    if !ts.is_null() {
        drop(Box::from_raw(ts));
    }
}

/// Number of tiles in the set.
///
/// # Safety
/// `ts` must be a live handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn wc_tileset_len(ts: *const WcTileSet) -> usize {
    if ts.is_null() {
        return 0;
    }
    (*ts).inner.tiles().len()
}

/// Counts tilings of the `width x h` rectangles for every height
/// `h = 1..=max_height` in one pass. `tau` is the halting threshold
/// (use 2), `word_bits` 32 or 64.
///
/// # Safety
/// `ts` must be a live tile set handle and `out` a valid pointer; the
/// result must be released with [`wc_counts_free`].
#[no_mangle]
pub unsafe extern "C" fn wc_enumerate_rectangle(
    ts: *const WcTileSet,
    width: u32,
    max_height: u32,
    tau: u32,
    word_bits: u32,
    out: *mut *mut WcCounts,
) -> i32 {
    guard(|| {
        if ts.is_null() || out.is_null() {
            set_error("null argument");
            return WC_ERR_NULL_ARG;
        }
        if width == 0 || max_height == 0 || tau == 0 {
            set_error("width, max_height and tau must be positive");
            return WC_ERR_INVALID;
        }
        let tiles = &(*ts).inner;
        let program = match regions::compile_rectangle(tiles, width as usize, max_height as usize)
        {
            Ok(p) => p,
            Err(e) => {
                set_error(&e.to_string());
                return WC_ERR_INVALID;
            }
        };
        let plan = match PrimePlan::new(&program.stats(), word_bits, 100) {
            Ok(p) => p,
            Err(e) => {
                set_error(&e.to_string());
                return WC_ERR_INVALID;
            }
        };
        match program.enumerate(&plan, tau) {
            Ok(result) => {
                let values = result
                    .counts
                    .iter()
                    .map(|c| CString::new(c.to_string()).expect("decimal digits"))
                    .collect();
                *out = Box::into_raw(Box::new(WcCounts {
                    values,
                    primes_used: result.primes_used,
                }));
                WC_OK
            }
            Err(e @ EngineError::Unconverged(_)) => {
                set_error(&e.to_string());
                WC_ERR_UNCONVERGED
            }
            Err(e) => {
                set_error(&e.to_string());
                WC_ERR_INVALID
            }
        }
    })
}

/// Number of counts in the result.
///
/// # Safety
/// `counts` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn wc_counts_len(counts: *const WcCounts) -> usize {
    if counts.is_null() {
        return 0;
    }
    (*counts).values.len()
}

/// The `index`-th count as a decimal string, or null when out of range.
/// The pointer stays valid for the lifetime of the result handle.
///
/// # Safety
/// `counts` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn wc_counts_get(counts: *const WcCounts, index: usize) -> *const c_char {
    if counts.is_null() {
        return std::ptr::null();
    }
    match (&(*counts).values).get(index) {
        Some(s) => s.as_ptr(),
        None => std::ptr::null(),
    }
}

/// How many primes the run consumed before halting.
///
/// # Safety
/// `counts` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn wc_counts_primes_used(counts: *const WcCounts) -> usize {
    if counts.is_null() {
        return 0;
    }
    (*counts).primes_used
}

/// Releases a result handle. A null handle is ignored.
///
/// # Safety
/// `counts` must be a handle returned by this library, released once.
#[no_mangle]
pub unsafe extern "C" fn wc_counts_free(counts: *mut WcCounts) {
    if !counts.is_null() {
        drop(Box::from_raw(counts));
    }
}
