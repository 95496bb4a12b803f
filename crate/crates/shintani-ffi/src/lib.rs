// SPDX-License-Identifier: Apache-2.0

//! C ABI for the `shintani` library.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! a [`ShintaniStatus`]; on failure [`shintani_last_error`] describes the
//! problem. Strings handed out by the library are NUL-terminated JSON and
//! must be released with [`shintani_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shintani::arith::{DirichletChar, Rationals};
use shintani::modsym::{solve_symbol_space, SymbolSpace};
use shintani::ocsymb::{solve_oc_space, OCSymbol, OcParams};
use shintani::qf::enumerate_classes;
use shintani::shintani::{default_character, theta_classical, theta_oc, verify};
use shintani::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShintaniStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    /// A computation ran but could not finish (precision, convergence).
    Computation = 3,
    /// A verification ran and found a mismatch.
    CheckFailed = 4,
    Panic = 5,
}

/// A solved space of classical modular symbols over `Q`.
pub struct ShintaniSymbolSpace {
    space: SymbolSpace<Rationals>,
}

/// An overconvergent modular symbol.
pub struct ShintaniOcSymbol {
    symbol: OCSymbol,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> ShintaniStatus {
    match e {
        Error::InvalidInput(_) | Error::BadIndex(..) | Error::DegreeMismatch(..) | Error::InsufficientMoments { .. } => {
            ShintaniStatus::InvalidInput
        }
        _ => ShintaniStatus::Computation,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (ShintaniStatus, String)>) -> ShintaniStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            ShintaniStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            ShintaniStatus::Panic
        }
    }
}

fn lib<T>(r: shintani::Result<T>) -> Result<T, (ShintaniStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), (ShintaniStatus, String)> {
    if p.is_null() {
        return Err((ShintaniStatus::NullPointer, format!("{what} is null")));
    }
    Ok(())
}

/// # Safety
/// `out` must be valid for writes.
unsafe fn write_json(out: *mut *mut c_char, v: &serde_json::Value) -> Result<(), (ShintaniStatus, String)> {
    let s = CString::new(v.to_string()).map_err(|e| (ShintaniStatus::Computation, e.to_string()))?;
    *out = s.into_raw();
    Ok(())
}

fn character(conductor: u64, modulus: u64) -> Result<DirichletChar, (ShintaniStatus, String)> {
    if conductor <= 1 {
        return Ok(DirichletChar::trivial(modulus));
    }
    lib(DirichletChar::quadratic(conductor).and_then(|c| c.lift(modulus)))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn shintani_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn shintani_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of `Gamma_0(level)`-classes of forms of discriminant `disc`.
///
/// # Safety
/// `out_count` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn shintani_class_count(level: u64, disc: i64, out_count: *mut usize) -> ShintaniStatus {
    guard(|| {
        non_null(out_count, "out_count")?;
        if level == 0 {
            return Err((ShintaniStatus::InvalidInput, "level must be positive".into()));
        }
        *out_count = enumerate_classes(level, disc).len();
        Ok(())
    })
}

/// Class representatives as a JSON array of `[a, b, c]` triples.
///
/// # Safety
/// `out_json` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn shintani_classes_json(level: u64, disc: i64, out_json: *mut *mut c_char) -> ShintaniStatus {
    guard(|| {
        non_null(out_json, "out_json")?;
        if level == 0 {
            return Err((ShintaniStatus::InvalidInput, "level must be positive".into()));
        }
        let forms: Vec<[i64; 3]> = enumerate_classes(level, disc).iter().map(|q| [q.a, q.b, q.c]).collect();
        write_json(out_json, &serde_json::json!(forms))
    })
}

/// Solves the space of weight `weight` symbols at `level` with character
/// trivial (`char_conductor` 0 or 1) or quadratic of the given conductor.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn shintani_symbol_space_new(
    level: u64,
    weight: u32,
    char_conductor: u64,
    out: *mut *mut ShintaniSymbolSpace,
) -> ShintaniStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let chi = character(char_conductor, level)?;
        let space = lib(solve_symbol_space(level, weight as usize, &chi, Rationals))?;
        *out = Box::into_raw(Box::new(ShintaniSymbolSpace { space }));
        Ok(())
    })
}

/// # Safety
/// `space` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn shintani_symbol_space_dimension(space: *const ShintaniSymbolSpace) -> usize {
    space.as_ref().map_or(0, |s| s.space.dimension())
}

/// # Safety
/// `space` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn shintani_symbol_space_free(space: *mut ShintaniSymbolSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// The classical lift of basis symbol `index` up to `q^nmax` as JSON. The
/// space must have even weight `2k`; the lift uses the default character
/// of parity `(-1)^(k+1)` whose square is the space's character.
///
/// # Safety
/// `space` must be a live handle and `out_json` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn shintani_theta_classical_json(
    space: *const ShintaniSymbolSpace,
    index: usize,
    nmax: usize,
    out_json: *mut *mut c_char,
) -> ShintaniStatus {
    guard(|| {
        non_null(space, "space")?;
        non_null(out_json, "out_json")?;
        let s = &(*space).space;
        if s.k % 2 == 1 {
            return Err((ShintaniStatus::InvalidInput, "space weight must be even".into()));
        }
        let k = s.k / 2;
        let chi = default_character(s.level(), k);
        if chi.square() != s.chi {
            return Err((ShintaniStatus::InvalidInput, "no default character squares to the space's character".into()));
        }
        let phi = s
            .basis
            .get(index)
            .ok_or_else(|| (ShintaniStatus::InvalidInput, format!("index {index} out of range")))?;
        let theta = lib(theta_classical(phi, k, &chi, nmax))?;
        write_json(out_json, &theta.to_json())
    })
}

/// A random overconvergent symbol of tame level `n` at `p`, with `T`
/// moments and precision `p^m`, drawn reproducibly from `seed`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn shintani_oc_symbol_random(
    p: u64,
    n: u64,
    m: u32,
    t: u32,
    seed: u64,
    out: *mut *mut ShintaniOcSymbol,
) -> ShintaniStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        if p < 5 {
            return Err((ShintaniStatus::InvalidInput, "p must be at least 5".into()));
        }
        let params = lib(OcParams::new(p, n, m, t as usize))?;
        let space = lib(solve_oc_space(params))?;
        let symbol = space.random_element(&mut ChaCha8Rng::seed_from_u64(seed));
        *out = Box::into_raw(Box::new(ShintaniOcSymbol { symbol }));
        Ok(())
    })
}

/// # Safety
/// `sym` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn shintani_oc_symbol_free(sym: *mut ShintaniOcSymbol) {
    if !sym.is_null() {
        drop(Box::from_raw(sym));
    }
}

/// The overconvergent lift up to `q^nmax` as JSON.
///
/// # Safety
/// `sym` must be a live handle and `out_json` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn shintani_theta_oc_json(
    sym: *const ShintaniOcSymbol,
    nmax: usize,
    out_json: *mut *mut c_char,
) -> ShintaniStatus {
    guard(|| {
        non_null(sym, "sym")?;
        non_null(out_json, "out_json")?;
        let theta = lib(theta_oc(&(*sym).symbol, nmax))?;
        write_json(out_json, &theta.to_json())
    })
}

/// Checks the overconvergent Hecke formula for the primes in `ls`. Returns
/// `CheckFailed` on a mismatch; the report is written either way when
/// `out_json` is not null.
///
/// # Safety
/// `sym` must be a live handle, `ls` must point to `nls` integers and
/// `out_json` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn shintani_verify_oc_hecke(
    sym: *const ShintaniOcSymbol,
    ls: *const u64,
    nls: usize,
    nmax: usize,
    out_json: *mut *mut c_char,
) -> ShintaniStatus {
    guard(|| {
        non_null(sym, "sym")?;
        non_null(ls, "ls")?;
        let ls = std::slice::from_raw_parts(ls, nls);
        let report = lib(verify::verify_oc_hecke(&(*sym).symbol, ls, nmax))?;
        finish_report(&report, out_json)
    })
}

/// Checks anti-symmetry of the classical lift at `level` and weight
/// `k + 3/2` with the default character.
///
/// # Safety
/// `out_json` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn shintani_verify_involution(
    level: u64,
    k: u32,
    nmax: usize,
    out_json: *mut *mut c_char,
) -> ShintaniStatus {
    guard(|| {
        let chi = default_character(level, k as usize);
        let report = lib(verify::verify_involution(level, k as usize, &chi, nmax))?;
        finish_report(&report, out_json)
    })
}

/// # Safety
/// `out_json` must be null or valid for writes.
unsafe fn finish_report(report: &verify::VerifyReport, out_json: *mut *mut c_char) -> Result<(), (ShintaniStatus, String)> {
    if !out_json.is_null() {
        write_json(out_json, &report.to_json())?;
    }
    match report.first_failure() {
        None => Ok(()),
        Some(c) => Err((ShintaniStatus::CheckFailed, format!("check failed: {}", c.name))),
    }
}

/// Copies the last error into a Rust string; for tests and Rust callers.
pub fn last_error_string() -> String {
    // SAFETY: the pointer refers to the thread-local buffer, alive for this call
    unsafe { CStr::from_ptr(shintani_last_error()).to_string_lossy().into_owned() }
}
