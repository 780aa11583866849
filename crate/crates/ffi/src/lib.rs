//! C interface to `jump-tower`.
//!
//! Every object crosses the boundary as an opaque pointer owned by the
//! caller and released with its `_free` function. Fallible functions return
//! a [`JtStatus`] and write results through out-pointers; on failure
//! [`jt_last_error`] describes the problem. Panics are caught and reported as
//! [`JtStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use jump_tower::constructions::friedberg::Friedberg;
use jump_tower::constructions::tower::{one_nonzero_index, Tower, TowerConfig};
use jump_tower::harness::config::ExperimentConfig;
use jump_tower::harness::{fixtures, verify};
use jump_tower::machine::{encode_program, parse_program, run, Divergence, Oracle, Outcome};
use jump_tower::nat::{pair_u64, unpair, Nat};
use jump_tower::space::{str_code_u64, Str};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JtStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    ParseError = 3,
    /// The value does not fit in 64 bits.
    Overflow = 4,
    ConstructionFailed = 5,
    /// A verification suite found violations.
    Violation = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JtDivergence {
    None = 0,
    BudgetExhausted = 1,
    OracleOutOfRange = 2,
    NestingLimit = 3,
}

/// Result of [`jt_run`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct JtRunResult {
    pub halted: bool,
    /// Whether `output` holds the output; false when it needs more than 64 bits.
    pub output_fits: bool,
    pub output: u64,
    pub steps: u64,
    pub oracle_use: u64,
    pub divergence: JtDivergence,
}

/// A finite string of naturals.
pub struct JtStr(Str);
/// An oracle.
pub struct JtOracle(Oracle);
/// A program index.
pub struct JtProgram(Nat);
/// The map `G` relative to one oracle and cap.
pub struct JtFriedberg(Friedberg);
/// The ω-tower over the tree of strings with at most one nonzero entry.
pub struct JtTower(Arc<Tower>);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn fail(status: JtStatus, msg: impl Into<String>) -> JtStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> JtStatus) -> JtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(JtStatus::Panic, "internal panic"),
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, JtStatus> {
    if p.is_null() {
        return Err(fail(JtStatus::NullArgument, "null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(JtStatus::InvalidArgument, "string is not UTF-8"))
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> JtStatus {
    *out = Box::into_raw(Box::new(v));
    JtStatus::Ok
}

macro_rules! non_null {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            return fail(JtStatus::NullArgument, "null argument");
        }
    };
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length in bytes.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn jt_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Cantor pairing. Fails with `Overflow` when the result exceeds 64 bits.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jt_pair(m: u64, n: u64, out: *mut u64) -> JtStatus {
    non_null!(out);
    match pair_u64(m, n) {
        Some(z) => {
            *out = z;
            JtStatus::Ok
        }
        None => fail(JtStatus::Overflow, format!("pair({m}, {n}) exceeds 64 bits")),
    }
}

/// # Safety
/// `m` and `n` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jt_unpair(z: u64, m: *mut u64, n: *mut u64) -> JtStatus {
    non_null!(m, n);
    let (a, b) = unpair(z);
    *m = a;
    *n = b;
    JtStatus::Ok
}

/// # Safety
/// `entries` must point to `len` values (or be null when `len` is 0).
#[no_mangle]
pub unsafe extern "C" fn jt_str_new(entries: *const u64, len: usize) -> *mut JtStr {
    let v = if len == 0 {
        Vec::new()
    } else if entries.is_null() {
        return ptr::null_mut();
    } else {
        std::slice::from_raw_parts(entries, len).to_vec()
    };
    Box::into_raw(Box::new(JtStr(Str::from(v))))
}

/// Parses `<a,b,...>`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jt_str_parse(literal: *const c_char, out: *mut *mut JtStr) -> JtStatus {
    non_null!(out);
    guard(|| {
        let t = match text(literal) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match t.parse::<Str>() {
            Ok(s) => put(out, JtStr(s)),
            Err(e) => fail(JtStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `s` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn jt_str_len(s: *const JtStr) -> usize {
    if s.is_null() {
        return 0;
    }
    (*s).0.len()
}

/// Copies up to `cap` entries into `buf`; returns the string's length.
///
/// # Safety
/// `s` must come from this library; `buf` must hold `cap` values.
#[no_mangle]
pub unsafe extern "C" fn jt_str_entries(s: *const JtStr, buf: *mut u64, cap: usize) -> usize {
    if s.is_null() {
        return 0;
    }
    let e = (*s).0.entries();
    if !buf.is_null() {
        ptr::copy_nonoverlapping(e.as_ptr(), buf, e.len().min(cap));
    }
    e.len()
}

/// Writes `<a,b,...>` into `buf` (NUL-terminated, truncated); returns the
/// full length in bytes.
///
/// # Safety
/// `s` must come from this library; `buf` null or `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn jt_str_format(s: *const JtStr, buf: *mut c_char, len: usize) -> usize {
    if s.is_null() {
        return 0;
    }
    let t = (*s).0.to_string();
    if !buf.is_null() && len > 0 {
        let n = t.len().min(len - 1);
        ptr::copy_nonoverlapping(t.as_ptr(), buf.cast::<u8>(), n);
        *buf.add(n) = 0;
    }
    t.len()
}

/// # Safety
/// `s` must come from this library; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jt_str_code(s: *const JtStr, out: *mut u64) -> JtStatus {
    non_null!(s, out);
    match str_code_u64(&(*s).0) {
        Some(c) => {
            *out = c;
            JtStatus::Ok
        }
        None => fail(JtStatus::Overflow, "string code exceeds 64 bits"),
    }
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jt_str_free(s: *mut JtStr) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn jt_oracle_zeros() -> *mut JtOracle {
    Box::into_raw(Box::new(JtOracle(Oracle::zeros())))
}

/// The oracle with the given values, then zeros.
///
/// # Safety
/// `s` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn jt_oracle_table(s: *const JtStr) -> *mut JtOracle {
    if s.is_null() {
        return ptr::null_mut();
    }
    Box::into_raw(Box::new(JtOracle(Oracle::table((*s).0.clone()))))
}

/// `zeros`, `jump`, `jumpN` or a table literal; jumps are taken at `stage`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jt_oracle_named(name: *const c_char, stage: u64, out: *mut *mut JtOracle) -> JtStatus {
    non_null!(out);
    guard(|| {
        let n = match text(name) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match fixtures::oracle(n, stage) {
            Some(o) => put(out, JtOracle(o)),
            None => fail(JtStatus::InvalidArgument, format!("unknown oracle {n:?}")),
        }
    })
}

/// # Safety
/// `o` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jt_oracle_free(o: *mut JtOracle) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// Parses program text (`inc r`, `dec r`, `jz r t`, `query r`, `halt`).
///
/// # Safety
/// `source` must be a NUL-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jt_program_parse(source: *const c_char, out: *mut *mut JtProgram) -> JtStatus {
    non_null!(out);
    guard(|| {
        let t = match text(source) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_program(t) {
            Ok(p) => put(out, JtProgram(encode_program(&p))),
            Err(e) => fail(JtStatus::ParseError, e.to_string()),
        }
    })
}

/// The program with a given index, in decimal or as `#<...>`.
///
/// # Safety
/// `index` must be a NUL-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jt_program_from_index(index: *const c_char, out: *mut *mut JtProgram) -> JtStatus {
    non_null!(out);
    guard(|| {
        let t = match text(index) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match t.parse::<Nat>() {
            Ok(n) => put(out, JtProgram(n)),
            Err(e) => fail(JtStatus::ParseError, format!("bad index {:?}", e.0)),
        }
    })
}

/// # Safety
/// `p` must come from this library; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jt_program_index(p: *const JtProgram, out: *mut u64) -> JtStatus {
    non_null!(p, out);
    match (*p).0.to_u64() {
        Some(v) => {
            *out = v;
            JtStatus::Ok
        }
        None => fail(JtStatus::Overflow, "index exceeds 64 bits"),
    }
}

/// # Safety
/// `p` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jt_program_free(p: *mut JtProgram) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Runs `program` on `input` with `oracle` for at most `budget` steps.
///
/// # Safety
/// Handles must come from this library; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jt_run(
    program: *const JtProgram,
    oracle: *const JtOracle,
    input: u64,
    budget: u64,
    out: *mut JtRunResult,
) -> JtStatus {
    non_null!(program, oracle, out);
    guard(|| {
        let r = run(&(*program).0, &(*oracle).0, &Nat::from(input), budget);
        *out = match r {
            Outcome::Halt { output, steps, oracle_use } => JtRunResult {
                halted: true,
                output_fits: output.to_u64().is_some(),
                output: output.to_u64().unwrap_or(0),
                steps,
                oracle_use,
                divergence: JtDivergence::None,
            },
            Outcome::Diverged(d) => JtRunResult {
                halted: false,
                output_fits: false,
                output: 0,
                steps: budget,
                oracle_use: 0,
                divergence: match d {
                    Divergence::BudgetExhausted => JtDivergence::BudgetExhausted,
                    Divergence::OracleOutOfRange => JtDivergence::OracleOutOfRange,
                    Divergence::NestingLimit => JtDivergence::NestingLimit,
                },
            },
        };
        JtStatus::Ok
    })
}

/// `G` relative to `oracle`, searching codes below `cap`.
///
/// # Safety
/// `oracle` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn jt_friedberg_new(oracle: *const JtOracle, cap: u64) -> *mut JtFriedberg {
    if oracle.is_null() {
        return ptr::null_mut();
    }
    Box::into_raw(Box::new(JtFriedberg(Friedberg::new((*oracle).0.clone(), cap))))
}

/// `G(σ)`.
///
/// # Safety
/// Handles must come from this library; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jt_friedberg_image(
    g: *const JtFriedberg,
    sigma: *const JtStr,
    out: *mut *mut JtStr,
) -> JtStatus {
    non_null!(g, sigma, out);
    guard(|| put(out, JtStr((*g).0.image(&(*sigma).0))))
}

/// The longest `σ` with `G(σ) ⊆ τ`.
///
/// # Safety
/// Handles must come from this library; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jt_friedberg_decode(
    g: *const JtFriedberg,
    tau: *const JtStr,
    out: *mut *mut JtStr,
) -> JtStatus {
    non_null!(g, tau, out);
    guard(|| put(out, JtStr((*g).0.decode(&(*tau).0))))
}

/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jt_friedberg_free(g: *mut JtFriedberg) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Builds the tower with `levels` levels, all searches bounded by `stage`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jt_tower_new(levels: usize, stage: u64, out: *mut *mut JtTower) -> JtStatus {
    non_null!(out);
    guard(|| {
        let cfg = TowerConfig { levels, stage, ..TowerConfig::new(one_nonzero_index()) };
        match Tower::new(cfg) {
            Ok(t) => put(out, JtTower(t)),
            Err(e) => fail(JtStatus::ConstructionFailed, e.to_string()),
        }
    })
}

/// `H_n(ρ)`.
///
/// # Safety
/// Handles must come from this library; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jt_tower_level_apply(
    t: *const JtTower,
    n: usize,
    rho: *const JtStr,
    out: *mut *mut JtStr,
) -> JtStatus {
    non_null!(t, rho, out);
    guard(|| match (*t).0.level_apply(n, &(*rho).0) {
        Ok(v) => put(out, JtStr(v)),
        Err(e) => fail(JtStatus::ConstructionFailed, e.to_string()),
    })
}

/// `H^ω_n(ρ)`.
///
/// # Safety
/// Handles must come from this library; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jt_tower_omega_apply(
    t: *const JtTower,
    n: usize,
    rho: *const JtStr,
    out: *mut *mut JtStr,
) -> JtStatus {
    non_null!(t, rho, out);
    guard(|| match (*t).0.omega_apply(n, &(*rho).0) {
        Ok(v) => put(out, JtStr(v)),
        Err(e) => fail(JtStatus::ConstructionFailed, e.to_string()),
    })
}

/// # Safety
/// `t` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jt_tower_free(t: *mut JtTower) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Runs a named verification suite. Writes the number of violations and
/// returns `Violation` when there are any.
///
/// # Safety
/// `suite` must be a NUL-terminated string; `violations` null or writable.
#[no_mangle]
pub unsafe extern "C" fn jt_verify(suite: *const c_char, depth: usize, stage: u64, violations: *mut u64) -> JtStatus {
    guard(|| {
        let name = match text(suite) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let cfg = ExperimentConfig { depth, stage, cap: stage, ..ExperimentConfig::default() };
        match verify::run_suite(name, &cfg) {
            Ok(r) => {
                if !violations.is_null() {
                    *violations = r.violations.len() as u64;
                }
                if r.ok() {
                    JtStatus::Ok
                } else {
                    fail(JtStatus::Violation, r.violations.join("\n"))
                }
            }
            Err(e) => fail(JtStatus::InvalidArgument, e.to_string()),
        }
    })
}
