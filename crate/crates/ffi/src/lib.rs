//! C interface to `kkschur`.
//!
//! Every function returns a [`KksStatus`]. Strings handed out by the
//! library must be released with [`kks_string_free`]; contexts with
//! [`kks_context_free`]. After a non-OK status, [`kks_last_error`] describes
//! the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

use kkschur::cores::{bdd_shape, core_shape, is_core, k_conjugate_shape};
use kkschur::verify::{binom_fold_check, NlaInstance, Verifier, DEFAULT_BUDGET};
use kkschur::{Error, ExpansionTable, LevelContext, Partition};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KksStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    BudgetExceeded = 5,
    NotDivisible = 6,
    Internal = 7,
    Panic = 8,
}

/// An expansion table for one level `k`.
pub struct KksContext {
    table: ExpansionTable,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> KksStatus {
    match e {
        Error::Parse(_) | Error::NotAPartition(_) => KksStatus::Parse,
        Error::BudgetExceeded { .. } => KksStatus::BudgetExceeded,
        Error::NotDivisible(_) => KksStatus::NotDivisible,
        Error::Io(_) | Error::SolveFailure(_) => KksStatus::Internal,
        _ => KksStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), KksStatus>) -> KksStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KksStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside kkschur");
            KksStatus::Panic
        }
    }
}

fn fail(e: Error) -> KksStatus {
    set_error(&e.to_string());
    status_of(&e)
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, KksStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(KksStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        KksStatus::InvalidUtf8
    })
}

unsafe fn read_partition(s: *const c_char) -> Result<Partition, KksStatus> {
    Partition::from_str(read_str(s)?).map_err(fail)
}

unsafe fn context<'a>(ctx: *const KksContext) -> Result<&'a KksContext, KksStatus> {
    ctx.as_ref().ok_or_else(|| {
        set_error("null context");
        KksStatus::NullPointer
    })
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), KksStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(KksStatus::NullPointer);
    }
    let c = CString::new(s).map_err(|_| KksStatus::Internal)?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn write_flag(out: *mut i32, v: bool) -> Result<(), KksStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(KksStatus::NullPointer);
    }
    *out = i32::from(v);
    Ok(())
}

/// Message for the last failure on this thread. Owned by the library and
/// valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn kks_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kks_context_new(k: usize, out: *mut *mut KksContext) -> KksStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return Err(KksStatus::NullPointer);
        }
        let ctx = LevelContext::new(k).map_err(fail)?;
        *out = Box::into_raw(Box::new(KksContext { table: ExpansionTable::new(ctx) }));
        Ok(())
    })
}

/// # Safety
/// `ctx` must come from [`kks_context_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kks_context_free(ctx: *mut KksContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kks_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The (k+1)-core of a k-bounded partition, as text.
///
/// # Safety
/// Pointers must be valid; `shape` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn kks_core(ctx: *const KksContext, shape: *const c_char, out: *mut *mut c_char) -> KksStatus {
    guard(|| {
        let k = context(ctx)?.table.k();
        let p = read_partition(shape)?;
        if !p.is_bounded(k) {
            return Err(fail(Error::NotBounded { shape: p.to_string(), k }));
        }
        write_string(out, core_shape(&p, k).to_string())
    })
}

/// The k-bounded partition of a (k+1)-core, as text.
///
/// # Safety
/// Pointers must be valid; `shape` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn kks_bdd(ctx: *const KksContext, shape: *const c_char, out: *mut *mut c_char) -> KksStatus {
    guard(|| {
        let k = context(ctx)?.table.k();
        let p = read_partition(shape)?;
        if !is_core(&p, k) {
            return Err(fail(Error::NotACore { shape: p.to_string(), k }));
        }
        write_string(out, bdd_shape(&p, k).to_string())
    })
}

/// # Safety
/// Pointers must be valid; `shape` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn kks_kconj(ctx: *const KksContext, shape: *const c_char, out: *mut *mut c_char) -> KksStatus {
    guard(|| {
        let k = context(ctx)?.table.k();
        let p = read_partition(shape)?;
        if !p.is_bounded(k) {
            return Err(fail(Error::NotBounded { shape: p.to_string(), k }));
        }
        write_string(out, k_conjugate_shape(&p, k).to_string())
    })
}

/// `kks{shape}` in the h-basis, one term per line.
///
/// # Safety
/// Pointers must be valid; `shape` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn kks_expand(ctx: *const KksContext, shape: *const c_char, out: *mut *mut c_char) -> KksStatus {
    guard(|| {
        let c = context(ctx)?;
        let p = read_partition(shape)?;
        let poly = c.table.kks_in_h(&p).map_err(fail)?;
        write_string(out, poly.to_text())
    })
}

/// Checks `kks{R_t ∪ λ} = kks{R_t} Σ kks{ν}`; writes 1 to `pass` on success.
///
/// # Safety
/// Pointers must be valid; `lambda` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn kks_verify_samek(
    ctx: *const KksContext,
    lambda: *const c_char,
    t: usize,
    pass: *mut i32,
) -> KksStatus {
    guard(|| {
        let c = context(ctx)?;
        let p = read_partition(lambda)?;
        let inst = NlaInstance::new(p, t, c.table.ctx()).map_err(fail)?;
        let report = Verifier::new(&c.table).theorem_samek_verify(&inst).map_err(fail)?;
        write_flag(pass, report.pass)
    })
}

/// Checks `kks{R_t^a} = kks{R_t} (Σ_{λ ⊆ R_t} kks{λ})^{a-1}`.
///
/// # Safety
/// `ctx` and `pass` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kks_verify_rta(ctx: *const KksContext, t: usize, a: usize, pass: *mut i32) -> KksStatus {
    guard(|| {
        let c = context(ctx)?;
        let report = Verifier::new(&c.table).with_budget(DEFAULT_BUDGET).theorem_rta_verify(t, a).map_err(fail)?;
        write_flag(pass, report.pass)
    })
}

/// The binomial folding identity at `(q, a, b)`.
///
/// # Safety
/// `pass` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kks_binom_fold(q: i64, a: i64, b: i64, pass: *mut i32) -> KksStatus {
    guard(|| write_flag(pass, binom_fold_check(q, a, b).pass))
}
