//! C ABI over `pauliconj`.
//!
//! Objects are opaque handles released with their `_free` function. Every
//! fallible call returns a [`PcStatus`]; on failure [`pc_last_error`] holds a
//! message for the calling thread. Strings returned through `char **` are
//! owned by the caller and released with [`pc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pauliconj::circuit::Circuit;
use pauliconj::decision::{conjugate_value_with, decide_commute_with, decide_enic_with, decide_support_with, Answer, DecisionOptions};
use pauliconj::f2core::SymplecticVec;
use pauliconj::pauli::PhasedPauli;
use pauliconj::presentation::{decode, encode, Presentation};
use pauliconj::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Dimension = 4,
    Invalid = 5,
    Budget = 6,
    OracleBound = 7,
    Internal = 8,
    Panic = 9,
}

/// Opaque circuit handle.
pub struct PcCircuit(Circuit);

/// Opaque presentation handle.
pub struct PcPresentation(Presentation);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PcStatus {
    match e {
        Error::Parse { .. } => PcStatus::Parse,
        Error::Dimension(_) | Error::Wire { .. } => PcStatus::Dimension,
        Error::Budget(_) => PcStatus::Budget,
        Error::OracleBound(..) => PcStatus::OracleBound,
        Error::Internal(_) => PcStatus::Internal,
        Error::Invalid(_) | Error::NotInSpan | Error::NonClifford => PcStatus::Invalid,
    }
}

struct Fail(PcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PcStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside pauliconj".into());
            PcStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(PcStatus::NullArgument, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(PcStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(PcStatus::NullArgument, "null handle".into()))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(PcStatus::NullArgument, "null output pointer".into()))
}

fn pauli_for(c: &Circuit, s: &str) -> Result<SymplecticVec, Fail> {
    Ok(PhasedPauli::parse(s, Some(c.qubits()))?.v)
}

fn opts(max_chains: u64) -> DecisionOptions {
    if max_chains == 0 {
        DecisionOptions::default()
    } else {
        DecisionOptions { max_chains }
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior NULs removed").into_raw()
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn pc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn pc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a circuit in the text format ("qubits n" then one gate per line).
///
/// # Safety
/// `src` must be a NUL-terminated string and `out_circuit` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pc_circuit_parse(src: *const c_char, out_circuit: *mut *mut PcCircuit) -> PcStatus {
    guard(|| {
        let slot = out(out_circuit)?;
        *slot = ptr::null_mut();
        let c = Circuit::parse(text(src)?)?;
        *slot = Box::into_raw(Box::new(PcCircuit(c)));
        Ok(())
    })
}

/// # Safety
/// `c` must be NULL or a handle from this library, not freed before.
#[no_mangle]
pub unsafe extern "C" fn pc_circuit_free(c: *mut PcCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `c` must be a live handle and `out_qubits` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pc_circuit_qubits(c: *const PcCircuit, out_qubits: *mut usize) -> PcStatus {
    guard(|| {
        *out(out_qubits)? = handle(c)?.0.qubits();
        Ok(())
    })
}

/// # Safety
/// `c` must be a live handle and `out_depth` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pc_circuit_t_depth(c: *const PcCircuit, out_depth: *mut usize) -> PcStatus {
    guard(|| {
        *out(out_depth)? = handle(c)?.0.t_depth();
        Ok(())
    })
}

/// # Safety
/// `c` must be a live handle and `out_text` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pc_circuit_to_text(c: *const PcCircuit, out_text: *mut *mut c_char) -> PcStatus {
    guard(|| {
        let slot = out(out_text)?;
        *slot = into_c_string(handle(c)?.0.to_text());
        Ok(())
    })
}

/// ENIC: `*out_answer` is true when C is not the identity up to global phase.
/// `max_chains` = 0 selects the default budget.
///
/// # Safety
/// `c` must be a live handle and `out_answer` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pc_decide_enic(c: *const PcCircuit, max_chains: u64, out_answer: *mut bool) -> PcStatus {
    guard(|| {
        let slot = out(out_answer)?;
        *slot = decide_enic_with(&handle(c)?.0, &opts(max_chains))?.truth();
        Ok(())
    })
}

/// COMMUTE: `*out_answer` is true when C P^x C† = P^x.
///
/// # Safety
/// `c` must be a live handle, `pauli` a NUL-terminated string and `out_answer` valid.
#[no_mangle]
pub unsafe extern "C" fn pc_decide_commute(c: *const PcCircuit, pauli: *const c_char, max_chains: u64, out_answer: *mut bool) -> PcStatus {
    guard(|| {
        let slot = out(out_answer)?;
        let c = &handle(c)?.0;
        let x = pauli_for(c, text(pauli)?)?;
        *slot = decide_commute_with(c, &x, &opts(max_chains))?.truth();
        Ok(())
    })
}

/// SUPPORT: `*out_answer` is true when P^x has a nonzero coefficient in C P^x C†.
///
/// # Safety
/// As for [`pc_decide_commute`].
#[no_mangle]
pub unsafe extern "C" fn pc_decide_support(c: *const PcCircuit, pauli: *const c_char, max_chains: u64, out_answer: *mut bool) -> PcStatus {
    guard(|| {
        let slot = out(out_answer)?;
        let c = &handle(c)?.0;
        let x = pauli_for(c, text(pauli)?)?;
        *slot = decide_support_with(c, &x, &opts(max_chains))?.truth();
        Ok(())
    })
}

/// CONJUGATE: the exact coefficient of P^x in C P^x C†, written as
/// "(c0,c1,c2,c3)/sqrt2^k" for (c0 + c1 ω + c2 ω² + c3 ω³)/√2^k with ω = e^{iπ/4}.
///
/// # Safety
/// As for [`pc_decide_commute`], with `out_value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pc_conjugate_value(c: *const PcCircuit, pauli: *const c_char, max_chains: u64, out_value: *mut *mut c_char) -> PcStatus {
    guard(|| {
        let slot = out(out_value)?;
        *slot = ptr::null_mut();
        let c = &handle(c)?.0;
        let x = pauli_for(c, text(pauli)?)?;
        let r = conjugate_value_with(c, &x, &opts(max_chains))?;
        let Answer::Value(v) = r.answer else {
            return Err(Fail(PcStatus::Internal, "conjugate returned a boolean".into()));
        };
        *slot = into_c_string(v.to_string());
        Ok(())
    })
}

/// Presentation of C P^x C†.
///
/// # Safety
/// `c` must be a live handle, `pauli` a NUL-terminated string and `out_presentation` valid.
#[no_mangle]
pub unsafe extern "C" fn pc_encode(c: *const PcCircuit, pauli: *const c_char, out_presentation: *mut *mut PcPresentation) -> PcStatus {
    guard(|| {
        let slot = out(out_presentation)?;
        *slot = ptr::null_mut();
        let c = &handle(c)?.0;
        let x = pauli_for(c, text(pauli)?)?;
        *slot = Box::into_raw(Box::new(PcPresentation(encode(c, &x)?)));
        Ok(())
    })
}

/// Parse a presentation from its text form.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out_presentation` valid.
#[no_mangle]
pub unsafe extern "C" fn pc_presentation_parse(src: *const c_char, out_presentation: *mut *mut PcPresentation) -> PcStatus {
    guard(|| {
        let slot = out(out_presentation)?;
        *slot = ptr::null_mut();
        *slot = Box::into_raw(Box::new(PcPresentation(Presentation::parse(text(src)?)?)));
        Ok(())
    })
}

/// # Safety
/// `p` must be a live handle and `out_text` valid.
#[no_mangle]
pub unsafe extern "C" fn pc_presentation_to_text(p: *const PcPresentation, out_text: *mut *mut c_char) -> PcStatus {
    guard(|| {
        let slot = out(out_text)?;
        *slot = into_c_string(handle(p)?.0.to_text());
        Ok(())
    })
}

/// # Safety
/// `p` must be a live handle and `out_depth` valid.
#[no_mangle]
pub unsafe extern "C" fn pc_presentation_depth(p: *const PcPresentation, out_depth: *mut usize) -> PcStatus {
    guard(|| {
        *out(out_depth)? = handle(p)?.0.depth();
        Ok(())
    })
}

/// A circuit C with C P^z C† equal to the presented operator.
///
/// # Safety
/// `p` must be a live handle, `pauli` a NUL-terminated string and `out_circuit` valid.
#[no_mangle]
pub unsafe extern "C" fn pc_decode(p: *const PcPresentation, pauli: *const c_char, out_circuit: *mut *mut PcCircuit) -> PcStatus {
    guard(|| {
        let slot = out(out_circuit)?;
        *slot = ptr::null_mut();
        let p = &handle(p)?.0;
        let z = PhasedPauli::parse(text(pauli)?, Some(p.n()))?.v;
        *slot = Box::into_raw(Box::new(PcCircuit(decode(p, &z)?)));
        Ok(())
    })
}

/// # Safety
/// `p` must be NULL or a handle from this library, not freed before.
#[no_mangle]
pub unsafe extern "C" fn pc_presentation_free(p: *mut PcPresentation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}
