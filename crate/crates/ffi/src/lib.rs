//! C ABI over the frqa workbench.
//!
//! States cross the boundary as opaque `FrqaState` handles. Every fallible
//! call returns an `FrqaStatus`; on failure the message is kept per thread
//! and can be read with `frqa_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use frqa::audio::{AudioSignal, TimeRestriction};
use frqa::frqa::{prepare, FrqaState as State};
use frqa::gates::CostModel;
use frqa::ops::{
    add_states, cost_report, delay_signal, invert_signal, reverse_signal,
    reverse_signal_restricted, Operation,
};
use frqa::FrqaError;

/// Opaque prepared state.
pub struct FrqaState(State);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrqaStatus {
    Ok = 0,
    NullPointer = 1,
    Range = 2,
    Shape = 3,
    Resource = 4,
    Wiring = 5,
    Parse = 6,
    Io = 7,
    BufferTooSmall = 8,
    Panic = 9,
    Other = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrqaCostModel {
    Standard = 0,
    AllGates = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &FrqaError) -> FrqaStatus {
    match e {
        FrqaError::Range { .. } => FrqaStatus::Range,
        FrqaError::InvalidWidth(_)
        | FrqaError::Shape(_)
        | FrqaError::NotFrqaShaped(_)
        | FrqaError::DegenerateRestriction(_) => FrqaStatus::Shape,
        FrqaError::Resource(_) => FrqaStatus::Resource,
        FrqaError::Wiring(_) | FrqaError::NotAPermutation(_) => FrqaStatus::Wiring,
        FrqaError::Parse(_) | FrqaError::Json(_) | FrqaError::UnknownRegister(_) => {
            FrqaStatus::Parse
        }
        FrqaError::Io(_) => FrqaStatus::Io,
        _ => FrqaStatus::Other,
    }
}

fn fail(status: FrqaStatus, msg: impl Into<String>) -> FrqaStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), FrqaStatus>) -> FrqaStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FrqaStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(FrqaStatus::Panic, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, FrqaStatus>;
}

impl<T> OrStatus<T> for frqa::Result<T> {
    fn or_status(self) -> Result<T, FrqaStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

unsafe fn state_ref<'a>(h: *const FrqaState) -> Result<&'a State, FrqaStatus> {
    h.as_ref()
        .map(|s| &s.0)
        .ok_or_else(|| fail(FrqaStatus::NullPointer, "null state handle"))
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, FrqaStatus> {
    if p.is_null() {
        return Err(fail(FrqaStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(FrqaStatus::Parse, "string is not UTF-8"))
}

unsafe fn put_state(out: *mut *mut FrqaState, s: State) -> Result<(), FrqaStatus> {
    if out.is_null() {
        return Err(fail(FrqaStatus::NullPointer, "null output pointer"));
    }
    *out = Box::into_raw(Box::new(FrqaState(s)));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), FrqaStatus> {
    if out.is_null() {
        return Err(fail(FrqaStatus::NullPointer, "null output pointer"));
    }
    *out = CString::new(s)
        .map_err(|_| fail(FrqaStatus::Other, "output contains a nul byte"))?
        .into_raw();
    Ok(())
}

/// Prepares a state from `len` samples at resolution `q`.
///
/// # Safety
/// `samples` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frqa_prepare(
    samples: *const i64,
    len: usize,
    q: u32,
    out: *mut *mut FrqaState,
) -> FrqaStatus {
    guard(|| {
        if samples.is_null() {
            return Err(fail(FrqaStatus::NullPointer, "null sample buffer"));
        }
        let v = std::slice::from_raw_parts(samples, len).to_vec();
        let signal = AudioSignal::new(v, q).or_status()?;
        put_state(out, prepare(&signal).or_status()?)
    })
}

/// # Safety
/// `state` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn frqa_state_free(state: *mut FrqaState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Amplitude resolution, or 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn frqa_state_q(state: *const FrqaState) -> u32 {
    state.as_ref().map_or(0, |s| s.0.q())
}

/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn frqa_state_l(state: *const FrqaState) -> u32 {
    state.as_ref().map_or(0, |s| s.0.l())
}

/// Number of qubits in the state.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn frqa_state_width(state: *const FrqaState) -> usize {
    state.as_ref().map_or(0, |s| s.0.width())
}

/// Writes the 2^l samples into `buf`. `written` receives the sample count
/// even when the buffer is too small.
///
/// # Safety
/// `buf` must have room for `cap` values; `written` may be null.
#[no_mangle]
pub unsafe extern "C" fn frqa_retrieve(
    state: *const FrqaState,
    buf: *mut i64,
    cap: usize,
    written: *mut usize,
) -> FrqaStatus {
    guard(|| {
        let signal = state_ref(state)?.retrieve().or_status()?;
        let n = signal.len();
        if !written.is_null() {
            *written = n;
        }
        if n > cap {
            return Err(fail(
                FrqaStatus::BufferTooSmall,
                format!("need {n} slots, got {cap}"),
            ));
        }
        if buf.is_null() {
            return Err(fail(FrqaStatus::NullPointer, "null sample buffer"));
        }
        ptr::copy_nonoverlapping(signal.samples().as_ptr(), buf, n);
        Ok(())
    })
}

/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frqa_invert(
    state: *const FrqaState,
    out: *mut *mut FrqaState,
) -> FrqaStatus {
    guard(|| put_state(out, invert_signal(state_ref(state)?).or_status()?))
}

/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frqa_delay(
    state: *const FrqaState,
    dt: u64,
    out: *mut *mut FrqaState,
) -> FrqaStatus {
    guard(|| put_state(out, delay_signal(state_ref(state)?, dt).or_status()?))
}

/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frqa_reverse(
    state: *const FrqaState,
    out: *mut *mut FrqaState,
) -> FrqaStatus {
    guard(|| put_state(out, reverse_signal(state_ref(state)?).or_status()?))
}

/// Reverses the samples whose time bits match `restriction`, written as
/// `position=bit` pairs separated by commas, e.g. `"0=1"`.
///
/// # Safety
/// `restriction` must be a nul-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frqa_reverse_restricted(
    state: *const FrqaState,
    restriction: *const c_char,
    out: *mut *mut FrqaState,
) -> FrqaStatus {
    guard(|| {
        let fixed = TimeRestriction::parse(str_arg(restriction)?).or_status()?;
        put_state(out, reverse_signal_restricted(state_ref(state)?, &fixed).or_status()?)
    })
}

/// Sample-wise sum at resolution q+1.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frqa_add(
    x: *const FrqaState,
    y: *const FrqaState,
    out: *mut *mut FrqaState,
) -> FrqaStatus {
    guard(|| put_state(out, add_states(state_ref(x)?, state_ref(y)?).or_status()?))
}

/// Cost report for `op` (`add`, `invert`, `delay:N`, `reverse`,
/// `restricted-reverse:P=V,...`) as JSON. Free with `frqa_string_free`.
///
/// # Safety
/// `op` must be a nul-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frqa_cost_report_json(
    op: *const c_char,
    q: u32,
    l: u32,
    model: FrqaCostModel,
    out: *mut *mut c_char,
) -> FrqaStatus {
    guard(|| {
        let op: Operation = str_arg(op)?.parse().or_status()?;
        let model = match model {
            FrqaCostModel::Standard => CostModel::Standard,
            FrqaCostModel::AllGates => CostModel::AllGates,
        };
        let (_, report) = cost_report(&op, q as usize, l as usize, model).or_status()?;
        put_string(out, report.to_json())
    })
}

/// State dump as JSON. Free with `frqa_string_free`.
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frqa_state_to_json(
    state: *const FrqaState,
    out: *mut *mut c_char,
) -> FrqaStatus {
    guard(|| put_string(out, state_ref(state)?.to_json()))
}

/// # Safety
/// `json` must be a nul-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frqa_state_from_json(
    json: *const c_char,
    out: *mut *mut FrqaState,
) -> FrqaStatus {
    guard(|| put_state(out, State::from_json(str_arg(json)?).or_status()?))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn frqa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn frqa_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
