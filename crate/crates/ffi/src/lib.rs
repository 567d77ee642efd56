//! C interface to the logic-gmdh engine.
//!
//! Models are opaque `LgmModel` handles owned by the caller and released with
//! `lgm_model_free`. Fallible calls return an `LgmStatus`; the message for the
//! last failure on the calling thread is available from
//! `lgm_last_error_message`. Strings returned by the library must be released
//! with `lgm_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use logic_gmdh::rules::render_rules;
use logic_gmdh::{load_dataset, synthesize, Chi0, Decision, Error, Model, SynthesisConfig};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LgmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed data, model file or configuration.
    Data = 3,
    Io = 4,
    /// Input vector length differs from the model's variable count.
    Dimension = 5,
    /// A Rust panic was caught at the boundary; the handle may be unusable.
    Panic = 6,
}

/// A trained collective.
pub struct LgmModel {
    inner: Model,
}

/// Outcome of classifying one input vector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LgmVerdict {
    /// 1 or 0 for the two classes, -1 when the collective refuses.
    pub decision: i32,
    /// Votes for the majority class.
    pub votes_for: u64,
    /// Total votes cast.
    pub total: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(text).ok());
}

fn fail(status: LgmStatus, message: impl Into<String>) -> LgmStatus {
    set_last_error(message);
    status
}

fn from_error(err: Error) -> LgmStatus {
    let status = match err {
        Error::Io { .. } => LgmStatus::Io,
        Error::WidthMismatch { .. } => LgmStatus::Dimension,
        _ => LgmStatus::Data,
    };
    fail(status, err.to_string())
}

/// Runs `body`, turning panics into `LgmStatus::Panic`.
fn guarded(body: impl FnOnce() -> LgmStatus) -> LgmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| payload.downcast_ref::<&str>().copied())
                .unwrap_or("unknown panic");
            fail(LgmStatus::Panic, format!("panic: {message}"))
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, LgmStatus> {
    if s.is_null() {
        return Err(fail(LgmStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(LgmStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn store_model(out: *mut *mut LgmModel, model: Model) -> LgmStatus {
    *out = Box::into_raw(Box::new(LgmModel { inner: model }));
    LgmStatus::Ok
}

fn into_c_string(text: String) -> *mut c_char {
    match CString::new(text) {
        Ok(s) => s.into_raw(),
        Err(_) => {
            set_last_error("output contains a NUL byte");
            ptr::null_mut()
        }
    }
}

/// Message describing the last failure on this thread, or NULL if none.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lgm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Trains a model from a CSV file.
///
/// `config_json` may be NULL for defaults, or a JSON object with any of the
/// keys `mode`, `delta`, `f_ratio`, `max_layers`, `max_p`, `prune_products`,
/// `chi0`, `seed`. A model whose growth stalled with errors left is still
/// returned; check `lgm_model_errors`.
///
/// # Safety
/// `data_path` and `label` must be NUL-terminated strings, `config_json` NULL
/// or NUL-terminated, and `out` a valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn lgm_train_csv(
    data_path: *const c_char,
    label: *const c_char,
    config_json: *const c_char,
    out: *mut *mut LgmModel,
) -> LgmStatus {
    guarded(|| {
        if out.is_null() {
            return fail(LgmStatus::NullPointer, "null output handle");
        }
        let (path, label) = match (read_str(data_path), read_str(label)) {
            (Ok(p), Ok(l)) => (p, l),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let config: SynthesisConfig = if config_json.is_null() {
            SynthesisConfig::default()
        } else {
            let text = match read_str(config_json) {
                Ok(t) => t,
                Err(s) => return s,
            };
            match serde_json::from_str(text) {
                Ok(c) => c,
                Err(e) => return fail(LgmStatus::Data, format!("bad config: {e}")),
            }
        };
        let trained = load_dataset(Path::new(path), label)
            .and_then(|set| synthesize(&set, &config))
            .map(|s| Model::from_synthesis(&s, label, &config));
        match trained {
            Ok(model) => store_model(out, model),
            Err(e) => from_error(e),
        }
    })
}

/// Loads a model from a JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lgm_model_load(path: *const c_char, out: *mut *mut LgmModel) -> LgmStatus {
    guarded(|| {
        if out.is_null() {
            return fail(LgmStatus::NullPointer, "null output handle");
        }
        match read_str(path) {
            Ok(p) => match Model::load(Path::new(p)) {
                Ok(model) => store_model(out, model),
                Err(e) => from_error(e),
            },
            Err(s) => s,
        }
    })
}

/// Parses a model from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lgm_model_from_json(json: *const c_char, out: *mut *mut LgmModel) -> LgmStatus {
    guarded(|| {
        if out.is_null() {
            return fail(LgmStatus::NullPointer, "null output handle");
        }
        match read_str(json) {
            Ok(text) => match Model::from_json(text) {
                Ok(model) => store_model(out, model),
                Err(e) => from_error(e),
            },
            Err(s) => s,
        }
    })
}

/// Writes the model as JSON to `path`.
///
/// # Safety
/// `model` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn lgm_model_save(model: *const LgmModel, path: *const c_char) -> LgmStatus {
    guarded(|| {
        let Some(model) = model.as_ref() else {
            return fail(LgmStatus::NullPointer, "null model");
        };
        match read_str(path) {
            Ok(p) => model.inner.save(Path::new(p)).map_or_else(from_error, |()| LgmStatus::Ok),
            Err(s) => s,
        }
    })
}

/// Releases a model handle. NULL is ignored.
///
/// # Safety
/// `model` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lgm_model_free(model: *mut LgmModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Classifies one vector of `len` raw variable values.
///
/// # Safety
/// `model` must be a live handle, `values` must point to `len` doubles and
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lgm_model_classify(
    model: *const LgmModel,
    values: *const f64,
    len: usize,
    out: *mut LgmVerdict,
) -> LgmStatus {
    guarded(|| {
        let Some(model) = model.as_ref() else {
            return fail(LgmStatus::NullPointer, "null model");
        };
        if out.is_null() || (values.is_null() && len > 0) {
            return fail(LgmStatus::NullPointer, "null values or output");
        }
        let x: &[f64] = if len == 0 { &[] } else { std::slice::from_raw_parts(values, len) };
        match model.inner.collective.classify(x) {
            Ok(v) => {
                *out = LgmVerdict {
                    decision: match v.decision {
                        Decision::Class(c) => c as i32,
                        Decision::Refused => -1,
                    },
                    votes_for: v.votes_for,
                    total: v.total,
                };
                LgmStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Replaces the refusal threshold χ₀ (in [0.5, 1]).
///
/// # Safety
/// `model` must be a live handle not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn lgm_model_set_chi0(model: *mut LgmModel, chi0: f64) -> LgmStatus {
    guarded(|| {
        let Some(model) = model.as_mut() else {
            return fail(LgmStatus::NullPointer, "null model");
        };
        match Chi0::from_f64(chi0) {
            Ok(c) => {
                model.inner.collective.chi0 = c;
                LgmStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Number of raw input variables a vector must have; 0 for NULL.
///
/// # Safety
/// `model` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lgm_model_num_variables(model: *const LgmModel) -> usize {
    model.as_ref().map_or(0, |m| m.inner.collective.variable_names.len())
}

/// Number of voting neurons; 0 for NULL.
///
/// # Safety
/// `model` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lgm_model_num_neurons(model: *const LgmModel) -> usize {
    model.as_ref().map_or(0, |m| m.inner.collective.len())
}

/// Learning-set error count shared by the neurons; 0 for NULL.
///
/// # Safety
/// `model` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lgm_model_errors(model: *const LgmModel) -> usize {
    model.as_ref().map_or(0, |m| m.inner.collective.errors())
}

/// The model as JSON text, or NULL on failure. Free with `lgm_string_free`.
///
/// # Safety
/// `model` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lgm_model_to_json(model: *const LgmModel) -> *mut c_char {
    match model.as_ref() {
        Some(m) => into_c_string(m.inner.to_json()),
        None => {
            set_last_error("null model");
            ptr::null_mut()
        }
    }
}

/// The collective as IF–THEN rules, or NULL on failure. Free with
/// `lgm_string_free`.
///
/// # Safety
/// `model` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lgm_model_rules(model: *const LgmModel) -> *mut c_char {
    match model.as_ref() {
        Some(m) => into_c_string(render_rules(&m.inner.collective)),
        None => {
            set_last_error("null model");
            ptr::null_mut()
        }
    }
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lgm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
