//! C ABI for openfol.
//!
//! Every function returns an [`OpenfolStatus`]; on anything other than
//! `OPENFOL_STATUS_OK`, `OPENFOL_STATUS_REJECTED` or
//! `OPENFOL_STATUS_INCONCLUSIVE`, a message is available from
//! [`openfol_last_error_message`] until the next call on the same thread.
//! Strings handed out are owned by the caller and released with
//! [`openfol_string_free`]; handles with their own `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use openfol::kernel::{check_proof, Mode, ProofVerdict};
use openfol::search::{audit_all, audit_rule, find_countermodel, AuditStatus, Bounds, SearchStatus};
use openfol::semantics::Profile;
use openfol::syntax::{is_closed, parse_formula, parse_formula_with, parse_proof_script, Arities, ProofScript, Rule};

/// Outcome of a call. The first four match the command line's exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpenfolStatus {
    /// Success: accepted, valid up to the bound, or sound up to the bound.
    Ok = 0,
    /// The logic answered no: rejected, countermodel or counterexample.
    Rejected = 1,
    /// Unparsable text, unknown rule, bad bound or invalid UTF-8.
    InvalidInput = 2,
    Inconclusive = 3,
    NullPointer = 4,
    /// A bug: the library panicked.
    Internal = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpenfolMode {
    /// Use the script's `pragma mode`, else open.
    FromScript = -1,
    Classical = 0,
    Open = 1,
    Minimal = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpenfolProfile {
    Total = 0,
    NullStrict = 1,
    Partial = 2,
    NullPadded = 3,
}

impl From<OpenfolProfile> for Profile {
    fn from(p: OpenfolProfile) -> Profile {
        match p {
            OpenfolProfile::Total => Profile::Total,
            OpenfolProfile::NullStrict => Profile::NullStrict,
            OpenfolProfile::Partial => Profile::Partial,
            OpenfolProfile::NullPadded => Profile::NullPadded,
        }
    }
}

/// A parsed proof script.
pub struct OpenfolScript(ProofScript);

/// The kernel's verdict on a script.
pub struct OpenfolVerdict(ProofVerdict);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

struct Failure(OpenfolStatus, String);

fn invalid(message: impl Into<String>) -> Failure {
    Failure(OpenfolStatus::InvalidInput, message.into())
}

/// Run `body` with panics contained and the error slot maintained.
fn guard(body: impl FnOnce() -> Result<OpenfolStatus, Failure>) -> OpenfolStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal error: openfol panicked");
            OpenfolStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(OpenfolStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not UTF-8")))
}

unsafe fn write_out<T>(out: *mut *mut T, value: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(OpenfolStatus::NullPointer, "output pointer is null".into()));
    }
    *out = value;
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(OpenfolStatus::NullPointer, "output pointer is null".into()));
    }
    *out = CString::new(text).map_err(|_| invalid("output contains NUL"))?.into_raw();
    Ok(())
}

/// Parse a proof script. On success `*out` receives a handle to release
/// with `openfol_script_free`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn openfol_script_parse(text: *const c_char, out: *mut *mut OpenfolScript) -> OpenfolStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let script = parse_proof_script(text).map_err(|e| invalid(e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(OpenfolScript(script))))?;
        Ok(OpenfolStatus::Ok)
    })
}

/// # Safety
/// `script` must come from `openfol_script_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn openfol_script_free(script: *mut OpenfolScript) {
    if !script.is_null() {
        drop(Box::from_raw(script));
    }
}

/// Check a script. Returns `OK` if accepted and `REJECTED` otherwise; in
/// both cases `*out` receives a verdict handle.
///
/// # Safety
/// `script` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn openfol_check(
    script: *const OpenfolScript,
    mode: OpenfolMode,
    out: *mut *mut OpenfolVerdict,
) -> OpenfolStatus {
    guard(|| {
        let script = script
            .as_ref()
            .ok_or_else(|| Failure(OpenfolStatus::NullPointer, "script is null".into()))?;
        let explicit = match mode {
            OpenfolMode::FromScript => None,
            OpenfolMode::Classical => Some(Mode::Classical),
            OpenfolMode::Open => Some(Mode::Open),
            OpenfolMode::Minimal => Some(Mode::Minimal),
        };
        let verdict = check_proof(&script.0, Mode::effective(explicit, &script.0));
        let accepted = verdict.accepted;
        write_out(out, Box::into_raw(Box::new(OpenfolVerdict(verdict))))?;
        Ok(if accepted { OpenfolStatus::Ok } else { OpenfolStatus::Rejected })
    })
}

/// Whether the verdict accepts the proof. False for a null handle.
///
/// # Safety
/// `verdict` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn openfol_verdict_accepted(verdict: *const OpenfolVerdict) -> bool {
    verdict.as_ref().is_some_and(|v| v.0.accepted)
}

/// The verdict as JSON: mode, acceptance, per-line results and the
/// established sequent.
///
/// # Safety
/// `verdict` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn openfol_verdict_json(verdict: *const OpenfolVerdict, out: *mut *mut c_char) -> OpenfolStatus {
    guard(|| {
        let v = verdict
            .as_ref()
            .ok_or_else(|| Failure(OpenfolStatus::NullPointer, "verdict is null".into()))?;
        let mut json = openfol::cli::verdict_json("", &v.0);
        if let Some(obj) = json.as_object_mut() {
            obj.remove("file");
        }
        write_string(out, json.to_string())?;
        Ok(OpenfolStatus::Ok)
    })
}

/// # Safety
/// `verdict` must come from `openfol_check` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn openfol_verdict_free(verdict: *mut OpenfolVerdict) {
    if !verdict.is_null() {
        drop(Box::from_raw(verdict));
    }
}

/// Search for a countermodel to `premises |- conclusion`. The status is
/// `OK` (valid up to the bound), `REJECTED` (countermodel) or
/// `INCONCLUSIVE`; `*out` receives the result as JSON.
///
/// # Safety
/// `premises` must point to `premise_count` NUL-terminated strings (it may
/// be null when the count is 0); `conclusion` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn openfol_search_json(
    premises: *const *const c_char,
    premise_count: usize,
    conclusion: *const c_char,
    profile: OpenfolProfile,
    max_size: usize,
    out: *mut *mut c_char,
) -> OpenfolStatus {
    guard(|| {
        if premises.is_null() && premise_count > 0 {
            return Err(Failure(OpenfolStatus::NullPointer, "premises is null".into()));
        }
        let mut arities = Arities::new();
        let mut parse = |text: &str| {
            let f = parse_formula_with(text, &mut arities).map_err(|e| invalid(format!("`{text}`: {e}")))?;
            if is_closed(&f) {
                Ok(f)
            } else {
                Err(invalid(format!("`{text}` has free variables")))
            }
        };
        let mut parsed = Vec::with_capacity(premise_count);
        for i in 0..premise_count {
            parsed.push(parse(read_str(*premises.add(i), "premise")?)?);
        }
        let conclusion = parse(read_str(conclusion, "conclusion")?)?;
        let sequent = openfol::kernel::Sequent::new(parsed, conclusion);
        let result = find_countermodel(&sequent, &Bounds::new(max_size), profile.into())
            .map_err(|e| invalid(e.to_string()))?;
        write_string(out, result.to_json().to_string())?;
        Ok(match result.status {
            SearchStatus::ValidUpToBound => OpenfolStatus::Ok,
            SearchStatus::Countermodel => OpenfolStatus::Rejected,
            SearchStatus::Inconclusive => OpenfolStatus::Inconclusive,
        })
    })
}

/// Audit one rule by name, or every audited rule when `rule` is null.
/// `*out` receives a JSON array of reports.
///
/// # Safety
/// `rule` must be null or NUL-terminated; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn openfol_audit_json(
    rule: *const c_char,
    profile: OpenfolProfile,
    max_size: usize,
    out: *mut *mut c_char,
) -> OpenfolStatus {
    guard(|| {
        let bounds = Bounds::new(max_size);
        let reports = if rule.is_null() {
            audit_all(&bounds, profile.into())
        } else {
            let rule: Rule = read_str(rule, "rule")?.parse().map_err(|e: openfol::syntax::UnknownRule| invalid(e.to_string()))?;
            audit_rule(rule, &bounds, profile.into()).map(|r| vec![r])
        }
        .map_err(|e| invalid(e.to_string()))?;
        let sound = reports.iter().all(|r| r.status == AuditStatus::SoundUpToBound);
        let json: Vec<_> = reports.iter().map(|r| r.to_json()).collect();
        write_string(out, serde_json::Value::from(json).to_string())?;
        Ok(if sound { OpenfolStatus::Ok } else { OpenfolStatus::Rejected })
    })
}

/// Parse a formula and print it canonically.
///
/// # Safety
/// `text` must be NUL-terminated; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn openfol_format_formula(text: *const c_char, out: *mut *mut c_char) -> OpenfolStatus {
    guard(|| {
        let f = parse_formula(read_str(text, "text")?).map_err(|e| invalid(e.to_string()))?;
        write_string(out, f.to_string())?;
        Ok(OpenfolStatus::Ok)
    })
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next openfol call on the thread; do not free it.
#[no_mangle]
pub extern "C" fn openfol_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Release a string returned through an `out` parameter.
///
/// # Safety
/// `s` must be null or a string from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn openfol_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, static.
#[no_mangle]
pub extern "C" fn openfol_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
