use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use openfol_ffi::*;

const CG: &str = "\
- (1) forall x (x = x)        =I
- (2) godzilla = godzilla     1 UE godzilla
- (3) exists x (x = godzilla) 2 EI
";

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { openfol_string_free(s) };
    text
}

fn last_error() -> String {
    let p = openfol_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn parse(text: &str) -> *mut OpenfolScript {
    let c = CString::new(text).unwrap();
    let mut script = ptr::null_mut();
    assert_eq!(unsafe { openfol_script_parse(c.as_ptr(), &mut script) }, OpenfolStatus::Ok);
    script
}

#[test]
fn godzilla_gate_through_the_abi() {
    let script = parse(CG);
    let mut verdict = ptr::null_mut();
    let status = unsafe { openfol_check(script, OpenfolMode::Classical, &mut verdict) };
    assert_eq!(status, OpenfolStatus::Ok);
    assert!(unsafe { openfol_verdict_accepted(verdict) });
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { openfol_verdict_json(verdict, &mut json) }, OpenfolStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["sequent"]["conclusion"], "exists x (x = godzilla)");
    assert_eq!(v["sequent"]["premises"], serde_json::json!([]));
    unsafe { openfol_verdict_free(verdict) };

    for mode in [OpenfolMode::Open, OpenfolMode::Minimal, OpenfolMode::FromScript] {
        let status = unsafe { openfol_check(script, mode, &mut verdict) };
        assert_eq!(status, OpenfolStatus::Rejected);
        let mut json = ptr::null_mut();
        unsafe { openfol_verdict_json(verdict, &mut json) };
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["lines"][0]["ok"], false);
        assert!(v["lines"][0]["error"].as_str().unwrap().starts_with("RuleUnavailableInMode"));
        unsafe { openfol_verdict_free(verdict) };
    }
    unsafe { openfol_script_free(script) };
}

#[test]
fn pragma_mode_is_used_when_asked() {
    let script = parse(&format!("pragma mode: classical\n{CG}"));
    let mut verdict = ptr::null_mut();
    assert_eq!(
        unsafe { openfol_check(script, OpenfolMode::FromScript, &mut verdict) },
        OpenfolStatus::Ok
    );
    unsafe {
        openfol_verdict_free(verdict);
        openfol_script_free(script);
    }
}

#[test]
fn errors_set_status_and_message() {
    let bad = CString::new("- (1) a = a\n").unwrap();
    let mut script = ptr::null_mut();
    let status = unsafe { openfol_script_parse(bad.as_ptr(), &mut script) };
    assert_eq!(status, OpenfolStatus::InvalidInput);
    assert!(script.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(
        unsafe { openfol_script_parse(ptr::null(), &mut script) },
        OpenfolStatus::NullPointer
    );
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { openfol_check(ptr::null(), OpenfolMode::Open, &mut out) },
        OpenfolStatus::NullPointer
    );

    let rule = CString::new("FOO").unwrap();
    let mut json = ptr::null_mut();
    let status = unsafe { openfol_audit_json(rule.as_ptr(), OpenfolProfile::Total, 1, &mut json) };
    assert_eq!(status, OpenfolStatus::InvalidInput);
    assert!(last_error().contains("FOO"));

    // A successful call clears the message.
    let f = CString::new("a = a").unwrap();
    assert_eq!(unsafe { openfol_format_formula(f.as_ptr(), &mut json) }, OpenfolStatus::Ok);
    take(json);
    assert!(openfol_last_error_message().is_null());
}

#[test]
fn search_statuses_map_to_exit_codes() {
    let conclusion = CString::new("a = a").unwrap();
    let mut json = ptr::null_mut();
    let status = unsafe {
        openfol_search_json(ptr::null(), 0, conclusion.as_ptr(), OpenfolProfile::Total, 1, &mut json)
    };
    assert_eq!(status, OpenfolStatus::Rejected);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["status"], "COUNTERMODEL");
    assert_eq!(v["model"]["names"]["a"], 0);

    let premises = [CString::new("a = b").unwrap(), CString::new("P(a)").unwrap()];
    let ptrs: Vec<*const c_char> = premises.iter().map(|p| p.as_ptr()).collect();
    let conclusion = CString::new("P(b)").unwrap();
    let status = unsafe {
        openfol_search_json(ptrs.as_ptr(), 2, conclusion.as_ptr(), OpenfolProfile::Total, 3, &mut json)
    };
    assert_eq!(status, OpenfolStatus::Ok);
    take(json);

    let status = unsafe {
        openfol_search_json(ptrs.as_ptr(), 2, conclusion.as_ptr(), OpenfolProfile::Total, 9, &mut json)
    };
    assert_eq!(status, OpenfolStatus::InvalidInput);
}

#[test]
fn audit_reports_counterexamples() {
    let rule = CString::new("EI").unwrap();
    let mut json = ptr::null_mut();
    let status = unsafe { openfol_audit_json(rule.as_ptr(), OpenfolProfile::Partial, 1, &mut json) };
    assert_eq!(status, OpenfolStatus::Rejected);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v[0]["status"], "COUNTEREXAMPLE");
    assert!(v[0]["witness"]["model"].is_object());
}

#[test]
fn format_is_canonical() {
    let f = CString::new("forall x F(x) -> ~ G(x,a)").unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { openfol_format_formula(f.as_ptr(), &mut out) };
    // Outside the narrow quantifier's scope `x` is a name.
    assert_eq!(status, OpenfolStatus::Ok);
    assert_eq!(take(out), "(forall x (F(x)) -> ~(G(x, a)))");
    let v = unsafe { CStr::from_ptr(openfol_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// Build the static library, compile the C smoke test against the
/// generated header, and run it. `cargo test` does not produce the static
/// library itself, so a nested build into a separate target dir does.
#[test]
fn c_program_links_against_the_header() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let target = exe.parent().and_then(|deps| deps.parent()).unwrap().join("ffi-smoke");
    let built = Command::new(env!("CARGO"))
        .args(["build", "--quiet", "-p", "openfol-ffi", "--lib", "--manifest-path"])
        .arg(crate_dir.join("Cargo.toml"))
        .arg("--target-dir")
        .arg(&target)
        .status()
        .unwrap();
    assert!(built.success());
    let lib = target.join("debug/libopenfol_ffi.a");
    let out = target.join("openfol_ffi_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("a C compiler named cc");
    assert!(status.success(), "C smoke test failed to compile");
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "smoke test exited with {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), env!("CARGO_PKG_VERSION"));
}
