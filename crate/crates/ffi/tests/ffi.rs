use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use logic_gmdh_ffi::*;

fn demo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/demo.csv")
}

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = lgm_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

unsafe fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null(), "{}", last_error());
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    lgm_string_free(p);
    s
}

fn train(config: Option<&str>) -> *mut LgmModel {
    let (data, label) = (c(demo().to_str().unwrap()), c("sex"));
    let config = config.map(c);
    let mut model = ptr::null_mut();
    let status = unsafe {
        lgm_train_csv(
            data.as_ptr(),
            label.as_ptr(),
            config.as_ref().map_or(ptr::null(), |s| s.as_ptr()),
            &mut model,
        )
    };
    assert_eq!(status, LgmStatus::Ok, "{}", last_error());
    model
}

unsafe fn classify(model: *const LgmModel, x: &[f64]) -> (LgmStatus, LgmVerdict) {
    let mut v = LgmVerdict { decision: 9, votes_for: 0, total: 0 };
    let status = lgm_model_classify(model, x.as_ptr(), x.len(), &mut v);
    (status, v)
}

#[test]
fn trains_and_classifies_the_demo() {
    let model = train(None);
    unsafe {
        assert_eq!(lgm_model_num_variables(model), 2);
        assert_eq!(lgm_model_num_neurons(model), 1);
        assert_eq!(lgm_model_errors(model), 0);
        // Labels map by first occurrence: F is 0, M is 1.
        assert_eq!(classify(model, &[1.55, 60.0]).1, LgmVerdict { decision: 0, votes_for: 1, total: 1 });
        assert_eq!(classify(model, &[1.85, 75.0]).1.decision, 1);
        let rules = take_string(lgm_model_rules(model));
        assert!(rules.contains("IF (size*weight >= 109.02) THEN class=M ELSE class=F"), "{rules}");
        lgm_model_free(model);
    }
}

#[test]
fn config_json_reaches_the_engine() {
    let model = train(Some(r#"{"max_p": 1}"#));
    unsafe {
        assert!(lgm_model_errors(model) > 0);
        lgm_model_free(model);
    }
    let (data, label, bad) = (c(demo().to_str().unwrap()), c("sex"), c(r#"{"f_ratoi": 1}"#));
    let mut model = ptr::null_mut();
    let status = unsafe { lgm_train_csv(data.as_ptr(), label.as_ptr(), bad.as_ptr(), &mut model) };
    assert_eq!(status, LgmStatus::Data);
    assert!(last_error().contains("f_ratoi"));
    assert!(model.is_null());
}

#[test]
fn json_and_file_round_trips_keep_verdicts() {
    let model = train(None);
    let dir = tempfile::tempdir().unwrap();
    let path = c(dir.path().join("m.json").to_str().unwrap());
    unsafe {
        let json = take_string(lgm_model_to_json(model));
        let text = c(&json);
        let mut from_json = ptr::null_mut();
        assert_eq!(lgm_model_from_json(text.as_ptr(), &mut from_json), LgmStatus::Ok);
        assert_eq!(lgm_model_save(model, path.as_ptr()), LgmStatus::Ok);
        let mut from_file = ptr::null_mut();
        assert_eq!(lgm_model_load(path.as_ptr(), &mut from_file), LgmStatus::Ok);
        for x in [[1.5, 50.0], [1.7, 64.0], [1.7, 65.0], [1.9, 80.0]] {
            let want = classify(model, &x);
            assert_eq!(classify(from_json, &x), want);
            assert_eq!(classify(from_file, &x), want);
        }
        assert_eq!(take_string(lgm_model_to_json(from_file)), json);
        for m in [model, from_json, from_file] {
            lgm_model_free(m);
        }
    }
}

#[test]
fn failures_report_status_and_message() {
    let model = train(None);
    unsafe {
        assert_eq!(classify(model, &[1.0]).0, LgmStatus::Dimension);
        assert!(last_error().contains("expects 2"));
        assert_eq!(classify(ptr::null(), &[1.0, 2.0]).0, LgmStatus::NullPointer);
        assert_eq!(lgm_model_set_chi0(model, 0.2), LgmStatus::Data);
        assert_eq!(lgm_model_set_chi0(model, 1.0), LgmStatus::Ok);

        let missing = c("/nonexistent/model.json");
        let mut out = ptr::null_mut();
        assert_eq!(lgm_model_load(missing.as_ptr(), &mut out), LgmStatus::Io);
        assert_eq!(lgm_model_load(ptr::null(), &mut out), LgmStatus::NullPointer);
        let garbage = c("{\"format_version\": 7}");
        assert_eq!(lgm_model_from_json(garbage.as_ptr(), &mut out), LgmStatus::Data);
        assert!(last_error().contains("version"), "{}", last_error());
        let bad_utf8 = [0xffu8, 0xfe, 0];
        assert_eq!(lgm_model_from_json(bad_utf8.as_ptr().cast(), &mut out), LgmStatus::InvalidUtf8);
        assert!(out.is_null());

        assert_eq!(lgm_model_num_neurons(ptr::null()), 0);
        assert!(lgm_model_rules(ptr::null()).is_null());
        lgm_model_free(ptr::null_mut());
        lgm_string_free(ptr::null_mut());
        lgm_model_free(model);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/logic_gmdh.h")).unwrap();
    let source = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 14, "{exports:?}");
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct LgmModel LgmModel;"));
    assert!(header.contains("LGM_STATUS_DIMENSION = 5"));
}

/// Builds tests/smoke.c against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    // `cargo test` leaves the library next to the test binary in deps/;
    // `cargo build` copies it one level up.
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib = [deps.join("liblogic_gmdh_ffi.a"), deps.parent().unwrap().join("liblogic_gmdh_ffi.a")]
        .into_iter()
        .find(|p| p.exists())
        .expect("static library built alongside the tests");
    let exe = tempfile::tempdir().unwrap();
    let bin = exe.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&bin).arg(demo()).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "exit {:?}: {}", out.status, String::from_utf8_lossy(&out.stderr));
    assert!(text.starts_with("neurons=1 errors=0 decision=1\n"), "{text}");
    assert!(text.contains("THEN class=M"));
}
