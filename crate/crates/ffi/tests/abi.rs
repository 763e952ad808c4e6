//! Exercises the C entry points exactly as a foreign caller would.

use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use pqra_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

/// Takes ownership of a returned string.
unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    pqra_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(pqra_last_error()).to_str().unwrap().to_string()
}

unsafe fn check_corpus(name: &str, profile: &str) -> *mut PqraChecked {
    let mut src = ptr::null_mut();
    assert_eq!(pqra_corpus_source(c(name).as_ptr(), &mut src), PqraStatus::Ok);
    let src = take(src);
    let mut h = ptr::null_mut();
    assert_eq!(pqra_check(c(&src).as_ptr(), c(profile).as_ptr(), &mut h), PqraStatus::Ok, "{}", last_error());
    h
}

#[test]
fn checks_and_reports_types() {
    unsafe {
        let h = check_corpus("qft", "gatecount");
        let mut s = ptr::null_mut();
        assert_eq!(pqra_checked_type(h, &mut s), PqraStatus::Ok);
        assert_eq!(take(s), "n ->[0,0] List[j<n] Qubit -o[sum[m<n] m+1,0] List[j<n] Qubit");
        assert_eq!(pqra_checked_effect(h, &mut s), PqraStatus::Ok);
        assert_eq!(take(s), "0");
        pqra_checked_free(h);
    }
}

#[test]
fn verifies_bounds_at_parameter_values() {
    unsafe {
        let h = check_corpus("qft", "gatecount");
        let n = c("n");
        let names = [n.as_ptr()];
        let (mut bound, mut measured) = (0u64, 0u64);
        for v in 0..6u64 {
            let st = pqra_checked_verify(h, names.as_ptr(), &v, 1, &mut bound, &mut measured);
            assert_eq!(st, PqraStatus::Ok);
            assert_eq!((bound, measured), (v * (v + 1) / 2, v * (v + 1) / 2));
        }
        // Omitting the parameter is an evaluation error.
        let st = pqra_checked_verify(h, ptr::null(), ptr::null(), 0, &mut bound, &mut measured);
        assert_eq!(st, PqraStatus::EvalError);
        assert!(!last_error().is_empty());
        pqra_checked_free(h);

        let h = check_corpus("qft_depth", "depth");
        let (i, n) = (c("i"), c("n"));
        let names = [i.as_ptr(), n.as_ptr()];
        let values = [0u64, 3];
        assert_eq!(pqra_checked_verify(h, names.as_ptr(), values.as_ptr(), 2, &mut bound, &mut measured), PqraStatus::Ok);
        assert_eq!((bound, measured), (5, 5));
        pqra_checked_free(h);
    }
}

#[test]
fn reports_errors_with_codes() {
    unsafe {
        let mut h = ptr::null_mut();
        let dup = c("let f = \\q::Qubit. force cnot q q in f");
        assert_eq!(pqra_check(dup.as_ptr(), c("width").as_ptr(), &mut h), PqraStatus::TypeError);
        assert!(h.is_null());
        assert!(last_error().contains("E002"), "{}", last_error());

        let bad = c("let f = in f");
        assert_eq!(pqra_check(bad.as_ptr(), c("width").as_ptr(), &mut h), PqraStatus::ParseError);
        assert_eq!(pqra_check(dup.as_ptr(), c("volume").as_ptr(), &mut h), PqraStatus::UnknownName);
        assert_eq!(pqra_check(ptr::null(), c("width").as_ptr(), &mut h), PqraStatus::NullArgument);
        assert_eq!(pqra_check(dup.as_ptr(), c("width").as_ptr(), ptr::null_mut()), PqraStatus::NullArgument);
        let invalid = [0xffu8 as c_char, 0];
        assert_eq!(pqra_check(invalid.as_ptr(), c("width").as_ptr(), &mut h), PqraStatus::InvalidUtf8);

        let mut s = ptr::null_mut();
        assert_eq!(pqra_corpus_source(c("nope").as_ptr(), &mut s), PqraStatus::UnknownName);
        assert_eq!(pqra_checked_type(ptr::null(), &mut s), PqraStatus::NullArgument);
        pqra_checked_free(ptr::null_mut());
        pqra_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_entry_point_and_compiles() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/pqra.h")).unwrap();
    let lib = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    for line in lib.lines().filter(|l| l.contains("extern \"C\" fn ")) {
        let name = line.split("fn ").nth(1).unwrap().split('(').next().unwrap();
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    // Compile a small C translation unit against the header when a C
    // compiler is available.
    let probe = Path::new(env!("CARGO_TARGET_TMPDIR")).join("probe.c");
    std::fs::write(
        &probe,
        "#include \"pqra.h\"\nint main(void) { PqraChecked *h = 0; \
         return pqra_check(\"\", \"width\", &h) == PQRA_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    if let Ok(out) = Command::new("cc").arg("-fsyntax-only").arg("-I").arg(dir.join("include")).arg(&probe).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
