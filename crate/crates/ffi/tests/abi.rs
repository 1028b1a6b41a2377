use std::ffi::CStr;
use std::path::Path;
use std::ptr;

use serde_json::Value;
use spindle_ffi::*;

struct Handle(*mut SpindleRootSystem);

impl Handle {
    fn new(f: SpindleFamily, n: usize) -> Self {
        let mut h = ptr::null_mut();
        let s = unsafe { spindle_root_system_new(f, n, &mut h) };
        assert_eq!(s, SpindleStatus::Ok);
        assert!(!h.is_null());
        Handle(h)
    }
}

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe { spindle_root_system_free(self.0) }
    }
}

fn take_json(p: *mut std::ffi::c_char) -> Value {
    assert!(!p.is_null());
    let v = serde_json::from_str(unsafe { CStr::from_ptr(p) }.to_str().unwrap()).unwrap();
    unsafe { spindle_string_free(p) };
    v
}

fn last_error() -> String {
    let p = spindle_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn dimensions() {
    let h = Handle::new(SpindleFamily::B, 3);
    assert_eq!(unsafe { spindle_root_system_rank(h.0) }, 3);
    let w = [1i64, 0, 1];
    let mut d = 0i64;
    assert_eq!(unsafe { spindle_weyl_dim(h.0, w.as_ptr(), 3, &mut d) }, SpindleStatus::Ok);
    assert_eq!(d, 48);
    assert_eq!(unsafe { spindle_irreducible_dim(h.0, 7, w.as_ptr(), 3, &mut d) }, SpindleStatus::Ok);
    assert_eq!(d, 40);
    assert!(spindle_last_error_message().is_null());
}

#[test]
fn error_codes() {
    let mut h = ptr::null_mut();
    let s = unsafe { spindle_root_system_new(SpindleFamily::D, 2, &mut h) };
    assert_eq!(s, SpindleStatus::InvalidRank);
    assert!(h.is_null());
    assert!(last_error().starts_with("invalid-rank"));

    let h = Handle::new(SpindleFamily::B, 2);
    let mut d = 0i64;
    let bad = [1i64, 0, 0];
    assert_eq!(
        unsafe { spindle_weyl_dim(h.0, bad.as_ptr(), 3, &mut d) },
        SpindleStatus::DimensionMismatch
    );
    let w = [1i64, 0];
    assert_eq!(
        unsafe { spindle_irreducible_dim(h.0, 4, w.as_ptr(), 2, &mut d) },
        SpindleStatus::InvalidPrime
    );
    assert_eq!(
        unsafe { spindle_weyl_dim(ptr::null(), w.as_ptr(), 2, &mut d) },
        SpindleStatus::NullPointer
    );
    assert_eq!(
        unsafe { spindle_weyl_dim(h.0, w.as_ptr(), 2, ptr::null_mut()) },
        SpindleStatus::NullPointer
    );
    let name = unsafe { CStr::from_ptr(spindle_status_name(SpindleStatus::InvalidPrime)) };
    assert_eq!(name.to_str().unwrap(), "invalid-prime");
    assert_eq!(unsafe { spindle_root_system_rank(ptr::null()) }, 0);
}

#[test]
fn structure_report() {
    let h = Handle::new(SpindleFamily::B, 4);
    let w = [1i64, 1, 0, 0];
    let mut out = ptr::null_mut();
    let s = unsafe { spindle_structure_json(h.0, 3, w.as_ptr(), 4, 1, &mut out) };
    assert_eq!(s, SpindleStatus::Ok);
    let v = take_json(out);
    assert_eq!(v["version"], "v1");
    assert_eq!(v["radical"], serde_json::json!([{"weight": [0, 0, 1, 0], "mult": 1}]));
    assert_eq!(v["matches"], true);
}

#[test]
fn jantzen_and_character() {
    let h = Handle::new(SpindleFamily::B, 2);
    let w = [2i64, 0];
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { spindle_jantzen_json(h.0, 5, w.as_ptr(), ptr::null(), 2, &mut out) },
        SpindleStatus::Ok
    );
    assert_eq!(take_json(out)["chi"], serde_json::json!([{"weight": [0, 0], "mult": 1}]));
    assert_eq!(
        unsafe { spindle_jantzen_json(h.0, 3, w.as_ptr(), ptr::null(), 2, &mut out) },
        SpindleStatus::Ok
    );
    assert_eq!(take_json(out)["chi"], serde_json::json!([]));
    assert_eq!(unsafe { spindle_character_json(h.0, w.as_ptr(), 2, &mut out) }, SpindleStatus::Ok);
    assert_eq!(take_json(out)["weyl_dim"], 14);
}

#[test]
fn branch_report() {
    let h = Handle::new(SpindleFamily::B, 2);
    let w = [2i64, 0, 0, 0];
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { spindle_branch_json(h.0, 5, w.as_ptr(), 4, 1, &mut out) },
        SpindleStatus::Ok
    );
    let v = take_json(out);
    assert_eq!(v["source"]["rank"], 4);
    assert_eq!(v["irr_dim"], 15);
    assert_eq!(v["matches"], true);
    let not_form = [0i64, 1, 1, 0];
    assert_eq!(
        unsafe { spindle_branch_json(h.0, 5, not_form.as_ptr(), 4, 0, &mut out) },
        SpindleStatus::InvalidWeight
    );
}

#[test]
fn header_is_generated_and_parses() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include").join("spindle.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in [
        "spindle_root_system_new",
        "spindle_root_system_free",
        "spindle_weyl_dim",
        "spindle_structure_json",
        "spindle_branch_json",
        "spindle_string_free",
        "spindle_last_error_message",
        "SPINDLE_STATUS_INVALID_PRIME = 6",
        "typedef struct SpindleRootSystem SpindleRootSystem;",
    ] {
        assert!(text.contains(sym), "header lacks {sym}");
    }
    // A C compiler, when present, must accept the header on its own.
    if let Ok(o) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .output()
    {
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
}
