use cremona_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

const SIGMA: &str = r#"{"degree":2,"components":[[[0,1,1,1,1]],[[1,0,1,1,1]],[[1,1,0,1,1]]]}"#;
const HENON: &str = r#"{"degree":2,"components":[[[0,1,1,1,1]],[[0,2,0,1,1],[1,0,1,-1,1]],[[0,0,2,1,1]]]}"#;

fn load(json: &str) -> *mut CrMap {
    let c = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cr_map_from_json(c.as_ptr(), &mut out) }, CrStatus::Ok);
    out
}

fn take_string(s: *mut std::ffi::c_char) -> String {
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { cr_string_free(s) };
    text
}

#[test]
fn map_round_trip_and_degrees() {
    let f = load(SIGMA);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cr_map_to_json(f, &mut s) }, CrStatus::Ok);
    let again = load(&take_string(s));
    let mut degrees = [0u64; 5];
    assert_eq!(unsafe { cr_map_degree_sequence(again, 4, degrees.as_mut_ptr(), degrees.len()) }, CrStatus::Ok);
    assert_eq!(degrees, [1, 2, 1, 2, 1]);
    assert_eq!(unsafe { cr_map_degree_sequence(again, 9, degrees.as_mut_ptr(), degrees.len()) }, CrStatus::Invalid);
    unsafe {
        cr_map_free(f);
        cr_map_free(again);
    }
}

#[test]
fn compose_and_invert() {
    let h = load(HENON);
    let mut inv = ptr::null_mut();
    assert_eq!(unsafe { cr_map_invert(h, &mut inv) }, CrStatus::Ok);
    let mut id = ptr::null_mut();
    assert_eq!(unsafe { cr_map_compose(h, inv, &mut id) }, CrStatus::Ok);
    let mut d = 0u32;
    assert_eq!(unsafe { cr_map_degree(id, &mut d) }, CrStatus::Ok);
    assert_eq!(d, 1);
    unsafe {
        cr_map_free(h);
        cr_map_free(inv);
        cr_map_free(id);
    }
}

#[test]
fn errors_and_null_pointers() {
    let bad = CString::new("{not json").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cr_map_from_json(bad.as_ptr(), &mut out) }, CrStatus::Parse);
    assert!(!unsafe { CStr::from_ptr(cr_last_error()) }.to_bytes().is_empty());
    assert_eq!(unsafe { cr_map_from_json(ptr::null(), &mut out) }, CrStatus::NullPointer);
    assert_eq!(unsafe { cr_map_compose(ptr::null(), ptr::null(), &mut out) }, CrStatus::NullPointer);
    unsafe {
        cr_map_free(ptr::null_mut());
        cr_string_free(ptr::null_mut());
    }
}

#[test]
fn lattice_degree() {
    let mut m = [0i64; 100];
    for i in 0..10 {
        m[i * 10 + i] = 1;
    }
    // quadratic isometry at e1, e2, e3
    let rows: [[i64; 4]; 4] = [[2, 1, 1, 1], [-1, 0, -1, -1], [-1, -1, 0, -1], [-1, -1, -1, 0]];
    for i in 0..4 {
        for j in 0..4 {
            m[i * 10 + j] = rows[i][j];
        }
    }
    let mut deg = 0i64;
    assert_eq!(unsafe { cr_lattice_isometry_degree(m.as_ptr(), &mut deg) }, CrStatus::Ok);
    assert_eq!(deg, 2);
    m[0] = 3;
    assert_eq!(unsafe { cr_lattice_isometry_degree(m.as_ptr(), &mut deg) }, CrStatus::Invalid);
}

#[test]
fn json_commands() {
    let input = CString::new(r#"{"support": {"2": 1}, "seed": 17}"#).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cr_oscillate_json(input.as_ptr(), &mut out) }, CrStatus::Ok);
    let report: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(report["result"]["d"], 4);
    assert_eq!(report["result"]["verified"], true);

    let args = CString::new("--horizon 4 degrees").unwrap();
    let map = CString::new(SIGMA).unwrap();
    let mut status = -1;
    assert_eq!(unsafe { cr_run_json(args.as_ptr(), map.as_ptr(), &mut out, &mut status) }, CrStatus::Ok);
    assert_eq!(status, 0);
    let report: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(report["result"]["report"]["degrees"], serde_json::json!([1, 2, 1, 2, 1]));
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/cremona.h")).unwrap();
    for name in [
        "cr_map_from_json",
        "cr_map_compose",
        "cr_map_invert",
        "cr_map_degree_sequence",
        "cr_string_free",
        "cr_oscillate_json",
        "cr_lattice_isometry_degree",
        "CR_STATUS_OK",
        "typedef struct CrMap CrMap",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
