use std::ffi::{CStr, CString};
use std::ptr;

use strongblock_ffi::*;

fn last_error() -> String {
    let p = sb_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn field_arithmetic_by_codes() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(sb_field_new(2, 3, &mut f), SbStatus::Ok);
        assert_eq!(sb_field_order(f), 8);
        // g + g^2 = g^4 over x^3 + x + 1; codes are exponent + 1
        let mut c = 0;
        assert_eq!(sb_field_add(f, 2, 3, &mut c), SbStatus::Ok);
        assert_eq!(c, 5);
        assert_eq!(sb_field_mul(f, 7, 3, &mut c), SbStatus::Ok);
        assert_eq!(c, 2);
        assert_eq!(sb_field_mul(f, 9, 1, &mut c), SbStatus::InvalidArgument);
        sb_field_free(f);
    }
}

#[test]
fn errors_carry_a_message() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(sb_field_new(6, 2, &mut f), SbStatus::InvalidArgument);
        assert!(f.is_null());
        assert!(last_error().contains('6'));
        assert_eq!(sb_field_new(2, 3, ptr::null_mut()), SbStatus::NullPointer);
        assert!(last_error().contains("out_field"));
        assert_eq!(sb_field_order(ptr::null()), 0);
    }
}

#[test]
fn union_is_strong_and_minimal() {
    unsafe {
        let mut rg = ptr::null_mut();
        assert_eq!(sb_rgroup_new(2, 4, &mut rg), SbStatus::Ok);
        assert_eq!(sb_rgroup_cosets(rg), 39);
        let mut set = ptr::null_mut();
        assert_eq!(sb_union_from_seed(rg, 1, 10_000, &mut set), SbStatus::Ok);
        assert_eq!(sb_pointset_len(set), 45);
        let (mut strong, mut witness) = (false, 0i64);
        assert_eq!(sb_verify_strong(set, &mut strong, &mut witness), SbStatus::Ok);
        assert!(strong);
        assert_eq!(witness, -1);
        let mut minimal = false;
        assert_eq!(sb_check_minimal(set, &mut minimal), SbStatus::Ok);
        assert!(minimal);

        let mut json = ptr::null_mut();
        assert_eq!(sb_pointset_to_json(set, &mut json), SbStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(sb_pointset_from_json(json, &mut back), SbStatus::Ok);
        assert_eq!(sb_pointset_len(back), 45);
        sb_string_free(json);
        sb_pointset_free(back);
        sb_pointset_free(set);
        sb_rgroup_free(rg);
    }
}

#[test]
fn a_line_is_not_strong() {
    // the three points of the line x2 = 0 in PG(2, 2)
    let json = CString::new(
        r#"{"field":{"p":2,"m":1,"modulus":[1,1]},"n":2,"points":[["0","g^0","0"],["g^0","0","0"],["g^0","g^0","0"]]}"#,
    )
    .unwrap();
    unsafe {
        let mut set = ptr::null_mut();
        assert_eq!(sb_pointset_from_json(json.as_ptr(), &mut set), SbStatus::Ok);
        let (mut strong, mut witness) = (true, -1i64);
        assert_eq!(sb_verify_strong(set, &mut strong, &mut witness), SbStatus::Ok);
        assert!(!strong);
        assert!(witness >= 0);
        sb_pointset_free(set);
    }
}

#[test]
fn bad_json_is_rejected() {
    let json = CString::new("{not json").unwrap();
    unsafe {
        let mut set = ptr::null_mut();
        assert_eq!(sb_pointset_from_json(json.as_ptr(), &mut set), SbStatus::InvalidArgument);
        assert!(set.is_null());
    }
}

#[test]
fn pipeline_report_and_bounds() {
    unsafe {
        let mut json = ptr::null_mut();
        assert_eq!(sb_pipeline_json(2, 3, 5, &mut json), SbStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        sb_string_free(json);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["set"]["size"], 14);
        assert_eq!(v["strong"]["status"], "Strong");

        let mut ok = false;
        assert_eq!(sb_bounds_certify(7, &mut ok), SbStatus::Ok);
        assert!(ok);
        assert_eq!(sb_bounds_certify(9, &mut ok), SbStatus::Ok);
        assert!(!ok);
        assert_eq!(sb_bounds_certify(16, &mut ok), SbStatus::InvalidArgument);
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/strongblock.h");
    let src = include_str!("../src/lib.rs");
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("SB_STATUS_BUDGET_EXCEEDED = 3"));
}
