use std::ffi::{c_char, CStr, CString};
use std::ptr;

use colstab_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    colstab_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = colstab_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_owned()
}

const T312: &str = r#"{"ring":{"mode":"polynomial","nvars":3,"coeff":"int"},"entries":[["1","0","0"],["0","1","0"],["-a2","a1","1"]]}"#;

#[test]
fn poly_round_trip_and_arithmetic() {
    unsafe {
        let mut a = ptr::null_mut();
        let mut b = ptr::null_mut();
        assert_eq!(colstab_poly_parse(ColstabMode::Polynomial, 2, cstr("a1 + 1").as_ptr(), &mut a), ColstabStatus::Ok);
        assert_eq!(colstab_poly_parse(ColstabMode::Polynomial, 2, cstr("a1 - 1").as_ptr(), &mut b), ColstabStatus::Ok);
        let mut prod = ptr::null_mut();
        assert_eq!(colstab_poly_mul(a, b, &mut prod), ColstabStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(colstab_poly_to_string(prod, &mut s), ColstabStatus::Ok);
        assert_eq!(take(s), "a1^2 - 1");
        let mut sum = ptr::null_mut();
        assert_eq!(colstab_poly_add(a, b, &mut sum), ColstabStatus::Ok);
        assert_eq!(colstab_poly_to_string(sum, &mut s), ColstabStatus::Ok);
        assert_eq!(take(s), "2*a1");
        assert!(!colstab_poly_is_unit(a));
        for p in [a, b, prod, sum] {
            colstab_poly_free(p);
        }
    }
}

#[test]
fn laurent_units() {
    unsafe {
        let mut p = ptr::null_mut();
        let text = cstr("a1^2*a2^-1");
        assert_eq!(colstab_poly_parse(ColstabMode::Laurent, 2, text.as_ptr(), &mut p), ColstabStatus::Ok);
        assert!(colstab_poly_is_unit(p));
        colstab_poly_free(p);
        let mut q = ptr::null_mut();
        assert_eq!(colstab_poly_parse(ColstabMode::Polynomial, 2, text.as_ptr(), &mut q), ColstabStatus::ParseError);
        assert!(q.is_null());
        assert!(last_error().contains("negative exponent"));
    }
}

#[test]
fn parse_errors_report_position() {
    unsafe {
        let mut p = ptr::null_mut();
        let s = colstab_poly_parse(ColstabMode::Polynomial, 2, cstr("a1 + * a2").as_ptr(), &mut p);
        assert_eq!(s, ColstabStatus::ParseError);
        assert!(last_error().contains("byte 5"), "{}", last_error());
    }
}

#[test]
fn mismatched_rings() {
    unsafe {
        let mut a = ptr::null_mut();
        let mut b = ptr::null_mut();
        colstab_poly_parse(ColstabMode::Polynomial, 2, cstr("a1").as_ptr(), &mut a);
        colstab_poly_parse(ColstabMode::Laurent, 2, cstr("a1").as_ptr(), &mut b);
        let mut out = ptr::null_mut();
        assert_eq!(colstab_poly_mul(a, b, &mut out), ColstabStatus::RingMismatch);
        colstab_poly_free(a);
        colstab_poly_free(b);
    }
}

#[test]
fn null_pointers_are_rejected() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(colstab_poly_parse(ColstabMode::Polynomial, 2, ptr::null(), &mut out), ColstabStatus::NullPointer);
        assert_eq!(colstab_check_stab(ptr::null()), ColstabStatus::NullPointer);
        assert_eq!(
            colstab_poly_parse(ColstabMode::Polynomial, 2, cstr("1").as_ptr(), ptr::null_mut()),
            ColstabStatus::NullPointer
        );
        colstab_poly_free(ptr::null_mut());
        colstab_matrix_free(ptr::null_mut());
        colstab_string_free(ptr::null_mut());
    }
}

#[test]
fn matrix_pipeline() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(colstab_matrix_from_json(cstr(T312).as_ptr(), &mut m), ColstabStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(colstab_matrix_to_json(m, &mut s), ColstabStatus::Ok);
        assert_eq!(take(s), T312);
        assert_eq!(colstab_check_stab(m), ColstabStatus::Ok);
        assert_eq!(colstab_residues_json(m, &mut s), ColstabStatus::Ok);
        assert_eq!(take(s), r#"{"alpha":"1","beta":"0","gamma":"0","delta":"0"}"#);

        let mut b = ptr::null_mut();
        assert_eq!(colstab_rho(m, &mut b), ColstabStatus::Ok);
        assert_eq!(colstab_matrix_to_json(b, &mut s), ColstabStatus::Ok);
        assert_eq!(
            take(s),
            r#"{"ring":{"mode":"polynomial","nvars":2,"coeff":"int"},"entries":[["1","1"],["0","1"]]}"#
        );

        assert_eq!(colstab_preimage_json(b, 4, &mut s), ColstabStatus::Ok);
        let report: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(report["status"], "SUCCESS");
        colstab_matrix_free(b);
        colstab_matrix_free(m);
    }
}

#[test]
fn stabilizer_rejections() {
    unsafe {
        let doc = r#"{"ring":{"mode":"polynomial","nvars":3,"coeff":"int"},"entries":[["1","1","0"],["0","1","0"],["0","0","1"]]}"#;
        let mut m = ptr::null_mut();
        assert_eq!(colstab_matrix_from_json(cstr(doc).as_ptr(), &mut m), ColstabStatus::Ok);
        assert_eq!(colstab_check_stab(m), ColstabStatus::NotStabilizing);
        let mut s = ptr::null_mut();
        assert_eq!(colstab_residues_json(m, &mut s), ColstabStatus::NotStabilizing);
        assert!(s.is_null());
        colstab_matrix_free(m);

        let doc = r#"{"ring":{"mode":"polynomial","nvars":3,"coeff":"int"},"entries":[["1 + a3","0","-a1"],["0","1","0"],["0","0","1"]]}"#;
        assert_eq!(colstab_matrix_from_json(cstr(doc).as_ptr(), &mut m), ColstabStatus::Ok);
        assert_eq!(colstab_check_stab(m), ColstabStatus::NotInvertible);
        colstab_matrix_free(m);

        assert_eq!(colstab_matrix_from_json(cstr("{").as_ptr(), &mut m), ColstabStatus::ParseError);
    }
}

#[test]
fn obstructed_preimage_still_writes_report() {
    unsafe {
        let doc = r#"{"ring":{"mode":"polynomial","nvars":2,"coeff":"int"},"entries":[["1","0"],["a1*a2","1"]]}"#;
        let mut m = ptr::null_mut();
        assert_eq!(colstab_matrix_from_json(cstr(doc).as_ptr(), &mut m), ColstabStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(colstab_preimage_json(m, 4, &mut s), ColstabStatus::Obstructed);
        let report: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(report["obstruction"], "1");
        colstab_matrix_free(m);

        let doc = r#"{"ring":{"mode":"polynomial","nvars":2,"coeff":"int"},"entries":[["1","0"],["a1","1"]]}"#;
        assert_eq!(colstab_matrix_from_json(cstr(doc).as_ptr(), &mut m), ColstabStatus::Ok);
        assert_eq!(colstab_preimage_json(m, 4, &mut s), ColstabStatus::NotInScheme);
        colstab_matrix_free(m);
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/colstab.h");
    let src = include_str!("../src/lib.rs");
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.trim_start().strip_prefix("pub unsafe extern \"C\" fn ").or_else(|| l.trim_start().strip_prefix("pub extern \"C\" fn ")))
        .map(|l| l.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 12);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct ColstabPoly ColstabPoly;"));
    assert!(header.contains("COLSTAB_STATUS_OBSTRUCTED = 8"));
}
