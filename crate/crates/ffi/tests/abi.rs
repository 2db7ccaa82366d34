use std::ffi::{CStr, CString};
use std::ptr;

use dlv_symmetry_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(dlv_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn translation_is_a_lie_symmetry() {
    unsafe {
        let mut sys = ptr::null_mut();
        assert_eq!(dlv_system_parse(c("").as_ptr(), &mut sys), DlvStatus::Ok);
        let mut q = ptr::null_mut();
        assert_eq!(dlv_field_parse(c("1; 0; 0; 0; 0").as_ptr(), &mut q), DlvStatus::Ok);
        let mut passed = -1;
        let mut witness = ptr::null_mut();
        assert_eq!(dlv_check(sys, q, DlvKind::Lie, &mut passed, &mut witness), DlvStatus::Ok);
        assert_eq!(passed, 1);
        assert!(witness.is_null());
        dlv_field_free(q);
        dlv_system_free(sys);
    }
}

#[test]
fn conditional_operator_fails_lie_with_witness() {
    let system = "b1 = b\nc1 = b\nd1 = d\nb2 = b\nc2 = b\nd2 = d\nb3 = 1\nc3 = 1";
    let op = "1; 0; (a1-a2)/(lambda1-lambda2)*u; -(a1-a2)/(lambda1-lambda2)*u; 0";
    unsafe {
        let mut sys = ptr::null_mut();
        assert_eq!(dlv_system_parse(c(system).as_ptr(), &mut sys), DlvStatus::Ok);
        let mut q = ptr::null_mut();
        assert_eq!(dlv_field_parse(c(op).as_ptr(), &mut q), DlvStatus::Ok);
        let mut passed = -1;
        assert_eq!(dlv_check(sys, q, DlvKind::FirstTypeU, &mut passed, ptr::null_mut()), DlvStatus::Ok);
        assert_eq!(passed, 1);
        let mut witness = ptr::null_mut();
        assert_eq!(dlv_check(sys, q, DlvKind::Lie, &mut passed, &mut witness), DlvStatus::Ok);
        assert_eq!(passed, 0);
        let w = CStr::from_ptr(witness).to_str().unwrap().to_string();
        assert!(w.starts_with('S'), "{w}");
        dlv_string_free(witness);
        dlv_field_free(q);
        dlv_system_free(sys);
    }
}

#[test]
fn errors_have_codes_and_messages() {
    unsafe {
        let mut sys = ptr::null_mut();
        assert_eq!(dlv_system_parse(c("a1 = (").as_ptr(), &mut sys), DlvStatus::Config);
        assert!(!last_error().is_empty());
        assert!(sys.is_null());
        assert_eq!(dlv_system_parse(ptr::null(), &mut sys), DlvStatus::NullPointer);
        let mut q = ptr::null_mut();
        assert_eq!(dlv_field_parse(c("1; 0").as_ptr(), &mut q), DlvStatus::Config);
        assert_eq!(dlv_field_parse(c("1; 0; zeta; 0; 0").as_ptr(), &mut q), DlvStatus::UnknownIdentifier);
        let mut passed = 0;
        assert_eq!(
            dlv_check(ptr::null(), ptr::null(), DlvKind::Lie, &mut passed, ptr::null_mut()),
            DlvStatus::NullPointer
        );
        let mut mism = 0usize;
        assert_eq!(
            dlv_verify_catalog(3, 0, ptr::null(), 0, ptr::null_mut(), &mut mism),
            DlvStatus::CaseNotFound
        );
        assert_eq!(dlv_catalog_size(1), 8);
        assert_eq!(dlv_catalog_size(2), 9);
        assert_eq!(dlv_catalog_size(3), 0);
    }
}

#[test]
fn detgen_and_catalog() {
    unsafe {
        let mut sys = ptr::null_mut();
        assert_eq!(dlv_system_parse(c("").as_ptr(), &mut sys), DlvStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(dlv_detgen(sys, DlvKind::Lie, &mut out), DlvStatus::Ok);
        let text = CStr::from_ptr(out).to_str().unwrap().to_string();
        assert!(text.lines().any(|l| l == "2*xi1_x - xi0_t = 0"));
        dlv_string_free(out);
        dlv_system_free(sys);

        let seeds = [3u64];
        let mut json = ptr::null_mut();
        let mut mism = usize::MAX;
        assert_eq!(dlv_verify_catalog(2, 2, seeds.as_ptr(), 1, &mut json, &mut mism), DlvStatus::Ok);
        assert_eq!(mism, 0);
        let j = CStr::from_ptr(json).to_str().unwrap();
        assert!(j.contains("\"Q2_6\""));
        dlv_string_free(json);
    }
}

#[test]
fn reduction_example() {
    let mut zero = 0;
    let mut max = f64::NAN;
    unsafe {
        assert_eq!(dlv_reduce_example(ptr::null(), 21, 21, &mut zero, &mut max), DlvStatus::Ok);
        assert_eq!(zero, 1);
        assert!(max <= 1e-9);
        assert_eq!(
            dlv_reduce_example(c("a1 = 1").as_ptr(), 5, 5, &mut zero, &mut max),
            DlvStatus::Degenerate
        );
        assert!(last_error().contains("a1 != a2"));
    }
}
