//! Exercises the C ABI surface through the exported symbols.

use std::ffi::{CStr, CString};
use std::ptr;

use convstab_ffi::*;

unsafe fn seq_from_json(json: &str) -> *mut ConvstabSequence {
    let json = CString::new(json).unwrap();
    let mut handle: *mut ConvstabSequence = ptr::null_mut();
    let status = convstab_sequence_from_json(json.as_ptr(), &mut handle);
    assert_eq!(status, ConvstabStatus::Ok);
    assert!(!handle.is_null());
    handle
}

unsafe fn take_string(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let text = CStr::from_ptr(s).to_str().unwrap().to_string();
    convstab_string_free(s);
    text
}

#[test]
fn sequence_roundtrip_and_norm() {
    unsafe {
        let seq = seq_from_json(r#"{"support":[0,4],"values":[[3.0,0.0],[4.0,0.0]]}"#);
        let mut norm = 0.0;
        assert_eq!(convstab_sequence_norm(seq, &mut norm), ConvstabStatus::Ok);
        assert!((norm - 5.0).abs() < 1e-15);

        let mut sparsity = 0usize;
        assert_eq!(
            convstab_sequence_sparsity(seq, &mut sparsity),
            ConvstabStatus::Ok
        );
        assert_eq!(sparsity, 2);

        let json = take_string(convstab_sequence_to_json(seq));
        assert!(json.contains("\"support\":[0,4]"));
        convstab_sequence_free(seq);
    }
}

#[test]
fn invalid_json_reports_error() {
    unsafe {
        let json = CString::new(r#"{"support":[0],"values":[]}"#).unwrap();
        let mut handle: *mut ConvstabSequence = ptr::null_mut();
        let status = convstab_sequence_from_json(json.as_ptr(), &mut handle);
        assert_eq!(status, ConvstabStatus::InvalidInput);
        assert!(handle.is_null());
        let msg = take_string(convstab_last_error_message());
        assert!(!msg.is_empty());
    }
}

#[test]
fn null_pointers_are_rejected() {
    unsafe {
        let mut handle: *mut ConvstabSequence = ptr::null_mut();
        assert_eq!(
            convstab_sequence_from_json(ptr::null(), &mut handle),
            ConvstabStatus::NullPointer
        );
        assert_eq!(
            convstab_convolve(ptr::null(), ptr::null(), &mut handle),
            ConvstabStatus::NullPointer
        );
        let mut out = 0.0;
        assert_eq!(
            convstab_sequence_norm(ptr::null(), &mut out),
            ConvstabStatus::NullPointer
        );
        convstab_sequence_free(ptr::null_mut()); // no-op
        convstab_string_free(ptr::null_mut()); // no-op
    }
}

#[test]
fn convolution_through_ffi() {
    unsafe {
        let x = seq_from_json(r#"{"support":[0,1],"values":[[1.0,0.0],[1.0,0.0]]}"#);
        let y = seq_from_json(r#"{"support":[0,1],"values":[[1.0,0.0],[-1.0,0.0]]}"#);
        let mut conv: *mut ConvstabSequence = ptr::null_mut();
        assert_eq!(convstab_convolve(x, y, &mut conv), ConvstabStatus::Ok);
        let json = take_string(convstab_sequence_to_json(conv));
        assert!(json.contains("\"support\":[0,2]"));
        convstab_sequence_free(x);
        convstab_sequence_free(y);
        convstab_sequence_free(conv);
    }
}

#[test]
fn overflowing_support_status() {
    unsafe {
        // Any support admitting an overflowing pairwise sum is rejected at
        // construction, before convolution can be attempted.
        let big = i64::MAX / 2 + 5;
        let json = CString::new(format!(
            r#"{{"support":[{big}],"values":[[1.0,0.0]]}}"#
        ))
        .unwrap();
        let mut handle: *mut ConvstabSequence = ptr::null_mut();
        assert_eq!(
            convstab_sequence_from_json(json.as_ptr(), &mut handle),
            ConvstabStatus::IndexOverflow
        );
        assert!(handle.is_null());
    }
}

#[test]
fn toeplitz_through_ffi() {
    unsafe {
        let h = 1.0 / 2f64.sqrt();
        let interleaved = [h, 0.0, h, 0.0];
        let mut t: *mut ConvstabToeplitz = ptr::null_mut();
        assert_eq!(
            convstab_toeplitz_build(interleaved.as_ptr(), 2, &mut t),
            ConvstabStatus::Ok
        );

        let mut lambda = 0.0;
        assert_eq!(
            convstab_toeplitz_smallest_eigenvalue(t, &mut lambda),
            ConvstabStatus::Ok
        );
        assert!((lambda - 0.5).abs() < 1e-12);

        let mut bound = 0.0;
        assert_eq!(
            convstab_toeplitz_det_eigen_lower_bound(t, &mut bound),
            ConvstabStatus::Ok
        );
        assert!(bound <= lambda + 1e-10);

        let mut symbol_min = 0.0;
        assert_eq!(
            convstab_toeplitz_symbol_min(t, 4096, &mut symbol_min),
            ConvstabStatus::Ok
        );
        assert!(symbol_min >= -1e-9);
        assert_eq!(
            convstab_toeplitz_symbol_min(t, 2, &mut symbol_min),
            ConvstabStatus::InvalidInput
        );

        let json = take_string(convstab_toeplitz_to_json(t));
        assert!(json.contains("\"n\":2"));
        convstab_toeplitz_free(t);
    }
}

#[test]
fn scalar_helpers() {
    unsafe {
        assert!((convstab_beta(5, 3) - 3f64.sqrt()).abs() < 1e-15);

        let mut n = 0u64;
        assert_eq!(convstab_dimension_bound(2, 3, &mut n), ConvstabStatus::Ok);
        assert_eq!(n, 730);
        assert_eq!(
            convstab_dimension_bound(1, 3, &mut n),
            ConvstabStatus::InvalidInput
        );
        // 14^28 does not fit in 64 bits.
        assert_eq!(
            convstab_dimension_bound(8, 8, &mut n),
            ConvstabStatus::IndexOverflow
        );
    }
}

#[test]
fn compression_through_ffi() {
    unsafe {
        let i = CString::new("[0,1,100]").unwrap();
        let j = CString::new("[0,1]").unwrap();
        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(
            convstab_compress_support(i.as_ptr(), j.as_ptr(), &mut out),
            ConvstabStatus::Ok
        );
        let json = take_string(out);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["diameter"], 3);
        assert_eq!(v["image"], serde_json::json!([0, 1, 3]));

        let budget = CString::new("[0,1,2,3,4,5,6,7,8,9,10,11,12]").unwrap();
        assert_eq!(
            convstab_compress_support(budget.as_ptr(), j.as_ptr(), &mut out),
            ConvstabStatus::BudgetExceeded
        );
    }
}

#[test]
fn alpha_estimates_through_ffi() {
    unsafe {
        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(
            convstab_alpha_upper(2, 2, 4, 16, 0, &mut out),
            ConvstabStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        let alpha = v["alpha_upper"].as_f64().unwrap();
        assert!((alpha - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6);

        assert_eq!(
            convstab_alpha_lower(2, 8, &mut out),
            ConvstabStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert!((v["d_hat"].as_f64().unwrap() - 0.75).abs() < 1e-4);

        assert_eq!(
            convstab_alpha_upper(2, 2, 64, 1, 0, &mut out),
            ConvstabStatus::BudgetExceeded
        );
    }
}
