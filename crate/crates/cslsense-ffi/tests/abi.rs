use std::ffi::{CStr, CString};

use cslsense_ffi::*;
use num_complex::Complex64;

#[test]
fn closed_forms_match_library() {
    let mut out = 0.0f64;
    let s = cslsense_gain_single_shift(2, 3, 2, 0.6, 0.0, &mut out);
    assert_eq!(s, CslStatus::CslOk);
    assert!((out - 0.72).abs() < 1e-12);

    let s = cslsense_gain_shift_sum(2, 3, 6, 0.6, 0.0, &mut out);
    assert_eq!(s, CslStatus::CslOk);
    assert!((out - 3.552).abs() < 1e-9);

    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    let s = cslsense_bounds_zero_shift(2, 4, 0.5, 0.0, &mut lo, &mut hi);
    assert_eq!(s, CslStatus::CslOk);
    assert!((lo - 11.0 / 6.0).abs() < 1e-12 && (hi - 2.0).abs() < 1e-12);

    let s = cslsense_bounds_rank_one(2, 4, 4, 0.6, 0.0, &mut lo, &mut hi);
    assert_eq!(s, CslStatus::CslOk);
    let mut sigma = 0.0;
    let s = cslsense_sigma_max(2, 4, 4, 8, 0.6, 0.0, &mut sigma);
    assert_eq!(s, CslStatus::CslOk);
    assert!((lo - sigma).abs() < 1e-9 && sigma <= hi + 1e-9);
    let direct = cslsense::theory::sigma_max_block(2, 4, 4, Complex64::new(0.6, 0.0), 8).unwrap();
    assert!((sigma - direct).abs() < 1e-12);
}

#[test]
fn invalid_arguments_set_error() {
    let mut out = 0.0f64;
    let s = cslsense_gain_shift_sum(2, 3, 6, 1.0, 0.0, &mut out);
    assert_eq!(s, CslStatus::CslInvalidArgument);
    let msg = unsafe { CStr::from_ptr(cslsense_last_error()) };
    assert!(!msg.to_bytes().is_empty());

    let s = cslsense_gain_single_shift(2, 3, 2, 0.6, 0.0, std::ptr::null_mut());
    assert_eq!(s, CslStatus::CslNullPointer);
}

fn params() -> CslScenarioParams {
    CslScenarioParams {
        m: 4,
        k: 2,
        w_hz: 1.0e9,
        b_hz: 2.0e7,
        q: 100,
        l: 10,
        rho_abs: 0.6,
        rho_phase: 0.0,
        snr_db: 0.0,
        compression: 4,
        i: 2,
        j: 3,
        seed: 11,
    }
}

#[test]
fn session_round_trip() {
    let p = params();
    let session = unsafe { cslsense_session_new(&p) };
    assert!(!session.is_null());
    let bands = unsafe { cslsense_session_band_count(session) };
    assert_eq!(bands, 50);

    let alg = CString::new("mcslsacc").unwrap();
    let mut stats = vec![0.0f64; bands];
    let mut support = vec![0usize; p.k];
    let s = unsafe {
        cslsense_session_sense(
            session,
            alg.as_ptr(),
            stats.as_mut_ptr(),
            stats.len(),
            support.as_mut_ptr(),
            support.len(),
        )
    };
    assert_eq!(s, CslStatus::CslOk);
    assert!(stats.iter().all(|v| v.is_finite() && *v >= 0.0));
    assert!(support.iter().all(|&b| b < bands));
    assert_ne!(support[0], support[1]);

    // the trial stream is deterministic after a reset
    let first = (stats.clone(), support.clone());
    assert_eq!(unsafe { cslsense_session_reset(session) }, CslStatus::CslOk);
    let s = unsafe {
        cslsense_session_sense(
            session,
            alg.as_ptr(),
            stats.as_mut_ptr(),
            stats.len(),
            support.as_mut_ptr(),
            support.len(),
        )
    };
    assert_eq!(s, CslStatus::CslOk);
    assert_eq!(first, (stats, support));
    unsafe { cslsense_session_free(session) };
}

#[test]
fn session_rejects_bad_input() {
    assert!(unsafe { cslsense_session_new(std::ptr::null()) }.is_null());

    let mut p = params();
    p.compression = 3; // does not divide q
    assert!(unsafe { cslsense_session_new(&p) }.is_null());

    let p = params();
    let session = unsafe { cslsense_session_new(&p) };
    let alg = CString::new("unknown_variant").unwrap();
    let mut stats = vec![0.0f64; 50];
    let mut support = vec![0usize; 2];
    let s = unsafe {
        cslsense_session_sense(
            session,
            alg.as_ptr(),
            stats.as_mut_ptr(),
            stats.len(),
            support.as_mut_ptr(),
            support.len(),
        )
    };
    assert_eq!(s, CslStatus::CslInvalidArgument);

    let alg = CString::new("mcslsacc").unwrap();
    let s = unsafe {
        cslsense_session_sense(
            session,
            alg.as_ptr(),
            stats.as_mut_ptr(),
            10, // too short for 50 bands
            support.as_mut_ptr(),
            support.len(),
        )
    };
    assert_eq!(s, CslStatus::CslBufferTooSmall);
    unsafe { cslsense_session_free(session) };
    unsafe { cslsense_session_free(std::ptr::null_mut()) };
}

#[test]
fn version_and_header_exist() {
    let v = unsafe { CStr::from_ptr(cslsense_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));

    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("include")
        .join("cslsense.h");
    let text = std::fs::read_to_string(header).expect("generated header");
    assert!(text.contains("cslsense_session_new"));
    assert!(text.contains("CslStatus"));
    assert!(text.contains("cslsense_gain_shift_sum"));
}
