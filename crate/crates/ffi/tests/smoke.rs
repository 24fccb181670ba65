//! Exercises the C entry points from Rust, including the failure paths.

use std::ffi::{CStr, CString};

use cubulate_ffi::{
    cubulate_fbc_analyze, cubulate_median_rank, cubulate_median_verify, cubulate_rbf_build,
    cubulate_report_error, cubulate_report_free, cubulate_report_json, cubulate_report_text,
    cubulate_tubular_analyze, cubulate_version, CubulateReport, CubulateStatus,
};

fn fixture(name: &str) -> CString {
    CString::new(cubulate::fixtures::find(name).unwrap().json).unwrap()
}

unsafe fn json_of(report: *const CubulateReport) -> serde_json::Value {
    let ptr = cubulate_report_json(report);
    assert!(!ptr.is_null());
    serde_json::from_str(CStr::from_ptr(ptr).to_str().unwrap()).unwrap()
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(cubulate_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn tubular_analysis_round_trip() {
    let input = fixture("c6_tetrahedron");
    let mut out: *mut CubulateReport = std::ptr::null_mut();
    unsafe {
        let status = cubulate_tubular_analyze(input.as_ptr(), true, 0, &mut out);
        assert_eq!(status, CubulateStatus::Ok);
        let report = json_of(out);
        assert_eq!(report["verdict"]["status"], "NoCoarseMedian_via_RBF");
        assert!(!cubulate_report_text(out).is_null());
        assert!(cubulate_report_error(out).is_null());
        cubulate_report_free(out);
    }
}

#[test]
fn fbc_and_median_endpoints() {
    unsafe {
        let input = fixture("more_than_gersten");
        let mut out: *mut CubulateReport = std::ptr::null_mut();
        assert_eq!(
            cubulate_fbc_analyze(input.as_ptr(), true, 0, &mut out),
            CubulateStatus::Ok
        );
        assert_eq!(
            json_of(out)["verdict"]["branch"],
            "NoCoarseMedian_RichLinearity"
        );
        cubulate_report_free(out);

        let input = fixture("square_median");
        let mut out: *mut CubulateReport = std::ptr::null_mut();
        assert_eq!(
            cubulate_median_verify(input.as_ptr(), &mut out),
            CubulateStatus::Ok
        );
        assert_eq!(json_of(out)["verdict"]["axioms"]["passed"], true);
        cubulate_report_free(out);

        let mut out: *mut CubulateReport = std::ptr::null_mut();
        assert_eq!(
            cubulate_median_rank(input.as_ptr(), false, 0, &mut out),
            CubulateStatus::Ok
        );
        assert_eq!(json_of(out)["verdict"]["rank_walls"], 2);
        cubulate_report_free(out);

        let input = fixture("rbf_axes_diag");
        let mut out: *mut CubulateReport = std::ptr::null_mut();
        assert_eq!(
            cubulate_rbf_build(input.as_ptr(), 3, 2, 0, &mut out),
            CubulateStatus::Ok
        );
        assert_eq!(json_of(out)["verdict"]["disjointness"], "verified");
        cubulate_report_free(out);
    }
}

#[test]
fn error_paths_set_codes_and_messages() {
    unsafe {
        // invalid input
        let bad = CString::new("{\"vertices\": [], \"edges\": []}").unwrap();
        let mut out: *mut CubulateReport = std::ptr::null_mut();
        let status = cubulate_tubular_analyze(bad.as_ptr(), false, 0, &mut out);
        assert_eq!(status, CubulateStatus::InvalidInput);
        let message = CStr::from_ptr(cubulate_report_error(out)).to_str().unwrap();
        assert!(message.contains("nonempty"), "{message}");
        assert!(cubulate_report_json(out).is_null());
        cubulate_report_free(out);

        // null pointers
        let mut out: *mut CubulateReport = std::ptr::null_mut();
        assert_eq!(
            cubulate_tubular_analyze(std::ptr::null(), false, 0, &mut out),
            CubulateStatus::NullPointer
        );
        assert_eq!(
            cubulate_median_verify(bad.as_ptr(), std::ptr::null_mut()),
            CubulateStatus::NullPointer
        );

        // limit exceeded maps to its own status
        let alg = cubulate::median::lattice_box(&[7, 7], &cubulate::Limits::with_max_elements(64))
            .unwrap();
        let big = CString::new(serde_json::to_string(&alg.to_json()).unwrap()).unwrap();
        let mut out: *mut CubulateReport = std::ptr::null_mut();
        assert_eq!(
            cubulate_median_rank(big.as_ptr(), false, 0, &mut out),
            CubulateStatus::LimitExceeded
        );
        cubulate_report_free(out);
        // raising the cap fixes it
        let mut out: *mut CubulateReport = std::ptr::null_mut();
        assert_eq!(
            cubulate_median_rank(big.as_ptr(), false, 64, &mut out),
            CubulateStatus::Ok
        );
        cubulate_report_free(out);

        // freeing null is a no-op
        cubulate_report_free(std::ptr::null_mut());
    }
}
