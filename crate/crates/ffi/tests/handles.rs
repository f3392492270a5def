use std::ffi::{CStr, CString};
use std::ptr;

use dman_ffi::*;

const PLANE: &str = "(patch M :coords (x y))\n(form w :on M :expr (^ dx dy))\n(dirac L :two-form w)\n(check c check-dirac :dirac L)\n";

fn parse(text: &str) -> (DmanStatus, *mut DmanScene) {
    let text = CString::new(text).unwrap();
    let mut scene = ptr::null_mut();
    let s = unsafe { dman_scene_parse(text.as_ptr(), &mut scene) };
    (s, scene)
}

fn run(scene: *const DmanScene) -> *mut DmanReport {
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { dman_scene_run(scene, &mut report) }, DmanStatus::Ok);
    report
}

fn render(report: *const DmanReport, format: DmanFormat) -> String {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { dman_report_render(report, format, false, &mut out) }, DmanStatus::Ok);
    let s = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
    unsafe { dman_string_free(out) };
    s
}

#[test]
fn passing_scene_round_trip() {
    let (s, scene) = parse(PLANE);
    assert_eq!(s, DmanStatus::Ok);
    assert_eq!(unsafe { dman_scene_len(scene) }, 4);
    let report = run(scene);
    assert_eq!(unsafe { dman_report_verdict(report) }, DmanVerdict::Pass);
    assert_eq!(unsafe { dman_report_exit_code(report) }, 0);
    let status = unsafe { CStr::from_ptr(dman_report_entry_status(report, c"c".as_ptr())) };
    assert_eq!(status.to_str().unwrap(), "pass");
    assert!(unsafe { dman_report_entry_status(report, c"nope".as_ptr()) }.is_null());
    let json: serde_json::Value = serde_json::from_str(&render(report, DmanFormat::Json)).unwrap();
    assert_eq!(json["status"], "pass");
    assert!(render(report, DmanFormat::Text).starts_with("✔ root [pass] scene\n"));
    unsafe {
        dman_report_free(report);
        dman_scene_free(scene);
    }
}

#[test]
fn failing_scene_and_filter() {
    let text = "(patch R3 :coords (x y z))\n\
                (dirac L :on R3 :bivector ((0 x (- y)) ((- x) 0 x) (y (- x) 0)))\n\
                (check bad check-dirac :dirac L)\n\
                (dirac Z :on R3 :bivector ((0 0 0) (0 0 0) (0 0 0)))\n\
                (check good check-dirac :dirac Z)\n";
    let (s, scene) = parse(text);
    assert_eq!(s, DmanStatus::Ok);
    let report = run(scene);
    assert_eq!(unsafe { dman_report_verdict(report) }, DmanVerdict::Fail);
    assert_eq!(unsafe { dman_report_exit_code(report) }, 1);
    let leaf = unsafe { CStr::from_ptr(dman_report_entry_status(report, c"bad/involutivity".as_ptr())) };
    assert_eq!(leaf.to_str().unwrap(), "fail");
    let mut only_good = ptr::null_mut();
    assert_eq!(
        unsafe { dman_report_filter(report, c"good".as_ptr(), &mut only_good) },
        DmanStatus::Ok
    );
    assert_eq!(unsafe { dman_report_verdict(only_good) }, DmanVerdict::Pass);
    unsafe {
        dman_report_free(only_good);
        dman_report_free(report);
        dman_scene_free(scene);
    }
}

#[test]
fn parse_errors_map_to_codes() {
    let cases = [
        ("(patch M :coords (x y)", DmanStatus::SyntaxError),
        ("(patch M :coords (x))\n(patch M :coords (y))", DmanStatus::DuplicateName),
        ("(dirac L :two-form w)", DmanStatus::UnknownReference),
    ];
    for (text, want) in cases {
        let (s, scene) = parse(text);
        assert_eq!(s, want, "{text}");
        assert!(scene.is_null());
        assert!(!dman_last_error_message().is_null());
        assert!(dman_last_error_line() >= 1);
    }
    let (_, scene) = parse("(patch M :coords (x))\n(patch M :coords (y))");
    assert!(scene.is_null());
    assert_eq!((dman_last_error_line(), dman_last_error_col()), (2, 8));
}

#[test]
fn null_and_utf8_arguments() {
    let mut scene = ptr::null_mut();
    assert_eq!(unsafe { dman_scene_parse(ptr::null(), &mut scene) }, DmanStatus::NullArgument);
    assert_eq!(
        unsafe { dman_scene_parse(c"".as_ptr(), ptr::null_mut()) },
        DmanStatus::NullArgument
    );
    let bad = [0xffu8, 0xfe, 0];
    assert_eq!(
        unsafe { dman_scene_parse(bad.as_ptr().cast(), &mut scene) },
        DmanStatus::InvalidUtf8
    );
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { dman_scene_run(ptr::null(), &mut report) }, DmanStatus::NullArgument);
    assert_eq!(unsafe { dman_report_verdict(ptr::null()) }, DmanVerdict::Fail);
    unsafe {
        dman_scene_free(ptr::null_mut());
        dman_report_free(ptr::null_mut());
        dman_string_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(dman_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
