use std::ffi::{CStr, CString};
use std::ptr;

use moduli_ffi::*;

const TORUS: &str = r#"{"pants": [{"cuffs": [{"length": 1.0}, {"length": 1.0}, {"cusp": true}]}],
                        "gluings": [{"from": [0, 0], "to": [0, 1], "twist": 0.0}]}"#;

fn torus(twist: f64) -> *mut ModuliRepresentation {
    let json = CString::new(TORUS.replace("\"twist\": 0.0", &format!("\"twist\": {twist}"))).unwrap();
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { moduli_representation_from_pants_json(json.as_ptr(), &mut rep) }, ModuliStatus::Ok);
    assert!(!rep.is_null());
    rep
}

fn last_error() -> String {
    let p = moduli_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn json_round_trip_through_handles() {
    let rep = torus(0.3);
    unsafe {
        assert_eq!(moduli_representation_rank(rep), 2);
        let mut json = ptr::null_mut();
        assert_eq!(moduli_representation_to_json(rep, &mut json), ModuliStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(moduli_representation_from_json(json, &mut back), ModuliStatus::Ok);
        let anchors = CString::new("A,AB,B").unwrap();
        let mut d = f64::NAN;
        assert_eq!(moduli_char_distance(rep, back, anchors.as_ptr(), &mut d), ModuliStatus::Ok);
        assert!(d < 1e-12);
        moduli_string_free(json);
        moduli_representation_free(back);
        moduli_representation_free(rep);
    }
}

#[test]
fn errors_carry_status_and_message() {
    let bad = CString::new(r#"{"pants": [{"cuffs": [{"length": 1.0}, {"length": 2.0}, {"cusp": true}]}],
                               "gluings": [{"from": [0, 0], "to": [0, 1]}]}"#)
    .unwrap();
    let mut rep = ptr::null_mut();
    let status = unsafe { moduli_representation_from_pants_json(bad.as_ptr(), &mut rep) };
    assert_eq!(status, ModuliStatus::InvalidInput);
    assert!(rep.is_null());
    assert!(last_error().contains("[0, 0]"));
    let status = unsafe { moduli_representation_from_json(ptr::null(), &mut rep) };
    assert_eq!(status, ModuliStatus::NullPointer);
    assert!(last_error().contains("json"));
    let ok = torus(0.0);
    assert!(moduli_last_error().is_null());
    unsafe { moduli_representation_free(ok) };
}

#[test]
fn circle_map_between_twists() {
    let (base, target) = (torus(0.0), torus(0.5));
    unsafe {
        let mut map = ptr::null_mut();
        assert_eq!(moduli_circle_map_from_ball(base, target, 5, 5_000_000, &mut map), ModuliStatus::Ok);
        let n = moduli_circle_map_len(map);
        assert!(n > 100);
        let (mut xs, mut ys) = (vec![0.0; n], vec![0.0; n]);
        let mut written = 0;
        assert_eq!(
            moduli_circle_map_samples(map, xs.as_mut_ptr(), ys.as_mut_ptr(), n, &mut written),
            ModuliStatus::Ok
        );
        assert_eq!(written, n);
        assert!(xs.windows(2).all(|p| p[0] < p[1]));
        let mut y = f64::NAN;
        assert_eq!(moduli_circle_map_evaluate(map, xs[7], &mut y), ModuliStatus::Ok);
        assert!((y - ys[7]).abs() < 1e-12);
        let mut defect = f64::NAN;
        assert_eq!(moduli_circle_map_equivariance(map, base, target, &mut defect), ModuliStatus::Ok);
        assert!(defect.is_finite() && defect < 0.5);
        let (mut re, mut im) = (f64::NAN, f64::NAN);
        assert_eq!(moduli_circle_map_extend(map, 0.1, -0.2, 64, &mut re, &mut im), ModuliStatus::Ok);
        assert!(re * re + im * im < 1.0);
        assert_eq!(moduli_circle_map_extend(map, 1.0, 0.0, 64, &mut re, &mut im), ModuliStatus::Failure);
        moduli_circle_map_free(map);
        moduli_representation_free(base);
        moduli_representation_free(target);
    }
}

#[test]
fn type_mismatch_is_reported() {
    let base = torus(0.0);
    let json = CString::new(r#"{"generators": ["A", "B"], "matrices": [[0.5, -1, 1, 0], [2, 1, 1, 1]]}"#).unwrap();
    let mut other = ptr::null_mut();
    unsafe {
        assert_eq!(moduli_representation_from_json(json.as_ptr(), &mut other), ModuliStatus::Ok);
        let mut map = ptr::null_mut();
        let status = moduli_circle_map_from_ball(base, other, 4, 5_000_000, &mut map);
        assert_eq!(status, ModuliStatus::TypeMismatch);
        assert!(map.is_null());
        moduli_representation_free(other);
        moduli_representation_free(base);
    }
}

#[test]
fn act_applies_twist() {
    let (base, target) = (torus(0.0), torus(0.2));
    let twist = CString::new(r#"{"images": {"B": "B A"}, "inverse_images": {"B": "B A'"}}"#).unwrap();
    let broken = CString::new(r#"{"images": {"B": "B A"}, "inverse_images": {"B": "B A"}}"#).unwrap();
    unsafe {
        let mut acted = ptr::null_mut();
        let mut defect = f64::NAN;
        assert_eq!(moduli_act(base, target, twist.as_ptr(), 4, &mut acted, &mut defect), ModuliStatus::Ok);
        assert!(defect.is_finite());
        assert_eq!(moduli_representation_rank(acted), 2);
        let mut again = ptr::null_mut();
        let status = moduli_act(base, target, broken.as_ptr(), 4, &mut again, &mut defect);
        assert_eq!(status, ModuliStatus::InvalidAutomorphism);
        assert!(again.is_null());
        moduli_representation_free(acted);
        moduli_representation_free(base);
        moduli_representation_free(target);
    }
}
