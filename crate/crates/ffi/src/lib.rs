//! C interface to the `moduli` library.
//!
//! Objects cross the boundary as opaque handles created by the `*_from_*`
//! functions and [`moduli_act`], and released by the matching `*_free`. Every
//! fallible call returns a [`ModuliStatus`]; on failure a message is kept
//! per thread and can be read with [`moduli_last_error`]. Strings returned
//! by the library are owned by the caller and released with
//! [`moduli_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use moduli::boundary_map::SampledCircleMap;
use moduli::douady_earle::{extend, DiskPoint};
use moduli::fuchsian::{BallLimits, GroupRepresentation, Word};
use moduli::marked_moduli::{char_distance, Character, MarkedStructure};
use moduli::mcg_action::{act, verify_action_formula};
use moduli::moebius::BoundaryPoint;
use moduli::{io, Error};
use num_complex::Complex64;

/// Result of a call. The numeric values of the first six variants match
/// the command line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuliStatus {
    Ok = 0,
    Failure = 1,
    InvalidInput = 2,
    TypeMismatch = 3,
    MonotonicityViolation = 4,
    InvalidAutomorphism = 5,
    NullPointer = 6,
    Panic = 7,
}

/// A representation of a finitely presented group into PSL(2,R).
pub struct ModuliRepresentation(GroupRepresentation);

/// A sampled orientation preserving circle map.
pub struct ModuliCircleMap(SampledCircleMap);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(message));
}

fn status_of(e: &Error) -> ModuliStatus {
    match e.exit_code() {
        2 => ModuliStatus::InvalidInput,
        3 => ModuliStatus::TypeMismatch,
        4 => ModuliStatus::MonotonicityViolation,
        5 => ModuliStatus::InvalidAutomorphism,
        _ => ModuliStatus::Failure,
    }
}

enum Failure {
    Library(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Failure>>(body: F) -> ModuliStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => ModuliStatus::Ok,
        Ok(Err(Failure::Library(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(name))) => {
            set_error(format!("`{name}` is null"));
            ModuliStatus::NullPointer
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {message}"));
            ModuliStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(name))
}

unsafe fn out<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(name))
}

unsafe fn text<'a>(p: *const c_char, name: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Library(Error::Input(format!("`{name}` is not valid UTF-8"))))
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).expect("library output has no nul bytes").into_raw()
}

fn parse_anchors(rep: &GroupRepresentation, anchors: &str) -> Result<[Word; 3], Error> {
    let words = anchors.split(',').map(|w| rep.parse_word(w)).collect::<Result<Vec<_>, _>>()?;
    <[Word; 3]>::try_from(words).map_err(|w| Error::Input(format!("expected 3 anchor words, got {}", w.len())))
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn moduli_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by the library.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn moduli_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a representation file's JSON text.
///
/// # Safety
/// `json` must be a nul terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn moduli_representation_from_json(
    json: *const c_char,
    out_rep: *mut *mut ModuliRepresentation,
) -> ModuliStatus {
    guard(|| {
        let slot = out(out_rep, "out_rep")?;
        let rep = io::representation_from_json(text(json, "json")?)?;
        *slot = Box::into_raw(Box::new(ModuliRepresentation(rep)));
        Ok(())
    })
}

/// Builds the holonomy representation of a pants file's JSON text.
///
/// # Safety
/// `json` must be a nul terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn moduli_representation_from_pants_json(
    json: *const c_char,
    out_rep: *mut *mut ModuliRepresentation,
) -> ModuliStatus {
    guard(|| {
        let slot = out(out_rep, "out_rep")?;
        let rep = io::pants_from_json(text(json, "json")?)?.build_representation()?;
        *slot = Box::into_raw(Box::new(ModuliRepresentation(rep)));
        Ok(())
    })
}

/// Serializes a representation to JSON. Free the result with
/// [`moduli_string_free`].
///
/// # Safety
/// `rep` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn moduli_representation_to_json(
    rep: *const ModuliRepresentation,
    out_json: *mut *mut c_char,
) -> ModuliStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        *slot = owned_string(io::representation_to_json(&borrow(rep, "rep")?.0));
        Ok(())
    })
}

/// Number of generators, or 0 for a null handle.
///
/// # Safety
/// `rep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn moduli_representation_rank(rep: *const ModuliRepresentation) -> usize {
    rep.as_ref().map_or(0, |r| r.0.rank())
}

/// # Safety
/// `rep` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn moduli_representation_free(rep: *mut ModuliRepresentation) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// Distance between the characters of two representations with the
/// anchors given as comma separated words, such as `"A,AB,B"`.
///
/// # Safety
/// Handles must be live, `anchors` nul terminated and `out_distance` valid.
#[no_mangle]
pub unsafe extern "C" fn moduli_char_distance(
    a: *const ModuliRepresentation,
    b: *const ModuliRepresentation,
    anchors: *const c_char,
    out_distance: *mut f64,
) -> ModuliStatus {
    guard(|| {
        let slot = out(out_distance, "out_distance")?;
        let (a, b) = (&borrow(a, "a")?.0, &borrow(b, "b")?.0);
        let anchors = parse_anchors(a, text(anchors, "anchors")?)?;
        *slot = char_distance(&Character::new(a, &anchors)?, &Character::new(b, &anchors)?)?;
        Ok(())
    })
}

/// Boundary map between two representations sampled on the sinks of the
/// ball of radius `depth`, after checking that they agree on element types.
///
/// # Safety
/// Handles must be live and `out_map` valid.
#[no_mangle]
pub unsafe extern "C" fn moduli_circle_map_from_ball(
    base: *const ModuliRepresentation,
    target: *const ModuliRepresentation,
    depth: usize,
    budget: usize,
    out_map: *mut *mut ModuliCircleMap,
) -> ModuliStatus {
    guard(|| {
        let slot = out(out_map, "out_map")?;
        let ms = MarkedStructure::new(borrow(base, "base")?.0.clone(), borrow(target, "target")?.0.clone())?
            .with_limits(BallLimits::with_budget(budget));
        *slot = Box::into_raw(Box::new(ModuliCircleMap(ms.rep_to_homeo(depth)?)));
        Ok(())
    })
}

/// Number of samples, or 0 for a null handle.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn moduli_circle_map_len(map: *const ModuliCircleMap) -> usize {
    map.as_ref().map_or(0, |m| m.0.len())
}

/// Copies up to `capacity` sample angles into `xs` and `ys`, in radians in
/// `[0, 2π)`, and reports how many were written.
///
/// # Safety
/// `map` must be live; `xs` and `ys` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn moduli_circle_map_samples(
    map: *const ModuliCircleMap,
    xs: *mut f64,
    ys: *mut f64,
    capacity: usize,
    out_written: *mut usize,
) -> ModuliStatus {
    guard(|| {
        let map = &borrow(map, "map")?.0;
        let written = out(out_written, "out_written")?;
        if capacity > 0 && (xs.is_null() || ys.is_null()) {
            return Err(Failure::Null("xs/ys"));
        }
        let n = map.len().min(capacity);
        for (i, (x, y)) in map.pairs().take(n).enumerate() {
            *xs.add(i) = x.angle();
            *ys.add(i) = y.angle();
        }
        *written = n;
        Ok(())
    })
}

/// Image angle of `angle` under the interpolated map.
///
/// # Safety
/// `map` must be live and `out_angle` valid.
#[no_mangle]
pub unsafe extern "C" fn moduli_circle_map_evaluate(
    map: *const ModuliCircleMap,
    angle: f64,
    out_angle: *mut f64,
) -> ModuliStatus {
    guard(|| {
        let slot = out(out_angle, "out_angle")?;
        if !angle.is_finite() {
            return Err(Error::Input("angle is not finite".into()).into());
        }
        *slot = borrow(map, "map")?.0.evaluate(BoundaryPoint::from_angle(angle)).angle();
        Ok(())
    })
}

/// Largest equivariance defect over the generators of the two
/// representations.
///
/// # Safety
/// Handles must be live and `out_defect` valid.
#[no_mangle]
pub unsafe extern "C" fn moduli_circle_map_equivariance(
    map: *const ModuliCircleMap,
    base: *const ModuliRepresentation,
    target: *const ModuliRepresentation,
    out_defect: *mut f64,
) -> ModuliStatus {
    guard(|| {
        let slot = out(out_defect, "out_defect")?;
        let (base, target) = (&borrow(base, "base")?.0, &borrow(target, "target")?.0);
        let testers: Vec<Word> = (0..base.rank()).map(Word::generator).collect();
        *slot = borrow(map, "map")?.0.check_equivariance(base, target, &testers)?;
        Ok(())
    })
}

/// Douady–Earle extension of the map at the disk point `(re, im)` with `n`
/// quadrature nodes.
///
/// # Safety
/// `map` must be live and the output pointers valid.
#[no_mangle]
pub unsafe extern "C" fn moduli_circle_map_extend(
    map: *const ModuliCircleMap,
    re: f64,
    im: f64,
    n: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> ModuliStatus {
    guard(|| {
        let (slot_re, slot_im) = (out(out_re, "out_re")?, out(out_im, "out_im")?);
        let z = DiskPoint::new(Complex64::new(re, im))?;
        let w = extend(&borrow(map, "map")?.0, z, n)?.z();
        (*slot_re, *slot_im) = (w.re, w.im);
        Ok(())
    })
}

/// # Safety
/// `map` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn moduli_circle_map_free(map: *mut ModuliCircleMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Applies the mapping class given as JSON to the marked structure
/// `(reference, target)`, returning the new target and the action formula
/// defect at `depth`.
///
/// # Safety
/// Handles must be live, `mapping_class_json` nul terminated and the
/// output pointers valid.
#[no_mangle]
pub unsafe extern "C" fn moduli_act(
    reference: *const ModuliRepresentation,
    target: *const ModuliRepresentation,
    mapping_class_json: *const c_char,
    depth: usize,
    out_target: *mut *mut ModuliRepresentation,
    out_defect: *mut f64,
) -> ModuliStatus {
    guard(|| {
        let (slot, defect) = (out(out_target, "out_target")?, out(out_defect, "out_defect")?);
        let ms = MarkedStructure::new(borrow(reference, "reference")?.0.clone(), borrow(target, "target")?.0.clone())?;
        let mc = io::mapping_class_from_json(text(mapping_class_json, "mapping_class_json")?, ms.reference().names())?;
        let acted = act(&ms, &mc)?;
        *defect = verify_action_formula(&ms, &mc, depth)?;
        *slot = Box::into_raw(Box::new(ModuliRepresentation(acted.target().clone())));
        Ok(())
    })
}
