//! Orientation preserving isometries of the hyperbolic plane and their
//! action on the boundary circle.
//!
//! Matrices act on the upper half-plane by `z ↦ (az+b)/(cz+d)`. Boundary
//! points are stored as angles of the disk model, obtained from the
//! half-plane boundary `ℝ ∪ {∞}` through the Cayley transform
//! `z ↦ (z−i)/(z+i)`. In that parameterization `∞` has angle `0`, `0` has
//! angle `π` and `1` has angle `3π/2`, so `(0, 1, ∞)` walks counterclockwise.
//!
//! Internally every boundary point is handled as a projective vector
//! `(x, y)` with `z = x/y`, which keeps `∞` free of special cases.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for telling parabolic traces apart from the rest.
pub const DEFAULT_PARABOLIC_TOL: f64 = 1e-9;

/// Two boundary points closer than this (in angle) are considered equal.
pub const ANGLE_TOL: f64 = 1e-12;

const SIGN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ElementClass {
    Identity,
    Hyperbolic,
    Parabolic,
    Elliptic,
}

impl fmt::Display for ElementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ElementClass::Identity => "identity",
            ElementClass::Hyperbolic => "hyperbolic",
            ElementClass::Parabolic => "parabolic",
            ElementClass::Elliptic => "elliptic",
        };
        f.write_str(s)
    }
}

/// Result of comparing three boundary points in circular order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Positive,
    Negative,
    Degenerate,
}

/// An element of PSL(2,ℝ), stored as its canonical SL(2,ℝ) lift.
///
/// The stored lift has determinant 1 and non-negative trace; when the trace
/// is numerically zero the lift with `a ≥ 0` (then `b ≥ 0`) is kept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct MoebiusTransform {
    m: [f64; 4],
}

impl MoebiusTransform {
    pub const IDENTITY: MoebiusTransform = MoebiusTransform {
        m: [1.0, 0.0, 0.0, 1.0],
    };

    /// Builds a transform from matrix entries, rescaling to determinant 1.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() || ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidMatrix(det));
        }
        Ok(Self::from_positive([a, b, c, d]))
    }

    /// Rescales a matrix whose determinant is known to be positive.
    fn from_positive(raw: [f64; 4]) -> Self {
        let det = raw[0] * raw[3] - raw[1] * raw[2];
        let s = 1.0 / det.sqrt();
        let mut m = [raw[0] * s, raw[1] * s, raw[2] * s, raw[3] * s];
        if needs_flip(&m) {
            for v in &mut m {
                *v = -*v;
            }
        }
        MoebiusTransform { m }
    }

    pub fn entries(&self) -> [f64; 4] {
        self.m
    }

    pub fn trace(&self) -> f64 {
        self.m[0] + self.m[3]
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.m;
        Self::canonical_sign([d, -b, -c, a])
    }

    /// `self ∘ other`, the product of the stored lifts with canonical sign.
    pub fn compose(&self, other: &Self) -> Self {
        Self::canonical_sign(mul_raw(&self.m, &other.m))
    }

    fn canonical_sign(mut m: [f64; 4]) -> Self {
        if needs_flip(&m) {
            for v in &mut m {
                *v = -*v;
            }
        }
        MoebiusTransform { m }
    }

    /// `sigma ∘ self ∘ sigma⁻¹`.
    pub fn conjugate_by(&self, sigma: &Self) -> Self {
        sigma.compose(self).compose(&sigma.inverse())
    }

    pub fn classify(&self, tol: f64) -> ElementClass {
        if self.distance(&Self::IDENTITY) < tol {
            return ElementClass::Identity;
        }
        let t = self.trace().abs();
        if t > 2.0 + tol {
            ElementClass::Hyperbolic
        } else if (t - 2.0).abs() <= tol {
            ElementClass::Parabolic
        } else {
            ElementClass::Elliptic
        }
    }

    /// Largest entrywise difference, minimized over the sign of the lift.
    pub fn distance(&self, other: &Self) -> f64 {
        let plus = (0..4)
            .map(|i| (self.m[i] - other.m[i]).abs())
            .fold(0.0, f64::max);
        let minus = (0..4)
            .map(|i| (self.m[i] + other.m[i]).abs())
            .fold(0.0, f64::max);
        plus.min(minus)
    }

    /// The attracting fixed point of a hyperbolic element.
    pub fn sink(&self) -> Result<BoundaryPoint> {
        self.hyperbolic_fixed_point(true)
    }

    /// The repelling fixed point of a hyperbolic element.
    pub fn source(&self) -> Result<BoundaryPoint> {
        self.hyperbolic_fixed_point(false)
    }

    fn hyperbolic_fixed_point(&self, attracting: bool) -> Result<BoundaryPoint> {
        let class = self.classify(DEFAULT_PARABOLIC_TOL);
        if class != ElementClass::Hyperbolic {
            return Err(Error::NotHyperbolic(class));
        }
        Ok(self.fixed_point_unchecked(attracting))
    }

    /// Fixed point for an element with `|tr| > 2`; the caller has classified.
    pub(crate) fn fixed_point_unchecked(&self, attracting: bool) -> BoundaryPoint {
        let [a, b, c, d] = self.m;
        let t = a + d;
        let disc = ((t.abs() - 2.0) * (t.abs() + 2.0)).max(0.0).sqrt();
        // the eigenvalue of larger modulus belongs to the attracting point
        let big = (t + t.signum() * disc) / 2.0;
        let lambda = if attracting { big } else { 1.0 / big };
        let v1 = (b, lambda - a);
        let v2 = (lambda - d, c);
        let (x, y) = if v1.0 * v1.0 + v1.1 * v1.1 >= v2.0 * v2.0 + v2.1 * v2.1 {
            v1
        } else {
            v2
        };
        BoundaryPoint::from_projective(x, y)
    }

    /// Fixed point of an element with `|tr| = 2` up to rounding, taken as
    /// the midpoint of the possibly split pair so the error stays linear in
    /// the trace defect.
    pub(crate) fn parabolic_fixed_point_unchecked(&self) -> BoundaryPoint {
        let [a, b, c, d] = self.m;
        let v1 = (b, (d - a) / 2.0);
        let v2 = ((a - d) / 2.0, c);
        let (x, y) = if v1.0 * v1.0 + v1.1 * v1.1 >= v2.0 * v2.0 + v2.1 * v2.1 {
            v1
        } else {
            v2
        };
        BoundaryPoint::from_projective(x, y)
    }

    pub fn translation_length(&self) -> Result<f64> {
        let class = self.classify(DEFAULT_PARABOLIC_TOL);
        if class != ElementClass::Hyperbolic {
            return Err(Error::NotHyperbolic(class));
        }
        Ok(2.0 * (self.trace().abs() / 2.0).acosh())
    }

    pub fn apply_boundary(&self, p: BoundaryPoint) -> BoundaryPoint {
        let (x, y) = p.projective();
        let [a, b, c, d] = self.m;
        BoundaryPoint::from_projective(a * x + b * y, c * x + d * y)
    }

    /// Action on a point of the upper half-plane.
    pub fn apply(&self, z: Complex64) -> Complex64 {
        let [a, b, c, d] = self.m;
        (z * a + b) / (z * c + d)
    }

    /// The unique element mapping `0, 1, ∞` to `a, b, c`.
    pub fn from_triple(a: BoundaryPoint, b: BoundaryPoint, c: BoundaryPoint) -> Result<Self> {
        match circular_order(a, b, c) {
            Orientation::Degenerate => return Err(Error::DegenerateTriple),
            Orientation::Negative => return Err(Error::NegativelyOriented),
            Orientation::Positive => {}
        }
        Self::through_triple(a, b, c)
    }

    /// Solves for the triple map without the orientation pre-check.
    pub(crate) fn through_triple(a: BoundaryPoint, b: BoundaryPoint, c: BoundaryPoint) -> Result<Self> {
        let va = a.projective();
        let vb = b.projective();
        let vc = c.projective();
        // columns: image of ∞ is γ·vc, image of 0 is α·va, and γ·vc + α·va ∝ vb
        let det = vc.0 * va.1 - va.0 * vc.1;
        if det.abs() < 1e-300 {
            return Err(Error::DegenerateTriple);
        }
        let gamma = (vb.0 * va.1 - va.0 * vb.1) / det;
        let alpha = (vc.0 * vb.1 - vb.0 * vc.1) / det;
        let raw = [gamma * vc.0, alpha * va.0, gamma * vc.1, alpha * va.1];
        let mdet = raw[0] * raw[3] - raw[1] * raw[2];
        if !(mdet > 0.0) || !mdet.is_finite() {
            return if mdet == 0.0 || !mdet.is_finite() {
                Err(Error::DegenerateTriple)
            } else {
                Err(Error::NegativelyOriented)
            };
        }
        Ok(Self::from_positive(raw))
    }

    /// The hyperbolic element translating by `distance` along the geodesic
    /// from `from` towards `to`.
    pub fn translation(from: BoundaryPoint, to: BoundaryPoint, distance: f64) -> Result<Self> {
        let frame = Self::axis_frame(from, to)?;
        let e = (distance / 2.0).exp();
        let shift = MoebiusTransform::from_positive([e, 0.0, 0.0, 1.0 / e]);
        Ok(frame.compose(&shift).compose(&frame.inverse()))
    }

    /// Some element sending `0` to `from` and `∞` to `to`.
    pub(crate) fn axis_frame(from: BoundaryPoint, to: BoundaryPoint) -> Result<Self> {
        let mid = BoundaryPoint::from_angle(from.angle() + forward_gap(from, to) / 2.0);
        Self::from_triple(from, mid, to)
    }
}

impl Mul for MoebiusTransform {
    type Output = MoebiusTransform;
    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

impl TryFrom<[f64; 4]> for MoebiusTransform {
    type Error = Error;
    fn try_from(m: [f64; 4]) -> Result<Self> {
        MoebiusTransform::new(m[0], m[1], m[2], m[3])
    }
}

impl From<MoebiusTransform> for [f64; 4] {
    fn from(m: MoebiusTransform) -> [f64; 4] {
        m.m
    }
}

fn needs_flip(m: &[f64; 4]) -> bool {
    let t = m[0] + m[3];
    if t > SIGN_TOL {
        false
    } else if t < -SIGN_TOL {
        true
    } else if m[0].abs() > SIGN_TOL {
        m[0] < 0.0
    } else {
        m[1] < 0.0
    }
}

pub(crate) fn mul_raw(p: &[f64; 4], q: &[f64; 4]) -> [f64; 4] {
    [
        p[0] * q[0] + p[1] * q[2],
        p[0] * q[1] + p[1] * q[3],
        p[2] * q[0] + p[3] * q[2],
        p[2] * q[1] + p[3] * q[3],
    ]
}

/// Trace of the commutator `ABA⁻¹B⁻¹` in SL(2,ℝ); independent of the
/// choice of lifts.
pub fn commutator_trace(a: &MoebiusTransform, b: &MoebiusTransform) -> f64 {
    let inv = |m: &[f64; 4]| [m[3], -m[1], -m[2], m[0]];
    let ab = mul_raw(&a.m, &b.m);
    let aba = mul_raw(&ab, &inv(&a.m));
    let c = mul_raw(&aba, &inv(&b.m));
    c[0] + c[3]
}

/// Hyperbolic distance between two points of the upper half-plane.
pub fn hyperbolic_distance(z: Complex64, w: Complex64) -> f64 {
    let num = (z - w).norm_sqr();
    (1.0 + num / (2.0 * z.im * w.im)).acosh()
}

/// A point of the boundary circle in the disk model.
///
/// The angle is kept in `[-π, π)` so that points near `∞` on either side
/// keep full relative precision; [`BoundaryPoint::angle`] reports it in
/// `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BoundaryRepr", into = "BoundaryRepr")]
pub struct BoundaryPoint(f64);

impl BoundaryPoint {
    pub const INFINITY: BoundaryPoint = BoundaryPoint(0.0);

    pub fn from_angle(theta: f64) -> Self {
        if (-PI..PI).contains(&theta) {
            return BoundaryPoint(theta);
        }
        let r = wrap_angle(theta);
        BoundaryPoint(if r >= PI { r - TAU } else { r })
    }

    /// A point of `ℝ ⊂ ℝ ∪ {∞}` in the half-plane model.
    pub fn from_real(x: f64) -> Self {
        if x.is_infinite() {
            return Self::INFINITY;
        }
        Self::from_projective(x, 1.0)
    }

    /// The point `x/y` of `ℝ ∪ {∞}`.
    pub fn from_projective(x: f64, y: f64) -> Self {
        let (x, y) = if x < 0.0 { (-x, -y) } else { (x, y) };
        let t = -2.0 * y.atan2(x);
        BoundaryPoint(if t >= PI { -PI } else { t })
    }

    /// Angle in `[0, 2π)`.
    pub fn angle(&self) -> f64 {
        if self.0 < 0.0 {
            let a = self.0 + TAU;
            if a >= TAU {
                0.0
            } else {
                a
            }
        } else {
            self.0
        }
    }

    /// Half-plane coordinate; `None` for `∞`.
    pub fn to_real(&self) -> Option<f64> {
        if self.0 == 0.0 {
            return None;
        }
        let (x, y) = self.projective();
        Some(x / y)
    }

    pub fn projective(&self) -> (f64, f64) {
        let h = self.0 / 2.0;
        (h.cos(), -h.sin())
    }

    /// The point `e^{iθ}` of the unit circle.
    pub fn to_disk(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.0)
    }

    pub fn from_disk(z: Complex64) -> Self {
        Self::from_angle(z.arg())
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_real() {
            None => write!(f, "∞"),
            Some(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BoundaryRepr {
    Angle { angle: f64 },
    Real { real: f64 },
    Infinity { infinity: bool },
}

impl TryFrom<BoundaryRepr> for BoundaryPoint {
    type Error = Error;
    fn try_from(r: BoundaryRepr) -> Result<Self> {
        match r {
            BoundaryRepr::Angle { angle } if angle.is_finite() => Ok(BoundaryPoint::from_angle(angle)),
            BoundaryRepr::Real { real } if real.is_finite() => Ok(BoundaryPoint::from_real(real)),
            BoundaryRepr::Infinity { infinity: true } => Ok(BoundaryPoint::INFINITY),
            _ => Err(Error::Input("malformed boundary point".into())),
        }
    }
}

impl From<BoundaryPoint> for BoundaryRepr {
    fn from(p: BoundaryPoint) -> Self {
        BoundaryRepr::Angle { angle: p.0 }
    }
}

pub(crate) fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Counterclockwise angle from `a` to `b`, in `[0, 2π)`.
pub fn forward_gap(a: BoundaryPoint, b: BoundaryPoint) -> f64 {
    wrap_angle(b.0 - a.0)
}

/// Arc-length metric on the circle, with values in `[0, π]`.
pub fn visual_distance(a: BoundaryPoint, b: BoundaryPoint) -> f64 {
    let d = forward_gap(a, b);
    d.min(TAU - d)
}

pub fn circular_order(a: BoundaryPoint, b: BoundaryPoint, c: BoundaryPoint) -> Orientation {
    if visual_distance(a, b) < ANGLE_TOL
        || visual_distance(b, c) < ANGLE_TOL
        || visual_distance(a, c) < ANGLE_TOL
    {
        return Orientation::Degenerate;
    }
    if forward_gap(a, b) < forward_gap(a, c) {
        Orientation::Positive
    } else {
        Orientation::Negative
    }
}
