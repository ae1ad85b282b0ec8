//! Conformal barycenters of boundary measures and the Douady–Earle
//! extension of sampled circle maps to the disk.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::boundary_map::SampledCircleMap;
use crate::error::{Error, Result};
use crate::fuchsian::{GroupRepresentation, Word};
use crate::moebius::{BoundaryPoint, MoebiusTransform};

/// Points of the disk must satisfy `|z| < 1 - DISK_MARGIN`.
pub const DISK_MARGIN: f64 = 1e-12;

/// The iteration stops once the barycenter field is this small.
pub const BARYCENTER_TOL: f64 = 1e-10;

pub const MAX_ITERATIONS: usize = 500;

/// Measures supported in an arc shorter than this are rejected.
pub const DEGENERATE_ARC: f64 = 1e-3;

/// Fewest quadrature nodes accepted by [`extend`].
pub const MIN_NODES: usize = 16;

const INITIAL_STEP: f64 = 0.5;

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint(Complex64 { re: 0.0, im: 0.0 });

    pub fn new(z: Complex64) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() && z.norm() < 1.0 - DISK_MARGIN {
            Ok(DiskPoint(z))
        } else {
            Err(Error::OutsideDisk)
        }
    }

    pub fn z(&self) -> Complex64 {
        self.0
    }

    /// Image of a point of the upper half-plane under `z ↦ (z - i)/(z + i)`.
    pub fn from_half_plane(z: Complex64) -> Result<Self> {
        let i = Complex64::i();
        Self::new((z - i) / (z + i))
    }

    pub fn to_half_plane(&self) -> Complex64 {
        let i = Complex64::i();
        i * (1.0 + self.0) / (1.0 - self.0)
    }

    /// `σ(self)` for `σ` acting on the upper half-plane.
    pub fn moved_by(&self, sigma: &MoebiusTransform) -> Result<Self> {
        Self::from_half_plane(sigma.apply(self.to_half_plane()))
    }

    pub fn distance(&self, other: &DiskPoint) -> f64 {
        let r = (self.0 - other.0).norm() / (1.0 - other.0.conj() * self.0).norm();
        2.0 * r.min(1.0).atanh()
    }
}

/// The disk automorphism `u ↦ (u + w)/(1 + w̄u)` sending `0` to `w`.
fn lift(w: Complex64, u: Complex64) -> Complex64 {
    (u + w) / (1.0 + w.conj() * u)
}

fn field(zetas: &[Complex64], w: Complex64) -> Complex64 {
    let sum: Complex64 = zetas.iter().map(|&z| (z - w) / (1.0 - w.conj() * z)).sum();
    sum / zetas.len() as f64
}

fn check_measure(points: &[BoundaryPoint]) -> Result<()> {
    if points.len() < 3 {
        return Err(Error::DegenerateMeasure);
    }
    let mut angles: Vec<f64> = points.iter().map(|p| p.angle()).collect();
    angles.sort_by(f64::total_cmp);
    let mut gap = angles[0] + TAU - angles[angles.len() - 1];
    for pair in angles.windows(2) {
        gap = gap.max(pair[1] - pair[0]);
    }
    if gap > TAU - DEGENERATE_ARC {
        return Err(Error::DegenerateMeasure);
    }
    let n = angles.len();
    let mut end = 0;
    for start in 0..n {
        while end < start + n && {
            let a = angles[end % n] + if end >= n { TAU } else { 0.0 };
            a - angles[start] < DEGENERATE_ARC
        } {
            end += 1;
        }
        if 2 * (end - start) >= n {
            return Err(Error::DegenerateMeasure);
        }
    }
    Ok(())
}

/// The point `w` where the mean of `(ζ - w)/(1 - w̄ζ)` over the points
/// vanishes, found by damped iteration from the origin.
pub fn conformal_barycenter(points: &[BoundaryPoint]) -> Result<DiskPoint> {
    conformal_barycenter_from(points, DiskPoint::ORIGIN)
}

/// [`conformal_barycenter`] started from `start`.
///
/// Each step moves to `T_w(s·V(w))` where `T_w` sends `0` to `w` and `V` is
/// the field above; `s` starts at one half and is halved while a step fails
/// to shrink the field.
pub fn conformal_barycenter_from(points: &[BoundaryPoint], start: DiskPoint) -> Result<DiskPoint> {
    check_measure(points)?;
    let zetas: Vec<Complex64> = points.iter().map(|p| p.to_disk()).collect();
    let mut w = start.0;
    let mut v = field(&zetas, w);
    let mut iterations = 0;
    while v.norm() >= BARYCENTER_TOL {
        if iterations == MAX_ITERATIONS {
            return Err(Error::NoConvergence(MAX_ITERATIONS));
        }
        iterations += 1;
        let mut step = INITIAL_STEP;
        loop {
            let next = lift(w, v * step);
            let nv = field(&zetas, next);
            if nv.norm() < v.norm() && next.norm() < 1.0 - DISK_MARGIN {
                w = next;
                v = nv;
                break;
            }
            step /= 2.0;
            if step < f64::EPSILON {
                return Err(Error::NoConvergence(iterations));
            }
        }
    }
    Ok(DiskPoint(w))
}

/// The Douady–Earle extension of `f` at `z`: the barycenter of the image
/// under `f` of `n` equally spaced points pushed forward by the disk map
/// sending `0` to `z`.
pub fn extend(f: &SampledCircleMap, z: DiskPoint, n: usize) -> Result<DiskPoint> {
    if n < MIN_NODES {
        return Err(Error::Input(format!("extension needs at least {MIN_NODES} nodes, got {n}")));
    }
    let images: Vec<BoundaryPoint> = (0..n)
        .map(|k| {
            let node = Complex64::from_polar(1.0, TAU * k as f64 / n as f64);
            f.evaluate(BoundaryPoint::from_disk(lift(z.0, node)))
        })
        .collect();
    conformal_barycenter(&images)
}

/// Largest hyperbolic distance between `DE(f)(base(γ)·z)` and
/// `target(γ)·DE(f)(z)` over the words and test points.
pub fn equivariance_check(
    f: &SampledCircleMap,
    base: &GroupRepresentation,
    target: &GroupRepresentation,
    test_points: &[DiskPoint],
    words: &[Word],
    n: usize,
) -> Result<f64> {
    if base.names() != target.names() {
        return Err(Error::GeneratorMismatch);
    }
    let pairs = words
        .iter()
        .map(|w| Ok((base.evaluate(w)?, target.evaluate(w)?)))
        .collect::<Result<Vec<_>>>()?;
    let defects = test_points
        .par_iter()
        .map(|z| {
            let here = extend(f, *z, n)?;
            let mut worst: f64 = 0.0;
            for (b, t) in &pairs {
                let moved = extend(f, z.moved_by(b)?, n)?;
                worst = worst.max(moved.distance(&here.moved_by(t)?));
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(defects.into_iter().fold(0.0, f64::max))
}
