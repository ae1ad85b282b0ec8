//! Monotone circle maps known on finitely many sample pairs.
//!
//! Between samples the map is interpolated by the geometric mean of the two
//! Möbius maps fitted to the neighbouring sample triples, taken in the
//! frame that sends the bracketing image points to `0` and `∞`. This
//! interpolant reproduces Möbius graphs exactly and commutes with pre- and
//! post-composition by Möbius maps. A circular piecewise-linear step in
//! the angle is used when the fitted maps leave the image arc.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{AnglePair, Error, Result};
use crate::fuchsian::{Ball, BallLimits, GroupRepresentation, Word};
use crate::moebius::{forward_gap, visual_distance, BoundaryPoint, ElementClass, MoebiusTransform};

/// Sample points closer than this in angle are merged when their images
/// also agree.
pub const MERGE_TOL: f64 = 1e-10;

/// Image inversions up to this size are treated as rounding and re-sorted.
pub const INVERSION_TOL: f64 = 1e-10;

/// Sample points closer than this in angle are below the resolution of
/// computed sinks and are merged whatever their images.
pub const TIE_TOL: f64 = 1e-13;

/// Default agreement required between images of merged sample points.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Classification tolerance for sampled words.
pub const CLASSIFY_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct SampledCircleMap {
    xs: Vec<BoundaryPoint>,
    ys: Vec<BoundaryPoint>,
    labels: Vec<Option<Word>>,
    tolerance: f64,
}

impl SampledCircleMap {
    pub fn from_pairs(pairs: Vec<(BoundaryPoint, BoundaryPoint)>) -> Result<Self> {
        let labels = vec![None; pairs.len()];
        Self::build(pairs, labels, DEFAULT_TOLERANCE)
    }

    pub fn from_labeled(items: Vec<(BoundaryPoint, BoundaryPoint, Option<Word>)>, tolerance: f64) -> Result<Self> {
        let (pairs, labels) = items.into_iter().map(|(x, y, w)| ((x, y), w)).unzip();
        Self::build(pairs, labels, tolerance)
    }

    /// Sorts by `x`, merges coincident samples and checks that the images
    /// wind once around the circle in the same cyclic order.
    fn build(pairs: Vec<(BoundaryPoint, BoundaryPoint)>, labels: Vec<Option<Word>>, tolerance: f64) -> Result<Self> {
        let mut items: Vec<_> = pairs.into_iter().zip(labels).collect();
        items.sort_by(|a, b| a.0 .0.angle().total_cmp(&b.0 .0.angle()));
        let mut xs: Vec<BoundaryPoint> = Vec::with_capacity(items.len());
        let mut ys: Vec<BoundaryPoint> = Vec::with_capacity(items.len());
        let mut out_labels: Vec<Option<Word>> = Vec::with_capacity(items.len());
        let coincide = |dx: f64, y: BoundaryPoint, py: BoundaryPoint| {
            dx < TIE_TOL || (dx < MERGE_TOL && visual_distance(y, py) <= tolerance)
        };
        for ((x, y), label) in items {
            if let (Some(&px), Some(&py)) = (xs.last(), ys.last()) {
                if coincide(x.angle() - px.angle(), y, py) {
                    let top = out_labels.last_mut().expect("nonempty");
                    if better_label(&label, top) {
                        *top = label;
                        *xs.last_mut().expect("nonempty") = x;
                        *ys.last_mut().expect("nonempty") = y;
                    }
                    continue;
                }
            }
            xs.push(x);
            ys.push(y);
            out_labels.push(label);
        }
        if xs.len() > 1 && coincide(forward_gap(xs[xs.len() - 1], xs[0]), ys[ys.len() - 1], ys[0]) {
            let loser = if better_label(&out_labels[xs.len() - 1], &out_labels[0]) {
                0
            } else {
                xs.len() - 1
            };
            xs.remove(loser);
            ys.remove(loser);
            out_labels.remove(loser);
        }
        let n = xs.len();
        if n < 3 {
            return Err(Error::TooFewSamples(n));
        }
        let inverted = |a: BoundaryPoint, b: BoundaryPoint| forward_gap(a, b) > TAU - INVERSION_TOL;
        for i in 1..n {
            let mut k = i;
            while k > 0 && inverted(ys[k - 1], ys[k]) {
                ys.swap(k - 1, k);
                k -= 1;
            }
        }
        if inverted(ys[n - 1], ys[0]) {
            ys.swap(n - 1, 0);
        }
        let mut total = 0.0;
        for i in 0..n {
            total += forward_gap(ys[i], ys[(i + 1) % n]);
            if total > TAU + 1e-6 {
                return Err(Error::MonotonicityViolation([
                    pair(xs[0], ys[0]),
                    pair(xs[i], ys[i]),
                    pair(xs[(i + 1) % n], ys[(i + 1) % n]),
                ]));
            }
        }
        if total < TAU - 1e-6 {
            return Err(Error::MonotonicityViolation([
                pair(xs[0], ys[0]),
                pair(xs[1], ys[1]),
                pair(xs[2], ys[2]),
            ]));
        }
        Ok(SampledCircleMap {
            xs,
            ys,
            labels: out_labels,
            tolerance,
        })
    }

    /// Sinks of each word in both representations.
    pub fn from_representations(
        base: &GroupRepresentation,
        target: &GroupRepresentation,
        words: &[Word],
    ) -> Result<Self> {
        if base.names() != target.names() {
            return Err(Error::GeneratorMismatch);
        }
        let items: Vec<Option<_>> = words
            .par_iter()
            .map(|w| {
                let (b, t) = (base.evaluate(w)?, target.evaluate(w)?);
                sink_pair(base, w, &b, &t).map(|p| p.map(|(x, y)| (x, y, Some(w.clone()))))
            })
            .collect::<Result<_>>()?;
        Self::from_labeled(items.into_iter().flatten().collect(), DEFAULT_TOLERANCE)
    }

    /// Sinks of every word of the ball of radius `depth`.
    pub fn from_ball(
        base: &GroupRepresentation,
        target: &GroupRepresentation,
        depth: usize,
        limits: &BallLimits,
    ) -> Result<Self> {
        Self::from_ball_with(base, target, depth, limits, DEFAULT_TOLERANCE)
    }

    /// [`SampledCircleMap::from_ball`] with an explicit order tolerance.
    pub fn from_ball_with(
        base: &GroupRepresentation,
        target: &GroupRepresentation,
        depth: usize,
        limits: &BallLimits,
        tolerance: f64,
    ) -> Result<Self> {
        if base.names() != target.names() {
            return Err(Error::GeneratorMismatch);
        }
        let ball = Ball::new(base.rank(), depth, limits)?;
        let items = ball.filter_map(&[base, target], |w, m| {
            sink_pair(base, w, &m[0], &m[1]).map(|p| p.map(|(x, y)| (x, y, Some(w.clone()))))
        })?;
        Self::from_labeled(items, tolerance)
    }

    /// Samples `(x, σ(x))` on the given grid.
    pub fn mobius_graph(sigma: &MoebiusTransform, grid: &[BoundaryPoint]) -> Result<Self> {
        Self::from_pairs(grid.iter().map(|&x| (x, sigma.apply_boundary(x))).collect())
    }

    /// `n` equally spaced samples of the identity.
    pub fn identity(n: usize) -> Result<Self> {
        Self::from_pairs(
            (0..n)
                .map(|k| {
                    let x = BoundaryPoint::from_angle(TAU * k as f64 / n as f64);
                    (x, x)
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[BoundaryPoint] {
        &self.xs
    }

    pub fn ys(&self) -> &[BoundaryPoint] {
        &self.ys
    }

    pub fn labels(&self) -> &[Option<Word>] {
        &self.labels
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn pairs(&self) -> impl Iterator<Item = (BoundaryPoint, BoundaryPoint)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// Largest gap between consecutive samples on either side of the map.
    pub fn max_gap(&self) -> f64 {
        let gap = |v: &[BoundaryPoint]| {
            (0..v.len())
                .map(|i| forward_gap(v[i], v[(i + 1) % v.len()]))
                .fold(0.0, f64::max)
        };
        gap(&self.xs).max(gap(&self.ys))
    }

    pub fn evaluate(&self, x: BoundaryPoint) -> BoundaryPoint {
        let n = self.xs.len();
        let a = x.angle();
        let idx = self.xs.partition_point(|p| p.angle() <= a);
        let i = if idx == 0 { n - 1 } else { idx - 1 };
        let j = (i + 1) % n;
        if self.xs[i] == x {
            return self.ys[i];
        }
        if self.xs[j] == x {
            return self.ys[j];
        }
        let (into, span) = (forward_gap(self.xs[i], x), forward_gap(self.xs[i], self.xs[j]));
        if into >= span {
            return if TAU - into < into - span { self.ys[i] } else { self.ys[j] };
        }
        self.interpolate(i, x)
    }

    fn interpolate(&self, i: usize, x: BoundaryPoint) -> BoundaryPoint {
        let n = self.xs.len();
        let at = |k: usize| (k + n) % n;
        let (h, j, k) = (at(i + n - 1), at(i + 1), at(i + 2));
        let fit = |p: usize, q: usize, r: usize| -> Option<BoundaryPoint> {
            let from = MoebiusTransform::through_triple(self.xs[p], self.xs[q], self.xs[r]).ok()?;
            let to = MoebiusTransform::through_triple(self.ys[p], self.ys[q], self.ys[r]).ok()?;
            Some(to.apply_boundary(from.inverse().apply_boundary(x)))
        };
        let mean = || -> Option<BoundaryPoint> {
            let left = fit(h, i, j)?;
            let right = fit(i, j, k)?;
            let frame = MoebiusTransform::axis_frame(self.ys[i], self.ys[j]).ok()?;
            let back = frame.inverse();
            let p = back.apply_boundary(left).to_real()?;
            let q = back.apply_boundary(right).to_real()?;
            if !(p > 0.0 && q > 0.0 && p.is_finite() && q.is_finite()) {
                return None;
            }
            Some(frame.apply_boundary(BoundaryPoint::from_real((p * q).sqrt())))
        };
        mean().unwrap_or_else(|| {
            let t = forward_gap(self.xs[i], x) / forward_gap(self.xs[i], self.xs[j]);
            BoundaryPoint::from_angle(self.ys[i].angle() + t * forward_gap(self.ys[i], self.ys[j]))
        })
    }

    /// `self ∘ f`, sampled on the grid of `f`.
    pub fn compose(&self, f: &SampledCircleMap) -> Result<SampledCircleMap> {
        let ys: Vec<BoundaryPoint> = f.ys.par_iter().map(|&y| self.evaluate(y)).collect();
        let items = f
            .xs
            .iter()
            .zip(ys)
            .zip(&f.labels)
            .map(|((&x, y), l)| (x, y, l.clone()))
            .collect();
        Self::from_labeled(items, f.tolerance.max(self.tolerance))
    }

    pub fn invert(&self) -> Result<SampledCircleMap> {
        let items = self
            .xs
            .iter()
            .zip(&self.ys)
            .zip(&self.labels)
            .map(|((&x, &y), l)| (y, x, l.clone()))
            .collect();
        Self::from_labeled(items, self.tolerance)
    }

    /// Post-composition `σ ∘ self` on the same grid.
    pub fn post_compose(&self, sigma: &MoebiusTransform) -> Result<SampledCircleMap> {
        let items = self
            .pairs()
            .zip(&self.labels)
            .map(|((x, y), l)| (x, sigma.apply_boundary(y), l.clone()))
            .collect();
        Self::from_labeled(items, self.tolerance)
    }

    /// Pre-composition `self ∘ σ`, sampled on `σ⁻¹` of the grid.
    pub fn pre_compose(&self, sigma: &MoebiusTransform) -> Result<SampledCircleMap> {
        let inv = sigma.inverse();
        let items = self
            .pairs()
            .zip(&self.labels)
            .map(|((x, y), l)| (inv.apply_boundary(x), y, l.clone()))
            .collect();
        Self::from_labeled(items, self.tolerance)
    }

    /// Largest visual distance between the maps over both sample grids.
    pub fn sup_distance(&self, other: &SampledCircleMap) -> f64 {
        let one = |f: &SampledCircleMap, g: &SampledCircleMap| {
            f.xs.par_iter()
                .zip(&f.ys)
                .map(|(&x, &y)| visual_distance(y, g.evaluate(x)))
                .reduce(|| 0.0, f64::max)
        };
        one(self, other).max(one(other, self))
    }

    /// Largest defect of `F ∘ base(γ) = target(γ) ∘ F` over the testers and
    /// the sample grid.
    pub fn check_equivariance(
        &self,
        base: &GroupRepresentation,
        target: &GroupRepresentation,
        testers: &[Word],
    ) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for w in testers {
            let (b, t) = (base.evaluate(w)?, target.evaluate(w)?);
            let d = self
                .xs
                .par_iter()
                .zip(&self.ys)
                .map(|(&x, &y)| visual_distance(self.evaluate(b.apply_boundary(x)), t.apply_boundary(y)))
                .reduce(|| 0.0, f64::max);
            worst = worst.max(d);
        }
        Ok(worst)
    }

    /// The representative of `[self]` modulo post-composition that fixes
    /// `0`, `1` and `∞`, sampled on the grid together with those points.
    pub fn sigma1_normalize(&self) -> Result<SampledCircleMap> {
        let anchors = [
            BoundaryPoint::from_real(0.0),
            BoundaryPoint::from_real(1.0),
            BoundaryPoint::INFINITY,
        ];
        let [a, b, c] = anchors.map(|p| self.evaluate(p));
        let m = match MoebiusTransform::from_triple(a, b, c) {
            Ok(m) => m,
            Err(Error::NegativelyOriented) | Err(Error::DegenerateTriple) => return Err(Error::DegenerateTriple),
            Err(e) => return Err(e),
        };
        let inv = m.inverse();
        let mut items: Vec<_> = self
            .pairs()
            .zip(&self.labels)
            .map(|((x, y), l)| (x, inv.apply_boundary(y), l.clone()))
            .collect();
        for p in anchors {
            if self.xs.iter().all(|&x| visual_distance(x, p) >= MERGE_TOL) {
                items.push((p, p, None));
            }
        }
        Self::from_labeled(items, self.tolerance)
    }

    /// Rows `x_angle,y_angle,word`.
    pub fn to_csv(&self, names: &[String]) -> String {
        let mut out = String::from("x_angle,y_angle,word\n");
        for ((x, y), l) in self.pairs().zip(&self.labels) {
            let word = l.as_ref().map(|w| w.display(names).to_string()).unwrap_or_default();
            let _ = writeln!(out, "{:.15},{:.15},{}", x.angle(), y.angle(), word);
        }
        out
    }

    /// Chord diagram on the unit circle next to the angle-versus-angle graph.
    pub fn to_svg(&self, max_chords: usize) -> String {
        let n = self.len();
        let step = n.div_ceil(max_chords.max(1)).max(1);
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="880" height="420" viewBox="0 0 880 420">"#
        );
        let _ = writeln!(out, r##"<rect width="880" height="420" fill="#ffffff"/>"##);
        let _ = writeln!(out, r##"<circle cx="210" cy="210" r="180" fill="none" stroke="#222" stroke-width="1.5"/>"##);
        let on_circle = |p: BoundaryPoint| {
            let z = p.to_disk();
            (210.0 + 180.0 * z.re, 210.0 - 180.0 * z.im)
        };
        let _ = writeln!(out, r##"<g stroke="#1f77b4" stroke-width="0.4" stroke-opacity="0.6">"##);
        for (x, y) in self.pairs().step_by(step) {
            let (x1, y1) = on_circle(x);
            let (x2, y2) = on_circle(y);
            let _ = writeln!(out, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#);
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(out, r##"<rect x="460" y="30" width="360" height="360" fill="none" stroke="#222"/>"##);
        let scale = 360.0 / TAU;
        let points: Vec<String> = self
            .pairs()
            .step_by(step)
            .map(|(x, y)| format!("{:.2},{:.2}", 460.0 + x.angle() * scale, 390.0 - y.angle() * scale))
            .collect();
        let _ = writeln!(
            out,
            r##"<g fill="#d62728">{}</g>"##,
            points
                .iter()
                .map(|p| {
                    let (cx, cy) = p.split_once(',').expect("formatted pair");
                    format!(r#"<circle cx="{cx}" cy="{cy}" r="0.8"/>"#)
                })
                .collect::<String>()
        );
        let _ = writeln!(out, "</svg>");
        out
    }
}

fn pair(x: BoundaryPoint, y: BoundaryPoint) -> AnglePair {
    AnglePair {
        x: x.angle(),
        y: y.angle(),
    }
}

fn better_label(candidate: &Option<Word>, current: &Option<Word>) -> bool {
    match (candidate, current) {
        (Some(c), Some(w)) => c.shortlex_cmp(w).is_lt(),
        (Some(_), None) => true,
        _ => false,
    }
}

/// Sink pair of a word hyperbolic in both representations; `None` when the
/// word has the same non-hyperbolic type in both.
fn sink_pair(
    base: &GroupRepresentation,
    w: &Word,
    b: &MoebiusTransform,
    t: &MoebiusTransform,
) -> Result<Option<(BoundaryPoint, BoundaryPoint)>> {
    let (cb, ct) = (b.classify(CLASSIFY_TOL), t.classify(CLASSIFY_TOL));
    if cb != ct {
        return Err(Error::TypeMismatch {
            word: base.show(w),
            base: cb,
            target: ct,
        });
    }
    Ok(match cb {
        ElementClass::Hyperbolic => Some((b.fixed_point_unchecked(true), t.fixed_point_unchecked(true))),
        ElementClass::Parabolic => Some((b.parabolic_fixed_point_unchecked(), t.parabolic_fixed_point_unchecked())),
        _ => None,
    })
}
