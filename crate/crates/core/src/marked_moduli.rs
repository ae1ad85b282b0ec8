//! Marked hyperbolic structures relative to a fixed reference
//! representation, and their two coordinate systems: the normalized
//! boundary map and the character pinned by three anchor sinks.

use rayon::prelude::*;

use crate::boundary_map::{SampledCircleMap, CLASSIFY_TOL};
use crate::error::{Error, Result};
use crate::fuchsian::{enumerate_ball, Ball, BallLimits, GroupRepresentation, Word};
use crate::moebius::{circular_order, visual_distance, BoundaryPoint, ElementClass, MoebiusTransform, Orientation};

/// Radius of the ball on which reference and target must agree in type.
pub const TYPE_CHECK_DEPTH: usize = 4;

/// Minimal pairwise sink separation of default anchors.
pub const ANCHOR_SEPARATION: f64 = 0.1;

/// A target representation, marked by sharing generators with the fixed
/// reference representation.
#[derive(Debug, Clone)]
pub struct MarkedStructure {
    reference: GroupRepresentation,
    target: GroupRepresentation,
    limits: BallLimits,
}

impl MarkedStructure {
    /// Checks that both representations use the same generators and that
    /// every word of the radius-4 ball has the same type in both.
    pub fn new(reference: GroupRepresentation, target: GroupRepresentation) -> Result<Self> {
        if reference.names() != target.names() {
            return Err(Error::GeneratorMismatch);
        }
        let limits = BallLimits::default();
        let ball = Ball::new(reference.rank(), TYPE_CHECK_DEPTH, &limits)?;
        let mismatches = ball.filter_map(&[&reference, &target], |w, m| {
            let (b, t) = (m[0].classify(CLASSIFY_TOL), m[1].classify(CLASSIFY_TOL));
            Ok((b != t).then(|| (w.clone(), b, t)))
        })?;
        if let Some((w, b, t)) = mismatches.into_iter().next() {
            return Err(Error::TypeMismatch {
                word: reference.show(&w),
                base: b,
                target: t,
            });
        }
        Ok(MarkedStructure {
            reference,
            target,
            limits,
        })
    }

    /// The reference marked by itself.
    pub fn basepoint(reference: GroupRepresentation) -> Self {
        MarkedStructure {
            target: reference.clone(),
            reference,
            limits: BallLimits::default(),
        }
    }

    pub fn with_limits(mut self, limits: BallLimits) -> Self {
        self.limits = limits;
        self
    }

    pub fn reference(&self) -> &GroupRepresentation {
        &self.reference
    }

    pub fn target(&self) -> &GroupRepresentation {
        &self.target
    }

    pub fn limits(&self) -> &BallLimits {
        &self.limits
    }

    /// The same marking with a new target on the same reference.
    pub fn retarget(&self, target: GroupRepresentation) -> Result<Self> {
        Ok(Self::new(self.reference.clone(), target)?.with_limits(self.limits))
    }

    /// Boundary map sampled on the hyperbolic words of the ball of radius
    /// `depth`, without normalization.
    pub fn rep_to_homeo(&self, depth: usize) -> Result<SampledCircleMap> {
        SampledCircleMap::from_ball(&self.reference, &self.target, depth, &self.limits)
    }

    /// The boundary map normalized to fix `0`, `1` and `∞`.
    pub fn phi_p(&self, depth: usize) -> Result<SampledCircleMap> {
        self.rep_to_homeo(depth)?.sigma1_normalize()
    }

    /// The target conjugated so that the anchor sinks sit at `0`, `1`, `∞`.
    pub fn phi_at(&self, anchors: &[Word; 3]) -> Result<Character> {
        Character::new(&self.target, anchors)
    }
}

/// A representation in the canonical position fixed by three anchor words.
#[derive(Debug, Clone)]
pub struct Character {
    rep: GroupRepresentation,
    anchors: [Word; 3],
}

impl Character {
    /// Conjugates `rep` by the inverse of the Möbius map carrying `0, 1, ∞`
    /// to the anchor sinks.
    pub fn new(rep: &GroupRepresentation, anchors: &[Word; 3]) -> Result<Self> {
        let mut sinks = [BoundaryPoint::INFINITY; 3];
        for (s, w) in sinks.iter_mut().zip(anchors) {
            let m = rep.evaluate(w)?;
            if m.classify(CLASSIFY_TOL) != ElementClass::Hyperbolic {
                return Err(Error::AnchorNotHyperbolic(rep.show(w)));
            }
            *s = m.sink()?;
        }
        let m = match circular_order(sinks[0], sinks[1], sinks[2]) {
            Orientation::Degenerate => return Err(Error::AnchorSinksDegenerate),
            Orientation::Negative => return Err(Error::AnchorOrientationNegative),
            Orientation::Positive => MoebiusTransform::from_triple(sinks[0], sinks[1], sinks[2])?,
        };
        Ok(Character {
            rep: rep.conjugate(&m.inverse()),
            anchors: anchors.clone(),
        })
    }

    pub fn representation(&self) -> &GroupRepresentation {
        &self.rep
    }

    pub fn anchors(&self) -> &[Word; 3] {
        &self.anchors
    }

    /// Largest distance from the anchor sinks to `0`, `1`, `∞`.
    pub fn anchor_defect(&self) -> Result<f64> {
        let pins = [BoundaryPoint::from_real(0.0), BoundaryPoint::from_real(1.0), BoundaryPoint::INFINITY];
        let mut worst: f64 = 0.0;
        for (w, p) in self.anchors.iter().zip(pins) {
            worst = worst.max(visual_distance(self.rep.evaluate(w)?.sink()?, p));
        }
        Ok(worst)
    }
}

/// Largest generator distance between canonical matrices.
pub fn char_distance(c1: &Character, c2: &Character) -> Result<f64> {
    if c1.anchors != c2.anchors || c1.rep.names() != c2.rep.names() {
        return Err(Error::AnchorMismatch);
    }
    c1.rep.distance(&c2.rep)
}

/// The first three hyperbolic words in shortlex order whose sinks are
/// pairwise at least [`ANCHOR_SEPARATION`] apart, ordered positively.
pub fn default_anchors(rep: &GroupRepresentation) -> Result<[Word; 3]> {
    let mut chosen: Vec<(Word, BoundaryPoint)> = Vec::with_capacity(3);
    for (w, m) in enumerate_ball(rep, TYPE_CHECK_DEPTH, &BallLimits::default())? {
        if m.classify(CLASSIFY_TOL) != ElementClass::Hyperbolic {
            continue;
        }
        let s = m.sink()?;
        if chosen.iter().all(|(_, p)| visual_distance(*p, s) > ANCHOR_SEPARATION) {
            chosen.push((w, s));
            if chosen.len() == 3 {
                break;
            }
        }
    }
    if chosen.len() < 3 {
        return Err(Error::NoAnchors);
    }
    if circular_order(chosen[0].1, chosen[1].1, chosen[2].1) == Orientation::Negative {
        chosen.swap(1, 2);
    }
    let mut it = chosen.into_iter().map(|(w, _)| w);
    Ok([it.next().unwrap(), it.next().unwrap(), it.next().unwrap()])
}

/// Per-word deviation between `F ∘ reference(γ) ∘ F⁻¹` and `target(γ)`.
#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    pub rows: Vec<(Word, f64)>,
}

impl ConsistencyReport {
    pub fn max_deviation(&self) -> f64 {
        self.rows.iter().map(|r| r.1).fold(0.0, f64::max)
    }
}

/// Reconstructs the boundary action of each word from `f` and the
/// reference, and measures it against the target on the image grid of `f`.
pub fn homeo_to_rep(
    f: &SampledCircleMap,
    reference: &GroupRepresentation,
    target: &GroupRepresentation,
    words: &[Word],
) -> Result<ConsistencyReport> {
    let inv = f.invert()?;
    let rows = words
        .iter()
        .map(|w| {
            let (b, t) = (reference.evaluate(w)?, target.evaluate(w)?);
            let graph = SampledCircleMap::mobius_graph(&b, f.xs())?;
            let r = f.compose(&graph.compose(&inv)?)?;
            let d = r
                .pairs()
                .map(|(y, ry)| visual_distance(ry, t.apply_boundary(y)))
                .fold(0.0, f64::max);
            Ok((w.clone(), d))
        })
        .collect::<Result<_>>()?;
    Ok(ConsistencyReport { rows })
}

/// One row of a convergence report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergeRow {
    pub index: usize,
    pub char_distance: f64,
    pub bmap_distance: f64,
}

/// Distances of each structure of the sequence to the limit, in both
/// coordinate systems.
pub fn converge_report(
    sequence: &[MarkedStructure],
    limit: &MarkedStructure,
    depth: usize,
    anchors: &[Word; 3],
) -> Result<Vec<ConvergeRow>> {
    if sequence.iter().any(|ms| ms.reference.names() != limit.reference.names()) {
        return Err(Error::GeneratorMismatch);
    }
    let limit_char = limit.phi_at(anchors)?;
    let limit_map = limit.phi_p(depth)?;
    sequence
        .par_iter()
        .enumerate()
        .map(|(index, ms)| {
            Ok(ConvergeRow {
                index,
                char_distance: char_distance(&ms.phi_at(anchors)?, &limit_char)?,
                bmap_distance: ms.phi_p(depth)?.sup_distance(&limit_map),
            })
        })
        .collect()
}

/// Rows `i,char_dist,bmap_dist`.
pub fn report_csv(rows: &[ConvergeRow]) -> String {
    let mut out = String::from("i,char_dist,bmap_dist\n");
    for r in rows {
        out.push_str(&format!("{},{:.17e},{:.17e}\n", r.index, r.char_distance, r.bmap_distance));
    }
    out
}
