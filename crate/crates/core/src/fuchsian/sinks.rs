use std::f64::consts::TAU;

use super::ball::{Ball, BallLimits};
use super::word::Word;
use super::GroupRepresentation;
use crate::error::{Error, Result};
use crate::moebius::{forward_gap, BoundaryPoint, ElementClass};

/// Classification tolerance used when sampling sinks from word balls.
pub const SAMPLE_CLASSIFY_TOL: f64 = 1e-6;

/// Sinks closer than this in angle are treated as one point.
pub const SINK_MERGE_TOL: f64 = 1e-10;

/// Sinks of the hyperbolic elements of a word ball, sorted by angle.
#[derive(Debug, Clone)]
pub struct SinkSample {
    depth: usize,
    entries: Vec<(Word, BoundaryPoint)>,
}

impl SinkSample {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn entries(&self) -> &[(Word, BoundaryPoint)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = BoundaryPoint> + '_ {
        self.entries.iter().map(|e| e.1)
    }

    /// Builds a sample from arbitrary entries, sorting and merging
    /// coincident sinks onto their shortlex-least word.
    pub fn from_entries(depth: usize, mut entries: Vec<(Word, BoundaryPoint)>) -> Self {
        entries.sort_by(|a, b| a.1.angle().total_cmp(&b.1.angle()).then_with(|| a.0.shortlex_cmp(&b.0)));
        let mut merged: Vec<(Word, BoundaryPoint)> = Vec::with_capacity(entries.len());
        let mut last_angle = f64::NEG_INFINITY;
        for (w, p) in entries {
            let close = p.angle() - last_angle < SINK_MERGE_TOL;
            last_angle = p.angle();
            match merged.last_mut() {
                Some(top) if close => {
                    if w.shortlex_cmp(&top.0).is_lt() {
                        *top = (w, p);
                    }
                }
                _ => merged.push((w, p)),
            }
        }
        if merged.len() > 1 {
            let first = merged[0].1;
            let last = merged[merged.len() - 1].1;
            if forward_gap(last, first) < SINK_MERGE_TOL {
                let (w, p) = merged.pop().expect("nonempty");
                if w.shortlex_cmp(&merged[0].0).is_lt() {
                    merged[0] = (w, p);
                }
            }
        }
        merged.sort_by(|a, b| a.1.angle().total_cmp(&b.1.angle()));
        SinkSample { depth, entries: merged }
    }
}

/// Sinks of all hyperbolic words of length at most `depth`, with default
/// ball limits.
pub fn sink_sample(rep: &GroupRepresentation, depth: usize) -> Result<SinkSample> {
    sink_sample_with(rep, depth, &BallLimits::default(), SAMPLE_CLASSIFY_TOL)
}

pub fn sink_sample_with(
    rep: &GroupRepresentation,
    depth: usize,
    limits: &BallLimits,
    tol: f64,
) -> Result<SinkSample> {
    let ball = Ball::new(rep.rank(), depth, limits)?;
    let entries = ball.filter_map(&[rep], |w, m| match m[0].classify(tol) {
        ElementClass::Hyperbolic => Ok(Some((w.clone(), m[0].fixed_point_unchecked(true)))),
        ElementClass::Elliptic => Err(Error::EllipticFound(rep.show(w))),
        _ => Ok(None),
    })?;
    Ok(SinkSample::from_entries(depth, entries))
}

/// Largest angular gap between circularly consecutive sinks.
pub fn max_gap(sample: &SinkSample) -> Result<f64> {
    max_circular_gap(sample.points())
}

pub(crate) fn max_circular_gap<I: IntoIterator<Item = BoundaryPoint>>(sorted: I) -> Result<f64> {
    let mut it = sorted.into_iter();
    let first = it.next().ok_or(Error::EmptySample)?;
    let mut prev = first;
    let mut gap: f64 = 0.0;
    for p in it {
        gap = gap.max(p.angle() - prev.angle());
        prev = p;
    }
    let closing = first.angle() + TAU - prev.angle();
    Ok(gap.max(closing))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::default_names;
    use crate::moebius::{visual_distance, MoebiusTransform};
    use std::f64::consts::PI;

    fn cyclic() -> GroupRepresentation {
        let a = MoebiusTransform::new(2.0, 0.0, 0.0, 0.5).unwrap();
        GroupRepresentation::new(default_names(1), vec![a], vec![], vec![]).unwrap()
    }

    fn sphere() -> GroupRepresentation {
        let a = MoebiusTransform::new(1.0, 2.0, 0.0, 1.0).unwrap();
        let b = MoebiusTransform::new(1.0, 0.0, -2.0, 1.0).unwrap();
        GroupRepresentation::new(default_names(2), vec![a, b], vec![], vec![]).unwrap()
    }

    #[test]
    fn cyclic_group_has_two_sinks() {
        let s = sink_sample(&cyclic(), 3).unwrap();
        assert_eq!(s.len(), 2);
        let pts: Vec<_> = s.points().collect();
        assert!(visual_distance(pts[0], BoundaryPoint::INFINITY) < 1e-12);
        assert!(visual_distance(pts[1], BoundaryPoint::from_real(0.0)) < 1e-12);
        let names = default_names(1);
        assert_eq!(s.entries()[0].0.display(&names).to_string(), "A");
        assert_eq!(s.entries()[1].0.display(&names).to_string(), "A'");
        assert!((max_gap(&s).unwrap() - PI).abs() < 1e-12);
    }

    #[test]
    fn three_cusp_sphere_samples() {
        let rep = sphere();
        assert!(sink_sample(&rep, 1).unwrap().is_empty());
        let s = sink_sample(&rep, 2).unwrap();
        // A B' = [[1,2],[0,1]]·[[1,0],[2,1]] = [[5,2],[2,1]] has trace 6.
        let ab_inv = rep.parse_word("A B'").unwrap();
        let expected = rep.evaluate(&ab_inv).unwrap().sink().unwrap();
        assert!((expected.to_real().unwrap() - (1.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!(s.points().any(|p| visual_distance(p, expected) < 1e-12));
        // A B has trace -2 and is parabolic, so its sink is absent.
        let ab = rep.evaluate(&rep.parse_word("A B").unwrap()).unwrap();
        assert_eq!(ab.classify(1e-9), ElementClass::Parabolic);
    }

    #[test]
    fn elliptic_is_fatal() {
        let r = MoebiusTransform::new((PI / 8.0).cos(), -(PI / 8.0).sin(), (PI / 8.0).sin(), (PI / 8.0).cos()).unwrap();
        let rep = GroupRepresentation::new(default_names(1), vec![r], vec![], vec![]).unwrap();
        assert!(matches!(sink_sample(&rep, 2), Err(Error::EllipticFound(_))));
    }

    #[test]
    fn gaps() {
        let one = SinkSample::from_entries(1, vec![(Word::generator(0), BoundaryPoint::from_angle(1.0))]);
        assert!((max_gap(&one).unwrap() - TAU).abs() < 1e-15);
        let empty = SinkSample::from_entries(1, vec![]);
        assert!(matches!(max_gap(&empty), Err(Error::EmptySample)));
    }

    #[test]
    fn merging_keeps_shortlex_least() {
        let p = BoundaryPoint::from_angle(2.0);
        let q = BoundaryPoint::from_angle(2.0 + 1e-12);
        let long = Word::generator(0).pow(2);
        let short = Word::generator(1);
        let s = SinkSample::from_entries(1, vec![(long, p), (short.clone(), q)]);
        assert_eq!(s.len(), 1);
        assert_eq!(s.entries()[0].0, short);
        let wrap = SinkSample::from_entries(
            1,
            vec![
                (Word::generator(0).pow(2), BoundaryPoint::from_angle(TAU - 1e-12)),
                (Word::generator(0), BoundaryPoint::from_angle(0.0)),
                (Word::generator(1), BoundaryPoint::from_angle(1.0)),
            ],
        );
        assert_eq!(wrap.len(), 2);
        assert_eq!(wrap.entries()[0].0, Word::generator(0));
    }

    #[test]
    fn sample_is_group_invariant() {
        let rep = sphere();
        let s = sink_sample(&rep, 6).unwrap();
        for (g, w) in [("A", "A B'"), ("B", "A' B"), ("A B'", "A' B")] {
            let g = rep.parse_word(g).unwrap();
            let w = rep.parse_word(w).unwrap();
            let conj = g.concat(&w).concat(&g.inverse());
            assert!(conj.len() <= 6);
            let moved = rep.evaluate(&g).unwrap().apply_boundary(rep.evaluate(&w).unwrap().sink().unwrap());
            assert!(s.points().any(|p| visual_distance(p, moved) < 1e-8));
        }
    }
}
