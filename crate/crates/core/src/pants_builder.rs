//! Holonomy representations assembled from pairs of pants with
//! Fenchel–Nielsen data.
//!
//! Every pair of pants is realized by a model pair `(c0, c1)` with
//! `c0 c1 c2 = 1`, where the lengths of the three boundary curves fix the
//! traces. Glued cuffs are matched by isometries sending one cuff axis onto
//! the other with reversed orientation, aligning the feet of the seams and
//! then shifting by the twist. The fundamental group follows from the
//! gluing graph: a spanning tree identifies conjugate cuffs and every other
//! gluing contributes a stable letter. A greedy Tietze pass removes
//! redundant generators.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuchsian::{default_names, CuffData, GroupRepresentation, Word};
use crate::moebius::{BoundaryPoint, ElementClass, MoebiusTransform, DEFAULT_PARABOLIC_TOL};

/// One boundary slot of a pair of pants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cuff {
    Length { length: f64 },
    Cusp { cusp: bool },
}

impl Cuff {
    pub fn length(length: f64) -> Self {
        Cuff::Length { length }
    }

    pub fn cusp() -> Self {
        Cuff::Cusp { cusp: true }
    }

    pub fn is_cusp(&self) -> bool {
        matches!(self, Cuff::Cusp { .. })
    }

    pub fn cuff_length(&self) -> Option<f64> {
        match *self {
            Cuff::Length { length } => Some(length),
            Cuff::Cusp { .. } => None,
        }
    }

    /// `2 cosh(ℓ/2)`, or `2` for a cusp.
    pub fn trace(&self) -> f64 {
        match *self {
            Cuff::Length { length } => 2.0 * (length / 2.0).cosh(),
            Cuff::Cusp { .. } => 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pants {
    pub cuffs: [Cuff; 3],
}

/// A boundary slot, serialized as `[pants, slot]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Slot {
    pub pants: usize,
    pub slot: usize,
}

impl Slot {
    pub fn new(pants: usize, slot: usize) -> Self {
        Slot { pants, slot }
    }
}

impl From<[usize; 2]> for Slot {
    fn from(v: [usize; 2]) -> Self {
        Slot::new(v[0], v[1])
    }
}

impl From<Slot> for [usize; 2] {
    fn from(s: Slot) -> Self {
        [s.pants, s.slot]
    }
}

impl std::fmt::Display for Slot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.pants, self.slot)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gluing {
    pub from: Slot,
    pub to: Slot,
    #[serde(default)]
    pub twist: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PantsDecomposition {
    pub pants: Vec<Pants>,
    #[serde(default)]
    pub gluings: Vec<Gluing>,
}

impl PantsDecomposition {
    pub fn three_cusp_sphere() -> Self {
        PantsDecomposition {
            pants: vec![Pants {
                cuffs: [Cuff::cusp(), Cuff::cusp(), Cuff::cusp()],
            }],
            gluings: vec![],
        }
    }

    /// One pair of pants with two cuffs of length `length` glued to each
    /// other; the remaining slot is a cusp.
    pub fn punctured_torus(length: f64, twist: f64) -> Self {
        PantsDecomposition {
            pants: vec![Pants {
                cuffs: [Cuff::length(length), Cuff::length(length), Cuff::cusp()],
            }],
            gluings: vec![Gluing {
                from: Slot::new(0, 0),
                to: Slot::new(0, 1),
                twist,
            }],
        }
    }

    pub fn four_cusp_sphere(length: f64, twist: f64) -> Self {
        PantsDecomposition {
            pants: vec![
                Pants {
                    cuffs: [Cuff::cusp(), Cuff::cusp(), Cuff::length(length)],
                },
                Pants {
                    cuffs: [Cuff::length(length), Cuff::cusp(), Cuff::cusp()],
                },
            ],
            gluings: vec![Gluing {
                from: Slot::new(0, 2),
                to: Slot::new(1, 0),
                twist,
            }],
        }
    }

    /// Two pants glued along all three cuffs, slot `i` to slot `i`.
    pub fn genus_two(lengths: [f64; 3], twists: [f64; 3]) -> Self {
        let cuffs = lengths.map(Cuff::length);
        PantsDecomposition {
            pants: vec![Pants { cuffs }, Pants { cuffs }],
            gluings: (0..3)
                .map(|i| Gluing {
                    from: Slot::new(0, i),
                    to: Slot::new(1, i),
                    twist: twists[i],
                })
                .collect(),
        }
    }

    fn cuff(&self, s: Slot) -> Result<Cuff> {
        if s.slot > 2 {
            return Err(Error::InvalidGluing(format!("slot {s} has index above 2")));
        }
        self.pants
            .get(s.pants)
            .map(|p| p.cuffs[s.slot])
            .ok_or_else(|| Error::InvalidGluing(format!("slot {s} refers to a missing pants")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.pants.is_empty() {
            return Err(Error::InvalidGluing("no pants".into()));
        }
        for (p, pants) in self.pants.iter().enumerate() {
            check_pants(p, pants)?;
        }
        let mut used = vec![[false; 3]; self.pants.len()];
        for g in &self.gluings {
            if !g.twist.is_finite() {
                return Err(Error::InvalidGluing(format!("twist at {} is not finite", g.from)));
            }
            if g.from == g.to {
                return Err(Error::InvalidGluing(format!("slot {} is glued to itself", g.from)));
            }
            let (a, b) = (self.cuff(g.from)?, self.cuff(g.to)?);
            for s in [g.from, g.to] {
                if used[s.pants][s.slot] {
                    return Err(Error::InvalidGluing(format!("slot {s} appears in two gluings")));
                }
                used[s.pants][s.slot] = true;
            }
            match (a.cuff_length(), b.cuff_length()) {
                (Some(x), Some(y)) if x == y => {}
                (Some(x), Some(y)) => {
                    return Err(Error::InvalidGluing(format!(
                        "slot {} has length {x} but slot {} has length {y}",
                        g.from, g.to
                    )))
                }
                _ => {
                    let s = if a.is_cusp() { g.from } else { g.to };
                    return Err(Error::InvalidGluing(format!("slot {s} is a cusp and cannot be glued")));
                }
            }
        }
        for (p, pants) in self.pants.iter().enumerate() {
            for s in 0..3 {
                if !pants.cuffs[s].is_cusp() && !used[p][s] {
                    return Err(Error::InvalidGluing(format!("slot {} is not glued", Slot::new(p, s))));
                }
            }
        }
        let mut seen = vec![false; self.pants.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(p) = queue.pop_front() {
            for g in &self.gluings {
                for (x, y) in [(g.from, g.to), (g.to, g.from)] {
                    if x.pants == p && !seen[y.pants] {
                        seen[y.pants] = true;
                        queue.push_back(y.pants);
                    }
                }
            }
        }
        if let Some(p) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidGluing(format!("pants {p} is not connected to pants 0")));
        }
        Ok(())
    }
}

fn check_pants(p: usize, pants: &Pants) -> Result<()> {
    for (s, c) in pants.cuffs.iter().enumerate() {
        match *c {
            Cuff::Length { length } if !(length > 0.0 && length.is_finite()) => {
                return Err(Error::InvalidGluing(format!(
                    "slot {} has non-positive length {length}",
                    Slot::new(p, s)
                )))
            }
            Cuff::Cusp { cusp: false } => {
                return Err(Error::InvalidGluing(format!("slot {} has `cusp: false`", Slot::new(p, s))))
            }
            _ => {}
        }
    }
    Ok(())
}

/// The model boundary elements `c0, c1, c2` of a pair of pants, with
/// `c0 c1 c2 = 1` and `|tr ci| = 2 cosh(ℓi/2)`.
fn model_cuffs(cuffs: &[Cuff; 3]) -> Result<[MoebiusTransform; 3]> {
    let x = cuffs[0].trace();
    let y = cuffs[1].trace();
    let z = -cuffs[2].trace();
    let s = (z + (z * z - 4.0).max(0.0).sqrt()) / 2.0;
    let a = MoebiusTransform::new(x, 1.0, -1.0, 0.0)?;
    let b = MoebiusTransform::new(0.0, -s, 1.0 / s, y)?;
    let c = a.compose(&b).inverse();
    Ok([a, b, c])
}

/// A pair of pants as a free group on `A = c0`, `B = c1`; cusp slots are
/// recorded as peripheral words. Slots need not be glued.
pub fn pants_group(cuffs: [Cuff; 3]) -> Result<GroupRepresentation> {
    check_pants(0, &Pants { cuffs })?;
    let images = model_cuffs(&cuffs)?;
    let names = default_names(2);
    let words = pants_words(0);
    let peripheral = (0..3).filter(|&s| cuffs[s].is_cusp()).map(|s| words[s].clone()).collect();
    GroupRepresentation::new(names, vec![images[0], images[1]], vec![], peripheral)
}

fn pants_words(p: usize) -> [Word; 3] {
    let c0 = Word::generator(2 * p);
    let c1 = Word::generator(2 * p + 1);
    let c2 = c0.concat(&c1).inverse();
    [c0, c1, c2]
}

/// Frame sending `0`, `∞`, `i` to the source, sink and seam foot of cuff
/// `s`. The seam runs to the next cuff, or to its cusp.
fn cuff_frame(model: &[MoebiusTransform; 3], s: usize) -> Result<MoebiusTransform> {
    let c = &model[s];
    let frame = MoebiusTransform::axis_frame(c.source()?, c.sink()?)?;
    let other = &model[(s + 1) % 3];
    let (u, v) = if other.classify(DEFAULT_PARABOLIC_TOL) == ElementClass::Hyperbolic {
        (other.source()?, other.sink()?)
    } else {
        let p = other.fixed_point_unchecked(true);
        (p, p)
    };
    let back = frame.inverse();
    let real = |p: BoundaryPoint| back.apply_boundary(p).to_real().unwrap_or(f64::INFINITY);
    let r = (real(u) * real(v)).abs().sqrt();
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidGluing("degenerate pants geometry".into()));
    }
    let q = r.sqrt();
    Ok(frame.compose(&MoebiusTransform::new(q, 0.0, 0.0, 1.0 / q)?))
}

/// Isometry carrying cuff `v` of one pants onto cuff `u` of another with
/// reversed orientation, seam feet aligned and shifted by `twist` towards
/// the source of `u`.
fn gluing_isometry(k_u: &MoebiusTransform, k_v: &MoebiusTransform, twist: f64) -> Result<MoebiusTransform> {
    let flip = MoebiusTransform::new(0.0, -1.0, 1.0, 0.0)?;
    let e = (-twist / 2.0).exp();
    let shift = MoebiusTransform::new(e, 0.0, 0.0, 1.0 / e)?;
    Ok(k_u.compose(&shift).compose(&flip.compose(&k_v.inverse())))
}

struct Presentation {
    relators: Vec<Word>,
    /// Expression of every original generator in the surviving ones.
    expressions: Vec<Word>,
    alive: Vec<bool>,
}

/// Repeatedly removes the highest-index generator occurring exactly once
/// in some relator.
fn tietze(generators: usize, relators: Vec<Word>) -> Presentation {
    let mut relators: Vec<Word> = relators.into_iter().map(|r| r.cyclically_reduced()).collect();
    let mut expressions: Vec<Word> = (0..generators).map(Word::generator).collect();
    let mut alive = vec![true; generators];
    loop {
        let pick = (0..generators).rev().filter(|&g| alive[g]).find_map(|g| {
            relators
                .iter()
                .position(|r| r.occurrences(g) == 1)
                .map(|ri| (g, ri))
        });
        let Some((g, ri)) = pick else { break };
        let r = relators.remove(ri);
        let at = r.letters().iter().position(|l| l.generator() == g).expect("occurs once");
        let before = Word::from_letters(r.letters()[..at].iter().copied());
        let after = Word::from_letters(r.letters()[at + 1..].iter().copied());
        let mut value = before.inverse().concat(&after.inverse());
        if r.letters()[at].is_inverse() {
            value = value.inverse();
        }
        let mut images: Vec<Word> = (0..generators).map(Word::generator).collect();
        images[g] = value;
        for e in &mut expressions {
            *e = e.substitute(&images);
        }
        relators = relators
            .iter()
            .map(|r| r.substitute(&images).cyclically_reduced())
            .filter(|r| !r.is_empty())
            .collect();
        alive[g] = false;
    }
    Presentation {
        relators,
        expressions,
        alive,
    }
}

impl PantsDecomposition {
    /// The holonomy representation of the glued surface.
    ///
    /// Generator names are `A, B, C, …` in order of the surviving original
    /// generators: pants cuffs `c0, c1` of each pants, then one stable letter
    /// per gluing outside the spanning tree. Cusps become peripheral words
    /// and every gluing is recorded as twist metadata on its first cuff.
    pub fn build_representation(&self) -> Result<GroupRepresentation> {
        self.validate()?;
        let n = self.pants.len();
        let models: Vec<[MoebiusTransform; 3]> = self.pants.iter().map(|p| model_cuffs(&p.cuffs)).collect::<Result<_>>()?;
        let frame = |s: Slot| cuff_frame(&models[s.pants], s.slot);

        // spanning tree by breadth-first search from pants 0
        let mut placement: Vec<Option<MoebiusTransform>> = vec![None; n];
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut tree_edge: Vec<Option<(Slot, Slot)>> = vec![None; self.gluings.len()];
        placement[0] = Some(MoebiusTransform::IDENTITY);
        let mut queue = VecDeque::from([0]);
        while let Some(p) = queue.pop_front() {
            for (gi, g) in self.gluings.iter().enumerate() {
                if tree_edge[gi].is_some() {
                    continue;
                }
                for (u, v) in [(g.from, g.to), (g.to, g.from)] {
                    if u.pants == p && placement[v.pants].is_none() {
                        let h = gluing_isometry(&frame(u)?, &frame(v)?, g.twist)?;
                        placement[v.pants] = Some(placement[p].expect("placed").compose(&h));
                        parent[v.pants] = Some(gi);
                        tree_edge[gi] = Some((u, v));
                        queue.push_back(v.pants);
                        break;
                    }
                }
            }
        }
        let placement: Vec<MoebiusTransform> = placement.into_iter().map(|p| p.expect("connected")).collect();

        let mut images = Vec::with_capacity(2 * n);
        for (p, model) in models.iter().enumerate() {
            images.push(model[0].conjugate_by(&placement[p]));
            images.push(model[1].conjugate_by(&placement[p]));
        }
        let mut relators = Vec::new();
        let mut stable: Vec<Option<usize>> = vec![None; self.gluings.len()];
        let mut edges: Vec<(Slot, Slot)> = Vec::with_capacity(self.gluings.len());
        for (gi, g) in self.gluings.iter().enumerate() {
            let (u, v) = tree_edge[gi].unwrap_or((g.from, g.to));
            edges.push((u, v));
            let cu = pants_words(u.pants)[u.slot].clone();
            let cv = pants_words(v.pants)[v.slot].clone();
            if tree_edge[gi].is_some() {
                relators.push(cv.concat(&cu));
            } else {
                let h = gluing_isometry(&frame(u)?, &frame(v)?, g.twist)?;
                let t = placement[u.pants].compose(&h).compose(&placement[v.pants].inverse());
                let letter = Word::generator(images.len());
                stable[gi] = Some(images.len());
                images.push(t);
                relators.push(letter.concat(&cv).concat(&letter.inverse()).concat(&cu));
            }
        }

        let total = images.len();
        let pres = tietze(total, relators);
        let survivors: Vec<usize> = (0..total).filter(|&g| pres.alive[g]).collect();
        let mut renumber: Vec<Word> = vec![Word::identity(); total];
        for (new, &old) in survivors.iter().enumerate() {
            renumber[old] = Word::generator(new);
        }
        let express = |w: &Word| w.substitute(&pres.expressions).substitute(&renumber);

        let names = default_names(survivors.len());
        let surviving_images = survivors.iter().map(|&g| images[g]).collect();
        let relators = pres.relators.iter().map(|r| r.substitute(&renumber)).collect();
        let mut peripheral = Vec::new();
        for (p, pants) in self.pants.iter().enumerate() {
            for s in 0..3 {
                if pants.cuffs[s].is_cusp() {
                    peripheral.push(express(&pants_words(p)[s]));
                }
            }
        }

        let in_subtree = |root: usize, p: usize| {
            let mut q = p;
            loop {
                if q == root {
                    return true;
                }
                match parent[q] {
                    Some(gi) => q = tree_edge[gi].expect("tree edge").0.pants,
                    None => return false,
                }
            }
        };
        let owner = |g: usize| -> Option<usize> { (g < 2 * n).then_some(g / 2) };
        let stable_edge = |g: usize| stable.iter().position(|s| *s == Some(g));
        let mut cuffs = Vec::with_capacity(self.gluings.len());
        for (gi, g) in self.gluings.iter().enumerate() {
            let (u, v) = edges[gi];
            let length = self.cuff(g.from)?.cuff_length().expect("glued slots have lengths");
            let mut left = Vec::with_capacity(survivors.len());
            let mut right = Vec::with_capacity(survivors.len());
            for &old in &survivors {
                let (l, r) = match (tree_edge[gi], owner(old)) {
                    (Some(_), Some(p)) => {
                        let inside = in_subtree(v.pants, p);
                        (inside, inside)
                    }
                    (Some(_), None) => {
                        let (a, b) = edges[stable_edge(old).expect("stable letter")];
                        (in_subtree(v.pants, a.pants), in_subtree(v.pants, b.pants))
                    }
                    (None, _) => (stable[gi] == Some(old), false),
                };
                left.push(l);
                right.push(r);
            }
            cuffs.push(CuffData {
                word: express(&pants_words(u.pants)[u.slot]),
                length,
                left,
                right,
            });
        }

        GroupRepresentation::new(names, surviving_images, relators, peripheral)?.with_cuffs(cuffs)
    }
}

/// Changes the twist along a recorded cuff by `delta`.
///
/// Generators flagged on the moving side are conjugated, or multiplied on
/// one side, by the translation of length `delta` along the cuff axis
/// towards its source. Either orientation of the cuff word selects the same
/// gluing.
pub fn twist_deform(rep: &GroupRepresentation, cuff: &Word, delta: f64) -> Result<GroupRepresentation> {
    let inverse = cuff.inverse();
    let data = rep
        .cuffs()
        .iter()
        .find(|c| c.word == *cuff || c.word == inverse)
        .ok_or_else(|| Error::UnknownCuff(rep.show(cuff)))?;
    let c = rep.evaluate(&data.word)?;
    let t = MoebiusTransform::translation(c.sink()?, c.source()?, delta)?;
    let t_inv = t.inverse();
    let images = rep
        .images()
        .iter()
        .enumerate()
        .map(|(g, m)| {
            let mut out = *m;
            if data.left[g] {
                out = t.compose(&out);
            }
            if data.right[g] {
                out = out.compose(&t_inv);
            }
            out
        })
        .collect();
    rep.with_images(images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::commutator_trace;

    fn gamma2() -> (MoebiusTransform, MoebiusTransform) {
        (
            MoebiusTransform::new(1.0, 2.0, 0.0, 1.0).unwrap(),
            MoebiusTransform::new(1.0, 0.0, -2.0, 1.0).unwrap(),
        )
    }

    #[test]
    fn three_cusp_sphere_is_conjugate_to_level_two() {
        let rep = PantsDecomposition::three_cusp_sphere().build_representation().unwrap();
        assert_eq!(rep.rank(), 2);
        assert!(rep.is_free());
        assert_eq!(rep.peripheral_words().len(), 3);
        let (a, b) = (rep.images()[0], rep.images()[1]);
        let ab = a.compose(&b);
        for m in [a, b, ab] {
            assert!((m.trace().abs() - 2.0).abs() < 1e-12);
        }
        // σ sends the fixed points of A, B, AB to those of the level-two pair.
        let fix = |m: &MoebiusTransform| m.fixed_point_unchecked(true);
        let (ga, gb) = gamma2();
        let model = MoebiusTransform::from_triple(fix(&ga), fix(&gb), fix(&ga.compose(&gb))).unwrap();
        let ours = MoebiusTransform::from_triple(fix(&a), fix(&b), fix(&ab)).unwrap();
        let sigma = model.compose(&ours.inverse());
        assert!(a.conjugate_by(&sigma).distance(&ga) < 1e-9);
        assert!(b.conjugate_by(&sigma).distance(&gb) < 1e-9);
    }

    #[test]
    fn single_pants_cuff_traces() {
        let rep = pants_group([Cuff::length(1.0); 3]).unwrap();
        let expected = 2.0 * 0.5f64.cosh();
        assert!((expected - 2.2552519304127614).abs() < 1e-12);
        for w in ["A", "B", "A B"] {
            let m = rep.evaluate(&rep.parse_word(w).unwrap()).unwrap();
            assert!((m.trace().abs() - expected).abs() < 1e-12);
            assert!((m.translation_length().unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn punctured_torus_presentation() {
        for &(l, t) in &[(0.5, 0.0), (1.0, 0.3), (2.0, 2.0), (1.0, -0.7)] {
            let rep = PantsDecomposition::punctured_torus(l, t).build_representation().unwrap();
            assert_eq!(rep.rank(), 2);
            assert!(rep.is_free());
            assert_eq!(rep.show(&rep.peripheral_words()[0]), "B' A B A'");
            let (a, b) = (rep.images()[0], rep.images()[1]);
            assert!((commutator_trace(&a, &b) + 2.0).abs() < 1e-9);
            let (ta, tb, tab) = (a.trace(), b.trace(), a.compose(&b).trace());
            assert!((ta * ta + tb * tb + tab * tab - ta * tb * tab).abs() < 1e-8);
            assert!((a.translation_length().unwrap() - l).abs() < 1e-9);
            assert_eq!(rep.show(&rep.cuffs()[0].word), "A");
        }
    }

    #[test]
    fn genus_two_presentation() {
        let pd = PantsDecomposition::genus_two([1.0, 1.5, 2.0], [0.0, 0.1, -0.4]);
        let rep = pd.build_representation().unwrap();
        assert_eq!(rep.rank(), 4);
        assert_eq!(rep.relators().len(), 1);
        assert_eq!(rep.relators()[0].len(), 8);
        for c in rep.cuffs() {
            let m = rep.evaluate(&c.word).unwrap();
            assert!((m.trace().abs() - 2.0 * (c.length / 2.0).cosh()).abs() < 1e-9);
        }
    }

    #[test]
    fn four_cusp_sphere_is_free_of_rank_three() {
        let rep = PantsDecomposition::four_cusp_sphere(1.0, 0.2).build_representation().unwrap();
        assert_eq!(rep.rank(), 3);
        assert!(rep.is_free());
        assert_eq!(rep.peripheral_words().len(), 4);
    }

    #[test]
    fn twist_deform_matches_rebuild() {
        let cases = [
            PantsDecomposition::punctured_torus(1.0, 0.2),
            PantsDecomposition::four_cusp_sphere(1.3, -0.1),
            PantsDecomposition::genus_two([1.0, 1.5, 2.0], [0.0, 0.1, -0.4]),
        ];
        for pd in cases {
            let rep = pd.build_representation().unwrap();
            for (gi, cuff) in rep.cuffs().iter().enumerate() {
                let mut shifted = pd.clone();
                shifted.gluings[gi].twist += 0.37;
                let rebuilt = shifted.build_representation().unwrap();
                let deformed = twist_deform(&rep, &cuff.word, 0.37).unwrap();
                assert!(deformed.distance(&rebuilt).unwrap() < 1e-9, "gluing {gi}");
                let before = rep.evaluate(&cuff.word).unwrap().trace();
                let after = deformed.evaluate(&cuff.word).unwrap().trace();
                assert!((before - after).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn twist_deform_edge_cases() {
        let rep = PantsDecomposition::punctured_torus(1.0, 0.0).build_representation().unwrap();
        let a = rep.parse_word("A").unwrap();
        assert!(twist_deform(&rep, &a, 0.0).unwrap().distance(&rep).unwrap() < 1e-12);
        assert!(matches!(
            twist_deform(&rep, &rep.parse_word("B").unwrap(), 0.1),
            Err(Error::UnknownCuff(_))
        ));
    }

    #[test]
    fn invalid_gluings() {
        let mut pd = PantsDecomposition::punctured_torus(1.0, 0.0);
        pd.pants[0].cuffs[1] = Cuff::length(1.1);
        assert!(matches!(pd.validate(), Err(Error::InvalidGluing(m)) if m.contains("[0, 1]")));
        let mut pd = PantsDecomposition::punctured_torus(1.0, 0.0);
        pd.gluings.clear();
        assert!(matches!(pd.validate(), Err(Error::InvalidGluing(m)) if m.contains("not glued")));
        let mut pd = PantsDecomposition::four_cusp_sphere(1.0, 0.0);
        pd.gluings[0].to = Slot::new(1, 1);
        assert!(pd.validate().is_err());
        let pd = PantsDecomposition {
            pants: vec![
                Pants {
                    cuffs: [Cuff::cusp(); 3],
                },
                Pants {
                    cuffs: [Cuff::cusp(); 3],
                },
            ],
            gluings: vec![],
        };
        assert!(matches!(pd.validate(), Err(Error::InvalidGluing(m)) if m.contains("connected")));
    }

    #[test]
    fn serde_format() {
        let text = r#"{"pants": [{"cuffs": [{"length": 1.0}, {"length": 1.0}, {"cusp": true}]}],
                       "gluings": [{"from": [0, 0], "to": [0, 1], "twist": 0.3}]}"#;
        let pd: PantsDecomposition = serde_json::from_str(text).unwrap();
        assert_eq!(pd, PantsDecomposition::punctured_torus(1.0, 0.3));
    }
}
