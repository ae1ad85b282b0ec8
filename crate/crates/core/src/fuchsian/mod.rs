//! Finitely generated groups of Möbius transformations.

mod ball;
mod sinks;
mod word;

pub use ball::{enumerate_ball, Ball, BallLimits};
pub use sinks::{max_gap, sink_sample, sink_sample_with, SinkSample, SAMPLE_CLASSIFY_TOL, SINK_MERGE_TOL};
pub use word::{default_names, Letter, Word, WordDisplay};

use crate::error::{Error, Result};
use crate::moebius::{ElementClass, MoebiusTransform};

/// Tolerance for relators and peripheral words of a representation.
pub const REPRESENTATION_TOL: f64 = 1e-6;

/// Twist bookkeeping for one glued cuff.
///
/// A twist by `t` along the cuff replaces each generator image `g` by
/// `T^l · g · T^-r` where `T` translates by `t` along the cuff axis and
/// `l, r ∈ {0, 1}` are the per-generator flags.
#[derive(Debug, Clone, PartialEq)]
pub struct CuffData {
    pub word: Word,
    pub length: f64,
    pub left: Vec<bool>,
    pub right: Vec<bool>,
}

/// A homomorphism from a finitely presented group to PSL(2,ℝ).
#[derive(Debug, Clone)]
pub struct GroupRepresentation {
    names: Vec<String>,
    images: Vec<MoebiusTransform>,
    inverses: Vec<MoebiusTransform>,
    relators: Vec<Word>,
    peripheral: Vec<Word>,
    cuffs: Vec<CuffData>,
}

impl GroupRepresentation {
    /// Builds a representation, checking that relators evaluate to the
    /// identity and peripheral words are parabolic.
    pub fn new(
        names: Vec<String>,
        images: Vec<MoebiusTransform>,
        relators: Vec<Word>,
        peripheral: Vec<Word>,
    ) -> Result<Self> {
        let rep = Self::unchecked(names, images, relators, peripheral)?;
        rep.validate()?;
        Ok(rep)
    }

    fn unchecked(
        names: Vec<String>,
        images: Vec<MoebiusTransform>,
        relators: Vec<Word>,
        peripheral: Vec<Word>,
    ) -> Result<Self> {
        if names.len() != images.len() || names.is_empty() {
            return Err(Error::InvalidRepresentation(format!(
                "{} names for {} images",
                names.len(),
                images.len()
            )));
        }
        let inverses = images.iter().map(|m| m.inverse()).collect();
        let rep = GroupRepresentation {
            names,
            images,
            inverses,
            relators,
            peripheral,
            cuffs: Vec::new(),
        };
        for w in rep.relators.iter().chain(&rep.peripheral) {
            rep.check_letters(w)?;
        }
        Ok(rep)
    }

    fn validate(&self) -> Result<()> {
        for r in &self.relators {
            let m = self.evaluate(r)?;
            let d = m.distance(&MoebiusTransform::IDENTITY);
            if d > REPRESENTATION_TOL {
                return Err(Error::InvalidRepresentation(format!(
                    "relator `{}` is {d:e} away from the identity",
                    self.show(r)
                )));
            }
        }
        for p in &self.peripheral {
            let class = self.evaluate(p)?.classify(REPRESENTATION_TOL);
            if class != ElementClass::Parabolic {
                return Err(Error::InvalidRepresentation(format!(
                    "peripheral word `{}` is {class}",
                    self.show(p)
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn with_cuffs(mut self, cuffs: Vec<CuffData>) -> Result<Self> {
        for c in &cuffs {
            self.check_letters(&c.word)?;
            if c.left.len() != self.rank() || c.right.len() != self.rank() {
                return Err(Error::InvalidRepresentation("cuff side flags do not match the rank".into()));
            }
        }
        self.cuffs = cuffs;
        Ok(self)
    }

    fn check_letters(&self, w: &Word) -> Result<()> {
        match w.letters().iter().find(|l| l.generator() >= self.rank()) {
            Some(l) => Err(Error::UnknownGenerator(format!("g{}", l.generator()))),
            None => Ok(()),
        }
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn images(&self) -> &[MoebiusTransform] {
        &self.images
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn peripheral_words(&self) -> &[Word] {
        &self.peripheral
    }

    pub fn cuffs(&self) -> &[CuffData] {
        &self.cuffs
    }

    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }

    pub(crate) fn letter_image(&self, l: Letter) -> &MoebiusTransform {
        if l.is_inverse() {
            &self.inverses[l.generator()]
        } else {
            &self.images[l.generator()]
        }
    }

    /// Product of the letter images from left to right.
    pub fn evaluate(&self, w: &Word) -> Result<MoebiusTransform> {
        self.check_letters(w)?;
        Ok(w
            .letters()
            .iter()
            .fold(MoebiusTransform::IDENTITY, |acc, &l| acc.compose(self.letter_image(l))))
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        Word::parse(text, &self.names)
    }

    pub fn show(&self, w: &Word) -> String {
        w.display(&self.names).to_string()
    }

    /// Same group data, new generator images. Relators and peripheral words
    /// are re-checked.
    pub fn with_images(&self, images: Vec<MoebiusTransform>) -> Result<Self> {
        let mut rep = Self::new(self.names.clone(), images, self.relators.clone(), self.peripheral.clone())?;
        rep.cuffs = self.cuffs.clone();
        Ok(rep)
    }

    /// `γ ↦ σ γ σ⁻¹` on every generator.
    pub fn conjugate(&self, sigma: &MoebiusTransform) -> Self {
        let images: Vec<_> = self.images.iter().map(|g| g.conjugate_by(sigma)).collect();
        let inverses = images.iter().map(|m| m.inverse()).collect();
        GroupRepresentation {
            images,
            inverses,
            ..self.clone()
        }
    }

    /// Largest generator distance to another representation on the same
    /// generators.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.names != other.names {
            return Err(Error::GeneratorMismatch);
        }
        Ok(self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn sphere_rep() -> GroupRepresentation {
        let a = MoebiusTransform::new(1.0, 2.0, 0.0, 1.0).unwrap();
        let b = MoebiusTransform::new(1.0, 0.0, -2.0, 1.0).unwrap();
        let names = default_names(2);
        let peripheral = vec![
            Word::parse("A", &names).unwrap(),
            Word::parse("B", &names).unwrap(),
            Word::parse("B' A'", &names).unwrap(),
        ];
        GroupRepresentation::new(names, vec![a, b], vec![], peripheral).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let rep = sphere_rep();
        let e = rep.evaluate(&Word::identity()).unwrap();
        assert_eq!(e, MoebiusTransform::IDENTITY);
        assert_eq!(rep.evaluate(&rep.parse_word("A").unwrap()).unwrap(), rep.images()[0]);
        let w = rep.parse_word("A A' B").unwrap();
        assert!(rep.evaluate(&w).unwrap().distance(&rep.images()[1]) < 1e-15);
        let bad = Word::generator(5);
        assert!(matches!(rep.evaluate(&bad), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn invariants_checked_on_construction() {
        let names = default_names(2);
        let a = MoebiusTransform::new(2.0, 0.0, 0.0, 0.5).unwrap();
        let b = MoebiusTransform::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let rel = vec![Word::parse("A B", &names).unwrap()];
        assert!(GroupRepresentation::new(names.clone(), vec![a, b], rel, vec![]).is_err());
        let per = vec![Word::parse("A", &names).unwrap()];
        assert!(GroupRepresentation::new(names.clone(), vec![a, b], vec![], per).is_err());
        let per = vec![Word::parse("B", &names).unwrap()];
        assert!(GroupRepresentation::new(names, vec![a, b], vec![], per).is_ok());
    }

    fn arb_word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(0..2 * rank, 0..=max_len)
            .prop_map(|v| Word::from_letters(v.into_iter().map(Letter::from_index)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn evaluation_is_a_homomorphism(u in arb_word(2, 8), v in arb_word(2, 8)) {
            let rep = sphere_rep();
            let uv = rep.evaluate(&u.concat(&v)).unwrap();
            let prod = rep.evaluate(&u).unwrap().compose(&rep.evaluate(&v).unwrap());
            let scale = uv.entries().iter().fold(1.0f64, |m, x| m.max(x.abs()));
            prop_assert!(uv.distance(&prod) < 1e-8 * scale);
        }
    }
}
