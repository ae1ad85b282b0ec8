//! Mapping classes as automorphisms of the surface group, acting on marked
//! structures by changing the marking.

use crate::boundary_map::SampledCircleMap;
use crate::error::{Error, Result};
use crate::fuchsian::{BallLimits, GroupRepresentation, Word};
use crate::marked_moduli::MarkedStructure;
use crate::moebius::{ElementClass, MoebiusTransform};

/// Tolerance for numerical automorphism checks.
pub const AUTOMORPHISM_TOL: f64 = 1e-7;

/// An automorphism `ψ_*` of the surface group together with its inverse,
/// both given by generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingClass {
    images: Vec<Word>,
    inverse_images: Vec<Word>,
}

fn gen(g: usize) -> Word {
    Word::generator(g)
}

impl MappingClass {
    pub fn new(images: Vec<Word>, inverse_images: Vec<Word>) -> Result<Self> {
        if images.len() != inverse_images.len() {
            return Err(Error::InvalidAutomorphism(format!(
                "{} images but {} inverse images",
                images.len(),
                inverse_images.len()
            )));
        }
        Ok(MappingClass { images, inverse_images })
    }

    pub fn identity(rank: usize) -> Self {
        let ids: Vec<Word> = (0..rank).map(gen).collect();
        MappingClass {
            images: ids.clone(),
            inverse_images: ids,
        }
    }

    /// Torus twist `A ↦ A`, `B ↦ B A`.
    pub fn torus_twist_a() -> Self {
        let (a, b) = (gen(0), gen(1));
        MappingClass {
            images: vec![a.clone(), b.concat(&a)],
            inverse_images: vec![a.clone(), b.concat(&a.inverse())],
        }
    }

    /// Torus twist `A ↦ A B⁻¹`, `B ↦ B`.
    pub fn torus_twist_b() -> Self {
        let (a, b) = (gen(0), gen(1));
        MappingClass {
            images: vec![a.concat(&b.inverse()), b.clone()],
            inverse_images: vec![a.concat(&b), b],
        }
    }

    /// Conjugation `γ ↦ w γ w⁻¹`.
    pub fn inner(rank: usize, w: &Word) -> Self {
        let conj = |u: &Word| (0..rank).map(|g| u.concat(&gen(g)).concat(&u.inverse())).collect();
        MappingClass {
            images: conj(w),
            inverse_images: conj(&w.inverse()),
        }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[Word] {
        &self.inverse_images
    }

    pub fn inverse(&self) -> Self {
        MappingClass {
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        MappingClass {
            images: other.images.iter().map(|w| w.substitute(&self.images)).collect(),
            inverse_images: self
                .inverse_images
                .iter()
                .map(|w| w.substitute(&other.inverse_images))
                .collect(),
        }
    }

    /// `ψ_*(w)`.
    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }

    /// Checks the class against a representation of the group: the two
    /// image lists must be mutually inverse, relators must be respected and
    /// peripheral words must go to peripheral classes.
    pub fn validate(&self, reference: &GroupRepresentation) -> Result<()> {
        let rank = reference.rank();
        let invalid = |msg: String| Err(Error::InvalidAutomorphism(msg));
        if self.rank() != rank {
            return invalid(format!("class has rank {}, group has rank {rank}", self.rank()));
        }
        if self.images.iter().chain(&self.inverse_images).any(|w| w.letters().iter().any(|l| l.generator() >= rank)) {
            return invalid("image uses an unknown generator".into());
        }
        for g in 0..rank {
            let name = &reference.names()[g];
            let there = self.inverse_images[g].substitute(&self.images);
            let back = self.images[g].substitute(&self.inverse_images);
            if reference.is_free() {
                if there != gen(g) || back != gen(g) {
                    return invalid(format!("images and inverse images are not inverse on `{name}`"));
                }
            } else {
                let target = reference.images()[g];
                for w in [&there, &back] {
                    if reference.evaluate(w)?.distance(&target) > AUTOMORPHISM_TOL {
                        return invalid(format!("images and inverse images are not inverse on `{name}`"));
                    }
                }
            }
        }
        for r in reference.relators() {
            for map in [&self.images, &self.inverse_images] {
                let m = reference.evaluate(&r.substitute(map))?;
                if m.distance(&MoebiusTransform::IDENTITY) > AUTOMORPHISM_TOL {
                    return invalid(format!("relator `{}` is not preserved", reference.show(r)));
                }
            }
        }
        let traces: Vec<f64> = reference
            .peripheral_words()
            .iter()
            .map(|p| reference.evaluate(p).map(|m| m.trace().abs()))
            .collect::<Result<_>>()?;
        for p in reference.peripheral_words() {
            for map in [&self.images, &self.inverse_images] {
                let m = reference.evaluate(&p.substitute(map))?;
                let t = m.trace().abs();
                if m.classify(AUTOMORPHISM_TOL) != ElementClass::Parabolic
                    || !traces.iter().any(|s| (s - t).abs() < AUTOMORPHISM_TOL)
                {
                    return invalid(format!("peripheral word `{}` is not sent to a peripheral class", reference.show(p)));
                }
            }
        }
        Ok(())
    }

    /// `ρ ∘ map` as a representation with the group data of `rep`.
    fn pull_back(rep: &GroupRepresentation, map: &[Word]) -> Result<GroupRepresentation> {
        let images = map.iter().map(|w| rep.evaluate(w)).collect::<Result<Vec<_>>>()?;
        GroupRepresentation::new(
            rep.names().to_vec(),
            images,
            rep.relators().to_vec(),
            rep.peripheral_words().to_vec(),
        )
        .map_err(|e| Error::InvalidAutomorphism(e.to_string()))
    }
}

/// Changes the marking from `f` to `f ∘ ψ⁻¹`: the new target sends each
/// generator `g` to `target(ψ⁻¹_*(g))`.
pub fn act(ms: &MarkedStructure, mc: &MappingClass) -> Result<MarkedStructure> {
    mc.validate(ms.reference())?;
    ms.retarget(MappingClass::pull_back(ms.target(), &mc.inverse_images)?)
}

/// The boundary map of the class, sampled by
/// `reference(γ)_∞ ↦ reference(ψ_*γ)_∞` over the hyperbolic words of the
/// ball of radius `depth`.
pub fn psi_p(
    mc: &MappingClass,
    reference: &GroupRepresentation,
    depth: usize,
    limits: &BallLimits,
) -> Result<SampledCircleMap> {
    mc.validate(reference)?;
    let pushed = MappingClass::pull_back(reference, &mc.images)?;
    SampledCircleMap::from_ball(reference, &pushed, depth, limits)
}

/// Distance between the normalized boundary map of the acted structure and
/// the normalization of `F ∘ G⁻¹`.
pub fn verify_action_formula(ms: &MarkedStructure, mc: &MappingClass, depth: usize) -> Result<f64> {
    let lhs = act(ms, mc)?.phi_p(depth)?;
    let f = ms.rep_to_homeo(depth)?;
    let g = psi_p(mc, ms.reference(), depth, ms.limits())?;
    let rhs = f.compose(&g.invert()?)?.sigma1_normalize()?;
    Ok(lhs.sup_distance(&rhs))
}
