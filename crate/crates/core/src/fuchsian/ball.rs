use rayon::prelude::*;

use super::word::{Letter, Word};
use super::GroupRepresentation;
use crate::error::{Error, Result};
use crate::moebius::MoebiusTransform;

/// Size guards for word-ball enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallLimits {
    pub max_depth: usize,
    pub budget: usize,
    /// Matrices closer than this are the same element when relators exist.
    pub dedup_tol: f64,
}

impl Default for BallLimits {
    fn default() -> Self {
        BallLimits {
            max_depth: 12,
            budget: 5_000_000,
            dedup_tol: 1e-8,
        }
    }
}

impl BallLimits {
    pub fn with_budget(budget: usize) -> Self {
        BallLimits {
            budget,
            ..Self::default()
        }
    }
}

/// The set of freely reduced words of length at most `depth` over `rank`
/// generators, walked depth first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ball {
    rank: usize,
    depth: usize,
}

/// Number of freely reduced words of length at most `depth`.
pub(crate) fn projected_size(rank: usize, depth: usize) -> u128 {
    if rank == 0 {
        return 1;
    }
    let mut total: u128 = 1;
    let mut level: u128 = 2 * rank as u128;
    for _ in 0..depth {
        total = total.saturating_add(level);
        level = level.saturating_mul(2 * rank as u128 - 1);
    }
    total
}

impl Ball {
    pub fn new(rank: usize, depth: usize, limits: &BallLimits) -> Result<Self> {
        if depth > limits.max_depth {
            return Err(Error::DepthExceedsCap {
                depth,
                cap: limits.max_depth,
            });
        }
        let projected = projected_size(rank, depth);
        if projected > limits.budget as u128 {
            return Err(Error::BallTooLarge {
                projected,
                budget: limits.budget,
            });
        }
        Ok(Ball { rank, depth })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn size(&self) -> usize {
        projected_size(self.rank, self.depth) as usize
    }

    /// Visits every word together with its image under each representation
    /// and keeps the values `visit` returns.
    ///
    /// Subtrees below the first letter run in parallel; the output order is
    /// the identity first, then depth-first preorder with letters in index
    /// order. The first error in that order is returned.
    pub fn filter_map<T, F>(&self, reps: &[&GroupRepresentation], visit: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&Word, &[MoebiusTransform]) -> Result<Option<T>> + Sync,
    {
        if reps.iter().any(|r| r.rank() != self.rank) {
            return Err(Error::GeneratorMismatch);
        }
        let mut out = Vec::new();
        let identity = vec![MoebiusTransform::IDENTITY; reps.len()];
        if let Some(v) = visit(&Word::identity(), &identity)? {
            out.push(v);
        }
        if self.depth == 0 {
            return Ok(out);
        }
        let parts: Vec<Result<Vec<T>>> = (0..2 * self.rank)
            .into_par_iter()
            .map(|first| {
                let mut acc = Vec::new();
                let mut walker = Walker {
                    reps,
                    depth: self.depth,
                    rank: self.rank,
                    word: Word::identity(),
                    stack: vec![identity.clone()],
                };
                walker.descend(Letter::from_index(first), &visit, &mut acc)?;
                Ok(acc)
            })
            .collect();
        for part in parts {
            out.extend(part?);
        }
        Ok(out)
    }
}

struct Walker<'a> {
    reps: &'a [&'a GroupRepresentation],
    depth: usize,
    rank: usize,
    word: Word,
    stack: Vec<Vec<MoebiusTransform>>,
}

impl Walker<'_> {
    fn descend<T, F>(&mut self, letter: Letter, visit: &F, acc: &mut Vec<T>) -> Result<()>
    where
        F: Fn(&Word, &[MoebiusTransform]) -> Result<Option<T>>,
    {
        let top = self.stack.last().expect("stack holds the root");
        let next: Vec<_> = top
            .iter()
            .zip(self.reps)
            .map(|(m, rep)| m.compose(rep.letter_image(letter)))
            .collect();
        self.word.push(letter);
        if let Some(v) = visit(&self.word, &next)? {
            acc.push(v);
        }
        if self.word.len() < self.depth {
            self.stack.push(next);
            for i in 0..2 * self.rank {
                let l = Letter::from_index(i);
                if l != letter.inverse() {
                    self.descend(l, visit, acc)?;
                }
            }
            self.stack.pop();
        }
        self.word.push(letter.inverse());
        Ok(())
    }
}

/// All elements of length at most `depth`, sorted shortlex.
///
/// For groups with relators, words whose matrices agree within
/// `limits.dedup_tol` are merged onto the shortlex-least one.
pub fn enumerate_ball(
    rep: &GroupRepresentation,
    depth: usize,
    limits: &BallLimits,
) -> Result<Vec<(Word, MoebiusTransform)>> {
    let ball = Ball::new(rep.rank(), depth, limits)?;
    let mut items = ball.filter_map(&[rep], |w, m| Ok(Some((w.clone(), m[0]))))?;
    items.sort_by(|a, b| a.0.shortlex_cmp(&b.0));
    if rep.is_free() {
        return Ok(items);
    }
    let tol = limits.dedup_tol;
    let mut order: Vec<usize> = (0..items.len()).collect();
    let key = |i: usize| items[i].1.entries()[0].abs();
    order.sort_by(|&i, &j| key(i).total_cmp(&key(j)));
    let mut dead = vec![false; items.len()];
    for (pos, &j) in order.iter().enumerate() {
        for &k in order[..pos].iter().rev() {
            if key(j) - key(k) > tol {
                break;
            }
            if items[j].1.distance(&items[k].1) < tol {
                dead[j.max(k)] = true;
            }
        }
    }
    Ok(items
        .into_iter()
        .zip(dead)
        .filter_map(|(item, d)| (!d).then_some(item))
        .collect())
}
