use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A generator or its inverse. Ordered as `g0, g0⁻¹, g1, g1⁻¹, …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u16);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter(((generator as u16) << 1) | inverse as u16)
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// Index in `0..2·rank` following the letter order.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> Self {
        Letter(i as u16)
    }
}

/// A freely reduced word in the generators.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(SmallVec<[Letter; 12]>);

impl Word {
    pub fn identity() -> Self {
        Word(SmallVec::new())
    }

    pub fn generator(g: usize) -> Self {
        Word(smallvec::smallvec![Letter::new(g, false)])
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Word::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Appends a letter, cancelling against the last one if needed.
    pub fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inverse()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &l in other.letters() {
            w.push(l);
        }
        w
    }

    pub fn pow(&self, k: i32) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..k.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }

    /// Strips cancelling letters from both ends.
    pub fn cyclically_reduced(&self) -> Word {
        let s = &self.0;
        let (mut i, mut j) = (0, s.len());
        while j > i + 1 && s[i] == s[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        Word(s[i..j].iter().copied().collect())
    }

    pub fn occurrences(&self, generator: usize) -> usize {
        self.0.iter().filter(|l| l.generator() == generator).count()
    }

    /// Replaces every generator `g` by `images[g]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut w = Word::identity();
        for &l in self.letters() {
            let img = &images[l.generator()];
            if l.is_inverse() {
                for &m in img.letters().iter().rev() {
                    w.push(m.inverse());
                }
            } else {
                for &m in img.letters() {
                    w.push(m);
                }
            }
        }
        w
    }

    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }

    /// Parses space separated tokens; inside a token generator names are
    /// matched greedily and may carry an inverse marker `'`, `⁻¹` or `^-1`.
    pub fn parse(text: &str, names: &[String]) -> Result<Word> {
        let mut w = Word::identity();
        for token in text.split_whitespace() {
            let mut rest = token;
            while !rest.is_empty() {
                let (g, len) = names
                    .iter()
                    .enumerate()
                    .filter(|(_, n)| !n.is_empty() && rest.starts_with(n.as_str()))
                    .map(|(i, n)| (i, n.len()))
                    .max_by_key(|&(_, len)| len)
                    .ok_or_else(|| Error::UnknownGenerator(rest.to_string()))?;
                rest = &rest[len..];
                let mut inverse = false;
                for marker in ["'", "⁻¹", "^-1"] {
                    if let Some(r) = rest.strip_prefix(marker) {
                        inverse = true;
                        rest = r;
                        break;
                    }
                }
                w.push(Letter::new(g, inverse));
            }
        }
        Ok(w)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.word.letters().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match self.names.get(l.generator()) {
                Some(n) => f.write_str(n)?,
                None => write!(f, "g{}", l.generator())?,
            }
            if l.is_inverse() {
                f.write_str("'")?;
            }
        }
        Ok(())
    }
}

/// Default generator names `A, B, …, Z, A1, B1, …`.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            let c = (b'A' + (i % 26) as u8) as char;
            if i < 26 {
                c.to_string()
            } else {
                format!("{c}{}", i / 26)
            }
        })
        .collect()
}
