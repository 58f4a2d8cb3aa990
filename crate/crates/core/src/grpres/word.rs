use std::fmt;

use serde::{Deserialize, Serialize};

/// One generator raised to `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub exponent: i8,
}

impl Letter {
    pub fn new(generator: usize, exponent: i8) -> Self {
        debug_assert!(exponent == 1 || exponent == -1);
        Letter { generator, exponent }
    }

    pub fn inverse(self) -> Self {
        Letter { generator: self.generator, exponent: -self.exponent }
    }
}

/// A freely reduced word in a free group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<Letter>", into = "Vec<Letter>")]
pub struct Word {
    letters: Vec<Letter>,
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word::from_letters(letters)
    }
}

impl From<Word> for Vec<Letter> {
    fn from(w: Word) -> Self {
        w.letters
    }
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last().is_some_and(|&last| last == l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    /// `g^n`.
    pub fn power_of(generator: usize, n: i64) -> Self {
        let e = if n < 0 { -1 } else { 1 };
        Word { letters: vec![Letter::new(generator, e); n.unsigned_abs() as usize] }
    }

    pub fn generator(generator: usize) -> Self {
        Self::power_of(generator, 1)
    }

    /// Builds a word from `(generator, exponent)` syllables with arbitrary integer exponents.
    pub fn from_syllables(syllables: &[(usize, i64)]) -> Self {
        Word::from_letters(syllables.iter().flat_map(|&(g, n)| Word::power_of(g, n).letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn concat(&self, other: &Word) -> Self {
        Word::from_letters(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Word::empty();
        for _ in 0..n.unsigned_abs() {
            acc = acc.concat(&base);
        }
        acc
    }

    /// `a b a^-1 b^-1`.
    pub fn commutator(a: &Word, b: &Word) -> Self {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }

    /// `c w c^-1`.
    pub fn conjugate_by(&self, c: &Word) -> Self {
        c.concat(self).concat(&c.inverse())
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator).max()
    }

    /// Exponent sum of every generator below `n`.
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut out = vec![0i64; n];
        for l in &self.letters {
            out[l.generator] += l.exponent as i64;
        }
        out
    }

    /// Replaces generator `i` by `images[i]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        Word::from_letters(self.letters.iter().flat_map(|l| {
            let img = &images[l.generator];
            if l.exponent > 0 {
                img.letters.clone()
            } else {
                img.inverse().letters
            }
        }))
    }

    /// Shifts every generator index by `offset`.
    pub fn shifted(&self, offset: usize) -> Word {
        Word {
            letters: self.letters.iter().map(|l| Letter::new(l.generator + offset, l.exponent)).collect(),
        }
    }

    /// Generic evaluation in a group given by `mul`, `inv` and the identity.
    pub fn evaluate<T: Clone>(&self, images: &[T], identity: T, mul: impl Fn(&T, &T) -> T, inv: impl Fn(&T) -> T) -> T {
        self.letters.iter().fold(identity, |acc, l| {
            let g = &images[l.generator];
            if l.exponent > 0 {
                mul(&acc, g)
            } else {
                mul(&acc, &inv(g))
            }
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        let mut first = true;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let n = (j - i) as i64 * l.exponent as i64;
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if n == 1 {
                write!(f, "g{}", l.generator)?;
            } else {
                write!(f, "g{}^{}", l.generator, n)?;
            }
            i = j;
        }
        Ok(())
    }
}
