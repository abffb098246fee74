//! Freely reduced words over a finite alphabet and its formal inverses.

use std::fmt;

/// A generator or its formal inverse.
///
/// Generator `i` is stored as `i + 1` and its inverse as `-(i + 1)`, so the
/// derived order puts inverse letters before positive ones.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    pub fn gen(index: usize) -> Self {
        Letter(index as i32 + 1)
    }

    pub fn gen_inv(index: usize) -> Self {
        Letter(-(index as i32 + 1))
    }

    pub fn new(index: usize, inverse: bool) -> Self {
        if inverse {
            Self::gen_inv(index)
        } else {
            Self::gen(index)
        }
    }

    pub fn generator(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    /// Dense index in `0..2 * rank`: `2i` for `a_i`, `2i + 1` for `a_i^-1`.
    pub fn slot(self) -> usize {
        2 * self.generator() + self.is_inverse() as usize
    }

    pub fn from_slot(slot: usize) -> Self {
        Letter::new(slot / 2, slot % 2 == 1)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A freely reduced word. No two adjacent letters are mutually inverse.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// Builds a word from signed generator numbers: `1` is the first
    /// generator, `-1` its inverse. Zeros are skipped.
    pub fn from_signed(signed: &[i32]) -> Self {
        Word::new(signed.iter().filter(|&&s| s != 0).map(|&s| Letter(s)))
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

    pub fn mul(&self, other: &Word) -> Word {
        let mut k = 0;
        while k < self.0.len()
            && k < other.0.len()
            && self.0[self.0.len() - 1 - k] == other.0[k].inverse()
        {
            k += 1;
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len() - 2 * k);
        out.extend_from_slice(&self.0[..self.0.len() - k]);
        out.extend_from_slice(&other.0[k..]);
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `x^-1 self x`.
    pub fn conjugate_by(&self, x: &Word) -> Word {
        x.inverse().mul(self).mul(x)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.0.len() < 2 || self.0[0] != self.0[self.0.len() - 1].inverse()
    }

    /// Splits `self = conjugator^-1 * core * conjugator` with `core`
    /// cyclically reduced.
    pub fn cyclically_reduce(&self) -> (Word, Word) {
        let n = self.0.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k] == self.0[n - 1 - k].inverse() {
            k += 1;
        }
        let core = Word(self.0[k..n - k].to_vec());
        let conjugator = Word(self.0[..k].to_vec()).inverse();
        (core, conjugator)
    }

    /// Cyclic rotation moving the first `k` letters to the end.
    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return Word::identity();
        }
        let k = k % self.0.len();
        let mut out = self.0[k..].to_vec();
        out.extend_from_slice(&self.0[..k]);
        Word(out)
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k].to_vec())
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator()).max()
    }

    /// Shortlex comparison used for deterministic tie breaking.
    pub fn shortlex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.word.letters().iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match self.names.get(l.generator()) {
                Some(name) => write!(f, "{name}")?,
                None => write!(f, "g{}", l.generator())?,
            }
            if l.is_inverse() {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// Parses a space-separated word such as `a b^-1 a`. `1` alone (or an empty
/// string) is the identity. `x^n` for integer `n` expands to a power.
pub fn parse_word(text: &str, names: &[String]) -> Result<Word, String> {
    let text = text.trim();
    if text.is_empty() || text == "1" {
        return Ok(Word::identity());
    }
    let mut letters = Vec::new();
    for token in text.split_whitespace() {
        let (name, exp) = match token.split_once('^') {
            Some((n, e)) => (
                n,
                e.parse::<i64>()
                    .map_err(|_| format!("bad exponent in `{token}`"))?,
            ),
            None => (token, 1),
        };
        if name == "1" {
            continue;
        }
        let index = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| format!("unknown generator `{name}`"))?;
        let l = Letter::new(index, exp < 0);
        for _ in 0..exp.unsigned_abs() {
            letters.push(l);
        }
    }
    Ok(Word::new(letters))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[i32]) -> Word {
        Word::from_signed(s)
    }

    #[test]
    fn product_cancels() {
        // (a b)(b^-1 a) = a a
        assert_eq!(w(&[1, 2]).mul(&w(&[-2, 1])), w(&[1, 1]));
        assert_eq!(w(&[1, 2]).mul(&w(&[-2, -1])), Word::identity());
    }

    #[test]
    fn inverse_reverses() {
        // (a b a^-1)^-1 = a b^-1 a^-1
        assert_eq!(w(&[1, 2, -1]).inverse(), w(&[1, -2, -1]));
    }

    #[test]
    fn cyclic_reduction_examples() {
        let (core, conj) = w(&[1, 2, -1]).cyclically_reduce();
        assert_eq!(core, w(&[2]));
        assert_eq!(core.conjugate_by(&conj), w(&[1, 2, -1]));

        let (core, conj) = w(&[2, 1]).cyclically_reduce();
        assert_eq!(core, w(&[2, 1]));
        assert!(conj.is_empty());

        let (core, conj) = Word::identity().cyclically_reduce();
        assert!(core.is_empty() && conj.is_empty());
    }

    #[test]
    fn cyclic_reduction_of_conjugated_letter_pair() {
        // a b a b^-1 a^-1 has core b a b^-1 ... peel until cyclically reduced
        let u = w(&[1, 2, 1, -2, -1]);
        let (core, conj) = u.cyclically_reduce();
        assert!(core.is_cyclically_reduced());
        assert_eq!(core, w(&[1]));
        assert_eq!(core.conjugate_by(&conj), u);
    }

    #[test]
    fn parse_and_display() {
        let names = vec!["a".to_string(), "b".to_string()];
        let word = parse_word("a b^-1 a^2", &names).unwrap();
        assert_eq!(word, w(&[1, -2, 1, 1]));
        assert_eq!(word.display(&names).to_string(), "a b^-1 a a");
        assert_eq!(parse_word("1", &names).unwrap(), Word::identity());
        assert!(parse_word("c", &names).is_err());
    }
}
