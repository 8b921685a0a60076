//! Reduced words in the free group F_k and balls in its Cayley tree.
//!
//! Letters are `0..2k`; letter `2i` is the i-th free generator and `2i + 1`
//! its inverse, so the inverse of a letter is `l ^ 1`.

use std::fmt;

use crate::error::{Error, Result};

#[inline]
pub fn inverse_letter(l: u16) -> u16 {
    l ^ 1
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sl2Word {
    letters: Vec<u16>,
}

impl Sl2Word {
    pub fn empty() -> Self {
        Self { letters: Vec::new() }
    }

    /// Wraps a letter sequence as given, without reducing it.
    pub fn from_letters(letters: Vec<u16>) -> Self {
        Self { letters }
    }

    /// Freely reduced form of the letter sequence.
    pub fn reduced(letters: &[u16]) -> Self {
        let mut out: Vec<u16> = Vec::with_capacity(letters.len());
        for &l in letters {
            if out.last() == Some(&inverse_letter(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self { letters: out }
    }

    pub fn reduce(&self) -> Self {
        Self::reduced(&self.letters)
    }

    pub fn letters(&self) -> &[u16] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters
            .windows(2)
            .all(|w| w[1] != inverse_letter(w[0]))
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|&l| inverse_letter(l)).collect(),
        }
    }

    /// Reduced product.
    pub fn mul(&self, o: &Self) -> Self {
        let mut v = self.letters.clone();
        v.extend_from_slice(&o.letters);
        Self::reduced(&v)
    }

    /// Reduced commutator x y x⁻¹ y⁻¹.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).mul(&self.inverse()).mul(&o.inverse())
    }

    /// Renders with the alphabet a, A, b, B, … (capital = inverse); "1" for the empty word.
    pub fn render(&self) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        self.letters
            .iter()
            .map(|&l| {
                let base = (b'a' + (l / 2) as u8) as char;
                if l % 2 == 0 {
                    base.to_string()
                } else {
                    base.to_ascii_uppercase().to_string()
                }
            })
            .collect()
    }

    /// Parses the rendering used by [`Sl2Word::render`].
    pub fn parse(s: &str) -> Result<Self> {
        if s == "1" {
            return Ok(Self::empty());
        }
        let mut letters = Vec::new();
        for ch in s.chars() {
            let l = if ch.is_ascii_lowercase() {
                2 * (ch as u16 - 'a' as u16)
            } else if ch.is_ascii_uppercase() {
                2 * (ch as u16 - 'A' as u16) + 1
            } else {
                return Err(Error::Parse(format!("bad letter {ch:?} in word {s:?}")));
            };
            letters.push(l);
        }
        Ok(Self { letters })
    }
}

impl fmt::Display for Sl2Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Number of reduced words of length ≤ r in F_k.
pub fn ball_size(k: u32, r: u32) -> u128 {
    if k == 0 {
        return 1;
    }
    let mut total: u128 = 1;
    let mut sphere: u128 = 2 * k as u128;
    for _ in 0..r {
        total = total.saturating_add(sphere);
        sphere = sphere.saturating_mul(2 * k as u128 - 1);
    }
    total
}

/// Default cap on the number of words in an enumerated ball.
pub const DEFAULT_BALL_BUDGET: u128 = 5_000_000;

/// The ball of radius r in F_k, stored as a prefix tree: word i is
/// `word(parent[i]) · last[i]`. Words appear in order of length, then lexicographically.
#[derive(Clone, Debug)]
pub struct Ball {
    pub rank: u32,
    pub radius: u32,
    pub parent: Vec<u32>,
    pub last: Vec<u16>,
    pub length: Vec<u16>,
}

impl Ball {
    pub fn new(k: u32, r: u32, budget: u128) -> Result<Self> {
        let need = ball_size(k, r);
        if need > budget {
            return Err(Error::BudgetExceeded {
                what: "word ball",
                needed: need,
                budget,
            });
        }
        let n = need as usize;
        let mut parent = Vec::with_capacity(n);
        let mut last = Vec::with_capacity(n);
        let mut length = Vec::with_capacity(n);
        parent.push(0);
        last.push(u16::MAX);
        length.push(0);
        let mut start = 0usize;
        for len in 1..=r {
            let end = parent.len();
            for i in start..end {
                for l in 0..(2 * k) as u16 {
                    if i != 0 && l == inverse_letter(last[i]) {
                        continue;
                    }
                    parent.push(i as u32);
                    last.push(l);
                    length.push(len as u16);
                }
            }
            start = end;
        }
        debug_assert_eq!(parent.len(), n);
        Ok(Self {
            rank: k,
            radius: r,
            parent,
            last,
            length,
        })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn word(&self, mut i: usize) -> Sl2Word {
        let mut letters = Vec::with_capacity(self.length[i] as usize);
        while i != 0 {
            letters.push(self.last[i]);
            i = self.parent[i] as usize;
        }
        letters.reverse();
        Sl2Word::from_letters(letters)
    }

    pub fn words(&self) -> impl Iterator<Item = Sl2Word> + '_ {
        (0..self.len()).map(move |i| self.word(i))
    }

    /// Evaluates a homomorphism on every word: `images[i] = images[parent] · gens[last]`.
    pub fn map<T: Clone, F: Fn(&T, &T) -> T>(&self, identity: T, gens: &[T], mul: F) -> Vec<T> {
        let mut out: Vec<T> = Vec::with_capacity(self.len());
        out.push(identity);
        for i in 1..self.len() {
            let v = mul(&out[self.parent[i] as usize], &gens[self.last[i] as usize]);
            out.push(v);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_examples() {
        let a_ai = Sl2Word::from_letters(vec![0, 1]);
        assert!(a_ai.reduce().is_empty());
        let w = Sl2Word::from_letters(vec![0, 2, 3, 0]);
        assert_eq!(w.reduce().letters(), &[0, 0]);
        let r = Sl2Word::from_letters(vec![0, 2, 1, 3]);
        assert_eq!(r.reduce(), r);
        assert_eq!(Sl2Word::parse("abBa").unwrap().reduce().render(), "aa");
    }

    #[test]
    fn ball_counts() {
        assert_eq!(Ball::new(2, 1, DEFAULT_BALL_BUDGET).unwrap().len(), 5);
        assert_eq!(Ball::new(2, 2, DEFAULT_BALL_BUDGET).unwrap().len(), 17);
        assert_eq!(Ball::new(2, 8, DEFAULT_BALL_BUDGET).unwrap().len(), 2 * 3usize.pow(8) - 1);
        for k in [2u32, 3] {
            for r in 0..=6 {
                let closed = 1 + 2 * k as u128 * ((2 * k as u128 - 1).pow(r) - 1) / (2 * k as u128 - 2);
                assert_eq!(ball_size(k, r), closed);
                let b = Ball::new(k, r, DEFAULT_BALL_BUDGET).unwrap();
                assert_eq!(b.len() as u128, closed);
                assert!(b.words().all(|w| w.is_reduced()));
            }
        }
    }

    #[test]
    fn ball_budget_error() {
        assert!(matches!(
            Ball::new(2, 30, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn commutators_of_powers_vanish() {
        let a = Sl2Word::parse("a").unwrap();
        let a3 = Sl2Word::parse("aaa").unwrap();
        assert!(a.commutator(&a3).is_empty());
        let b = Sl2Word::parse("b").unwrap();
        assert_eq!(a.commutator(&b).render(), "abAB");
    }
}
