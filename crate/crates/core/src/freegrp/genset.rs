//! Integer generating sets S ⊂ SL₂(Z), their images mod p, and operator norms.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::words::{Ball, Sl2Word, DEFAULT_BALL_BUDGET};
use crate::certified::Interval;
use crate::error::{Error, Result};
use crate::groups::field::PrimeField;
use crate::groups::sl2::{parse_matrix_literal, Sl2Group, Sl2ModP};

/// A 2×2 integer matrix of determinant 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sl2Int {
    e: [BigInt; 4],
}

impl Sl2Int {
    pub fn new(e: [BigInt; 4]) -> Result<Self> {
        let det = &e[0] * &e[3] - &e[1] * &e[2];
        if !det.is_one() {
            return Err(Error::BadDeterminant {
                det: det.to_string(),
            });
        }
        Ok(Self { e })
    }

    pub fn from_i64(e: [i64; 4]) -> Result<Self> {
        Self::new(e.map(BigInt::from))
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(parse_matrix_literal(s)?)
    }

    pub fn identity() -> Self {
        Self {
            e: [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()],
        }
    }

    pub fn entries(&self) -> &[BigInt; 4] {
        &self.e
    }

    pub fn mul(&self, o: &Self) -> Self {
        let [a, b, c, d] = &self.e;
        let [e, f, g, h] = &o.e;
        Self {
            e: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
        }
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = &self.e;
        Self {
            e: [d.clone(), -b, -c, a.clone()],
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.e.iter().map(|x| x.abs()).max().expect("four entries")
    }

    /// Sum of squares of the entries, the trace of sᵀs.
    pub fn frobenius_sq(&self) -> BigInt {
        self.e.iter().map(|x| x * x).sum()
    }

    pub fn reduce(&self, f: &PrimeField) -> Sl2ModP {
        Sl2ModP::from_bigint(f, &self.e).expect("det 1 over Z stays 1 mod p")
    }
}

impl fmt::Display for Sl2Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.e;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

/// Enclosure of ln‖s‖ for the operator 2-norm, via ‖s‖² = (T + √(T² − 4))/2.
pub fn norm_log(s: &Sl2Int) -> Interval {
    let t = s.frobenius_sq();
    if t == BigInt::from(2) {
        // sᵀs = I: orthogonal matrix
        return Interval::zero();
    }
    let ti = Interval::from_int(t.clone());
    let disc = Interval::from_int(&t * &t - 4);
    let norm_sq = ti
        .add(&disc.sqrt().expect("T ≥ 2"))
        .div_int(2)
        .expect("non-zero");
    norm_sq.ln().expect("norm ≥ 1").div_int(2).expect("non-zero")
}

/// A symmetric set S ⊂ SL₂(Z) with inverse pairs adjacent: letter 2i is a
/// generator and 2i + 1 its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSetZ {
    matrices: Vec<Sl2Int>,
}

impl GenSetZ {
    /// Builds S from a list; with `close`, missing inverses are added, otherwise
    /// a missing inverse is an error. Duplicates are dropped.
    pub fn from_matrices(list: Vec<Sl2Int>, close: bool) -> Result<Self> {
        let mut seen: Vec<Sl2Int> = Vec::new();
        for m in list {
            if m.is_identity() {
                return Err(Error::InvalidGenerators("identity in generating set".into()));
            }
            if !seen.contains(&m) {
                seen.push(m);
            }
        }
        if seen.is_empty() {
            return Err(Error::InvalidGenerators("empty generating set".into()));
        }
        let mut placed: Vec<Sl2Int> = Vec::new();
        for m in &seen {
            if placed.contains(m) {
                continue;
            }
            let inv = m.inverse();
            if inv == *m {
                return Err(Error::InvalidGenerators(format!(
                    "{m} is its own inverse; free generating sets have no involutions"
                )));
            }
            if !close && !seen.contains(&inv) {
                return Err(Error::NotSymmetric(format!("inverse of {m} missing")));
            }
            placed.push(m.clone());
            placed.push(inv);
        }
        Ok(Self { matrices: placed })
    }

    pub fn parse_lines(text: &str, close: bool) -> Result<Self> {
        let mut list = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let m = Sl2Int::parse(line).map_err(|e| match e {
                Error::Parse(msg) => Error::Parse(format!("line {}: {msg}", no + 1)),
                other => other,
            })?;
            list.push(m);
        }
        Self::from_matrices(list, close)
    }

    pub fn from_file(path: &Path, close: bool) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_lines(&text, close)
    }

    /// Named built-in sets: `lubotzky` (entries ±3) and `standard` (entries ±1).
    pub fn builtin(name: &str) -> Option<Self> {
        let k = match name {
            "lubotzky" => 3,
            "standard" => 1,
            _ => return None,
        };
        Some(
            Self::from_matrices(
                vec![
                    Sl2Int::from_i64([1, k, 0, 1]).expect("det 1"),
                    Sl2Int::from_i64([1, 0, k, 1]).expect("det 1"),
                ],
                true,
            )
            .expect("valid built-in set"),
        )
    }

    /// A built-in name or a path to a generator file.
    pub fn resolve(spec: &str, close: bool) -> Result<Self> {
        match Self::builtin(spec) {
            Some(s) => Ok(s),
            None => Self::from_file(Path::new(spec), close),
        }
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn rank(&self) -> u32 {
        (self.matrices.len() / 2) as u32
    }

    pub fn matrices(&self) -> &[Sl2Int] {
        &self.matrices
    }

    pub fn matrix(&self, letter: u16) -> &Sl2Int {
        &self.matrices[letter as usize]
    }

    /// |S| ≥ 4, needed wherever S is assumed to generate a free group of rank ≥ 2.
    pub fn require_free_rank(&self) -> Result<()> {
        if self.len() < 4 {
            return Err(Error::InvalidGenerators(format!(
                "need |S| >= 4 for free rank >= 2, got {}",
                self.len()
            )));
        }
        Ok(())
    }

    pub fn word_to_matrix(&self, w: &Sl2Word) -> Sl2Int {
        w.letters()
            .iter()
            .fold(Sl2Int::identity(), |acc, &l| acc.mul(self.matrix(l)))
    }

    /// Enclosure of τ⁻¹ = ln max ‖s‖.
    pub fn tau_inv(&self) -> Result<Interval> {
        let mut best: Option<Interval> = None;
        for m in &self.matrices {
            let l = norm_log(m);
            best = Some(match best {
                None => l,
                Some(b) => b.max(&l),
            });
        }
        let best = best.ok_or(Error::TauUndefined)?;
        if !best.is_positive() {
            return Err(Error::TauUndefined);
        }
        Ok(best)
    }

    pub fn tau(&self) -> Result<Interval> {
        self.tau_inv()?.recip()
    }

    /// S mod p, in letter order. Errors if two generators collide or one becomes trivial.
    pub fn reduce_mod(&self, p: u32) -> Result<Vec<Sl2ModP>> {
        let f = PrimeField::new(p as u64)?;
        let mut out: Vec<Sl2ModP> = Vec::with_capacity(self.len());
        for (i, m) in self.matrices.iter().enumerate() {
            let r = m.reduce(&f);
            if r.is_identity() {
                return Err(Error::GeneratorIsIdentity(m.to_string(), p));
            }
            if let Some(j) = out.iter().position(|x| *x == r) {
                return Err(Error::GeneratorCollision {
                    p,
                    first: self.matrices[j].to_string(),
                    second: self.matrices[i].to_string(),
                });
            }
            out.push(r);
        }
        Ok(out)
    }

    /// Indices of S mod p in SL₂(F_p).
    pub fn indices_mod(&self, grp: &Sl2Group) -> Result<Vec<u32>> {
        Ok(self
            .reduce_mod(grp.p())?
            .iter()
            .map(|m| grp.index_of(m))
            .collect())
    }

    /// Searches the ball of radius r for two distinct reduced words with equal
    /// integer images. Finding one disproves freeness; finding none proves nothing.
    pub fn find_relation(&self, r: u32) -> Result<Option<(Sl2Word, Sl2Word)>> {
        let ball = Ball::new(self.rank(), r, DEFAULT_BALL_BUDGET)?;
        let images = ball.map(Sl2Int::identity(), &self.matrices, |a, b| a.mul(b));
        let mut first: HashMap<&Sl2Int, usize> = HashMap::new();
        for (i, m) in images.iter().enumerate() {
            if let Some(&j) = first.get(m) {
                return Ok(Some((ball.word(j), ball.word(i))));
            }
            first.insert(m, i);
        }
        Ok(None)
    }
}

/// Do all reduced words of length ≤ r have distinct images mod p?
pub fn injectivity_check(s: &GenSetZ, p: u32, r: u32) -> Result<bool> {
    let f = PrimeField::new(p as u64)?;
    let gens: Vec<Sl2ModP> = s.matrices().iter().map(|m| m.reduce(&f)).collect();
    let ball = Ball::new(s.rank(), r, DEFAULT_BALL_BUDGET)?;
    let images = ball.map(Sl2ModP::identity(p), &gens, |a, b| a.mul_same(b));
    let mut seen = std::collections::HashSet::with_capacity(images.len());
    Ok(images.into_iter().all(|m| seen.insert(m)))
}
