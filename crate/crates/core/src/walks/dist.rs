//! Exact path counts of the simple random walk X_{n+1} = X_n·s on a finite group.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::setcalc::group::FiniteGroup;
use crate::setcalc::subset::GroupSubset;

/// `counts[g]` = number of step sequences of length `steps` from 1 ending at g;
/// the probability is `counts[g] / denominator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkDistribution {
    pub order: u32,
    pub steps: u32,
    pub counts: Vec<u128>,
    pub denominator: u128,
}

impl WalkDistribution {
    /// Unit mass at 1.
    pub fn point<G: FiniteGroup + ?Sized>(g: &G) -> Self {
        let mut counts = vec![0u128; g.order() as usize];
        counts[g.identity() as usize] = 1;
        Self {
            order: g.order(),
            steps: 0,
            counts,
            denominator: 1,
        }
    }

    /// Uniform distribution on G (counts 1, denominator |G|).
    pub fn uniform<G: FiniteGroup + ?Sized>(g: &G) -> Self {
        Self {
            order: g.order(),
            steps: 0,
            counts: vec![1; g.order() as usize],
            denominator: g.order() as u128,
        }
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().sum()
    }

    pub fn support(&self) -> GroupSubset {
        GroupSubset::from_indices(
            self.order,
            self.counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, _)| i as u32),
        )
    }

    pub fn probability(&self, x: u32) -> BigRational {
        BigRational::new(BigInt::from(self.counts[x as usize]), BigInt::from(self.denominator))
    }

    pub fn max_count(&self) -> u128 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// One more step along `gens`.
    pub fn step<G: FiniteGroup + ?Sized>(&self, g: &G, gens: &[u32]) -> Result<Self> {
        let mut next = vec![0u128; self.counts.len()];
        for (x, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &s in gens {
                let y = g.mul(x as u32, s) as usize;
                next[y] = next[y].checked_add(c).ok_or(Error::CountOverflow(self.steps as usize + 1))?;
            }
        }
        let denominator = self
            .denominator
            .checked_mul(gens.len() as u128)
            .ok_or(Error::CountOverflow(self.steps as usize + 1))?;
        Ok(Self {
            order: self.order,
            steps: self.steps + 1,
            counts: next,
            denominator,
        })
    }

    /// rp(X) = Σ P(X = g)².
    pub fn return_probability(&self) -> BigRational {
        let num: BigUint = self.counts.iter().map(|&c| BigUint::from(c) * BigUint::from(c)).sum();
        let den = BigUint::from(self.denominator).pow(2);
        BigRational::new(num.into(), den.into())
    }

    /// P(X ∈ xH).
    pub fn coset_mass<G: FiniteGroup + ?Sized>(&self, g: &G, h: &GroupSubset, x: u32) -> BigRational {
        let num: BigUint = h
            .iter()
            .map(|y| BigUint::from(self.counts[g.mul(x, y) as usize]))
            .sum();
        BigRational::new(num.into(), BigInt::from(self.denominator))
    }

    /// Distribution of X·Y for independent X ~ self, Y ~ other.
    pub fn convolve<G: FiniteGroup + ?Sized>(&self, g: &G, other: &Self) -> Result<Self> {
        let overflow = || Error::CountOverflow((self.steps + other.steps) as usize);
        let mut counts = vec![0u128; self.counts.len()];
        for (x, &a) in self.counts.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (y, &b) in other.counts.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let z = g.mul(x as u32, y as u32) as usize;
                counts[z] = a
                    .checked_mul(b)
                    .and_then(|v| counts[z].checked_add(v))
                    .ok_or_else(overflow)?;
            }
        }
        Ok(Self {
            order: self.order,
            steps: self.steps + other.steps,
            counts,
            denominator: self.denominator.checked_mul(other.denominator).ok_or_else(overflow)?,
        })
    }

    /// counts(g) = counts(g⁻¹) for every g.
    pub fn is_symmetric<G: FiniteGroup + ?Sized>(&self, g: &G) -> bool {
        (0..self.order).all(|x| self.counts[x as usize] == self.counts[g.inv(x) as usize])
    }

    /// `index,count` lines with a header, non-zero entries only.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,count\n");
        for (i, &c) in self.counts.iter().enumerate() {
            if c > 0 {
                let _ = writeln!(out, "{i},{c}");
            }
        }
        out
    }
}

/// The walk after n steps from 1 along the symmetric generator list `gens`
/// (distinct indices).
pub fn walk<G: FiniteGroup + ?Sized>(g: &G, gens: &[u32], n: u32) -> Result<WalkDistribution> {
    if gens.is_empty() {
        return Err(Error::InvalidGenerators("empty generating set".into()));
    }
    let set = GroupSubset::try_from_indices(g.order(), gens.iter().copied())?;
    if set.len() != gens.len() {
        return Err(Error::InvalidGenerators("repeated generator".into()));
    }
    if !set.is_symmetric(g) {
        return Err(Error::NotSymmetric("walk generators must be closed under inverses".into()));
    }
    let mut d = WalkDistribution::point(g);
    for _ in 0..n {
        d = d.step(g, gens)?;
    }
    Ok(d)
}

/// Walks for every step count 0..=n.
pub fn walk_sequence<G: FiniteGroup + ?Sized>(g: &G, gens: &[u32], n: u32) -> Result<Vec<WalkDistribution>> {
    let mut out = vec![walk(g, gens, 0)?];
    for _ in 0..n {
        let next = out.last().expect("non-empty").step(g, gens)?;
        out.push(next);
    }
    Ok(out)
}

pub fn is_zero_ratio(r: &BigRational) -> bool {
    r.numer().is_zero()
}
