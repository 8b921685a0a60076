//! Dyadic-decomposition inequalities for the return probability of X₁X₂.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::dist::WalkDistribution;
use crate::error::{Error, Result};
use crate::setcalc::energy::energy;
use crate::setcalc::group::FiniteGroup;
use crate::setcalc::subset::GroupSubset;

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// I = ⌈2 log₂(2|G|)⌉.
pub fn dyadic_depth(order: u32) -> u32 {
    let n = 2u64 * order as u64;
    // ⌈2 log₂ n⌉ = least I with 2^I ≥ n².
    let sq = (n as u128) * (n as u128);
    let mut i = 0u32;
    while (1u128 << i) < sq {
        i += 1;
    }
    i
}

/// Class of a probability c/D: i < I with 2^{-i-1} < c/D ≤ 2^{-i}, else I.
pub fn dyadic_class(count: u128, denominator: u128, depth: u32) -> u32 {
    if count == 0 {
        return depth;
    }
    let q = denominator / count;
    let i = 127 - q.leading_zeros();
    i.min(depth)
}

/// The partition A_0, …, A_I of G by dyadic class.
pub fn dyadic_partition(d: &WalkDistribution, depth: u32) -> Vec<GroupSubset> {
    let mut parts = vec![Vec::new(); depth as usize + 1];
    for (x, &c) in d.counts.iter().enumerate() {
        parts[dyadic_class(c, d.denominator, depth) as usize].push(x as u32);
    }
    parts
        .into_iter()
        .map(|v| GroupSubset::from_indices(d.order, v))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PairRecord {
    pub i: u32,
    pub j: u32,
    pub size_a: usize,
    pub size_b: usize,
    pub energy: String,
    /// B(A_i, A_j) ≤ 2^{-2(i+j)} E(A_i, A_j).
    pub weighted_le_energy: bool,
    /// 2^{-2(i+j)} E ≤ 16 rpp e(A_i, A_j).
    pub bound1: bool,
    /// For α ≥ 1 below the break-even value, both size conditions hold.
    pub bound2: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatteningReport {
    pub order: u32,
    pub depth: u32,
    #[serde(serialize_with = "ser_ratio")]
    pub rp1: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub rp2: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub rp_product: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub rpp: BigRational,
    /// rp(X₁X₂) ≤ rpp.
    pub young: bool,
    /// rp(X₁X₂) ≤ 2^{3−2I}|G|³ + 2I² Σ_{i,j<I} B(A_{1,i}, A_{2,j}).
    pub cauchy_schwarz: bool,
    /// rp(X₁X₂) ≤ 2^{3−2I}|G|³ + 2I² Σ_{i,j<I} 2^{-2(i+j)} E(A_{1,i}, A_{2,j}).
    pub step1: bool,
    #[serde(serialize_with = "ser_ratio")]
    pub step1_rhs: BigRational,
    pub pairs: Vec<PairRecord>,
}

impl FlatteningReport {
    pub fn holds(&self) -> bool {
        self.young
            && self.cauchy_schwarz
            && self.step1
            && self
                .pairs
                .iter()
                .all(|p| p.weighted_le_energy && p.bound1 && p.bound2)
    }
}

fn pow2(e: i64) -> BigRational {
    let two = BigInt::from(2);
    if e >= 0 {
        BigRational::from_integer(num_traits::pow(two, e as usize))
    } else {
        BigRational::new(BigInt::one(), num_traits::pow(two, (-e) as usize))
    }
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

// Σ_g (Σ_{xy=g, x∈A, y∈B} c₁(x)c₂(y))² / (D₁D₂)².
fn weighted_energy<G: FiniteGroup + ?Sized>(
    g: &G,
    d1: &WalkDistribution,
    d2: &WalkDistribution,
    a: &GroupSubset,
    b: &GroupSubset,
) -> BigRational {
    let mut acc: Vec<BigUint> = vec![BigUint::zero(); g.order() as usize];
    let mut touched = Vec::new();
    for x in a.iter() {
        let cx = BigUint::from(d1.counts[x as usize]);
        for y in b.iter() {
            let z = g.mul(x, y) as usize;
            if acc[z].is_zero() {
                touched.push(z);
            }
            acc[z] += &cx * d2.counts[y as usize];
        }
    }
    let num: BigUint = touched.iter().map(|&z| &acc[z] * &acc[z]).sum();
    let den = (BigUint::from(d1.denominator) * BigUint::from(d2.denominator)).pow(2);
    BigRational::new(num.into(), den.into())
}

/// Checks the inequalities bounding rp(X₁X₂) through the dyadic level sets
/// of X₁ and X₂, in exact rational arithmetic.
pub fn flattening_identities_check<G: FiniteGroup + ?Sized>(
    g: &G,
    d1: &WalkDistribution,
    d2: &WalkDistribution,
) -> Result<FlatteningReport> {
    if d1.order != g.order() || d2.order != g.order() {
        return Err(Error::Precondition("distributions live on different groups".into()));
    }
    let order = g.order();
    let depth = dyadic_depth(order);
    let rp1 = d1.return_probability();
    let rp2 = d2.return_probability();
    let rp_product = d1.convolve(g, d2)?.return_probability();
    let rpp = if rp1 >= rp2 { rp1.clone() } else { rp2.clone() };
    let young = rp_product <= rpp;

    let tail = pow2(3 - 2 * depth as i64) * int(BigUint::from(order).pow(3));
    let weight = int(2u64 * depth as u64 * depth as u64);
    let p1 = dyadic_partition(d1, depth);
    let p2 = dyadic_partition(d2, depth);
    let mut b_sum = BigRational::zero();
    let mut e_sum = BigRational::zero();
    let mut pairs = Vec::new();
    let rpp_sq = &rpp * &rpp;
    for (i, a) in p1.iter().enumerate().take(depth as usize) {
        if a.is_empty() {
            continue;
        }
        for (j, b) in p2.iter().enumerate().take(depth as usize) {
            if b.is_empty() {
                continue;
            }
            let e = energy(g, a, b)?;
            let scale = pow2(-2 * (i + j) as i64);
            let weighted_e = &scale * int(e.energy.clone());
            let bw = weighted_energy(g, d1, d2, a, b);
            let weighted_le_energy = bw <= weighted_e;
            // E > 0 here, so the bound reads (|A||B|)³ ≤ 256 rpp² 2^{4(i+j)}.
            let ab = int(a.len() as u64 * b.len() as u64);
            let bound1 = &ab * &ab * &ab <= int(256) * &rpp_sq * pow2(4 * (i + j) as i64);
            // α* = rpp / (2^{-2(i+j)} E); bound2 fails exactly for 1 ≤ α < α*,
            // where 4α|A_i|² ≥ 4^i is weakest at α → α*.
            let alpha_star = &rpp / &weighted_e;
            let bound2 = if alpha_star >= BigRational::one() {
                let sa = int(a.len() as u64);
                let sb = int(b.len() as u64);
                int(4) * &alpha_star * &sa * &sa >= pow2(2 * i as i64)
                    && int(4) * &alpha_star * &sb * &sb >= pow2(2 * j as i64)
            } else {
                true
            };
            b_sum += bw;
            e_sum += weighted_e;
            pairs.push(PairRecord {
                i: i as u32,
                j: j as u32,
                size_a: a.len(),
                size_b: b.len(),
                energy: e.energy.to_string(),
                weighted_le_energy,
                bound1,
                bound2,
            });
        }
    }
    let cs_rhs = &tail + &weight * b_sum;
    let step1_rhs = &tail + &weight * e_sum;
    Ok(FlatteningReport {
        order,
        depth,
        rp1,
        rp2,
        cauchy_schwarz: rp_product <= cs_rhs,
        step1: rp_product <= step1_rhs,
        rp_product,
        rpp,
        young,
        step1_rhs,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegrp::GenSetZ;
    use crate::groups::sl2::Sl2Group;
    use crate::setcalc::products::ratio;
    use crate::walks::dist::walk;

    #[test]
    fn depth_and_classes() {
        // 2|G| = 240, 240² = 57600, 2^16 = 65536.
        assert_eq!(dyadic_depth(120), 16);
        assert_eq!(dyadic_class(1, 1, 16), 0);
        assert_eq!(dyadic_class(1, 2, 16), 1);
        assert_eq!(dyadic_class(3, 8, 16), 1);
        assert_eq!(dyadic_class(1, 3, 16), 1);
        assert_eq!(dyadic_class(0, 3, 16), 16);
        assert_eq!(dyadic_class(1, 1 << 20, 16), 16);
    }

    #[test]
    fn uniform_pair_is_flat() {
        let grp = Sl2Group::new(5).unwrap();
        let u = WalkDistribution::uniform(&grp);
        let r = flattening_identities_check(&grp, &u, &u).unwrap();
        assert_eq!(r.rp_product, ratio(1, 120));
        assert_eq!(r.rpp, ratio(1, 120));
        assert!(r.holds());
    }

    #[test]
    fn point_mass_is_neutral() {
        let grp = Sl2Group::new(7).unwrap();
        let gens = GenSetZ::builtin("lubotzky").unwrap().indices_mod(&grp).unwrap();
        let x = walk(&grp, &gens, 3).unwrap();
        let r = flattening_identities_check(&grp, &WalkDistribution::point(&grp), &x).unwrap();
        assert_eq!(r.rp_product, x.return_probability());
        assert!(r.holds());
    }

    #[test]
    fn lubotzky_walks_mod_7() {
        let grp = Sl2Group::new(7).unwrap();
        let gens = GenSetZ::builtin("lubotzky").unwrap().indices_mod(&grp).unwrap();
        let x3 = walk(&grp, &gens, 3).unwrap();
        let x5 = walk(&grp, &gens, 5).unwrap();
        let r = flattening_identities_check(&grp, &x3, &x5).unwrap();
        assert!(r.holds(), "{r:?}");
        assert!(!r.pairs.is_empty());
    }
}
