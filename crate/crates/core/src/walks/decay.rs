//! P(X_n = x) ≤ |G_p|^{−cγ₁} at n = ⌊c⌊τ ln(p/2)⌋⌋, with γ₁ = τ ln((2/√3)√|S|)/8.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::dist::{walk, WalkDistribution};
use crate::certified::Interval;
use crate::error::{Error, Result};
use crate::freegrp::tree::per_vertex_counts;
use crate::freegrp::GenSetZ;
use crate::groups::sl2::Sl2Group;
use crate::setcalc::products::word_distances;
use crate::setcalc::subset::GroupSubset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Holds,
    Fails,
    Undecided,
}

impl Comparison {
    fn of(le: bool, gt: bool) -> Self {
        if le {
            Comparison::Holds
        } else if gt {
            Comparison::Fails
        } else {
            Comparison::Undecided
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayReport {
    pub p: u32,
    pub c: String,
    pub tau: String,
    pub gamma1: String,
    pub steps: u32,
    pub max_count: String,
    pub denominator: String,
    /// log₂ max_x P(X_n = x).
    pub lhs_log2: String,
    /// −cγ₁ log₂|G_p|.
    pub rhs_log2: String,
    pub comparison: Comparison,
    /// p ≥ max(17, 2 exp(2/(cτ))), certified; false when undecided.
    pub threshold_met: bool,
    /// Approximate value of 2 exp(2/(cτ)).
    pub threshold: f64,
    /// "guaranteed" or "outside guarantee".
    pub regime: &'static str,
    /// Group walk counts equal tree walk counts at every element.
    pub tree_agreement: bool,
}

/// γ₁ = τ ln((2/√3)√|S|)/8.
pub fn gamma1(s: &GenSetZ) -> Result<Interval> {
    let r = Interval::from_ratio(4 * s.len() as u64, 3)?.sqrt()?;
    r.ln()?.mul(&s.tau()?).div_int(8)
}

/// ⌊τ ln(p/2)⌋, the radius below which the ball maps injectively mod p.
pub fn injectivity_steps(s: &GenSetZ, p: u32) -> Result<u32> {
    let x = s.tau()?.mul(&Interval::from_ratio(p, 2)?.ln()?);
    let lo = x.lo_rational().floor().to_integer();
    let hi = x.hi_rational().floor().to_integer();
    if lo != hi {
        return Err(Error::Domain(format!("floor of tau*ln(p/2) undecided for p = {p}")));
    }
    lo.to_u32().ok_or_else(|| Error::Domain("step count out of range".into()))
}

/// Compares every group count with the tree count at the word distance of the
/// element; equality is expected while 2n is below the girth.
pub fn tree_agreement(grp: &Sl2Group, gens: &[u32], d: &WalkDistribution) -> Result<bool> {
    let k = (gens.len() / 2) as u32;
    let tree = per_vertex_counts(k, d.steps)?;
    let dist = word_distances(grp, &GroupSubset::from_indices(grp.size(), gens.iter().copied()));
    Ok(d.counts.iter().enumerate().all(|(x, &c)| {
        let r = dist[x] as usize;
        let expect = if r < tree.len() { tree[r].clone() } else { BigUint::zero() };
        BigUint::from(c) == expect
    }))
}

fn log2_ratio(num: u128, den: u128) -> Result<Interval> {
    Interval::from_ratio(BigInt::from(num), BigInt::from(den))?.log2()
}

pub fn decay_inequality_eval(s: &GenSetZ, p: u32, c: &BigRational) -> Result<DecayReport> {
    s.require_free_rank()?;
    if *c <= BigRational::zero() || *c > BigRational::one() {
        return Err(Error::Domain(format!("c = {c} must lie in (0, 1]")));
    }
    let grp = Sl2Group::new(p as u64)?;
    let gens = s.indices_mod(&grp)?;
    let m = injectivity_steps(s, p)?;
    let steps = (c * BigRational::from_integer(m.into()))
        .floor()
        .to_integer()
        .to_u32()
        .expect("at most m");
    let d = walk(&grp, &gens, steps)?;
    let max = d.max_count();
    let lhs = log2_ratio(max, d.denominator)?;
    let ci = Interval::from_rational(c);
    let g1 = gamma1(s)?;
    let rhs = ci
        .mul(&g1)
        .mul(&Interval::from_int(grp.size()).log2()?)
        .neg();
    let comparison = Comparison::of(lhs.le(&rhs), lhs.gt(&rhs));

    // 2 exp(2/(cτ)) ≤ p ⇔ 2τ⁻¹/c ≤ ln(p/2).
    let tau_inv = s.tau_inv()?;
    let need = tau_inv.mul_int(2).div(&ci)?;
    let have = Interval::from_ratio(p, 2)?.ln()?;
    let threshold_met = p >= 17 && need.le(&have);
    let threshold = 2.0 * (need.mid_f64()).exp();
    let tree_ok = tree_agreement(&grp, &gens, &d)?;
    Ok(DecayReport {
        p,
        c: c.to_string(),
        tau: s.tau()?.to_string(),
        gamma1: g1.to_string(),
        steps,
        max_count: max.to_string(),
        denominator: d.denominator.to_string(),
        lhs_log2: lhs.to_string(),
        rhs_log2: rhs.to_string(),
        comparison,
        threshold_met,
        threshold,
        regime: if threshold_met { "guaranteed" } else { "outside guarantee" },
        tree_agreement: tree_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lubotzky_p101() {
        let s = GenSetZ::builtin("lubotzky").unwrap();
        let r = decay_inequality_eval(&s, 101, &BigRational::one()).unwrap();
        // τ = 1/ln((3+√13)/2) ≈ 0.8371, ln(50.5) ≈ 3.922, product ≈ 3.28.
        assert_eq!(r.steps, 3);
        // 2 exp(2 ln((3+√13)/2)) = ((3+√13)/2)² · 2 ≈ 21.82 ≤ 101.
        assert!(r.threshold_met);
        assert!((r.threshold - 21.8167).abs() < 1e-3);
        assert_eq!(r.comparison, Comparison::Holds);
        assert!(r.tree_agreement);
        // Three steps on the 4-regular tree: the most likely vertex is a neighbour
        // of 1 (count 7 = 3 back-and-forth paths each way + 1 straight).
        assert_eq!(r.max_count, "7");
        assert_eq!(r.denominator, "64");
    }

    #[test]
    fn small_prime_is_outside_guarantee() {
        let s = GenSetZ::builtin("lubotzky").unwrap();
        let r = decay_inequality_eval(&s, 19, &BigRational::one()).unwrap();
        assert!(!r.threshold_met);
        assert_eq!(r.regime, "outside guarantee");
        assert_eq!(r.steps, 1);
        assert_eq!(r.max_count, "1");
    }

    #[test]
    fn rejects_bad_c() {
        let s = GenSetZ::builtin("lubotzky").unwrap();
        assert!(decay_inequality_eval(&s, 101, &BigRational::from_integer(2.into())).is_err());
    }

    #[test]
    fn gamma1_enclosure() {
        // τ ln(4/√3)/8 with τ ≈ 0.837098.
        let g = gamma1(&GenSetZ::builtin("lubotzky").unwrap()).unwrap();
        let v = g.mid_f64();
        let expect = (4.0f64 / 3f64.sqrt()).ln() / ((3.0 + 13f64.sqrt()) / 2.0).ln() / 8.0;
        assert!((v - expect).abs() < 1e-12);
    }
}
