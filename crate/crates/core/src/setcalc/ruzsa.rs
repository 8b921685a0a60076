//! Ruzsa-type inequalities, Ruzsa distance, and the covering lemma.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use serde::Serialize;

use super::group::FiniteGroup;
use super::products::{generates, is_subgroup, power_sequence, product, ratio, DEFAULT_MEM_BUDGET};
use super::subset::GroupSubset;
use crate::error::{Error, Result};

fn big(n: usize) -> BigInt {
    BigInt::from(n)
}

#[derive(Clone, Debug, Serialize)]
pub struct RuzsaLemmaReport {
    pub n: usize,
    /// |A⁽ᵏ⁾| for k = 1..=max(n, 3k_max).
    pub sizes: Vec<usize>,
    /// α_n ≤ α_3^{n−2}.
    pub part1: bool,
    /// trp(A⁽²⁾) ≤ trp(A)⁴.
    pub part2_square: bool,
    /// trp(A⁽ᵏ⁾) ≤ trp(A)^{3k−3} for 3 ≤ k ≤ n.
    pub part2_powers: bool,
}

impl RuzsaLemmaReport {
    pub fn holds(&self) -> bool {
        self.part1 && self.part2_square && self.part2_powers
    }
}

/// Checks α_n ≤ α_3^{n−2} and the tripling bounds for A⁽²⁾ and A⁽ᵏ⁾ (3 ≤ k ≤ n).
/// All comparisons are cross-multiplied integers.
pub fn ruzsa_lemma_check<G: FiniteGroup + ?Sized>(
    g: &G,
    a: &GroupSubset,
    n: usize,
) -> Result<RuzsaLemmaReport> {
    if n < 3 {
        return Err(Error::Domain("Ruzsa check needs n >= 3".into()));
    }
    if !a.is_symmetric(g) {
        return Err(Error::NotSymmetric("Ruzsa check needs a symmetric set".into()));
    }
    let top = (3 * n).max(6);
    let seq = power_sequence(g, a, top, DEFAULT_MEM_BUDGET)?;
    let s = |k: usize| big(seq[k - 1].len());
    let h = s(1);
    let h3 = s(3);
    // |Aⁿ|·|A|^{n−3} ≤ |A³|^{n−2}
    let part1 = s(n) * Pow::pow(&h, (n - 3) as u32) <= Pow::pow(&h3, (n - 2) as u32);
    // |A⁶|·|A|⁴ ≤ |A³|⁴·|A²|
    let part2_square = s(6) * Pow::pow(&h, 4u32) <= Pow::pow(&h3, 4u32) * s(2);
    let mut part2_powers = true;
    for k in 3..=n {
        let e = (3 * k - 3) as u32;
        // |A^{3k}|·|A|^e ≤ |A³|^e·|A^k|
        if s(3 * k) * Pow::pow(&h, e) > Pow::pow(&h3, e) * s(k) {
            part2_powers = false;
        }
    }
    Ok(RuzsaLemmaReport {
        n,
        sizes: seq.iter().map(|x| x.len()).collect(),
        part1,
        part2_square,
        part2_powers,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SmallSetReport {
    pub size: usize,
    pub triple_size: usize,
    pub triple_is_group: bool,
    pub holds: bool,
}

/// H⁽³⁾ = G, or |H⁽³⁾|² ≥ 2|H|², for H symmetric generating with 1 ∈ H.
pub fn small_p_check<G: FiniteGroup + ?Sized>(g: &G, h: &GroupSubset) -> Result<SmallSetReport> {
    if !h.is_symmetric(g) || !h.contains_identity(g) {
        return Err(Error::NotSymmetric("set must be symmetric and contain 1".into()));
    }
    if !generates(g, h) {
        return Err(Error::NotGenerating);
    }
    let h3 = power_sequence(g, h, 3, DEFAULT_MEM_BUDGET)?.pop().expect("3 terms");
    let triple_is_group = h3.is_full();
    let holds = triple_is_group || h3.len() * h3.len() >= 2 * h.len() * h.len();
    Ok(SmallSetReport {
        size: h.len(),
        triple_size: h3.len(),
        triple_is_group,
        holds,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionReport {
    pub n: usize,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

/// |H⁽ⁿ⁺¹⁾|·|H⁽²⁾∩K| ≥ |H|·|H⁽ⁿ⁾∩K| for a subgroup K.
pub fn intersection_lemma_check<G: FiniteGroup + ?Sized>(
    g: &G,
    h: &GroupSubset,
    k: &GroupSubset,
    n: usize,
) -> Result<IntersectionReport> {
    if n < 1 {
        return Err(Error::Domain("intersection check needs n >= 1".into()));
    }
    if !is_subgroup(g, k) {
        return Err(Error::NotSubgroup);
    }
    if !h.is_symmetric(g) {
        return Err(Error::NotSymmetric("set must be symmetric".into()));
    }
    let seq = power_sequence(g, h, (n + 1).max(2), DEFAULT_MEM_BUDGET)?;
    let lhs = big(seq[n].len()) * big(seq[1].intersection_len(k));
    let rhs = big(h.len()) * big(seq[n - 1].intersection_len(k));
    Ok(IntersectionReport {
        n,
        holds: lhs >= rhs,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    })
}

/// d(A,B) = log(|A·B⁻¹| / √(|A||B|)), kept as the exact triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RuzsaDistance {
    pub quotient: usize,
    pub a: usize,
    pub b: usize,
}

impl RuzsaDistance {
    /// d ≤ log α  ⇔  |A·B⁻¹|² ≤ α²|A||B|.
    pub fn le_log(&self, alpha: &BigRational) -> bool {
        let q = big(self.quotient);
        let lhs = &q * &q * alpha.denom() * alpha.denom();
        let rhs = alpha.numer() * alpha.numer() * big(self.a) * big(self.b);
        lhs <= rhs
    }

    pub fn is_zero(&self) -> bool {
        self.quotient * self.quotient == self.a * self.b
    }

    /// e^{2d} = |A·B⁻¹|² / (|A||B|).
    pub fn exp_twice(&self) -> BigRational {
        BigRational::new(big(self.quotient * self.quotient), big(self.a * self.b))
    }

    pub fn to_f64(&self) -> f64 {
        (self.quotient as f64).ln() - 0.5 * ((self.a as f64).ln() + (self.b as f64).ln())
    }
}

pub fn ruzsa_distance<G: FiniteGroup + ?Sized>(
    g: &G,
    a: &GroupSubset,
    b: &GroupSubset,
) -> Result<RuzsaDistance> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(RuzsaDistance {
        quotient: product(g, a, &b.inverse(g)).len(),
        a: a.len(),
        b: b.len(),
    })
}

/// Exact checks of the distance calculus on a triple of sets.
#[derive(Clone, Debug, Serialize)]
pub struct DiagramReport {
    /// |B| ≤ e^{2d(A,B)}|A| and |A| ≤ e^{2d(A,B)}|B|.
    pub size_rule: bool,
    /// d(A,C) ≤ d(A,B) + d(B,C).
    pub triangle: bool,
    /// |B| ≤ α|A| and d(B,A) ≤ log β give |A·B⁻¹| ≤ √α·β·|A|.
    pub unfolding: bool,
    /// |A·B⁻¹| ≤ α|A| and |A| ≤ β|B| give d(A,B) ≤ log(α√β).
    pub folding: bool,
}

impl DiagramReport {
    pub fn holds(&self) -> bool {
        self.size_rule && self.triangle && self.unfolding && self.folding
    }
}

pub fn diagram_rules_check<G: FiniteGroup + ?Sized>(
    g: &G,
    a: &GroupSubset,
    b: &GroupSubset,
    c: &GroupSubset,
) -> Result<DiagramReport> {
    let ab = ruzsa_distance(g, a, b)?;
    let ba = ruzsa_distance(g, b, a)?;
    let bc = ruzsa_distance(g, b, c)?;
    let ac = ruzsa_distance(g, a, c)?;
    let (na, nb) = (big(a.len()), big(b.len()));
    let q = big(ab.quotient);

    // e^{2d} = q²/(|A||B|); |B|·|A||B| ≤ q²|A| and symmetrically.
    let size_rule = &nb * &na * &nb <= &q * &q * &na && &na * &na * &nb <= &q * &q * &nb;

    // |AC⁻¹|·|B| ≤ |AB⁻¹|·|BC⁻¹|; the √(|A||C|) factors cancel.
    let triangle = big(ac.quotient) * &nb <= &q * big(bc.quotient);

    // Tightest α = |B|/|A|, β = |BA⁻¹|/√(|A||B|):
    // |AB⁻¹|² ≤ α·β²·|A|²  ⇔  q²·|A|·|B| ≤ |B|·|BA⁻¹|²·|A|.
    let qb = big(ba.quotient);
    let unfolding = &q * &q * &na * &nb <= &nb * &qb * &qb * &na;

    // Tightest α = q/|A|, β = |A|/|B|: need q²/(|A||B|) ≤ α²β = q²/(|A||B|).
    let alpha = BigRational::new(q.clone(), na.clone());
    let beta = BigRational::new(na.clone(), nb.clone());
    let folding = ab.exp_twice() <= &alpha * &alpha * beta;

    Ok(DiagramReport {
        size_rule,
        triangle,
        unfolding,
        folding,
    })
}

/// Which side of B the covering set multiplies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverSide {
    /// From |A·B| ≤ K|A|: X ⊂ B with B ⊂ A⁻¹·A·X and |X| ≤ K.
    Right,
    /// From |B·A| ≤ K|A|: X ⊂ B with B ⊂ X·A·A⁻¹ and |X| ≤ K.
    Left,
}

#[derive(Clone, Debug)]
pub struct RuzsaCover {
    pub side: CoverSide,
    pub x: GroupSubset,
    /// K = |A·B|/|A| (or |B·A|/|A|).
    pub k: BigRational,
    pub covers: bool,
    pub size_ok: bool,
}

impl RuzsaCover {
    pub fn holds(&self) -> bool {
        self.covers && self.size_ok && !self.x.is_empty()
    }
}

/// Greedy maximal X ⊂ B whose translates A·x (Right) or x·A (Left) are pairwise
/// disjoint. Maximality gives the covering; disjointness inside A·B gives |X| ≤ K.
pub fn ruzsa_cover<G: FiniteGroup + ?Sized>(
    g: &G,
    a: &GroupSubset,
    b: &GroupSubset,
    side: CoverSide,
) -> Result<RuzsaCover> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = g.order() as usize;
    let mut used = FixedBitSet::with_capacity(n);
    let mut chosen = Vec::new();
    let mut tr = Vec::with_capacity(a.len());
    for x in b.iter() {
        tr.clear();
        tr.extend(a.iter().map(|y| match side {
            CoverSide::Right => g.mul(y, x),
            CoverSide::Left => g.mul(x, y),
        }));
        if tr.iter().all(|&z| !used.contains(z as usize)) {
            for &z in &tr {
                used.insert(z as usize);
            }
            chosen.push(x);
        }
    }
    let x = GroupSubset::from_indices(g.order(), chosen);
    let ab = match side {
        CoverSide::Right => product(g, a, b),
        CoverSide::Left => product(g, b, a),
    };
    let k = ratio(ab.len(), a.len());
    let ainv = a.inverse(g);
    let hull = match side {
        CoverSide::Right => product(g, &product(g, &ainv, a), &x),
        CoverSide::Left => product(g, &product(g, &x, a), &ainv),
    };
    let covers = b.is_subset(&hull);
    let size_ok = x.len() * a.len() <= ab.len();
    Ok(RuzsaCover {
        side,
        x,
        k,
        covers,
        size_ok,
    })
}

/// r^e; the powers of a reduced fraction stay reduced.
pub fn rat_pow(r: &BigRational, e: u32) -> BigRational {
    BigRational::new_raw(r.numer().pow(e), r.denom().pow(e))
}

/// c · 2^k · r^e.
pub fn scaled_pow(c: u32, k: u32, r: &BigRational, e: u32) -> BigRational {
    let two_k = BigRational::from_integer(BigInt::from(c) << k as usize);
    two_k * rat_pow(r, e)
}
