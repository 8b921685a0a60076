//! Exact checks of the growth inequalities on explicit subsets of SL₂(F_p).
//!
//! Every fractional power is cleared into an integer comparison before testing.

use num_rational::BigRational;
use serde::Serialize;

use crate::certified::{power_product_ge, Interval};
use crate::error::{Error, Result};
use crate::groups::sl2::{Sl2Group, Sl2ModP};
use crate::groups::structure::{classify, is_sreg, MaximalTorus};
use crate::setcalc::products::{generates, power_sequence, product, ratio, word_distances, DEFAULT_MEM_BUDGET};
use crate::setcalc::subset::GroupSubset;

/// Denominator of the growth exponent δ = 1/3024.
pub const DELTA_DEN: u32 = 3024;
/// Denominator of the sharper intermediate exponent 1/1512.
pub const SHARP_DELTA_DEN: u32 = 1512;
/// The diameter exponent C in diam ≤ 3 (log|G|)^C.
pub const BABAI_EXPONENT: u32 = 3323;

/// Symmetric, contains 1, generates G.
pub fn require_generating_symmetric(grp: &Sl2Group, h: &GroupSubset) -> Result<()> {
    if h.universe() != grp.size() {
        return Err(Error::Domain("subset belongs to another group".into()));
    }
    if !h.is_symmetric(grp) || !h.contains_identity(grp) {
        return Err(Error::NotSymmetric("set must be symmetric and contain 1".into()));
    }
    if !generates(grp, h) {
        return Err(Error::NotGenerating);
    }
    Ok(())
}

fn triple(grp: &Sl2Group, h: &GroupSubset) -> Result<GroupSubset> {
    Ok(power_sequence(grp, h, 3, DEFAULT_MEM_BUDGET)?.pop().expect("3 terms"))
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthCase {
    TripleIsG,
    GrowthHolds,
    Violation,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthVerdict {
    pub case: GrowthCase,
    pub size: usize,
    pub triple_size: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub ratio: BigRational,
    /// |H⁽³⁾|³⁰²⁴ ≥ |H|³⁰²⁵.
    pub exponent_check: bool,
    /// trp(H) ≥ 2^{−1/2}|H|^{1/1512}, evaluated when requested, p ≥ 7 and H⁽³⁾ ≠ G.
    pub sharp_check: Option<bool>,
}

pub fn helfgott_check(grp: &Sl2Group, h: &GroupSubset) -> Result<GrowthVerdict> {
    helfgott_check_with(grp, h, false)
}

pub fn helfgott_check_with(grp: &Sl2Group, h: &GroupSubset, sharp: bool) -> Result<GrowthVerdict> {
    require_generating_symmetric(grp, h)?;
    let h3 = triple(grp, h)?;
    let (n, n3) = (h.len() as u64, h3.len() as u64);
    let exponent_check = power_product_ge(&[(n3, DELTA_DEN)], &[(n, DELTA_DEN + 1)]);
    let full = h3.is_full();
    let sharp_check = (sharp && !full && grp.p() >= 7).then(|| {
        // 2^{756}·|H⁽³⁾|^{1512} ≥ |H|^{1513}
        power_product_ge(
            &[(2, SHARP_DELTA_DEN / 2), (n3, SHARP_DELTA_DEN)],
            &[(n, SHARP_DELTA_DEN + 1)],
        )
    });
    let case = if full {
        GrowthCase::TripleIsG
    } else if exponent_check {
        GrowthCase::GrowthHolds
    } else {
        GrowthCase::Violation
    };
    Ok(GrowthVerdict {
        case,
        size: h.len(),
        triple_size: h3.len(),
        ratio: ratio(h3.len(), h.len()),
        exponent_check,
        sharp_check,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasirandomReport {
    pub size: usize,
    pub threshold_met: bool,
    pub triple_is_group: bool,
    pub holds: bool,
}

/// If |H|⁹ ≥ 2⁹|G|⁸ then H⁽³⁾ = G.
pub fn qr_check(grp: &Sl2Group, h: &GroupSubset) -> Result<QuasirandomReport> {
    if grp.p() < 3 {
        return Err(Error::EvenCharacteristic(grp.p()));
    }
    if h.is_empty() {
        return Err(Error::EmptySet);
    }
    let threshold_met = power_product_ge(&[(h.len() as u64, 9)], &[(2, 9), (grp.size() as u64, 8)]);
    let triple_is_group = if threshold_met {
        triple(grp, h)?.is_full()
    } else {
        false
    };
    Ok(QuasirandomReport {
        size: h.len(),
        threshold_met,
        triple_is_group,
        holds: !threshold_met || triple_is_group,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NonconcentrationReport {
    pub trace: u32,
    pub class_hits: usize,
    pub size: usize,
    pub triple_size: usize,
    /// |Cl(g) ∩ H|³ ≤ 343·α²·|H|² = 343·|H⁽³⁾|².
    pub small_intersection: bool,
    /// α > |H|^{1/28}, i.e. |H⁽³⁾|²⁸ > |H|²⁹.
    pub large_tripling: bool,
    pub holds: bool,
}

/// |Cl(g) ∩ H| ≤ 7α^{2/3}|H|^{2/3} unless α > |H|^{1/28}; the class of a regular
/// semisimple g over the closure is its trace fiber.
pub fn nonconcentration_check(grp: &Sl2Group, h: &GroupSubset, g: &Sl2ModP) -> Result<NonconcentrationReport> {
    if !is_sreg(g) {
        return Err(Error::NotStronglyRegular);
    }
    require_generating_symmetric(grp, h)?;
    let t = g.trace();
    let hits = h.iter().filter(|&x| grp.element(x).trace() == t).count();
    let h3 = triple(grp, h)?;
    let (n, n3) = (h.len() as u128, h3.len() as u128);
    let l = hits as u128;
    let small_intersection = l * l * l <= 343 * n3 * n3;
    let large_tripling = !power_product_ge(&[(n as u64, 29)], &[(n3 as u64, 28)]);
    Ok(NonconcentrationReport {
        trace: t,
        class_hits: hits,
        size: h.len(),
        triple_size: h3.len(),
        small_intersection,
        large_tripling,
        holds: small_intersection || large_tripling,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SubkeyReport {
    pub gamma: u32,
    pub hits: usize,
    pub size: usize,
    pub triple_size: usize,
    pub holds: bool,
}

/// |H ∩ x·C_γ·x⁻¹| ≤ 2α²|H|^{1/3}, with C_γ the upper-triangular matrices with
/// diagonal (γ, γ⁻¹); checked as L³·|H|⁵ ≤ 8·|H⁽³⁾|⁶.
pub fn subkey_check(grp: &Sl2Group, h: &GroupSubset, x: &Sl2ModP, gamma: u32) -> Result<SubkeyReport> {
    let f = grp.field();
    let gamma = gamma % f.p();
    if gamma == 0 {
        return Err(Error::DivisionByZero(f.p()));
    }
    require_generating_symmetric(grp, h)?;
    let xi = x.inverse();
    let hits = h
        .iter()
        .filter(|&y| {
            let c = xi.mul_same(&grp.element(y)).mul_same(x);
            c.c == 0 && c.a == gamma
        })
        .count();
    let h3 = triple(grp, h)?;
    let holds = hits == 0
        || power_product_ge(
            &[(8, 1), (h3.len() as u64, 6)],
            &[(hits as u64, 3), (h.len() as u64, 5)],
        );
    Ok(SubkeyReport {
        gamma,
        hits,
        size: h.len(),
        triple_size: h3.len(),
        holds,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DichotomyReport {
    pub involved: bool,
    pub torus_hits: usize,
    /// |T_reg ∩ H⁽²⁾|.
    pub regular_hits: usize,
    /// (14c)³·|H⁽³⁾|¹² ≥ |H|¹³ with c = |T_reg ∩ H⁽²⁾|.
    pub key_inequality: Option<bool>,
    /// |H⁽³⁾|¹⁶⁸ ≥ |H|¹⁶⁹.
    pub large_tripling: Option<bool>,
    pub holds: bool,
}

/// Not involved ⇒ |H ∩ T| ≤ 4; involved (H symmetric generating ∋ 1) ⇒
/// |T_reg ∩ H⁽²⁾| ≥ α⁻⁴|H|^{1/3}/14 unless α ≥ |H|^{1/168}.
pub fn dichotomy_check(grp: &Sl2Group, h: &GroupSubset, t: &MaximalTorus) -> Result<DichotomyReport> {
    let torus_hits = h.intersection_len(&t.points);
    let involved = crate::groups::structure::involved(grp, h, t);
    if !involved {
        return Ok(DichotomyReport {
            involved,
            torus_hits,
            regular_hits: 0,
            key_inequality: None,
            large_tripling: None,
            holds: torus_hits <= 4,
        });
    }
    require_generating_symmetric(grp, h)?;
    let seq = power_sequence(grp, h, 3, DEFAULT_MEM_BUDGET)?;
    let regular_hits = seq[1]
        .intersection(&t.points)
        .iter()
        .filter(|&x| !grp.element(x).is_central())
        .count();
    let (n, n3) = (h.len() as u64, seq[2].len() as u64);
    let key = regular_hits > 0
        && power_product_ge(&[(14 * regular_hits as u64, 3), (n3, 12)], &[(n, 13)]);
    let large = power_product_ge(&[(n3, 168)], &[(n, 169)]);
    Ok(DichotomyReport {
        involved,
        torus_hits,
        regular_hits,
        key_inequality: Some(key),
        large_tripling: Some(large),
        holds: key || large,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EscapeReport {
    pub p: u32,
    /// Index of a strongly regular element of H⁽³⁾.
    pub witness: Option<u32>,
    pub witness_trace: Option<u32>,
    /// A witness exists, or p < 7 where none is promised.
    pub holds: bool,
}

/// Looks for x ∈ H⁽³⁾ with Tr x ∉ {0, ±2}, preferring elements of H itself.
pub fn escape_check(grp: &Sl2Group, h: &GroupSubset) -> Result<EscapeReport> {
    require_generating_symmetric(grp, h)?;
    let sreg = |x: u32| classify(&grp.element(x)).sreg;
    let witness = match h.iter().find(|&x| sreg(x)) {
        Some(x) => Some(x),
        None => triple(grp, h)?.iter().find(|&x| sreg(x)),
    };
    Ok(EscapeReport {
        p: grp.p(),
        witness,
        witness_trace: witness.map(|x| grp.element(x).trace()),
        holds: witness.is_some() || grp.p() < 7,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EscapeSearchReport {
    pub p: u32,
    pub candidates: usize,
    /// A symmetric generating H ∋ 1 whose triple product has no strongly regular element.
    pub example: Option<Vec<String>>,
}

/// Searches symmetric generating sets {1, a^{±1}, b^{±1}} (and with one more
/// pair c^{±1} when `triples`) built from non-strongly-regular elements, with a
/// running over one representative per trace, for a set whose triple product
/// contains no strongly regular element.
pub fn escape_sharpness_search(grp: &Sl2Group, triples: bool) -> EscapeSearchReport {
    let e = grp.identity_index();
    let weak: Vec<u32> = (0..grp.size())
        .filter(|&x| !classify(&grp.element(x)).sreg)
        .collect();
    let mut reps: Vec<u32> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for &x in &weak {
        let el = grp.element(x);
        if el.is_central() {
            continue;
        }
        // one representative per (trace, order)
        let key = (el.trace(), crate::setcalc::products::element_order(grp, x));
        if seen.insert(key) {
            reps.push(x);
        }
    }
    let mut candidates = 0usize;
    let test = |items: &[u32], candidates: &mut usize| -> Option<GroupSubset> {
        let mut v = vec![e];
        for &x in items {
            v.push(x);
            v.push(grp.inv_idx(x));
        }
        let h = GroupSubset::from_indices(grp.size(), v);
        *candidates += 1;
        if !generates(grp, &h) {
            return None;
        }
        let h3 = product(grp, &product(grp, &h, &h), &h);
        if h3.iter().any(|x| classify(&grp.element(x)).sreg) {
            None
        } else {
            Some(h)
        }
    };
    let mut found = None;
    'outer: for &a in &reps {
        for &b in &weak {
            if let Some(h) = test(&[a, b], &mut candidates) {
                found = Some(h);
                break 'outer;
            }
        }
    }
    if found.is_none() && triples {
        'outer3: for &a in &reps {
            for (i, &b) in weak.iter().enumerate() {
                for &c in &weak[i + 1..] {
                    if let Some(h) = test(&[a, b, c], &mut candidates) {
                        found = Some(h);
                        break 'outer3;
                    }
                }
            }
        }
    }
    EscapeSearchReport {
        p: grp.p(),
        candidates,
        example: found.map(|h| h.iter().map(|x| grp.element(x).to_string()).collect()),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitStabilizerReport {
    pub stabilizer_hits: usize,
    pub orbit: usize,
    pub size: usize,
    pub holds: bool,
}

/// |C_G(g) ∩ H⁽²⁾| · |{hgh⁻¹ : h ∈ H}| ≥ |H| for symmetric H.
pub fn orbit_stabilizer_check(grp: &Sl2Group, h: &GroupSubset, g: &Sl2ModP) -> Result<OrbitStabilizerReport> {
    if !h.is_symmetric(grp) || h.is_empty() {
        return Err(Error::NotSymmetric("set must be symmetric and non-empty".into()));
    }
    let h2 = product(grp, h, h);
    let stabilizer_hits = h2.iter().filter(|&x| grp.element(x).commutes_with(g)).count();
    let orbit = GroupSubset::from_indices(
        grp.size(),
        h.iter().map(|x| {
            let y = grp.element(x);
            grp.index_of(&y.mul_same(g).mul_same(&y.inverse()))
        }),
    )
    .len();
    Ok(OrbitStabilizerReport {
        stabilizer_hits,
        orbit,
        size: h.len(),
        holds: stabilizer_hits * orbit >= h.len(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BabaiReport {
    pub diameter: u32,
    pub group_order: u32,
    /// Lower end of a certified enclosure of log₂(3·(ln|G|)^C).
    pub log2_bound: String,
    pub holds: bool,
}

/// Exact Cayley-graph diameter against 3·(ln|G|)^C, C = 3323.
pub fn babai_check(grp: &Sl2Group, s: &GroupSubset) -> Result<BabaiReport> {
    if !s.is_symmetric(grp) {
        return Err(Error::NotSymmetric("generating set must be symmetric".into()));
    }
    let dist = word_distances(grp, s);
    let diameter = *dist.iter().max().expect("non-empty group");
    if diameter == u32::MAX {
        return Err(Error::NotGenerating);
    }
    let ln_g = Interval::from_int(grp.size()).ln()?;
    // log₂ 3 + C·log₂ ln|G|
    let rhs = Interval::from_int(3)
        .log2()?
        .add(&ln_g.log2()?.mul_int(BABAI_EXPONENT));
    let lhs = Interval::from_int(diameter.max(1)).log2()?;
    Ok(BabaiReport {
        diameter,
        group_order: grp.size(),
        log2_bound: rhs.lo_decimal(),
        holds: lhs.le(&rhs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard(grp: &Sl2Group) -> GroupSubset {
        let u = grp.index_i64([1, 1, 0, 1]).unwrap();
        let l = grp.index_i64([1, 0, 1, 1]).unwrap();
        GroupSubset::from_indices(
            grp.size(),
            [grp.identity_index(), u, grp.inv_idx(u), l, grp.inv_idx(l)],
        )
    }

    #[test]
    fn growth_on_full_group_and_standard_set() {
        let grp = Sl2Group::new(7).unwrap();
        let v = helfgott_check(&grp, &GroupSubset::full(grp.size())).unwrap();
        assert_eq!(v.case, GrowthCase::TripleIsG);
        let v = helfgott_check_with(&grp, &standard(&grp), true).unwrap();
        assert_eq!(v.case, GrowthCase::GrowthHolds);
        assert_eq!(v.sharp_check, Some(true));
    }

    #[test]
    fn nonconcentration_full_group_mod_7() {
        let grp = Sl2Group::new(7).unwrap();
        let g = grp.from_i64([2, 0, 0, 4]).unwrap();
        let r = nonconcentration_check(&grp, &GroupSubset::full(grp.size()), &g).unwrap();
        assert_eq!(r.class_hits, 56);
        assert!(r.small_intersection);
        let u = grp.from_i64([1, 1, 0, 1]).unwrap();
        assert!(nonconcentration_check(&grp, &GroupSubset::full(grp.size()), &u).is_err());
    }

    #[test]
    fn subkey_full_group() {
        let grp = Sl2Group::new(7).unwrap();
        let x = Sl2ModP::identity(7);
        let r = subkey_check(&grp, &GroupSubset::full(grp.size()), &x, 1).unwrap();
        assert_eq!(r.hits, 7);
        assert!(r.holds);
    }

    #[test]
    fn dichotomy_full_group() {
        let grp = Sl2Group::new(7).unwrap();
        let g = grp.from_i64([2, 0, 0, 4]).unwrap();
        let t = crate::groups::structure::centralizer_torus(&grp, &g).unwrap();
        let r = dichotomy_check(&grp, &GroupSubset::full(grp.size()), &t).unwrap();
        assert!(r.involved && r.holds);
        assert_eq!(r.regular_hits, 4);
        let one = GroupSubset::identity(&grp);
        let r = dichotomy_check(&grp, &one, &t).unwrap();
        assert!(!r.involved && r.holds);
    }

    #[test]
    fn escape_examples() {
        let grp = Sl2Group::new(7).unwrap();
        let d = grp.index_i64([2, 0, 0, 4]).unwrap();
        let h = standard(&grp).with(d).with(grp.inv_idx(d));
        let r = escape_check(&grp, &h).unwrap();
        let w = r.witness.unwrap();
        assert!(w == d || w == grp.inv_idx(d));
        let r = escape_check(&grp, &standard(&grp)).unwrap();
        assert!(r.holds && r.witness.is_some());
    }

    #[test]
    fn babai_small() {
        let grp = Sl2Group::new(5).unwrap();
        let r = babai_check(&grp, &standard(&grp)).unwrap();
        assert!(r.holds && r.diameter > 1 && r.diameter < 10);
        let all = GroupSubset::full(grp.size());
        assert_eq!(babai_check(&grp, &all).unwrap().diameter, 1);
    }

    #[test]
    fn qr_full_group() {
        // |G|⁹ ≥ 2⁹|G|⁸ needs |G| ≥ 512
        let grp = Sl2Group::new(5).unwrap();
        let r = qr_check(&grp, &GroupSubset::full(grp.size())).unwrap();
        assert!(!r.threshold_met && r.holds);
        let grp = Sl2Group::new(11).unwrap();
        let r = qr_check(&grp, &GroupSubset::full(grp.size())).unwrap();
        assert!(r.threshold_met && r.triple_is_group && r.holds);
    }
}
