//! Words of a free-group ball whose reduction lands in a proper subgroup.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegrp::words::{Ball, Sl2Word};
use crate::freegrp::GenSetZ;
use crate::groups::sl2::Sl2Group;
use crate::setcalc::group::FiniteGroup;
use crate::setcalc::products::is_subgroup;
use crate::setcalc::subset::GroupSubset;

/// Cap on the number of commutators formed from W_m.
pub const COMMUTATOR_BUDGET: u128 = 4_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct AdhocReport {
    pub p: u32,
    pub m: u32,
    pub subgroup_order: usize,
    pub ball_size: usize,
    /// |W_m|.
    pub count: usize,
    /// (4m+1)(8m+1).
    pub bound: u64,
    /// Whether [[x₁,x₂],[x₃,x₄]] = 1 holds in the free group on W_m⁴; None
    /// when W_m is too large to test and the count is within the bound anyway.
    pub relation_in_free_group: Option<bool>,
    /// count ≤ bound whenever the relation holds.
    pub holds: bool,
}

pub fn adhoc_bound(m: u32) -> u64 {
    (4 * m as u64 + 1) * (8 * m as u64 + 1)
}

/// The relation on W⁴ says every pair of commutators [x,y], x, y ∈ W,
/// commutes. Centralizers of non-trivial elements of a free group are cyclic,
/// so commuting is transitive on non-trivial elements and it suffices to test
/// every commutator against one non-trivial commutator. A failure usually
/// shows up early; the budget only bounds the work needed to confirm it holds.
pub fn two_step_relation_holds(w: &[Sl2Word]) -> Result<bool> {
    let need = (w.len() as u128) * (w.len() as u128);
    let mut formed = 0u128;
    let mut anchor: Option<Sl2Word> = None;
    for x in w {
        for y in w {
            formed += 1;
            if formed > COMMUTATOR_BUDGET {
                return Err(Error::BudgetExceeded {
                    what: "commutators of W_m",
                    needed: need,
                    budget: COMMUTATOR_BUDGET,
                });
            }
            let c = x.commutator(y);
            if c.is_empty() {
                continue;
            }
            match &anchor {
                None => anchor = Some(c),
                Some(a) => {
                    if !a.commutator(&c).is_empty() {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// W_m = {reduced w : |w| ≤ m, w mod p ∈ H} and its size against (4m+1)(8m+1).
pub fn adhoc_ball_count(s: &GenSetZ, grp: &Sl2Group, h: &GroupSubset, m: u32, budget: u128) -> Result<AdhocReport> {
    s.require_free_rank()?;
    if h.is_full() {
        return Err(Error::NotProper);
    }
    if !is_subgroup(grp, h) {
        return Err(Error::NotSubgroup);
    }
    let gens = s.indices_mod(grp)?;
    let ball = Ball::new(s.rank(), m, budget)?;
    let images = ball.map(grp.identity_index(), &gens, |&a, &b| grp.mul(a, b));
    let w: Vec<Sl2Word> = images
        .iter()
        .enumerate()
        .filter(|(_, &x)| h.contains(x))
        .map(|(i, _)| ball.word(i))
        .collect();
    let bound = adhoc_bound(m);
    let within = w.len() as u64 <= bound;
    let relation = match two_step_relation_holds(&w) {
        Ok(r) => Some(r),
        Err(Error::BudgetExceeded { .. }) if within => None,
        Err(e) => return Err(e),
    };
    Ok(AdhocReport {
        p: grp.p(),
        m,
        subgroup_order: h.len(),
        ball_size: ball.len(),
        count: w.len(),
        bound,
        relation_in_free_group: relation,
        holds: within || relation == Some(false),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegrp::words::DEFAULT_BALL_BUDGET;
    use crate::setcalc::products::generated_subgroup;

    #[test]
    fn bound_values() {
        assert_eq!(adhoc_bound(1), 45);
        assert_eq!(adhoc_bound(6), 1225);
        for m in 1..50 {
            assert!(adhoc_bound(m) <= 45 * (m as u64).pow(2));
        }
    }

    #[test]
    fn trivial_subgroup_far_from_kernel() {
        let grp = Sl2Group::new(101).unwrap();
        let s = GenSetZ::builtin("lubotzky").unwrap();
        let h = GroupSubset::identity(&grp);
        let r = adhoc_ball_count(&s, &grp, &h, 2, DEFAULT_BALL_BUDGET).unwrap();
        assert_eq!(r.count, 1);
        assert!(r.relation_in_free_group == Some(true) && r.holds);
    }

    #[test]
    fn radius_one_is_within_45() {
        let grp = Sl2Group::new(7).unwrap();
        let s = GenSetZ::builtin("lubotzky").unwrap();
        let h = generated_subgroup(&grp, &GroupSubset::singleton(grp.size(), grp.index_i64([1, 3, 0, 1]).unwrap()));
        let r = adhoc_ball_count(&s, &grp, &h, 1, DEFAULT_BALL_BUDGET).unwrap();
        assert_eq!(r.ball_size, 5);
        // 1, a and a⁻¹ reduce into the unipotent subgroup.
        assert_eq!(r.count, 3);
        assert!(r.holds);
    }

    #[test]
    fn torus_mod_11_radius_6() {
        let grp = Sl2Group::new(11).unwrap();
        let s = GenSetZ::builtin("lubotzky").unwrap();
        let t = generated_subgroup(&grp, &GroupSubset::singleton(grp.size(), grp.index_i64([2, 0, 0, 6]).unwrap()));
        let r = adhoc_ball_count(&s, &grp, &t, 6, DEFAULT_BALL_BUDGET).unwrap();
        assert_eq!(r.ball_size, 1457);
        assert_eq!(r.bound, 1225);
        assert!(r.holds);
    }

    #[test]
    fn commuting_words() {
        let a = Sl2Word::parse("a").unwrap();
        let aa = Sl2Word::parse("aa").unwrap();
        let b = Sl2Word::parse("b").unwrap();
        assert!(two_step_relation_holds(&[Sl2Word::empty(), a.clone(), aa.clone()]).unwrap());
        let ab = Sl2Word::parse("ab").unwrap();
        // [a,b] and [a,ab] = [a,b]·… do not commute in F₂.
        assert!(!two_step_relation_holds(&[a, b, ab, aa]).unwrap());
    }
}
