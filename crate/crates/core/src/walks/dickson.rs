//! Proper subgroups of SL₂(F_p), p ≥ 5: either |H| ≤ 120 or the derived
//! subgroup of H is abelian, i.e. [[x₁,x₂],[x₃,x₄]] = 1 on H⁴.

use std::collections::{BTreeMap, HashSet};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::sl2::Sl2Group;
use crate::setcalc::group::FiniteGroup;
use crate::setcalc::products::{element_order, generated_subgroup, is_subgroup};
use crate::setcalc::subset::GroupSubset;

pub const SMALL_ORDER: usize = 120;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DicksonCase {
    Small,
    MetabelianRelation,
    Violation,
}

#[derive(Clone, Debug, Serialize)]
pub struct DicksonReport {
    pub p: u32,
    pub order: usize,
    pub case: DicksonCase,
    /// Distinct commutators [x, y], x, y ∈ H (0 when |H| ≤ 120).
    pub commutators: usize,
    /// Directly evaluated random quadruples, all of which satisfied the relation.
    pub sampled_quadruples: usize,
}

pub fn commutator<G: FiniteGroup + ?Sized>(g: &G, x: u32, y: u32) -> u32 {
    g.mul(g.mul(x, y), g.mul(g.inv(x), g.inv(y)))
}

/// Classifies a proper subgroup. The relation on all of H⁴ is equivalent to
/// the commutators of H commuting pairwise, which is checked exhaustively;
/// `samples` random quadruples are also evaluated directly.
pub fn dickson_classify<R: Rng>(grp: &Sl2Group, h: &GroupSubset, rng: &mut R, samples: usize) -> Result<DicksonReport> {
    if grp.p() < 5 {
        return Err(Error::Precondition(format!("p = {} < 5", grp.p())));
    }
    if h.is_full() {
        return Err(Error::NotProper);
    }
    if !is_subgroup(grp, h) {
        return Err(Error::NotSubgroup);
    }
    let mut report = DicksonReport {
        p: grp.p(),
        order: h.len(),
        case: DicksonCase::Small,
        commutators: 0,
        sampled_quadruples: 0,
    };
    if h.len() <= SMALL_ORDER {
        return Ok(report);
    }
    let mut comms: HashSet<u32> = HashSet::new();
    for x in h.iter() {
        for y in h.iter() {
            comms.insert(commutator(grp, x, y));
        }
    }
    let cs: Vec<u32> = comms.into_iter().collect();
    report.commutators = cs.len();
    let abelian = cs
        .iter()
        .enumerate()
        .all(|(i, &a)| cs[i + 1..].iter().all(|&b| grp.mul(a, b) == grp.mul(b, a)));
    let members = h.members();
    let e = grp.identity();
    let mut sampled_ok = true;
    for _ in 0..samples {
        let mut pick = || members[rng.gen_range(0..members.len())];
        let (a, b, c, d) = (pick(), pick(), pick(), pick());
        let v = commutator(grp, commutator(grp, a, b), commutator(grp, c, d));
        report.sampled_quadruples += 1;
        if v != e {
            sampled_ok = false;
            break;
        }
    }
    report.case = if abelian && sampled_ok {
        DicksonCase::MetabelianRelation
    } else {
        DicksonCase::Violation
    };
    Ok(report)
}

/// Order together with the sorted histogram of element orders; invariant
/// under conjugation.
pub fn subgroup_signature(grp: &Sl2Group, h: &GroupSubset) -> (usize, Vec<(u32, usize)>) {
    let mut hist: BTreeMap<u32, usize> = BTreeMap::new();
    for x in h.iter() {
        *hist.entry(element_order(grp, x)).or_default() += 1;
    }
    (h.len(), hist.into_iter().collect())
}

fn random_borel_pair<R: Rng>(grp: &Sl2Group, rng: &mut R) -> [u32; 2] {
    let p = grp.p() as i64;
    let a = rng.gen_range(1..p);
    let ainv = (1..p).find(|&b| (a * b) % p == 1).expect("F_p is a field");
    let d = grp.index_i64([a, rng.gen_range(0..p), 0, ainv]).expect("det 1");
    let u = grp.index_i64([1, rng.gen_range(1..p), 0, 1]).expect("det 1");
    let g = rng.gen_range(0..grp.size());
    let conj = |x: u32| grp.mul(grp.mul(g, x), grp.inv(g));
    [conj(d), conj(u)]
}

fn random_element_of_small_order<R: Rng>(grp: &Sl2Group, rng: &mut R) -> u32 {
    loop {
        let x = rng.gen_range(0..grp.size());
        if matches!(element_order(grp, x), 3 | 4 | 6 | 8 | 10) {
            return x;
        }
    }
}

/// Proper subgroups found as closures of random seeds (one element, two
/// elements, two elements of a random Borel subgroup, two elements of small
/// order), one per signature.
pub fn random_subgroups<R: Rng>(grp: &Sl2Group, rng: &mut R, attempts: usize) -> Vec<GroupSubset> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for t in 0..attempts {
        let seeds: Vec<u32> = match t % 4 {
            0 => vec![rng.gen_range(0..grp.size())],
            1 => vec![rng.gen_range(0..grp.size()), rng.gen_range(0..grp.size())],
            2 => random_borel_pair(grp, rng).to_vec(),
            _ => vec![
                random_element_of_small_order(grp, rng),
                random_element_of_small_order(grp, rng),
            ],
        };
        let h = generated_subgroup(grp, &GroupSubset::from_indices(grp.size(), seeds));
        if h.is_full() {
            continue;
        }
        if seen.insert(subgroup_signature(grp, &h)) {
            out.push(h);
        }
    }
    out
}
