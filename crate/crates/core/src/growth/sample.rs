//! Random symmetric subsets of SL₂(F_p) for the growth harnesses.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::groups::sl2::Sl2Group;
use crate::setcalc::products::{generated_subgroup, generates, product};
use crate::setcalc::subset::GroupSubset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    /// Random elements with their inverses, plus 1.
    RandomSymmetric,
    /// Ball of radius 1 or 2 around 1 for two random generators.
    GeneratorBall,
    /// A random cyclic, unipotent or Borel subgroup with one extra pair x^{±1}.
    SubgroupPlus,
}

pub const SAMPLE_KINDS: [SampleKind; 3] = [
    SampleKind::RandomSymmetric,
    SampleKind::GeneratorBall,
    SampleKind::SubgroupPlus,
];

fn with_inverses(grp: &Sl2Group, items: &[u32]) -> GroupSubset {
    let mut v = vec![grp.identity_index()];
    for &x in items {
        v.push(x);
        v.push(grp.inv_idx(x));
    }
    GroupSubset::from_indices(grp.size(), v)
}

/// A symmetric set containing 1 of the given kind (it may fail to generate).
pub fn sample_symmetric<R: Rng>(grp: &Sl2Group, rng: &mut R, kind: SampleKind, max_pairs: usize) -> GroupSubset {
    let n = grp.size();
    match kind {
        SampleKind::RandomSymmetric => {
            let k = rng.gen_range(1..=max_pairs.max(1));
            let items: Vec<u32> = (0..k).map(|_| rng.gen_range(0..n)).collect();
            with_inverses(grp, &items)
        }
        SampleKind::GeneratorBall => {
            let s = with_inverses(grp, &[rng.gen_range(0..n), rng.gen_range(0..n)]);
            if rng.gen_bool(0.5) {
                s
            } else {
                product(grp, &s, &s)
            }
        }
        SampleKind::SubgroupPlus => {
            let z = grp.element(rng.gen_range(0..n));
            let zi = z.inverse();
            let conj = |m: [i64; 4]| {
                let x = grp.from_i64(m).expect("valid matrix");
                grp.index_of(&z.mul_same(&x).mul_same(&zi))
            };
            let sub = match rng.gen_range(0..3) {
                0 => generated_subgroup(grp, &GroupSubset::singleton(n, rng.gen_range(0..n))),
                1 => generated_subgroup(grp, &GroupSubset::singleton(n, conj([1, 1, 0, 1]))),
                _ => {
                    let f = grp.field();
                    let r = f.smallest_nonresidue().expect("odd p");
                    let gens = [conj([1, 1, 0, 1]), conj([r as i64, 0, 0, f.inv(r).expect("unit") as i64])];
                    generated_subgroup(grp, &GroupSubset::from_indices(n, gens))
                }
            };
            sub.union(&with_inverses(grp, &[rng.gen_range(0..n)]))
        }
    }
}

/// Draws until a generating sample appears; non-generating draws are discarded.
pub fn sample_generating<R: Rng>(
    grp: &Sl2Group,
    rng: &mut R,
    max_pairs: usize,
    max_tries: usize,
) -> Option<(GroupSubset, SampleKind)> {
    for _ in 0..max_tries {
        let kind = *SAMPLE_KINDS.choose(rng).expect("non-empty");
        let h = sample_symmetric(grp, rng, kind, max_pairs);
        if generates(grp, &h) {
            return Some((h, kind));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_symmetric_with_identity() {
        let grp = Sl2Group::new(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kind in SAMPLE_KINDS {
            for _ in 0..20 {
                let h = sample_symmetric(&grp, &mut rng, kind, 6);
                assert!(h.is_symmetric(&grp) && h.contains_identity(&grp));
            }
        }
        let (h, _) = sample_generating(&grp, &mut rng, 6, 100).unwrap();
        assert!(generates(&grp, &h));
    }
}
