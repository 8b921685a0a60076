use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use sl2lab::certified::Interval;
use sl2lab::groups::Sl2Group;
use sl2lab::harness::energy_bruteforce;
use sl2lab::setcalc::products::product;
use sl2lab::setcalc::{energy, CyclicGroup, DihedralGroup, FiniteGroup, GroupSubset};
use sl2lab::walks::walk;

fn subset(universe: u32, items: &[u32]) -> GroupSubset {
    GroupSubset::from_indices(universe, items.iter().map(|x| x % universe))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ratio_enclosure_contains_value(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x = Interval::from_ratio(n, d).unwrap();
        let r = BigRational::new(BigInt::from(n), BigInt::from(d));
        prop_assert!(x.contains_rational(&r));
    }

    #[test]
    fn ln_and_sqrt_enclose_float_values(n in 1u64..1_000_000, d in 1u64..1000) {
        let x = Interval::from_ratio(n, d).unwrap();
        let v = n as f64 / d as f64;
        let l = x.ln().unwrap();
        prop_assert!(l.lo_f64() <= v.ln() + 1e-12 && v.ln() - 1e-12 <= l.hi_f64());
        let s = x.sqrt().unwrap();
        prop_assert!(s.sqr().lo_rational() <= x.hi_rational());
        prop_assert!(s.sqr().hi_rational() >= x.lo_rational());
    }

    #[test]
    fn interval_products_are_monotone(a in 1i64..1000, b in 1i64..1000) {
        let x = Interval::from_ratio(a, 7).unwrap();
        let y = Interval::from_ratio(b, 11).unwrap();
        let r = BigRational::new(BigInt::from(a * b), BigInt::from(77));
        prop_assert!(x.mul(&y).contains_rational(&r));
        prop_assert!(x.mul(&y).div(&y).unwrap().contains_rational(&BigRational::new(BigInt::from(a), BigInt::from(7))));
    }

    #[test]
    fn walks_conserve_mass_and_stay_symmetric(items in prop::collection::vec(0u32..120, 1..6), n in 1u32..6) {
        let g = Sl2Group::new(5).unwrap();
        let s = subset(g.size(), &items).symmetrize(&g);
        let d = walk(&g, s.members(), n).unwrap();
        prop_assert_eq!(d.total(), (s.len() as u128).pow(n));
        prop_assert!(d.is_symmetric(&g));
    }

    #[test]
    fn product_sets_grow_and_are_monotone(
        a in prop::collection::vec(0u32..60, 1..12),
        extra in prop::collection::vec(0u32..60, 0..6),
        b in prop::collection::vec(0u32..60, 1..12),
    ) {
        let g = DihedralGroup::new(30).unwrap();
        let n = g.order();
        let (sa, sb) = (subset(n, &a), subset(n, &b));
        let bigger = sa.union(&subset(n, &extra));
        let ab = product(&g, &sa, &sb);
        prop_assert!(ab.len() >= sa.len().max(sb.len()));
        prop_assert!(ab.is_subset(&product(&g, &bigger, &sb)));
    }

    #[test]
    fn energy_matches_quadruple_count(
        a in prop::collection::vec(0u32..40, 1..8),
        b in prop::collection::vec(0u32..40, 1..8),
    ) {
        let g = CyclicGroup::new(40).unwrap();
        let (sa, sb) = (subset(40, &a), subset(40, &b));
        let e = energy(&g, &sa, &sb).unwrap().energy;
        prop_assert_eq!(e.clone(), energy_bruteforce(&g, &sa, &sb));
        // |A||B| ≤ E ≤ |A|²|B|.
        let (x, y) = (sa.len() as u64, sb.len() as u64);
        prop_assert!(e >= (x * y).into() && e <= (x * x * y).into());
    }
}
