use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sl2lab::constants::{gap_bound, transfer_expansion};
use sl2lab::freegrp::{GenSetZ, Sl2Int};

/// {w xⁱ y x⁻ⁱ w⁻¹ : i < k} is a free basis whenever x, y generate a free group.
fn conjugated_basis(rng: &mut ChaCha8Rng) -> GenSetZ {
    let t = rng.gen_range(2..=4i64);
    let x = Sl2Int::from_i64([1, t, 0, 1]).unwrap();
    let y = Sl2Int::from_i64([1, 0, t, 1]).unwrap();
    let w = (0..rng.gen_range(0..3)).fold(Sl2Int::identity(), |acc, _| {
        acc.mul(if rng.gen_bool(0.5) { &x } else { &y })
    });
    let mut xi = Sl2Int::identity();
    let mut list = Vec::new();
    for _ in 0..rng.gen_range(2..=5) {
        list.push(w.mul(&xi).mul(&y).mul(&xi.inverse()).mul(&w.inverse()));
        xi = xi.mul(&x);
    }
    GenSetZ::from_matrices(list, true).unwrap()
}

#[test]
fn chain_bound_implies_closed_form_on_free_bases() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let s = conjugated_basis(&mut rng);
        let r = gap_bound(&s).unwrap();
        assert!(r.stated_form_implied, "|S| = {}", r.generators);
        assert!(r.gamma_within_lemma_bound);
        assert!(r.babai.holds);
    }
}

#[test]
fn report_json_is_stable() {
    let s = GenSetZ::builtin("standard").unwrap();
    let a = serde_json::to_string(&gap_bound(&s).unwrap()).unwrap();
    let b = serde_json::to_string(&gap_bound(&s).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn transfer_expansion_is_monotone_in_size() {
    let c = num_rational::BigRational::from_integer(3.into());
    let mut prev = transfer_expansion(1, &c).unwrap();
    for n in 2..200 {
        let next = transfer_expansion(n, &c).unwrap();
        assert!(next >= prev);
        prev = next;
    }
}
