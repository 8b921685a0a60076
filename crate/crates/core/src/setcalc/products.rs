//! Product sets, tripling constants, and subgroup closure.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;

use super::group::FiniteGroup;
use super::subset::GroupSubset;
use crate::error::{Error, Result};

/// Default cap on the size of any materialized product set.
pub const DEFAULT_MEM_BUDGET: u64 = 10_000_000;

/// A·B.
pub fn product<G: FiniteGroup + ?Sized>(g: &G, a: &GroupSubset, b: &GroupSubset) -> GroupSubset {
    let n = g.order();
    let mut bits = FixedBitSet::with_capacity(n as usize);
    let mut count = 0usize;
    'outer: for x in a.iter() {
        for y in b.iter() {
            if !bits.put(g.mul(x, y) as usize) {
                count += 1;
                if count == n as usize {
                    break 'outer;
                }
            }
        }
    }
    GroupSubset::from_bits(n, bits)
}

/// |A·B| without materializing the members list.
pub fn product_len<G: FiniteGroup + ?Sized>(g: &G, a: &GroupSubset, b: &GroupSubset) -> usize {
    product(g, a, b).len()
}

/// The n-fold product set A⁽ⁿ⁾.
pub fn product_set<G: FiniteGroup + ?Sized>(
    g: &G,
    a: &GroupSubset,
    n: usize,
    budget: u64,
) -> Result<GroupSubset> {
    Ok(power_sequence(g, a, n, budget)?.pop().expect("n >= 1"))
}

/// `[A⁽¹⁾, A⁽²⁾, …, A⁽ⁿ⁾]`.
pub fn power_sequence<G: FiniteGroup + ?Sized>(
    g: &G,
    a: &GroupSubset,
    n: usize,
    budget: u64,
) -> Result<Vec<GroupSubset>> {
    if n == 0 {
        return Err(Error::Domain("product set needs n >= 1".into()));
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut out = vec![a.clone()];
    for _ in 1..n {
        let last = out.last().expect("non-empty");
        let next = if last.is_full() {
            last.clone()
        } else {
            product(g, last, a)
        };
        if next.len() as u64 > budget {
            return Err(Error::BudgetExceeded {
                what: "product set",
                needed: next.len() as u128,
                budget: budget as u128,
            });
        }
        out.push(next);
    }
    Ok(out)
}

pub fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// trp(A) = |A⁽³⁾|/|A|.
pub fn tripling<G: FiniteGroup + ?Sized>(g: &G, a: &GroupSubset) -> Result<BigRational> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let a3 = product_set(g, a, 3, DEFAULT_MEM_BUDGET)?;
    Ok(ratio(a3.len(), a.len()))
}

/// The subgroup generated by `gens` (closure under right multiplication).
pub fn generated_subgroup<G: FiniteGroup + ?Sized>(g: &G, gens: &GroupSubset) -> GroupSubset {
    let n = g.order();
    let steps: Vec<u32> = gens.symmetrize(g).iter().collect();
    let mut bits = FixedBitSet::with_capacity(n as usize);
    let e = g.identity();
    bits.insert(e as usize);
    let mut stack = vec![e];
    while let Some(x) = stack.pop() {
        for &s in &steps {
            let y = g.mul(x, s);
            if !bits.put(y as usize) {
                stack.push(y);
            }
        }
    }
    GroupSubset::from_bits(n, bits)
}

pub fn generates<G: FiniteGroup + ?Sized>(g: &G, a: &GroupSubset) -> bool {
    generated_subgroup(g, a).is_full()
}

/// Exact closure test: non-empty, contains 1, closed under products and inverses.
pub fn is_subgroup<G: FiniteGroup + ?Sized>(g: &G, k: &GroupSubset) -> bool {
    if !k.contains_identity(g) {
        return false;
    }
    k.iter().all(|x| k.contains(g.inv(x)) && k.iter().all(|y| k.contains(g.mul(x, y))))
}

/// Order of an element.
pub fn element_order<G: FiniteGroup + ?Sized>(g: &G, x: u32) -> u32 {
    let e = g.identity();
    let mut y = x;
    let mut k = 1;
    while y != e {
        y = g.mul(y, x);
        k += 1;
    }
    k
}

/// Word length of every element with respect to `gens` (BFS from 1 along
/// right multiplication); `u32::MAX` marks elements not reached.
pub fn word_distances<G: FiniteGroup + ?Sized>(g: &G, gens: &GroupSubset) -> Vec<u32> {
    let n = g.order() as usize;
    let steps: Vec<u32> = gens.iter().collect();
    let mut dist = vec![u32::MAX; n];
    let e = g.identity();
    dist[e as usize] = 0;
    let mut frontier = vec![e];
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for &x in &frontier {
            for &s in &steps {
                let y = g.mul(x, s) as usize;
                if dist[y] == u32::MAX {
                    dist[y] = d;
                    next.push(y as u32);
                }
            }
        }
        frontier = next;
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::sl2::Sl2Group;
    use crate::setcalc::group::CyclicGroup;

    #[test]
    fn unipotent_three_set_mod_7() {
        let g = Sl2Group::new(7).unwrap();
        let u = g.index_i64([1, 1, 0, 1]).unwrap();
        let a = GroupSubset::from_indices(g.size(), [g.identity_index(), u, g.inv_idx(u)])
            .symmetric_with_identity(&g);
        let a3 = product_set(&g, &a, 3, DEFAULT_MEM_BUDGET).unwrap();
        assert_eq!(a3.len(), 7);
        assert_eq!(tripling(&g, &a).unwrap(), ratio(7, 3));
        let a4 = product_set(&g, &a, 4, DEFAULT_MEM_BUDGET).unwrap();
        assert_eq!(a4.len(), 7);
    }

    #[test]
    fn subgroup_products_are_closed() {
        let z = CyclicGroup::new(12).unwrap();
        let k = GroupSubset::from_indices(12, [0, 4, 8]);
        assert!(is_subgroup(&z, &k));
        for n in 1..5 {
            assert_eq!(product_set(&z, &k, n, DEFAULT_MEM_BUDGET).unwrap(), k);
        }
        assert_eq!(tripling(&z, &k).unwrap(), ratio(1, 1));
        assert!(!is_subgroup(&z, &GroupSubset::from_indices(12, [0, 4])));
    }

    #[test]
    fn budget_is_enforced() {
        let z = CyclicGroup::new(100).unwrap();
        let a = GroupSubset::from_indices(100, [0, 1, 99]);
        let err = product_set(&z, &a, 5, 8).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn standard_generators_generate() {
        let g = Sl2Group::new(5).unwrap();
        let u = g.index_i64([1, 1, 0, 1]).unwrap();
        let l = g.index_i64([1, 0, 1, 1]).unwrap();
        assert!(generates(&g, &GroupSubset::from_indices(g.size(), [u, l])));
        assert!(!generates(&g, &GroupSubset::from_indices(g.size(), [u])));
        assert_eq!(element_order(&g, u), 5);
    }
}
