//! Simple random walk on the 2k-regular tree, by distance-profile dynamic programming.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest step count accepted by the tree DP.
pub const MAX_TREE_STEPS: u32 = 4096;

/// `profile[d]` = number of length-n walks from the root ending at distance d.
pub fn distance_profile(k: u32, n: u32) -> Result<Vec<BigUint>> {
    if k < 1 {
        return Err(Error::Domain("tree walk needs rank >= 1".into()));
    }
    if n > MAX_TREE_STEPS {
        return Err(Error::BudgetExceeded {
            what: "tree walk steps",
            needed: n as u128,
            budget: MAX_TREE_STEPS as u128,
        });
    }
    let deg = BigUint::from(2 * k);
    let fwd = BigUint::from(2 * k - 1);
    let mut cur = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); cur.len() + 1];
        for (d, c) in cur.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if d == 0 {
                next[1] += c * &deg;
            } else {
                next[d + 1] += c * &fwd;
                next[d - 1] += c;
            }
        }
        cur = next;
    }
    Ok(cur)
}

/// Number of vertices at distance d from the root.
pub fn sphere_size(k: u32, d: u32) -> BigUint {
    if d == 0 {
        BigUint::one()
    } else {
        BigUint::from(2 * k) * BigUint::from(2 * k - 1).pow(d - 1)
    }
}

/// Walk counts to one fixed vertex at each distance: `profile[d] / sphere_size(d)`.
pub fn per_vertex_counts(k: u32, n: u32) -> Result<Vec<BigUint>> {
    let prof = distance_profile(k, n)?;
    Ok(prof
        .into_iter()
        .enumerate()
        .map(|(d, c)| {
            let s = sphere_size(k, d as u32);
            debug_assert!((&c % &s).is_zero());
            c / s
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct KestenReport {
    pub rank: u32,
    pub steps: u32,
    /// Walk count (out of (2k)^n) to a vertex at each distance.
    pub counts: Vec<String>,
    pub return_count: String,
    pub holds: bool,
}

/// Checks P(X_n = x) ≤ r^{−n}, r = k/√(2k−1), for every vertex x, exactly:
/// N² · k^{2n} ≤ (2k−1)^n · (2k)^{2n} with N the per-vertex walk count.
pub fn kesten_bound_check(k: u32, n: u32) -> Result<KestenReport> {
    if k < 2 || n < 1 {
        return Err(Error::Domain("Kesten check needs k >= 2, n >= 1".into()));
    }
    let counts = per_vertex_counts(k, n)?;
    let rhs = BigUint::from(2 * k - 1).pow(n) * BigUint::from(2 * k).pow(2 * n);
    let k2n = BigUint::from(k).pow(2 * n);
    let holds = counts.iter().all(|c| c * c * &k2n <= rhs);
    Ok(KestenReport {
        rank: k,
        steps: n,
        return_count: counts[0].to_string(),
        counts: counts.iter().map(|c| c.to_string()).collect(),
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_return_counts() {
        let c2 = per_vertex_counts(2, 2).unwrap();
        assert_eq!(c2[0], BigUint::from(4u32));
        let c4 = per_vertex_counts(2, 4).unwrap();
        assert_eq!(c4[0], BigUint::from(28u32));
        for n in [1u32, 3, 5, 7] {
            assert!(per_vertex_counts(2, n).unwrap()[0].is_zero());
        }
    }

    #[test]
    fn profile_sums_to_all_paths() {
        for k in [2u32, 3] {
            for n in 0..12 {
                let total: BigUint = distance_profile(k, n).unwrap().iter().sum();
                assert_eq!(total, BigUint::from(2 * k).pow(n));
            }
        }
    }

    #[test]
    fn kesten_small_cases() {
        let r = kesten_bound_check(2, 2).unwrap();
        assert!(r.holds);
        assert_eq!(r.return_count, "4");
        assert!(kesten_bound_check(1, 2).is_err());
    }
}
