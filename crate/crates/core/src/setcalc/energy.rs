//! Multiplicative energy E(A,B) = #{(a₁,a₂,b₁,b₂) : a₁b₁ = a₂b₂}.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::group::FiniteGroup;
use super::subset::GroupSubset;
use crate::error::{Error, Result};

/// r(g) = #{(a,b) ∈ A×B : ab = g}, indexed by g.
pub fn representation_counts<G: FiniteGroup + ?Sized>(
    g: &G,
    a: &GroupSubset,
    b: &GroupSubset,
) -> Vec<u32> {
    let mut r = vec![0u32; g.order() as usize];
    for x in a.iter() {
        for y in b.iter() {
            r[g.mul(x, y) as usize] += 1;
        }
    }
    r
}

#[derive(Clone, Debug, Serialize)]
pub struct EnergyCertificate {
    pub a: usize,
    pub b: usize,
    #[serde(serialize_with = "ser_big")]
    pub energy: BigUint,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl EnergyCertificate {
    /// (|A||B|)³, the square of the normalizing denominator.
    pub fn denominator_sq(&self) -> BigUint {
        BigUint::from(self.a as u64 * self.b as u64).pow(3)
    }

    /// e(A,B)² = E² / (|A||B|)³ exactly.
    pub fn normalized_sq(&self) -> BigRational {
        BigRational::new((&self.energy * &self.energy).into(), self.denominator_sq().into())
    }

    /// e(A,B) ≥ 1/α  ⇔  α²E² ≥ (|A||B|)³.
    pub fn at_least_inverse(&self, alpha: &BigRational) -> bool {
        let e: num_bigint::BigInt = self.energy.clone().into();
        let lhs = alpha.numer() * alpha.numer() * &e * &e;
        let rhs = alpha.denom() * alpha.denom() * num_bigint::BigInt::from(self.denominator_sq());
        lhs >= rhs
    }

    /// |A||B| ≤ E and E² ≤ (|A||B|)³.
    pub fn in_range(&self) -> bool {
        let ab = BigUint::from(self.a as u64 * self.b as u64);
        ab <= self.energy && &self.energy * &self.energy <= self.denominator_sq()
    }

    pub fn normalized_f64(&self) -> f64 {
        let e: f64 = self.energy.to_string().parse().unwrap_or(f64::INFINITY);
        e / ((self.a as f64) * (self.b as f64)).powf(1.5)
    }
}

/// E(A,B) = Σ_g r(g)².
pub fn energy<G: FiniteGroup + ?Sized>(
    g: &G,
    a: &GroupSubset,
    b: &GroupSubset,
) -> Result<EnergyCertificate> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let r = representation_counts(g, a, b);
    let mut e = BigUint::zero();
    let mut acc: u128 = 0;
    for &c in &r {
        acc += c as u128 * c as u128;
        if acc > u64::MAX as u128 {
            e += BigUint::from(acc);
            acc = 0;
        }
    }
    e += BigUint::from(acc);
    Ok(EnergyCertificate {
        a: a.len(),
        b: b.len(),
        energy: e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcalc::group::CyclicGroup;
    use crate::setcalc::products::ratio;

    #[test]
    fn subgroup_energy_is_cube() {
        let g = CyclicGroup::new(20).unwrap();
        let k = GroupSubset::from_indices(20, [0, 5, 10, 15]);
        let c = energy(&g, &k, &k).unwrap();
        assert_eq!(c.energy, BigUint::from(64u32));
        assert_eq!(c.normalized_sq(), ratio(1, 1));
        assert!(c.at_least_inverse(&ratio(1, 1)));
    }

    #[test]
    fn two_point_energy() {
        let g = CyclicGroup::new(9).unwrap();
        let a = GroupSubset::from_indices(9, [0, 4]);
        let b = GroupSubset::from_indices(9, [0]);
        let c = energy(&g, &a, &b).unwrap();
        assert_eq!(c.energy, BigUint::from(2u32));
        assert!(c.in_range());
    }
}
