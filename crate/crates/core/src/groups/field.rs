//! Prime fields F_p and the quadratic extension F_{p^2}.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Largest supported modulus; products of two residues must fit in a `u64`.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

/// Deterministic primality test by trial division (moduli are below 2^31).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes in `[lo, hi]`, ascending.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u32> {
    (lo..=hi).filter(|&n| is_prime(n)).map(|n| n as u32).collect()
}

/// The field Z/pZ with residues stored canonically in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_MODULUS {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    /// Same as [`PrimeField::new`] but additionally rejects p = 2.
    pub fn new_odd(p: u64) -> Result<Self> {
        let f = Self::new(p)?;
        if f.p == 2 {
            return Err(Error::EvenCharacteristic(2));
        }
        Ok(f)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce_i64(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    pub fn reduce_bigint(&self, x: &BigInt) -> u32 {
        let r = x.mod_floor(&BigInt::from(self.p));
        r.to_u32().expect("residue fits in u32")
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (if s >= self.p as u64 { s - self.p as u64 } else { s }) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.p as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero(self.p));
        }
        let (g, x, _) = extended_gcd(a as i64, self.p as i64);
        debug_assert_eq!(g, 1);
        Ok(self.reduce_i64(x))
    }

    /// Legendre symbol: 1, -1, or 0.
    pub fn legendre(&self, a: u32) -> i32 {
        if self.p == 2 {
            return (a % 2) as i32;
        }
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if self.pow(a, ((self.p - 1) / 2) as u64) == 1 {
            1
        } else {
            -1
        }
    }

    pub fn is_square(&self, a: u32) -> bool {
        self.legendre(a) >= 0
    }

    /// Smallest positive non-residue (odd p only).
    pub fn smallest_nonresidue(&self) -> Result<u32> {
        if self.p == 2 {
            return Err(Error::EvenCharacteristic(2));
        }
        Ok((2..self.p)
            .find(|&a| self.legendre(a) == -1)
            .expect("odd prime has a non-residue"))
    }

    /// A square root of `a` in F_p, if one exists (Tonelli-Shanks).
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        let p = self.p;
        let a = a % p;
        if a == 0 || p == 2 {
            return Some(a);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        let mut q = (p - 1) as u64;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let z = self.smallest_nonresidue().ok()?;
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    /// Signed representative in `(-p/2, p/2]`.
    pub fn centered(&self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }
}

fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = extended_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Element a + b·√n of F_{p^2}, where n is the field's fixed non-residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp2 {
    pub re: u32,
    pub im: u32,
}

impl Fp2 {
    pub const ZERO: Fp2 = Fp2 { re: 0, im: 0 };

    pub fn from_base(a: u32) -> Self {
        Fp2 { re: a, im: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn in_base(&self) -> bool {
        self.im == 0
    }
}

impl fmt::Display for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0 {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}+{}r", self.re, self.im)
        }
    }
}

/// F_{p^2} = F_p(√n) for the smallest positive non-residue n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadExtField {
    base: PrimeField,
    nonresidue: u32,
}

impl QuadExtField {
    pub fn new(base: PrimeField) -> Result<Self> {
        let nonresidue = base.smallest_nonresidue()?;
        Ok(Self { base, nonresidue })
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn nonresidue(&self) -> u32 {
        self.nonresidue
    }

    pub fn add(&self, x: Fp2, y: Fp2) -> Fp2 {
        let f = &self.base;
        Fp2 {
            re: f.add(x.re, y.re),
            im: f.add(x.im, y.im),
        }
    }

    pub fn sub(&self, x: Fp2, y: Fp2) -> Fp2 {
        let f = &self.base;
        Fp2 {
            re: f.sub(x.re, y.re),
            im: f.sub(x.im, y.im),
        }
    }

    pub fn neg(&self, x: Fp2) -> Fp2 {
        Fp2 {
            re: self.base.neg(x.re),
            im: self.base.neg(x.im),
        }
    }

    pub fn mul(&self, x: Fp2, y: Fp2) -> Fp2 {
        let f = &self.base;
        let re = f.add(
            f.mul(x.re, y.re),
            f.mul(self.nonresidue, f.mul(x.im, y.im)),
        );
        let im = f.add(f.mul(x.re, y.im), f.mul(x.im, y.re));
        Fp2 { re, im }
    }

    /// The norm x·σ(x), an element of F_p.
    pub fn norm(&self, x: Fp2) -> u32 {
        let f = &self.base;
        f.sub(
            f.mul(x.re, x.re),
            f.mul(self.nonresidue, f.mul(x.im, x.im)),
        )
    }

    pub fn inv(&self, x: Fp2) -> Result<Fp2> {
        let n = self.base.inv(self.norm(x))?;
        let c = self.frobenius(x);
        Ok(Fp2 {
            re: self.base.mul(c.re, n),
            im: self.base.mul(c.im, n),
        })
    }

    /// The Frobenius automorphism a + b√n ↦ a − b√n.
    pub fn frobenius(&self, x: Fp2) -> Fp2 {
        Fp2 {
            re: x.re,
            im: self.base.neg(x.im),
        }
    }

    /// Square root of a base-field element; always exists in F_{p^2}.
    pub fn sqrt_of_base(&self, a: u32) -> Fp2 {
        let f = &self.base;
        if let Some(r) = f.sqrt(a) {
            return Fp2::from_base(r);
        }
        // a = n·b² with b ∈ F_p, so √a = b√n
        let q = f.mul(a, f.inv(self.nonresidue).expect("non-zero"));
        let b = f.sqrt(q).expect("a/n is a square when a is not");
        Fp2 { re: 0, im: b }
    }

    /// Every element of F_{p^2}, in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = Fp2> + '_ {
        let p = self.base.p();
        (0..p).flat_map(move |re| (0..p).map(move |im| Fp2 { re, im }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(PrimeField::new(91).is_err());
        assert!(PrimeField::new(MAX_MODULUS).is_ok());
        assert_eq!(PrimeField::new(1u64 << 31), Err(Error::ModulusOutOfRange(1 << 31)));
        assert_eq!(PrimeField::new_odd(2), Err(Error::EvenCharacteristic(2)));
    }

    #[test]
    fn field_axioms_mod_13() {
        let f = PrimeField::new(13).unwrap();
        for a in 0..13 {
            for b in 0..13 {
                assert_eq!(f.add(a, b), (a + b) % 13);
                assert_eq!(f.sub(f.add(a, b), b), a);
                assert_eq!(f.mul(a, b), (a * b) % 13);
            }
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
        assert_eq!(f.inv(0), Err(Error::DivisionByZero(13)));
    }

    #[test]
    fn square_roots() {
        for p in [3u64, 5, 7, 11, 13, 17, 97, 101] {
            let f = PrimeField::new(p).unwrap();
            let squares: std::collections::HashSet<u32> =
                (0..p as u32).map(|x| f.mul(x, x)).collect();
            for a in 0..p as u32 {
                match f.sqrt(a) {
                    Some(r) => assert_eq!(f.mul(r, r), a),
                    None => assert!(!squares.contains(&a)),
                }
            }
        }
    }

    #[test]
    fn nonresidue_is_smallest() {
        assert_eq!(PrimeField::new(7).unwrap().smallest_nonresidue().unwrap(), 3);
        assert_eq!(PrimeField::new(5).unwrap().smallest_nonresidue().unwrap(), 2);
        assert_eq!(PrimeField::new(17).unwrap().smallest_nonresidue().unwrap(), 3);
    }

    #[test]
    fn frobenius_fixes_exactly_base_field() {
        for p in [3u64, 5, 7, 11, 13] {
            let k = QuadExtField::new(PrimeField::new(p).unwrap()).unwrap();
            let fixed = k.elements().filter(|&x| k.frobenius(x) == x).count();
            assert_eq!(fixed, p as usize);
            // automorphism on a sample of pairs
            for x in k.elements().step_by(3) {
                for y in k.elements().step_by(7) {
                    assert_eq!(k.frobenius(k.mul(x, y)), k.mul(k.frobenius(x), k.frobenius(y)));
                    assert_eq!(k.frobenius(k.add(x, y)), k.add(k.frobenius(x), k.frobenius(y)));
                }
            }
        }
    }

    #[test]
    fn quadratic_extension_is_a_field() {
        let k = QuadExtField::new(PrimeField::new(7).unwrap()).unwrap();
        for x in k.elements().filter(|x| !x.is_zero()) {
            let y = k.inv(x).unwrap();
            assert_eq!(k.mul(x, y), Fp2::from_base(1));
        }
        for a in 0..7 {
            let r = k.sqrt_of_base(a);
            assert_eq!(k.mul(r, r), Fp2::from_base(a));
        }
    }
}
