//! Elements of SL₂(F_p) and the indexed group SL₂(F_p).

use std::fmt;

use num_bigint::BigInt;

use super::field::PrimeField;
use crate::error::{Error, Result};

/// A 2×2 matrix `[[a, b], [c, d]]` over F_p with determinant 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sl2ModP {
    p: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl Sl2ModP {
    /// Builds a matrix from residues in `[0, p)`, checking the determinant.
    pub fn new(f: &PrimeField, a: u32, b: u32, c: u32, d: u32) -> Result<Self> {
        let (a, b, c, d) = (a % f.p(), b % f.p(), c % f.p(), d % f.p());
        let det = f.sub(f.mul(a, d), f.mul(b, c));
        if det != 1 {
            return Err(Error::BadDeterminant {
                det: det.to_string(),
            });
        }
        Ok(Self { p: f.p(), a, b, c, d })
    }

    pub fn from_i64(f: &PrimeField, m: [i64; 4]) -> Result<Self> {
        Self::new(
            f,
            f.reduce_i64(m[0]),
            f.reduce_i64(m[1]),
            f.reduce_i64(m[2]),
            f.reduce_i64(m[3]),
        )
    }

    /// Reduces an integer matrix mod p. The determinant is checked mod p only.
    pub fn from_bigint(f: &PrimeField, m: &[BigInt; 4]) -> Result<Self> {
        Self::new(
            f,
            f.reduce_bigint(&m[0]),
            f.reduce_bigint(&m[1]),
            f.reduce_bigint(&m[2]),
            f.reduce_bigint(&m[3]),
        )
    }

    /// Parses `[[a,b],[c,d]]` and reduces the entries mod p.
    pub fn parse(f: &PrimeField, s: &str) -> Result<Self> {
        Self::from_bigint(f, &parse_matrix_literal(s)?)
    }

    // Caller guarantees ad - bc = 1 in F_p.
    #[inline]
    pub(crate) fn from_raw(p: u32, a: u32, b: u32, c: u32, d: u32) -> Self {
        Self { p, a, b, c, d }
    }

    pub fn identity(p: u32) -> Self {
        Self::from_raw(p, 1, 0, 0, 1)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p as u64).expect("modulus validated at construction")
    }

    pub fn entries(&self) -> [u32; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::FieldMismatch(self.p, other.p));
        }
        Ok(self.mul_same(other))
    }

    /// Product of two matrices known to live over the same field.
    #[inline]
    pub fn mul_same(&self, o: &Self) -> Self {
        let p = self.p as u64;
        let (a, b, c, d) = (self.a as u64, self.b as u64, self.c as u64, self.d as u64);
        let (e, f, g, h) = (o.a as u64, o.b as u64, o.c as u64, o.d as u64);
        Self {
            p: self.p,
            a: ((a * e + b * g) % p) as u32,
            b: ((a * f + b * h) % p) as u32,
            c: ((c * e + d * g) % p) as u32,
            d: ((c * f + d * h) % p) as u32,
        }
    }

    /// Inverse `[[d, -b], [-c, a]]`.
    pub fn inverse(&self) -> Self {
        let neg = |x: u32| if x == 0 { 0 } else { self.p - x };
        Self {
            p: self.p,
            a: self.d,
            b: neg(self.b),
            c: neg(self.c),
            d: self.a,
        }
    }

    pub fn neg(&self) -> Self {
        let neg = |x: u32| if x == 0 { 0 } else { self.p - x };
        Self {
            p: self.p,
            a: neg(self.a),
            b: neg(self.b),
            c: neg(self.c),
            d: neg(self.d),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(self.p);
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            base = base.mul_same(&base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn trace(&self) -> u32 {
        ((self.a as u64 + self.d as u64) % self.p as u64) as u32
    }

    pub fn det(&self) -> u32 {
        let p = self.p as u64;
        let ad = self.a as u64 * self.d as u64 % p;
        let bc = self.b as u64 * self.c as u64 % p;
        ((ad + p - bc) % p) as u32
    }

    pub fn is_identity(&self) -> bool {
        self.a == 1 % self.p && self.b == 0 && self.c == 0 && self.d == 1 % self.p
    }

    /// True for ±I.
    pub fn is_central(&self) -> bool {
        self.b == 0 && self.c == 0 && self.a == self.d && (self.a == 1 || self.a == self.p - 1)
    }

    pub fn commutes_with(&self, o: &Self) -> bool {
        self.mul_same(o) == o.mul_same(self)
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.c == 0
    }
}

impl fmt::Display for Sl2ModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// Parses a matrix literal `[[a,b],[c,d]]` with arbitrary-size integer entries.
pub fn parse_matrix_literal(s: &str) -> Result<[BigInt; 4]> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || Error::Parse(format!("expected [[a,b],[c,d]], got {s:?}"));
    let inner = compact
        .strip_prefix("[[")
        .and_then(|r| r.strip_suffix("]]"))
        .ok_or_else(err)?;
    let rows: Vec<&str> = inner.split("],[").collect();
    if rows.len() != 2 {
        return Err(err());
    }
    let mut out = Vec::with_capacity(4);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        if cols.len() != 2 {
            return Err(err());
        }
        for c in cols {
            let v: BigInt = c
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer {c:?} in {s:?}")))?;
            out.push(v);
        }
    }
    let [a, b, c, d]: [BigInt; 4] = out.try_into().map_err(|_| err())?;
    Ok([a, b, c, d])
}

/// Largest prime for which element indices of SL₂(F_p) fit in a `u32`.
pub const MAX_INDEXED_PRIME: u32 = 1621;

/// SL₂(F_p) with a bijection onto `0..p³−p`.
///
/// Index layout: matrices with `a ≠ 0` come first, ordered by `(a, b, c)`
/// (d is forced); the remaining `(p−1)·p` matrices have `a = 0`, `c = −1/b`
/// and are ordered by `(b, d)`.
#[derive(Clone, Debug)]
pub struct Sl2Group {
    field: PrimeField,
    inv_table: Vec<u32>,
}

impl Sl2Group {
    pub fn new(p: u64) -> Result<Self> {
        let field = PrimeField::new(p)?;
        if field.p() > MAX_INDEXED_PRIME {
            return Err(Error::ModulusOutOfRange(p));
        }
        let mut inv_table = vec![0u32; field.p() as usize];
        for x in 1..field.p() {
            inv_table[x as usize] = field.inv(x)?;
        }
        Ok(Self { field, inv_table })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn size(&self) -> u32 {
        let p = self.p();
        p * p * p - p
    }

    #[inline]
    pub fn index_of(&self, g: &Sl2ModP) -> u32 {
        debug_assert_eq!(g.p(), self.p());
        let p = self.p();
        if g.a != 0 {
            (g.a - 1) * p * p + g.b * p + g.c
        } else {
            (p - 1) * p * p + (g.b - 1) * p + g.d
        }
    }

    #[inline]
    pub fn element(&self, idx: u32) -> Sl2ModP {
        let p = self.p();
        let split = (p - 1) * p * p;
        if idx < split {
            let a = idx / (p * p) + 1;
            let b = (idx / p) % p;
            let c = idx % p;
            // d = (1 + bc)/a
            let bc1 = (1 + b as u64 * c as u64) % p as u64;
            let d = (bc1 * self.inv_table[a as usize] as u64 % p as u64) as u32;
            Sl2ModP::from_raw(p, a, b, c, d)
        } else {
            let r = idx - split;
            let b = r / p + 1;
            let d = r % p;
            let c = p - self.inv_table[b as usize];
            Sl2ModP::from_raw(p, 0, b, c, d)
        }
    }

    pub fn identity_index(&self) -> u32 {
        self.index_of(&Sl2ModP::identity(self.p()))
    }

    pub fn elements(&self) -> impl Iterator<Item = Sl2ModP> + '_ {
        (0..self.size()).map(move |i| self.element(i))
    }

    #[inline]
    pub fn mul_idx(&self, x: u32, y: u32) -> u32 {
        self.index_of(&self.element(x).mul_same(&self.element(y)))
    }

    #[inline]
    pub fn inv_idx(&self, x: u32) -> u32 {
        self.index_of(&self.element(x).inverse())
    }

    pub fn from_i64(&self, m: [i64; 4]) -> Result<Sl2ModP> {
        Sl2ModP::from_i64(&self.field, m)
    }

    pub fn index_i64(&self, m: [i64; 4]) -> Result<u32> {
        Ok(self.index_of(&self.from_i64(m)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn product_mod_5() {
        let u = Sl2ModP::from_i64(&f(5), [1, 1, 0, 1]).unwrap();
        let l = Sl2ModP::from_i64(&f(5), [1, 0, 1, 1]).unwrap();
        assert_eq!(u.mul(&l).unwrap().entries(), [2, 1, 1, 1]);
        let i = Sl2ModP::identity(5);
        assert_eq!(i.mul(&u).unwrap(), u);
    }

    #[test]
    fn rotation_squares_to_minus_identity() {
        let w = Sl2ModP::from_i64(&f(7), [0, 1, -1, 0]).unwrap();
        let w2 = w.mul(&w).unwrap();
        assert_eq!(w2.entries(), [6, 0, 0, 6]);
        assert!(w2.is_central() && !w2.is_identity());
    }

    #[test]
    fn rejects_bad_determinant_and_mismatch() {
        assert!(matches!(
            Sl2ModP::from_i64(&f(7), [1, 1, 1, 1]),
            Err(Error::BadDeterminant { .. })
        ));
        let x = Sl2ModP::identity(5);
        let y = Sl2ModP::identity(7);
        assert_eq!(x.mul(&y), Err(Error::FieldMismatch(5, 7)));
    }

    #[test]
    fn literal_parsing() {
        let g = Sl2ModP::parse(&f(7), "[[ 2, 0 ], [0, 4]]").unwrap();
        assert_eq!(g.entries(), [2, 0, 0, 4]);
        let big = Sl2ModP::parse(&f(5), "[[100000000000000000000001,-3],[0,1]]").unwrap();
        assert_eq!(big.entries(), [1, 2, 0, 1]);
        assert!(parse_matrix_literal("[[1,2],[3]]").is_err());
        assert!(parse_matrix_literal("[[1,x],[3,4]]").is_err());
        assert_eq!(g.to_string(), "[[2,0],[0,4]]");
    }

    #[test]
    fn indexing_is_a_bijection() {
        for p in [2u64, 3, 5, 7, 11] {
            let g = Sl2Group::new(p).unwrap();
            let n = g.size();
            let mut seen = vec![false; n as usize];
            for i in 0..n {
                let e = g.element(i);
                assert_eq!(e.det(), 1);
                assert_eq!(g.index_of(&e), i);
                assert!(!seen[i as usize]);
                seen[i as usize] = true;
            }
        }
    }

    #[test]
    fn inverses_exhaustive_mod_7() {
        let g = Sl2Group::new(7).unwrap();
        let id = g.identity_index();
        for i in 0..g.size() {
            assert_eq!(g.mul_idx(i, g.inv_idx(i)), id);
            assert_eq!(g.mul_idx(id, i), i);
        }
    }

    #[test]
    fn largest_indexed_prime_fits() {
        let p = MAX_INDEXED_PRIME as u64;
        assert!(p * p * p - p <= u32::MAX as u64);
        assert!(Sl2Group::new(1627).is_err());
    }
}
