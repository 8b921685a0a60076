//! Outward-rounded interval arithmetic on big fixed-point numbers.
//!
//! An [`Interval`] holds integers `lo ≤ hi` and denotes `[lo/2^F, hi/2^F]`
//! with `F = FRAC_BITS`. Every operation rounds `lo` toward −∞ and `hi`
//! toward +∞, so the true value of any expression stays enclosed.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Fractional bits of every enclosure endpoint.
pub const FRAC_BITS: u32 = 128;

// Extra bits carried through the logarithm series.
const GUARD_BITS: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k as usize
}

/// floor(x / 2^k)
fn floor_shift(x: &BigInt, k: u32) -> BigInt {
    x.div_floor(&pow2(k))
}

/// ceil(x / 2^k)
fn ceil_shift(x: &BigInt, k: u32) -> BigInt {
    -((-x).div_floor(&pow2(k)))
}

fn ceil_div(n: &BigInt, d: &BigInt) -> BigInt {
    -((-n).div_floor(d))
}

impl Interval {
    fn raw(lo: BigInt, hi: BigInt) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn from_int<T: Into<BigInt>>(x: T) -> Self {
        let v: BigInt = x.into() << FRAC_BITS as usize;
        Self::raw(v.clone(), v)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// Enclosure of n/d.
    pub fn from_ratio<N: Into<BigInt>, D: Into<BigInt>>(n: N, d: D) -> Result<Self> {
        let (n, d) = (n.into(), d.into());
        if d.is_zero() {
            return Err(Error::Domain("ratio with zero denominator".into()));
        }
        let (n, d) = if d.is_negative() { (-n, -d) } else { (n, d) };
        let scaled = n << FRAC_BITS as usize;
        Ok(Self::raw(scaled.div_floor(&d), ceil_div(&scaled, &d)))
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::from_ratio(r.numer().clone(), r.denom().clone()).expect("non-zero denominator")
    }

    /// Smallest enclosure of an f64 (exact: doubles are dyadic).
    pub fn from_f64(x: f64) -> Result<Self> {
        let r = BigRational::from_float(x)
            .ok_or_else(|| Error::Domain(format!("non-finite value {x}")))?;
        Ok(Self::from_rational(&r))
    }

    /// The hull [a, b] of two enclosures.
    pub fn hull(&self, other: &Self) -> Self {
        Self::raw(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
        )
    }

    pub fn lo_raw(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_raw(&self) -> &BigInt {
        &self.hi
    }

    /// Lower endpoint as an exact rational.
    pub fn lo_rational(&self) -> BigRational {
        BigRational::new(self.lo.clone(), pow2(FRAC_BITS))
    }

    pub fn hi_rational(&self) -> BigRational {
        BigRational::new(self.hi.clone(), pow2(FRAC_BITS))
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo_rational() <= r && r <= &self.hi_rational()
    }

    /// Width hi − lo in units of 2^-F.
    pub fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn mid_f64(&self) -> f64 {
        let mid = BigRational::new(&self.lo + &self.hi, pow2(FRAC_BITS + 1));
        mid.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    pub fn neg(&self) -> Self {
        Self::raw(-&self.hi, -&self.lo)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::raw(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::raw(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prods = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let min = prods.iter().min().expect("four products");
        let max = prods.iter().max().expect("four products");
        Self::raw(floor_shift(min, FRAC_BITS), ceil_shift(max, FRAC_BITS))
    }

    pub fn mul_int<T: Into<BigInt>>(&self, k: T) -> Self {
        let k = k.into();
        let (a, b) = (&self.lo * &k, &self.hi * &k);
        if k.is_negative() {
            Self::raw(b, a)
        } else {
            Self::raw(a, b)
        }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.contains_zero() {
            return Err(Error::Domain("interval division by an interval containing 0".into()));
        }
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for x in [&self.lo, &self.hi] {
            for y in [&o.lo, &o.hi] {
                let n: BigInt = x << FRAC_BITS as usize;
                let (q_lo, q_hi) = if y.is_negative() {
                    let (n, y) = (-n, -y);
                    (n.div_floor(&y), ceil_div(&n, &y))
                } else {
                    (n.div_floor(y), ceil_div(&n, y))
                };
                lo = Some(lo.map_or(q_lo.clone(), |l| l.min(q_lo)));
                hi = Some(hi.map_or(q_hi.clone(), |h| h.max(q_hi)));
            }
        }
        Ok(Self::raw(lo.expect("set"), hi.expect("set")))
    }

    pub fn div_int<T: Into<BigInt>>(&self, k: T) -> Result<Self> {
        self.div(&Self::from_int(k))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().div(self)
    }

    /// Multiplication by 2^k (exact for k ≥ 0).
    pub fn scale_pow2(&self, k: i64) -> Self {
        if k >= 0 {
            Self::raw(&self.lo << k as usize, &self.hi << k as usize)
        } else {
            let s = (-k) as u32;
            Self::raw(floor_shift(&self.lo, s), ceil_shift(&self.hi, s))
        }
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn sqr(&self) -> Self {
        if self.lo.is_negative() && self.hi.is_positive() {
            let m = self.lo.abs().max(self.hi.abs());
            return Self::raw(BigInt::zero(), ceil_shift(&(&m * &m), FRAC_BITS));
        }
        self.mul(self)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.lo.is_negative() {
            return Err(Error::Domain("square root of a possibly negative interval".into()));
        }
        let lo = (&self.lo << FRAC_BITS as usize).sqrt();
        let hs = &self.hi << FRAC_BITS as usize;
        let mut hi = hs.sqrt();
        if &hi * &hi < hs {
            hi += 1;
        }
        Ok(Self::raw(lo, hi))
    }

    pub fn max(&self, o: &Self) -> Self {
        Self::raw(
            self.lo.clone().max(o.lo.clone()),
            self.hi.clone().max(o.hi.clone()),
        )
    }

    pub fn min(&self, o: &Self) -> Self {
        Self::raw(
            self.lo.clone().min(o.lo.clone()),
            self.hi.clone().min(o.hi.clone()),
        )
    }

    /// Natural logarithm of a positive interval.
    pub fn ln(&self) -> Result<Self> {
        if !self.lo.is_positive() {
            return Err(Error::Domain("logarithm of a non-positive interval".into()));
        }
        let (lo, _) = ln_fixed(&self.lo);
        let (_, hi) = ln_fixed(&self.hi);
        Ok(Self::raw(lo, hi))
    }

    pub fn log2(&self) -> Result<Self> {
        self.ln()?.div(ln2())
    }

    /// Certainly `self < o`.
    pub fn lt(&self, o: &Self) -> bool {
        self.hi < o.lo
    }

    /// Certainly `self ≤ o`.
    pub fn le(&self, o: &Self) -> bool {
        self.hi <= o.lo
    }

    pub fn ge(&self, o: &Self) -> bool {
        o.le(self)
    }

    pub fn gt(&self, o: &Self) -> bool {
        o.lt(self)
    }

    /// Smallest integer ≥ every point of the interval.
    pub fn ceil_int(&self) -> BigInt {
        ceil_shift(&self.hi, FRAC_BITS)
    }

    /// Largest integer ≤ every point of the interval.
    pub fn floor_int(&self) -> BigInt {
        floor_shift(&self.lo, FRAC_BITS)
    }

    pub fn lo_decimal(&self) -> String {
        to_decimal(&self.lo, false)
    }

    pub fn hi_decimal(&self) -> String {
        to_decimal(&self.hi, true)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_decimal(), self.hi_decimal())
    }
}

/// Decimal rendering of v/2^F, rounded down (`up = false`) or up.
/// About 24 significant digits, never fewer than 6 fractional digits.
fn to_decimal(v: &BigInt, up: bool) -> String {
    let int_digits = floor_shift(&v.abs(), FRAC_BITS).to_string().len() as i64;
    let mag = if floor_shift(&v.abs(), FRAC_BITS).is_zero() {
        // count leading fractional zeros
        let r = BigRational::new(v.abs(), pow2(FRAC_BITS));
        let mut lead = 0i64;
        let mut x = r;
        let ten = BigRational::from_integer(BigInt::from(10));
        while !x.is_zero() && x < BigRational::one() && lead < 80 {
            x *= &ten;
            lead += 1;
        }
        -(lead - 1)
    } else {
        int_digits
    };
    let frac_digits = (24 - mag).clamp(6, 80) as u32;
    let scaled = v * BigInt::from(10).pow(frac_digits);
    let q = if up {
        ceil_shift(&scaled, FRAC_BITS)
    } else {
        floor_shift(&scaled, FRAC_BITS)
    };
    let neg = q.sign() == Sign::Minus;
    let digits = q.abs().to_string();
    let width = frac_digits as usize + 1;
    let padded = format!("{digits:0>width$}");
    let (ip, fp) = padded.split_at(padded.len() - frac_digits as usize);
    format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp)
}

/// Enclosure of ln 2, computed once.
pub fn ln2() -> &'static Interval {
    static LN2: OnceLock<Interval> = OnceLock::new();
    LN2.get_or_init(|| {
        let w = FRAC_BITS + GUARD_BITS;
        let (s, err) = atanh_series(&BigInt::one(), &BigInt::from(3), w);
        let lo = floor_shift(&(2 * (&s - &err)), GUARD_BITS);
        let hi = ceil_shift(&(2 * (&s + &err)), GUARD_BITS);
        Interval::raw(lo, hi)
    })
}

fn ln2_working() -> (BigInt, BigInt) {
    static LN2W: OnceLock<(BigInt, BigInt)> = OnceLock::new();
    LN2W.get_or_init(|| {
        let w = FRAC_BITS + GUARD_BITS;
        let (s, err) = atanh_series(&BigInt::one(), &BigInt::from(3), w);
        (2 * (&s - &err), 2 * (&s + &err))
    })
    .clone()
}

/// atanh(n/d) at `w` fractional bits for |n/d| ≤ 1/3; returns (value, error bound),
/// both scaled by 2^w.
fn atanh_series(n: &BigInt, d: &BigInt, w: u32) -> (BigInt, BigInt) {
    let one = pow2(w);
    // z rounded toward zero: |error| < 1 ulp
    let z = {
        let num = n << w as usize;
        let q = num.abs() / d.abs();
        if (n.is_negative()) ^ (d.is_negative()) {
            -q
        } else {
            q
        }
    };
    let z2 = (&z * &z) >> w as usize;
    let mut t = z.clone();
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !t.is_zero() {
        sum += &t / BigInt::from(2 * k + 1);
        t = (&t * &z2) / &one;
        k += 1;
    }
    // truncation in z, z², each power and each quotient costs O(1) ulps per term;
    // the tail after the last non-zero power is below one ulp
    let err = BigInt::from(8 * (k + 8));
    (sum, err)
}

/// Enclosure of ln(x / 2^F) for x > 0, endpoints at F fractional bits.
fn ln_fixed(x: &BigInt) -> (BigInt, BigInt) {
    let w = FRAC_BITS + GUARD_BITS;
    let bits = x.bits() as i64;
    // x/2^F = 2^k · y with y ∈ [0.75, 1.5)
    let mut k = bits - 1 - FRAC_BITS as i64;
    let three_quarter_mark = BigInt::from(3) << (bits - 2).max(0) as usize;
    if bits >= 2 && x >= &three_quarter_mark {
        k += 1;
    }
    // y = x / 2^(F+k); z = (y−1)/(y+1) = (x − 2^(F+k)) / (x + 2^(F+k))
    let e = FRAC_BITS as i64 + k;
    let (num, den) = if e >= 0 {
        let p = pow2(e as u32);
        (x - &p, x + &p)
    } else {
        // only when x/2^F < 2^(−F+…); cannot happen since x ≥ 1 gives e ≥ 0
        unreachable!("x >= 1 implies F + k >= 0")
    };
    let (s, err) = atanh_series(&num, &den, w);
    let (l2lo, l2hi) = ln2_working();
    let kb = BigInt::from(k);
    let (klo, khi) = if k >= 0 {
        (&kb * &l2lo, &kb * &l2hi)
    } else {
        (&kb * &l2hi, &kb * &l2lo)
    };
    let lo = klo + 2 * (&s - &err);
    let hi = khi + 2 * (&s + &err);
    (floor_shift(&lo, GUARD_BITS), ceil_shift(&hi, GUARD_BITS))
}

/// Enclosure of log₂ of a positive quantity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Log2Value(pub Interval);

impl Log2Value {
    pub fn of(x: &Interval) -> Result<Self> {
        Ok(Self(x.log2()?))
    }

    pub fn of_int<T: Into<BigInt>>(x: T) -> Result<Self> {
        Self::of(&Interval::from_int(x))
    }

    pub fn of_ratio<N: Into<BigInt>, D: Into<BigInt>>(n: N, d: D) -> Result<Self> {
        Self::of(&Interval::from_ratio(n, d)?)
    }

    /// log₂ of 2^k, exact.
    pub fn pow2(k: i64) -> Self {
        Self(Interval::from_int(k))
    }

    /// log₂(xy).
    pub fn mul(&self, o: &Self) -> Self {
        Self(self.0.add(&o.0))
    }

    /// log₂(x/y).
    pub fn div(&self, o: &Self) -> Self {
        Self(self.0.sub(&o.0))
    }

    /// log₂(x^e).
    pub fn pow(&self, e: &Interval) -> Self {
        Self(self.0.mul(e))
    }

    pub fn interval(&self) -> &Interval {
        &self.0
    }
}

/// Exact test of Π aᵢ^{eᵢ} ≥ Π bⱼ^{fⱼ} for positive integers.
///
/// A float comparison of the logarithms decides clear cases; with libm `ln`
/// within a few ulps and exponents in the thousands, the accumulated error
/// stays far below the 1e-9 relative gap required. Near-ties fall back to
/// big-integer powers.
pub fn power_product_ge(lhs: &[(u64, u32)], rhs: &[(u64, u32)]) -> bool {
    let log = |v: &[(u64, u32)]| v.iter().map(|&(b, e)| e as f64 * (b as f64).ln()).sum::<f64>();
    let (l, r) = (log(lhs), log(rhs));
    let scale = l.abs().max(r.abs()).max(1.0);
    if l - r > 1e-9 * scale {
        return true;
    }
    if r - l > 1e-9 * scale {
        return false;
    }
    let prod = |v: &[(u64, u32)]| {
        v.iter()
            .fold(num_bigint::BigUint::one(), |acc, &(b, e)| acc * num_bigint::BigUint::from(b).pow(e))
    };
    prod(lhs) >= prod(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(x: f64) -> Interval {
        Interval::from_f64(x).unwrap()
    }

    #[test]
    fn ln2_encloses_reference() {
        let l = ln2();
        assert!(l.lo_f64() <= std::f64::consts::LN_2 + 1e-16);
        assert!(l.hi_f64() >= std::f64::consts::LN_2 - 1e-16);
        // width well below 2^-96
        assert!(l.width_ulps() < pow2(FRAC_BITS - 100));
        assert_eq!(&l.lo_decimal()[..20], "0.693147180559945309");
    }

    #[test]
    fn ln_matches_f64_on_a_range() {
        for x in [1e-30, 1e-5, 0.3, 0.75, 0.999, 1.0, 1.0001, 1.5, 2.0, 3.3, 1e3, 1e20] {
            let l = iv(x).ln().unwrap();
            let r = x.ln();
            assert!(l.lo_f64() <= r + r.abs() * 1e-15 + 1e-300, "{x}");
            assert!(l.hi_f64() >= r - r.abs() * 1e-15 - 1e-300, "{x}");
            if x >= 1e-5 {
                assert!(l.width_ulps() < pow2(40), "{x}");
            }
        }
        assert!(Interval::zero().ln().is_err());
    }

    #[test]
    fn power_products_match_big_integers() {
        use num_bigint::BigUint;
        let exact = |a: u64, m: u32, b: u64, n: u32| BigUint::from(a).pow(m) >= BigUint::from(b).pow(n);
        for (a, m, b, n) in [(7u64, 3024u32, 5u64, 3025u32), (8, 2, 4, 3), (4, 3, 8, 2), (1000, 28, 1001, 28), (3, 5, 3, 5)] {
            assert_eq!(power_product_ge(&[(a, m)], &[(b, n)]), exact(a, m, b, n), "{a}^{m} vs {b}^{n}");
        }
        // exact tie through the fallback
        assert!(power_product_ge(&[(2, 756), (16, 10)], &[(2, 796)]));
        assert!(!power_product_ge(&[(2, 756), (16, 10)], &[(2, 797)]));
    }

    #[test]
    fn ln_of_one_contains_zero() {
        let l = Interval::one().ln().unwrap();
        assert!(l.contains_zero());
    }

    #[test]
    fn sqrt_and_division() {
        let s = Interval::from_int(13).sqrt().unwrap();
        let sq = s.mul(&s);
        assert!(sq.contains_rational(&BigRational::from_integer(13.into())));
        let q = Interval::one().div_int(3).unwrap();
        assert!(q.contains_rational(&BigRational::new(1.into(), 3.into())));
        assert!(Interval::one().div(&Interval::zero()).is_err());
        let neg = Interval::from_int(-7).div_int(2).unwrap();
        assert!(neg.contains_rational(&BigRational::new((-7).into(), 2.into())));
    }

    #[test]
    fn decimal_rendering_is_directed() {
        let third = Interval::from_ratio(1, 3).unwrap();
        assert_eq!(third.lo_decimal(), "0.333333333333333333333333");
        assert_eq!(third.hi_decimal(), "0.333333333333333333333334");
        let m = third.neg();
        assert_eq!(m.lo_decimal(), "-0.333333333333333333333334");
        let big = Interval::from_int(123456);
        assert_eq!(big.lo_decimal(), "123456.000000000000000000");
        let tiny = Interval::from_ratio(12065, 100_000_000_000_000i64).unwrap();
        assert!(tiny.lo_decimal().starts_with("0.000000000120649999"));
    }

    #[test]
    fn log2_of_powers_of_two() {
        for k in [1i64, 10, 100, 1000] {
            let v = Log2Value::of(&Interval::from_int(BigInt::one() << k as usize)).unwrap();
            assert!(v.0.contains_rational(&BigRational::from_integer(k.into())));
        }
    }
}
