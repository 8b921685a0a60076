//! Finite groups presented by element indices `0..order`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::groups::sl2::Sl2Group;

/// A finite group whose elements are the integers `0..order()`.
pub trait FiniteGroup: Sync {
    fn order(&self) -> u32;
    fn identity(&self) -> u32;
    fn mul(&self, x: u32, y: u32) -> u32;
    fn inv(&self, x: u32) -> u32;

    /// Human-readable form of an element, used in reports.
    fn label(&self, x: u32) -> String {
        x.to_string()
    }
}

impl FiniteGroup for Sl2Group {
    fn order(&self) -> u32 {
        self.size()
    }
    fn identity(&self) -> u32 {
        self.identity_index()
    }
    #[inline]
    fn mul(&self, x: u32, y: u32) -> u32 {
        self.mul_idx(x, y)
    }
    #[inline]
    fn inv(&self, x: u32) -> u32 {
        self.inv_idx(x)
    }
    fn label(&self, x: u32) -> String {
        self.element(x).to_string()
    }
}

impl<G: FiniteGroup + ?Sized> FiniteGroup for &G {
    fn order(&self) -> u32 {
        (**self).order()
    }
    fn identity(&self) -> u32 {
        (**self).identity()
    }
    fn mul(&self, x: u32, y: u32) -> u32 {
        (**self).mul(x, y)
    }
    fn inv(&self, x: u32) -> u32 {
        (**self).inv(x)
    }
    fn label(&self, x: u32) -> String {
        (**self).label(x)
    }
}

/// The additive group Z/n.
#[derive(Clone, Debug)]
pub struct CyclicGroup {
    n: u32,
}

impl CyclicGroup {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("cyclic group of order 0".into()));
        }
        Ok(Self { n })
    }
}

impl FiniteGroup for CyclicGroup {
    fn order(&self) -> u32 {
        self.n
    }
    fn identity(&self) -> u32 {
        0
    }
    fn mul(&self, x: u32, y: u32) -> u32 {
        ((x as u64 + y as u64) % self.n as u64) as u32
    }
    fn inv(&self, x: u32) -> u32 {
        (self.n - x) % self.n
    }
}

/// The multiplicative group (Z/n)^×; element `i` is the i-th unit in increasing order.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    n: u32,
    units: Vec<u32>,
    index: Vec<u32>,
}

impl UnitGroup {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("unit group of Z/{n}")));
        }
        let units: Vec<u32> = (1..n)
            .filter(|&x| num_integer::gcd(x, n) == 1)
            .collect();
        let mut index = vec![u32::MAX; n as usize];
        for (i, &u) in units.iter().enumerate() {
            index[u as usize] = i as u32;
        }
        Ok(Self { n, units, index })
    }

    pub fn residue(&self, x: u32) -> u32 {
        self.units[x as usize]
    }
}

impl FiniteGroup for UnitGroup {
    fn order(&self) -> u32 {
        self.units.len() as u32
    }
    fn identity(&self) -> u32 {
        self.index[1 % self.n as usize]
    }
    fn mul(&self, x: u32, y: u32) -> u32 {
        let r = self.units[x as usize] as u64 * self.units[y as usize] as u64 % self.n as u64;
        self.index[r as usize]
    }
    fn inv(&self, x: u32) -> u32 {
        let u = self.units[x as usize];
        let pos = self
            .units
            .iter()
            .position(|&v| (u as u64 * v as u64) % self.n as u64 == 1 % self.n as u64)
            .expect("units are invertible");
        pos as u32
    }
    fn label(&self, x: u32) -> String {
        self.units[x as usize].to_string()
    }
}

/// The dihedral group of order 2n: element `k` is r^k, element `n + k` is s·r^k.
#[derive(Clone, Debug)]
pub struct DihedralGroup {
    n: u32,
}

impl DihedralGroup {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("dihedral group D_0".into()));
        }
        Ok(Self { n })
    }
}

impl FiniteGroup for DihedralGroup {
    fn order(&self) -> u32 {
        2 * self.n
    }
    fn identity(&self) -> u32 {
        0
    }
    fn mul(&self, x: u32, y: u32) -> u32 {
        let n = self.n;
        let (fx, kx) = (x >= n, x % n);
        let (fy, ky) = (y >= n, y % n);
        // r^a s = s r^{-a}
        let k = if fy { (ky + n - kx) % n } else { (kx + ky) % n };
        if fx ^ fy {
            n + k
        } else {
            k
        }
    }
    fn inv(&self, x: u32) -> u32 {
        if x >= self.n {
            x
        } else {
            (self.n - x) % self.n
        }
    }
}

/// Any finite group with its full multiplication table precomputed.
#[derive(Clone, Debug)]
pub struct TableGroup {
    order: u32,
    identity: u32,
    table: Vec<u32>,
    inverse: Vec<u32>,
    labels: Vec<String>,
}

/// Upper bound on the order of groups that get a dense multiplication table.
pub const MAX_TABLE_ORDER: u32 = 6000;

impl TableGroup {
    pub fn from_group<G: FiniteGroup + ?Sized>(g: &G) -> Result<Self> {
        let n = g.order();
        if n > MAX_TABLE_ORDER {
            return Err(Error::BudgetExceeded {
                what: "multiplication table",
                needed: n as u128 * n as u128,
                budget: MAX_TABLE_ORDER as u128 * MAX_TABLE_ORDER as u128,
            });
        }
        let mut table = Vec::with_capacity(n as usize * n as usize);
        for x in 0..n {
            for y in 0..n {
                table.push(g.mul(x, y));
            }
        }
        let inverse = (0..n).map(|x| g.inv(x)).collect();
        let labels = (0..n).map(|x| g.label(x)).collect();
        Ok(Self {
            order: n,
            identity: g.identity(),
            table,
            inverse,
            labels,
        })
    }
}

impl FiniteGroup for TableGroup {
    fn order(&self) -> u32 {
        self.order
    }
    fn identity(&self) -> u32 {
        self.identity
    }
    #[inline]
    fn mul(&self, x: u32, y: u32) -> u32 {
        self.table[x as usize * self.order as usize + y as usize]
    }
    #[inline]
    fn inv(&self, x: u32) -> u32 {
        self.inverse[x as usize]
    }
    fn label(&self, x: u32) -> String {
        self.labels[x as usize].clone()
    }
}

/// Spot-checks the group axioms on random triples; returns the first failing triple.
pub fn spot_check_axioms<G: FiniteGroup + ?Sized, R: Rng>(
    g: &G,
    rng: &mut R,
    trials: usize,
) -> Option<(u32, u32, u32)> {
    let n = g.order();
    let e = g.identity();
    for _ in 0..trials {
        let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        let assoc = g.mul(g.mul(x, y), z) == g.mul(x, g.mul(y, z));
        let unit = g.mul(e, x) == x && g.mul(x, e) == x;
        let inv = g.mul(x, g.inv(x)) == e;
        if !(assoc && unit && inv) {
            return Some((x, y, z));
        }
    }
    None
}
