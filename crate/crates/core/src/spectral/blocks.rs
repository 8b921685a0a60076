//! Block decomposition of the Markov operator by characters of the unipotent
//! subgroup U = {u_t = [[1,t],[0,1]]} acting on the left.
//!
//! Left translations commute with f ↦ (x ↦ avg_s f(xs)), so M preserves each
//! V_k = {f : f(u_t x) = ω^{kt} f(x)}, ω = e^{2πi/p}. A function in V_k is fixed
//! by its values on the representatives r_c of the cosets Ux (one per non-zero
//! bottom row c), and on these coordinates M acts by the (p²−1)-square
//! Hermitian matrix B_k[c, c'] = |S|⁻¹ Σ_{s : r_c s = u_t r_{c'}} ω^{kt}.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::groups::sl2::{Sl2Group, Sl2ModP};

#[derive(Clone, Debug)]
pub struct CharacterBlocks {
    pub p: u32,
    pub dim: usize,
    pub degree: usize,
    /// For coset c and generator j: (c', t) with r_c s_j = u_t r_{c'}.
    pub steps: Vec<Vec<(u32, u32)>>,
}

fn coset_of(p: u32, g: &Sl2ModP) -> u32 {
    g.c * p + g.d - 1
}

fn representative(grp: &Sl2Group, coset: u32) -> Sl2ModP {
    let p = grp.p();
    let f = grp.field();
    let (c, d) = ((coset + 1) / p, (coset + 1) % p);
    if c != 0 {
        let ci = f.inv(c).expect("c != 0");
        Sl2ModP::new(f, 0, f.neg(ci), c, d).expect("det 1")
    } else {
        let di = f.inv(d).expect("d != 0");
        Sl2ModP::new(f, di, 0, 0, d).expect("det 1")
    }
}

// y = u_t r_{c'}: the top-left (or top-right when c = 0) entry fixes t.
fn decompose(grp: &Sl2Group, y: &Sl2ModP) -> (u32, u32) {
    let f = grp.field();
    let t = if y.c != 0 {
        f.mul(y.a, f.inv(y.c).expect("c != 0"))
    } else {
        f.mul(y.b, f.inv(y.d).expect("d != 0"))
    };
    (coset_of(grp.p(), y), t)
}

impl CharacterBlocks {
    pub fn new(grp: &Sl2Group, gens: &[u32]) -> Self {
        let p = grp.p();
        let dim = (p * p - 1) as usize;
        let mats: Vec<Sl2ModP> = gens.iter().map(|&s| grp.element(s)).collect();
        let steps = (0..dim as u32)
            .map(|c| {
                let r = representative(grp, c);
                mats.iter().map(|s| decompose(grp, &r.mul_same(s))).collect()
            })
            .collect();
        Self {
            p,
            dim,
            degree: gens.len(),
            steps,
        }
    }

    /// Characters k ∈ 0..=p/2 with their multiplicity (k and p−k give complex
    /// conjugate blocks with the same spectrum).
    pub fn characters(&self) -> Vec<(u32, usize)> {
        (0..=self.p / 2)
            .map(|k| (k, if k == 0 || 2 * k == self.p { 1 } else { 2 }))
            .collect()
    }

    fn phases(&self, k: u32) -> Vec<Complex64> {
        let w = 2.0 * std::f64::consts::PI / self.p as f64;
        (0..self.p)
            .map(|t| Complex64::from_polar(1.0, w * ((k as u64 * t as u64) % self.p as u64) as f64))
            .collect()
    }

    pub fn dense(&self, k: u32) -> DMatrix<Complex64> {
        let ph = self.phases(k);
        let scale = 1.0 / self.degree as f64;
        let mut m = DMatrix::<Complex64>::zeros(self.dim, self.dim);
        for (c, row) in self.steps.iter().enumerate() {
            for &(c2, t) in row {
                m[(c, c2 as usize)] += ph[t as usize] * scale;
            }
        }
        m
    }

    /// y = B_k x without forming B_k.
    pub fn apply(&self, phases: &[Complex64], x: &[Complex64], y: &mut [Complex64]) {
        let scale = 1.0 / self.degree as f64;
        for (c, row) in self.steps.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(c2, t) in row {
                acc += phases[t as usize] * x[c2 as usize];
            }
            y[c] = acc * scale;
        }
    }

    pub fn operator(&self, k: u32) -> BlockOperator<'_> {
        BlockOperator {
            blocks: self,
            phases: self.phases(k),
        }
    }
}

pub struct BlockOperator<'a> {
    blocks: &'a CharacterBlocks,
    phases: Vec<Complex64>,
}

impl BlockOperator<'_> {
    pub fn dim(&self) -> usize {
        self.blocks.dim
    }

    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.blocks.apply(&self.phases, x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegrp::GenSetZ;

    #[test]
    fn representatives_cover_cosets() {
        let grp = Sl2Group::new(7).unwrap();
        for c in 0..48 {
            let r = representative(&grp, c);
            assert_eq!(decompose(&grp, &r), (c, 0));
        }
        for x in grp.elements() {
            let (c, t) = decompose(&grp, &x);
            let u = grp.from_i64([1, t as i64, 0, 1]).unwrap();
            assert_eq!(u.mul_same(&representative(&grp, c)), x);
        }
    }

    #[test]
    fn blocks_are_hermitian() {
        let grp = Sl2Group::new(5).unwrap();
        let gens = GenSetZ::builtin("lubotzky").unwrap().indices_mod(&grp).unwrap();
        let b = CharacterBlocks::new(&grp, &gens);
        for k in 0..5 {
            let m = b.dense(k);
            assert!((&m - m.adjoint()).norm() < 1e-12);
        }
    }
}
