//! Eigenvalues of the Markov operator M f(x) = |S|⁻¹ Σ_s f(xs).

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::blocks::{BlockOperator, CharacterBlocks};
use super::graph::CayleyGraph;
use crate::error::{Error, Result};

/// Groups up to this order are solved densely by [`Method::Auto`].
pub const DENSE_LIMIT: u32 = 5000;
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Auto,
    Dense,
    Iterative,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumSummary {
    pub p: u32,
    pub order: u32,
    pub degree: usize,
    /// 1 − ρ⁺.
    pub lambda1: f64,
    /// Largest eigenvalue on the non-constant functions.
    pub rho_plus: f64,
    /// Smallest eigenvalue.
    pub rho_minus: f64,
    /// max(|ρ⁺|, |ρ⁻|).
    pub rho: f64,
    pub method: Method,
    /// Largest ‖Bv − θv‖ over the reported extreme eigenpairs (0 for dense).
    pub residual: f64,
    pub bipartite: bool,
}

/// Every eigenvalue of M with multiplicity, ascending.
pub fn full_spectrum(g: &CayleyGraph) -> Vec<f64> {
    let blocks = CharacterBlocks::new(g.group(), g.generators());
    let mut out = Vec::with_capacity(g.order() as usize);
    for (k, mult) in blocks.characters() {
        let eig = SymmetricEigen::new(blocks.dense(k)).eigenvalues;
        for _ in 0..mult {
            out.extend(eig.iter().copied());
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    out
}

fn summarize(g: &CayleyGraph, top: f64, bottom: f64, method: Method, residual: f64) -> SpectrumSummary {
    let rho = top.abs().max(bottom.abs());
    SpectrumSummary {
        p: g.p(),
        order: g.order(),
        degree: g.degree(),
        lambda1: 1.0 - top,
        rho_plus: top,
        rho_minus: bottom,
        rho,
        method,
        residual,
        bipartite: (bottom + 1.0).abs() < 1e-9,
    }
}

fn dense_summary(g: &CayleyGraph) -> SpectrumSummary {
    let mut spec = full_spectrum(g);
    // Drop one copy of the trivial eigenvalue 1.
    spec.pop();
    let top = spec.last().copied().unwrap_or(0.0);
    let bottom = spec.first().copied().unwrap_or(0.0);
    summarize(g, top, bottom, Method::Dense, 0.0)
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn project_out(v: &mut [Complex64], q: &[Complex64]) {
    let c = dot(q, v);
    for (x, y) in v.iter_mut().zip(q) {
        *x -= c * y;
    }
}

/// Extreme eigenpairs of one block by Lanczos with full reorthogonalization,
/// restricted to the complement of `deflate`. The Rayleigh quotient matrix is
/// assembled from the Gram–Schmidt coefficients rather than assumed
/// tridiagonal, which keeps the Ritz values valid after near-breakdowns
/// (frequent here: the blocks have many repeated eigenvalues). Returns
/// (max, min, residual).
fn lanczos_extremes(
    op: &BlockOperator<'_>,
    deflate: Option<&[Complex64]>,
    rng: &mut ChaCha8Rng,
    max_iter: usize,
) -> Result<(f64, f64, f64)> {
    let n = op.dim();
    let limit = max_iter.min(n - deflate.map_or(0, |_| 1));
    let zero = Complex64::new(0.0, 0.0);
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    if let Some(d) = deflate {
        project_out(&mut v, d);
    }
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut basis: Vec<Vec<Complex64>> = vec![v];
    // h[j][i] = q_i* B q_j.
    let mut h: Vec<Vec<Complex64>> = Vec::new();
    let mut w = vec![zero; n];
    let mut last_res = f64::INFINITY;
    for j in 0..limit {
        op.apply(&basis[j], &mut w);
        let mut col = vec![zero; j + 1];
        for _ in 0..2 {
            if let Some(d) = deflate {
                project_out(&mut w, d);
            }
            for (i, q) in basis.iter().enumerate() {
                let c = dot(q, &w);
                col[i] += c;
                for (x, y) in w.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        h.push(col);
        let b = norm(&w);
        let exhausted = j + 1 == limit;
        if exhausted || (j + 1) % 25 == 0 {
            let m = j + 1;
            let hm = DMatrix::<Complex64>::from_fn(m, m, |r, c| if r <= c { h[c][r] } else { h[r][c].conj() });
            let e = SymmetricEigen::new(hm);
            let (mut imax, mut imin) = (0, 0);
            for i in 0..m {
                if e.eigenvalues[i] > e.eigenvalues[imax] {
                    imax = i;
                }
                if e.eigenvalues[i] < e.eigenvalues[imin] {
                    imin = i;
                }
            }
            let est = |i: usize| b * e.eigenvectors[(m - 1, i)].norm();
            if exhausted || (est(imax) < 0.1 * RESIDUAL_TOL && est(imin) < 0.1 * RESIDUAL_TOL) {
                let mut res: f64 = 0.0;
                for &i in &[imax, imin] {
                    let mut y = vec![zero; n];
                    for (r, q) in basis.iter().enumerate() {
                        let c = e.eigenvectors[(r, i)];
                        for (yy, qq) in y.iter_mut().zip(q) {
                            *yy += qq * c;
                        }
                    }
                    let mut by = vec![zero; n];
                    op.apply(&y, &mut by);
                    let theta = e.eigenvalues[i];
                    let r: Vec<Complex64> = by.iter().zip(&y).map(|(a, b)| a - b * theta).collect();
                    res = res.max(norm(&r) / norm(&y));
                }
                last_res = res;
                if res <= RESIDUAL_TOL {
                    return Ok((e.eigenvalues[imax], e.eigenvalues[imin], res));
                }
                if exhausted {
                    break;
                }
            }
        }
        if b > 1e-8 {
            basis.push(w.iter().map(|x| x / b).collect());
        } else {
            // The Krylov space is (numerically) invariant; continue with a
            // fresh random direction so the basis keeps growing.
            let mut v: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect();
            for _ in 0..2 {
                if let Some(d) = deflate {
                    project_out(&mut v, d);
                }
                for q in &basis {
                    project_out(&mut v, q);
                }
            }
            let nv = norm(&v);
            basis.push(v.iter().map(|x| x / nv).collect());
        }
    }
    Err(Error::NoConvergence {
        iterations: h.len(),
        residual: last_res,
    })
}

/// Blocks this small are diagonalized directly: a Krylov basis would span the
/// whole block, leaving only rounding in the residual.
const SMALL_BLOCK: usize = 64;

/// Extremes of a block from its dense eigendecomposition; the trivial block
/// drops one copy of the constant eigenvalue 1.
fn small_block_extremes(blocks: &CharacterBlocks, k: u32) -> (f64, f64, f64) {
    let mut eig: Vec<f64> = SymmetricEigen::new(blocks.dense(k)).eigenvalues.iter().copied().collect();
    eig.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    if k == 0 {
        eig.pop();
    }
    match (eig.last(), eig.first()) {
        (Some(&hi), Some(&lo)) => (hi, lo, 0.0),
        _ => (f64::NEG_INFINITY, f64::INFINITY, 0.0),
    }
}

fn iterative_summary(g: &CayleyGraph, seed: u64, max_iter: usize) -> Result<SpectrumSummary> {
    let blocks = CharacterBlocks::new(g.group(), g.generators());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ones: Vec<Complex64> = {
        let c = Complex64::new(1.0 / (blocks.dim as f64).sqrt(), 0.0);
        vec![c; blocks.dim]
    };
    let (mut top, mut bottom, mut residual) = (f64::NEG_INFINITY, f64::INFINITY, 0.0f64);
    for (k, _) in blocks.characters() {
        let op = blocks.operator(k);
        let (hi, lo, r) = if op.dim() <= SMALL_BLOCK {
            small_block_extremes(&blocks, k)
        } else {
            let deflate = (k == 0).then_some(ones.as_slice());
            lanczos_extremes(&op, deflate, &mut rng, max_iter)?
        };
        top = top.max(hi);
        bottom = bottom.min(lo);
        residual = residual.max(r);
    }
    Ok(summarize(g, top, bottom, Method::Iterative, residual))
}

/// Iteration cap per character block for the iterative method.
pub const ITERATION_BUDGET: usize = 100_000;

pub fn spectrum(g: &CayleyGraph, method: Method, seed: u64) -> Result<SpectrumSummary> {
    g.require_connected()?;
    match method {
        Method::Dense => Ok(dense_summary(g)),
        Method::Iterative => iterative_summary(g, seed, ITERATION_BUDGET),
        Method::Auto if g.order() <= DENSE_LIMIT => Ok(dense_summary(g)),
        Method::Auto => iterative_summary(g, seed, ITERATION_BUDGET),
    }
}

/// Smallest dimension of a non-trivial representation of SL₂(F_p), p ≥ 3.
pub fn min_nontrivial_dim(p: u32) -> u32 {
    (p - 1) / 2
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceMethodReport {
    pub m: u32,
    pub rho: f64,
    /// (|G|/mdim · rp(X_m))^{1/(2m)}.
    pub bound: f64,
    pub holds: bool,
}

/// ρ ≤ (|G| rp(X_m) / mdim)^{1/(2m)}: each non-trivial eigenvalue occurs with
/// multiplicity ≥ mdim, and Σ λ^{2m} = |G| rp(X_m).
pub fn trace_method_check(g: &CayleyGraph, s: &SpectrumSummary, rp_m: f64, m: u32) -> Result<TraceMethodReport> {
    if g.p() < 3 || m == 0 {
        return Err(Error::Domain("trace method needs p >= 3 and m >= 1".into()));
    }
    let ln_rhs = (g.order() as f64).ln() + rp_m.ln() - (min_nontrivial_dim(g.p()) as f64).ln();
    let bound = (ln_rhs / (2.0 * m as f64)).exp();
    Ok(TraceMethodReport {
        m,
        rho: s.rho,
        bound,
        holds: s.rho <= bound + 1e-9,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DiameterGapReport {
    pub diameter: u32,
    pub bound: f64,
    pub lambda1: f64,
    pub holds: bool,
}

/// λ₁ ≥ 1/(|S| diam²).
pub fn gap_from_diameter(g: &CayleyGraph, s: &SpectrumSummary) -> Result<DiameterGapReport> {
    let d = g.diameter()?;
    let bound = 1.0 / (g.degree() as f64 * (d as f64).powi(2));
    Ok(DiameterGapReport {
        diameter: d,
        bound,
        lambda1: s.lambda1,
        holds: bound <= s.lambda1 + 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegrp::GenSetZ;
    use crate::groups::sl2::Sl2Group;
    use num_traits::ToPrimitive;
    use crate::walks::walk;

    fn lub(p: u32) -> CayleyGraph {
        CayleyGraph::build(p, &GenSetZ::builtin("lubotzky").unwrap()).unwrap()
    }

    #[test]
    fn complete_graph_gap() {
        let grp = Sl2Group::new(5).unwrap();
        let gens: Vec<u32> = (0..120).filter(|&x| x != grp.identity_index()).collect();
        let g = CayleyGraph::new(grp, gens).unwrap();
        let s = spectrum(&g, Method::Dense, 0).unwrap();
        assert!((s.lambda1 - 120.0 / 119.0).abs() < 1e-10);
        let d = gap_from_diameter(&g, &s).unwrap();
        assert!((d.bound - 1.0 / 119.0).abs() < 1e-15 && d.holds);
    }

    #[test]
    fn dense_matches_iterative_mod_7() {
        let g = lub(7);
        let d = spectrum(&g, Method::Dense, 0).unwrap();
        let i = spectrum(&g, Method::Iterative, 7).unwrap();
        assert!(d.lambda1 > 0.0);
        assert!((d.lambda1 - i.lambda1).abs() < 1e-8);
        assert!((d.rho - i.rho).abs() < 1e-8);
        assert!(i.residual <= RESIDUAL_TOL);
    }

    #[test]
    fn spectrum_in_unit_interval_with_simple_one() {
        let spec = full_spectrum(&lub(5));
        assert_eq!(spec.len(), 120);
        assert!(spec.iter().all(|&l| (-1.0 - 1e-12..=1.0 + 1e-12).contains(&l)));
        assert!((spec[119] - 1.0).abs() < 1e-12);
        assert!(spec[118] < 1.0 - 1e-6);
    }

    #[test]
    fn trace_identity_matches_return_probability() {
        let g = lub(7);
        let spec = full_spectrum(&g);
        for m in 1..5u32 {
            let lhs: f64 = spec.iter().map(|l| l.powi(2 * m as i32)).sum::<f64>() / 336.0;
            let rp = walk(g.group(), g.generators(), m).unwrap().return_probability();
            let rpf = rp.to_f64().unwrap();
            assert!((lhs - rpf).abs() < 1e-9, "m={m}");
        }
    }

    #[test]
    fn trace_method_mod_11() {
        let g = lub(11);
        let s = spectrum(&g, Method::Dense, 0).unwrap();
        for m in 2..=10 {
            let rp = walk(g.group(), g.generators(), m).unwrap().return_probability();
            let rpf = rp.to_f64().unwrap();
            assert!(trace_method_check(&g, &s, rpf, m).unwrap().holds);
        }
    }
}
