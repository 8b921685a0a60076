//! Traces, element classes, maximal tori and Borel subgroups of SL₂(F_p).

use serde::Serialize;

use super::field::{Fp2, QuadExtField};
use super::sl2::{Sl2Group, Sl2ModP};
use crate::error::{Error, Result};
use crate::setcalc::subset::GroupSubset;

/// Above this group order, centralizers use the closed form αI + βg.
pub const ENUMERATION_LIMIT: u32 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    Central,
    UnipotentLike,
    RegularSemisimple,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ElementClass {
    pub trace: u32,
    pub kind: ElementKind,
    pub sreg: bool,
}

pub fn classify(g: &Sl2ModP) -> ElementClass {
    let t = g.trace();
    let p = g.p();
    let kind = if g.is_central() {
        ElementKind::Central
    } else if is_pm_two(t, p) {
        ElementKind::UnipotentLike
    } else {
        ElementKind::RegularSemisimple
    };
    ElementClass {
        trace: t,
        kind,
        sreg: kind == ElementKind::RegularSemisimple && t != 0,
    }
}

/// t² = 4 in F_p.
#[inline]
pub fn is_pm_two(t: u32, p: u32) -> bool {
    (t as u64 * t as u64) % p as u64 == 4 % p as u64
}

#[inline]
pub fn is_rss(g: &Sl2ModP) -> bool {
    !is_pm_two(g.trace(), g.p())
}

#[inline]
pub fn is_sreg(g: &Sl2ModP) -> bool {
    let t = g.trace();
    t != 0 && !is_pm_two(t, g.p())
}

/// Centralizer of a regular semisimple element, with its splitting type.
#[derive(Clone, Debug)]
pub struct MaximalTorus {
    pub representative: Sl2ModP,
    pub points: GroupSubset,
    pub split: bool,
}

impl MaximalTorus {
    pub fn expected_order(&self) -> usize {
        let p = self.representative.p() as usize;
        if self.split {
            p - 1
        } else {
            p + 1
        }
    }

    pub fn contains(&self, grp: &Sl2Group, x: &Sl2ModP) -> bool {
        self.points.contains(grp.index_of(x))
    }
}

pub fn centralizer_torus(grp: &Sl2Group, g: &Sl2ModP) -> Result<MaximalTorus> {
    if !is_rss(g) {
        return Err(Error::NotRegularSemisimple);
    }
    let f = grp.field();
    let t = g.trace();
    let disc = f.sub(f.mul(t, t), 4);
    let split = f.legendre(disc) == 1;
    let points = if grp.size() <= ENUMERATION_LIMIT {
        GroupSubset::from_indices(
            grp.size(),
            grp.elements()
                .filter(|x| x.commutes_with(g))
                .map(|x| grp.index_of(&x)),
        )
    } else {
        centralizer_closed_form(grp, g)
    };
    Ok(MaximalTorus {
        representative: *g,
        points,
        split,
    })
}

// For non-scalar g every commuting matrix is αI + βg; det = α² + αβ·tr + β².
fn centralizer_closed_form(grp: &Sl2Group, g: &Sl2ModP) -> GroupSubset {
    let f = grp.field();
    let t = g.trace();
    let inv2 = f.inv(2).expect("odd p");
    let mut out = Vec::new();
    for beta in 0..f.p() {
        // α² + (β t) α + (β² − 1) = 0
        let bt = f.mul(beta, t);
        let disc = f.sub(f.mul(bt, bt), f.mul(4, f.sub(f.mul(beta, beta), 1)));
        let Some(r) = f.sqrt(disc) else { continue };
        let mut roots = vec![f.mul(f.sub(r, bt), inv2)];
        if r != 0 {
            roots.push(f.mul(f.sub(f.neg(r), bt), inv2));
        }
        for alpha in roots {
            let x = Sl2ModP::new(
                f,
                f.add(alpha, f.mul(beta, g.a)),
                f.mul(beta, g.b),
                f.mul(beta, g.c),
                f.add(alpha, f.mul(beta, g.d)),
            )
            .expect("det = 1 by construction");
            out.push(grp.index_of(&x));
        }
    }
    GroupSubset::from_indices(grp.size(), out)
}

/// Does H contain a strongly regular element of T?
pub fn involved(grp: &Sl2Group, h: &GroupSubset, t: &MaximalTorus) -> bool {
    h.iter()
        .filter(|&x| t.points.contains(x))
        .any(|x| is_sreg(&grp.element(x)))
}

/// Elements x with x T x⁻¹ = T, found by enumeration.
pub fn normalizer(grp: &Sl2Group, t: &MaximalTorus) -> GroupSubset {
    let r = t.representative;
    // xrx⁻¹ is regular semisimple, so it lies in T iff its centralizer is T
    GroupSubset::from_indices(
        grp.size(),
        grp.elements()
            .filter(|x| {
                let c = x.mul_same(&r).mul_same(&x.inverse());
                t.points.contains(grp.index_of(&c))
            })
            .map(|x| grp.index_of(&x)),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusFacts {
    pub order: usize,
    pub expected_order: usize,
    pub nonregular: usize,
    pub normalizer_order: usize,
    pub rss_share_centralizer: bool,
}

impl TorusFacts {
    pub fn holds(&self) -> bool {
        self.order == self.expected_order
            && self.nonregular == 2
            && self.normalizer_order == 2 * self.order
            && self.rss_share_centralizer
    }
}

pub fn torus_facts_check(grp: &Sl2Group, t: &MaximalTorus) -> Result<TorusFacts> {
    let nonregular = t
        .points
        .iter()
        .filter(|&x| !is_rss(&grp.element(x)))
        .count();
    let mut share = true;
    for x in t.points.iter() {
        let e = grp.element(x);
        if is_rss(&e) {
            let c = centralizer_torus(grp, &e)?;
            if c.points != t.points {
                share = false;
                break;
            }
        }
    }
    Ok(TorusFacts {
        order: t.points.len(),
        expected_order: t.expected_order(),
        nonregular,
        normalizer_order: normalizer(grp, t).len(),
        rss_share_centralizer: share,
    })
}

/// Regular parts of two tori, T₁,reg ∩ T₂,reg; empty when T₁ ≠ T₂.
pub fn regular_intersection(grp: &Sl2Group, t1: &MaximalTorus, t2: &MaximalTorus) -> Vec<u32> {
    t1.points
        .iter()
        .filter(|&x| t2.points.contains(x) && is_rss(&grp.element(x)))
        .collect()
}

/// All maximal tori of SL₂(F_p), by enumeration (small p only).
pub fn all_tori(grp: &Sl2Group) -> Result<Vec<MaximalTorus>> {
    let mut covered = GroupSubset::empty(grp.size());
    let mut out = Vec::new();
    for x in grp.elements() {
        let i = grp.index_of(&x);
        if covered.contains(i) || !is_rss(&x) {
            continue;
        }
        let t = centralizer_torus(grp, &x)?;
        covered = covered.union(&t.points.difference(&central_pair(grp)));
        out.push(t);
    }
    Ok(out)
}

fn central_pair(grp: &Sl2Group) -> GroupSubset {
    let i = Sl2ModP::identity(grp.p());
    GroupSubset::from_indices(grp.size(), [grp.index_of(&i), grp.index_of(&i.neg())])
}

/// Eigenvalues of g in F_{p²} (a repeated root is listed once).
pub fn eigenvalues(k: &QuadExtField, g: &Sl2ModP) -> Vec<Fp2> {
    let f = k.base();
    let t = g.trace();
    let disc = f.sub(f.mul(t, t), 4);
    let r = k.sqrt_of_base(disc);
    let half = Fp2::from_base(f.inv(2).expect("odd p"));
    let tt = Fp2::from_base(t);
    let l1 = k.mul(k.add(tt, r), half);
    let l2 = k.mul(k.sub(tt, r), half);
    if l1 == l2 {
        vec![l1]
    } else {
        vec![l1, l2]
    }
}

/// Eigenvector lines of g over F_{p²}, each normalized so its first non-zero coordinate is 1.
pub fn eigenvectors(k: &QuadExtField, g: &Sl2ModP) -> Vec<[Fp2; 2]> {
    if g.b == 0 && g.c == 0 {
        // diagonal; for scalars every line is an eigenvector and the axes stand in for them
        return vec![[Fp2::from_base(1), Fp2::ZERO], [Fp2::ZERO, Fp2::from_base(1)]];
    }
    let mut out = Vec::new();
    for lambda in eigenvalues(k, g) {
        let v = if g.b != 0 {
            [Fp2::from_base(g.b), k.sub(lambda, Fp2::from_base(g.a))]
        } else {
            [k.sub(lambda, Fp2::from_base(g.d)), Fp2::from_base(g.c)]
        };
        out.push(normalize(k, v));
    }
    out
}

fn normalize(k: &QuadExtField, v: [Fp2; 2]) -> [Fp2; 2] {
    let lead = if v[0].is_zero() { v[1] } else { v[0] };
    let inv = k.inv(lead).expect("non-zero vector");
    [k.mul(v[0], inv), k.mul(v[1], inv)]
}

/// g·v over F_{p²}.
pub fn apply(k: &QuadExtField, g: &Sl2ModP, v: [Fp2; 2]) -> [Fp2; 2] {
    let e = |x: u32| Fp2::from_base(x);
    [
        k.add(k.mul(e(g.a), v[0]), k.mul(e(g.b), v[1])),
        k.add(k.mul(e(g.c), v[0]), k.mul(e(g.d), v[1])),
    ]
}

/// v is an eigenvector of g iff det[v, gv] = 0.
pub fn is_eigenvector(k: &QuadExtField, g: &Sl2ModP, v: [Fp2; 2]) -> bool {
    let w = apply(k, g, v);
    k.sub(k.mul(v[0], w[1]), k.mul(v[1], w[0])).is_zero()
}

/// The eigenvalue of g on its eigenvector v.
pub fn eigenvalue_on(k: &QuadExtField, g: &Sl2ModP, v: [Fp2; 2]) -> Fp2 {
    let w = apply(k, g, v);
    if !v[0].is_zero() {
        k.mul(w[0], k.inv(v[0]).expect("non-zero"))
    } else {
        k.mul(w[1], k.inv(v[1]).expect("non-zero"))
    }
}

/// A common eigenvector over F_{p²} of all `xs`, i.e. a Borel subgroup of
/// SL₂(F_{p²}) containing them, if one exists.
pub fn common_borel(xs: &[Sl2ModP]) -> Option<[Fp2; 2]> {
    let first = xs.first()?;
    let f = first.field();
    let k = QuadExtField::new(f).ok()?;
    let candidates = match xs.iter().find(|x| !x.is_central()) {
        Some(x) => eigenvectors(&k, x),
        None => return Some([Fp2::from_base(1), Fp2::ZERO]),
    };
    candidates
        .into_iter()
        .find(|&v| xs.iter().all(|x| is_eigenvector(&k, x, v)))
}

/// {x ∈ SL₂(F_p) : Tr x = t}.
pub fn trace_fiber(grp: &Sl2Group, t: u32) -> GroupSubset {
    let t = t % grp.p();
    GroupSubset::from_indices(
        grp.size(),
        grp.elements()
            .filter(|x| x.trace() == t)
            .map(|x| grp.index_of(&x)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::field::PrimeField;

    fn m(p: u64, e: [i64; 4]) -> Sl2ModP {
        Sl2ModP::from_i64(&PrimeField::new(p).unwrap(), e).unwrap()
    }

    #[test]
    fn classification_examples() {
        let r = classify(&m(7, [0, 1, -1, 0]));
        assert_eq!(r.kind, ElementKind::RegularSemisimple);
        assert!(!r.sreg);
        assert_eq!(classify(&m(7, [1, 1, 0, 1])).kind, ElementKind::UnipotentLike);
        let d = classify(&m(7, [2, 0, 0, 4]));
        assert_eq!(d.kind, ElementKind::RegularSemisimple);
        assert_eq!(d.trace, 6);
        assert!(d.sreg);
        assert_eq!(classify(&m(7, [-1, 0, 0, -1])).kind, ElementKind::Central);
    }

    #[test]
    fn tori_mod_7() {
        let g = Sl2Group::new(7).unwrap();
        let split = centralizer_torus(&g, &m(7, [2, 0, 0, 4])).unwrap();
        assert!(split.split);
        assert_eq!(split.points.len(), 6);
        assert!(split
            .points
            .iter()
            .all(|x| g.element(x).b == 0 && g.element(x).c == 0));
        let nonsplit = centralizer_torus(&g, &m(7, [0, 1, -1, 0])).unwrap();
        assert!(!nonsplit.split);
        assert_eq!(nonsplit.points.len(), 8);
        assert_eq!(
            centralizer_torus(&g, &m(7, [1, 1, 0, 1])).unwrap_err(),
            Error::NotRegularSemisimple
        );
    }

    #[test]
    fn closed_form_matches_enumeration() {
        for p in [5u64, 7, 11, 13] {
            let g = Sl2Group::new(p).unwrap();
            for x in g.elements().step_by(7).filter(is_rss) {
                let t = centralizer_torus(&g, &x).unwrap();
                assert_eq!(centralizer_closed_form(&g, &x), t.points);
            }
        }
    }

    #[test]
    fn torus_facts_mod_5_and_7() {
        let g5 = Sl2Group::new(5).unwrap();
        let diag = centralizer_torus(&g5, &m(5, [2, 0, 0, 3])).unwrap();
        let facts = torus_facts_check(&g5, &diag).unwrap();
        assert_eq!(facts.normalizer_order, 8);
        assert!(facts.holds());
        let g7 = Sl2Group::new(7).unwrap();
        let tori = all_tori(&g7).unwrap();
        // p(p+1)/2 split + p(p-1)/2 non-split tori
        assert_eq!(tori.len(), 28 + 21);
        for t in &tori {
            assert!(torus_facts_check(&g7, t).unwrap().holds());
        }
        for (i, a) in tori.iter().enumerate() {
            for b in &tori[i + 1..] {
                assert!(regular_intersection(&g7, a, b).is_empty());
            }
        }
    }

    #[test]
    fn involvement() {
        let g = Sl2Group::new(7).unwrap();
        let d = m(7, [2, 0, 0, 4]);
        let t = centralizer_torus(&g, &d).unwrap();
        let all = GroupSubset::full(g.size());
        assert!(involved(&g, &all, &t));
        assert!(!involved(&g, &GroupSubset::identity(&g), &t));
        let h = GroupSubset::from_indices(
            g.size(),
            [g.index_of(&d), g.index_of(&d.inverse()), g.identity_index()],
        );
        assert!(involved(&g, &h, &t));
    }

    #[test]
    fn borel_witnesses() {
        let ups: Vec<Sl2ModP> = vec![m(7, [1, 1, 0, 1]), m(7, [2, 3, 0, 4]), m(7, [-1, 5, 0, -1])];
        let w = common_borel(&ups).unwrap();
        assert_eq!(w, [Fp2::from_base(1), Fp2::ZERO]);
        assert!(common_borel(&[m(7, [1, 1, 0, 1]), m(7, [1, 0, 1, 1])]).is_none());
        let rot = m(7, [0, 1, -1, 0]);
        let v = common_borel(&[rot]).unwrap();
        assert!(!v[1].in_base() || !v[0].in_base());
    }

    #[test]
    fn trace_fibers_partition_the_group() {
        for p in [3u64, 5, 7] {
            let g = Sl2Group::new(p).unwrap();
            let total: usize = (0..p as u32).map(|t| trace_fiber(&g, t).len()).sum();
            assert_eq!(total, g.size() as usize);
        }
        let g = Sl2Group::new(5).unwrap();
        // t = 1: t² − 4 = 2 is a non-square mod 5, so the fiber is a non-split class
        assert_eq!(trace_fiber(&g, 1).len(), 20);
        assert_eq!(trace_fiber(&g, 0).len(), 30);
    }
}
