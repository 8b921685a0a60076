//! Approximate subgroups: witness checking and the constructive route from
//! small tripling / small Ruzsa distance / large energy to an approximate subgroup.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::energy::{energy, representation_counts};
use super::group::FiniteGroup;
use super::products::{power_sequence, product, ratio, DEFAULT_MEM_BUDGET};
use super::ruzsa::{rat_pow, ruzsa_cover, ruzsa_distance, scaled_pow, CoverSide};
use super::subset::GroupSubset;
use crate::error::{Error, Result};

fn big(n: usize) -> BigInt {
    BigInt::from(n)
}

/// |lhs| ≤ bound · |rhs|, compared exactly.
fn size_le(lhs: usize, bound: &BigRational, rhs: usize) -> bool {
    BigRational::from_integer(big(lhs)) <= bound * BigRational::from_integer(big(rhs))
}

/// A named clause of a constructive statement and whether it was verified.
#[derive(Clone, Debug, Serialize)]
pub struct Clause {
    pub name: String,
    pub holds: bool,
}

impl Clause {
    fn new(name: impl Into<String>, holds: bool) -> Self {
        Self {
            name: name.into(),
            holds,
        }
    }
}

pub fn all_hold(clauses: &[Clause]) -> bool {
    clauses.iter().all(|c| c.holds)
}

/// H with a symmetric X ⊂ H·H, |X| ≤ alpha, and H·H ⊂ X·H.
#[derive(Clone, Debug)]
pub struct ApproxGroupWitness {
    pub h: GroupSubset,
    pub x: GroupSubset,
    pub alpha: BigRational,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct WitnessCheck {
    pub contains_identity: bool,
    pub h_symmetric: bool,
    pub x_symmetric: bool,
    pub x_in_hh: bool,
    pub x_small: bool,
    pub covers: bool,
}

impl WitnessCheck {
    pub fn holds(&self) -> bool {
        self.contains_identity
            && self.h_symmetric
            && self.x_symmetric
            && self.x_in_hh
            && self.x_small
            && self.covers
    }
}

impl ApproxGroupWitness {
    /// Checks every defining clause from scratch.
    pub fn verify<G: FiniteGroup + ?Sized>(&self, g: &G) -> WitnessCheck {
        let hh = product(g, &self.h, &self.h);
        WitnessCheck {
            contains_identity: self.h.contains_identity(g),
            h_symmetric: self.h.is_symmetric(g),
            x_symmetric: self.x.is_symmetric(g),
            x_in_hh: self.x.is_subset(&hh),
            x_small: size_le(self.x.len(), &self.alpha, 1),
            covers: hh.is_subset(&product(g, &self.x, &self.h)),
        }
    }

    /// Same witness, judged against a (weaker) bound.
    pub fn with_alpha(&self, alpha: BigRational) -> Self {
        Self {
            alpha,
            ..self.clone()
        }
    }
}

/// Builds the witness for H = A⁽³⁾ from `seq = [A, A², …, A⁷]`.
fn witness_from_powers<G: FiniteGroup + ?Sized>(
    g: &G,
    seq: &[GroupSubset],
) -> Result<ApproxGroupWitness> {
    let a = &seq[0];
    let h = seq[2].clone();
    let h2 = &seq[5];
    // |A·H²| = |A⁷| ≤ α⁵|A|, so a cover X ⊂ H² has H² ⊂ A⁻¹A·X ⊂ H·X.
    let cover = ruzsa_cover(g, a, h2, CoverSide::Right)?;
    let x = cover.x.symmetrize(g);
    let trp = ratio(h.len(), a.len());
    Ok(ApproxGroupWitness {
        h,
        x,
        alpha: BigRational::from_integer(2.into()) * rat_pow(&trp, 5),
    })
}

/// H = A⁽³⁾ as a (2·trp(A)⁵)-approximate subgroup, for symmetric A ∋ 1.
pub fn approx_from_tripling<G: FiniteGroup + ?Sized>(
    g: &G,
    a: &GroupSubset,
) -> Result<ApproxGroupWitness> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if !a.is_symmetric(g) || !a.contains_identity(g) {
        return Err(Error::NotSymmetric("set must be symmetric and contain 1".into()));
    }
    let seq = power_sequence(g, a, 7, DEFAULT_MEM_BUDGET)?;
    witness_from_powers(g, &seq)
}

/// S = {x : |A ∩ A·x| > |A|/(2α²)}; always symmetric and contains 1 when α ≥ 1.
pub fn tao_symmetry_set<G: FiniteGroup + ?Sized>(
    g: &G,
    a: &GroupSubset,
    alpha: &BigRational,
) -> GroupSubset {
    // |A ∩ A·x| = #{(a', a) : a'·x = a}, i.e. x = a'⁻¹a.
    let inv = a.inverse(g);
    let r = representation_counts(g, &inv, a);
    let (n, d) = (alpha.numer(), alpha.denom());
    let lhs_scale = BigInt::from(2) * n * n;
    let rhs = big(a.len()) * d * d;
    let members = r
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0 && BigInt::from(c) * &lhs_scale > rhs)
        .map(|(x, _)| x as u32);
    GroupSubset::from_indices(g.order(), members)
}

#[derive(Clone, Debug)]
pub struct Th46Output {
    pub s: GroupSubset,
    pub witness: ApproxGroupWitness,
    pub x: GroupSubset,
    pub clauses: Vec<Clause>,
}

impl Th46Output {
    pub fn holds(&self) -> bool {
        all_hold(&self.clauses)
    }
}

/// From d(A, B⁻¹) ≤ log α: an approximate subgroup H = S⁽³⁾ and X with
/// A ⊂ X·H, B ⊂ H·X, checked against γ = 2²¹α⁸⁰, γ₁ = 2²⁸α¹⁰⁴,
/// |H| ≤ 8α¹⁴|A| and trp(H) ≤ 2¹⁰α⁴⁰.
pub fn th46_construct<G: FiniteGroup + ?Sized>(
    g: &G,
    a: &GroupSubset,
    b: &GroupSubset,
    alpha: &BigRational,
) -> Result<Th46Output> {
    if *alpha < BigRational::one() {
        return Err(Error::Domain("alpha must be >= 1".into()));
    }
    let binv = b.inverse(g);
    if !ruzsa_distance(g, a, &binv)?.le_log(alpha) {
        return Err(Error::Precondition("d(A, B^-1) > log alpha".into()));
    }
    let s = tao_symmetry_set(g, a, alpha);
    let seq = power_sequence(g, &s, 9, DEFAULT_MEM_BUDGET)?;
    let z = witness_from_powers(g, &seq[..7])?;
    let h = &z.h;
    let gamma = scaled_pow(1, 21, alpha, 80);
    let zw = z.with_alpha(gamma);

    // A ⊂ Y·H·H from |A·H| small relative to |H|; Y ⊂ A.
    let y = ruzsa_cover(g, h, a, CoverSide::Left)?;
    // B⁻¹ ⊂ Y₁·H·H; Y₁ ⊂ B⁻¹.
    let y1 = ruzsa_cover(g, h, &binv, CoverSide::Left)?;
    // A ⊂ YZH, and B ⊂ H·Z·Y₁⁻¹ because H and Z are symmetric.
    let x = product(g, &y.x, &zw.x).union(&product(g, &zw.x, &y1.x.inverse(g)));

    let check = zw.verify(g);
    let h3 = &seq[8];
    let clauses = vec![
        Clause::new("cover for A", y.holds()),
        Clause::new("cover for B^-1", y1.holds()),
        Clause::new("H is a gamma-approximate subgroup", check.holds()),
        Clause::new("|X| <= 2^28 alpha^104", size_le(x.len(), &scaled_pow(1, 28, alpha, 104), 1)),
        Clause::new("A in XH", a.is_subset(&product(g, &x, h))),
        Clause::new("B in HX", b.is_subset(&product(g, h, &x))),
        Clause::new("|H| <= 8 alpha^14 |A|", size_le(h.len(), &scaled_pow(1, 3, alpha, 14), a.len())),
        Clause::new(
            "|H^3| <= 2^10 alpha^40 |H|",
            size_le(h3.len(), &scaled_pow(1, 10, alpha, 40), h.len()),
        ),
    ];
    Ok(Th46Output {
        s,
        witness: zw,
        x,
        clauses,
    })
}

#[derive(Clone, Debug)]
pub struct BgsReport {
    /// None when the search found nothing (an inconclusive outcome, not a violation).
    pub pair: Option<(GroupSubset, GroupSubset)>,
    pub alpha1: BigRational,
    pub candidates_tried: usize,
}

/// Checks the four conclusion clauses for a candidate pair.
pub fn bgs_clauses<G: FiniteGroup + ?Sized>(
    g: &G,
    a: &GroupSubset,
    b: &GroupSubset,
    a1: &GroupSubset,
    b1: &GroupSubset,
    alpha: &BigRational,
) -> Result<Vec<Clause>> {
    if a1.is_empty() || b1.is_empty() {
        return Ok(vec![Clause::new("non-empty", false)]);
    }
    let alpha1 = scaled_pow(1, 23, alpha, 9);
    // |A|² ≤ 128α²|A₁|² stands in for |A| ≤ 8√2·α|A₁|.
    let a_sq = BigRational::from_integer(big(a.len() * a.len()));
    let a1_sq = BigRational::from_integer(big(a1.len() * a1.len()));
    let d = ruzsa_distance(g, a1, &b1.inverse(g))?;
    Ok(vec![
        Clause::new("A1 in A, B1 in B", a1.is_subset(a) && b1.is_subset(b)),
        Clause::new(
            "|A| <= 8 sqrt2 alpha |A1|",
            a_sq <= BigRational::from_integer(128.into()) * alpha * alpha * a1_sq,
        ),
        Clause::new("|B| <= 8 alpha |B1|", size_le(b.len(), &(alpha * BigRational::from_integer(8.into())), b1.len())),
        Clause::new("d(A1, B1^-1) <= log alpha1", d.le_log(&alpha1)),
    ])
}

/// Popularity-filtered search for the Balog–Gowers–Szemerédi pair.
/// Tries (A, B) first, then prefixes of A and B sorted by how many
/// energy quadruples each element takes part in.
pub fn bgs_witness<G: FiniteGroup + ?Sized>(
    g: &G,
    a: &GroupSubset,
    b: &GroupSubset,
    alpha: &BigRational,
) -> Result<BgsReport> {
    let cert = energy(g, a, b)?;
    if !cert.at_least_inverse(alpha) {
        return Err(Error::Precondition("e(A,B) < 1/alpha".into()));
    }
    let alpha1 = scaled_pow(1, 23, alpha, 9);
    let mut tried = 0usize;
    let mut attempt = |a1: &GroupSubset, b1: &GroupSubset| -> Result<bool> {
        tried += 1;
        Ok(all_hold(&bgs_clauses(g, a, b, a1, b1, alpha)?))
    };
    if attempt(a, b)? {
        return Ok(BgsReport {
            pair: Some((a.clone(), b.clone())),
            alpha1,
            candidates_tried: tried,
        });
    }
    let r = representation_counts(g, a, b);
    let mut pa: Vec<(u64, u32)> = a
        .iter()
        .map(|x| (b.iter().map(|y| r[g.mul(x, y) as usize] as u64).sum(), x))
        .collect();
    let mut pb: Vec<(u64, u32)> = b
        .iter()
        .map(|y| (a.iter().map(|x| r[g.mul(x, y) as usize] as u64).sum(), y))
        .collect();
    pa.sort_by(|u, v| v.cmp(u));
    pb.sort_by(|u, v| v.cmp(u));
    let mut ka = a.len();
    let mut kb = b.len();
    loop {
        let a1 = GroupSubset::from_indices(g.order(), pa[..ka].iter().map(|p| p.1));
        let b1 = GroupSubset::from_indices(g.order(), pb[..kb].iter().map(|p| p.1));
        if attempt(&a1, &b1)? {
            return Ok(BgsReport {
                pair: Some((a1, b1)),
                alpha1,
                candidates_tried: tried,
            });
        }
        if ka == 1 && kb == 1 {
            break;
        }
        ka = (ka * 3 / 4).max(1);
        kb = (kb * 3 / 4).max(1);
    }
    Ok(BgsReport {
        pair: None,
        alpha1,
        candidates_tried: tried,
    })
}

#[derive(Clone, Debug)]
pub struct EnergyApprox {
    pub a1: GroupSubset,
    pub b1: GroupSubset,
    pub witness: ApproxGroupWitness,
    pub x: u32,
    pub y: u32,
    pub clauses: Vec<Clause>,
}

impl EnergyApprox {
    pub fn holds(&self) -> bool {
        all_hold(&self.clauses)
    }
}

/// Large energy e(A,B) ≥ 1/α to an approximate subgroup H with x, y such that
/// A ∩ xH and B ∩ Hy are large. `Ok(None)` means the pair search was inconclusive.
pub fn energy_to_approx<G: FiniteGroup + ?Sized>(
    g: &G,
    a: &GroupSubset,
    b: &GroupSubset,
    alpha: &BigRational,
) -> Result<Option<EnergyApprox>> {
    if *alpha < BigRational::one() {
        return Err(Error::Domain("alpha must be >= 1".into()));
    }
    let bgs = bgs_witness(g, a, b, alpha)?;
    let Some((a1, b1)) = bgs.pair else {
        return Ok(None);
    };
    let t = th46_construct(g, &a1, &b1, &bgs.alpha1)?;
    let h = &t.witness.h;

    // Pigeonhole over X: A₁ ⊂ XH, so some x ∈ X has |A₁ ∩ xH| ≥ |A₁|/|X|.
    let best = |left: bool| -> (u32, usize) {
        let target = if left { &a1 } else { &b1 };
        t.x.iter()
            .map(|z| {
                let coset = if left {
                    h.left_translate(g, z)
                } else {
                    h.right_translate(g, z)
                };
                (z, target.intersection_len(&coset))
            })
            .max_by_key(|&(z, c)| (c, std::cmp::Reverse(z)))
            .unwrap_or((g.identity(), 0))
    };
    let (x, _) = best(true);
    let (y, _) = best(false);
    let ax = a.intersection_len(&h.left_translate(g, x));
    let by = b.intersection_len(&h.right_translate(g, y));

    let beta = scaled_pow(1, 1861, alpha, 720);
    let beta1 = scaled_pow(1, 2424, alpha, 937);
    let beta2 = scaled_pow(1, 325, alpha, 126);
    let beta3 = scaled_pow(1, 930, alpha, 360);
    let witness = t.witness.with_alpha(beta);
    let h3 = power_sequence(g, h, 3, DEFAULT_MEM_BUDGET)?.pop().expect("3 terms");
    let alpha_sq = alpha * alpha;

    let mut clauses = vec![
        Clause::new("H is a beta-approximate subgroup", witness.verify(g).holds()),
        Clause::new("|H| <= beta2 |A|", size_le(h.len(), &beta2, a.len())),
        Clause::new("|A| <= alpha^2 |B|", size_le(a.len(), &alpha_sq, b.len())),
        Clause::new("|A| <= beta1 |A cap xH|", size_le(a.len(), &beta1, ax)),
        Clause::new("|B| <= beta1 |B cap Hy|", size_le(b.len(), &beta1, by)),
        Clause::new("|H^3| <= beta3 |H|", size_le(h3.len(), &beta3, h.len())),
    ];
    for c in t.clauses {
        clauses.push(Clause::new(format!("inner: {}", c.name), c.holds));
    }
    Ok(Some(EnergyApprox {
        a1,
        b1,
        witness,
        x,
        y,
        clauses,
    }))
}
