//! Certified evaluation of the explicit spectral-gap, threshold and diameter
//! constants for a generating set S ⊂ SL₂(Z).

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::table::*;
use crate::certified::{ln2, Interval};
use crate::error::{Error, Result};
use crate::freegrp::GenSetZ;

pub const REPORT_SCHEMA: &str = "sl2lab.bound-report/1";

/// An enclosure printed as decimal endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Enclosure {
    pub lo: String,
    pub hi: String,
}

impl From<&Interval> for Enclosure {
    fn from(x: &Interval) -> Self {
        Self {
            lo: x.lo_decimal(),
            hi: x.hi_decimal(),
        }
    }
}

fn rat(n: u64, d: u64) -> Interval {
    Interval::from_ratio(n, d).expect("non-zero denominator")
}

fn int(n: u64) -> Interval {
    Interval::from_int(n)
}

/// Enclosure of τ⁻¹ = ln max ‖s‖.
pub fn compute_tau_inv(s: &GenSetZ) -> Result<Interval> {
    s.tau_inv()
}

/// γ_raw = ln((2/√3)√|S|) · τ from |S| and τ⁻¹.
pub fn gamma_raw_from(size: usize, tau_inv: &Interval) -> Result<Interval> {
    let r = Interval::from_ratio(4 * size as u64, 3)?.sqrt()?;
    r.ln()?.div(tau_inv)
}

#[derive(Clone, Debug)]
pub struct Gamma {
    pub raw: Interval,
    /// raw / 2⁹.
    pub eff: Interval,
    /// eff ≤ 2⁻⁵, certified.
    pub within_lemma_bound: bool,
}

pub fn compute_gamma(s: &GenSetZ) -> Result<Gamma> {
    if s.len() < 4 || !s.len().is_multiple_of(2) {
        return Err(Error::InvalidGenerators(format!("need |S| >= 4 even, got {}", s.len())));
    }
    gamma_from(s.len(), &compute_tau_inv(s)?)
}

pub fn gamma_from(size: usize, tau_inv: &Interval) -> Result<Gamma> {
    let raw = gamma_raw_from(size, tau_inv)?;
    let eff = raw.scale_pow2(-(GAMMA_SHIFT as i64));
    let within_lemma_bound = eff.le(&Interval::one().scale_pow2(GAMMA_MAX_LOG2));
    Ok(Gamma {
        raw,
        eff,
        within_lemma_bound,
    })
}

/// δ₁ = ½ min(δγ/(2c₂+1), ε/(2c₂)), exactly.
pub fn flattening_delta1(delta: &BigRational, gamma: &BigRational, epsilon: &BigRational) -> Result<BigRational> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    if *delta <= zero || *delta > one {
        return Err(Error::Domain(format!("delta = {delta} must lie in (0, 1]")));
    }
    if *gamma <= zero || *gamma >= one {
        return Err(Error::Domain(format!("gamma = {gamma} must lie in (0, 1)")));
    }
    if *epsilon <= zero {
        return Err(Error::Domain(format!("epsilon = {epsilon} must be positive")));
    }
    let c2 = BigRational::from_integer(C2.into());
    let two = BigRational::from_integer(2.into());
    let a = delta * gamma / (&two * &c2 + &one);
    let b = epsilon / (&two * &c2);
    Ok(if a < b { a } else { b } / two)
}

/// δ₁ as an enclosure, for γ known only as an enclosure.
pub fn flattening_delta1_interval(delta: &Interval, gamma: &Interval, epsilon: &Interval) -> Result<Interval> {
    let a = delta.mul(gamma).div_int(2 * C2 + 1)?;
    let b = epsilon.div_int(2 * C2)?;
    a.min(&b).div_int(2)
}

/// log₂ c₃.
pub fn flattening_c3_log2() -> u64 {
    C3_LOG2
}

#[derive(Clone, Debug, Serialize)]
pub struct JBounds {
    /// 48060000 / γ.
    pub stated: Enclosure,
    /// 8 max((2c₂+1)/(δγ), 4c₂/d).
    pub chain: Enclosure,
    /// 8 max((2c₂+1)/(δγ), 16c₂/(7d)).
    pub statement_branch: Enclosure,
    /// ⌈max of the three⌉, the value used.
    pub used: u64,
}

fn j_bounds(gamma_eff: &Interval) -> Result<JBounds> {
    let delta = rat(1, HELFGOTT_DELTA_DEN);
    let d = rat(1, D_DEN);
    let first = int(2 * C2 + 1).div(&delta.mul(gamma_eff))?;
    let stated = int(J_STATED_NUM).div(gamma_eff)?;
    let chain = first.max(&int(4 * C2).div(&d)?).mul_int(8);
    let statement_branch = first.max(&int(16 * C2).div(&d.mul_int(7))?).mul_int(8);
    let all = stated.max(&chain).max(&statement_branch);
    let used = all
        .ceil_int()
        .to_u64()
        .ok_or_else(|| Error::Domain("flattening step bound out of range".into()))?;
    Ok(JBounds {
        stated: (&stated).into(),
        chain: (&chain).into(),
        statement_branch: (&statement_branch).into(),
        used,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdTerm {
    pub name: &'static str,
    /// Smallest log₂ p (to bisection precision) at which the condition is
    /// certified to hold.
    pub log2_p: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiameterBound {
    /// ln(8τ⁻¹/(|S|−1)) / ln(1+δ).
    pub a: Enclosure,
    /// log₂ 3^A.
    pub coeff_log2: Enclosure,
    /// δ₂ = τ ln(|S|−1)/8.
    pub delta2: Enclosure,
    /// ln(1/δ₂)/ln(1+δ), the exponent obtained from δ₂ directly.
    pub a_from_delta2: Enclosure,
    /// The bound applies for p > exp(2τ⁻¹).
    pub validity_p: Enclosure,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub schema: &'static str,
    pub generators: usize,
    pub tau: Enclosure,
    pub tau_inv: Enclosure,
    pub gamma_raw: Enclosure,
    pub gamma_eff: Enclosure,
    pub gamma_within_lemma_bound: bool,
    pub delta: String,
    pub c1_log2: u64,
    pub c2: u64,
    pub c3_log2: u64,
    pub epsilon: String,
    pub d: String,
    pub c: String,
    pub delta1: Enclosure,
    pub j: JBounds,
    /// log₂ of the certified lower bound d/(2^{j+4}c) for λ₁.
    pub gap_log2: Enclosure,
    /// −2³⁵/γ_raw, the exponent of the closed-form bound.
    pub stated_gap_log2: Enclosure,
    /// gap_log2 ≥ −2³⁵/γ_raw, certified.
    pub stated_form_implied: bool,
    pub thresholds: Vec<ThresholdTerm>,
    pub p_threshold_log2: f64,
    pub binding_threshold: &'static str,
    pub diameter: DiameterBound,
    pub babai: BabaiConstant,
}

/// The inequalities on p that make the flattening and decay steps effective,
/// each returned as a predicate on log₂ p certified with interval arithmetic.
struct ThresholdSystem {
    gamma: Interval,
    tau_inv: Interval,
    delta: Interval,
    delta0: Interval,
    delta1: Interval,
    epsilon: Interval,
    d: Interval,
    c: Interval,
}

impl ThresholdSystem {
    // log₂|G| for |G| = p(p²−1): [3L − slack, 3L].
    fn log2_order(l: &Interval, l_min: f64) -> Interval {
        let top = l.mul_int(3);
        let slack = if l_min >= 4.0 { rat(1, 64) } else { int(1) };
        top.sub(&slack).hull(&top)
    }

    // ln(3|G|) ≤ ln 3 + 3L ln 2.
    fn ln_3g(l: &Interval) -> Result<Interval> {
        Ok(int(3).ln()?.add(&l.mul_int(3).mul(ln2())))
    }

    fn holds(&self, name: &str, lf: f64) -> Result<bool> {
        let l = Interval::from_f64(lf)?;
        let lg = Self::log2_order(&l, lf);
        let c1 = int(C1_LOG2);
        let four_c1 = int(C1_LOG2 + 2);
        Ok(match name {
            "subgroup_escape" => {
                // |G|^{γ−δ₀(1+c₂)} > 4c₁
                let e = self.gamma.sub(&self.delta0.mul_int(1 + C2));
                e.is_positive() && lg.mul(&e).gt(&four_c1)
            }
            "flourishing" => {
                // |G|^{γ₁} > 4c₁ {c₁(4c₁)^{1/γ₁}}^{1/(δ − c₂δ₀/γ₁)}, γ₁ = γ − (1+c₂)δ₀
                let g1 = self.gamma.sub(&self.delta0.mul_int(1 + C2));
                if !g1.is_positive() {
                    return Ok(false);
                }
                let e = self.delta.sub(&self.delta0.mul_int(C2).div(&g1)?);
                if !e.is_positive() {
                    return Ok(false);
                }
                let inner = c1.add(&four_c1.div(&g1)?);
                let rhs = four_c1.add(&inner.div(&e)?);
                lg.mul(&g1).gt(&rhs)
            }
            "energy_tail" => {
                // |G|^{ε−2c₂δ₀} ≥ (ln 3|G|)⁴
                let e = self.epsilon.sub(&self.delta0.mul_int(2 * C2));
                e.is_positive() && lg.mul(&e).ge(&Self::ln_3g(&l)?.log2()?.mul_int(4))
            }
            "energy_head" => {
                // |G|^{δ₀} ≥ c₁⁻² (ln 3|G|)⁴
                let rhs = Self::ln_3g(&l)?.log2()?.mul_int(4).sub(&int(2 * C1_LOG2));
                lg.mul(&self.delta0).ge(&rhs)
            }
            "flattening_constant" => {
                // min(|G|^{d/4}, |G|^{δ₁/2}) ≥ c₃
                let c3 = int(C3_LOG2);
                lg.mul(&self.d).div_int(4)?.ge(&c3) && lg.mul(&self.delta1).div_int(2)?.ge(&c3)
            }
            "decay_radius" => {
                // p ≥ max(17, 2 exp(2/(cτ))) ⇔ L ≥ log₂ 17 and (L − 1) ln 2 ≥ 2τ⁻¹/c
                let need = self.tau_inv.mul_int(2).div(&self.c)?;
                l.ge(&int(17).log2()?) && l.sub(&Interval::one()).mul(ln2()).ge(&need)
            }
            "decay_small_subgroups" => {
                // |G|^γ ≥ max(120, ln(p/2))
                let lhs = lg.mul(&self.gamma);
                let ln_half = l.sub(&Interval::one()).mul(ln2());
                lhs.ge(&int(DICKSON_SMALL).log2()?) && (!ln_half.is_positive() || lhs.ge(&ln_half.log2()?))
            }
            _ => unreachable!("unknown threshold {name}"),
        })
    }

    /// Least L (within a relative 1e-12) with the condition certified at L;
    /// the conditions are monotone in L beyond their thresholds.
    fn solve(&self, name: &str) -> Result<f64> {
        let mut hi = 1.0f64;
        while !self.holds(name, hi)? {
            hi *= 2.0;
            if hi > 1e30 {
                return Err(Error::Domain(format!("threshold {name} not reached")));
            }
        }
        let mut lo = if hi > 1.0 { hi / 2.0 } else { 0.0 };
        if hi <= 1.0 {
            return Ok(hi);
        }
        while hi - lo > hi * 1e-12 {
            let mid = 0.5 * (lo + hi);
            if self.holds(name, mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

pub const THRESHOLD_NAMES: [&str; 7] = [
    "subgroup_escape",
    "flourishing",
    "energy_tail",
    "energy_head",
    "flattening_constant",
    "decay_radius",
    "decay_small_subgroups",
];

pub fn diameter_bound(s: &GenSetZ) -> Result<DiameterBound> {
    if s.len() < 4 {
        return Err(Error::InvalidGenerators("need |S| >= 4".into()));
    }
    let tau_inv = compute_tau_inv(s)?;
    let ln_step = rat(HELFGOTT_DELTA_DEN + 1, HELFGOTT_DELTA_DEN).ln()?;
    let a = tau_inv.mul_int(8).div_int(s.len() as u64 - 1)?.ln()?.div(&ln_step)?;
    let coeff_log2 = a.mul(&int(3).log2()?);
    let delta2 = int(s.len() as u64 - 1).ln()?.div(&tau_inv)?.div_int(8)?;
    let a_from_delta2 = delta2.recip()?.ln()?.div(&ln_step)?;
    // exp(2τ⁻¹) as an enclosure: only its decimal value is reported.
    let e = tau_inv.mul_int(2);
    let validity = Interval::from_f64(e.lo_f64().exp() * (1.0 - 1e-12))?
        .hull(&Interval::from_f64(e.hi_f64().exp() * (1.0 + 1e-12))?);
    Ok(DiameterBound {
        a: (&a).into(),
        coeff_log2: (&coeff_log2).into(),
        delta2: (&delta2).into(),
        a_from_delta2: (&a_from_delta2).into(),
        validity_p: (&validity).into(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BabaiConstant {
    /// ln 3 / ln(1 + 1/3024).
    pub value: Enclosure,
    /// ln 3 / ln(1 + 1/1512).
    pub sharp_value: Enclosure,
    pub stated: u64,
    pub holds: bool,
}

pub fn babai_constant() -> Result<BabaiConstant> {
    let ln3 = int(3).ln()?;
    let v = ln3.div(&rat(HELFGOTT_DELTA_DEN + 1, HELFGOTT_DELTA_DEN).ln()?)?;
    let sv = ln3.div(&rat(SHARP_DELTA_DEN + 1, SHARP_DELTA_DEN).ln()?)?;
    Ok(BabaiConstant {
        holds: v.le(&int(BABAI_C)),
        value: (&v).into(),
        sharp_value: (&sv).into(),
        stated: BABAI_C,
    })
}

/// w = 4 Σ_{j=1}^{⌊C⌋} |S|^{j−1}: expansion transfers as h ≥ h₁/w when every
/// generator of the second set has word length ≤ C in the first.
pub fn transfer_expansion(size: u64, c: &BigRational) -> Result<BigUint> {
    if *c < BigRational::one() || c.is_negative() {
        return Err(Error::Domain(format!("word-length bound C = {c} must be >= 1")));
    }
    let n = c
        .floor()
        .to_integer()
        .to_u32()
        .ok_or_else(|| Error::Domain("C too large".into()))?;
    let s = BigUint::from(size);
    let sum: BigUint = (0..n).map(|j| s.pow(j)).sum();
    Ok(sum * 4u32)
}

/// The certified bound chain for S.
pub fn gap_bound(s: &GenSetZ) -> Result<BoundReport> {
    let tau_inv = compute_tau_inv(s)?;
    let tau = tau_inv.recip()?;
    let gamma = compute_gamma(s)?;
    let delta = rat(1, HELFGOTT_DELTA_DEN);
    let d = rat(1, D_DEN);
    let epsilon = d.div_int(2)?;
    let c = rat(1, WALK_C_DEN);
    let delta1 = flattening_delta1_interval(&delta, &gamma.eff, &epsilon)?;
    let j = j_bounds(&gamma.eff)?;
    // λ₁ ≥ d / (2^{j+4} c)
    let gap_log2 = d.div(&c)?.log2()?.sub(&int(j.used + 4));
    let stated_gap = Interval::from_int(BigInt::one() << GAP_EXPONENT_LOG2 as usize)
        .div(&gamma.raw)?
        .neg();
    let stated_form_implied = gap_log2.ge(&stated_gap);

    let system = ThresholdSystem {
        gamma: gamma.eff.clone(),
        tau_inv: tau_inv.clone(),
        delta: delta.clone(),
        delta0: delta1.mul_int(2),
        delta1: delta1.clone(),
        epsilon: epsilon.clone(),
        d: d.clone(),
        c: c.clone(),
    };
    let mut thresholds = Vec::new();
    for name in THRESHOLD_NAMES {
        thresholds.push(ThresholdTerm {
            name,
            log2_p: system.solve(name)?,
        });
    }
    let binding = thresholds
        .iter()
        .max_by(|a, b| a.log2_p.partial_cmp(&b.log2_p).expect("finite"))
        .expect("non-empty");
    Ok(BoundReport {
        schema: REPORT_SCHEMA,
        generators: s.len(),
        tau: (&tau).into(),
        tau_inv: (&tau_inv).into(),
        gamma_raw: (&gamma.raw).into(),
        gamma_eff: (&gamma.eff).into(),
        gamma_within_lemma_bound: gamma.within_lemma_bound,
        delta: format!("1/{HELFGOTT_DELTA_DEN}"),
        c1_log2: C1_LOG2,
        c2: C2,
        c3_log2: C3_LOG2,
        epsilon: "1/8".into(),
        d: format!("1/{D_DEN}"),
        c: format!("1/{WALK_C_DEN}"),
        delta1: (&delta1).into(),
        j,
        gap_log2: (&gap_log2).into(),
        stated_gap_log2: (&stated_gap).into(),
        stated_form_implied,
        p_threshold_log2: binding.log2_p,
        binding_threshold: binding.name,
        thresholds,
        diameter: diameter_bound(s)?,
        babai: babai_constant()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegrp::Sl2Int;

    fn lub() -> GenSetZ {
        GenSetZ::builtin("lubotzky").unwrap()
    }

    fn mid(e: &Enclosure) -> f64 {
        e.lo.parse::<f64>().unwrap() * 0.5 + e.hi.parse::<f64>().unwrap() * 0.5
    }

    #[test]
    fn tau_examples() {
        let t = compute_tau_inv(&lub()).unwrap();
        assert!(t.ge(&Interval::from_ratio(1194762, 1_000_000).unwrap()));
        assert!(t.le(&Interval::from_ratio(1194764, 1_000_000).unwrap()));
        let s = GenSetZ::from_matrices(vec![Sl2Int::from_i64([2, 1, 1, 1]).unwrap()], true).unwrap();
        assert!((compute_tau_inv(&s).unwrap().mid_f64() - 0.962424).abs() < 1e-6);
        let rot = GenSetZ::from_matrices(vec![Sl2Int::from_i64([0, 1, -1, 0]).unwrap()], true).unwrap();
        assert_eq!(compute_tau_inv(&rot).unwrap_err(), Error::TauUndefined);
    }

    #[test]
    fn gamma_examples() {
        let g = compute_gamma(&lub()).unwrap();
        assert!(g.raw.ge(&Interval::from_ratio(70053, 100_000).unwrap()));
        assert!(g.raw.le(&Interval::from_ratio(70056, 100_000).unwrap()));
        assert!((g.eff.mid_f64() - 0.0013683).abs() < 1e-7);
        assert!(g.within_lemma_bound);
        // Smallest possible max norm √2 with |S| = 4.
        let edge = gamma_from(4, &ln2().div_int(2).unwrap()).unwrap();
        assert!((edge.raw.mid_f64() - 2.41504).abs() < 1e-4);
        assert!(edge.within_lemma_bound);
    }

    #[test]
    fn delta1_examples() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert!(flattening_delta1(&r(1, 1), &r(999_999, 1_000_000), &r(1000, 1)).unwrap() < r(1, 3750));
        // γ → 1: the δγ branch tends to 1/(2·1875) = 1/3750.
        let near = flattening_delta1(&r(1, 1), &r(999_999_999, 1_000_000_000), &r(1000, 1)).unwrap();
        assert!((near.to_f64().unwrap() - 1.0 / 3750.0).abs() < 1e-12);
        assert!(flattening_delta1(&r(0, 1), &r(1, 2), &r(1, 2)).is_err());
        let g = compute_gamma(&lub()).unwrap();
        let d1 = flattening_delta1_interval(&rat(1, 3024), &g.eff, &rat(1, 8)).unwrap();
        assert!((d1.mid_f64() - 1.2065e-10).abs() < 1e-13);
    }

    #[test]
    fn lubotzky_report() {
        let r = gap_bound(&lub()).unwrap();
        assert!(r.stated_form_implied);
        // 2³⁵/γ_raw ≈ 4.905e10 ≤ 2³⁶.
        let stated = -mid(&r.stated_gap_log2);
        assert!((stated - 4.905e10).abs() < 1e8);
        assert!(stated <= 2f64.powi(36));
        assert!(mid(&r.gap_log2) < 0.0);
        assert!(mid(&r.j.chain) < mid(&r.j.stated));
        assert_eq!(r.binding_threshold, "flattening_constant");
        assert!(r.p_threshold_log2 <= 2f64.powi(46));
        let radius = r.thresholds.iter().find(|t| t.name == "decay_radius").unwrap();
        assert!((radius.log2_p - 331.9).abs() < 0.2, "{}", radius.log2_p);
    }

    #[test]
    fn diameter_constants() {
        let d = diameter_bound(&lub()).unwrap();
        assert!(mid(&d.a) > 3504.7 && mid(&d.a) < 3504.8);
        assert!(mid(&d.coeff_log2) <= 5572.0);
        assert!((mid(&d.delta2) - 0.11494).abs() < 1e-5);
        assert!((mid(&d.validity_p) - 10.91).abs() < 0.01);
    }

    #[test]
    fn babai_value() {
        let b = babai_constant().unwrap();
        assert!(b.holds);
        assert!(mid(&b.value) > 3322.6 && mid(&b.value) < 3322.8);
        assert!((mid(&b.sharp_value) - 1661.6).abs() < 0.1);
    }

    #[test]
    fn transfer_examples() {
        let one = BigRational::one();
        assert_eq!(transfer_expansion(4, &one).unwrap(), BigUint::from(4u32));
        assert_eq!(transfer_expansion(4, &BigRational::from_integer(3.into())).unwrap(), BigUint::from(84u32));
        assert_eq!(transfer_expansion(6, &BigRational::from_integer(2.into())).unwrap(), BigUint::from(28u32));
        assert!(transfer_expansion(4, &BigRational::new(1.into(), 2.into())).is_err());
    }
}
