//! Sampling harnesses behind `sl2lab verify`: each suite draws instances from
//! a seeded RNG, runs the exact checks and reports one JSON record per
//! instance (or per scan) through a caller-supplied sink.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::freegrp::words::DEFAULT_BALL_BUDGET;
use crate::freegrp::GenSetZ;
use crate::groups::sl2::{Sl2Group, Sl2ModP};
use crate::groups::structure::{centralizer_torus, classify, is_pm_two, trace_fiber};
use crate::growth::pink::{pink_exhaustive, pink_fiber_in, PinkScanSummary};
use crate::growth::{
    dichotomy_check, escape_check, escape_sharpness_search, helfgott_check_with, nonconcentration_check,
    orbit_stabilizer_check, sample_generating, subkey_check, GrowthCase,
};
use crate::setcalc::approx::{approx_from_tripling, energy_to_approx, th46_construct};
use crate::setcalc::energy::energy;
use crate::setcalc::group::{CyclicGroup, DihedralGroup, FiniteGroup, UnitGroup};
use crate::setcalc::products::{generated_subgroup, generates, product};
use crate::setcalc::ruzsa::{
    diagram_rules_check, intersection_lemma_check, ruzsa_cover, ruzsa_lemma_check, small_p_check, CoverSide,
};
use crate::setcalc::subset::GroupSubset;
use crate::walks::{adhoc_ball_count, dickson_classify, flattening_identities_check, random_subgroups, walk, DicksonCase};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Growth,
    Escape,
    Pink,
    Nonconc,
    Appendix,
    Ruzsa,
    Flattening,
    Dickson,
    Adhoc,
}

pub const SUITES: [Suite; 9] = [
    Suite::Growth,
    Suite::Escape,
    Suite::Pink,
    Suite::Nonconc,
    Suite::Appendix,
    Suite::Ruzsa,
    Suite::Flattening,
    Suite::Dickson,
    Suite::Adhoc,
];

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Growth => "growth",
            Suite::Escape => "escape",
            Suite::Pink => "pink",
            Suite::Nonconc => "nonconc",
            Suite::Appendix => "appendix",
            Suite::Ruzsa => "ruzsa",
            Suite::Flattening => "flattening",
            Suite::Dickson => "dickson",
            Suite::Adhoc => "adhoc",
        }
    }

    /// Primes used when none are given.
    pub fn default_primes(self) -> Vec<u32> {
        match self {
            Suite::Pink => vec![5, 7, 11],
            Suite::Escape => vec![5, 7, 11, 13],
            Suite::Flattening => vec![5, 7],
            Suite::Dickson => vec![5, 7, 11, 13, 17, 19, 23, 29, 31],
            Suite::Adhoc => vec![5, 7, 11, 13],
            _ => vec![7, 11, 13],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SUITES
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub primes: Vec<u32>,
    pub samples: usize,
    pub seed: u64,
    /// Pink: scan every triple instead of sampling.
    pub exhaustive: bool,
    /// Escape: run the generating-set search for p < 7.
    pub search_sharpness: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub seed: u64,
    pub instances: u64,
    pub violations: u64,
    /// Searches that ended without a verdict (budget, BGS search miss).
    pub inconclusive: u64,
    /// Draws discarded because they failed a hypothesis (e.g. non-generating).
    pub discarded: u64,
}

struct Run<'a> {
    summary: SuiteSummary,
    emit: &'a mut dyn FnMut(Value),
}

impl Run<'_> {
    fn record<T: Serialize>(&mut self, check: &str, group: &str, holds: Option<bool>, report: &T) -> Result<()> {
        self.summary.instances += 1;
        match holds {
            Some(false) => self.summary.violations += 1,
            None => self.summary.inconclusive += 1,
            Some(true) => {}
        }
        let report = serde_json::to_value(report).map_err(|e| Error::Domain(e.to_string()))?;
        (self.emit)(json!({
            "suite": self.summary.suite,
            "check": check,
            "group": group,
            "seed": self.summary.seed,
            "verdict": match holds {
                Some(true) => "ok",
                Some(false) => "violation",
                None => "inconclusive",
            },
            "report": report,
        }));
        Ok(())
    }
}

/// Independent stream per (seed, p).
fn stream(seed: u64, p: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(p as u64);
    rng
}

/// Runs one suite; violations are counted, not raised.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig, emit: &mut dyn FnMut(Value)) -> Result<SuiteSummary> {
    let mut run = Run {
        summary: SuiteSummary {
            suite: suite.name().into(),
            seed: cfg.seed,
            ..Default::default()
        },
        emit,
    };
    let primes = if cfg.primes.is_empty() {
        suite.default_primes()
    } else {
        cfg.primes.clone()
    };
    match suite {
        Suite::Appendix => appendix(&mut run, cfg)?,
        Suite::Ruzsa => ruzsa(&mut run, cfg)?,
        _ => {
            for &p in &primes {
                let grp = Sl2Group::new(p as u64)?;
                if grp.p() < 5 {
                    return Err(Error::Precondition(format!("suite {suite} needs p >= 5")));
                }
                let mut rng = stream(cfg.seed, p);
                match suite {
                    Suite::Growth => growth(&mut run, &grp, &mut rng, cfg)?,
                    Suite::Escape => escape(&mut run, &grp, &mut rng, cfg)?,
                    Suite::Pink => pink(&mut run, &grp, &mut rng, cfg)?,
                    Suite::Nonconc => nonconc(&mut run, &grp, &mut rng, cfg)?,
                    Suite::Flattening => flattening(&mut run, &grp, &mut rng, cfg)?,
                    Suite::Dickson => dickson(&mut run, &grp, &mut rng, cfg)?,
                    Suite::Adhoc => adhoc(&mut run, &grp, &mut rng, cfg)?,
                    Suite::Appendix | Suite::Ruzsa => unreachable!(),
                }
            }
        }
    }
    Ok(run.summary)
}

fn sl2_name(grp: &Sl2Group) -> String {
    format!("SL2(F_{})", grp.p())
}

const MAX_PAIRS: usize = 6;
const MAX_TRIES: usize = 1000;

fn generating_sample<R: Rng>(run: &mut Run<'_>, grp: &Sl2Group, rng: &mut R) -> Option<GroupSubset> {
    let out = sample_generating(grp, rng, MAX_PAIRS, MAX_TRIES).map(|(h, _)| h);
    if out.is_none() {
        run.summary.discarded += 1;
    }
    out
}

fn random_sreg<R: Rng>(grp: &Sl2Group, rng: &mut R) -> Sl2ModP {
    loop {
        let g = grp.element(rng.gen_range(0..grp.size()));
        if classify(&g).sreg {
            return g;
        }
    }
}

fn growth<R: Rng>(run: &mut Run<'_>, grp: &Sl2Group, rng: &mut R, cfg: &SuiteConfig) -> Result<()> {
    let name = sl2_name(grp);
    for _ in 0..cfg.samples {
        let Some(h) = generating_sample(run, grp, rng) else {
            continue;
        };
        let v = helfgott_check_with(grp, &h, true)?;
        run.record("helfgott", &name, Some(v.case != GrowthCase::Violation), &v)?;
    }
    Ok(())
}

fn escape<R: Rng>(run: &mut Run<'_>, grp: &Sl2Group, rng: &mut R, cfg: &SuiteConfig) -> Result<()> {
    let name = sl2_name(grp);
    if grp.p() < 7 {
        if cfg.search_sharpness {
            let r = escape_sharpness_search(grp, true);
            // An example is the expected outcome, not a violation.
            run.record("escape_sharpness", &name, Some(true), &r)?;
        }
        return Ok(());
    }
    for _ in 0..cfg.samples {
        let Some(h) = generating_sample(run, grp, rng) else {
            continue;
        };
        let r = escape_check(grp, &h)?;
        run.record("escape", &name, Some(r.holds), &r)?;
    }
    Ok(())
}

fn nonconc<R: Rng>(run: &mut Run<'_>, grp: &Sl2Group, rng: &mut R, cfg: &SuiteConfig) -> Result<()> {
    let name = sl2_name(grp);
    let f = *grp.field();
    for _ in 0..cfg.samples {
        let Some(h) = generating_sample(run, grp, rng) else {
            continue;
        };
        let g = random_sreg(grp, rng);
        let r = nonconcentration_check(grp, &h, &g)?;
        run.record("nonconcentration", &name, Some(r.holds), &r)?;

        let x = grp.element(rng.gen_range(0..grp.size()));
        let gamma = rng.gen_range(1..f.p());
        let r = subkey_check(grp, &h, &x, gamma)?;
        run.record("subkey", &name, Some(r.holds), &r)?;

        let t = centralizer_torus(grp, &g)?;
        let r = dichotomy_check(grp, &h, &t)?;
        run.record("dichotomy", &name, Some(r.holds), &r)?;

        let r = orbit_stabilizer_check(grp, &h, &g)?;
        run.record("orbit_stabilizer", &name, Some(r.holds), &r)?;
    }
    Ok(())
}

fn pink<R: Rng>(run: &mut Run<'_>, grp: &Sl2Group, rng: &mut R, cfg: &SuiteConfig) -> Result<()> {
    let name = sl2_name(grp);
    let summary = if cfg.exhaustive {
        pink_exhaustive(grp)?
    } else {
        let p = grp.p();
        let traces: Vec<u32> = (0..p).filter(|&t| !is_pm_two(t, p)).collect();
        let classes: Vec<GroupSubset> = traces.iter().map(|&t| trace_fiber(grp, t)).collect();
        let mut summary = PinkScanSummary {
            p,
            ..Default::default()
        };
        for _ in 0..cfg.samples {
            let class = classes.choose(rng).expect("p >= 5 has rss traces");
            let g = grp.element(*class.members().choose(rng).expect("non-empty class"));
            let y1 = grp.element(rng.gen_range(0..grp.size()));
            let y2 = grp.element(rng.gen_range(0..grp.size()));
            let r = pink_fiber_in(grp, class, &g, &y1, &y2)?;
            summary.record(&r);
            if !r.explained() {
                run.record("pink_fiber", &name, Some(false), &r)?;
                run.summary.instances -= 1;
            }
        }
        summary
    };
    // The scan counts as one instance; its violations are the unexplained fibers.
    run.summary.instances += 1;
    run.summary.violations += summary.unexplained;
    (run.emit)(json!({
        "suite": run.summary.suite,
        "check": if cfg.exhaustive { "pink_exhaustive" } else { "pink_sampled" },
        "group": name,
        "seed": run.summary.seed,
        "verdict": if summary.unexplained == 0 { "ok" } else { "violation" },
        "report": serde_json::to_value(&summary).map_err(|e| Error::Domain(e.to_string()))?,
    }));
    Ok(())
}

/// A symmetric generating set of distinct non-identity elements.
fn walk_generators<R: Rng>(grp: &Sl2Group, rng: &mut R, pick: usize) -> Result<Vec<u32>> {
    let builtin = |name: &str| -> Result<Vec<u32>> {
        let s = GenSetZ::builtin(name).expect("built-in set");
        s.indices_mod(grp)
    };
    match pick % 3 {
        0 => builtin("standard"),
        1 if grp.p() != 3 => builtin("lubotzky"),
        _ => loop {
            let e = grp.identity_index();
            let mut v = Vec::new();
            for _ in 0..rng.gen_range(1..=3) {
                let x = rng.gen_range(0..grp.size());
                if x != e {
                    v.push(x);
                    v.push(grp.inv_idx(x));
                }
            }
            v.sort_unstable();
            v.dedup();
            if !v.is_empty() && generates(grp, &GroupSubset::from_indices(grp.size(), v.iter().copied())) {
                return Ok(v);
            }
        },
    }
}

fn flattening<R: Rng>(run: &mut Run<'_>, grp: &Sl2Group, rng: &mut R, cfg: &SuiteConfig) -> Result<()> {
    let name = sl2_name(grp);
    for i in 0..cfg.samples {
        let g1 = walk_generators(grp, rng, i)?;
        let g2 = walk_generators(grp, rng, i / 3)?;
        let d1 = walk(grp, &g1, rng.gen_range(1..=4))?;
        let d2 = walk(grp, &g2, rng.gen_range(1..=4))?;
        let conserved = d1.total() == d1.denominator && d2.total() == d2.denominator;
        let r = flattening_identities_check(grp, &d1, &d2)?;
        let ok = conserved && r.holds();
        run.record(
            "flattening",
            &name,
            Some(ok),
            &json!({
                "steps": [d1.steps, d2.steps],
                "degrees": [g1.len(), g2.len()],
                "count_conservation": conserved,
                "young": r.young,
                "cauchy_schwarz": r.cauchy_schwarz,
                "step1": r.step1,
                "rp_product": r.rp_product.to_string(),
                "rpp": r.rpp.to_string(),
            }),
        )?;
    }
    Ok(())
}

const DICKSON_QUADRUPLES: usize = 200;

fn dickson<R: Rng>(run: &mut Run<'_>, grp: &Sl2Group, rng: &mut R, cfg: &SuiteConfig) -> Result<()> {
    let name = sl2_name(grp);
    for h in random_subgroups(grp, rng, cfg.samples) {
        let r = dickson_classify(grp, &h, rng, DICKSON_QUADRUPLES)?;
        run.record("dickson", &name, Some(r.case != DicksonCase::Violation), &r)?;
    }
    Ok(())
}

pub const ADHOC_MAX_M: u32 = 8;

fn adhoc<R: Rng>(run: &mut Run<'_>, grp: &Sl2Group, rng: &mut R, cfg: &SuiteConfig) -> Result<()> {
    let name = sl2_name(grp);
    let s = GenSetZ::builtin("lubotzky").expect("built-in set");
    for h in random_subgroups(grp, rng, cfg.samples) {
        for m in 1..=ADHOC_MAX_M {
            match adhoc_ball_count(&s, grp, &h, m, DEFAULT_BALL_BUDGET) {
                Ok(r) => run.record("adhoc", &name, Some(r.holds), &r)?,
                Err(e @ Error::BudgetExceeded { .. }) => run.record(
                    "adhoc",
                    &name,
                    None,
                    &json!({"m": m, "subgroup_order": h.len(), "reason": e.to_string()}),
                )?,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(())
}

/// Finite groups used by the group-agnostic suites.
fn small_groups(max_order: u32) -> Result<Vec<(String, Box<dyn FiniteGroup>)>> {
    let mut out: Vec<(String, Box<dyn FiniteGroup>)> = Vec::new();
    for p in [5u64, 7, 11] {
        let g = Sl2Group::new(p)?;
        if g.size() <= max_order {
            out.push((sl2_name(&g), Box::new(g)));
        }
    }
    for n in [12u32, 360] {
        if 2 * n <= max_order {
            out.push((format!("D_{n}"), Box::new(DihedralGroup::new(n)?)));
        }
    }
    for n in [30u32, 720] {
        if n <= max_order {
            out.push((format!("Z/{n}"), Box::new(CyclicGroup::new(n)?)));
        }
    }
    out.push(("(Z/105)^*".into(), Box::new(UnitGroup::new(105)?)));
    Ok(out)
}

fn random_subset<R: Rng>(g: &dyn FiniteGroup, rng: &mut R, k: usize) -> GroupSubset {
    GroupSubset::from_indices(g.order(), (0..k).map(|_| rng.gen_range(0..g.order())))
}

fn random_symmetric<R: Rng>(g: &dyn FiniteGroup, rng: &mut R, pairs: usize) -> GroupSubset {
    random_subset(g, rng, pairs).symmetric_with_identity(g)
}

/// A ⊂ xK and B ⊂ Ky for a random cyclic or two-generated K: large energy.
fn planted_pair<R: Rng>(g: &dyn FiniteGroup, rng: &mut R) -> (GroupSubset, GroupSubset) {
    let n = g.order();
    let seeds = GroupSubset::from_indices(n, (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(0..n)));
    let mut k = generated_subgroup(g, &seeds);
    if k.len() > 60 {
        k = generated_subgroup(g, &GroupSubset::singleton(n, seeds.members()[0]));
    }
    let keep = |s: GroupSubset, rng: &mut R| {
        let m: Vec<u32> = s.iter().filter(|_| rng.gen_bool(0.75)).collect();
        if m.is_empty() {
            s
        } else {
            GroupSubset::from_indices(n, m)
        }
    };
    let x = rng.gen_range(0..n);
    let y = rng.gen_range(0..n);
    let a = keep(k.left_translate(g, x), rng);
    let b = keep(k.right_translate(g, y), rng);
    (a, b)
}

/// E(A,B) by enumerating pairs of pairs.
pub fn energy_bruteforce(g: &dyn FiniteGroup, a: &GroupSubset, b: &GroupSubset) -> BigUint {
    let pairs: Vec<u32> = a.iter().flat_map(|x| b.iter().map(move |y| g.mul(x, y))).collect();
    let mut count = 0u64;
    for &u in &pairs {
        for &v in &pairs {
            if u == v {
                count += 1;
            }
        }
    }
    BigUint::from(count)
}

/// The least rational α of the form ⌈(|A||B|)^{3/2}⌉/E with e(A,B) ≥ 1/α.
fn energy_alpha(e: &BigUint, a: usize, b: usize) -> BigRational {
    let cube = BigUint::from((a * b) as u64).pow(3);
    let mut root = cube.sqrt();
    if &root * &root < cube {
        root += 1u32;
    }
    BigRational::new(root.into(), e.clone().into())
}

fn appendix(run: &mut Run<'_>, cfg: &SuiteConfig) -> Result<()> {
    let groups = small_groups(2000)?;
    let mut rng = stream(cfg.seed, 0);
    for i in 0..cfg.samples {
        let (name, g) = &groups[i % groups.len()];
        let g: &dyn FiniteGroup = g.as_ref();

        let pairs = rng.gen_range(1..=5);
        let a = random_symmetric(g, &mut rng, pairs);
        let w = approx_from_tripling(g, &a)?;
        let check = w.verify(g);
        run.record("approx_from_tripling", name, Some(check.holds()), &check)?;

        let (a, b) = if i % 2 == 0 {
            planted_pair(g, &mut rng)
        } else {
            let k = rng.gen_range(1..=8);
            (random_subset(g, &mut rng, k), random_subset(g, &mut rng, k))
        };
        // α = |A·B| / min(|A|,|B|) ≥ exp d(A, B⁻¹).
        let ab = product(g, &a, &b).len();
        let alpha = BigRational::new(ab.into(), a.len().min(b.len()).into());
        let t = th46_construct(g, &a, &b, &alpha)?;
        run.record("th46_construct", name, Some(t.holds()), &t.clauses)?;

        let e = energy(g, &a, &b)?;
        let alpha = energy_alpha(&e.energy, a.len(), b.len());
        match energy_to_approx(g, &a, &b, &alpha)? {
            Some(out) => run.record("energy_to_approx", name, Some(out.holds()), &out.clauses)?,
            None => run.record("energy_to_approx", name, None, &json!({"reason": "no BGS pair found"}))?,
        }

        if i % 2 == 0 {
            let (a, b) = (random_subset(g, &mut rng, 12), random_subset(g, &mut rng, 12));
            let fast = energy(g, &a, &b)?.energy;
            let slow = energy_bruteforce(g, &a, &b);
            run.record(
                "energy_oracle",
                name,
                Some(fast == slow),
                &json!({"a": a.len(), "b": b.len(), "convolution": fast.to_string(), "enumeration": slow.to_string()}),
            )?;
        }
    }
    Ok(())
}

fn ruzsa(run: &mut Run<'_>, cfg: &SuiteConfig) -> Result<()> {
    let groups = small_groups(720)?;
    let sl2: Vec<Sl2Group> = [5u64, 7].iter().map(|&p| Sl2Group::new(p)).collect::<Result<_>>()?;
    let mut rng = stream(cfg.seed, 1);
    for i in 0..cfg.samples {
        let (name, g) = &groups[i % groups.len()];
        let g: &dyn FiniteGroup = g.as_ref();

        let pairs = rng.gen_range(1..=4);
        let a = random_symmetric(g, &mut rng, pairs);
        let r = ruzsa_lemma_check(g, &a, 4)?;
        run.record("ruzsa_lemma", name, Some(r.holds()), &r)?;

        let x = rng.gen_range(0..g.order());
        let k = generated_subgroup(g, &GroupSubset::singleton(g.order(), x));
        let r = intersection_lemma_check(g, &a, &k, rng.gen_range(1..=4))?;
        run.record("intersection_lemma", name, Some(r.holds), &r)?;

        let sizes: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=10)).collect();
        let (s1, s2, s3) = (
            random_subset(g, &mut rng, sizes[0]),
            random_subset(g, &mut rng, sizes[1]),
            random_subset(g, &mut rng, sizes[2]),
        );
        let r = diagram_rules_check(g, &s1, &s2, &s3)?;
        run.record("ruzsa_distance_rules", name, Some(r.holds()), &r)?;

        for side in [CoverSide::Right, CoverSide::Left] {
            let c = ruzsa_cover(g, &s1, &s2, side)?;
            run.record(
                "covering",
                name,
                Some(c.holds()),
                &json!({"side": side, "x": c.x.len(), "k": c.k.to_string(), "covers": c.covers, "size_ok": c.size_ok}),
            )?;
        }

        // The small-set bound is specific to SL₂(F_p).
        let grp = &sl2[i % sl2.len()];
        if let Some(h) = generating_sample(run, grp, &mut rng) {
            let r = small_p_check(grp, &h)?;
            run.record("small_set", &sl2_name(grp), Some(r.holds), &r)?;
        }
    }
    Ok(())
}
