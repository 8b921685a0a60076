//! Fibers C ∩ y₁C ∩ y₂C of the map (x₁,x₂,x₃) ↦ (x₁x₂, x₁x₃) on a regular
//! semisimple class, and the classification of the large ones.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::field::{Fp2, QuadExtField};
use crate::groups::sl2::{Sl2Group, Sl2ModP};
use crate::groups::structure::{common_borel, eigenvalue_on, eigenvalues, is_rss, trace_fiber};
use crate::setcalc::subset::GroupSubset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PinkCase {
    /// At most two points.
    Small,
    /// y₁ = ±1, y₂ = ±1 or y₁ = y₂.
    Degenerate,
    /// Fiber and y₁, y₂ share a Borel subgroup over F_{p²}.
    Borel,
    /// Tr g = 0.
    TraceZero,
    /// More than two points and no case applies.
    Unexplained,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberRecord {
    pub g: String,
    pub y1: String,
    pub y2: String,
    pub fiber_size: usize,
    #[serde(skip)]
    pub fiber: GroupSubset,
    pub case: PinkCase,
    /// Common eigenvector over F_{p²} for the Borel case.
    pub borel: Option<[String; 2]>,
    /// Whether y₁, y₂ ∈ U ∪ t²U for some t ∈ B ∩ C (Borel case only).
    pub unipotent_condition: Option<bool>,
}

impl FiberRecord {
    pub fn explained(&self) -> bool {
        self.case != PinkCase::Unexplained
    }
}

/// {x : Tr x = t, Tr(y₁⁻¹x) = t, Tr(y₂⁻¹x) = t} inside a precomputed trace fiber.
pub fn fiber_within(grp: &Sl2Group, class: &GroupSubset, t: u32, y1: &Sl2ModP, y2: &Sl2ModP) -> GroupSubset {
    let (i1, i2) = (y1.inverse(), y2.inverse());
    let tr_prod = |a: &Sl2ModP, x: &Sl2ModP| {
        let f = grp.field();
        f.add(
            f.add(f.mul(a.a, x.a), f.mul(a.b, x.c)),
            f.add(f.mul(a.c, x.b), f.mul(a.d, x.d)),
        )
    };
    GroupSubset::from_indices(
        grp.size(),
        class.iter().filter(|&xi| {
            let x = grp.element(xi);
            tr_prod(&i1, &x) == t && tr_prod(&i2, &x) == t
        }),
    )
}

pub fn pink_fiber(grp: &Sl2Group, g: &Sl2ModP, y1: &Sl2ModP, y2: &Sl2ModP) -> Result<FiberRecord> {
    let class = trace_fiber(grp, g.trace());
    pink_fiber_in(grp, &class, g, y1, y2)
}

/// As [`pink_fiber`] with the trace fiber of g supplied by the caller.
pub fn pink_fiber_in(
    grp: &Sl2Group,
    class: &GroupSubset,
    g: &Sl2ModP,
    y1: &Sl2ModP,
    y2: &Sl2ModP,
) -> Result<FiberRecord> {
    if !is_rss(g) {
        return Err(Error::NotRegularSemisimple);
    }
    let t = g.trace();
    let fiber = fiber_within(grp, class, t, y1, y2);
    let mut borel = None;
    let mut unipotent_condition = None;
    let case = if fiber.len() <= 2 {
        PinkCase::Small
    } else if y1.is_central() || y2.is_central() || y1 == y2 {
        PinkCase::Degenerate
    } else if t == 0 {
        PinkCase::TraceZero
    } else {
        let mut pts: Vec<Sl2ModP> = fiber.iter().map(|x| grp.element(x)).collect();
        pts.push(*y1);
        pts.push(*y2);
        match common_borel(&pts) {
            Some(v) => {
                let k = QuadExtField::new(*grp.field())?;
                unipotent_condition = Some(unipotent_condition_holds(&k, g, y1, y2, v));
                borel = Some([v[0].to_string(), v[1].to_string()]);
                PinkCase::Borel
            }
            None => PinkCase::Unexplained,
        }
    };
    Ok(FiberRecord {
        g: g.to_string(),
        y1: y1.to_string(),
        y2: y2.to_string(),
        fiber_size: fiber.len(),
        fiber,
        case,
        borel,
        unipotent_condition,
    })
}

// In the Borel fixing the line v, U is the set of elements acting by 1 on v and
// t²U the set acting by λ(t)², where λ(t) is an eigenvalue of g.
fn unipotent_condition_holds(k: &QuadExtField, g: &Sl2ModP, y1: &Sl2ModP, y2: &Sl2ModP, v: [Fp2; 2]) -> bool {
    let one = Fp2::from_base(1);
    let l1 = eigenvalue_on(k, y1, v);
    let l2 = eigenvalue_on(k, y2, v);
    eigenvalues(k, g).into_iter().any(|mu| {
        let mu2 = k.mul(mu, mu);
        [l1, l2].iter().all(|&l| l == one || l == mu2)
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PinkScanSummary {
    pub p: u32,
    pub triples: u64,
    pub large: u64,
    pub degenerate: u64,
    pub borel: u64,
    pub borel_unipotent_condition: u64,
    pub trace_zero: u64,
    pub unexplained: u64,
}

impl PinkScanSummary {
    pub fn record(&mut self, r: &FiberRecord) {
        self.triples += 1;
        if r.fiber_size > 2 {
            self.large += 1;
        }
        match r.case {
            PinkCase::Small => {}
            PinkCase::Degenerate => self.degenerate += 1,
            PinkCase::TraceZero => self.trace_zero += 1,
            PinkCase::Borel => {
                self.borel += 1;
                if r.unipotent_condition == Some(true) {
                    self.borel_unipotent_condition += 1;
                }
            }
            PinkCase::Unexplained => self.unexplained += 1,
        }
    }
}

/// Every pair (y₁, y₂) ∈ G², for one regular semisimple g per trace value.
/// Conjugating (g, y₁, y₂) simultaneously conjugates the fiber, so one class
/// representative per trace loses nothing.
pub fn pink_exhaustive(grp: &Sl2Group) -> Result<PinkScanSummary> {
    let mut summary = PinkScanSummary {
        p: grp.p(),
        ..Default::default()
    };
    let f = grp.field();
    for t in 0..f.p() {
        if crate::groups::structure::is_pm_two(t, f.p()) {
            continue;
        }
        let class = trace_fiber(grp, t);
        let g = grp.element(class.members()[0]);
        for a in 0..grp.size() {
            let y1 = grp.element(a);
            for b in 0..grp.size() {
                let y2 = grp.element(b);
                summary.record(&pink_fiber_in(grp, &class, &g, &y1, &y2)?);
            }
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_pair_gives_whole_class() {
        let grp = Sl2Group::new(7).unwrap();
        let g = grp.from_i64([2, 0, 0, 4]).unwrap();
        let one = Sl2ModP::identity(7);
        let r = pink_fiber(&grp, &g, &one, &one).unwrap();
        assert_eq!(r.fiber_size, trace_fiber(&grp, 6).len());
        assert_eq!(r.case, PinkCase::Degenerate);
    }

    #[test]
    fn unipotent_pair_lies_in_borel() {
        let grp = Sl2Group::new(7).unwrap();
        let g = grp.from_i64([2, 0, 0, 4]).unwrap();
        let u = grp.from_i64([1, 1, 0, 1]).unwrap();
        let r = pink_fiber(&grp, &g, &u, &u.mul_same(&u)).unwrap();
        assert_eq!(r.fiber_size, 14);
        assert_eq!(r.case, PinkCase::Borel);
        assert_eq!(r.borel.as_ref().unwrap()[1], "0");
        assert_eq!(r.unipotent_condition, Some(true));
        assert!(grp.elements().filter(|x| r.fiber.contains(grp.index_of(x))).all(|x| x.c == 0));
    }

    #[test]
    fn exhaustive_p5_has_no_unexplained_fibers() {
        let grp = Sl2Group::new(5).unwrap();
        let s = pink_exhaustive(&grp).unwrap();
        assert_eq!(s.unexplained, 0);
        assert!(s.large > 0);
    }
}
