//! Cayley graphs Cay(SL₂(F_p), S) with x ~ xs, and their BFS invariants.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::freegrp::GenSetZ;
use crate::groups::sl2::Sl2Group;
use crate::setcalc::group::FiniteGroup;
use crate::setcalc::products::word_distances;
use crate::setcalc::subset::GroupSubset;

#[derive(Clone, Debug)]
pub struct CayleyGraph {
    grp: Sl2Group,
    gens: Vec<u32>,
}

impl CayleyGraph {
    /// `gens` must be distinct, symmetric and free of the identity.
    pub fn new(grp: Sl2Group, gens: Vec<u32>) -> Result<Self> {
        let set = GroupSubset::try_from_indices(grp.size(), gens.iter().copied())?;
        if set.len() != gens.len() {
            return Err(Error::InvalidGenerators("repeated generator".into()));
        }
        if set.contains(grp.identity_index()) {
            return Err(Error::InvalidGenerators("identity in generating set".into()));
        }
        if gens.is_empty() {
            return Err(Error::InvalidGenerators("empty generating set".into()));
        }
        if !set.is_symmetric(&grp) {
            return Err(Error::NotSymmetric("Cayley graph generators".into()));
        }
        Ok(Self { grp, gens })
    }

    /// Reduces S mod p; collisions and trivial reductions are errors.
    pub fn build(p: u32, s: &GenSetZ) -> Result<Self> {
        let grp = Sl2Group::new(p as u64)?;
        let gens = s.indices_mod(&grp)?;
        Self::new(grp, gens)
    }

    pub fn group(&self) -> &Sl2Group {
        &self.grp
    }

    pub fn p(&self) -> u32 {
        self.grp.p()
    }

    pub fn order(&self) -> u32 {
        self.grp.size()
    }

    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    pub fn degree(&self) -> usize {
        self.gens.len()
    }

    fn gen_set(&self) -> GroupSubset {
        GroupSubset::from_indices(self.order(), self.gens.iter().copied())
    }

    /// Word length of every vertex from 1.
    pub fn distances(&self) -> Vec<u32> {
        word_distances(&self.grp, &self.gen_set())
    }

    pub fn is_connected(&self) -> bool {
        self.distances().iter().all(|&d| d != u32::MAX)
    }

    pub fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Eccentricity of 1, which is the diameter by vertex-transitivity.
    pub fn diameter(&self) -> Result<u32> {
        let d = self.distances();
        if d.contains(&u32::MAX) {
            return Err(Error::Disconnected);
        }
        Ok(d.into_iter().max().unwrap_or(0))
    }

    /// Length of the shortest cycle, on the simple graph. BFS from 1 suffices
    /// by vertex-transitivity: the shortest cycle through 1 is the least
    /// d(u) + d(v) + 1 over non-tree edges uv. `None` for a forest.
    pub fn girth(&self) -> Option<u32> {
        let n = self.order() as usize;
        let mut dist = vec![u32::MAX; n];
        let mut parent = vec![u32::MAX; n];
        let root = self.grp.identity_index();
        dist[root as usize] = 0;
        let mut frontier = vec![root];
        let mut best: Option<u32> = None;
        let mut level = 0u32;
        while !frontier.is_empty() {
            if let Some(b) = best {
                if 2 * level >= b {
                    break;
                }
            }
            let mut next = Vec::new();
            for &u in &frontier {
                for &s in &self.gens {
                    let v = self.grp.mul(u, s);
                    if v == parent[u as usize] {
                        continue;
                    }
                    if dist[v as usize] == u32::MAX {
                        dist[v as usize] = level + 1;
                        parent[v as usize] = u;
                        next.push(v);
                    } else if parent[v as usize] != u {
                        let len = level + dist[v as usize] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
            frontier = next;
            level += 1;
        }
        best
    }

    /// One line `u v` per directed edge u → us, preceded by a header line
    /// `# p <p> vertices <|G|> degree <|S|>`.
    pub fn edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# p {} vertices {} degree {}", self.p(), self.order(), self.degree());
        for u in 0..self.order() {
            for &s in &self.gens {
                let _ = writeln!(out, "{u} {}", self.grp.mul(u, s));
            }
        }
        out
    }
}
