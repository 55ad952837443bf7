//! Independent transversals: one vertex per part, pairwise non-adjacent.
//!
//! Parts are passed as plain vertex lists so that the same routines serve
//! full equal-size partitions and the shrunken residual parts that arise
//! during the constructions. Every routine that returns a transversal has
//! already checked it with [`verify_transversal`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

mod greedy;
mod pinned;
mod resample;
pub mod sparse;

pub(crate) use greedy::grow_dominating;
pub use greedy::{greedy_transversal, DEFAULT_DOMINATION_FRACTION};
pub use pinned::pinned_transversal;
pub use resample::{resampling_transversal, resampling_transversal_with_stats, ResampleRun};
pub use sparse::{sparse_transversal, SparseConfig, SparseOutcome, SparseStats};

/// A (possibly partial) choice of one vertex per part.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transversal {
    choice: BTreeMap<usize, usize>,
}

impl Transversal {
    pub fn from_choice(choice: BTreeMap<usize, usize>) -> Self {
        Self { choice }
    }

    /// Transversal choosing `vertices[i]` in part `i`.
    pub fn from_vertices(vertices: &[usize]) -> Self {
        Self {
            choice: vertices.iter().copied().enumerate().collect(),
        }
    }

    pub fn choice(&self) -> &BTreeMap<usize, usize> {
        &self.choice
    }

    pub fn get(&self, part: usize) -> Option<usize> {
        self.choice.get(&part).copied()
    }

    pub fn insert(&mut self, part: usize, vertex: usize) {
        self.choice.insert(part, vertex);
    }

    pub fn len(&self) -> usize {
        self.choice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choice.is_empty()
    }

    /// Chosen vertices in part order.
    pub fn vertices(&self) -> Vec<usize> {
        self.choice.values().copied().collect()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.choice.values().any(|&u| u == v)
    }
}

/// True iff `t` picks exactly one member of every part and the picks are pairwise non-adjacent.
pub fn verify_transversal(g: &Graph, parts: &[Vec<usize>], t: &Transversal) -> bool {
    if t.len() != parts.len() {
        return false;
    }
    for (i, part) in parts.iter().enumerate() {
        match t.get(i) {
            Some(v) if v < g.n() && part.contains(&v) => {}
            _ => return false,
        }
    }
    g.is_independent(&t.vertices())
}

/// Checks that parts are non-empty as a list, within range, and pairwise disjoint.
pub(crate) fn validate_parts(g: &Graph, parts: &[Vec<usize>]) -> Result<()> {
    if parts.is_empty() {
        return Err(Error::Domain("no parts given".into()));
    }
    let mut seen = vec![false; g.n()];
    for (i, part) in parts.iter().enumerate() {
        for &v in part {
            if v >= g.n() {
                return Err(Error::Domain(format!("part {i}: vertex {v} out of range")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::Domain(format!("vertex {v} belongs to two parts")));
            }
        }
    }
    Ok(())
}

/// Exhaustive search for any independent transversal, for tiny instances.
pub fn exhaustive_transversal(g: &Graph, parts: &[Vec<usize>]) -> Option<Transversal> {
    fn go(g: &Graph, parts: &[Vec<usize>], chosen: &mut Vec<usize>) -> bool {
        let i = chosen.len();
        if i == parts.len() {
            return true;
        }
        for &v in &parts[i] {
            if chosen.iter().all(|&u| !g.has_edge(u, v)) {
                chosen.push(v);
                if go(g, parts, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::with_capacity(parts.len());
    go(g, parts, &mut chosen).then(|| Transversal::from_vertices(&chosen))
}
