//! Exact, exponential-time oracles for tiny graphs.
//!
//! A partition is strongly `k`-colorable iff the graph plus a `k`-clique on
//! every part is `k`-colorable. The search colors part by part; the first
//! part's colors are fixed to `0..k` in order since any solution can be
//! relabeled that way. The strong chromatic number enumerates partitions in
//! canonical form (each new part opens with the lowest unused vertex), so
//! every unordered partition is visited once.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ColoringCertificate;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexPartition};

/// Largest `k·r` accepted by the partition-wise checker.
pub const MAX_PARTITION_VERTICES: usize = 24;
/// Default guard on `n` (before padding) for [`strong_chromatic_number_exact`].
pub const DEFAULT_SIZE_GUARD: usize = 8;

fn check_size(g: &Graph, parts: &VertexPartition) -> Result<()> {
    if parts.vertex_count() != g.n() {
        return Err(Error::Precondition(format!(
            "partition covers {} vertices, graph has {}",
            parts.vertex_count(),
            g.n()
        )));
    }
    if g.n() > MAX_PARTITION_VERTICES {
        return Err(Error::Size(format!(
            "{} vertices exceeds the exact-check guard of {MAX_PARTITION_VERTICES}",
            g.n()
        )));
    }
    Ok(())
}

/// A rainbow proper coloring of the partition, if one exists.
pub fn find_strong_coloring(g: &Graph, parts: &VertexPartition) -> Result<Option<ColoringCertificate>> {
    check_size(g, parts)?;
    let k = parts.k();
    let order: Vec<usize> = parts.parts().iter().flatten().copied().collect();
    let mut colors = vec![usize::MAX; g.n()];
    let Some(first) = parts.parts().first() else {
        return Ok(Some(ColoringCertificate { k, colors }));
    };
    for (c, &v) in first.iter().enumerate() {
        colors[v] = c;
    }
    let solved = assign(g, &order, k, k, 0, &mut colors);
    Ok(solved.then_some(ColoringCertificate { k, colors }))
}

/// `used` is the color mask of the current part so far.
fn assign(g: &Graph, order: &[usize], k: usize, pos: usize, used: u32, colors: &mut [usize]) -> bool {
    if pos == order.len() {
        return true;
    }
    let used = if pos.is_multiple_of(k) { 0 } else { used };
    let v = order[pos];
    let mut forbidden = used;
    for u in g.neighbors(v) {
        if colors[u] != usize::MAX {
            forbidden |= 1 << colors[u];
        }
    }
    for c in 0..k {
        if forbidden >> c & 1 == 0 {
            colors[v] = c;
            if assign(g, order, k, pos + 1, used | 1 << c, colors) {
                return true;
            }
        }
    }
    colors[v] = usize::MAX;
    false
}

pub fn is_strongly_k_colorable_for_partition(g: &Graph, parts: &VertexPartition) -> Result<bool> {
    Ok(find_strong_coloring(g, parts)?.is_some())
}

/// All partitions of `0..n` into parts of size `k`, each listed once.
pub fn canonical_partitions(n: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(remaining: &[usize], k: usize, current: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        let Some((&first, rest)) = remaining.split_first() else {
            out.push(current.clone());
            return;
        };
        let mut pick = Vec::with_capacity(k - 1);
        choose(rest, k - 1, 0, &mut pick, &mut |chosen| {
            let mut part = vec![first];
            part.extend_from_slice(chosen);
            let left: Vec<usize> = rest.iter().copied().filter(|v| !chosen.contains(v)).collect();
            current.push(part);
            go(&left, k, current, out);
            current.pop();
        });
    }
    fn choose(pool: &[usize], need: usize, from: usize, pick: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if pick.len() == need {
            f(pick);
            return;
        }
        for i in from..pool.len() {
            if pool.len() - i < need - pick.len() {
                break;
            }
            pick.push(pool[i]);
            choose(pool, need, i + 1, pick, f);
            pick.pop();
        }
    }
    if k == 0 || !n.is_multiple_of(k) {
        return Vec::new();
    }
    let mut out = Vec::new();
    go(&(0..n).collect::<Vec<_>>(), k, &mut Vec::new(), &mut out);
    out
}

/// Exact chromatic number by backtracking.
pub fn chromatic_number(g: &Graph) -> usize {
    fn colorable(g: &Graph, v: usize, k: usize, colors: &mut [usize], max_used: usize) -> bool {
        if v == g.n() {
            return true;
        }
        // New colors are opened in order, so color max_used+1 is the only fresh choice.
        for c in 0..k.min(max_used + 2) {
            if g.neighbors(v).all(|u| u >= v || colors[u] != c) {
                colors[v] = c;
                if colorable(g, v + 1, k, colors, max_used.max(c)) {
                    return true;
                }
            }
        }
        false
    }
    if g.n() == 0 {
        return 0;
    }
    (1..=g.n())
        .find(|&k| {
            let mut colors = vec![0; g.n()];
            colorable(g, 1, k, &mut colors, 0)
        })
        .expect("n colors always suffice")
}

/// A partition refuting strong `k`-colorability.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub k: usize,
    pub partition: VertexPartition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactResult {
    pub value: usize,
    /// Where the ascending search began: `max(Δ+1, χ)` unless overridden.
    pub start: usize,
    /// One refuting partition for each `k` tried below `value`.
    pub refutations: Vec<Refutation>,
    pub partitions_checked: usize,
}

/// Whether every partition of the `k`-padded graph is strongly colorable;
/// otherwise the first refuting partition in canonical order.
pub fn strongly_k_colorable(g: &Graph, k: usize) -> Result<(Option<VertexPartition>, usize)> {
    let padded = g.pad_isolated(k)?;
    if padded.n() > MAX_PARTITION_VERTICES {
        return Err(Error::Size(format!(
            "padding to {} vertices exceeds the exact-check guard of {MAX_PARTITION_VERTICES}",
            padded.n()
        )));
    }
    let all = canonical_partitions(padded.n(), k);
    let count = all.len();
    let failing = all
        .into_par_iter()
        .map(|parts| VertexPartition::new(k, parts, padded.n()).expect("canonical partitions are valid"))
        .find_first(|p| !is_strongly_k_colorable_for_partition(&padded, p).expect("size checked"));
    Ok((failing, count))
}

/// Strong chromatic number, searching upwards from `max(Δ+1, χ)`.
pub fn strong_chromatic_number_exact(g: &Graph, size_guard: usize) -> Result<ExactResult> {
    if g.n() == 0 {
        return Err(Error::Domain("strong chromatic number of the empty graph".into()));
    }
    let (delta, _) = g.max_degree()?;
    let start = (delta + 1).max(chromatic_number(g));
    strong_chromatic_number_from(g, size_guard, start)
}

/// Same search from an explicit starting `k`; starting at 1 makes no use of the `Δ+1` bound.
pub fn strong_chromatic_number_from(g: &Graph, size_guard: usize, start: usize) -> Result<ExactResult> {
    if g.n() > size_guard {
        return Err(Error::Size(format!("n = {} exceeds size guard {size_guard}", g.n())));
    }
    let mut refutations = Vec::new();
    let mut checked = 0;
    for k in start.max(1).. {
        let (failing, count) = strongly_k_colorable(g, k)?;
        checked += count;
        match failing {
            Some(partition) => refutations.push(Refutation { k, partition }),
            None => {
                return Ok(ExactResult {
                    value: k,
                    start,
                    refutations,
                    partitions_checked: checked,
                })
            }
        }
    }
    unreachable!("k = n always succeeds")
}
