use rand::seq::SliceRandom;

use super::{validate_parts, verify_transversal, Transversal};
use crate::bitset::{self, BitSet};
use crate::error::Result;
use crate::graph::Graph;
use crate::rng;

/// Fraction of a part that may stay undominated (`1/50`).
pub const DEFAULT_DOMINATION_FRACTION: f64 = 1.0 / 50.0;

/// Greedy transversal with an almost-domination removal phase.
///
/// For each part in turn, disjoint partial independent transversals that
/// almost dominate that part (all but `domination_fraction·|part|` of its
/// vertices have a neighbor in them) are grown and deleted until none can be
/// found. The survivors are then scanned part by part, always taking the
/// lowest-index vertex with no neighbor among the earlier picks. The seed only
/// breaks ties between equally good candidates during growth.
pub fn greedy_transversal(
    g: &Graph,
    parts: &[Vec<usize>],
    domination_fraction: f64,
    seed: u64,
) -> Result<Option<Transversal>> {
    validate_parts(g, parts)?;
    let mut rng = rng::stream(seed, rng::streams::PIPELINE);
    let mut part_of = vec![usize::MAX; g.n()];
    let mut alive = BitSet::new(g.n());
    for (i, part) in parts.iter().enumerate() {
        for &v in part {
            part_of[v] = i;
            alive.insert(v);
        }
    }
    let mut order: Vec<usize> = parts.iter().flatten().copied().collect();
    order.sort_unstable();
    order.shuffle(&mut rng);

    for target in parts {
        let allowance = (domination_fraction * target.len() as f64).floor() as usize;
        if allowance >= target.len() {
            continue;
        }
        let target_mask = g.mask(target);
        while let Some(found) = grow_dominating(g, &part_of, &alive, &order, &target_mask, allowance) {
            for v in found {
                alive.remove(v);
            }
        }
    }

    let mut blocked = BitSet::new(g.n());
    let mut picks = Vec::with_capacity(parts.len());
    for part in parts {
        let pick = part
            .iter()
            .copied()
            .filter(|&v| alive.contains(v) && !blocked.contains(v))
            .min();
        match pick {
            Some(v) => {
                blocked.union_with(g.row(v));
                picks.push(v);
            }
            None => return Ok(None),
        }
    }
    let t = Transversal::from_vertices(&picks);
    assert!(
        verify_transversal(g, parts, &t),
        "greedy produced an invalid transversal"
    );
    Ok(Some(t))
}

/// Grows a partial independent transversal among `alive` vertices, each step
/// taking the candidate that dominates the most still-undominated target
/// vertices, until at most `allowance` target vertices remain undominated.
pub(crate) fn grow_dominating(
    g: &Graph,
    part_of: &[usize],
    alive: &BitSet,
    order: &[usize],
    target_mask: &[u64],
    allowance: usize,
) -> Option<Vec<usize>> {
    let mut undominated = target_mask.to_vec();
    let mut remaining = bitset::and_count(&undominated, target_mask);
    let mut blocked = BitSet::new(g.n());
    let mut used_parts: Vec<usize> = Vec::new();
    let mut members: Vec<usize> = Vec::new();
    while remaining > allowance {
        let mut best: Option<(usize, usize)> = None;
        for &v in order {
            if !alive.contains(v) || blocked.contains(v) || used_parts.contains(&part_of[v]) {
                continue;
            }
            let gain = bitset::and_count(g.row(v), &undominated);
            if gain > 0 && best.is_none_or(|(b, _)| gain > b) {
                best = Some((gain, v));
            }
        }
        let (gain, v) = best?;
        members.push(v);
        used_parts.push(part_of[v]);
        blocked.union_with(g.row(v));
        blocked.insert(v);
        for (u, r) in undominated.iter_mut().zip(g.row(v)) {
            *u &= !r;
        }
        remaining -= gain;
    }
    Some(members)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_cross_edges_picks_lowest_indices() {
        let mut g = Graph::empty(6);
        g.add_edge(0, 1).unwrap();
        let parts = vec![vec![2, 0, 1], vec![5, 3, 4]];
        let t = greedy_transversal(&g, &parts, DEFAULT_DOMINATION_FRACTION, 1)
            .unwrap()
            .unwrap();
        assert_eq!(t.vertices(), vec![0, 3]);
    }

    #[test]
    fn biclique_sides_have_no_transversal() {
        let g = Graph::complete_bipartite(2, 2);
        assert_eq!(
            greedy_transversal(&g, &[vec![0, 1], vec![2, 3]], DEFAULT_DOMINATION_FRACTION, 0).unwrap(),
            None
        );
    }

    #[test]
    fn removal_phase_deletes_dominating_sets() {
        // Vertex 0 (part 0) dominates all of part 1; it is removed and the
        // greedy pass then starts from vertex 1.
        let mut g = Graph::empty(6);
        for v in 3..6 {
            g.add_edge(0, v).unwrap();
        }
        let parts = vec![vec![0, 1, 2], vec![3, 4, 5]];
        let t = greedy_transversal(&g, &parts, DEFAULT_DOMINATION_FRACTION, 0)
            .unwrap()
            .unwrap();
        assert_eq!(t.vertices(), vec![1, 3]);
    }
}
