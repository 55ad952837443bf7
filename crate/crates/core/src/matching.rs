//! Bipartite matching with Hall-violator extraction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bipartite graph given by the right-neighbors of each left vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteGraph {
    left_size: usize,
    right_size: usize,
    adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(right_size: usize, adj: Vec<Vec<usize>>) -> Result<Self> {
        for (l, row) in adj.iter().enumerate() {
            if let Some(&r) = row.iter().find(|&&r| r >= right_size) {
                return Err(Error::Domain(format!(
                    "left vertex {l} joined to right {r}, but right side has {right_size} vertices"
                )));
            }
        }
        let mut adj = adj;
        for row in &mut adj {
            row.sort_unstable();
            row.dedup();
        }
        Ok(Self {
            left_size: adj.len(),
            right_size,
            adj,
        })
    }

    pub fn left_size(&self) -> usize {
        self.left_size
    }

    pub fn right_size(&self) -> usize {
        self.right_size
    }

    pub fn neighbors(&self, left: usize) -> &[usize] {
        &self.adj[left]
    }

    /// Right vertices adjacent to at least one vertex of `set`.
    pub fn neighborhood(&self, set: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.right_size];
        for &l in set {
            for &r in &self.adj[l] {
                seen[r] = true;
            }
        }
        (0..self.right_size).filter(|&r| seen[r]).collect()
    }

    /// Whether `set` breaks Hall's condition, i.e. `|N(set)| < |set|`.
    pub fn is_hall_violator(&self, set: &[usize]) -> bool {
        self.neighborhood(set).len() < set.len()
    }
}

/// Outcome of asking for a left-perfect matching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatchingResult {
    /// `matching[l]` is the right partner of left vertex `l`.
    Perfect(Vec<usize>),
    /// Left vertices whose joint neighborhood is smaller than the set.
    Violator(Vec<usize>),
}

struct Matcher<'a> {
    h: &'a BipartiteGraph,
    left_mate: Vec<Option<usize>>,
    right_mate: Vec<Option<usize>>,
    visited: Vec<u32>,
    stamp: u32,
}

impl<'a> Matcher<'a> {
    fn new(h: &'a BipartiteGraph) -> Self {
        Self {
            h,
            left_mate: vec![None; h.left_size],
            right_mate: vec![None; h.right_size],
            visited: vec![0; h.right_size],
            stamp: 0,
        }
    }

    /// Kuhn's augmenting-path search from `root`, iterative, neighbors in ascending order.
    fn augment(&mut self, root: usize) -> bool {
        self.stamp += 1;
        // Stack of (left vertex, next neighbor position); `via[depth]` is the right
        // vertex used to reach the frame at that depth.
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        let mut via: Vec<usize> = Vec::new();
        while let Some(&mut (l, ref mut pos)) = stack.last_mut() {
            let row = &self.h.adj[l];
            if *pos == row.len() {
                stack.pop();
                via.pop();
                continue;
            }
            let r = row[*pos];
            *pos += 1;
            if self.visited[r] == self.stamp {
                continue;
            }
            self.visited[r] = self.stamp;
            match self.right_mate[r] {
                None => {
                    via.push(r);
                    for (&(left, _), &right) in stack.iter().zip(&via) {
                        self.left_mate[left] = Some(right);
                        self.right_mate[right] = Some(left);
                    }
                    return true;
                }
                Some(next) => {
                    via.push(r);
                    stack.push((next, 0));
                }
            }
        }
        false
    }

    fn run(mut self) -> Self {
        for l in 0..self.h.left_size {
            self.augment(l);
        }
        self
    }
}

/// A maximum-cardinality matching as `(left, right)` pairs, sorted by left vertex.
pub fn max_matching(h: &BipartiteGraph) -> Vec<(usize, usize)> {
    let m = Matcher::new(h).run();
    m.left_mate
        .iter()
        .enumerate()
        .filter_map(|(l, r)| r.map(|r| (l, r)))
        .collect()
}

/// Perfect matching of the left side, or a Hall violator.
///
/// The violator is the set of left vertices reachable by alternating paths
/// from the unmatched left vertices of a maximum matching: every right vertex
/// reached is matched back into the set, so the set outnumbers its neighborhood.
pub fn perfect_matching_or_violator(h: &BipartiteGraph) -> Result<MatchingResult> {
    if h.left_size > h.right_size {
        return Err(Error::Domain(format!(
            "left side ({}) larger than right side ({}); no left-perfect matching",
            h.left_size, h.right_size
        )));
    }
    let m = Matcher::new(h).run();
    if m.left_mate.iter().all(Option::is_some) {
        return Ok(MatchingResult::Perfect(
            m.left_mate.into_iter().map(|r| r.expect("perfect")).collect(),
        ));
    }
    let mut in_set = vec![false; h.left_size];
    let mut seen_right = vec![false; h.right_size];
    let mut queue: Vec<usize> = (0..h.left_size).filter(|&l| m.left_mate[l].is_none()).collect();
    for &l in &queue {
        in_set[l] = true;
    }
    while let Some(l) = queue.pop() {
        for &r in &h.adj[l] {
            if std::mem::replace(&mut seen_right[r], true) {
                continue;
            }
            let mate = m.right_mate[r].expect("maximum matching leaves no augmenting path");
            if !std::mem::replace(&mut in_set[mate], true) {
                queue.push(mate);
            }
        }
    }
    let violator: Vec<usize> = (0..h.left_size).filter(|&l| in_set[l]).collect();
    debug_assert!(h.is_hall_violator(&violator));
    Ok(MatchingResult::Violator(violator))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_three_by_three() {
        let h = BipartiteGraph::new(3, vec![vec![0, 1, 2]; 3]).unwrap();
        assert_eq!(max_matching(&h).len(), 3);
    }

    #[test]
    fn two_left_one_right() {
        let h = BipartiteGraph::new(1, vec![vec![0], vec![0]]).unwrap();
        assert_eq!(max_matching(&h).len(), 1);
        let h2 = BipartiteGraph::new(2, vec![vec![0], vec![0]]).unwrap();
        match perfect_matching_or_violator(&h2).unwrap() {
            MatchingResult::Violator(s) => {
                assert_eq!(s, vec![0, 1]);
                assert_eq!(h2.neighborhood(&s).len(), 1);
            }
            other => panic!("expected violator, got {other:?}"),
        }
    }

    #[test]
    fn identity_is_perfect() {
        let h = BipartiteGraph::new(4, (0..4).map(|i| vec![i]).collect()).unwrap();
        assert_eq!(
            perfect_matching_or_violator(&h).unwrap(),
            MatchingResult::Perfect(vec![0, 1, 2, 3])
        );
    }

    #[test]
    fn augmenting_paths_reroute_earlier_choices() {
        // Greedy would give 0->0 and strand 1; augmenting moves 0 to 1.
        let h = BipartiteGraph::new(2, vec![vec![0, 1], vec![0]]).unwrap();
        assert_eq!(
            perfect_matching_or_violator(&h).unwrap(),
            MatchingResult::Perfect(vec![1, 0])
        );
    }

    #[test]
    fn errors() {
        assert!(BipartiteGraph::new(1, vec![vec![1]]).is_err());
        let h = BipartiteGraph::new(1, vec![vec![0], vec![0]]).unwrap();
        assert!(matches!(perfect_matching_or_violator(&h), Err(Error::Domain(_))));
    }

    #[test]
    fn empty_left_is_trivially_perfect() {
        let h = BipartiteGraph::new(3, vec![]).unwrap();
        assert_eq!(
            perfect_matching_or_violator(&h).unwrap(),
            MatchingResult::Perfect(vec![])
        );
    }
}
