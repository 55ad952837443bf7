//! Multi-stage independent transversal for sparse graphs with parts of size
//! at least `(1+ε)Δ`.
//!
//! Outline:
//! 1. classify vertices as locally big (more than `Δ/ln n` neighbors inside
//!    one part) or almost locally big (more than `Δ/(2 ln n)`);
//! 2. on a working copy, turn every set `B_i` of almost-locally-big vertices
//!    of part `i` into a clique, so that a transversal holds at most one
//!    locally big vertex per part;
//! 3. build the shrinking index chain `I_1 ⊃ I_2 ⊃ ... ⊃ I_σ = ∅` of parts
//!    crowded with high-degree vertices;
//! 4. extend `T_σ = ∅` backwards to `T_1` on the parts of `I_1`, each stage
//!    sampling sets `W_i` and resampling until no bad event holds, then
//!    taking a transversal of `W` by resampling;
//! 5. repeat the same on the index chain `J_1 ⊃ ... ⊃ J_τ = ∅` of parts
//!    touched by locally big vertices of `T_1`, over trimmed parts;
//! 6. finish the remaining parts, stripped of locally big vertices and of
//!    neighbors of `T_1 ∪ U_1`, with a resampling transversal.
//!
//! Stages 4 to 6 are randomized and are restarted up to `restart_cap` times.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{greedy_transversal, resampling_transversal, validate_parts, verify_transversal, Transversal};
use crate::bitset;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng;

/// Tunables of [`sparse_transversal`]. Thresholds left as `None` take their
/// default expressions evaluated at the instance's `n` and `Δ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseConfig {
    pub epsilon: f64,
    /// Locally big cutoff; default `Δ / ln n`.
    pub locally_big_threshold: Option<f64>,
    /// Almost locally big cutoff; default `Δ / (2 ln n)`.
    pub almost_locally_big_threshold: Option<f64>,
    /// Sampling probability of `W_i`; default `min(1, ln³Δ / Δ)`.
    pub sample_rate: Option<f64>,
    /// Maximum joint resamples of all `W_i` within one extension stage.
    pub resample_cap: u64,
    /// Maximum full restarts of the randomized stages.
    pub restart_cap: u64,
    pub bad_event_bounds: Option<BadEventBounds>,
    /// Redraw budget of each inner resampling transversal, per edge among the candidates.
    pub transversal_cap_per_edge: u64,
}

impl Default for SparseConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.2,
            locally_big_threshold: None,
            almost_locally_big_threshold: None,
            sample_rate: None,
            resample_cap: 200,
            restart_cap: 20,
            bad_event_bounds: None,
            transversal_cap_per_edge: 100,
        }
    }
}

/// Bad-event thresholds of one extension stage.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BadEventBounds {
    /// `A_i` holds when `|W_i|` is below this; default `(ε/8) ln³Δ`.
    pub min_sample_size: f64,
    /// `B_v` holds when `v` has more neighbors in `W` than this; default `2 ln²Δ`.
    pub max_sample_degree: f64,
    /// `C_j` holds when the relevant part of `W` has a larger neighborhood in `V_j`; default `300 Δ / ln n`.
    pub max_part_neighborhood: f64,
}

/// Every threshold in force for one instance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub delta: usize,
    pub ln_n: f64,
    pub ln_delta: f64,
    pub locally_big: f64,
    pub almost_locally_big: f64,
    /// `Δ / ln Δ`: vertices above it are dropped from a stage's candidates.
    pub high_degree: f64,
    /// `(ε/4)Δ`: a part with more special vertices than this joins the chain.
    pub crowded: f64,
    pub sample_rate: f64,
    pub bounds: BadEventBounds,
    /// `240/ε` and `600/ε`: edge-absorption constants of the two chains.
    pub beta_first: f64,
    pub beta_second: f64,
    /// `4 ln n`: the largest `|B_i|` the clique completion accepts.
    pub clique_cap: f64,
}

impl Thresholds {
    pub fn resolve(cfg: &SparseConfig, n: usize, delta: usize) -> Self {
        let d = delta as f64;
        let ln_n = (n.max(2) as f64).ln();
        let ln_delta = d.max(1.0).ln();
        let eps = cfg.epsilon;
        Self {
            delta,
            ln_n,
            ln_delta,
            locally_big: cfg.locally_big_threshold.unwrap_or(d / ln_n),
            almost_locally_big: cfg.almost_locally_big_threshold.unwrap_or(d / (2.0 * ln_n)),
            high_degree: d / ln_delta,
            crowded: eps / 4.0 * d,
            sample_rate: cfg.sample_rate.unwrap_or((ln_delta.powi(3) / d).min(1.0)),
            bounds: cfg.bad_event_bounds.unwrap_or(BadEventBounds {
                min_sample_size: eps / 8.0 * ln_delta.powi(3),
                max_sample_degree: 2.0 * ln_delta.powi(2),
                max_part_neighborhood: 300.0 * d / ln_n,
            }),
            beta_first: 240.0 / eps,
            beta_second: 600.0 / eps,
            clique_cap: 4.0 * ln_n,
        }
    }
}

/// Locally big / almost locally big parts of every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    /// `locally_big[v]`: parts in which `v` has more than the locally big cutoff of neighbors.
    pub locally_big: Vec<Vec<usize>>,
    pub almost_locally_big: Vec<Vec<usize>>,
}

impl Classification {
    pub fn is_locally_big(&self, v: usize) -> bool {
        !self.locally_big[v].is_empty()
    }

    pub fn is_locally_big_for(&self, v: usize, part: usize) -> bool {
        self.locally_big[v].contains(&part)
    }

    /// `B_i`: vertices almost locally big with respect to part `i`.
    pub fn almost_big_sets(&self, r: usize) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); r];
        for (v, list) in self.almost_locally_big.iter().enumerate() {
            for &i in list {
                sets[i].push(v);
            }
        }
        sets
    }
}

pub fn classify(g: &Graph, parts: &[Vec<usize>], locally_big: f64, almost_locally_big: f64) -> Classification {
    let masks: Vec<Vec<u64>> = parts.iter().map(|p| g.mask(p)).collect();
    let mut out = Classification {
        locally_big: vec![Vec::new(); g.n()],
        almost_locally_big: vec![Vec::new(); g.n()],
    };
    for v in 0..g.n() {
        if g.degree(v) == 0 {
            continue;
        }
        for (i, mask) in masks.iter().enumerate() {
            let c = g.degree_into(v, mask) as f64;
            if c > almost_locally_big {
                out.almost_locally_big[v].push(i);
            }
            if c > locally_big {
                out.locally_big[v].push(i);
            }
        }
    }
    out
}

/// What happened during a run, for run metadata and diagnostics.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SparseStats {
    pub thresholds: Option<Thresholds>,
    /// Degenerate `Δ = 0` or `ln Δ ≤ 1` instances go straight to the greedy algorithm.
    pub short_circuit: bool,
    pub locally_big_vertices: usize,
    pub max_clique_set: usize,
    pub added_edges: usize,
    pub i_chain: Vec<usize>,
    pub sigma: usize,
    pub j_chains: Vec<Vec<usize>>,
    pub restarts: u64,
    pub stage_resamples: u64,
    pub property_failures: u64,
    /// Chain steps that did not shrink and were closed off as empty.
    pub stalled_chain_steps: u64,
    pub trimmed_part_shortfalls: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparseOutcome {
    pub transversal: Option<Transversal>,
    pub stats: SparseStats,
}

struct Instance<'a> {
    original: &'a Graph,
    work: Graph,
    parts: &'a [Vec<usize>],
    masks: Vec<Vec<u64>>,
    class: Classification,
    th: Thresholds,
    cfg: &'a SparseConfig,
}

pub fn sparse_transversal(g: &Graph, parts: &[Vec<usize>], cfg: &SparseConfig, seed: u64) -> Result<SparseOutcome> {
    validate_parts(g, parts)?;
    if cfg.epsilon.is_nan() || cfg.epsilon <= 0.0 || cfg.resample_cap < 1 || cfg.restart_cap < 1 {
        return Err(Error::Config("need ε > 0 and caps >= 1".into()));
    }
    let delta = if g.n() == 0 { 0 } else { g.max_degree()?.0 };
    let need = (1.0 + cfg.epsilon) * delta as f64;
    if let Some((i, p)) = parts
        .iter()
        .enumerate()
        .find(|(_, p)| (p.len() as f64) < need || p.is_empty())
    {
        return Err(Error::Precondition(format!(
            "part {i} has {} vertices, needs at least (1+ε)Δ = {need:.2}",
            p.len()
        )));
    }
    let th = Thresholds::resolve(cfg, g.n(), delta);
    let mut stats = SparseStats {
        thresholds: Some(th),
        ..SparseStats::default()
    };
    if delta == 0 || th.ln_delta <= 1.0 {
        stats.short_circuit = true;
        stats.sigma = 1;
        stats.i_chain = vec![0];
        let transversal = greedy_transversal(g, parts, super::DEFAULT_DOMINATION_FRACTION, seed)?;
        return Ok(SparseOutcome { transversal, stats });
    }

    // Stage 1: classification on the original graph.
    let class = classify(g, parts, th.locally_big, th.almost_locally_big);
    stats.locally_big_vertices = (0..g.n()).filter(|&v| class.is_locally_big(v)).count();

    // Stage 2: clique completion of every B_i on a working copy.
    let big_sets = class.almost_big_sets(parts.len());
    let max_set = big_sets.iter().map(Vec::len).max().unwrap_or(0);
    stats.max_clique_set = max_set;
    if let Some((i, b)) = big_sets
        .iter()
        .enumerate()
        .find(|(_, b)| b.len() as f64 >= th.clique_cap)
    {
        return Err(Error::Invariant(format!(
            "|B_{i}| = {} reaches 4 ln n = {:.2}; clique completion aborted",
            b.len(),
            th.clique_cap
        )));
    }
    let mut work = g.clone();
    let mut added = vec![0usize; g.n()];
    for set in &big_sets {
        for (a, &u) in set.iter().enumerate() {
            for &v in &set[a + 1..] {
                if !work.has_edge(u, v) {
                    work.set_edge(u, v);
                    added[u] += 1;
                    added[v] += 1;
                    stats.added_edges += 1;
                }
            }
        }
    }
    for (v, &extra) in added.iter().enumerate() {
        let budget = 2 * class.almost_locally_big[v].len() * max_set;
        if extra > 0 && extra >= budget {
            return Err(Error::Invariant(format!(
                "vertex {v} gained {extra} clique edges, budget {budget}"
            )));
        }
    }

    let inst = Instance {
        original: g,
        work,
        parts,
        masks: parts.iter().map(|p| g.mask(p)).collect(),
        class,
        th,
        cfg,
    };

    // Stage 3: the I chain.
    let i_chain = inst.chain(
        &inst.initial_first_chain(),
        &vec![true; parts.len()],
        th.beta_first,
        &mut stats,
    );
    stats.i_chain = i_chain.iter().map(Vec::len).collect();
    stats.sigma = i_chain.len();

    for restart in 0..cfg.restart_cap {
        stats.restarts = restart;
        let mut rng = rng::stream(rng::mix(seed, restart), rng::streams::PIPELINE);
        if let Some(t) = inst.attempt(&i_chain, &mut rng, &mut stats)? {
            let full = Transversal::from_vertices(&t);
            assert!(
                verify_transversal(g, parts, &full),
                "sparse pipeline produced an invalid transversal"
            );
            return Ok(SparseOutcome {
                transversal: Some(full),
                stats,
            });
        }
    }
    stats.restarts = cfg.restart_cap;
    Ok(SparseOutcome {
        transversal: None,
        stats,
    })
}

impl Instance<'_> {
    fn r(&self) -> usize {
        self.parts.len()
    }

    fn union_mask(&self, members: &[usize]) -> Vec<u64> {
        let mut mask = vec![0u64; self.work.words_per_row()];
        for &i in members {
            for (m, p) in mask.iter_mut().zip(&self.masks[i]) {
                *m |= p;
            }
        }
        mask
    }

    fn crossing_edges(&self, part: usize, target: &[u64]) -> usize {
        self.parts[part].iter().map(|&v| self.work.degree_into(v, target)).sum()
    }

    /// Parts holding more than `(ε/4)Δ` locally big vertices.
    fn initial_first_chain(&self) -> Vec<usize> {
        (0..self.r())
            .filter(|&i| {
                let count = self.parts[i].iter().filter(|&&v| self.class.is_locally_big(v)).count();
                count as f64 > self.th.crowded
            })
            .collect()
    }

    /// Adds, while any exists, an eligible part sending more than `β ln²n·|V_i|` edges into the set.
    fn absorb(&self, set: &mut Vec<usize>, eligible: &[bool], beta: f64) {
        let ln2 = self.th.ln_n * self.th.ln_n;
        loop {
            let mask = self.union_mask(set);
            let next = (0..self.r()).find(|&i| {
                eligible[i]
                    && !set.contains(&i)
                    && self.crossing_edges(i, &mask) as f64 > beta * ln2 * self.parts[i].len() as f64
            });
            match next {
                Some(i) => set.push(i),
                None => break,
            }
        }
        set.sort_unstable();
    }

    /// Nested chain starting from `first` (after absorption); the last entry is empty.
    fn chain(&self, first: &[usize], eligible: &[bool], beta: f64, stats: &mut SparseStats) -> Vec<Vec<usize>> {
        let mut current = first.to_vec();
        self.absorb(&mut current, eligible, beta);
        let mut chain = vec![current];
        while let Some(cur) = chain.last().filter(|c| !c.is_empty()) {
            let mask = self.union_mask(cur);
            let mut next: Vec<usize> = cur
                .iter()
                .copied()
                .filter(|&i| {
                    let heavy = self.parts[i]
                        .iter()
                        .filter(|&&v| self.work.degree_into(v, &mask) as f64 > self.th.high_degree)
                        .count();
                    heavy as f64 > self.th.crowded
                })
                .collect();
            let mut inner = vec![false; self.r()];
            for &i in cur {
                inner[i] = true;
            }
            self.absorb(&mut next, &inner, beta);
            if next.len() == cur.len() {
                stats.stalled_chain_steps += 1;
                next.clear();
            }
            chain.push(next);
        }
        chain
    }

    /// Stages 4 to 6 with fresh randomness. Returns the chosen vertex of every part.
    fn attempt(
        &self,
        i_chain: &[Vec<usize>],
        rng: &mut rng::Rng,
        stats: &mut SparseStats,
    ) -> Result<Option<Vec<usize>>> {
        let r = self.r();
        let all_parts: Vec<Vec<usize>> = self.parts.to_vec();
        let mut choice: Vec<Option<usize>> = vec![None; r];

        // Stage 4: T_σ = ∅, ..., T_1 on V_{I_1}.
        let sigma = i_chain.len();
        for t in (2..=sigma).rev() {
            let prev = &i_chain[t - 2];
            let cur = &i_chain[t - 1];
            let outside: Vec<usize> = (0..r).filter(|i| !prev.contains(i)).collect();
            let stage = Stage {
                pools: &all_parts,
                grow: prev.iter().copied().filter(|i| !cur.contains(i)).collect(),
                anchor: self.union_mask(prev),
                outside,
                allowance: (sigma - (t - 1)) as f64,
                family: &i_chain[0],
            };
            if !self.extend(&stage, &mut choice, rng, stats)? {
                return Ok(None);
            }
        }
        let i_first: Vec<usize> = i_chain[0].clone();
        let t1: Vec<usize> = choice.iter().flatten().copied().collect();

        // Stage 5: J chain over parts touched by locally big members of T_1.
        let mut in_i1 = vec![false; r];
        for &i in &i_first {
            in_i1[i] = true;
        }
        let j_first: Vec<usize> = (0..r)
            .filter(|&j| !in_i1[j] && t1.iter().any(|&v| self.class.is_locally_big_for(v, j)))
            .collect();
        let eligible: Vec<bool> = in_i1.iter().map(|&b| !b).collect();
        let j_chain = self.chain(&j_first, &eligible, self.th.beta_second, stats);
        stats.j_chains.push(j_chain.iter().map(Vec::len).collect());

        let mut t1_nbrs = vec![0u64; self.work.words_per_row()];
        for &v in &t1 {
            for (m, w) in t1_nbrs.iter_mut().zip(self.work.row(v)) {
                *m |= w;
            }
        }
        let big_outside_i1 = |v: usize| self.class.locally_big[v].iter().any(|&k| !in_i1[k]);
        let mut trimmed = all_parts.clone();
        for &j in &j_chain[0] {
            trimmed[j].retain(|&v| !bitset::test(&t1_nbrs, v) && !big_outside_i1(v));
            if (trimmed[j].len() as f64) < self.cfg.epsilon / 2.0 * self.th.delta as f64 {
                stats.trimmed_part_shortfalls += 1;
            }
        }
        let tau = j_chain.len();
        for t in (2..=tau).rev() {
            let prev = &j_chain[t - 2];
            let cur = &j_chain[t - 1];
            let outside: Vec<usize> = (0..r).filter(|k| !in_i1[*k] && !prev.contains(k)).collect();
            let stage = Stage {
                pools: &trimmed,
                grow: prev.iter().copied().filter(|j| !cur.contains(j)).collect(),
                anchor: self.union_mask(prev),
                outside,
                allowance: (tau - (t - 1)) as f64,
                family: &j_chain[0],
            };
            if !self.extend(&stage, &mut choice, rng, stats)? {
                return Ok(None);
            }
        }

        // Stage 6: everything else.
        let chosen: Vec<usize> = choice.iter().flatten().copied().collect();
        let mut blocked = vec![0u64; self.work.words_per_row()];
        for &v in &chosen {
            for (m, w) in blocked.iter_mut().zip(self.work.row(v)) {
                *m |= w;
            }
        }
        let rest: Vec<usize> = (0..r).filter(|&k| choice[k].is_none()).collect();
        if !rest.is_empty() {
            let finals: Vec<Vec<usize>> = rest
                .iter()
                .map(|&k| {
                    self.parts[k]
                        .iter()
                        .copied()
                        .filter(|&v| !bitset::test(&blocked, v) && !self.class.is_locally_big(v))
                        .collect()
                })
                .collect();
            if finals.iter().any(Vec::is_empty) {
                return Ok(None);
            }
            let cap = self.transversal_cap(&finals);
            let seed = rng.gen();
            match resampling_transversal(&self.work, &finals, cap, seed)? {
                Some(t) => {
                    for (slot, &k) in rest.iter().enumerate() {
                        choice[k] = t.get(slot);
                    }
                }
                None => return Ok(None),
            }
        }
        let out: Vec<usize> = choice.into_iter().map(|c| c.expect("every part chosen")).collect();
        debug_assert!(self.original.is_independent(&out));
        Ok(Some(out))
    }

    fn transversal_cap(&self, parts: &[Vec<usize>]) -> u64 {
        let all: Vec<usize> = parts.iter().flatten().copied().collect();
        let mask = self.work.mask(&all);
        let edges: usize = all.iter().map(|&v| self.work.degree_into(v, &mask)).sum::<usize>() / 2;
        (self.cfg.transversal_cap_per_edge * edges as u64).max(self.cfg.resample_cap)
    }

    /// One extension stage: grows `choice` over the parts in `stage.grow`.
    fn extend(
        &self,
        stage: &Stage<'_>,
        choice: &mut [Option<usize>],
        rng: &mut rng::Rng,
        stats: &mut SparseStats,
    ) -> Result<bool> {
        if stage.grow.is_empty() {
            return Ok(true);
        }
        let existing: Vec<usize> = choice.iter().flatten().copied().collect();
        let mut blocked = vec![0u64; self.work.words_per_row()];
        for &v in &existing {
            for (m, w) in blocked.iter_mut().zip(self.work.row(v)) {
                *m |= w;
            }
        }
        // V*_i: drop neighbors of the current transversal and high-degree vertices.
        let pools: Vec<Vec<usize>> = stage
            .grow
            .iter()
            .map(|&i| {
                stage.pools[i]
                    .iter()
                    .copied()
                    .filter(|&v| {
                        !bitset::test(&blocked, v)
                            && self.work.degree_into(v, &stage.anchor) as f64 <= self.th.high_degree
                    })
                    .collect()
            })
            .collect();
        let all_pool: Vec<usize> = pools.iter().flatten().copied().collect();
        let b = self.th.bounds;
        for _ in 0..self.cfg.resample_cap {
            stats.stage_resamples += 1;
            let samples: Vec<Vec<usize>> = pools
                .iter()
                .map(|pool| {
                    pool.iter()
                        .copied()
                        .filter(|_| rng.gen_bool(self.th.sample_rate))
                        .collect()
                })
                .collect();
            // A_i
            if samples
                .iter()
                .any(|w| (w.len() as f64) < b.min_sample_size || w.is_empty())
            {
                continue;
            }
            let sampled: Vec<usize> = samples.iter().flatten().copied().collect();
            let w_mask = self.work.mask(&sampled);
            // B_v
            if all_pool
                .iter()
                .any(|&v| self.work.degree_into(v, &w_mask) as f64 > b.max_sample_degree)
            {
                continue;
            }
            // C_j
            if stage
                .outside
                .iter()
                .any(|&j| self.neighborhood_in(&sampled, j) as f64 > b.max_part_neighborhood)
            {
                continue;
            }
            let cap = self.transversal_cap(&samples);
            let Some(t) = resampling_transversal(&self.work, &samples, cap, rng.gen())? else {
                continue;
            };
            let mut next: Vec<Option<usize>> = choice.to_vec();
            for (slot, &i) in stage.grow.iter().enumerate() {
                next[i] = t.get(slot);
            }
            // P_{t-1} / Q_{t-1}, rechecked by direct counting.
            let members: Vec<usize> = stage.family.iter().filter_map(|&i| next[i]).collect();
            let bound = stage.allowance * b.max_part_neighborhood;
            if stage
                .outside
                .iter()
                .any(|&j| self.neighborhood_in(&members, j) as f64 > bound)
            {
                stats.property_failures += 1;
                continue;
            }
            choice.copy_from_slice(&next);
            return Ok(true);
        }
        Ok(false)
    }

    /// Size of the neighborhood in part `j` of the given vertices that are not locally big for `j`.
    fn neighborhood_in(&self, vertices: &[usize], j: usize) -> usize {
        let mut union = vec![0u64; self.work.words_per_row()];
        for &v in vertices.iter().filter(|&&v| !self.class.is_locally_big_for(v, j)) {
            for (m, w) in union.iter_mut().zip(self.work.row(v)) {
                *m |= w;
            }
        }
        bitset::and_count(&union, &self.masks[j])
    }
}

struct Stage<'p> {
    /// Candidate vertices per part (original parts, or the trimmed `V'_j`).
    pools: &'p [Vec<usize>],
    /// Parts this stage adds to the transversal.
    grow: Vec<usize>,
    /// Union of the parts at the previous chain level.
    anchor: Vec<u64>,
    /// Parts watched by the `C_j` events and the neighbor-count property.
    outside: Vec<usize>,
    /// Multiplier of the per-stage neighborhood bound in the property check.
    allowance: f64,
    /// Parts whose chosen vertices the property check counts (`I_1` or `J_1`).
    family: &'p [usize],
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edgeless_is_trivial() {
        let g = Graph::empty(12);
        let parts: Vec<Vec<usize>> = (0..4).map(|i| (3 * i..3 * i + 3).collect()).collect();
        let out = sparse_transversal(&g, &parts, &SparseConfig::default(), 0).unwrap();
        assert!(out.stats.short_circuit);
        assert_eq!(out.stats.sigma, 1);
        assert_eq!(out.stats.i_chain, vec![0]);
        assert!(verify_transversal(&g, &parts, &out.transversal.unwrap()));
    }

    #[test]
    fn small_parts_are_rejected() {
        let g = Graph::cycle(8);
        let parts = vec![vec![0, 1], vec![2, 3]];
        assert!(matches!(
            sparse_transversal(&g, &parts, &SparseConfig::default(), 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn classification_matches_direct_count() {
        // Vertex 0 has 5 neighbors in part 1 and one elsewhere.
        let mut g = Graph::empty(30);
        for v in 10..15 {
            g.add_edge(0, v).unwrap();
        }
        g.add_edge(0, 25).unwrap();
        g.add_edge(20, 21).unwrap();
        let parts: Vec<Vec<usize>> = (0..3).map(|i| (10 * i..10 * i + 10).collect()).collect();
        let (delta, _) = g.max_degree().unwrap();
        let th = Thresholds::resolve(&SparseConfig::default(), g.n(), delta);
        let class = classify(&g, &parts, th.locally_big, th.almost_locally_big);
        for v in 0..g.n() {
            let direct: Vec<usize> = (0..parts.len())
                .filter(|&i| parts[i].iter().filter(|&&u| g.has_edge(v, u)).count() as f64 > th.locally_big)
                .collect();
            assert_eq!(class.locally_big[v], direct, "vertex {v}");
        }
        assert_eq!(class.locally_big[0], vec![1]);
        assert!(!class.is_locally_big(20));
    }
}
