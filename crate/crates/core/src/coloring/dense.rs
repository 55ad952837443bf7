//! Decomposition of a partitioned dense graph into disjoint independent transversals.
//!
//! Two parts are handled exactly by one perfect matching of `V_1` into `V_2`
//! through non-edges. With three or more parts the pipeline runs four steps:
//!
//! 1. route a transversal through a maximum-degree vertex and delete it;
//! 2. while some vertex sees at least `0.9·np` vertices of one part, route a
//!    transversal through it and delete it;
//! 3. while some minimal partial transversal `T` leaves at most `np/100`
//!    vertices of a part undominated, split `T` into two halves, complete
//!    each half to a full transversal and delete both;
//! 4. grow all remaining transversals together, one part at a time, by
//!    perfect matchings of the auxiliary graph joining transversal `i` to
//!    every vertex of the next part that has no neighbor in it.
//!
//! Every certificate leaving this module has passed [`verify_certificate`].

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{verify_certificate, ColoringCertificate};
use crate::bitset::{self, BitSet};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexPartition};
use crate::matching::{perfect_matching_or_violator, BipartiteGraph, MatchingResult};
use crate::rng;
use crate::transversal::{pinned_transversal, verify_transversal, Transversal};

/// Whether Step 1 treats the maximum-degree vertex separately.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DenseVariant {
    /// Pin the maximum-degree vertex first when `k < (1+ε)Δ`.
    #[default]
    Auto,
    PinMaxDegree,
    /// Merge Steps 1 and 2.
    Uniform,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenseConfig {
    /// Step 2 cutoff as a fraction of `np`.
    pub locally_big_fraction: f64,
    /// Step 3 undominated allowance as a fraction of `np`.
    pub step3_domination_fraction: f64,
    /// Step 4 retries (reshuffled part order and seeding) after a Hall violator.
    pub hall_retry_budget: u32,
    /// Full pipeline restarts after Step 4 gives up.
    pub restart_budget: u32,
    /// Cap on Step 2 iterations; default `r + 1`.
    pub step2_budget: Option<usize>,
    /// Cap on Step 3 iterations; default `⌈110·⌈1/p⌉·ln n⌉`.
    pub step3_budget: Option<usize>,
    /// Redraw cap of each pinned transversal.
    pub pin_resample_cap: u64,
    /// Edge probability; estimated from the graph when absent.
    pub density: Option<f64>,
    /// Slack deciding the `Auto` variant.
    pub epsilon: f64,
    pub variant: DenseVariant,
}

impl Default for DenseConfig {
    fn default() -> Self {
        Self {
            locally_big_fraction: 0.9,
            step3_domination_fraction: 0.01,
            hall_retry_budget: 100,
            restart_budget: 3,
            step2_budget: None,
            step3_budget: None,
            pin_resample_cap: 20_000,
            density: None,
            epsilon: 0.1,
            variant: DenseVariant::Auto,
        }
    }
}

impl DenseConfig {
    fn validate(&self) -> Result<()> {
        let frac = |x: f64| x > 0.0 && x <= 1.0;
        if !frac(self.locally_big_fraction) || !frac(self.step3_domination_fraction) {
            return Err(Error::Config("thresholds must lie in (0, 1]·np".into()));
        }
        if self.hall_retry_budget < 1 || self.restart_budget < 1 || self.pin_resample_cap < 1 {
            return Err(Error::Config("budgets must be at least 1".into()));
        }
        if self.step2_budget == Some(0) || self.step3_budget == Some(0) {
            return Err(Error::Config("step budgets must be at least 1".into()));
        }
        if let Some(p) = self.density {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::Config(format!("density {p} outside (0, 1]")));
            }
        }
        Ok(())
    }
}

/// Run record of one [`decompose_dense`] call.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DenseReport {
    pub k: usize,
    pub r: usize,
    pub delta: usize,
    pub np: f64,
    /// True when the two-part complement matching was used.
    pub complement_matching: bool,
    pub variant: Option<DenseVariant>,
    /// Maximum-degree vertex pinned in Step 1, and whether Δ was attained more than once.
    pub step1_vertex: Option<usize>,
    pub step1_tied: bool,
    pub step2_transversals: usize,
    pub step3_iterations: usize,
    pub step3_transversals: usize,
    pub step4_transversals: usize,
    /// Sizes of the Hall violators met in Step 4 (or by the complement matching).
    pub hall_violators: Vec<usize>,
    pub hall_retries: u32,
    pub restarts: u32,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseOutcome {
    pub certificate: Option<ColoringCertificate>,
    pub report: DenseReport,
}

/// Attempts a strong coloring of `parts` with `k = parts.k() > Δ` colors.
pub fn decompose_dense(g: &Graph, parts: &VertexPartition, cfg: &DenseConfig, seed: u64) -> Result<DenseOutcome> {
    cfg.validate()?;
    if parts.vertex_count() != g.n() {
        return Err(Error::Precondition(format!(
            "partition covers {} vertices but the graph has {}; pad first",
            parts.vertex_count(),
            g.n()
        )));
    }
    let k = parts.k();
    let (delta, argmax) = if g.n() == 0 { (0, Vec::new()) } else { g.max_degree()? };
    if k <= delta {
        return Err(Error::Precondition(format!("part size {k} must exceed Δ = {delta}")));
    }
    let mut report = DenseReport {
        k,
        r: parts.r(),
        delta,
        np: estimate_np(g, cfg.density),
        ..DenseReport::default()
    };

    let transversals = if parts.r() <= 2 {
        report.complement_matching = true;
        complement_matching(g, parts, &mut report)
    } else {
        let variant = match cfg.variant {
            DenseVariant::Auto if (k as f64) < (1.0 + cfg.epsilon) * delta as f64 => DenseVariant::PinMaxDegree,
            DenseVariant::Auto => DenseVariant::Uniform,
            v => v,
        };
        report.variant = Some(variant);
        if variant == DenseVariant::PinMaxDegree && delta > 0 {
            report.step1_vertex = Some(argmax[0]);
            report.step1_tied = argmax.len() > 1;
        }
        let mut found = None;
        for restart in 0..cfg.restart_budget {
            report.restarts = restart;
            let mut run = Run::new(g, parts, cfg, &report, rng::mix(seed, restart as u64));
            let result = run.execute(&mut report)?;
            if result.is_some() {
                found = result;
                break;
            }
        }
        found
    };

    let certificate = transversals.map(|ts| {
        let cert = ColoringCertificate::from_transversals(g.n(), &ts);
        assert!(
            verify_certificate(g, parts, &cert),
            "decomposition emitted an invalid certificate"
        );
        cert
    });
    if certificate.is_none() && report.failure.is_none() {
        report.failure = Some("budget exhausted".into());
    }
    Ok(DenseOutcome { certificate, report })
}

/// `np` from the configured density, else the mean degree of the non-isolated vertices.
fn estimate_np(g: &Graph, density: Option<f64>) -> f64 {
    let degrees = g.degrees();
    let active = degrees.iter().filter(|&&d| d > 0).count();
    match density {
        Some(p) => p * active as f64,
        None if active == 0 => 0.0,
        None => degrees.iter().sum::<usize>() as f64 / active as f64,
    }
}

/// Two parts: color class `i` is `{V_1[i], M(V_1[i])}` for a perfect matching `M` through non-edges.
fn complement_matching(g: &Graph, parts: &VertexPartition, report: &mut DenseReport) -> Option<Vec<Vec<usize>>> {
    let p = parts.parts();
    if p.len() == 1 {
        return Some(p[0].iter().map(|&v| vec![v]).collect());
    }
    let (left, right) = (&p[0], &p[1]);
    let adj = left
        .iter()
        .map(|&u| (0..right.len()).filter(|&j| !g.has_edge(u, right[j])).collect())
        .collect();
    let h = BipartiteGraph::new(right.len(), adj).expect("indices in range");
    match perfect_matching_or_violator(&h).expect("equal sides") {
        MatchingResult::Perfect(m) => Some(left.iter().zip(&m).map(|(&u, &j)| vec![u, right[j]]).collect()),
        MatchingResult::Violator(s) => {
            report.hall_violators.push(s.len());
            report.failure = Some(format!(
                "no perfect matching through non-edges; Hall violator of size {}",
                s.len()
            ));
            None
        }
    }
}

struct Run<'a> {
    g: &'a Graph,
    cfg: &'a DenseConfig,
    /// Remaining vertices of every part; all parts always have equal size.
    parts: Vec<Vec<usize>>,
    part_of: Vec<usize>,
    alive: BitSet,
    deleted: Vec<Vec<usize>>,
    rng: rng::Rng,
    seed: u64,
    calls: u64,
    np: f64,
    step1_vertex: Option<usize>,
}

impl<'a> Run<'a> {
    fn new(g: &'a Graph, parts: &VertexPartition, cfg: &'a DenseConfig, report: &DenseReport, seed: u64) -> Self {
        let mut alive = BitSet::new(g.n());
        (0..g.n()).for_each(|v| alive.insert(v));
        Self {
            g,
            cfg,
            parts: parts.parts().to_vec(),
            part_of: parts.part_index(),
            alive,
            deleted: Vec::new(),
            rng: rng::stream(seed, rng::streams::PIPELINE),
            seed,
            calls: 0,
            np: report.np,
            step1_vertex: report.step1_vertex,
        }
    }

    fn next_seed(&mut self) -> u64 {
        self.calls += 1;
        rng::mix(self.seed, self.calls)
    }

    fn delete(&mut self, t: &Transversal) {
        for (&i, &v) in t.choice() {
            self.parts[i].retain(|&u| u != v);
            self.alive.remove(v);
        }
        self.deleted.push(t.vertices());
    }

    fn pin(&mut self, pins: &[usize], avoid: &[usize]) -> Result<Option<Transversal>> {
        let pin_pairs: Vec<(usize, usize)> = pins.iter().map(|&v| (self.part_of[v], v)).collect();
        let residual: Vec<Vec<usize>> = self
            .parts
            .iter()
            .map(|p| p.iter().copied().filter(|v| !avoid.contains(v)).collect())
            .collect();
        let seed = self.next_seed();
        pinned_transversal(self.g, &residual, &pin_pairs, self.cfg.pin_resample_cap, seed)
    }

    fn execute(&mut self, report: &mut DenseReport) -> Result<Option<Vec<Vec<usize>>>> {
        let r = self.parts.len();
        let n = self.g.n();

        // Step 1
        if let Some(x) = self.step1_vertex {
            match self.pin(&[x], &[])? {
                Some(t) => self.delete(&t),
                None => {
                    report.failure = Some(format!("no transversal through max-degree vertex {x}"));
                    return Ok(None);
                }
            }
        }

        // Step 2
        let threshold = (self.cfg.locally_big_fraction * self.np).max(1.0);
        let budget2 = self.cfg.step2_budget.unwrap_or(r + 1);
        let mut step2 = 0;
        while step2 < budget2 {
            let Some(v) = self.find_locally_big(threshold) else {
                break;
            };
            match self.pin(&[v], &[])? {
                Some(t) => self.delete(&t),
                None => {
                    report.failure = Some(format!("step 2: no transversal through {v}"));
                    return Ok(None);
                }
            }
            step2 += 1;
        }
        report.step2_transversals = step2;

        // Step 3
        let allowance = (self.cfg.step3_domination_fraction * self.np).floor() as usize;
        let budget3 = self.cfg.step3_budget.unwrap_or_else(|| {
            let p = (self.np / n.max(2) as f64).clamp(f64::MIN_POSITIVE, 1.0);
            (110.0 * (1.0 / p).ceil() * (n.max(2) as f64).ln()).ceil() as usize
        });
        let mut iterations = 0;
        let mut step3 = 0;
        while iterations < budget3 && !self.parts[0].is_empty() {
            let Some(t) = self.find_minimal_dominating(allowance) else {
                break;
            };
            iterations += 1;
            if t.len() == 1 {
                match self.pin(&t, &[])? {
                    Some(full) => self.delete(&full),
                    None => {
                        report.failure = Some("step 3: single dominating vertex cannot be completed".into());
                        return Ok(None);
                    }
                }
                step3 += 1;
                continue;
            }
            let (first, second) = t.split_at(t.len().div_ceil(2));
            for (half, other) in [(first, second), (second, first)] {
                // The other half stays available for its own completion.
                let avoid = if std::ptr::eq(half, first) { other } else { &[][..] };
                match self.pin(half, avoid)? {
                    Some(full) => self.delete(&full),
                    None => {
                        report.failure = Some("step 3: a half could not be completed".into());
                        return Ok(None);
                    }
                }
                step3 += 1;
            }
        }
        report.step3_iterations = iterations;
        report.step3_transversals = step3;

        // Step 4
        let s = self.parts[0].len();
        if self.parts.iter().any(|p| p.len() != s) {
            return Err(Error::Invariant("parts lost different numbers of vertices".into()));
        }
        for retry in 0..self.cfg.hall_retry_budget {
            if retry > 0 {
                report.hall_retries += 1;
            }
            match self.simultaneous_extension(retry)? {
                Ok(built) => {
                    report.step4_transversals = built.len();
                    let mut all = std::mem::take(&mut self.deleted);
                    all.extend(built);
                    return Ok(Some(all));
                }
                Err(violator) => report.hall_violators.push(violator),
            }
        }
        report.failure = Some("step 4: Hall violators exhausted the retry budget".into());
        Ok(None)
    }

    fn find_locally_big(&self, threshold: f64) -> Option<usize> {
        let masks: Vec<Vec<u64>> = self.parts.iter().map(|p| self.g.mask(p)).collect();
        self.alive
            .iter()
            .find(|&v| masks.iter().any(|m| self.g.degree_into(v, m) as f64 >= threshold))
    }

    /// Grow-then-minimalize search for a partial transversal almost dominating some part.
    fn find_minimal_dominating(&mut self, allowance: usize) -> Option<Vec<usize>> {
        let mut order: Vec<usize> = self.alive.iter().collect();
        order.shuffle(&mut self.rng);
        for target in 0..self.parts.len() {
            if self.parts[target].len() <= allowance {
                continue;
            }
            let mask = self.g.mask(&self.parts[target]);
            let Some(mut members) =
                crate::transversal::grow_dominating(self.g, &self.part_of, &self.alive, &order, &mask, allowance)
            else {
                continue;
            };
            let mut i = 0;
            while i < members.len() {
                let mut without = members.clone();
                without.remove(i);
                if !without.is_empty() && self.undominated(&without, &mask) <= allowance {
                    members = without;
                } else {
                    i += 1;
                }
            }
            return Some(members);
        }
        None
    }

    fn undominated(&self, set: &[usize], target: &[u64]) -> usize {
        let mut covered = vec![0u64; self.g.words_per_row()];
        for &v in set {
            for (c, r) in covered.iter_mut().zip(self.g.row(v)) {
                *c |= r;
            }
        }
        bitset::and_not_count(target, target, &covered)
    }

    /// Step 4. `Ok` holds the new transversals; `Err` the size of a Hall violator.
    fn simultaneous_extension(&mut self, retry: u32) -> Result<Result<Vec<Vec<usize>>, usize>> {
        let r = self.parts.len();
        let s = self.parts[0].len();
        if s == 0 {
            return Ok(Ok(Vec::new()));
        }
        let mut order: Vec<usize> = (0..r).collect();
        let mut seeds = self.parts[order[0]].clone();
        if retry > 0 {
            order.shuffle(&mut self.rng);
            seeds = self.parts[order[0]].clone();
            seeds.shuffle(&mut self.rng);
        }
        let words = self.g.words_per_row();
        let mut members: Vec<Vec<usize>> = vec![vec![usize::MAX; r]; s];
        let mut blocked: Vec<Vec<u64>> = vec![vec![0; words]; s];
        for (j, &v) in seeds.iter().enumerate() {
            members[j][order[0]] = v;
            blocked[j].copy_from_slice(self.g.row(v));
        }
        for &part in &order[1..] {
            let right = &self.parts[part];
            let adj = blocked
                .iter()
                .map(|b| (0..right.len()).filter(|&x| !bitset::test(b, right[x])).collect())
                .collect();
            let h = BipartiteGraph::new(right.len(), adj)?;
            match perfect_matching_or_violator(&h)? {
                MatchingResult::Perfect(m) => {
                    for (j, &x) in m.iter().enumerate() {
                        let v = right[x];
                        members[j][part] = v;
                        for (b, w) in blocked[j].iter_mut().zip(self.g.row(v)) {
                            *b |= w;
                        }
                    }
                }
                MatchingResult::Violator(violator) => return Ok(Err(violator.len())),
            }
            self.recheck(&members, &order)?;
        }
        Ok(Ok(members))
    }

    /// Partial transversals must stay pairwise disjoint and independent after every round.
    fn recheck(&self, members: &[Vec<usize>], order: &[usize]) -> Result<()> {
        let mut used = BitSet::new(self.g.n());
        for t in members {
            let chosen: Vec<usize> = order.iter().map(|&i| t[i]).filter(|&v| v != usize::MAX).collect();
            if !self.g.is_independent(&chosen) {
                return Err(Error::Invariant(
                    "step 4 produced a dependent partial transversal".into(),
                ));
            }
            for v in chosen {
                if used.contains(v) {
                    return Err(Error::Invariant("step 4 reused a vertex".into()));
                }
                used.insert(v);
            }
        }
        Ok(())
    }
}

#[allow(dead_code)]
fn is_valid_transversal(g: &Graph, parts: &[Vec<usize>], t: &[usize]) -> bool {
    verify_transversal(g, parts, &Transversal::from_vertices(t))
}
