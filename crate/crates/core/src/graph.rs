//! Dense bit-row graphs, seeded `G(n, p)` generation and vertex partitions.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::bitset::{self, words_for};
use crate::error::{Error, Result};
use crate::rng;

/// Largest vertex count accepted by the dense representation (about 2 GiB of rows).
pub const MAX_DENSE_VERTICES: usize = 1 << 17;

/// Undirected simple graph on vertices `0..n` stored as one bit row per vertex.
///
/// Rows are kept symmetric and loop-free by every constructor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Self {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set_edge(u, v);
            }
        }
        g
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Cycle `0-1-...-(n-1)-0`.
    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        if n >= 3 {
            for v in 0..n {
                g.set_edge(v, (v + 1) % n);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for v in 1..n {
            g.set_edge(v - 1, v);
        }
        g
    }

    /// Star with center `0` and leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        let mut g = Self::empty(leaves + 1);
        for v in 1..=leaves {
            g.set_edge(0, v);
        }
        g
    }

    /// `K_{a,b}` with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Self::empty(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.set_edge(u, v);
            }
        }
        g
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut g = Graph::empty(self.n + other.n);
        for (u, v) in self.edges() {
            g.set_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.set_edge(u + self.n, v + self.n);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::Domain(format!(
                "edge ({u}, {v}) out of range for n = {}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::Domain(format!("self-loop at {u}")));
        }
        self.set_edge(u, v);
        Ok(())
    }

    #[inline]
    pub(crate) fn set_edge(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + (v >> 6)] |= 1 << (v & 63);
        self.rows[v * self.words + (u >> 6)] |= 1 << (u & 63);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        bitset::test(self.row(u), v)
    }

    /// Adjacency row of `v` as raw words; bit `u` is set iff `uv` is an edge.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn words_per_row(&self) -> usize {
        self.words
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bitset::ones(self.row(v))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.degrees().iter().sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Number of neighbors of `v` inside `mask`.
    #[inline]
    pub fn degree_into(&self, v: usize, mask: &[u64]) -> usize {
        bitset::and_count(self.row(v), mask)
    }

    /// Maximum degree and the full set of vertices attaining it.
    pub fn max_degree(&self) -> Result<(usize, Vec<usize>)> {
        if self.n == 0 {
            return Err(Error::Domain("max degree of the empty graph".into()));
        }
        let degrees = self.degrees();
        let delta = *degrees.iter().max().expect("n >= 1");
        let argmax = (0..self.n).filter(|&v| degrees[v] == delta).collect();
        Ok((delta, argmax))
    }

    /// `Δ` minus the largest degree below `Δ`; zero when `Δ` is attained twice.
    pub fn degree_gap(&self) -> Result<usize> {
        if self.n < 2 {
            return Err(Error::Domain("degree gap needs at least two vertices".into()));
        }
        Ok(degree_gap_of(&self.degrees()))
    }

    pub fn codegree(&self, u: usize, v: usize) -> Result<usize> {
        if u == v {
            return Err(Error::Domain(format!("codegree of {u} with itself")));
        }
        if u >= self.n || v >= self.n {
            return Err(Error::Domain(format!("vertex out of range for n = {}", self.n)));
        }
        Ok(bitset::and_count(self.row(u), self.row(v)))
    }

    /// Largest codegree over unordered pairs with a lexicographically first pair attaining it.
    pub fn max_codegree_pair(&self) -> Option<(usize, usize, usize)> {
        #[cfg(target_arch = "x86_64")]
        if std::arch::is_x86_feature_detected!("avx512vpopcntdq") {
            // SAFETY: the features were detected at runtime.
            return unsafe { self.max_codegree_pair_avx512() };
        }
        #[cfg(target_arch = "x86_64")]
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: the feature was detected at runtime.
            return unsafe { self.max_codegree_pair_avx2() };
        }
        self.max_codegree_pair_scalar()
    }

    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "avx512f,avx512vpopcntdq")]
    unsafe fn max_codegree_pair_avx512(&self) -> Option<(usize, usize, usize)> {
        self.max_codegree_pair_scalar()
    }

    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "avx2")]
    unsafe fn max_codegree_pair_avx2(&self) -> Option<(usize, usize, usize)> {
        self.max_codegree_pair_scalar()
    }

    #[inline(always)]
    fn max_codegree_pair_scalar(&self) -> Option<(usize, usize, usize)> {
        // Rows are tiled so each `v` row is reused by a block of `u` rows while in cache.
        const BLOCK: usize = 16;
        let mut best: Option<(usize, usize, usize)> = None;
        for u0 in (0..self.n).step_by(BLOCK) {
            let u1 = (u0 + BLOCK).min(self.n);
            for v in u0 + 1..self.n {
                let rv = self.row(v);
                for u in u0..u1.min(v) {
                    let c = bitset::and_count(self.row(u), rv);
                    if best.is_none_or(|(b, bu, bv)| c > b || (c == b && (u, v) < (bu, bv))) {
                        best = Some((c, u, v));
                    }
                }
            }
        }
        best
    }

    pub fn max_codegree(&self) -> usize {
        self.max_codegree_pair().map_or(0, |(c, _, _)| c)
    }

    /// Adds `k⌈n/k⌉ − n` isolated vertices so that `k` divides the vertex count.
    pub fn pad_isolated(&self, k: usize) -> Result<Graph> {
        if k < 1 {
            return Err(Error::Domain("padding needs k >= 1".into()));
        }
        let target = self.n.div_ceil(k) * k;
        if target == self.n {
            return Ok(self.clone());
        }
        let mut g = Graph::empty(target);
        for (u, v) in self.edges() {
            g.set_edge(u, v);
        }
        Ok(g)
    }

    /// Bit mask of a vertex list, sized for this graph.
    pub fn mask(&self, vertices: &[usize]) -> Vec<u64> {
        let mut mask = vec![0u64; self.words];
        for &v in vertices {
            mask[v >> 6] |= 1 << (v & 63);
        }
        mask
    }

    pub fn is_independent(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }
}

pub(crate) fn degree_gap_of(degrees: &[usize]) -> usize {
    let delta = degrees.iter().copied().max().unwrap_or(0);
    let attaining = degrees.iter().filter(|&&d| d == delta).count();
    if attaining >= 2 {
        return 0;
    }
    let second = degrees.iter().copied().filter(|&d| d < delta).max().unwrap_or(0);
    delta - second
}

/// Parameters of a seeded `G(n, p)` sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GnpConfig {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl GnpConfig {
    pub fn new(n: usize, p: f64, seed: u64) -> Self {
        Self { n, p, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Config(format!("edge probability {} outside [0, 1]", self.p)));
        }
        if self.n > MAX_DENSE_VERTICES {
            return Err(Error::Config(format!(
                "n = {} exceeds the dense limit of {MAX_DENSE_VERTICES} vertices",
                self.n
            )));
        }
        Ok(())
    }

    /// Pairs `(u, v)`, `u < v`, of the sample in lexicographic order.
    ///
    /// The stream walks the pairs in order and jumps over absent pairs with
    /// geometric skips drawn from substream [`rng::streams::GNP`] of the
    /// seed, so a config always yields the same edge sequence.
    pub fn edges(&self) -> GnpEdges {
        GnpEdges::new(self)
    }
}

pub struct GnpEdges {
    n: usize,
    p: f64,
    log_q: f64,
    u: usize,
    v: usize,
    rng: rng::Rng,
}

impl GnpEdges {
    fn new(cfg: &GnpConfig) -> Self {
        Self {
            n: cfg.n,
            p: cfg.p,
            log_q: (-cfg.p).ln_1p(),
            u: 0,
            // Position of the next candidate pair (u, v).
            v: 1,
            rng: rng::stream(cfg.seed, rng::streams::GNP),
        }
    }

    fn advance(&mut self, mut skip: u64) -> bool {
        while self.u < self.n {
            let left_in_row = self.n.saturating_sub(self.v) as u64;
            if skip < left_in_row {
                self.v += skip as usize;
                return true;
            }
            skip -= left_in_row;
            self.u += 1;
            self.v = self.u + 1;
        }
        false
    }
}

impl Iterator for GnpEdges {
    type Item = (usize, usize);

    fn next(&mut self) -> Option<(usize, usize)> {
        if self.p <= 0.0 || self.n < 2 {
            return None;
        }
        let skip = if self.p >= 1.0 {
            0
        } else {
            // u in (0, 1]; floor(ln u / ln(1 - p)) failures before the next success.
            let u: f64 = 1.0 - self.rng.gen::<f64>();
            let s = (u.ln() / self.log_q).floor();
            if s >= u64::MAX as f64 {
                u64::MAX
            } else {
                s as u64
            }
        };
        if !self.advance(skip) {
            return None;
        }
        let edge = (self.u, self.v);
        self.v += 1;
        Some(edge)
    }
}

/// Samples `G(n, p)`; the same config always reproduces the same graph.
pub fn gen_gnp(cfg: &GnpConfig) -> Result<Graph> {
    cfg.validate()?;
    let mut g = Graph::empty(cfg.n);
    for (u, v) in cfg.edges() {
        g.set_edge(u, v);
    }
    Ok(g)
}

/// Degree sequence of the graph [`gen_gnp`] would build, without materializing it.
pub fn gnp_degrees(cfg: &GnpConfig) -> Result<Vec<usize>> {
    if !(0.0..=1.0).contains(&cfg.p) {
        return Err(Error::Config(format!("edge probability {} outside [0, 1]", cfg.p)));
    }
    let mut degrees = vec![0usize; cfg.n];
    for (u, v) in cfg.edges() {
        degrees[u] += 1;
        degrees[v] += 1;
    }
    Ok(degrees)
}

/// Disjoint parts `V_1, ..., V_r`, all of size `k`, covering `0..k·r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexPartition {
    k: usize,
    parts: Vec<Vec<usize>>,
}

impl VertexPartition {
    /// Checks that the parts are disjoint, all of size `k`, and cover `0..n`.
    pub fn new(k: usize, parts: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Precondition("part size must be positive".into()));
        }
        let mut seen = vec![false; n];
        for (i, part) in parts.iter().enumerate() {
            if part.len() != k {
                return Err(Error::Precondition(format!(
                    "part {i} has {} vertices, expected {k}",
                    part.len()
                )));
            }
            for &v in part {
                if v >= n {
                    return Err(Error::Precondition(format!("vertex {v} out of range for n = {n}")));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::Precondition(format!("vertex {v} appears twice")));
                }
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::Precondition(format!("vertex {v} is in no part")));
        }
        Ok(Self { k, parts })
    }

    /// Uniformly random partition of `0..n` into parts of size `k`; `k` must divide `n`.
    pub fn random(n: usize, k: usize, seed: u64) -> Result<Self> {
        if k == 0 || !n.is_multiple_of(k) {
            return Err(Error::Precondition(format!("part size {k} does not divide n = {n}")));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng::stream(seed, rng::streams::PARTITION));
        let parts = order
            .chunks(k)
            .map(|c| {
                let mut part = c.to_vec();
                part.sort_unstable();
                part
            })
            .collect();
        Self::new(k, parts, n)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn vertex_count(&self) -> usize {
        self.k * self.parts.len()
    }

    /// `part_of[v]` for every covered vertex.
    pub fn part_index(&self) -> Vec<usize> {
        let mut part_of = vec![usize::MAX; self.vertex_count()];
        for (i, part) in self.parts.iter().enumerate() {
            for &v in part {
                part_of[v] = i;
            }
        }
        part_of
    }
}

/// Partition of `pad_isolated(g, k)` whose first part is the neighborhood of
/// a maximum-degree vertex (lowest index on ties). For `k = Δ` it admits no
/// strong `k`-coloring: that vertex would need a color unused in its own
/// neighborhood, which already uses all `k` colors.
pub fn lower_bound_partition(g: &Graph, k: usize) -> Result<VertexPartition> {
    let (delta, argmax) = g.max_degree()?;
    if delta == 0 {
        return Err(Error::Domain("lower-bound witness needs max degree >= 1".into()));
    }
    if k != delta {
        return Err(Error::Domain(format!(
            "witness is defined for k = Δ = {delta}, got {k}"
        )));
    }
    let padded = g.pad_isolated(k)?;
    let center = argmax[0];
    let first: Vec<usize> = g.neighbors(center).collect();
    let mut in_first = vec![false; padded.n()];
    for &v in &first {
        in_first[v] = true;
    }
    let rest: Vec<usize> = (0..padded.n()).filter(|&v| !in_first[v]).collect();
    let mut parts = vec![first];
    parts.extend(rest.chunks(k).map(<[usize]>::to_vec));
    VertexPartition::new(k, parts, padded.n())
}
