//! Instance generators and brute-force oracles shared by the integration and acceptance suites.
#![allow(dead_code)]

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use schrom::coloring::ColoringCertificate;
use schrom::graph::{gen_gnp, GnpConfig};
use schrom::{rng, Graph, VertexPartition};

/// Seeded corpus of small random graphs: `count` graphs, `n` in `3..=7`, `p` cycling through 0.3, 0.5, 0.7.
pub fn small_corpus(count: usize, seed: u64) -> Vec<(Graph, f64, u64)> {
    (0..count)
        .map(|i| {
            let n = 3 + i % 5;
            let p = [0.3, 0.5, 0.7][i % 3];
            let s = rng::mix(seed, i as u64);
            (gen_gnp(&GnpConfig::new(n, p, s)).unwrap(), p, s)
        })
        .collect()
}

/// Whether some coloring gives each part a permutation of `0..k` and is proper.
///
/// Enumerates one permutation per part; the first part is fixed to the identity.
pub fn rainbow_colorable(g: &Graph, parts: &[Vec<usize>], k: usize) -> bool {
    let perms = permutations(k);
    let mut colors = vec![usize::MAX; g.n()];
    for (c, &v) in parts[0].iter().enumerate() {
        colors[v] = c;
    }
    fn go(g: &Graph, parts: &[Vec<usize>], perms: &[Vec<usize>], i: usize, colors: &mut Vec<usize>) -> bool {
        if i == parts.len() {
            return (0..g.n()).all(|u| (u + 1..g.n()).all(|v| !g.has_edge(u, v) || colors[u] != colors[v]));
        }
        for perm in perms {
            for (pos, &v) in parts[i].iter().enumerate() {
                colors[v] = perm[pos];
            }
            if go(g, parts, perms, i + 1, colors) {
                return true;
            }
        }
        false
    }
    go(g, parts, &perms, 1, &mut colors)
}

pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(k - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, k - 1);
            out.push(p);
        }
    }
    out
}

/// Every choice of one vertex per part, checked for independence; no pruning.
pub fn brute_force_transversal_exists(g: &Graph, parts: &[Vec<usize>]) -> bool {
    let mut idx = vec![0usize; parts.len()];
    loop {
        let pick: Vec<usize> = parts.iter().zip(&idx).map(|(p, &i)| p[i]).collect();
        if pick
            .iter()
            .enumerate()
            .all(|(a, &u)| pick[a + 1..].iter().all(|&v| !g.has_edge(u, v)))
        {
            return true;
        }
        let mut j = 0;
        loop {
            if j == parts.len() {
                return false;
            }
            idx[j] += 1;
            if idx[j] < parts[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Tiny multipartite instance: `r` parts of `size` vertices, random edges with probability `p`.
pub fn tiny_multipartite(rng: &mut rng::Rng, r: usize, size: usize, p: f64) -> (Graph, Vec<Vec<usize>>) {
    let n = r * size;
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let parts = order.chunks(size).map(|c| c.to_vec()).collect();
    (g, parts)
}

/// Parts of size `⌈2e·d⌉` joined by `d` random perfect matchings between random pairs of parts,
/// so the maximum degree is at most `d`.
pub fn local_lemma_instance(rng: &mut rng::Rng, r: usize, d: usize) -> (Graph, Vec<Vec<usize>>) {
    let size = (2.0 * std::f64::consts::E * d as f64).ceil() as usize;
    let n = r * size;
    let mut g = Graph::empty(n);
    let parts: Vec<Vec<usize>> = (0..r).map(|i| (i * size..(i + 1) * size).collect()).collect();
    for _ in 0..d {
        let mut order: Vec<usize> = (0..r).collect();
        order.shuffle(rng);
        for pair in order.chunks_exact(2) {
            let mut b = parts[pair[1]].clone();
            b.shuffle(rng);
            for (&u, &v) in parts[pair[0]].iter().zip(&b) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    (g, parts)
}

/// `G(n, p)` padded to a multiple of `Δ+1`, with a seeded partition into parts of size `Δ+1`.
pub fn dense_instance(n: usize, p: f64, seed: u64) -> (Graph, VertexPartition) {
    let g0 = gen_gnp(&GnpConfig::new(n, p, seed)).unwrap();
    let (delta, _) = g0.max_degree().unwrap();
    let g = g0.pad_isolated(delta + 1).unwrap();
    let parts = VertexPartition::random(g.n(), delta + 1, rng::mix(seed, 1)).unwrap();
    (g, parts)
}

/// `ln C(n, k)` from a log-factorial table.
pub struct LogBinomial {
    ln_fact: Vec<f64>,
}

impl LogBinomial {
    pub fn new(max: usize) -> Self {
        let mut ln_fact = vec![0.0; max + 1];
        for i in 1..=max {
            ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
        }
        Self { ln_fact }
    }

    pub fn ln_choose(&self, n: usize, k: usize) -> f64 {
        self.ln_fact[n] - self.ln_fact[k] - self.ln_fact[n - k]
    }

    pub fn pmf(&self, n: usize, p: f64, k: usize) -> f64 {
        if p == 0.0 {
            return f64::from(u8::from(k == 0));
        }
        (self.ln_choose(n, k) + k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p()).exp()
    }

    /// `P(Bin(n, p) > x)`.
    pub fn upper_tail(&self, n: usize, p: f64, x: f64) -> f64 {
        let from = if x < 0.0 { 0 } else { x.floor() as usize + 1 };
        (from..=n).map(|k| self.pmf(n, p, k)).sum()
    }

    /// `P(Bin(n, p) <= x)`.
    pub fn cdf(&self, n: usize, p: f64, x: f64) -> f64 {
        (1.0 - self.upper_tail(n, p, x)).clamp(0.0, 1.0)
    }
}

/// Edmonds–Karp on the unit-capacity network source → left → right → sink.
pub fn max_flow(left: usize, right: usize, adj: &[Vec<usize>]) -> usize {
    let nodes = left + right + 2;
    let (s, t) = (left + right, left + right + 1);
    let mut cap = vec![vec![0i32; nodes]; nodes];
    for (u, row) in adj.iter().enumerate() {
        cap[s][u] = 1;
        for &v in row {
            cap[u][left + v] = 1;
        }
    }
    for v in 0..right {
        cap[left + v][t] = 1;
    }
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; nodes];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for y in 0..nodes {
                if prev[y] == usize::MAX && cap[x][y] > 0 {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if prev[t] == usize::MAX {
            return flow;
        }
        let mut y = t;
        while y != s {
            let x = prev[y];
            cap[x][y] -= 1;
            cap[y][x] += 1;
            y = x;
        }
        flow += 1;
    }
}

/// Certificate check from the definition: proper, and each part sees every color once.
pub fn certificate_ok(g: &Graph, parts: &VertexPartition, cert: &ColoringCertificate) -> bool {
    let k = parts.k();
    if cert.colors.len() != g.n() {
        return false;
    }
    let proper = (0..g.n()).all(|u| g.neighbors(u).all(|v| cert.colors[u] != cert.colors[v]));
    let rainbow = parts.parts().iter().all(|p| {
        let mut cs: Vec<usize> = p.iter().map(|&v| cert.colors[v]).collect();
        cs.sort_unstable();
        cs == (0..k).collect::<Vec<_>>()
    });
    proper && rainbow
}
