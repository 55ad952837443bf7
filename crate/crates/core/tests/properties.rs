mod common;

use proptest::prelude::*;
use schrom::coloring::exact::find_strong_coloring;
use schrom::coloring::{decompose_dense, verify_certificate, DenseConfig};
use schrom::graph::{gen_gnp, lower_bound_partition, GnpConfig};
use schrom::io::write_edge_list;
use schrom::matching::{max_matching, BipartiteGraph};
use schrom::transversal::{
    greedy_transversal, pinned_transversal, resampling_transversal, verify_transversal, DEFAULT_DOMINATION_FRACTION,
};
use schrom::{rng, Graph, VertexPartition};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn symmetric_loop_free(g: &Graph) -> bool {
    (0..g.n()).all(|u| !g.has_edge(u, u) && (0..g.n()).all(|v| g.has_edge(u, v) == g.has_edge(v, u)))
}

/// Parts of size `size` over a graph with `r·size` vertices.
fn partitioned(max_r: usize, max_size: usize) -> impl Strategy<Value = (Graph, Vec<Vec<usize>>, u64)> {
    (2..=max_r, 1..=max_size, 0.05f64..0.6, any::<u64>()).prop_map(|(r, size, p, seed)| {
        let mut rng = rng::stream(seed, 0);
        let (g, parts) = common::tiny_multipartite(&mut rng, r, size, p);
        (g, parts, seed)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructors_keep_adjacency_symmetric(g in graph_strategy(14), k in 1usize..6) {
        prop_assert!(symmetric_loop_free(&g));
        let padded = g.pad_isolated(k).unwrap();
        prop_assert!(symmetric_loop_free(&padded));
        prop_assert_eq!(padded.n() % k, 0);
        prop_assert!(padded.n() >= g.n() && padded.n() < g.n() + k);
        for v in 0..g.n() {
            prop_assert_eq!(padded.degree(v), g.degree(v));
        }
        for v in g.n()..padded.n() {
            prop_assert_eq!(padded.degree(v), 0);
        }
    }

    #[test]
    fn codegree_at_most_degree(g in graph_strategy(40)) {
        let delta = g.max_degree().map(|(d, _)| d).unwrap_or(0);
        prop_assert!(g.max_codegree() <= delta);
    }

    #[test]
    fn gnp_is_deterministic(n in 0usize..200, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let cfg = GnpConfig::new(n, p, seed);
        let a = gen_gnp(&cfg).unwrap();
        let b = gen_gnp(&cfg).unwrap();
        prop_assert!(symmetric_loop_free(&a));
        prop_assert_eq!(write_edge_list(&a), write_edge_list(&b));
    }

    #[test]
    fn lower_bound_witness_always_refutes(g in graph_strategy(8)) {
        let delta = g.max_degree().map(|(d, _)| d).unwrap_or(0);
        prop_assume!(delta >= 1);
        let witness = lower_bound_partition(&g, delta).unwrap();
        let padded = g.pad_isolated(delta).unwrap();
        prop_assert!(find_strong_coloring(&padded, &witness).unwrap().is_none());
    }

    #[test]
    fn matching_size_survives_relabeling(
        left in 0usize..12,
        extra in 0usize..4,
        p in 0.05f64..0.7,
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::Rng;
        let right = left + extra;
        let mut rng = rng::stream(seed, 0);
        let adj: Vec<Vec<usize>> = (0..left).map(|_| (0..right).filter(|_| rng.gen_bool(p)).collect()).collect();
        let mut lp: Vec<usize> = (0..left).collect();
        let mut rp: Vec<usize> = (0..right).collect();
        lp.shuffle(&mut rng);
        rp.shuffle(&mut rng);
        let mut relabeled = vec![Vec::new(); left];
        for (u, row) in adj.iter().enumerate() {
            relabeled[lp[u]] = row.iter().map(|&v| rp[v]).collect();
        }
        let a = max_matching(&BipartiteGraph::new(right, adj.clone()).unwrap()).len();
        let b = max_matching(&BipartiteGraph::new(right, relabeled).unwrap()).len();
        prop_assert_eq!(a, b);
        // König-Ore: maximum matching = left − max deficiency over subsets.
        let deficiency = (0u32..1 << left).map(|mask| {
            let set: Vec<usize> = (0..left).filter(|&i| mask >> i & 1 == 1).collect();
            let mut nbrs: Vec<usize> = set.iter().flat_map(|&u| adj[u].iter().copied()).collect();
            nbrs.sort_unstable();
            nbrs.dedup();
            set.len().saturating_sub(nbrs.len())
        }).max().unwrap_or(0);
        prop_assert_eq!(a, left - deficiency);
    }

    #[test]
    fn returned_transversals_verify((g, parts, seed) in partitioned(6, 4)) {
        if let Some(t) = greedy_transversal(&g, &parts, DEFAULT_DOMINATION_FRACTION, seed).unwrap() {
            prop_assert!(verify_transversal(&g, &parts, &t));
        }
        if let Some(t) = resampling_transversal(&g, &parts, 2_000, seed).unwrap() {
            prop_assert!(verify_transversal(&g, &parts, &t));
        }
    }

    #[test]
    fn pins_are_kept((g, parts, seed) in partitioned(6, 4), pick in any::<prop::sample::Index>()) {
        let part = pick.index(parts.len());
        let v = parts[part][pick.index(parts[part].len())];
        if let Some(t) = pinned_transversal(&g, &parts, &[(part, v)], 2_000, seed).unwrap() {
            prop_assert!(verify_transversal(&g, &parts, &t));
            prop_assert_eq!(t.get(part), Some(v));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pipeline_never_emits_a_bad_certificate(n in 30usize..120, p in 0.2f64..0.7, seed in any::<u64>()) {
        let (g, parts) = common::dense_instance(n, p, seed);
        let out = decompose_dense(&g, &parts, &DenseConfig::default(), seed).unwrap();
        if let Some(cert) = &out.certificate {
            prop_assert!(verify_certificate(&g, &parts, cert));
        }
    }

    #[test]
    fn exact_certificates_verify(g in graph_strategy(8), k in 1usize..5, seed in any::<u64>()) {
        let padded = g.pad_isolated(k).unwrap();
        let parts = VertexPartition::random(padded.n(), k, seed).unwrap();
        if let Some(cert) = find_strong_coloring(&padded, &parts).unwrap() {
            prop_assert!(verify_certificate(&padded, &parts, &cert));
        }
    }
}
