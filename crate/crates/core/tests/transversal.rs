mod common;

use rand::Rng;
use schrom::graph::{gen_gnp, GnpConfig};
use schrom::rng;
use schrom::transversal::{
    greedy_transversal, pinned_transversal, resampling_transversal, sparse_transversal, verify_transversal,
    SparseConfig, DEFAULT_DOMINATION_FRACTION,
};
use schrom::Error;

use common::{brute_force_transversal_exists, local_lemma_instance, tiny_multipartite};

#[test]
fn no_algorithm_invents_a_transversal() {
    let mut rng = rng::stream(31, 0);
    let (mut infeasible, mut found_when_feasible, mut feasible) = (0, 0, 0);
    for i in 0..200u64 {
        let r = rng.gen_range(2..=5);
        let size = rng.gen_range(1..=4);
        let p = rng.gen_range(0.2..0.95);
        let (g, parts) = tiny_multipartite(&mut rng, r, size, p);
        assert!(g.n() <= 20);
        let exists = brute_force_transversal_exists(&g, &parts);
        let greedy = greedy_transversal(&g, &parts, DEFAULT_DOMINATION_FRACTION, i).unwrap();
        let lll = resampling_transversal(&g, &parts, 100_000, i).unwrap();
        let sparse = match sparse_transversal(&g, &parts, &SparseConfig::default(), i) {
            Ok(out) => out.transversal,
            Err(Error::Precondition(_)) | Err(Error::Invariant(_)) => None,
            Err(e) => panic!("{e}"),
        };
        for t in [&greedy, &lll, &sparse].into_iter().flatten() {
            assert!(verify_transversal(&g, &parts, t));
        }
        if exists {
            feasible += 1;
            found_when_feasible += usize::from(lll.is_some());
        } else {
            infeasible += 1;
            assert!(greedy.is_none() && lll.is_none() && sparse.is_none());
        }
    }
    assert!(
        infeasible >= 20,
        "suite should contain infeasible instances, got {infeasible}"
    );
    // Resampling with a large cap finds a transversal whenever one exists.
    assert!(
        found_when_feasible as f64 >= 0.99 * feasible as f64,
        "{found_when_feasible}/{feasible}"
    );
}

#[test]
fn greedy_against_exhaustive_oracle() {
    let mut rng = rng::stream(5, 0);
    let (mut exists, mut greedy_ok) = (0, 0);
    for i in 0..50u64 {
        let r = rng.gen_range(2..=6);
        let p = rng.gen_range(0.1..0.5);
        let (g, parts) = tiny_multipartite(&mut rng, r, 3, p);
        let oracle = brute_force_transversal_exists(&g, &parts);
        let t = greedy_transversal(&g, &parts, DEFAULT_DOMINATION_FRACTION, i).unwrap();
        if let Some(t) = &t {
            assert!(oracle);
            assert!(verify_transversal(&g, &parts, t));
        }
        exists += usize::from(oracle);
        greedy_ok += usize::from(t.is_some());
    }
    println!("greedy found {greedy_ok} of {exists} existing transversals");
}

#[test]
fn resampling_in_local_lemma_regime() {
    let mut rng = rng::stream(77, 0);
    let mut successes = 0;
    for i in 0..100u64 {
        let r = rng.gen_range(2..=10);
        let d = rng.gen_range(1..=4);
        let (g, parts) = local_lemma_instance(&mut rng, r, d);
        let (delta, _) = g.max_degree().unwrap();
        let bound = (2.0 * std::f64::consts::E * delta as f64).ceil() as usize;
        assert!(parts.iter().all(|p| p.len() >= bound));
        let cap = 100 * g.edge_count() as u64;
        if let Some(t) = resampling_transversal(&g, &parts, cap.max(1), i).unwrap() {
            assert!(verify_transversal(&g, &parts, &t));
            successes += 1;
        }
    }
    assert!(successes >= 95, "{successes}/100");
}

#[test]
fn pinned_through_max_degree_vertex() {
    for seed in 0..20u64 {
        let (g, parts) = common::dense_instance(120, 0.3, seed);
        let (_, argmax) = g.max_degree().unwrap();
        let x = argmax[0];
        let part = parts.part_index()[x];
        let t = pinned_transversal(&g, parts.parts(), &[(part, x)], 10_000, seed)
            .unwrap()
            .expect("room to spare at k = Δ+1");
        assert!(verify_transversal(&g, parts.parts(), &t));
        assert_eq!(t.get(part), Some(x));
    }
}

#[test]
fn sparse_on_sparse_random_graphs() {
    let (mut ok, mut absent, mut aborted) = (0, 0, 0);
    for seed in 0..20u64 {
        let g = gen_gnp(&GnpConfig::new(2000, 0.01, seed)).unwrap();
        let (delta, _) = g.max_degree().unwrap();
        let size = (1.2 * delta as f64).ceil() as usize;
        let parts: Vec<Vec<usize>> = (0..2000 / size).map(|i| (i * size..(i + 1) * size).collect()).collect();
        match sparse_transversal(&g, &parts, &SparseConfig::default(), seed) {
            Ok(out) => match out.transversal {
                Some(t) => {
                    assert!(verify_transversal(&g, &parts, &t));
                    ok += 1;
                }
                None => absent += 1,
            },
            // The clique-completion bound on |B_i| is checked at run time and may fail at this n.
            Err(Error::Invariant(_)) => aborted += 1,
            Err(e) => panic!("{e}"),
        }
    }
    println!("sparse: {ok} verified, {absent} absent, {aborted} aborted on the |B_i| bound, of 20");
    assert!(ok > 0);
}
