mod common;

use rand::Rng;
use schrom::matching::{max_matching, perfect_matching_or_violator, BipartiteGraph, MatchingResult};
use schrom::rng;

use common::max_flow;

fn random_instance(rng: &mut schrom::rng::Rng, max_side: usize) -> (usize, usize, Vec<Vec<usize>>) {
    let left = rng.gen_range(0..=max_side);
    let right = rng.gen_range(left..=max_side.max(left));
    let p: f64 = rng.gen_range(0.05..0.6);
    let adj = (0..left)
        .map(|_| (0..right).filter(|_| rng.gen_bool(p)).collect())
        .collect();
    (left, right, adj)
}

#[test]
fn matching_size_equals_max_flow() {
    let mut rng = rng::stream(2024, 0);
    for _ in 0..100 {
        let (left, right, adj) = random_instance(&mut rng, 30);
        let h = BipartiteGraph::new(right, adj.clone()).unwrap();
        let m = max_matching(&h);
        assert_eq!(m.len(), max_flow(left, right, &adj));
        let mut used = vec![false; right];
        for &(l, r) in &m {
            assert!(adj[l].contains(&r));
            assert!(!std::mem::replace(&mut used[r], true));
        }
    }
}

#[test]
fn violators_recheck_and_perfect_matchings_are_valid() {
    let mut rng = rng::stream(7, 0);
    let (mut perfect, mut violated) = (0, 0);
    for _ in 0..200 {
        let (left, right, adj) = random_instance(&mut rng, 25);
        let h = BipartiteGraph::new(right, adj.clone()).unwrap();
        match perfect_matching_or_violator(&h).unwrap() {
            MatchingResult::Perfect(m) => {
                perfect += 1;
                assert_eq!(m.len(), left);
                let mut seen = vec![false; right];
                for (l, &r) in m.iter().enumerate() {
                    assert!(adj[l].contains(&r));
                    assert!(!std::mem::replace(&mut seen[r], true));
                }
            }
            MatchingResult::Violator(s) => {
                violated += 1;
                assert!(h.is_hall_violator(&s));
                assert!(h.neighborhood(&s).len() < s.len());
            }
        }
    }
    assert!(perfect > 10 && violated > 10, "{perfect} perfect, {violated} violated");
}

/// Hall's theorem by subset enumeration on small left sides.
#[test]
fn perfect_matching_iff_no_violating_subset() {
    let mut rng = rng::stream(99, 0);
    for _ in 0..150 {
        let (left, right, adj) = random_instance(&mut rng, 10);
        let h = BipartiteGraph::new(right, adj.clone()).unwrap();
        let hall_holds = (0u32..1 << left).all(|mask| {
            let set: Vec<usize> = (0..left).filter(|&i| mask >> i & 1 == 1).collect();
            let mut nbrs: Vec<usize> = set.iter().flat_map(|&u| adj[u].iter().copied()).collect();
            nbrs.sort_unstable();
            nbrs.dedup();
            nbrs.len() >= set.len()
        });
        let result = perfect_matching_or_violator(&h).unwrap();
        assert_eq!(matches!(result, MatchingResult::Perfect(_)), hall_holds);
    }
}

#[test]
fn more_left_than_right_is_a_domain_error() {
    let h = BipartiteGraph::new(1, vec![vec![0], vec![0]]).unwrap();
    assert!(matches!(
        perfect_matching_or_violator(&h),
        Err(schrom::Error::Domain(_))
    ));
    assert_eq!(max_matching(&h).len(), 1);
}
