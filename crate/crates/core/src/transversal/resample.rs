use std::collections::BTreeSet;

use rand::Rng as _;

use super::{validate_parts, verify_transversal, Transversal};
use crate::error::Result;
use crate::graph::Graph;
use crate::rng;

/// Result of a resampling run together with the work it took.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResampleRun {
    pub transversal: Option<Transversal>,
    pub resamples: u64,
}

/// Local-lemma style search: pick a uniform vertex in every part and, while
/// two picks are adjacent, redraw both of their parts. Gives up after `cap`
/// redraws. Returns `None` immediately when some part is empty.
pub fn resampling_transversal(g: &Graph, parts: &[Vec<usize>], cap: u64, seed: u64) -> Result<Option<Transversal>> {
    Ok(resampling_transversal_with_stats(g, parts, cap, seed)?.transversal)
}

pub fn resampling_transversal_with_stats(g: &Graph, parts: &[Vec<usize>], cap: u64, seed: u64) -> Result<ResampleRun> {
    validate_parts(g, parts)?;
    if parts.iter().any(Vec::is_empty) {
        return Ok(ResampleRun {
            transversal: None,
            resamples: 0,
        });
    }
    let mut rng = rng::stream(seed, rng::streams::PIPELINE);
    let r = parts.len();
    let mut pick: Vec<usize> = parts.iter().map(|p| p[rng.gen_range(0..p.len())]).collect();
    // conflicts[i] = number of other parts whose pick is adjacent to pick[i]
    let mut conflicts = vec![0usize; r];
    for i in 0..r {
        for j in i + 1..r {
            if g.has_edge(pick[i], pick[j]) {
                conflicts[i] += 1;
                conflicts[j] += 1;
            }
        }
    }
    let mut bad: BTreeSet<usize> = (0..r).filter(|&i| conflicts[i] > 0).collect();
    let mut resamples = 0u64;

    let redraw =
        |i: usize, pick: &mut Vec<usize>, conflicts: &mut Vec<usize>, bad: &mut BTreeSet<usize>, rng: &mut rng::Rng| {
            let old = pick[i];
            let new = parts[i][rng.gen_range(0..parts[i].len())];
            if old == new {
                return;
            }
            for j in (0..r).filter(|&j| j != i) {
                let before = g.has_edge(old, pick[j]);
                let after = g.has_edge(new, pick[j]);
                if before == after {
                    continue;
                }
                if before {
                    conflicts[i] -= 1;
                    conflicts[j] -= 1;
                    if conflicts[j] == 0 {
                        bad.remove(&j);
                    }
                } else {
                    conflicts[i] += 1;
                    conflicts[j] += 1;
                    bad.insert(j);
                }
            }
            pick[i] = new;
            if conflicts[i] == 0 {
                bad.remove(&i);
            } else {
                bad.insert(i);
            }
        };

    while let Some(&a) = bad.first() {
        if resamples >= cap {
            return Ok(ResampleRun {
                transversal: None,
                resamples,
            });
        }
        let b = (0..r)
            .find(|&j| j != a && g.has_edge(pick[a], pick[j]))
            .expect("bad part has an adjacent pick");
        redraw(a, &mut pick, &mut conflicts, &mut bad, &mut rng);
        redraw(b, &mut pick, &mut conflicts, &mut bad, &mut rng);
        resamples += 1;
    }
    let t = Transversal::from_vertices(&pick);
    assert!(
        verify_transversal(g, parts, &t),
        "resampling produced an invalid transversal"
    );
    Ok(ResampleRun {
        transversal: Some(t),
        resamples,
    })
}
