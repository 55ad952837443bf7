//! Strong colorings: certificates, the dense decomposition pipeline and exact oracles.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexPartition};

mod dense;
pub mod exact;

pub use dense::{decompose_dense, DenseConfig, DenseOutcome, DenseReport, DenseVariant};

/// A proper `k`-coloring in which every color appears exactly once per part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColoringCertificate {
    pub k: usize,
    pub colors: Vec<usize>,
}

impl ColoringCertificate {
    /// Certificate whose color `c` is the `c`-th transversal (`transversals[c][i]` lies in part `i`).
    pub fn from_transversals(n: usize, transversals: &[Vec<usize>]) -> Self {
        let mut colors = vec![usize::MAX; n];
        for (c, t) in transversals.iter().enumerate() {
            for &v in t {
                colors[v] = c;
            }
        }
        Self {
            k: transversals.len(),
            colors,
        }
    }

    /// Vertices of color `c`, in part order of `parts`.
    pub fn color_class(&self, parts: &VertexPartition, c: usize) -> Vec<usize> {
        parts
            .parts()
            .iter()
            .filter_map(|part| part.iter().copied().find(|&v| self.colors[v] == c))
            .collect()
    }
}

/// True iff the coloring is proper and uses every color exactly once in each part.
pub fn verify_certificate(g: &Graph, parts: &VertexPartition, c: &ColoringCertificate) -> bool {
    if c.colors.len() != g.n() || parts.vertex_count() != g.n() || parts.k() != c.k {
        return false;
    }
    if c.colors.iter().any(|&col| col >= c.k) {
        return false;
    }
    if g.edges().any(|(u, v)| c.colors[u] == c.colors[v]) {
        return false;
    }
    parts.parts().iter().all(|part| {
        let mut seen = vec![false; c.k];
        part.iter().all(|&v| !std::mem::replace(&mut seen[c.colors[v]], true))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transversal::{verify_transversal, Transversal};

    #[test]
    fn position_coloring_of_edgeless_graph() {
        let g = Graph::empty(9);
        let parts = VertexPartition::new(3, vec![vec![0, 4, 8], vec![1, 2, 3], vec![5, 6, 7]], 9).unwrap();
        let mut colors = vec![0; 9];
        for part in parts.parts() {
            for (pos, &v) in part.iter().enumerate() {
                colors[v] = pos;
            }
        }
        let cert = ColoringCertificate { k: 3, colors };
        assert!(verify_certificate(&g, &parts, &cert));
        for c in 0..3 {
            let class = Transversal::from_vertices(&cert.color_class(&parts, c));
            assert!(verify_transversal(&g, parts.parts(), &class));
        }
    }

    #[test]
    fn rejects_repeats_improper_and_out_of_range() {
        let g = Graph::path(4);
        let parts = VertexPartition::new(2, vec![vec![0, 3], vec![1, 2]], 4).unwrap();
        let good = ColoringCertificate {
            k: 2,
            colors: vec![0, 1, 0, 1],
        };
        assert!(verify_certificate(&g, &parts, &good));
        let repeated = ColoringCertificate {
            k: 2,
            colors: vec![0, 1, 1, 0],
        };
        assert!(!verify_certificate(
            &Graph::empty(4),
            &parts,
            &ColoringCertificate {
                k: 2,
                colors: vec![0, 0, 1, 0]
            }
        ));
        assert!(!verify_certificate(&g, &parts, &repeated));
        let improper = ColoringCertificate {
            k: 2,
            colors: vec![0, 0, 1, 1],
        };
        assert!(!verify_certificate(&Graph::complete(4), &parts, &improper));
        let range = ColoringCertificate {
            k: 2,
            colors: vec![0, 1, 2, 0],
        };
        assert!(!verify_certificate(&g, &parts, &range));
        let short = ColoringCertificate {
            k: 2,
            colors: vec![0, 1, 1],
        };
        assert!(!verify_certificate(&g, &parts, &short));
    }
}
