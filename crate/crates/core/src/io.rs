//! Canonical file formats.
//!
//! Graphs: an edge list (`n <count>` header, then one `u v` pair per line)
//! or JSON `{"n": .., "edges": [[u, v], ..]}`. Partitions, transversals and
//! certificates are JSON. Writers always emit edges with `u < v` in
//! lexicographic order, so equal graphs produce identical bytes.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coloring::ColoringCertificate;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexPartition};
use crate::transversal::Transversal;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Json,
}

impl GraphFormat {
    /// `.json` files are JSON; anything else is an edge list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => GraphFormat::Json,
            _ => GraphFormat::EdgeList,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("missing `n <count>` header".into()))?;
    let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["n", count] => count
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("bad vertex count: {e}")))?,
        _ => return Err(Error::Parse(format!("expected `n <count>`, found `{header}`"))),
    };
    let mut g = Graph::empty(n);
    for (lineno, line) in lines {
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        match nums.as_slice() {
            [u, v] => g
                .add_edge(*u, *v)
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?,
            _ => return Err(Error::Parse(format!("line {}: expected `u v`", lineno + 1))),
        }
    }
    Ok(g)
}

pub fn write_graph_json(g: &Graph) -> String {
    let doc = GraphJson {
        n: g.n(),
        edges: g.edges().map(|(u, v)| [u, v]).collect(),
    };
    serde_json::to_string(&doc).expect("graph serializes") + "\n"
}

pub fn parse_graph_json(text: &str) -> Result<Graph> {
    let doc: GraphJson = serde_json::from_str(text)?;
    Graph::from_edges(doc.n, doc.edges.into_iter().map(|[u, v]| (u, v)))
}

pub fn write_graph(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::EdgeList => write_edge_list(g),
        GraphFormat::Json => write_graph_json(g),
    }
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(text),
        GraphFormat::Json => parse_graph_json(text),
    }
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(&std::fs::read_to_string(path)?, GraphFormat::from_path(path))
}

#[derive(Serialize, Deserialize)]
struct PartitionJson {
    k: usize,
    parts: Vec<Vec<usize>>,
}

pub fn write_partition(p: &VertexPartition) -> String {
    let doc = PartitionJson {
        k: p.k(),
        parts: p.parts().to_vec(),
    };
    serde_json::to_string(&doc).expect("partition serializes") + "\n"
}

/// Parses a partition and validates it against a graph on `n` vertices.
pub fn parse_partition(text: &str, n: usize) -> Result<VertexPartition> {
    let doc: PartitionJson = serde_json::from_str(text)?;
    VertexPartition::new(doc.k, doc.parts, n)
}

#[derive(Serialize, Deserialize)]
struct TransversalJson {
    choice: BTreeMap<usize, usize>,
}

pub fn write_transversal(t: &Transversal) -> String {
    let doc = TransversalJson {
        choice: t.choice().clone(),
    };
    serde_json::to_string(&doc).expect("transversal serializes") + "\n"
}

pub fn parse_transversal(text: &str) -> Result<Transversal> {
    let doc: TransversalJson = serde_json::from_str(text)?;
    Ok(Transversal::from_choice(doc.choice))
}

pub fn write_certificate(c: &ColoringCertificate) -> String {
    serde_json::to_string(c).expect("certificate serializes") + "\n"
}

pub fn parse_certificate(text: &str) -> Result<ColoringCertificate> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_gnp, GnpConfig};
    use proptest::prelude::*;

    #[test]
    fn edge_list_is_canonical() {
        let g = Graph::from_edges(4, [(3, 1), (0, 2), (1, 0)]).unwrap();
        assert_eq!(write_edge_list(&g), "n 4\n0 1\n0 2\n1 3\n");
        assert_eq!(write_graph_json(&g), "{\"n\":4,\"edges\":[[0,1],[0,2],[1,3]]}\n");
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("4\n0 1\n").is_err());
        assert!(parse_edge_list("n 3\n0 3\n").is_err());
        assert!(parse_edge_list("n 3\n1 1\n").is_err());
        assert!(parse_edge_list("n 3\n0 1 2\n").is_err());
        assert!(parse_graph_json("{\"n\":2,\"edges\":[[0,2]]}").is_err());
        assert!(parse_partition("{\"k\":2,\"parts\":[[0,1],[1,2]]}", 4).is_err());
    }

    #[test]
    fn partition_and_transversal_formats() {
        let p = VertexPartition::new(2, vec![vec![0, 3], vec![1, 2]], 4).unwrap();
        let text = write_partition(&p);
        assert_eq!(text, "{\"k\":2,\"parts\":[[0,3],[1,2]]}\n");
        assert_eq!(parse_partition(&text, 4).unwrap(), p);
        let t = Transversal::from_choice(BTreeMap::from([(0, 3), (1, 2)]));
        let text = write_transversal(&t);
        assert_eq!(text, "{\"choice\":{\"0\":3,\"1\":2}}\n");
        assert_eq!(parse_transversal(&text).unwrap(), t);
    }

    proptest! {
        #[test]
        fn graph_formats_round_trip_bit_exactly(n in 0usize..40, p in 0.0f64..1.0, seed in any::<u64>()) {
            let g = gen_gnp(&GnpConfig::new(n, p, seed)).unwrap();
            for format in [GraphFormat::EdgeList, GraphFormat::Json] {
                let text = write_graph(&g, format);
                let back = parse_graph(&text, format).unwrap();
                prop_assert_eq!(&back, &g);
                prop_assert_eq!(write_graph(&back, format), text);
            }
        }
    }
}
