use super::{
    greedy_transversal, resampling_transversal, validate_parts, verify_transversal, Transversal,
    DEFAULT_DOMINATION_FRACTION,
};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Independent transversal containing every pin `(part, vertex)`.
///
/// Pinned parts shrink to their pin and pin neighbors leave every other
/// part; the residual is solved by [`resampling_transversal`] with `cap`
/// redraws, then by [`greedy_transversal`] if that gives up.
pub fn pinned_transversal(
    g: &Graph,
    parts: &[Vec<usize>],
    pins: &[(usize, usize)],
    cap: u64,
    seed: u64,
) -> Result<Option<Transversal>> {
    validate_parts(g, parts)?;
    let mut pinned: Vec<Option<usize>> = vec![None; parts.len()];
    for &(part, v) in pins {
        let members = parts
            .get(part)
            .ok_or_else(|| Error::Domain(format!("pin names part {part} of {}", parts.len())))?;
        if !members.contains(&v) {
            return Err(Error::Domain(format!("pinned vertex {v} is not in part {part}")));
        }
        if pinned[part].replace(v).is_some() {
            return Err(Error::Domain(format!("part {part} pinned twice")));
        }
    }
    let pin_vertices: Vec<usize> = pinned.iter().flatten().copied().collect();
    if !g.is_independent(&pin_vertices) {
        return Err(Error::Domain("pins are not mutually non-adjacent".into()));
    }

    let mut blocked = vec![0u64; g.words_per_row()];
    for &v in &pin_vertices {
        for (b, r) in blocked.iter_mut().zip(g.row(v)) {
            *b |= r;
        }
    }
    let residual: Vec<Vec<usize>> = parts
        .iter()
        .zip(&pinned)
        .map(|(part, pin)| match pin {
            Some(v) => vec![*v],
            None => part
                .iter()
                .copied()
                .filter(|&u| !crate::bitset::test(&blocked, u))
                .collect(),
        })
        .collect();
    if residual.iter().any(Vec::is_empty) {
        return Ok(None);
    }

    let found = match resampling_transversal(g, &residual, cap, seed)? {
        Some(t) => Some(t),
        None => greedy_transversal(g, &residual, DEFAULT_DOMINATION_FRACTION, seed)?,
    };
    Ok(found.inspect(|t| {
        assert!(
            verify_transversal(g, parts, t),
            "pinned transversal failed verification"
        );
        assert!(pins.iter().all(|&(p, v)| t.get(p) == Some(v)), "pin dropped");
    }))
}
