//! Medial construction: the shadow whose black graph is a given plane graph.
//!
//! Every corner of the plane graph (vertex `u`, position `i` in its rotation:
//! the gap between `rot[u][i]` and `rot[u][i + 1]`) becomes an arc, and every
//! edge a precrossing. For edge `x` with end 0 at `a` and end 1 at `b` the
//! slots are, counterclockwise: the corner entering `(x, 1)` at `b`, the corner
//! leaving `(x, 0)` at `a`, the corner entering `(x, 0)` at `a`, the corner
//! leaving `(x, 1)` at `b`. Quadrants 1 and 3 then sit inside `a` and `b`.

use thiserror::Error;

use super::PlaneGraph;
use crate::shadow::{Shadow, ShadowError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MedialError {
    #[error("a plane graph without edges has no medial shadow")]
    NoEdges,
    #[error(transparent)]
    Shadow(#[from] ShadowError),
}

pub fn medial(pg: &PlaneGraph) -> Result<Shadow, MedialError> {
    let g = pg.graph();
    if g.edge_count() == 0 {
        return Err(MedialError::NoEdges);
    }
    let rot = &pg.rotation().0;
    // position of every edge-end in its vertex's rotation
    let mut at = vec![(0usize, 0usize); g.edge_capacity() * 2];
    for (u, cycle) in rot.iter().enumerate() {
        for (i, h) in cycle.iter().enumerate() {
            at[h.slot()] = (u, i);
        }
    }
    let corner = |u: usize, i: usize| (u, i % rot[u].len());
    let pred = |u: usize, i: usize| (u, (i + rot[u].len() - 1) % rot[u].len());
    let mut raw = Vec::with_capacity(g.edge_count());
    for x in g.edge_ids() {
        let (a, i0) = at[x.0 * 2];
        let (b, i1) = at[x.0 * 2 + 1];
        raw.push([pred(b, i1), corner(a, i0), pred(a, i0), corner(b, i1)]);
    }
    // corners numbered by first appearance, starting at 1
    let mut label = std::collections::HashMap::new();
    let crossings = raw
        .iter()
        .map(|quad| {
            quad.map(|k| {
                let next = label.len() as u32 + 1;
                *label.entry(k).or_insert(next)
            })
        })
        .collect();
    Ok(Shadow::new(crossings)?)
}
