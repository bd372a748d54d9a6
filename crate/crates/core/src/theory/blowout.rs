//! Blowouts: split a vertex in two and join the halves by `n` new edges.
//!
//! Sequences are found backwards. Collapsing two adjacent vertices (removing
//! every edge between them) undoes one blowout, so a sequence of collapses
//! down to one vertex, read in reverse, builds the graph up again. Collapses
//! are tracked as merges of groups of original vertices.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::trees::TreePair;
use crate::multigraph::{EdgeId, GraphError, Multigraph, VertexId};
use crate::planegraph::{find_embedding, is_planar, EdgeEnd, EmbeddingError, PlaneGraph};

/// Split `vertex`: the listed edge-ends move to a new vertex (id
/// `vertex_count`), then `n` edges join the two halves, appended in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowoutStep {
    pub vertex: VertexId,
    pub split: Vec<EdgeEnd>,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowoutError {
    #[error("a blowout adds at least one edge")]
    NoNewEdges,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("edge-end {0:?} is not at the split vertex")]
    ForeignEnd(EdgeEnd),
    #[error("edge-end {0:?} listed twice")]
    RepeatedEnd(EdgeEnd),
    #[error("the blown-up graph is not planar")]
    NotPlanar,
    #[error("loops cannot be created by blowouts")]
    HasLoop,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertices {0} and {1} are already merged")]
    AlreadyMerged(VertexId, VertexId),
    #[error("no edge joins the groups of {0} and {1}")]
    NotAdjacent(VertexId, VertexId),
    #[error("merges leave {0} groups")]
    Incomplete(usize),
    #[error("wheels need at least three spokes")]
    SmallWheel,
}

pub fn blowout(g: &Multigraph, step: &BlowoutStep) -> Result<Multigraph, BlowoutError> {
    if step.n == 0 {
        return Err(BlowoutError::NoNewEdges);
    }
    if step.vertex.0 >= g.vertex_count() {
        return Err(GraphError::UnknownVertex(step.vertex).into());
    }
    let mut slots = g.slots().to_vec();
    let fresh = g.vertex_count();
    let mut seen = HashSet::new();
    for &h in &step.split {
        let slot = slots
            .get_mut(h.edge.0)
            .and_then(|s| s.as_mut())
            .ok_or(BlowoutError::Graph(GraphError::UnknownEdge(h.edge)))?;
        if !seen.insert(h) {
            return Err(BlowoutError::RepeatedEnd(h));
        }
        if h.end > 1 || slot[usize::from(h.end)] != step.vertex.0 {
            return Err(BlowoutError::ForeignEnd(h));
        }
        slot[usize::from(h.end)] = fresh;
    }
    slots.extend((0..step.n).map(|_| Some([step.vertex.0, fresh])));
    let out = Multigraph::from_slots(fresh + 1, slots)?;
    if !is_planar(&out) {
        return Err(BlowoutError::NotPlanar);
    }
    Ok(out)
}

/// Applies `steps` to a single vertex.
pub fn replay_blowouts(steps: &[BlowoutStep]) -> Result<Multigraph, BlowoutError> {
    let mut g = Multigraph::new(1)?;
    for step in steps {
        g = blowout(&g, step)?;
    }
    Ok(g)
}

/// A build sequence together with the collapses it undoes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowoutSequence {
    pub steps: Vec<BlowoutStep>,
    /// Collapses in the order they were applied to the original graph, as
    /// pairs of original vertices from the two merged groups.
    pub merges: Vec<(VertexId, VertexId)>,
    /// For each step, the original edges it creates (ascending).
    pub new_edges: Vec<Vec<EdgeId>>,
}

impl BlowoutSequence {
    pub fn sizes(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.n).collect()
    }

    /// With every step of size two, the first new edge of each step spans one
    /// tree and the second the other.
    pub fn induced_tree_pair(&self) -> Option<TreePair> {
        if self.new_edges.iter().any(|es| es.len() != 2) {
            return None;
        }
        Some(TreePair::new(
            self.new_edges.iter().map(|es| es[0]).collect(),
            self.new_edges.iter().map(|es| es[1]).collect(),
        ))
    }
}

fn check_collapsible(g: &Multigraph) -> Result<(), BlowoutError> {
    if g.edges().any(|(_, u, w)| u == w) {
        return Err(BlowoutError::HasLoop);
    }
    if !g.is_connected() {
        return Err(BlowoutError::Disconnected);
    }
    if !is_planar(g) {
        return Err(BlowoutError::NotPlanar);
    }
    Ok(())
}

/// Original edges between the groups labelled `a` and `b`.
fn edges_between(g: &Multigraph, group: &[usize], a: usize, b: usize) -> Vec<EdgeId> {
    g.edges()
        .filter(|&(_, u, w)| {
            let (x, y) = (group[u.0], group[w.0]);
            (x, y) == (a, b) || (x, y) == (b, a)
        })
        .map(|(e, _, _)| e)
        .collect()
}

/// Turns collapses of `g`, given as pairs of original vertices, into the
/// blowout sequence that rebuilds `g` (up to isomorphism).
pub fn blowout_sequence_from_merges(
    g: &Multigraph,
    merges: &[(VertexId, VertexId)],
) -> Result<BlowoutSequence, BlowoutError> {
    check_collapsible(g)?;
    let n = g.vertex_count();
    // group[v] = current group label; groups are named by a member
    let mut group: Vec<usize> = (0..n).collect();
    // for each merge: the two halves and the removed edges
    let mut history: Vec<(Vec<usize>, Vec<usize>, Vec<EdgeId>)> = Vec::new();
    for &(x, y) in merges {
        for v in [x, y] {
            if v.0 >= n {
                return Err(GraphError::UnknownVertex(v).into());
            }
        }
        let (a, b) = (group[x.0], group[y.0]);
        if a == b {
            return Err(BlowoutError::AlreadyMerged(x, y));
        }
        let between = edges_between(g, &group, a, b);
        if between.is_empty() {
            return Err(BlowoutError::NotAdjacent(x, y));
        }
        let side_a: Vec<usize> = (0..n).filter(|&v| group[v] == a).collect();
        let side_b: Vec<usize> = (0..n).filter(|&v| group[v] == b).collect();
        for &v in &side_b {
            group[v] = a;
        }
        history.push((side_a, side_b, between));
    }
    let left = (0..n).filter(|&v| group[v] == v).count();
    if left != 1 {
        return Err(BlowoutError::Incomplete(left));
    }

    // replay forwards, tracking which built vertex holds each original vertex
    // and which built edge (and whether reversed) stands for each original edge
    let mut built = Multigraph::new(1)?;
    let mut at = vec![0usize; n];
    let mut edge_map: Vec<Option<(EdgeId, u8)>> = vec![None; g.edge_capacity()];
    let mut steps = Vec::with_capacity(history.len());
    let mut new_edges = Vec::with_capacity(history.len());
    for (side_a, side_b, between) in history.into_iter().rev() {
        let vertex = at[side_a[0]];
        let moving: HashSet<usize> = side_b.iter().copied().collect();
        let mut split = Vec::new();
        for (e, u, w) in g.edges() {
            let Some((b, flip)) = edge_map[e.0] else { continue };
            for (end, orig) in [(0u8, u), (1, w)] {
                if moving.contains(&orig.0) {
                    split.push(EdgeEnd::new(b, end ^ flip));
                }
            }
        }
        split.sort_unstable_by_key(|h| (h.edge, h.end));
        let step = BlowoutStep {
            vertex: VertexId(vertex),
            split,
            n: between.len(),
        };
        let base = built.edge_capacity();
        built = blowout(&built, &step)?;
        for &v in &side_b {
            at[v] = built.vertex_count() - 1;
        }
        for (k, &e) in between.iter().enumerate() {
            let (u, _) = g.endpoints(e)?;
            edge_map[e.0] = Some((EdgeId(base + k), u8::from(moving.contains(&u.0))));
        }
        steps.push(step);
        new_edges.push(between);
    }
    Ok(BlowoutSequence {
        steps,
        merges: merges.to_vec(),
        new_edges,
    })
}

/// Some blowout sequence building `g`: collapse along the lowest live edge
/// until one vertex is left.
pub fn find_blowout_sequence(g: &Multigraph) -> Result<BlowoutSequence, BlowoutError> {
    check_collapsible(g)?;
    let mut group: Vec<usize> = (0..g.vertex_count()).collect();
    let mut merges = Vec::new();
    while let Some((_, u, w)) = g.edges().find(|(_, u, w)| group[u.0] != group[w.0]) {
        merges.push((u, w));
        let (a, b) = (group[u.0], group[w.0]);
        for x in group.iter_mut() {
            if *x == b {
                *x = a;
            }
        }
    }
    blowout_sequence_from_merges(g, &merges)
}

/// A sequence of blowouts that each add exactly two edges, if any exists.
/// Searches collapses of pairs of groups joined by exactly two edges.
pub fn find_2blowout_sequence(g: &Multigraph) -> Result<Option<BlowoutSequence>, BlowoutError> {
    check_collapsible(g)?;
    let n = g.vertex_count();
    if g.edge_count() != 2 * (n - 1) {
        return Ok(None);
    }
    fn go(
        g: &Multigraph,
        group: &mut Vec<usize>,
        merges: &mut Vec<(VertexId, VertexId)>,
        dead: &mut HashSet<Vec<usize>>,
    ) -> bool {
        let labels: Vec<usize> = (0..group.len()).filter(|&v| group[v] == v).collect();
        if labels.len() == 1 {
            return true;
        }
        if dead.contains(group) {
            return false;
        }
        for (i, &a) in labels.iter().enumerate() {
            for &b in &labels[i + 1..] {
                if edges_between(g, group, a, b).len() != 2 {
                    continue;
                }
                let saved = group.clone();
                for x in group.iter_mut() {
                    if *x == b {
                        *x = a;
                    }
                }
                merges.push((VertexId(a), VertexId(b)));
                if go(g, group, merges, dead) {
                    return true;
                }
                merges.pop();
                *group = saved;
            }
        }
        dead.insert(group.clone());
        false
    }
    let mut group: Vec<usize> = (0..n).collect();
    let mut merges = Vec::new();
    if !go(g, &mut group, &mut merges, &mut HashSet::new()) {
        return Ok(None);
    }
    blowout_sequence_from_merges(g, &merges).map(Some)
}

/// The wheel with `n` spokes and its standard tree pair: spokes `1..n` plus
/// the rim edge closing at vertex 1, against spoke 0 plus the rim path.
pub fn wheel(n: usize) -> Result<(PlaneGraph, TreePair), BlowoutError> {
    if n < 3 {
        return Err(BlowoutError::SmallWheel);
    }
    let g = crate::multigraph::named::wheel(n);
    let pg = find_embedding(&g).map_err(|e| match e {
        EmbeddingError::Graph(ge) => BlowoutError::Graph(ge),
        _ => BlowoutError::NotPlanar,
    })?;
    let t1 = (1..n).chain([2 * n - 1]).map(EdgeId).collect();
    let t2 = [0].into_iter().chain(n..2 * n - 1).map(EdgeId).collect();
    Ok((pg, TreePair::new(t1, t2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::{enumerate_connected_by_edges, named};
    use crate::solver::{Outcome, Solver};
    use crate::theory::find_edge_disjoint_spanning_trees;

    fn v(i: usize) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn basic_blowouts() {
        let single = Multigraph::new(1).unwrap();
        let two = blowout(&single, &BlowoutStep { vertex: v(0), split: vec![], n: 2 }).unwrap();
        assert_eq!(two.certificate(), named::dipole(2).certificate());

        let step = BlowoutStep {
            vertex: v(0),
            split: vec![EdgeEnd::new(EdgeId(1), 0)],
            n: 2,
        };
        let g = blowout(&two, &step).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 4));
        let doubled_path_closed =
            Multigraph::from_edges(3, &[(0, 1), (0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(g.certificate(), doubled_path_closed.certificate());
        find_edge_disjoint_spanning_trees(&g).unwrap().validate(&g).unwrap();
    }

    #[test]
    fn blowout_errors() {
        let d = named::dipole(2);
        let zero = BlowoutStep { vertex: v(0), split: vec![], n: 0 };
        assert_eq!(blowout(&d, &zero), Err(BlowoutError::NoNewEdges));
        let foreign = BlowoutStep { vertex: v(0), split: vec![EdgeEnd::new(EdgeId(0), 1)], n: 1 };
        assert_eq!(blowout(&d, &foreign), Err(BlowoutError::ForeignEnd(EdgeEnd::new(EdgeId(0), 1))));
        let twice = BlowoutStep {
            vertex: v(0),
            split: vec![EdgeEnd::new(EdgeId(0), 0), EdgeEnd::new(EdgeId(0), 0)],
            n: 1,
        };
        assert!(matches!(blowout(&d, &twice), Err(BlowoutError::RepeatedEnd(_))));
        // K3,3 with one edge contracted, split back open
        let g = Multigraph::from_edges(5, &[(0, 3), (0, 4), (0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4)]).unwrap();
        assert!(is_planar(&g));
        let k33 = BlowoutStep {
            vertex: v(0),
            split: vec![EdgeEnd::new(EdgeId(2), 0), EdgeEnd::new(EdgeId(3), 0)],
            n: 1,
        };
        assert_eq!(blowout(&g, &k33), Err(BlowoutError::NotPlanar));
        assert_eq!(find_blowout_sequence(&named::bouquet(1)), Err(BlowoutError::HasLoop));
        assert_eq!(find_blowout_sequence(&named::complete(5)), Err(BlowoutError::NotPlanar));
        assert_eq!(wheel(2), Err(BlowoutError::SmallWheel));
    }

    #[test]
    fn simple_sequences() {
        assert_eq!(find_blowout_sequence(&named::dipole(2)).unwrap().sizes(), vec![2]);
        assert_eq!(find_blowout_sequence(&named::theta()).unwrap().sizes(), vec![3]);
        assert_eq!(find_2blowout_sequence(&named::dipole(2)).unwrap().unwrap().sizes(), vec![2]);
        assert_eq!(find_2blowout_sequence(&named::theta()).unwrap(), None);
        let tri = Multigraph::from_edges(3, &[(0, 1), (0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(find_2blowout_sequence(&tri).unwrap().unwrap().sizes(), vec![2, 2]);
    }

    #[test]
    fn square_with_two_doubled_sides_has_two_shapes() {
        // 0-1 and 2-3 doubled, 1-2 and 3-0 single
        let g = Multigraph::from_edges(4, &[(0, 1), (0, 1), (1, 2), (2, 3), (2, 3), (3, 0)]).unwrap();
        let even = blowout_sequence_from_merges(&g, &[(v(0), v(1)), (v(2), v(3)), (v(1), v(2))]).unwrap();
        assert_eq!(even.sizes(), vec![2, 2, 2]);
        let lop = blowout_sequence_from_merges(&g, &[(v(1), v(2)), (v(3), v(0)), (v(0), v(1))]).unwrap();
        assert_eq!(lop.sizes(), vec![4, 1, 1]);
        for s in [&even, &lop] {
            assert_eq!(replay_blowouts(&s.steps).unwrap().certificate(), g.certificate());
        }
        even.induced_tree_pair().unwrap().validate(&g).unwrap();
        assert_eq!(lop.induced_tree_pair(), None);
    }

    #[test]
    fn merge_errors() {
        let g = named::path(3);
        assert_eq!(
            blowout_sequence_from_merges(&g, &[(v(0), v(2))]),
            Err(BlowoutError::NotAdjacent(v(0), v(2)))
        );
        assert_eq!(
            blowout_sequence_from_merges(&g, &[(v(0), v(1)), (v(1), v(0))]),
            Err(BlowoutError::AlreadyMerged(v(1), v(0)))
        );
        assert_eq!(blowout_sequence_from_merges(&g, &[(v(0), v(1))]), Err(BlowoutError::Incomplete(2)));
    }

    #[test]
    fn sequences_replay_to_the_input() {
        for level in enumerate_connected_by_edges(usize::MAX, 7, false) {
            for g in level.iter().filter(|g| is_planar(g)) {
                let s = find_blowout_sequence(g).unwrap();
                assert_eq!(replay_blowouts(&s.steps).unwrap().certificate(), g.certificate(), "{g}");
                if let Some(t) = find_2blowout_sequence(g).unwrap() {
                    assert_eq!(replay_blowouts(&t.steps).unwrap().certificate(), g.certificate());
                    t.induced_tree_pair().unwrap().validate(g).unwrap();
                }
            }
        }
    }

    #[test]
    fn wheels() {
        let solver = Solver::new();
        for n in 3..=5 {
            let (pg, pair) = wheel(n).unwrap();
            let g = pg.graph();
            assert_eq!((g.vertex_count(), g.edge_count()), (n + 1, 2 * n));
            pair.validate(g).unwrap();
            if n <= 4 {
                assert_eq!(solver.outcome(g).unwrap(), Outcome::P);
            }
        }
    }
}
