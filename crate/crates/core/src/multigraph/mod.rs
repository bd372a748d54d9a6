//! Abstract multigraph kernel.
//!
//! A [`Multigraph`] is a vertex count plus a list of unordered endpoint pairs.
//! Loops and parallel edges are first-class. Edge ids are positions in the
//! original edge list: deleting or contracting an edge leaves a tombstone so
//! every other edge keeps its id, which is what lets a game history name the
//! precrossings of the shadow it started from. Vertex ids stay dense and are
//! renumbered by contraction.

mod canon;
mod enumerate;
mod mgf;

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use canon::IsoCertificate;
pub use enumerate::{enumerate_connected, enumerate_connected_by_edges};
pub use mgf::MgfError;

/// Dense vertex index within one graph value.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

/// Stable edge index: the position of the edge in the original edge list.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("cannot contract loop {0}")]
    ContractLoop(EdgeId),
    #[error("a graph needs at least one vertex")]
    NoVertices,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<Option<[usize; 2]>>,
}

impl Multigraph {
    /// Edgeless graph on `vertex_count` vertices.
    pub fn new(vertex_count: usize) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::NoVertices);
        }
        Ok(Multigraph {
            vertex_count,
            edges: Vec::new(),
        })
    }

    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Multigraph::new(vertex_count)?;
        for &(u, w) in edges {
            g.add_edge(VertexId(u), VertexId(w))?;
        }
        Ok(g)
    }

    /// Builds a graph whose edge slots may contain tombstones.
    pub fn from_slots(vertex_count: usize, slots: Vec<Option<[usize; 2]>>) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::NoVertices);
        }
        for ends in slots.iter().flatten() {
            for &x in ends {
                if x >= vertex_count {
                    return Err(GraphError::UnknownVertex(VertexId(x)));
                }
            }
        }
        Ok(Multigraph {
            vertex_count,
            edges: slots,
        })
    }

    fn check_vertex(&self, x: VertexId) -> Result<(), GraphError> {
        if x.0 >= self.vertex_count {
            return Err(GraphError::UnknownVertex(x));
        }
        Ok(())
    }

    pub fn add_edge(&mut self, u: VertexId, w: VertexId) -> Result<EdgeId, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(w)?;
        self.edges.push(Some([u.0, w.0]));
        Ok(EdgeId(self.edges.len() - 1))
    }

    /// Appends a fresh isolated vertex.
    pub fn add_vertex(&mut self) -> VertexId {
        self.vertex_count += 1;
        VertexId(self.vertex_count - 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of live edges.
    pub fn edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_some()).count()
    }

    /// One past the largest edge id ever issued, tombstones included.
    pub fn edge_capacity(&self) -> usize {
        self.edges.len()
    }

    pub fn slots(&self) -> &[Option<[usize; 2]>] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> Result<(VertexId, VertexId), GraphError> {
        match self.edges.get(e.0) {
            Some(Some([u, w])) => Ok((VertexId(*u), VertexId(*w))),
            _ => Err(GraphError::UnknownEdge(e)),
        }
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        matches!(self.edges.get(e.0), Some(Some(_)))
    }

    /// Live edges in id order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.map(|[u, w]| (EdgeId(i), VertexId(u), VertexId(w))))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges().map(|(e, _, _)| e)
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges()
            .map(|(_, a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    pub fn multiplicity(&self, u: VertexId, w: VertexId) -> usize {
        self.edges()
            .filter(|&(_, a, b)| (a == u && b == w) || (a == w && b == u))
            .count()
    }

    pub fn is_loop(&self, e: EdgeId) -> Result<bool, GraphError> {
        let (u, w) = self.endpoints(e)?;
        Ok(u == w)
    }

    /// Adjacency lists of `(neighbour, edge)` pairs; a loop appears twice at its vertex.
    pub(crate) fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            if let Some([u, w]) = *e {
                adj[u].push((w, i));
                adj[w].push((u, i));
            }
        }
        adj
    }

    /// Component label for every vertex, numbered in order of smallest member.
    pub fn component_labels(&self) -> Vec<usize> {
        let adj = self.incidence();
        let mut label = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.vertex_count {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                for &(y, _) in &adj[x] {
                    if label[y] == usize::MAX {
                        label[y] = next;
                        queue.push_back(y);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// All bridges, in edge id order. Loops are never bridges and parallel
    /// edges protect each other.
    pub fn bridges(&self) -> Vec<EdgeId> {
        let adj = self.incidence();
        let n = self.vertex_count;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut out = Vec::new();
        let mut time = 0;
        // Iterative DFS; the frame holds (vertex, edge used to enter, next adjacency index).
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = time;
            low[root] = time;
            time += 1;
            while let Some(frame) = stack.last_mut() {
                let (x, via, idx) = *frame;
                if idx < adj[x].len() {
                    frame.2 += 1;
                    let (y, e) = adj[x][idx];
                    if e == via {
                        continue;
                    }
                    if disc[y] == usize::MAX {
                        disc[y] = time;
                        low[y] = time;
                        time += 1;
                        stack.push((y, e, 0));
                    } else {
                        low[x] = low[x].min(disc[y]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(parent, _, _)) = stack.last() {
                        low[parent] = low[parent].min(low[x]);
                        if low[x] > disc[parent] {
                            out.push(EdgeId(via));
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn is_bridge(&self, e: EdgeId) -> Result<bool, GraphError> {
        let (u, w) = self.endpoints(e)?;
        if u == w {
            return Ok(false);
        }
        Ok(self.bridges().contains(&e))
    }

    pub fn has_bridge_or_loop(&self) -> bool {
        self.edges().any(|(_, u, w)| u == w) || !self.bridges().is_empty()
    }

    pub fn delete_edge(&self, e: EdgeId) -> Result<Multigraph, GraphError> {
        self.endpoints(e)?;
        let mut g = self.clone();
        g.edges[e.0] = None;
        Ok(g)
    }

    /// Identifies the endpoints of `e` and removes it. The merged vertex takes
    /// the smaller id; vertices above the larger id shift down by one.
    pub fn contract_edge(&self, e: EdgeId) -> Result<Multigraph, GraphError> {
        let (u, w) = self.endpoints(e)?;
        if u == w {
            return Err(GraphError::ContractLoop(e));
        }
        let keep = u.0.min(w.0);
        let gone = u.0.max(w.0);
        let relabel = |x: usize| {
            if x == gone {
                keep
            } else if x > gone {
                x - 1
            } else {
                x
            }
        };
        let mut g = Multigraph {
            vertex_count: self.vertex_count - 1,
            edges: self.edges.clone(),
        };
        g.edges[e.0] = None;
        for slot in g.edges.iter_mut().flatten() {
            slot[0] = relabel(slot[0]);
            slot[1] = relabel(slot[1]);
        }
        Ok(g)
    }

    /// Copy with tombstones dropped; returns the new graph and, for every new
    /// edge id, the id it had here.
    pub fn compact(&self) -> (Multigraph, Vec<EdgeId>) {
        let mut map = Vec::new();
        let mut edges = Vec::new();
        for (e, u, w) in self.edges() {
            map.push(e);
            edges.push(Some([u.0, w.0]));
        }
        (
            Multigraph {
                vertex_count: self.vertex_count,
                edges,
            },
            map,
        )
    }

    pub fn certificate(&self) -> IsoCertificate {
        IsoCertificate::of(self)
    }

    /// Disjoint union of `self` and `other`; `other`'s vertices and edges are
    /// appended after this graph's.
    pub fn disjoint_union(&self, other: &Multigraph) -> Multigraph {
        let shift = self.vertex_count;
        let mut edges = self.edges.clone();
        edges.extend(
            other
                .edges
                .iter()
                .map(|e| e.map(|[u, w]| [u + shift, w + shift])),
        );
        Multigraph {
            vertex_count: self.vertex_count + other.vertex_count,
            edges,
        }
    }

    /// One-point union identifying `v1` here with `v2` of `other`. Edge ids of
    /// `other` follow this graph's; its vertices follow too, minus `v2`.
    pub fn wedge(&self, v1: VertexId, other: &Multigraph, v2: VertexId) -> Result<Multigraph, GraphError> {
        self.check_vertex(v1)?;
        other.check_vertex(v2)?;
        let shift = self.vertex_count;
        let relabel = |x: usize| match x.cmp(&v2.0) {
            std::cmp::Ordering::Equal => v1.0,
            std::cmp::Ordering::Less => x + shift,
            std::cmp::Ordering::Greater => x + shift - 1,
        };
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| e.map(|[u, w]| [relabel(u), relabel(w)])));
        Ok(Multigraph {
            vertex_count: self.vertex_count + other.vertex_count - 1,
            edges,
        })
    }
}

/// JSON mirror of a graph: `{"v": n, "edges": [[u, w], ...]}`. Smoothed-away
/// edges serialize as `null` so positions keep naming edge ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub v: usize,
    pub edges: Vec<Option<[usize; 2]>>,
}

impl From<&Multigraph> for GraphJson {
    fn from(g: &Multigraph) -> Self {
        GraphJson {
            v: g.vertex_count,
            edges: g.edges.clone(),
        }
    }
}

impl TryFrom<GraphJson> for Multigraph {
    type Error = GraphError;

    fn try_from(j: GraphJson) -> Result<Self, GraphError> {
        Multigraph::from_slots(j.v, j.edges)
    }
}

impl Serialize for Multigraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Multigraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        Multigraph::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_mgf())
    }
}

/// Small named graphs used across tests and presets.
pub mod named {
    use super::Multigraph;

    pub fn path(n: usize) -> Multigraph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Multigraph::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Multigraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Multigraph::from_edges(n, &edges).unwrap()
    }

    /// Two vertices joined by `k` parallel edges.
    pub fn dipole(k: usize) -> Multigraph {
        Multigraph::from_edges(2, &vec![(0, 1); k]).unwrap()
    }

    pub fn bouquet(k: usize) -> Multigraph {
        Multigraph::from_edges(1, &vec![(0, 0); k]).unwrap()
    }

    pub fn theta() -> Multigraph {
        dipole(3)
    }

    pub fn complete(n: usize) -> Multigraph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Multigraph::from_edges(n, &edges).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Multigraph {
        let mut edges = Vec::new();
        for i in 0..a {
            for j in 0..b {
                edges.push((i, a + j));
            }
        }
        Multigraph::from_edges(a + b, &edges).unwrap()
    }

    /// Every edge of the triangle doubled: v = 3, e = 6.
    pub fn doubled_triangle() -> Multigraph {
        Multigraph::from_edges(3, &[(0, 1), (0, 1), (1, 2), (1, 2), (2, 0), (2, 0)]).unwrap()
    }

    /// Hub 0 joined to the rim cycle 1..=n.
    pub fn wheel(n: usize) -> Multigraph {
        let mut edges: Vec<_> = (1..=n).map(|i| (0, i)).collect();
        edges.extend((1..=n).map(|i| (i, i % n + 1)));
        Multigraph::from_edges(n + 1, &edges).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    fn e(i: usize) -> EdgeId {
        EdgeId(i)
    }

    #[test]
    fn connectivity_basics() {
        assert!(path(3).is_connected());
        assert!(!Multigraph::new(2).unwrap().is_connected());
        assert!(Multigraph::new(1).unwrap().is_connected());
        assert!(matches!(Multigraph::new(0), Err(GraphError::NoVertices)));
    }

    #[test]
    fn bridges_and_loops() {
        let p = path(3);
        assert!(p.is_bridge(e(0)).unwrap());
        let c2 = dipole(2);
        assert!(!c2.is_bridge(e(0)).unwrap());
        assert!(!c2.is_bridge(e(1)).unwrap());
        let l = bouquet(1);
        assert!(!l.is_bridge(e(0)).unwrap());
        assert!(l.is_loop(e(0)).unwrap());
        assert!(!p.is_loop(e(0)).unwrap());
        assert_eq!(p.is_bridge(e(7)), Err(GraphError::UnknownEdge(e(7))));
        let contracted = c2.contract_edge(e(0)).unwrap();
        assert!(contracted.is_loop(e(1)).unwrap());
    }

    #[test]
    fn bridges_in_mixed_graph() {
        // triangle 0-1-2 with pendant 2-3 and a loop at 3
        let g = Multigraph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 3)]).unwrap();
        assert_eq!(g.bridges(), vec![e(3)]);
    }

    #[test]
    fn deletion_keeps_ids() {
        let t = theta();
        let d = t.delete_edge(e(1)).unwrap();
        assert_eq!(d.edge_count(), 2);
        assert_eq!(d.certificate(), dipole(2).certificate());
        assert!(d.has_edge(e(0)) && d.has_edge(e(2)) && !d.has_edge(e(1)));
        let single = dipole(2).delete_edge(e(0)).unwrap();
        assert_eq!(single.bridges(), vec![e(1)]);
        let b = bouquet(2).delete_edge(e(0)).unwrap();
        assert_eq!(b.certificate(), bouquet(1).certificate());
    }

    #[test]
    fn contraction() {
        let c = dipole(2).contract_edge(e(0)).unwrap();
        assert_eq!(c.vertex_count(), 1);
        assert_eq!(c.certificate(), bouquet(1).certificate());
        let t = cycle(3).contract_edge(e(1)).unwrap();
        assert_eq!(t.certificate(), dipole(2).certificate());
        assert_eq!(
            bouquet(1).contract_edge(e(0)),
            Err(GraphError::ContractLoop(e(0)))
        );
    }

    #[test]
    fn contraction_renumbers_vertices() {
        let g = path(4).contract_edge(e(1)).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.endpoints(e(0)).unwrap(), (VertexId(0), VertexId(1)));
        assert_eq!(g.endpoints(e(2)).unwrap(), (VertexId(1), VertexId(2)));
    }

    #[test]
    fn json_uses_null_for_removed_edges() {
        let g = dipole(2).delete_edge(e(0)).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"v":2,"edges":[null,[0,1]]}"#);
        let back: Multigraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Multigraph>(r#"{"v":1,"edges":[[0,3]]}"#).is_err());
    }
}
