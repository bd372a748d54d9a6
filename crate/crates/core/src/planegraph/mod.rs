//! Plane graphs as combinatorial maps.
//!
//! A [`RotationSystem`] lists, for every vertex, the cyclic order of the
//! edge-ends around it. An edge-end `(e, i)` sits at endpoint `i` of edge `e`
//! and doubles as the dart leaving that endpoint along `e`. Faces are orbits
//! of "arrive at a vertex through an end, leave through the next end in its
//! rotation". A rotation system is a sphere embedding exactly when
//! `v - e + f = 2`.

mod medial;
mod planarity;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::multigraph::{EdgeId, GraphError, Multigraph, VertexId};

pub use medial::{medial, MedialError};
pub use planarity::{find_embedding, is_planar};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeEnd {
    pub edge: EdgeId,
    pub end: u8,
}

impl EdgeEnd {
    pub fn new(edge: EdgeId, end: u8) -> Self {
        EdgeEnd { edge, end }
    }

    pub fn opposite(self) -> Self {
        EdgeEnd {
            edge: self.edge,
            end: 1 - self.end,
        }
    }

    pub(crate) fn slot(self) -> usize {
        self.edge.0 * 2 + usize::from(self.end)
    }
}

/// Cyclic order of edge-ends around each vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationSystem(pub Vec<Vec<EdgeEnd>>);

/// A face as the cyclic sequence of darts along its boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<EdgeEnd>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingError {
    #[error("rotation covers {got} vertices, graph has {want}")]
    VertexCount { got: usize, want: usize },
    #[error("edge-end {0:?} is not at the vertex that lists it")]
    Misplaced(EdgeEnd),
    #[error("edge-end {0:?} listed more than once or not at all")]
    Coverage(EdgeEnd),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not planar")]
    NotPlanar,
    #[error("rotation is not a sphere embedding: v - e + f = {0}")]
    NotSpherical(i64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneGraph {
    graph: Multigraph,
    rotation: RotationSystem,
}

impl PlaneGraph {
    /// Validates that `rotation` lists every edge-end exactly once at the
    /// right vertex and that it embeds the connected graph in the sphere.
    pub fn new(graph: Multigraph, rotation: RotationSystem) -> Result<Self, EmbeddingError> {
        let n = graph.vertex_count();
        if rotation.0.len() != n {
            return Err(EmbeddingError::VertexCount {
                got: rotation.0.len(),
                want: n,
            });
        }
        let mut seen = vec![false; graph.edge_capacity() * 2];
        for (v, cycle) in rotation.0.iter().enumerate() {
            for &h in cycle {
                let (a, b) = graph
                    .endpoints(h.edge)
                    .map_err(|_| EmbeddingError::Coverage(h))?;
                let at = if h.end == 0 { a } else { b };
                if h.end > 1 || at != VertexId(v) {
                    return Err(EmbeddingError::Misplaced(h));
                }
                if std::mem::replace(&mut seen[h.slot()], true) {
                    return Err(EmbeddingError::Coverage(h));
                }
            }
        }
        for e in graph.edge_ids() {
            for end in 0..2 {
                let h = EdgeEnd::new(e, end);
                if !seen[h.slot()] {
                    return Err(EmbeddingError::Coverage(h));
                }
            }
        }
        if !graph.is_connected() {
            return Err(EmbeddingError::Disconnected);
        }
        let pg = PlaneGraph { graph, rotation };
        let chi = pg.euler_characteristic();
        if chi != 2 {
            return Err(EmbeddingError::NotSpherical(chi));
        }
        Ok(pg)
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn rotation(&self) -> &RotationSystem {
        &self.rotation
    }

    pub fn into_graph(self) -> Multigraph {
        self.graph
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.graph.vertex_count() as i64 - self.graph.edge_count() as i64
            + self.trace_faces().len() as i64
    }

    /// Rotation successor of every edge-end, indexed by `edge * 2 + end`.
    fn successors(&self) -> Vec<Option<EdgeEnd>> {
        let mut succ = vec![None; self.graph.edge_capacity() * 2];
        for cycle in &self.rotation.0 {
            for (i, &h) in cycle.iter().enumerate() {
                succ[h.slot()] = Some(cycle[(i + 1) % cycle.len()]);
            }
        }
        succ
    }

    /// Faces in order of their smallest starting dart. An edgeless graph
    /// (a single vertex) has one empty face.
    pub fn trace_faces(&self) -> Vec<Face> {
        if self.graph.edge_count() == 0 {
            return vec![Face { darts: Vec::new() }];
        }
        let succ = self.successors();
        let mut done = vec![false; succ.len()];
        let mut faces = Vec::new();
        for e in self.graph.edge_ids() {
            for end in 0..2 {
                let start = EdgeEnd::new(e, end);
                if done[start.slot()] {
                    continue;
                }
                let mut darts = Vec::new();
                let mut d = start;
                while !done[d.slot()] {
                    done[d.slot()] = true;
                    darts.push(d);
                    d = succ[d.opposite().slot()].expect("validated rotation");
                }
                faces.push(Face { darts });
            }
        }
        faces
    }

    /// For every dart, the index of the face containing it.
    pub fn face_of_darts(&self, faces: &[Face]) -> Vec<usize> {
        let mut owner = vec![usize::MAX; self.graph.edge_capacity() * 2];
        for (i, f) in faces.iter().enumerate() {
            for d in &f.darts {
                owner[d.slot()] = i;
            }
        }
        owner
    }

    /// The dual plane graph: a vertex per face, and dual edge `e` joining the
    /// faces of darts `(e, 0)` and `(e, 1)` (in that end order). The rotation
    /// at a dual vertex is the dart order along its face, so the dual of the
    /// dual reproduces this graph's rotation exactly.
    pub fn dual(&self) -> PlaneGraph {
        let faces = self.trace_faces();
        let owner = self.face_of_darts(&faces);
        let slots: Vec<Option<[usize; 2]>> = (0..self.graph.edge_capacity())
            .map(|e| {
                self.graph
                    .has_edge(EdgeId(e))
                    .then(|| [owner[e * 2], owner[e * 2 + 1]])
            })
            .collect();
        let graph = Multigraph::from_slots(faces.len(), slots).expect("faces exist");
        let rotation = RotationSystem(faces.into_iter().map(|f| f.darts).collect());
        PlaneGraph::new(graph, rotation).expect("dual of a sphere embedding is one")
    }

    /// Serializable form `{"v", "edges", "rotation"}`.
    pub fn to_json(&self) -> PlaneGraphJson {
        PlaneGraphJson {
            v: self.graph.vertex_count(),
            edges: self.graph.slots().to_vec(),
            rotation: self
                .rotation
                .0
                .iter()
                .map(|c| c.iter().map(|h| [h.edge.0, usize::from(h.end)]).collect())
                .collect(),
        }
    }

    pub fn from_json(j: PlaneGraphJson) -> Result<Self, EmbeddingError> {
        let graph = Multigraph::from_slots(j.v, j.edges)?;
        let mut cycles = Vec::with_capacity(j.rotation.len());
        for c in j.rotation {
            let mut cycle = Vec::with_capacity(c.len());
            for [e, end] in c {
                let h = EdgeEnd::new(EdgeId(e), u8::try_from(end).unwrap_or(u8::MAX));
                if end > 1 {
                    return Err(EmbeddingError::Misplaced(h));
                }
                cycle.push(h);
            }
            cycles.push(cycle);
        }
        PlaneGraph::new(graph, RotationSystem(cycles))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneGraphJson {
    pub v: usize,
    pub edges: Vec<Option<[usize; 2]>>,
    pub rotation: Vec<Vec<[usize; 2]>>,
}

impl Serialize for PlaneGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PlaneGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        PlaneGraph::from_json(PlaneGraphJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
