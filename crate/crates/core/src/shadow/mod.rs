//! Link shadows as PD codes.
//!
//! A precrossing is a quadruple of arc labels listed counterclockwise; slot
//! `s` of crossing `c` is one end of the arc carrying that label, and each
//! label occurs exactly twice. Quadrant `(c, s)` is the corner between slots
//! `s` and `s + 1`. Leaving a quadrant through slot `s + 1` and following the
//! arc lands in the quadrant `(c', t)` of the arc's other end `(c', t)`, which
//! traces every face once.
//!
//! Colors: the face of the quadrant at the first occurrence of the lowest
//! label is white and is also the designated outer face. In the black graph,
//! crossing `c` becomes edge `c`; its end 0 sits in the lower-numbered black
//! quadrant of the crossing.

mod smoothing;
mod sum;

pub mod presets;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::multigraph::{EdgeId, Multigraph};
use crate::planegraph::{EdgeEnd, EmbeddingError, PlaneGraph, RotationSystem};

pub use smoothing::{SmoothedShadow, SmoothingChoice};
pub use sum::{connect_sum, ConnectSum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShadowError {
    #[error("PD parse error: {0}")]
    Parse(String),
    #[error("diagram has no precrossings")]
    Empty,
    #[error("arc label {label} occurs {count} times, expected 2")]
    LabelCount { label: u32, count: usize },
    #[error("diagram is disconnected")]
    Disconnected,
    #[error("diagram has {faces} faces, a plane diagram with {crossings} precrossings has {}", crossings + 2)]
    NotPlane { faces: usize, crossings: usize },
    #[error("unknown precrossing {0}")]
    UnknownCrossing(usize),
    #[error("precrossing {0} is already smoothed")]
    AlreadySmoothed(usize),
    #[error("unknown arc label {0}")]
    UnknownArc(u32),
    #[error("arc {0} does not lie on the outer face")]
    ArcNotOnOuterFace(u32),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

/// The corner of crossing `crossing` between slots `slot` and `slot + 1`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Quadrant {
    pub crossing: usize,
    pub slot: u8,
}

impl Quadrant {
    pub fn new(crossing: usize, slot: u8) -> Self {
        Quadrant { crossing, slot: slot % 4 }
    }

    fn index(self) -> usize {
        self.crossing * 4 + usize::from(self.slot)
    }
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ShadowJson", into = "ShadowJson")]
pub struct Shadow {
    crossings: Vec<[u32; 4]>,
    /// other end of every slot, indexed `c * 4 + s`
    partner: Vec<usize>,
}

/// JSON mirror `{"crossings": [[a,b,c,d], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowJson {
    pub crossings: Vec<[u32; 4]>,
}

impl TryFrom<ShadowJson> for Shadow {
    type Error = ShadowError;
    fn try_from(j: ShadowJson) -> Result<Self, ShadowError> {
        Shadow::new(j.crossings)
    }
}

impl From<Shadow> for ShadowJson {
    fn from(s: Shadow) -> Self {
        ShadowJson { crossings: s.crossings }
    }
}

/// Proper 2-coloring of the faces of a shadow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckerboardColoring {
    /// Each face as its cycle of quadrants.
    pub faces: Vec<Vec<Quadrant>>,
    pub black: Vec<bool>,
}

impl CheckerboardColoring {
    pub fn swapped(&self) -> Self {
        CheckerboardColoring {
            faces: self.faces.clone(),
            black: self.black.iter().map(|b| !b).collect(),
        }
    }

    pub fn black_count(&self) -> usize {
        self.black.iter().filter(|&&b| b).count()
    }

    pub fn white_count(&self) -> usize {
        self.black.len() - self.black_count()
    }
}

impl Shadow {
    /// Validates label pairing, connectivity and `faces = crossings + 2`.
    pub fn new(crossings: Vec<[u32; 4]>) -> Result<Self, ShadowError> {
        if crossings.is_empty() {
            return Err(ShadowError::Empty);
        }
        let mut where_: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (c, quad) in crossings.iter().enumerate() {
            for (s, &label) in quad.iter().enumerate() {
                where_.entry(label).or_default().push(c * 4 + s);
            }
        }
        let mut partner = vec![0; crossings.len() * 4];
        for (&label, slots) in &where_ {
            if slots.len() != 2 {
                return Err(ShadowError::LabelCount {
                    label,
                    count: slots.len(),
                });
            }
            partner[slots[0]] = slots[1];
            partner[slots[1]] = slots[0];
        }
        let shadow = Shadow { crossings, partner };
        if !shadow.crossing_graph_connected() {
            return Err(ShadowError::Disconnected);
        }
        let faces = shadow.faces().len();
        if faces != shadow.crossing_count() + 2 {
            return Err(ShadowError::NotPlane {
                faces,
                crossings: shadow.crossing_count(),
            });
        }
        Ok(shadow)
    }

    /// Parses whitespace- or comma-separated `X(a,b,c,d)` terms.
    pub fn parse_pd(text: &str) -> Result<Self, ShadowError> {
        let mut crossings = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            rest = rest.trim_start_matches(|ch: char| ch.is_whitespace() || ch == ',' || ch == ';');
            if rest.is_empty() {
                break;
            }
            let body = rest
                .strip_prefix("X(")
                .or_else(|| rest.strip_prefix("X["))
                .ok_or_else(|| ShadowError::Parse(format!("expected `X(` at `{}`", head(rest))))?;
            let close = body
                .find([')', ']'])
                .ok_or_else(|| ShadowError::Parse("unterminated `X(`".into()))?;
            let labels: Vec<u32> = body[..close]
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<u32>()
                        .map_err(|_| ShadowError::Parse(format!("bad arc label `{}`", p.trim())))
                })
                .collect::<Result<_, _>>()?;
            let quad: [u32; 4] = labels
                .try_into()
                .map_err(|v: Vec<u32>| ShadowError::Parse(format!("precrossing with {} labels", v.len())))?;
            crossings.push(quad);
            rest = &body[close + 1..];
        }
        Shadow::new(crossings)
    }

    pub fn to_pd(&self) -> String {
        self.crossings
            .iter()
            .map(|[a, b, c, d]| format!("X({a},{b},{c},{d})"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn label(&self, c: usize, s: u8) -> u32 {
        self.crossings[c][usize::from(s % 4)]
    }

    /// The slot at the other end of the arc leaving `(c, s)`.
    pub fn other_end(&self, c: usize, s: u8) -> (usize, u8) {
        let p = self.partner[c * 4 + usize::from(s % 4)];
        (p / 4, (p % 4) as u8)
    }

    /// Both ends of the arc with this label.
    pub fn arc_ends(&self, label: u32) -> Option<[(usize, u8); 2]> {
        let mut found = Vec::with_capacity(2);
        for (c, quad) in self.crossings.iter().enumerate() {
            for (s, &l) in quad.iter().enumerate() {
                if l == label {
                    found.push((c, s as u8));
                }
            }
        }
        found.try_into().ok()
    }

    fn crossing_graph_connected(&self) -> bool {
        let n = self.crossing_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for s in 0..4 {
                let (d, _) = self.other_end(c, s);
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    /// The quadrant that follows `q` along its face.
    pub fn next_quadrant(&self, q: Quadrant) -> Quadrant {
        let (c, t) = self.other_end(q.crossing, q.slot + 1);
        Quadrant::new(c, t)
    }

    /// Faces as quadrant cycles, in order of their smallest quadrant.
    pub fn faces(&self) -> Vec<Vec<Quadrant>> {
        let mut done = vec![false; self.crossing_count() * 4];
        let mut faces = Vec::new();
        for c in 0..self.crossing_count() {
            for s in 0..4 {
                let start = Quadrant::new(c, s);
                if done[start.index()] {
                    continue;
                }
                let mut face = Vec::new();
                let mut q = start;
                while !done[q.index()] {
                    done[q.index()] = true;
                    face.push(q);
                    q = self.next_quadrant(q);
                }
                faces.push(face);
            }
        }
        faces
    }

    fn face_index(faces: &[Vec<Quadrant>], n: usize) -> Vec<usize> {
        let mut owner = vec![usize::MAX; n * 4];
        for (i, f) in faces.iter().enumerate() {
            for q in f {
                owner[q.index()] = i;
            }
        }
        owner
    }

    /// The quadrant at the first occurrence of the lowest arc label.
    pub fn reference_quadrant(&self) -> Quadrant {
        let low = self.crossings.iter().flatten().min().copied().expect("nonempty");
        for (c, quad) in self.crossings.iter().enumerate() {
            if let Some(s) = quad.iter().position(|&l| l == low) {
                return Quadrant::new(c, s as u8);
            }
        }
        unreachable!()
    }

    /// Index into [`Shadow::faces`] of the designated outer face.
    pub fn outer_face(&self) -> usize {
        let faces = self.faces();
        Self::face_index(&faces, self.crossing_count())[self.reference_quadrant().index()]
    }

    /// Quadrant colors alternate around a crossing; the reference quadrant is white.
    pub fn checkerboard(&self) -> CheckerboardColoring {
        let faces = self.faces();
        let n = self.crossing_count();
        let owner = Self::face_index(&faces, n);
        let mut black: Vec<Option<bool>> = vec![None; faces.len()];
        black[owner[self.reference_quadrant().index()]] = Some(false);
        let mut stack = vec![owner[self.reference_quadrant().index()]];
        while let Some(f) = stack.pop() {
            let color = black[f].unwrap();
            for q in &faces[f] {
                for nb in [Quadrant::new(q.crossing, q.slot + 1), Quadrant::new(q.crossing, q.slot + 3)] {
                    let g = owner[nb.index()];
                    match black[g] {
                        None => {
                            black[g] = Some(!color);
                            stack.push(g);
                        }
                        Some(c) => debug_assert_ne!(c, color, "plane diagrams are 2-colorable"),
                    }
                }
            }
        }
        CheckerboardColoring {
            faces,
            black: black.into_iter().map(|c| c.expect("connected")).collect(),
        }
    }

    /// 0 or 1: the lower-numbered black quadrant of crossing `c`.
    pub fn lower_black_slot(&self, c: usize) -> u8 {
        self.lower_black_slots()[c]
    }

    fn lower_black_slots(&self) -> Vec<u8> {
        let col = self.checkerboard();
        let owner = Self::face_index(&col.faces, self.crossing_count());
        (0..self.crossing_count())
            .map(|c| if col.black[owner[c * 4]] { 0 } else { 1 })
            .collect()
    }

    /// Black graph with edge `c` for crossing `c`.
    pub fn black_graph(&self) -> PlaneGraph {
        self.color_graph(true)
    }

    /// White graph with edge `c` for crossing `c`; isomorphic to the dual of
    /// the black graph.
    pub fn white_graph(&self) -> PlaneGraph {
        self.color_graph(false)
    }

    fn color_graph(&self, want_black: bool) -> PlaneGraph {
        let col = self.checkerboard();
        let n = self.crossing_count();
        let owner = Self::face_index(&col.faces, n);
        let mut vertex_of_face = vec![usize::MAX; col.faces.len()];
        let mut v = 0;
        for (f, &b) in col.black.iter().enumerate() {
            if b == want_black {
                vertex_of_face[f] = v;
                v += 1;
            }
        }
        let low: Vec<u8> = (0..n)
            .map(|c| {
                let q0_matches = col.black[owner[c * 4]] == want_black;
                if q0_matches {
                    0
                } else {
                    1
                }
            })
            .collect();
        let slots: Vec<Option<[usize; 2]>> = (0..n)
            .map(|c| {
                let s = usize::from(low[c]);
                Some([vertex_of_face[owner[c * 4 + s]], vertex_of_face[owner[c * 4 + s + 2]]])
            })
            .collect();
        let mut rotation = vec![Vec::new(); v];
        for (f, face) in col.faces.iter().enumerate() {
            if col.black[f] != want_black {
                continue;
            }
            rotation[vertex_of_face[f]] = face
                .iter()
                .map(|q| EdgeEnd::new(EdgeId(q.crossing), u8::from(q.slot != low[q.crossing])))
                .collect();
        }
        let graph = Multigraph::from_slots(v, slots).expect("faces exist");
        PlaneGraph::new(graph, RotationSystem(rotation)).expect("color graph of a plane diagram is plane")
    }

    /// Always 1: shadows are validated connected.
    pub fn component_count(&self) -> usize {
        1
    }

    /// No nugatory precrossing: neither the black nor the white graph has a loop.
    pub fn is_reduced(&self) -> bool {
        let no_loop = |pg: PlaneGraph| pg.graph().edges().all(|(_, u, w)| u != w);
        no_loop(self.black_graph()) && no_loop(self.white_graph())
    }

    /// Starts a game-board view on which precrossings can be smoothed.
    pub fn smoothed(&self) -> SmoothedShadow {
        SmoothedShadow::new(self.clone())
    }

    /// Renumbers arcs so `first` becomes 1 and the rest follow in order of first appearance.
    pub(crate) fn relabeled_from(crossings: &[[u32; 4]], first: u32) -> Vec<[u32; 4]> {
        let mut map: BTreeMap<u32, u32> = BTreeMap::new();
        map.insert(first, 1);
        let mut next = 2;
        crossings
            .iter()
            .map(|quad| {
                quad.map(|l| {
                    *map.entry(l).or_insert_with(|| {
                        next += 1;
                        next - 1
                    })
                })
            })
            .collect()
    }
}

fn head(s: &str) -> &str {
    let end = s.char_indices().nth(12).map_or(s.len(), |(i, _)| i);
    &s[..end]
}

impl fmt::Debug for Shadow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Shadow({})", self.to_pd())
    }
}

impl fmt::Display for Shadow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd())
    }
}

impl std::str::FromStr for Shadow {
    type Err = ShadowError;
    fn from_str(s: &str) -> Result<Self, ShadowError> {
        Shadow::parse_pd(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::named;

    #[test]
    fn parses_presets() {
        let t = Shadow::parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        assert_eq!(t.crossing_count(), 3);
        assert_eq!(t.faces().len(), 5);
        let c = Shadow::parse_pd("X(1,1,2,2)").unwrap();
        assert_eq!(c.faces().len(), 3);
        assert_eq!(Shadow::parse_pd("X[1,1,2,2]").unwrap(), c);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Shadow::parse_pd("X(1,2,3,4)"),
            Err(ShadowError::LabelCount { label: 1, count: 1 })
        ));
        assert_eq!(Shadow::parse_pd("   "), Err(ShadowError::Empty));
        assert_eq!(
            Shadow::parse_pd("X(1,1,2,2) X(3,3,4,4)"),
            Err(ShadowError::Disconnected)
        );
        assert!(matches!(Shadow::parse_pd("X(1,2,3)"), Err(ShadowError::Parse(_))));
        assert!(matches!(Shadow::parse_pd("Y(1,1,2,2)"), Err(ShadowError::Parse(_))));
        // a single crossing whose arcs join opposite slots is not a plane diagram
        assert!(matches!(
            Shadow::parse_pd("X(1,2,1,2)"),
            Err(ShadowError::NotPlane { faces: 1, crossings: 1 })
        ));
    }

    #[test]
    fn checkerboard_counts() {
        let curl = presets::curl();
        let col = curl.checkerboard();
        assert_eq!(col.faces.len(), 3);
        let mut split = [col.black_count(), col.white_count()];
        split.sort();
        assert_eq!(split, [1, 2]);
        let t = presets::trefoil().checkerboard();
        let mut split = [t.black_count(), t.white_count()];
        split.sort();
        assert_eq!(split, [2, 3]);
        let sw = t.swapped();
        assert_eq!(sw.black_count(), t.white_count());
        assert_eq!(sw.swapped(), t);
    }

    #[test]
    fn coloring_is_proper() {
        for s in presets::all() {
            let col = s.shadow.checkerboard();
            let owner = Shadow::face_index(&col.faces, s.shadow.crossing_count());
            for c in 0..s.shadow.crossing_count() {
                for q in 0..4 {
                    assert_ne!(col.black[owner[c * 4 + q]], col.black[owner[c * 4 + (q + 1) % 4]]);
                }
            }
        }
    }

    #[test]
    fn black_graphs_of_presets() {
        assert_eq!(presets::trefoil().black_graph().graph().certificate(), named::theta().certificate());
        assert_eq!(presets::hopf().black_graph().graph().certificate(), named::dipole(2).certificate());
        let curl_b = presets::curl().black_graph();
        let curl_w = presets::curl().white_graph();
        let loops_and_bridges = [curl_b.graph(), curl_w.graph()].map(|g| {
            let e = EdgeId(0);
            (g.is_loop(e).unwrap(), g.is_bridge(e).unwrap())
        });
        assert!(loops_and_bridges.contains(&(true, false)));
        assert!(loops_and_bridges.contains(&(false, true)));
    }

    #[test]
    fn white_graph_is_dual_of_black() {
        for p in presets::all() {
            let b = p.shadow.black_graph();
            let w = p.shadow.white_graph();
            assert_eq!(b.dual().graph().certificate(), w.graph().certificate(), "{}", p.name);
            assert_eq!(b.graph().edge_count(), p.shadow.crossing_count());
        }
    }

    #[test]
    fn reducedness() {
        assert!(presets::trefoil().is_reduced());
        assert!(presets::figure_eight().is_reduced());
        assert!(!presets::curl().is_reduced());
    }

    #[test]
    fn json_mirror() {
        let t = presets::trefoil();
        let j = serde_json::to_string(&t).unwrap();
        assert_eq!(j, r#"{"crossings":[[1,4,2,5],[3,6,4,1],[5,2,6,3]]}"#);
        let back: Shadow = serde_json::from_str(&j).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<Shadow>(r#"{"crossings":[[1,2,3,4]]}"#).is_err());
    }

    #[test]
    fn pd_round_trip() {
        for p in presets::all() {
            assert_eq!(Shadow::parse_pd(&p.shadow.to_pd()).unwrap(), p.shadow);
        }
    }
}
