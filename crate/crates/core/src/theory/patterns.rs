//! Local configurations that let L win when L moves first.

use serde::{Deserialize, Serialize};

use crate::multigraph::{EdgeId, Multigraph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum LPattern {
    /// Deleting the edge disconnects the graph.
    CutEdge { edge: EdgeId },
    Loop { edge: EdgeId },
    /// Two vertices joined by three or more parallel edges: contracting one
    /// leaves at least two loops.
    MultiEdgeOver2 {
        u: VertexId,
        w: VertexId,
        edges: Vec<EdgeId>,
    },
    /// Two adjacent vertices of degree two that are not a whole 2-cycle; in
    /// the dual their three boundary edges are parallel.
    AdjacentDeg2NotDigon { u: VertexId, w: VertexId, edge: EdgeId },
}

impl LPattern {
    pub fn name(&self) -> &'static str {
        match self {
            LPattern::CutEdge { .. } => "cut edge",
            LPattern::Loop { .. } => "loop",
            LPattern::MultiEdgeOver2 { .. } => "more than two parallel edges",
            LPattern::AdjacentDeg2NotDigon { .. } => "adjacent degree-two vertices",
        }
    }

    /// Re-checks the witness against `g`.
    pub fn holds_in(&self, g: &Multigraph) -> bool {
        match self {
            LPattern::CutEdge { edge } => g.is_bridge(*edge).unwrap_or(false),
            LPattern::Loop { edge } => g.is_loop(*edge).unwrap_or(false),
            LPattern::MultiEdgeOver2 { u, w, edges } => {
                u != w
                    && edges.len() > 2
                    && edges.iter().all(|&e| {
                        g.endpoints(e)
                            .is_ok_and(|(a, b)| (a, b) == (*u, *w) || (a, b) == (*w, *u))
                    })
            }
            LPattern::AdjacentDeg2NotDigon { u, w, edge } => {
                g.endpoints(*edge).is_ok_and(|(a, b)| (a, b) == (*u, *w) || (a, b) == (*w, *u))
                    && u != w
                    && g.degree(*u) == 2
                    && g.degree(*w) == 2
                    && g.multiplicity(*u, *w) < 2
            }
        }
    }
}

/// Every occurrence of each pattern, grouped by kind.
pub fn detect_l_patterns(g: &Multigraph) -> Vec<LPattern> {
    let mut out: Vec<LPattern> = g.bridges().into_iter().map(|edge| LPattern::CutEdge { edge }).collect();
    out.extend(
        g.edges()
            .filter(|(_, u, w)| u == w)
            .map(|(edge, _, _)| LPattern::Loop { edge }),
    );
    let mut classes: std::collections::BTreeMap<(usize, usize), Vec<EdgeId>> = Default::default();
    for (e, u, w) in g.edges() {
        if u != w {
            classes.entry((u.0.min(w.0), u.0.max(w.0))).or_default().push(e);
        }
    }
    for (&(u, w), edges) in &classes {
        if edges.len() > 2 {
            out.push(LPattern::MultiEdgeOver2 {
                u: VertexId(u),
                w: VertexId(w),
                edges: edges.clone(),
            });
        }
    }
    for (&(u, w), edges) in &classes {
        let (u, w) = (VertexId(u), VertexId(w));
        if edges.len() == 1 && g.degree(u) == 2 && g.degree(w) == 2 {
            out.push(LPattern::AdjacentDeg2NotDigon { u, w, edge: edges[0] });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::named;

    #[test]
    fn examples() {
        let t = detect_l_patterns(&named::theta());
        assert_eq!(t.len(), 1);
        assert!(matches!(t[0], LPattern::MultiEdgeOver2 { .. }));

        let c4 = detect_l_patterns(&named::cycle(4));
        assert!(!c4.is_empty());
        assert!(c4.iter().all(|p| matches!(p, LPattern::AdjacentDeg2NotDigon { .. })));

        let p3 = detect_l_patterns(&named::path(3));
        assert_eq!(p3, vec![LPattern::CutEdge { edge: EdgeId(0) }, LPattern::CutEdge { edge: EdgeId(1) }]);

        assert!(detect_l_patterns(&named::dipole(2)).is_empty());
        assert!(detect_l_patterns(&named::wheel(4)).is_empty());
        assert_eq!(detect_l_patterns(&named::bouquet(1)), vec![LPattern::Loop { edge: EdgeId(0) }]);
    }

    #[test]
    fn witnesses_hold() {
        for g in crate::multigraph::enumerate_connected(6, 6, true) {
            for p in detect_l_patterns(&g) {
                assert!(p.holds_in(&g), "{p:?} in {g}");
            }
        }
    }
}
