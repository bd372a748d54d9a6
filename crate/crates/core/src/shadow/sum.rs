//! Connect sum of two shadows along arcs of their outer faces.

use super::{Quadrant, Shadow, ShadowError};
use crate::multigraph::VertexId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectSum {
    pub shadow: Shadow,
    /// The black vertices of the two summands (ids in their own black graphs)
    /// that merge into one: the black graph of the sum is their wedge.
    pub black_wedge: (VertexId, VertexId),
}

struct OuterArc {
    ends: [(usize, u8); 2],
    black_vertex: VertexId,
}

/// Checks that `label` borders the outer face and finds the black face on its other side.
fn outer_arc(s: &Shadow, label: u32) -> Result<OuterArc, ShadowError> {
    let ends = s.arc_ends(label).ok_or(ShadowError::UnknownArc(label))?;
    let col = s.checkerboard();
    let owner = Shadow::face_index(&col.faces, s.crossing_count());
    let outer = owner[s.reference_quadrant().index()];
    let (c, t) = ends[0];
    let sides = [owner[Quadrant::new(c, t).index()], owner[Quadrant::new(c, t + 3).index()]];
    if !sides.contains(&outer) {
        return Err(ShadowError::ArcNotOnOuterFace(label));
    }
    let inner = if sides[0] == outer { sides[1] } else { sides[0] };
    debug_assert!(col.black[inner]);
    let black_vertex = VertexId(col.black[..inner].iter().filter(|&&b| b).count());
    Ok(OuterArc { ends, black_vertex })
}

/// Cuts arc `a1` of `s1` and arc `a2` of `s2` (both on their outer faces) and
/// rejoins the four loose ends so that the two outer faces merge. Crossings
/// of `s1` come first, then those of `s2`; arcs are renumbered so the merged
/// outer face is the designated one.
pub fn connect_sum(s1: &Shadow, a1: u32, s2: &Shadow, a2: u32) -> Result<ConnectSum, ShadowError> {
    let arc1 = outer_arc(s1, a1)?;
    let arc2 = outer_arc(s2, a2)?;
    let n1 = s1.crossing_count();
    let shift = s1.crossings().iter().flatten().max().copied().unwrap_or(0);
    let fresh = shift + s2.crossings().iter().flatten().max().copied().unwrap_or(0) + 1;
    let mut base: Vec<[u32; 4]> = s1.crossings().to_vec();
    base.extend(s2.crossings().iter().map(|q| q.map(|l| l + shift)));
    let ref1 = s1.reference_quadrant();
    let ref2 = s2.reference_quadrant();
    let ref2 = Quadrant::new(ref2.crossing + n1, ref2.slot);

    let q = arc1.ends[1];
    let [r, s] = arc2.ends.map(|(c, t)| (c + n1, t));
    for (with_p, with_q) in [(r, s), (s, r)] {
        let mut crossings = base.clone();
        // the first end of a1 keeps its label
        crossings[q.0][usize::from(q.1)] = fresh;
        crossings[with_p.0][usize::from(with_p.1)] = a1;
        crossings[with_q.0][usize::from(with_q.1)] = fresh;
        let Ok(sum) = Shadow::new(crossings.clone()) else {
            continue;
        };
        let faces = sum.faces();
        let owner = Shadow::face_index(&faces, sum.crossing_count());
        let outer = owner[ref1.index()];
        if outer != owner[ref2.index()] {
            continue;
        }
        // rotate the first crossing touching the outer face so its outer
        // corner is quadrant 0, then give that slot's arc the lowest label
        let (c, t) = (0..sum.crossing_count())
            .flat_map(|c| (0..4u8).map(move |t| (c, t)))
            .find(|&(c, t)| owner[Quadrant::new(c, t).index()] == outer)
            .expect("outer face has a corner");
        crossings[c].rotate_left(usize::from(t));
        let relabeled = Shadow::relabeled_from(&crossings, crossings[c][0]);
        let shadow = Shadow::new(relabeled)?;
        assert_eq!(shadow.reference_quadrant(), Quadrant::new(c, 0));
        return Ok(ConnectSum {
            shadow,
            black_wedge: (arc1.black_vertex, arc2.black_vertex),
        });
    }
    unreachable!("one of the two reconnections of outer arcs is plane and merges the outer faces")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::named;
    use crate::shadow::presets;

    fn outer_labels(s: &Shadow) -> Vec<u32> {
        let mut labels: Vec<u32> = s.crossings().iter().flatten().copied().collect();
        labels.sort_unstable();
        labels.dedup();
        labels.retain(|&l| outer_arc(s, l).is_ok());
        labels
    }

    fn check_wedge(s1: &Shadow, a1: u32, s2: &Shadow, a2: u32) -> Shadow {
        let sum = connect_sum(s1, a1, s2, a2).unwrap();
        let b1 = s1.black_graph().graph().clone();
        let b2 = s2.black_graph().graph().clone();
        let (v1, v2) = sum.black_wedge;
        let wedge = b1.wedge(v1, &b2, v2).unwrap();
        assert_eq!(sum.shadow.black_graph().graph().certificate(), wedge.certificate());
        assert_eq!(sum.shadow.crossing_count(), s1.crossing_count() + s2.crossing_count());
        sum.shadow
    }

    #[test]
    fn trefoil_figure_eight() {
        let t = presets::trefoil();
        let f = presets::figure_eight();
        let s = check_wedge(&t, 1, &f, 1);
        assert_eq!(s.crossing_count(), 7);
        assert_eq!(s.faces().len(), 9);
    }

    #[test]
    fn curl_curl_and_trefoil_trefoil() {
        let c = presets::curl();
        let s = check_wedge(&c, 1, &c, 1);
        assert_eq!(s.crossing_count(), 2);
        let t = presets::trefoil();
        let tt = check_wedge(&t, 1, &t, 1);
        let theta = named::theta();
        let expect = theta.wedge(VertexId(0), &theta, VertexId(0)).unwrap();
        assert_eq!(tt.black_graph().graph().certificate(), expect.certificate());
        assert!(!connect_sum(&t, 1, &c, 1).unwrap().shadow.is_reduced());
    }

    #[test]
    fn every_outer_arc_pair_gives_the_recorded_wedge() {
        let ps = presets::all();
        for p in &ps[..4] {
            for q in &ps[..4] {
                for a1 in outer_labels(&p.shadow) {
                    for a2 in outer_labels(&q.shadow) {
                        check_wedge(&p.shadow, a1, &q.shadow, a2);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_inner_and_unknown_arcs() {
        let t = presets::trefoil();
        let inner: Vec<u32> = (1..=6).filter(|&l| outer_arc(&t, l).is_err()).collect();
        assert!(!inner.is_empty());
        assert_eq!(connect_sum(&t, inner[0], &t, 1), Err(ShadowError::ArcNotOnOuterFace(inner[0])));
        assert_eq!(connect_sum(&t, 99, &t, 1), Err(ShadowError::UnknownArc(99)));
    }
}
