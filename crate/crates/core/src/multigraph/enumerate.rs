//! Exhaustive enumeration of connected multigraphs up to isomorphism.
//!
//! Every connected graph with `e >= 1` edges arises from a connected graph
//! with `e - 1` edges by one augmentation: add an edge between existing
//! vertices (undoes deleting a non-bridge, loops included) or hang a new
//! pendant vertex (undoes deleting a leaf of a tree). Each level is
//! deduplicated by certificate and emitted in certificate order.

use std::collections::BTreeMap;

use super::{IsoCertificate, Multigraph, VertexId};

/// All connected multigraphs with at most `max_v` vertices and `max_e`
/// edges, one per isomorphism class, ordered by edge count then certificate.
/// The single vertex is included.
pub fn enumerate_connected(max_v: usize, max_e: usize, allow_loops: bool) -> Vec<Multigraph> {
    enumerate_connected_by_edges(max_v, max_e, allow_loops)
        .into_iter()
        .flatten()
        .collect()
}

/// Same as [`enumerate_connected`], grouped by edge count (`result[e]`).
pub fn enumerate_connected_by_edges(
    max_v: usize,
    max_e: usize,
    allow_loops: bool,
) -> Vec<Vec<Multigraph>> {
    let mut levels: Vec<Vec<Multigraph>> = Vec::with_capacity(max_e + 1);
    if max_v == 0 {
        return levels;
    }
    levels.push(vec![Multigraph::new(1).expect("one vertex")]);
    for _ in 1..=max_e {
        let mut seen: BTreeMap<IsoCertificate, Multigraph> = BTreeMap::new();
        for g in levels.last().unwrap() {
            let n = g.vertex_count();
            for u in 0..n {
                let lo = if allow_loops { u } else { u + 1 };
                for w in lo..n {
                    let mut h = g.clone();
                    h.add_edge(VertexId(u), VertexId(w)).unwrap();
                    seen.entry(h.certificate()).or_insert(h);
                }
            }
            if n < max_v {
                for u in 0..n {
                    let mut h = g.clone();
                    let fresh = h.add_vertex();
                    h.add_edge(VertexId(u), fresh).unwrap();
                    seen.entry(h.certificate()).or_insert(h);
                }
            }
        }
        levels.push(seen.into_values().collect());
    }
    levels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::named;

    fn counts(levels: &[Vec<Multigraph>]) -> Vec<usize> {
        levels.iter().map(Vec::len).collect()
    }

    #[test]
    fn tiny_cases() {
        let with_loops = enumerate_connected(1, 1, true);
        assert_eq!(with_loops.len(), 2);
        assert_eq!(with_loops[1].certificate(), named::bouquet(1).certificate());

        let no_loops = enumerate_connected(2, 2, false);
        let certs: Vec<_> = no_loops.iter().map(Multigraph::certificate).collect();
        assert_eq!(certs.len(), 3);
        assert!(certs.contains(&named::path(2).certificate()));
        assert!(certs.contains(&named::dipole(2).certificate()));
        assert!(!certs.contains(&named::path(3).certificate()));
    }

    #[test]
    fn v3_e3_contains_hand_listed_classes() {
        let all = enumerate_connected(3, 3, false);
        let at: Vec<_> = all
            .iter()
            .filter(|g| g.vertex_count() == 3 && g.edge_count() == 3)
            .map(Multigraph::certificate)
            .collect();
        // triangle, and a double edge with a pendant edge (pendant off either end is the same class)
        let double_pendant = Multigraph::from_edges(3, &[(0, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(at.len(), 2);
        assert!(at.contains(&named::cycle(3).certificate()));
        assert!(at.contains(&double_pendant.certificate()));
    }

    #[test]
    fn all_emitted_graphs_are_connected_and_distinct() {
        let levels = enumerate_connected_by_edges(5, 6, true);
        for level in &levels {
            let mut certs: Vec<_> = level.iter().map(Multigraph::certificate).collect();
            assert!(level.iter().all(Multigraph::is_connected));
            let before = certs.len();
            certs.dedup();
            assert_eq!(before, certs.len());
        }
    }

    #[test]
    fn loopless_counts_match_brute_force_classes() {
        // Oracle: all labelled edge multisets, grouped by brute-force isomorphism.
        let levels = enumerate_connected_by_edges(usize::MAX, 4, false);
        let oracle = brute_force_class_counts(4, false);
        assert_eq!(counts(&levels), oracle);
    }

    #[test]
    fn looped_counts_match_brute_force_classes() {
        let levels = enumerate_connected_by_edges(usize::MAX, 4, true);
        let oracle = brute_force_class_counts(4, true);
        assert_eq!(counts(&levels), oracle);
    }

    fn brute_force_class_counts(max_e: usize, loops: bool) -> Vec<usize> {
        use crate::multigraph::canon::tests::brute_force_isomorphic;

        fn multisets(pairs: &[(usize, usize)], left: usize, from: usize, cur: &mut Vec<(usize, usize)>, out: &mut dyn FnMut(&[(usize, usize)])) {
            if left == 0 {
                out(cur);
                return;
            }
            for i in from..pairs.len() {
                cur.push(pairs[i]);
                multisets(pairs, left - 1, i, cur, out);
                cur.pop();
            }
        }

        let mut out = vec![1];
        for e in 1..=max_e {
            let mut reps: Vec<Multigraph> = Vec::new();
            for v in 1..=e + 1 {
                let pairs: Vec<(usize, usize)> = (0..v)
                    .flat_map(|a| (a..v).map(move |b| (a, b)))
                    .filter(|&(a, b)| loops || a != b)
                    .collect();
                multisets(&pairs, e, 0, &mut Vec::new(), &mut |edges| {
                    let g = Multigraph::from_edges(v, edges).unwrap();
                    if g.is_connected() && !reps.iter().any(|r| brute_force_isomorphic(r, &g)) {
                        reps.push(g);
                    }
                });
            }
            out.push(reps.len());
        }
        out
    }
}
