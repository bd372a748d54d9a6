//! Closed-form predicates, constructions and strategies, each checkable
//! against the solver.

mod blowout;
mod patterns;
mod trees;
mod verify;

use thiserror::Error;

pub use blowout::{
    blowout, blowout_sequence_from_merges, find_2blowout_sequence, find_blowout_sequence, replay_blowouts,
    wheel, BlowoutError, BlowoutSequence, BlowoutStep,
};
pub use patterns::{detect_l_patterns, LPattern};
pub use trees::{
    find_edge_disjoint_spanning_trees, knot_pairing_move, spanning_tree_pair_by_augmentation, TreePair,
    TreePairError,
};
pub use verify::{
    check_pairing_strategy, conjecture_scan, conjecture_scan_graphs, game_tree, records_to_csv, verify_grid, ConjectureReport,
    Counterexample, GameTreeNode, GraphRecord, GridCell, GridReport, StrategyFailure, StrategyReport,
};

use crate::multigraph::{GraphError, Multigraph, VertexId};
use crate::solver::Outcome;

/// The outcome forced by the vertex and edge counts alone, if any.
///
/// Only the lines `e = 2(v-1)`, `e = 2v-1` and `e = 2v-3` stay open.
pub fn classify_by_counts(v: usize, e: usize) -> Option<Outcome> {
    let (v, e) = (v as i64, e as i64);
    let decided = if e % 2 == 0 {
        e != 2 * (v - 1)
    } else {
        e > 2 * v - 1 || e < 2 * v - 3
    };
    decided.then_some(Outcome::L)
}

/// Identifies `v1` of `g1` with `v2` of `g2`.
pub fn wedge(g1: &Multigraph, v1: VertexId, g2: &Multigraph, v2: VertexId) -> Result<Multigraph, GraphError> {
    g1.wedge(v1, g2, v2)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AddEdgeError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("adding a loop at {0} was not allowed")]
    LoopNotAllowed(VertexId),
}

/// `g` plus one more `u`-`w` edge, appended with the next edge id.
pub fn add_edge(g: &Multigraph, u: VertexId, w: VertexId, allow_loop: bool) -> Result<Multigraph, AddEdgeError> {
    if u == w && !allow_loop && u.0 < g.vertex_count() {
        return Err(AddEdgeError::LoopNotAllowed(u));
    }
    let mut h = g.clone();
    h.add_edge(u, w)?;
    Ok(h)
}

/// Outcome of a connect sum (a wedge of black graphs) from its summands.
///
/// A `P` summand has an even edge count and an `N` summand an odd one, so
/// their sum has odd `e`, where `P` is impossible; it is `N`.
pub fn connect_sum_outcome(o1: Outcome, o2: Outcome) -> Outcome {
    use Outcome::*;
    match (o1, o2) {
        (L, _) | (_, L) => L,
        (P, P) => P,
        (P, N) | (N, P) => N,
        (N, N) => L,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::named;
    use crate::solver::{Move, Solver};

    #[test]
    fn counts() {
        assert_eq!(classify_by_counts(3, 6), Some(Outcome::L));
        assert_eq!(classify_by_counts(2, 5), Some(Outcome::L));
        assert_eq!(classify_by_counts(3, 4), None);
        assert_eq!(classify_by_counts(1, 1), None);
        assert_eq!(classify_by_counts(2, 1), None);
        assert_eq!(classify_by_counts(4, 5), None);
        assert_eq!(classify_by_counts(4, 3), Some(Outcome::L));
        assert_eq!(classify_by_counts(4, 1), Some(Outcome::L));
    }

    #[test]
    fn wedges() {
        let b = named::path(2);
        let p3 = wedge(&b, VertexId(1), &b, VertexId(0)).unwrap();
        assert_eq!(p3.certificate(), named::path(3).certificate());

        let solver = Solver::new();
        let theta = named::theta();
        let tt = wedge(&theta, VertexId(0), &theta, VertexId(1)).unwrap();
        assert_eq!((tt.vertex_count(), tt.edge_count()), (3, 6));
        assert_eq!(solver.outcome(&tt).unwrap(), Outcome::L);

        let d = named::dipole(2);
        assert_eq!(solver.outcome(&wedge(&d, VertexId(0), &d, VertexId(0)).unwrap()).unwrap(), Outcome::P);
        assert!(wedge(&d, VertexId(2), &d, VertexId(0)).is_err());
    }

    #[test]
    fn adding_edges() {
        let solver = Solver::new();
        let d = named::dipole(2);
        let theta = add_edge(&d, VertexId(0), VertexId(1), false).unwrap();
        assert_eq!(theta.certificate(), named::theta().certificate());
        assert_eq!(solver.outcome(&theta).unwrap(), Outcome::N);
        assert_eq!(
            add_edge(&d, VertexId(0), VertexId(0), false),
            Err(AddEdgeError::LoopNotAllowed(VertexId(0)))
        );
        assert!(add_edge(&d, VertexId(0), VertexId(0), true).is_ok());
        assert!(add_edge(&d, VertexId(0), VertexId(9), false).is_err());

        // W3 is K4, so every added edge doubles one
        let w3 = named::wheel(3);
        for u in 0..4 {
            for w in u + 1..4 {
                let g = add_edge(&w3, VertexId(u), VertexId(w), false).unwrap();
                assert_eq!(solver.outcome(&g).unwrap(), Outcome::N);
                let st = crate::solver::GameState::new(g, crate::solver::Player::K).unwrap();
                let added = Move::delete(6);
                let a = solver.analyze_all_moves(&st);
                assert!(a.iter().any(|m| m.mv == added && m.wins_for(crate::solver::Player::K)));
            }
        }
    }

    #[test]
    fn sum_table() {
        use Outcome::*;
        assert_eq!(connect_sum_outcome(P, P), P);
        assert_eq!(connect_sum_outcome(P, N), N);
        assert_eq!(connect_sum_outcome(N, P), N);
        assert_eq!(connect_sum_outcome(N, N), L);
        assert_eq!(connect_sum_outcome(L, N), L);
        assert_eq!(connect_sum_outcome(P, L), L);
    }
}
