//! Exhaustive checks of the closed-form results against the solver.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::trees::{find_edge_disjoint_spanning_trees, knot_pairing_move, TreePair, TreePairError};
use super::classify_by_counts;
use crate::multigraph::{enumerate_connected_by_edges, IsoCertificate, Multigraph};
use crate::planegraph::is_planar;
use crate::solver::{is_disconnecting, Action, Move, Outcome, Player, Solver};

/// One classified graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub v: usize,
    pub e: usize,
    pub outcome: Outcome,
    pub certificate: String,
    pub graph: Multigraph,
}

/// `v,e,outcome,certificate`, one row per record.
pub fn records_to_csv(records: &[GraphRecord]) -> String {
    let mut out = String::from("v,e,outcome,certificate\n");
    for r in records {
        out.push_str(&format!("{},{},{},{}\n", r.v, r.e, r.outcome, r.certificate));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridCell {
    pub v: usize,
    pub e: usize,
    pub outcomes_found: BTreeSet<Outcome>,
    pub counts: BTreeMap<Outcome, usize>,
    /// First certificate (hex) found for each outcome, in enumeration order.
    pub witnesses: BTreeMap<Outcome, String>,
}

impl GridCell {
    /// Outcomes the counting results leave possible in this cell.
    pub fn allowed(&self) -> BTreeSet<Outcome> {
        let (v, e) = (self.v as i64, self.e as i64);
        if classify_by_counts(self.v, self.e).is_some() {
            [Outcome::L].into()
        } else if e == 2 * (v - 1) {
            [Outcome::P, Outcome::L].into()
        } else {
            debug_assert!(e == 2 * v - 1 || e == 2 * v - 3);
            [Outcome::N, Outcome::L].into()
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.outcomes_found.is_subset(&self.allowed())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridReport {
    pub cells: Vec<GridCell>,
    /// Sorted by `(e, v, certificate)`.
    pub records: Vec<GraphRecord>,
}

impl GridReport {
    pub fn violations(&self) -> Vec<&GridCell> {
        self.cells.iter().filter(|c| !c.is_consistent()).collect()
    }

    pub fn cell(&self, v: usize, e: usize) -> Option<&GridCell> {
        self.cells.iter().find(|c| (c.v, c.e) == (v, e))
    }
}

fn classify_all(solver: &Solver, graphs: Vec<Multigraph>) -> Vec<GraphRecord> {
    let mut records: Vec<GraphRecord> = graphs
        .into_par_iter()
        .map(|g| GraphRecord {
            v: g.vertex_count(),
            e: g.edge_count(),
            outcome: solver.outcome(&g).expect("connected graph with edges"),
            certificate: g.certificate().to_hex(),
            graph: g,
        })
        .collect();
    records.sort_by(|a, b| (a.e, a.v, &a.certificate).cmp(&(b.e, b.v, &b.certificate)));
    records
}

fn planar_graphs(max_v: usize, max_e: usize, loops: bool) -> Vec<Multigraph> {
    enumerate_connected_by_edges(max_v, max_e, loops)
        .into_iter()
        .skip(1)
        .flatten()
        .filter(is_planar)
        .collect()
}

/// Classifies every connected planar multigraph with `1 <= e <= max_e` and
/// at most `max_v` vertices, grouped into `(v, e)` cells.
pub fn verify_grid(solver: &Solver, max_v: usize, max_e: usize, loops: bool) -> GridReport {
    let records = classify_all(solver, planar_graphs(max_v, max_e, loops));
    let mut cells: BTreeMap<(usize, usize), GridCell> = BTreeMap::new();
    for r in &records {
        let cell = cells.entry((r.v, r.e)).or_insert_with(|| GridCell {
            v: r.v,
            e: r.e,
            outcomes_found: BTreeSet::new(),
            counts: BTreeMap::new(),
            witnesses: BTreeMap::new(),
        });
        cell.outcomes_found.insert(r.outcome);
        *cell.counts.entry(r.outcome).or_default() += 1;
        cell.witnesses.entry(r.outcome).or_insert_with(|| r.certificate.clone());
    }
    GridReport {
        cells: cells.into_values().collect(),
        records,
    }
}

/// One node of a game tree, keyed by certificate and mover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameTreeNode {
    pub certificate: String,
    pub mover: Player,
    pub graph: Multigraph,
    pub k_wins: bool,
    /// `None` for a move that disconnects.
    pub children: Vec<(Move, Option<String>)>,
}

/// The full game tree from `g`, merged into a DAG by certificate.
pub fn game_tree(solver: &Solver, g: &Multigraph, mover: Player) -> Vec<GameTreeNode> {
    let mut nodes = Vec::new();
    let mut seen: HashSet<(IsoCertificate, Player)> = HashSet::new();
    let mut stack = vec![(g.clone(), mover)];
    while let Some((g, mover)) = stack.pop() {
        let cert = g.certificate();
        if !seen.insert((cert.clone(), mover)) {
            continue;
        }
        let mut children = Vec::new();
        for e in g.edge_ids() {
            for action in [Action::Delete, Action::Contract] {
                let mv = Move::new(e, action);
                if is_disconnecting(&g, mv).expect("live edge") {
                    children.push((mv, None));
                    continue;
                }
                let next = match action {
                    Action::Delete => g.delete_edge(e),
                    Action::Contract => g.contract_edge(e),
                }
                .expect("legal move");
                children.push((mv, Some(next.certificate().to_hex())));
                stack.push((next, mover.opponent()));
            }
        }
        nodes.push(GameTreeNode {
            certificate: cert.to_hex(),
            mover,
            k_wins: solver.k_wins(&g, mover).expect("connected"),
            graph: g,
            children,
        });
    }
    nodes.sort_by(|a, b| (&a.certificate, a.mover).cmp(&(&b.certificate, b.mover)));
    nodes
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub certificate: String,
    pub graph: Multigraph,
    pub outcome: Outcome,
    pub pair: Option<TreePair>,
    pub game_tree: Vec<GameTreeNode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub checked: usize,
    pub agreements: usize,
    /// Graphs that are `P` and have a tree pair.
    pub p_with_pair: usize,
    pub records: Vec<GraphRecord>,
    pub counterexamples: Vec<Counterexample>,
}

/// Compares "outcome is `P`" with "two edge-disjoint spanning trees exist" on
/// every connected planar multigraph with `e = 2(v-1) <= max_e`.
pub fn conjecture_scan(solver: &Solver, max_e: usize, loops: bool) -> ConjectureReport {
    conjecture_scan_graphs(solver, planar_graphs(usize::MAX, max_e, loops))
}

/// [`conjecture_scan`] over a given list; graphs off the line `e = 2(v-1)`
/// or without edges are skipped.
pub fn conjecture_scan_graphs(solver: &Solver, graphs: Vec<Multigraph>) -> ConjectureReport {
    let graphs: Vec<Multigraph> = graphs
        .into_iter()
        .filter(|g| g.edge_count() > 0 && g.edge_count() == 2 * (g.vertex_count() - 1))
        .collect();
    let records = classify_all(solver, graphs);
    let mut agreements = 0;
    let mut p_with_pair = 0;
    let mut counterexamples = Vec::new();
    for r in &records {
        let pair = find_edge_disjoint_spanning_trees(&r.graph);
        let is_p = r.outcome == Outcome::P;
        if is_p == pair.is_some() {
            agreements += 1;
            p_with_pair += usize::from(is_p);
        } else {
            counterexamples.push(Counterexample {
                certificate: r.certificate.clone(),
                graph: r.graph.clone(),
                outcome: r.outcome,
                pair,
                game_tree: game_tree(solver, &r.graph, Player::L),
            });
        }
    }
    ConjectureReport {
        checked: records.len(),
        agreements,
        p_with_pair,
        records,
        counterexamples,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyFailure {
    #[error("tree pair invalid at {graph}: {error}")]
    InvalidPair { graph: Multigraph, error: TreePairError },
    #[error("L can disconnect {graph} with {mv}")]
    LCanDisconnect { graph: Multigraph, mv: Move },
    #[error("no reply to {mv} at {graph}: {error}")]
    NoReply { graph: Multigraph, mv: Move, error: TreePairError },
    #[error("reply {reply} disconnects {graph}")]
    ReplyDisconnects { graph: Multigraph, reply: Move },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyReport {
    /// Distinct `(position, pair)` states with L to move.
    pub states: usize,
    /// Distinct states where the edges ran out.
    pub k_wins: usize,
}

/// Plays the pairing strategy for K against every sequence of L moves, L
/// moving first from `g` with `pair`.
pub fn check_pairing_strategy(g: &Multigraph, pair: &TreePair) -> Result<StrategyReport, StrategyFailure> {
    let mut seen = HashSet::new();
    let mut report = StrategyReport { states: 0, k_wins: 0 };
    let mut stack = vec![(g.clone(), pair.clone())];
    while let Some((g, pair)) = stack.pop() {
        if !seen.insert((g.slots().to_vec(), pair.clone())) {
            continue;
        }
        report.states += 1;
        pair.validate(&g).map_err(|error| StrategyFailure::InvalidPair {
            graph: g.clone(),
            error,
        })?;
        if g.edge_count() == 0 {
            report.k_wins += 1;
            continue;
        }
        for e in g.edge_ids().collect::<Vec<_>>() {
            for action in [Action::Delete, Action::Contract] {
                let mv = Move::new(e, action);
                if is_disconnecting(&g, mv).expect("live edge") {
                    return Err(StrategyFailure::LCanDisconnect { graph: g.clone(), mv });
                }
                let after = match action {
                    Action::Delete => g.delete_edge(e),
                    Action::Contract => g.contract_edge(e),
                }
                .expect("legal move");
                let (reply, next_pair) =
                    knot_pairing_move(&after, &pair, mv).map_err(|error| StrategyFailure::NoReply {
                        graph: g.clone(),
                        mv,
                        error,
                    })?;
                if is_disconnecting(&after, reply).unwrap_or(true) {
                    return Err(StrategyFailure::ReplyDisconnects { graph: after, reply });
                }
                let next = match reply.action {
                    Action::Delete => after.delete_edge(reply.edge),
                    Action::Contract => after.contract_edge(reply.edge),
                }
                .expect("legal reply");
                debug_assert_eq!(next.edge_count() + 2, g.edge_count());
                stack.push((next, next_pair));
            }
        }
    }
    Ok(report)
}
