//! Exact game engine on the black graph.
//!
//! A move smooths one precrossing, which on the black graph deletes or
//! contracts an edge. Deleting a bridge or contracting a loop disconnects the
//! diagram; nothing reconnects it, so such a move ends the game at once as a
//! win for L. K wins when every edge has been played without that happening.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::multigraph::{EdgeId, GraphError, IsoCertificate, Multigraph};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    /// Wants the diagram to stay connected.
    K,
    /// Wants to disconnect it.
    L,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::K => Player::L,
            Player::L => Player::K,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::K => "K",
            Player::L => "L",
        })
    }
}

impl FromStr for Player {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_uppercase().as_str() {
            "K" | "KNOT" => Ok(Player::K),
            "L" | "LINK" => Ok(Player::L),
            other => Err(format!("unknown player `{other}` (expected K or L)")),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Delete,
    Contract,
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Action::Delete => "delete",
            Action::Contract => "contract",
        })
    }
}

impl FromStr for Action {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "delete" | "d" | "white" | "whitejoin" => Ok(Action::Delete),
            "contract" | "c" | "black" | "blackjoin" => Ok(Action::Contract),
            other => Err(format!("unknown action `{other}` (expected delete or contract)")),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub edge: EdgeId,
    pub action: Action,
}

impl Move {
    pub fn new(edge: EdgeId, action: Action) -> Self {
        Move { edge, action }
    }

    pub fn delete(edge: usize) -> Self {
        Move::new(EdgeId(edge), Action::Delete)
    }

    pub fn contract(edge: usize) -> Self {
        Move::new(EdgeId(edge), Action::Contract)
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.action, self.edge)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    /// The first mover wins.
    N,
    /// The second mover wins.
    P,
    /// L wins whoever starts.
    L,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::N => "N",
            Outcome::P => "P",
            Outcome::L => "L",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no edges")]
    NoEdges,
    #[error("illegal move: {0}")]
    IllegalMove(#[from] GraphError),
}

/// A live position: connected graph and the player to move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameState {
    pub graph: Multigraph,
    pub mover: Player,
}

impl GameState {
    pub fn new(graph: Multigraph, mover: Player) -> Result<Self, SolverError> {
        if !graph.is_connected() {
            return Err(SolverError::Disconnected);
        }
        Ok(GameState { graph, mover })
    }

    /// Edges exhausted without disconnection.
    pub fn is_k_win(&self) -> bool {
        self.graph.edge_count() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transition {
    Next(GameState),
    TerminalLWin,
}

/// A legal move and whether it disconnects the diagram.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegalMove {
    #[serde(flatten)]
    pub mv: Move,
    pub disconnecting: bool,
}

/// The game value of one move from a position.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveAnalysis {
    #[serde(flatten)]
    pub mv: Move,
    pub disconnecting: bool,
    /// Who wins from the resulting position under optimal play.
    pub winner: Player,
    /// The move ends the game (disconnection or last edge).
    pub terminal: bool,
}

impl MoveAnalysis {
    pub fn wins_for(&self, p: Player) -> bool {
        self.winner == p
    }
}

pub fn is_disconnecting(g: &Multigraph, m: Move) -> Result<bool, GraphError> {
    match m.action {
        Action::Delete => g.is_bridge(m.edge),
        Action::Contract => g.is_loop(m.edge),
    }
}

/// Every `(edge, action)` pair in edge order, Delete first, flagged.
pub fn legal_moves(st: &GameState) -> Vec<LegalMove> {
    let bridges = st.graph.bridges();
    let mut out = Vec::with_capacity(st.graph.edge_count() * 2);
    for (e, u, w) in st.graph.edges() {
        out.push(LegalMove {
            mv: Move::new(e, Action::Delete),
            disconnecting: bridges.binary_search(&e).is_ok(),
        });
        out.push(LegalMove {
            mv: Move::new(e, Action::Contract),
            disconnecting: u == w,
        });
    }
    out
}

pub fn apply_move(st: &GameState, m: Move) -> Result<Transition, SolverError> {
    if is_disconnecting(&st.graph, m)? {
        return Ok(Transition::TerminalLWin);
    }
    let graph = match m.action {
        Action::Delete => st.graph.delete_edge(m.edge)?,
        Action::Contract => st.graph.contract_edge(m.edge)?,
    };
    Ok(Transition::Next(GameState {
        graph,
        mover: st.mover.opponent(),
    }))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Cache values by `(certificate, mover)`.
    pub memoize: bool,
    /// Branch on one edge per parallel class (and one loop per vertex):
    /// swapping such edges is an automorphism.
    pub orbit_pruning: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            memoize: true,
            orbit_pruning: false,
        }
    }
}

/// Memoized minimax. The memo table is the only shared state; lookups and
/// idempotent inserts are safe from several threads.
#[derive(Default)]
pub struct Solver {
    config: SolverConfig,
    memo: DashMap<(IsoCertificate, Player), bool>,
    nodes: AtomicU64,
}

impl Solver {
    pub fn new() -> Self {
        Solver::default()
    }

    pub fn with_config(config: SolverConfig) -> Self {
        Solver {
            config,
            ..Solver::default()
        }
    }

    pub fn unmemoized() -> Self {
        Solver::with_config(SolverConfig {
            memoize: false,
            orbit_pruning: false,
        })
    }

    pub fn config(&self) -> SolverConfig {
        self.config
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Positions expanded so far.
    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    pub fn clear(&self) {
        self.memo.clear();
    }

    /// True iff K wins from `g` with `mover` to play.
    pub fn k_wins(&self, g: &Multigraph, mover: Player) -> Result<bool, SolverError> {
        if !g.is_connected() {
            return Err(SolverError::Disconnected);
        }
        Ok(self.search(g, mover))
    }

    fn search(&self, g: &Multigraph, mover: Player) -> bool {
        if g.edge_count() == 0 {
            return true;
        }
        let bridges = g.bridges();
        let has_loop = g.edges().any(|(_, u, w)| u == w);
        if mover == Player::L && (has_loop || !bridges.is_empty()) {
            return false;
        }
        let key = self.config.memoize.then(|| (g.certificate(), mover));
        if let Some(k) = &key {
            if let Some(v) = self.memo.get(k) {
                return *v;
            }
        }
        self.nodes.fetch_add(1, Ordering::Relaxed);
        let mut safe_moves = 0;
        let mut value = mover == Player::L;
        'moves: for (e, u, w) in self.branch_edges(g) {
            for action in [Action::Delete, Action::Contract] {
                // K never plays a disconnecting move; for L none exist here
                let next = match action {
                    Action::Delete if bridges.binary_search(&e).is_ok() => continue,
                    Action::Contract if u == w => continue,
                    Action::Delete => g.delete_edge(e),
                    Action::Contract => g.contract_edge(e),
                }
                .expect("live edge");
                safe_moves += 1;
                let child = self.search(&next, mover.opponent());
                match mover {
                    Player::K if child => {
                        value = true;
                        break 'moves;
                    }
                    Player::L if !child => {
                        value = false;
                        break 'moves;
                    }
                    _ => {}
                }
            }
        }
        assert!(safe_moves > 0, "a graph with an edge always has a non-disconnecting move");
        if let Some(k) = key {
            self.memo.insert(k, value);
        }
        value
    }

    fn branch_edges(&self, g: &Multigraph) -> Vec<(EdgeId, usize, usize)> {
        let mut out: Vec<(EdgeId, usize, usize)> = g.edges().map(|(e, u, w)| (e, u.0, w.0)).collect();
        if self.config.orbit_pruning {
            let mut seen = std::collections::HashSet::new();
            out.retain(|&(_, u, w)| seen.insert((u.min(w), u.max(w))));
        }
        out
    }

    /// Outcome class. Only one ordering can favour K: whoever makes L move
    /// last loses for K, so the other ordering decides between N/P and L.
    pub fn outcome(&self, g: &Multigraph) -> Result<Outcome, SolverError> {
        if !g.is_connected() {
            return Err(SolverError::Disconnected);
        }
        let e = g.edge_count();
        if e == 0 {
            return Err(SolverError::NoEdges);
        }
        Ok(if e % 2 == 1 {
            if self.search(g, Player::K) {
                Outcome::N
            } else {
                Outcome::L
            }
        } else if self.search(g, Player::L) {
            Outcome::P
        } else {
            Outcome::L
        })
    }

    /// Value of every legal move, in [`legal_moves`] order.
    pub fn analyze_all_moves(&self, st: &GameState) -> Vec<MoveAnalysis> {
        legal_moves(st)
            .into_iter()
            .map(|lm| {
                if lm.disconnecting {
                    return MoveAnalysis {
                        mv: lm.mv,
                        disconnecting: true,
                        winner: Player::L,
                        terminal: true,
                    };
                }
                let Ok(Transition::Next(next)) = apply_move(st, lm.mv) else {
                    unreachable!("non-disconnecting legal move")
                };
                let terminal = next.is_k_win();
                let winner = if self.search(&next.graph, next.mover) {
                    Player::K
                } else {
                    Player::L
                };
                MoveAnalysis {
                    mv: lm.mv,
                    disconnecting: false,
                    winner,
                    terminal,
                }
            })
            .collect()
    }

    /// An optimal move. Among winning moves: game-ending ones first, then the
    /// lowest edge id, Delete before Contract. In a lost position K still
    /// avoids disconnecting.
    pub fn best_move(&self, st: &GameState) -> Result<MoveAnalysis, SolverError> {
        if st.graph.edge_count() == 0 {
            return Err(SolverError::NoEdges);
        }
        let all = self.analyze_all_moves(st);
        let me = st.mover;
        let pick = all
            .iter()
            .filter(|a| a.wins_for(me))
            .min_by_key(|a| (!a.terminal, a.mv))
            .or_else(|| all.iter().filter(|a| !a.disconnecting).min_by_key(|a| a.mv))
            .or_else(|| all.first())
            .copied()
            .expect("a position with an edge has moves");
        Ok(pick)
    }
}
