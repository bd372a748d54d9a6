//! Game sessions between a human and the engine, independent of transport.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use linksmooth::multigraph::Multigraph;
use linksmooth::solver::{apply_move, GameState, Move, MoveAnalysis, Outcome, Player, Solver, SolverError, Transition};

pub const PARITY_WARNING: &str = "K cannot win: L moves last";

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SessionStatus {
    InProgress,
    KWon,
    LWon,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub actor: Player,
    #[serde(flatten)]
    pub mv: Move,
    /// Edges left after the move.
    pub e: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no edges")]
    NoEdges,
    #[error("the game is over")]
    Finished,
    #[error("it is {0}'s turn")]
    NotYourTurn(Player),
    #[error("illegal move {0}: {1}")]
    IllegalMove(Move, String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub initial: Multigraph,
    pub state: GameState,
    pub human: Player,
    pub first_mover: Player,
    pub history: Vec<HistoryEntry>,
    pub status: SessionStatus,
}

/// Warns when the human plays K and L makes the last move.
pub fn parity_warning(g: &Multigraph, human: Player, first: Player) -> Option<&'static str> {
    let last = if g.edge_count() % 2 == 1 { first } else { first.opponent() };
    (human == Player::K && last == Player::L).then_some(PARITY_WARNING)
}

impl Session {
    pub fn new(id: String, graph: Multigraph, human: Player, first_mover: Player) -> Result<Self, SessionError> {
        if graph.edge_count() == 0 {
            return Err(SessionError::NoEdges);
        }
        let state = GameState::new(graph.clone(), first_mover).map_err(|_| SessionError::Disconnected)?;
        Ok(Session {
            id,
            initial: graph,
            state,
            human,
            first_mover,
            history: Vec::new(),
            status: SessionStatus::InProgress,
        })
    }

    pub fn engine(&self) -> Player {
        self.human.opponent()
    }

    pub fn to_move(&self) -> Option<Player> {
        (self.status == SessionStatus::InProgress).then_some(self.state.mover)
    }

    pub fn engine_to_move(&self) -> bool {
        self.to_move() == Some(self.engine())
    }

    pub fn warning(&self) -> Option<&'static str> {
        parity_warning(&self.initial, self.human, self.first_mover)
    }

    /// Plays `mv` for `actor`, who must be the player to move.
    pub fn play(&mut self, actor: Player, mv: Move) -> Result<SessionStatus, SessionError> {
        let Some(mover) = self.to_move() else {
            return Err(SessionError::Finished);
        };
        if actor != mover {
            return Err(SessionError::NotYourTurn(mover));
        }
        let next = apply_move(&self.state, mv).map_err(|e| match e {
            SolverError::IllegalMove(g) => SessionError::IllegalMove(mv, g.to_string()),
            other => SessionError::IllegalMove(mv, other.to_string()),
        })?;
        match next {
            Transition::TerminalLWin => {
                let e = self.state.graph.edge_count() - 1;
                self.history.push(HistoryEntry { actor, mv, e });
                self.status = SessionStatus::LWon;
            }
            Transition::Next(state) => {
                let e = state.graph.edge_count();
                self.history.push(HistoryEntry { actor, mv, e });
                self.state = state;
                if e == 0 {
                    self.status = SessionStatus::KWon;
                }
            }
        }
        Ok(self.status)
    }

    /// The engine's choice in the current position.
    pub fn engine_move(&self, solver: &Solver) -> Option<MoveAnalysis> {
        if !self.engine_to_move() {
            return None;
        }
        solver.best_move(&self.state).ok()
    }

    /// Plays the engine's move if it is the engine's turn.
    pub fn play_engine(&mut self, solver: &Solver) -> Option<Move> {
        let choice = self.engine_move(solver)?;
        self.play(self.engine(), choice.mv).expect("engine moves are legal");
        Some(choice.mv)
    }

    /// Replays the history onto a fresh session; used to restore sessions
    /// and to check that the stored state is reproducible.
    pub fn replay(
        id: String,
        initial: Multigraph,
        human: Player,
        first_mover: Player,
        history: &[(Player, Move)],
    ) -> Result<Self, SessionError> {
        let mut s = Session::new(id, initial, human, first_mover)?;
        for &(actor, mv) in history {
            s.play(actor, mv)?;
        }
        Ok(s)
    }

    pub fn analysis(&self, solver: &Solver) -> AnalysisResponse {
        if self.status != SessionStatus::InProgress {
            return AnalysisResponse {
                mover: None,
                outcome: None,
                moves: Vec::new(),
                status: self.status,
            };
        }
        let mover = self.state.mover;
        let moves = solver
            .analyze_all_moves(&self.state)
            .into_iter()
            .map(|a| AnalysisEntry {
                mv: a.mv,
                disconnecting: a.disconnecting,
                wins_for_mover: a.wins_for(mover),
                winner: a.winner,
            })
            .collect();
        AnalysisResponse {
            mover: Some(mover),
            outcome: solver.outcome(&self.state.graph).ok(),
            moves,
            status: self.status,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisEntry {
    #[serde(flatten)]
    pub mv: Move,
    pub disconnecting: bool,
    pub wins_for_mover: bool,
    /// Winner under best play after this move.
    pub winner: Player,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisResponse {
    pub mover: Option<Player>,
    /// Class of the current graph; absent once the game is over.
    pub outcome: Option<Outcome>,
    pub moves: Vec<AnalysisEntry>,
    pub status: SessionStatus,
}

#[cfg(test)]
mod tests {
    use super::*;
    use linksmooth::multigraph::named;

    #[test]
    fn warning_only_for_k_when_l_moves_last() {
        let theta = named::theta();
        assert_eq!(parity_warning(&theta, Player::K, Player::L), Some(PARITY_WARNING));
        assert_eq!(parity_warning(&theta, Player::K, Player::K), None);
        assert_eq!(parity_warning(&theta, Player::L, Player::L), None);
        let d = named::dipole(2);
        assert_eq!(parity_warning(&d, Player::K, Player::K), Some(PARITY_WARNING));
        assert_eq!(parity_warning(&d, Player::K, Player::L), None);
    }

    #[test]
    fn bridge_deletion_ends_the_game() {
        let mut s = Session::new("a".into(), named::path(2), Player::L, Player::L).unwrap();
        assert_eq!(s.play(Player::L, Move::delete(0)), Ok(SessionStatus::LWon));
        assert_eq!(s.play(Player::K, Move::delete(0)), Err(SessionError::Finished));
        assert_eq!(s.history, vec![HistoryEntry { actor: Player::L, mv: Move::delete(0), e: 0 }]);
        assert!(s.analysis(&Solver::new()).moves.is_empty());
    }

    #[test]
    fn deleting_the_only_loop_wins_for_k() {
        let mut s = Session::new("b".into(), named::bouquet(1), Player::K, Player::K).unwrap();
        assert_eq!(s.play(Player::K, Move::delete(0)), Ok(SessionStatus::KWon));
    }

    #[test]
    fn turn_and_legality_errors() {
        let mut s = Session::new("c".into(), named::theta(), Player::K, Player::L).unwrap();
        assert_eq!(s.play(Player::K, Move::delete(0)), Err(SessionError::NotYourTurn(Player::L)));
        assert!(matches!(s.play(Player::L, Move::delete(9)), Err(SessionError::IllegalMove(..))));
        assert!(s.history.is_empty());
        assert_eq!(
            Session::new("d".into(), Multigraph::new(1).unwrap(), Player::K, Player::K),
            Err(SessionError::NoEdges)
        );
        let two = Multigraph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(Session::new("e".into(), two, Player::K, Player::K), Err(SessionError::Disconnected));
    }

    #[test]
    fn theta_analysis_has_three_winning_moves_for_k() {
        let solver = Solver::new();
        let s = Session::new("f".into(), named::theta(), Player::K, Player::K).unwrap();
        let a = s.analysis(&solver);
        assert_eq!(a.moves.len(), 6);
        assert_eq!(a.moves.iter().filter(|m| m.wins_for_mover).count(), 3);
        assert_eq!(a.outcome, Some(Outcome::N));
    }

    #[test]
    fn loop_contraction_flagged_for_l() {
        let solver = Solver::new();
        let g = Multigraph::from_edges(2, &[(0, 0), (0, 1), (0, 1)]).unwrap();
        let s = Session::new("g".into(), g, Player::K, Player::L).unwrap();
        let a = s.analysis(&solver);
        let entry = a.moves.iter().find(|m| m.mv == Move::contract(0)).unwrap();
        assert!(entry.disconnecting && entry.wins_for_mover);
    }

    #[test]
    fn replay_reproduces_state() {
        let solver = Solver::new();
        let mut s = Session::new("h".into(), named::wheel(3), Player::L, Player::L).unwrap();
        s.play(Player::L, Move::delete(0)).unwrap();
        s.play_engine(&solver).unwrap();
        let hist: Vec<_> = s.history.iter().map(|h| (h.actor, h.mv)).collect();
        let r = Session::replay("h".into(), named::wheel(3), Player::L, Player::L, &hist).unwrap();
        assert_eq!(r, s);
        assert_eq!(r.state.graph.certificate(), s.state.graph.certificate());
    }
}
