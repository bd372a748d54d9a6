use linksmooth::multigraph::enumerate_connected_by_edges;
use linksmooth::solver::{legal_moves, Player, Solver};
use linksmooth_cli::session::{Session, SessionStatus};

fn winner(status: SessionStatus) -> Option<Player> {
    match status {
        SessionStatus::KWon => Some(Player::K),
        SessionStatus::LWon => Some(Player::L),
        SessionStatus::InProgress => None,
    }
}

/// Tries every human line against the engine; returns how many games ended.
fn adversary(s: &Session, solver: &Solver, want: Player) -> usize {
    if let Some(w) = winner(s.status) {
        assert_eq!(w, want, "engine lost on {} after {:?}", s.initial, s.history);
        return 1;
    }
    if s.engine_to_move() {
        let mut next = s.clone();
        next.play_engine(solver).unwrap();
        return adversary(&next, solver, want);
    }
    legal_moves(&s.state)
        .into_iter()
        .map(|lm| {
            let mut next = s.clone();
            next.play(s.human, lm.mv).unwrap();
            adversary(&next, solver, want)
        })
        .sum()
}

#[test]
fn engine_never_loses_a_won_position() {
    let solver = Solver::new();
    let (mut won, mut games) = (0, 0);
    for g in enumerate_connected_by_edges(usize::MAX, 6, true).iter().skip(1).flatten() {
        for human in [Player::K, Player::L] {
            for first in [Player::K, Player::L] {
                let engine = human.opponent();
                let k_wins = solver.k_wins(g, first).unwrap();
                if k_wins != (engine == Player::K) {
                    continue;
                }
                won += 1;
                let s = Session::new(String::new(), g.clone(), human, first).unwrap();
                games += adversary(&s, &solver, engine);
            }
        }
    }
    assert!(won > 400, "{won}");
    assert!(games > won);
}
