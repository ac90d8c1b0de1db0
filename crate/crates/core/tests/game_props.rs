use std::collections::{HashMap, HashSet};

use corridor_reduction::harness::{family_instances, Family};
use corridor_reduction::game::{
    enumerate_positions, solve, validate_strategy, GameInstance, Player, Position, Rank, State, TileType,
};
use proptest::prelude::*;

const COLORS: [&str; 2] = ["white", "black"];

fn arb_instance() -> impl Strategy<Value = GameInstance> {
    (1usize..=2, 0usize..=1).prop_flat_map(|(n, s)| {
        let tiles = proptest::collection::vec(proptest::array::uniform4(0usize..2), s + 2);
        let row = proptest::collection::vec(0..s + 2, n);
        (tiles, row).prop_map(|(tiles, row)| {
            let tiles = tiles
                .iter()
                .enumerate()
                .map(|(k, c)| TileType::new(&format!("T{k}"), COLORS[c[0]], COLORS[c[1]], COLORS[c[2]], COLORS[c[3]]))
                .collect();
            GameInstance::new(tiles, row).unwrap()
        })
    })
}

/// Moves Eloise needs to force the win using at most `k` more moves, by plain
/// game-tree search without any table.
fn minimax(inst: &GameInstance, pos: &Position, k: u32) -> Option<u32> {
    if k == 0 {
        return None;
    }
    let moves = inst.legal_moves(pos);
    let value = |t: &usize| match inst.apply(pos, *t).unwrap() {
        State::Won(_) => Some(1),
        State::Playing(next) => minimax(inst, &next, k - 1).map(|r| r + 1),
    };
    match pos.player {
        Player::Eloise => moves.iter().filter_map(value).min(),
        Player::Abelard if moves.is_empty() => None,
        Player::Abelard => moves.iter().map(value).collect::<Option<Vec<u32>>>()?.into_iter().max(),
    }
}

fn minimax_rank(inst: &GameInstance, pos: &Position) -> Rank {
    minimax(inst, pos, inst.play_bound() as u32).map_or(Rank::Infinite, Rank::Finite)
}

/// Rank by repeated sweeps over all positions until nothing changes.
fn iterated_ranks(inst: &GameInstance) -> HashMap<Position, Rank> {
    let positions = enumerate_positions(inst);
    let mut rank: HashMap<Position, Rank> = positions.iter().map(|p| (p.clone(), Rank::Infinite)).collect();
    loop {
        let mut changed = false;
        for p in &positions {
            let moves = inst.legal_moves(p);
            let value = |t: &usize| match inst.apply(p, *t).unwrap() {
                State::Won(_) => Some(0),
                State::Playing(q) => rank[&q].finite(),
            };
            let best = match p.player {
                Player::Eloise => moves.iter().filter_map(value).min(),
                Player::Abelard if moves.is_empty() => None,
                Player::Abelard => moves.iter().map(value).collect::<Option<Vec<u32>>>().and_then(|v| v.into_iter().max()),
            };
            let new = best.map_or(Rank::Infinite, |r| Rank::Finite(r + 1));
            if new != rank[p] {
                rank.insert(p.clone(), new);
                changed = true;
            }
        }
        if !changed {
            return rank;
        }
    }
}

fn all_reachable(inst: &GameInstance) -> Vec<Position> {
    let mut seen = HashSet::from([inst.initial_position()]);
    let mut stack = vec![inst.initial_position()];
    while let Some(p) = stack.pop() {
        for t in inst.legal_moves(&p) {
            if let State::Playing(q) = inst.apply(&p, t).unwrap() {
                if seen.insert(q.clone()) {
                    stack.push(q);
                }
            }
        }
    }
    seen.into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ranks_match_iteration(inst in arb_instance()) {
        let solved = solve(&inst);
        let oracle = iterated_ranks(&inst);
        for (pos, rank) in solved.graph.positions.iter().zip(&solved.ranks) {
            prop_assert_eq!(*rank, oracle[pos]);
        }
    }

    #[test]
    fn ranks_match_minimax_on_short_games(inst in arb_instance()) {
        prop_assume!(inst.play_bound() <= 16);
        let solved = solve(&inst);
        prop_assert!(solved.graph.positions.len() <= 200);
        prop_assert_eq!(solved.initial_rank(), minimax_rank(&inst, &inst.initial_position()));
        if inst.n() == 1 {
            for (pos, rank) in solved.graph.positions.iter().zip(&solved.ranks) {
                prop_assert_eq!(*rank, minimax_rank(&inst, pos));
            }
        }
    }

    #[test]
    fn winner_iff_rank_below_bound(inst in arb_instance()) {
        let solved = solve(&inst);
        let fast = solved.initial_rank().finite().is_some_and(|r| (r as u64) < inst.play_bound());
        prop_assert_eq!(solved.winner == Player::Eloise, fast);
    }

    #[test]
    fn optimal_strategy_validates(inst in arb_instance()) {
        let solved = solve(&inst);
        prop_assert_eq!(validate_strategy(&inst, &solved.optimal_strategy()), solved.winner == Player::Eloise);
    }

    #[test]
    fn apply_keeps_shape(inst in arb_instance()) {
        for p in all_reachable(&inst) {
            prop_assert_eq!(p.last_row.len(), inst.n());
            prop_assert!((1..=inst.n()).contains(&p.next_column));
            for t in inst.legal_moves(&p) {
                if let State::Playing(q) = inst.apply(&p, t).unwrap() {
                    prop_assert_eq!(q.last_row.len(), inst.n());
                    prop_assert_eq!(q.player, p.player.other());
                    prop_assert_eq!(q.next_column, p.next_column % inst.n() + 1);
                    prop_assert_eq!(q.last_row[p.next_column - 1], t);
                }
            }
        }
    }

    #[test]
    fn stuck_positions_lose(inst in arb_instance()) {
        let solved = solve(&inst);
        for (pos, rank) in solved.graph.positions.iter().zip(&solved.ranks) {
            if inst.legal_moves(pos).is_empty() {
                prop_assert_eq!(*rank, Rank::Infinite);
            }
        }
    }

    #[test]
    fn text_round_trip(inst in arb_instance()) {
        let back = GameInstance::parse(&inst.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), inst.to_text());
    }
}

#[test]
fn empty_strategy_never_wins_a_live_game() {
    let inst = GameInstance::new(vec![TileType::all_white("T0"), TileType::all_white("T1")], vec![0]).unwrap();
    assert!(!validate_strategy(&inst, &Default::default()));
}

#[test]
fn family_ranks_match_oracles() {
    for inst in family_instances(&Family::default()) {
        let solved = solve(&inst);
        let oracle = iterated_ranks(&inst);
        for (pos, rank) in solved.graph.positions.iter().zip(&solved.ranks) {
            assert_eq!(*rank, oracle[pos], "{}", inst.to_text());
        }
        if inst.n() == 1 {
            assert_eq!(solved.initial_rank(), minimax_rank(&inst, &inst.initial_position()));
        }
    }
}
