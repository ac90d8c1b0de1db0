mod common;

use std::collections::HashSet;

use common::{arb_small_instance, instance_a};
use corridor_reduction::game::{solve, Player, Rank, State};
use corridor_reduction::logic::{Evaluator, Formula, KripkeFrame};
use corridor_reduction::model::{bounded_win, check_embedding_condition, CanonicalModel, EncodedGraph};
use corridor_reduction::reduction::Compiler;
use fixedbitset::FixedBitSet;
use proptest::prelude::*;

/// Pairwise definition of the embedding condition.
fn brute_embedding(frame: &KripkeFrame, adj: &HashSet<(usize, usize)>, map: &[usize], fpoint: usize) -> bool {
    let n = frame.len();
    let clean = |z: usize| !frame.related(fpoint, z);
    (0..map.len()).all(|x| {
        (0..map.len()).filter(|&y| y != x).all(|y| {
            let bound = (0..n).any(|z| frame.related(map[x], z) && frame.related(map[y], z) && clean(z));
            bound == adj.contains(&(x, y))
        })
    })
}

fn forbidden(frame: &KripkeFrame, p: usize) -> FixedBitSet {
    let mut f = FixedBitSet::with_capacity(frame.len());
    f.insert(p);
    f
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 60, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn counters_count_moves_along_paths(inst in arb_small_instance()) {
        let cm = CanonicalModel::build(&inst, &solve(&inst));
        let g = &cm.graph;
        let b = g.params.b;
        let cap = g.params.counter_max();
        let children = g.children();
        // (node, steps) pairs reachable by walks of bounded length
        let mut frontier = vec![(EncodedGraph::ROOT, 0usize)];
        let mut seen = HashSet::new();
        while let Some((x, steps)) = frontier.pop() {
            let node = &g.nodes[x];
            prop_assert_eq!(node.depth, steps % b);
            prop_assert_eq!(node.counter, ((steps / b) as u64).min(cap));
            if steps < 6 * b && seen.insert((x, steps)) {
                frontier.extend(children[x].iter().map(|&y| (y, steps + 1)));
            }
        }
    }

    #[test]
    fn frame_shape(inst in arb_small_instance()) {
        let solved = solve(&inst);
        let cm = CanonicalModel::build(&inst, &solved);
        let g = &cm.graph;
        prop_assert_eq!(cm.witness.frame.len(), g.nodes.len() + g.edges.len() + 2);
        let children = g.children();
        for (x, node) in g.nodes.iter().enumerate() {
            let expect = match &node.state {
                State::Won(_) => 0,
                State::Playing(_) if node.depth + 1 < g.params.b => 1,
                State::Playing(pos) => inst.legal_moves(pos).len(),
            };
            prop_assert_eq!(children[x].len(), expect);
        }
        let win = cm.model.extension(&Compiler::new(&inst).space.win());
        prop_assert_eq!(win.contains(cm.root()), solved.winner == Player::Eloise);
    }

    #[test]
    fn embedding_check_matches_definition(inst in arb_small_instance()) {
        let cm = CanonicalModel::build(&inst, &solve(&inst));
        prop_assume!(cm.graph.nodes.len() <= 150);
        let wf = &cm.witness;
        let adj = cm.graph.adjacency();
        let fast = check_embedding_condition(&wf.frame, &adj, &wf.node_map, &cm.forbidden());
        prop_assert!(fast);
        prop_assert_eq!(fast, brute_embedding(&wf.frame, &adj, &wf.node_map, wf.fpoint));
        // declaring one edge forbidden breaks the condition for its pair
        if !cm.graph.edges.is_empty() {
            let mut forbid = forbidden(&wf.frame, wf.fpoint);
            forbid.insert(wf.node_map[cm.graph.edges[0].0]);
            let broken = check_embedding_condition(&wf.frame, &adj, &wf.node_map, &forbid);
            prop_assert!(!broken);
        }
    }

    #[test]
    fn win_is_justified_pointwise(inst in arb_small_instance()) {
        let solved = solve(&inst);
        let cm = CanonicalModel::build(&inst, &solved);
        let c = Compiler::new(&inst);
        let sp = &c.space;
        let win = Formula::Var(sp.win());
        let e = Formula::Var(sp.eloise());
        let placed = Formula::Var(sp.col(1, inst.target()));
        let abelard = Formula::conj([e.clone().not(), c.diamond(&Formula::True), c.boxed(&win)]);
        let eloise = e.and(c.diamond(&win));
        let mut ev = Evaluator::new(&cm.model);
        let reason = ev.eval(&Formula::disj([placed, abelard, eloise])).clone();
        let wins = cm.model.extension(&sp.win());
        for (x, node) in cm.graph.nodes.iter().enumerate() {
            let p = cm.witness.node_map[x];
            if wins.contains(p) {
                prop_assert!(reason.contains(p), "unjustified win at n{}", x);
            }
            let rank = solved.state_rank(&node.state).unwrap();
            prop_assert_eq!(wins.contains(p), bounded_win(rank, node.counter, cm.graph.params.play_bound));
        }
    }
}

#[test]
fn bounded_win_table() {
    assert!(bounded_win(Rank::Finite(0), 3, 4));
    assert!(!bounded_win(Rank::Finite(0), 4, 4));
    assert!(bounded_win(Rank::Finite(2), 1, 4));
    assert!(!bounded_win(Rank::Finite(3), 1, 4));
    assert!(!bounded_win(Rank::Infinite, 0, 4));
}

#[test]
fn instance_a_model() {
    let inst = instance_a();
    let cm = CanonicalModel::build(&inst, &solve(&inst));
    // Live positions alternate with the counter, 0..=7 with saturation at 7
    // adding the Eloise copy at 7: 9 playing states times 3 levels. Placing
    // T1 wins from each, giving counters 1..=7 plus the Abelard win at 7.
    assert_eq!(cm.graph.nodes.len(), 27 + 8);
    // two padding edges per playing state, two moves from each last level
    assert_eq!(cm.graph.edges.len(), 9 * 2 + 9 * 2);
    assert_eq!(cm.witness.frame.len(), 35 + 36 + 2);
    assert_eq!(&cm.graph.edges[..2], &[(0, 1), (1, 2)]);
    let f = &cm.witness.frame;
    assert_eq!((f.name(0), f.name(35), f.name(71), f.name(72)), ("n0", "z0", "top", "f"));
}
