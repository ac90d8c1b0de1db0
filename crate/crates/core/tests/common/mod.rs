#![allow(dead_code)]

use corridor_reduction::game::{validate_instance, GameInstance, TileType, WHITE};
use corridor_reduction::logic::{Formula, KripkeFrame, KripkeModel, Proposition};
use rand::Rng;

pub const PROPS: [&str; 3] = ["p", "q", "r"];

/// `n = 1`, wall and target both all white, initial row `T0`. Eloise wins at once.
pub fn instance_a() -> GameInstance {
    GameInstance::new(vec![TileType::all_white("T0"), TileType::all_white("T1")], vec![0]).unwrap()
}

/// Like `instance_a` but the target shows black on its left, so it never fits.
pub fn instance_b() -> GameInstance {
    GameInstance::new(vec![TileType::all_white("T0"), TileType::new("T1", "black", WHITE, WHITE, WHITE)], vec![0])
        .unwrap()
}

pub fn random_model<R: Rng>(rng: &mut R, max_points: usize, props: &[&str]) -> KripkeModel {
    let n = rng.gen_range(1..=max_points);
    let mut frame = KripkeFrame::with_points(n);
    let density = rng.gen_range(0.0..0.7);
    for a in 0..n {
        for b in 0..n {
            if rng.gen_bool(density) {
                frame.add_edge(a, b);
            }
        }
    }
    let mut model = KripkeModel::new(frame);
    for x in 0..n {
        for p in props {
            if rng.gen_bool(0.5) {
                model.label(x, &Proposition::new(p));
            }
        }
    }
    model
}

pub fn random_formula<R: Rng>(rng: &mut R, depth: u32, props: &[&str]) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..8) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::var(props[rng.gen_range(0..props.len())]),
        };
    }
    let op = rng.gen_range(0..10);
    let mut sub = || random_formula(rng, depth - 1, props);
    match op {
        0 => sub().not(),
        1 => sub().and(sub()),
        2 => sub().or(sub()),
        3 => sub().implies(sub()),
        4 => sub().iff(sub()),
        5 => sub().future(),
        6 => sub().past(),
        7 => sub().always_future(),
        8 => sub().always_past(),
        _ => sub().not().future().not(),
    }
}

/// Truth at one point, straight from the definitions.
pub fn naive_holds(m: &KripkeModel, f: &Formula, x: usize) -> bool {
    let fr = &m.frame;
    let n = fr.len();
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Var(p) => m.is_labelled(x, p),
        Formula::Not(a) => !naive_holds(m, a, x),
        Formula::And(a, b) => naive_holds(m, a, x) && naive_holds(m, b, x),
        Formula::Or(a, b) => naive_holds(m, a, x) || naive_holds(m, b, x),
        Formula::Implies(a, b) => !naive_holds(m, a, x) || naive_holds(m, b, x),
        Formula::Iff(a, b) => naive_holds(m, a, x) == naive_holds(m, b, x),
        Formula::Future(a) => (0..n).any(|y| fr.related(x, y) && naive_holds(m, a, y)),
        Formula::Past(a) => (0..n).any(|y| fr.related(y, x) && naive_holds(m, a, y)),
        Formula::AlwaysFuture(a) => (0..n).all(|y| !fr.related(x, y) || naive_holds(m, a, y)),
        Formula::AlwaysPast(a) => (0..n).all(|y| !fr.related(y, x) || naive_holds(m, a, y)),
    }
}

pub fn naive_set(m: &KripkeModel, f: &Formula) -> Vec<bool> {
    (0..m.frame.len()).map(|x| naive_holds(m, f, x)).collect()
}

const COLORS: [&str; 2] = [WHITE, "black"];

/// Random well-formed instances with `n ≤ 2` and `s ≤ 1`, wall all white.
pub fn arb_small_instance() -> impl proptest::strategy::Strategy<Value = GameInstance> {
    use proptest::prelude::*;
    (1usize..=2, 0usize..=1).prop_flat_map(|(n, s)| {
        let tiles = proptest::collection::vec(proptest::array::uniform4(0usize..2), s + 1);
        let row = proptest::collection::vec(0..s + 2, n);
        (tiles, row).prop_map(|(tiles, row)| {
            let mut all = vec![TileType::all_white("T0")];
            all.extend(tiles.iter().enumerate().map(|(k, c)| {
                TileType::new(&format!("T{}", k + 1), COLORS[c[0]], COLORS[c[1]], COLORS[c[2]], COLORS[c[3]])
            }));
            GameInstance::new(all, row).unwrap()
        })
    })
    .prop_filter("well-formed", |inst| validate_instance(inst).iter().all(|d| !d.is_violation()))
}
