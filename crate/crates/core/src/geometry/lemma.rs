//! Four points in cyclic order on a circle: every disc containing the first
//! and third also contains the second or the fourth.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{rat, Disc, GeometryError, Mode, QPoint, Rat};

fn orient(a: &QPoint, b: &QPoint, c: &QPoint) -> i32 {
    let cross = (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x);
    if cross.is_positive() {
        1
    } else if cross.is_negative() {
        -1
    } else {
        0
    }
}

/// For concyclic points: `a, b, c, d` occur in this order around the circle
/// (either direction).
pub fn cyclic_order(a: &QPoint, b: &QPoint, c: &QPoint, d: &QPoint) -> bool {
    let s = [orient(a, b, c), orient(b, c, d), orient(c, d, a), orient(d, a, b)];
    s[0] != 0 && s.iter().all(|&x| x == s[0])
}

/// Checks the lemma on one configuration.
pub fn circle_lemma_check(
    center: &QPoint,
    radius_sq: &Rat,
    a: &QPoint,
    b: &QPoint,
    c: &QPoint,
    d: &QPoint,
    disc: &Disc,
) -> Result<bool, GeometryError> {
    if [a, b, c, d].iter().any(|p| center.dist2(p) != *radius_sq) {
        return Err(GeometryError::Precondition("points must lie on the circle"));
    }
    if !cyclic_order(a, b, c, d) {
        return Err(GeometryError::Precondition("points must be in cyclic order"));
    }
    if !(disc.contains(a) && disc.contains(c)) {
        return Err(GeometryError::Precondition("disc must contain a and c"));
    }
    Ok(disc.contains(b) || disc.contains(d))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaReport {
    pub trials: usize,
    pub violations: usize,
    /// Trials whose disc had `a` or `c` on its boundary.
    pub tight: usize,
    pub closed: usize,
}

fn small_rat(rng: &mut ChaCha8Rng, span: i64, den: i64) -> Rat {
    rat(rng.gen_range(-span..=span), rng.gen_range(1..=den))
}

/// Circle point for the rational parameter `u`; the map is monotone in the
/// angle, so sorted parameters give points in cyclic order.
fn circle_point(center: &QPoint, radius: &Rat, u: &Rat) -> QPoint {
    let one = Rat::one();
    let w = &one + u * u;
    let x = (&one - u * u) / &w;
    let y = rat(2, 1) * u / w;
    QPoint::new(&center.x + radius * x, &center.y + radius * y)
}

/// Runs `trials` seeded random configurations. Discs are centred at random,
/// or on the bisector of `a` and `c` so both lie on the boundary, and are
/// made as small as possible around `a` and `c` unless slack is drawn.
pub fn lemma_harness(trials: usize, seed: u64) -> LemmaReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = LemmaReport::default();
    while report.trials < trials {
        let center = QPoint::new(small_rat(&mut rng, 20, 7), small_rat(&mut rng, 20, 7));
        let radius = rat(rng.gen_range(1..=30), rng.gen_range(1..=6));
        let mut us: Vec<Rat> = (0..4).map(|_| small_rat(&mut rng, 40, 9)).collect();
        us.sort();
        us.dedup();
        if us.len() < 4 {
            continue;
        }
        let [a, b, c, d] = [0, 1, 2, 3].map(|k| circle_point(&center, &radius, &us[k]));
        let dc = if rng.gen_bool(0.5) {
            let s = small_rat(&mut rng, 30, 5);
            &a.midpoint(&c) + &(&c - &a).rot90().scale(&s)
        } else {
            let scale = rat(3, 1) * &radius;
            let jitter = |rng: &mut ChaCha8Rng| small_rat(rng, 60, 20) * &scale / rat(3, 1);
            QPoint::new(&center.x + jitter(&mut rng), &center.y + jitter(&mut rng))
        };
        let reach = dc.dist2(&a).max(dc.dist2(&c));
        let slack = if rng.gen_bool(0.4) { Rat::zero() } else { rat(rng.gen_range(1..=50), rng.gen_range(1..=400)) * &reach };
        let mode = if slack.is_zero() || rng.gen_bool(0.5) { Mode::Closed } else { Mode::Open };
        let disc = Disc::new(dc, &reach + &slack, mode);
        let radius_sq = &radius * &radius;
        let ok = circle_lemma_check(&center, &radius_sq, &a, &b, &c, &d, &disc).expect("generated configuration is valid");
        report.trials += 1;
        report.violations += !ok as usize;
        report.tight += slack.is_zero() as usize;
        report.closed += (mode == Mode::Closed) as usize;
    }
    report
}
