//! Discs, obstacle avoidance and the disc relation between tree nodes.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};

use super::quad::{rational_between, QuadAlg};
use super::{dist2_to_obstacle, embed_node, obstacles, rat, sibling_midpoint, GeometryError, NodeId, Obstacle, QPoint, Rat};

/// Obstacles are enumerated this many levels below the deepest tested node.
pub const OBSTACLE_MARGIN: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Open,
    Closed,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Open => "open",
            Mode::Closed => "closed",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "open" => Ok(Mode::Open),
            "closed" => Ok(Mode::Closed),
            _ => Err(format!("unknown disc mode `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disc {
    pub center: QPoint,
    pub radius_sq: Rat,
    pub mode: Mode,
}

impl Disc {
    pub fn new(center: QPoint, radius_sq: Rat, mode: Mode) -> Self {
        assert!(radius_sq.is_positive(), "radius must be positive");
        Disc { center, radius_sq, mode }
    }

    pub fn contains(&self, p: &QPoint) -> bool {
        let d = self.center.dist2(p);
        match self.mode {
            Mode::Open => d < self.radius_sq,
            Mode::Closed => d <= self.radius_sq,
        }
    }
}

impl fmt::Display for Disc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} disc at {} with r² = {}", self.mode, self.center, self.radius_sq)
    }
}

fn clear_of(d: &Disc, o: &Obstacle) -> bool {
    let dist = dist2_to_obstacle(&d.center, o);
    match d.mode {
        Mode::Closed => dist > d.radius_sq,
        Mode::Open => dist >= d.radius_sq,
    }
}

pub fn disc_avoids(d: &Disc, obs: &[Obstacle]) -> bool {
    obs.iter().all(|o| clear_of(d, o))
}

/// Whether the closed segment `pq` meets the obstacle. Any disc through
/// both endpoints then meets it too.
pub fn segment_meets(p: &QPoint, q: &QPoint, o: &Obstacle) -> bool {
    let c = match o {
        Obstacle::Line(c) => c.clone(),
        Obstacle::Ray(mu) => &mu.y - &mu.x,
    };
    let (gp, gq) = (p.skew() + &c, q.skew() + &c);
    if (&gp * &gq).is_positive() {
        return false;
    }
    let Obstacle::Ray(mu) = o else { return true };
    let along = |x: &QPoint| &x.x + &x.y;
    if gp.is_zero() && gq.is_zero() {
        return along(p).max(along(q)) >= along(mu);
    }
    let u = &gp / (&gp - &gq);
    let hit = p + &(q - p).scale(&u);
    along(&hit) >= along(mu)
}

/// `g(t) = A t^2 + B t + C`: clearance minus squared radius along the pencil.
struct Poly([Rat; 3]);

impl Poly {
    fn roots(&self) -> Vec<QuadAlg> {
        QuadAlg::roots(&self.0[0], &self.0[1], &self.0[2]).unwrap_or_default()
    }
}

/// Circles through `p` and `q`: centres `m + t r` with `r = rot90(q - p)`.
struct Pencil {
    p: QPoint,
    m: QPoint,
    r: QPoint,
    rho0: Rat,
    r2: Rat,
}

impl Pencil {
    fn new(p: &QPoint, q: &QPoint) -> Self {
        let m = p.midpoint(q);
        let r = (q - p).rot90();
        let rho0 = m.dist2(p);
        let r2 = r.norm2();
        Pencil { p: p.clone(), m, r, rho0, r2 }
    }

    fn center(&self, t: &Rat) -> QPoint {
        &self.m + &self.r.scale(t)
    }

    fn radius_sq(&self, t: &Rat) -> Rat {
        self.center(t).dist2(&self.p)
    }

    fn line_poly(&self, c: &Rat) -> Poly {
        let half = rat(1, 2);
        let w0 = self.m.skew() + c;
        let w1 = self.r.skew();
        Poly([&w1 * &w1 * &half - &self.r2, &w0 * &w1, &w0 * &w0 * half - &self.rho0])
    }

    /// Parameter values where the sign of the obstacle constraint may change.
    fn critical(&self, o: &Obstacle) -> Vec<QuadAlg> {
        match o {
            Obstacle::Line(c) => self.line_poly(c).roots(),
            Obstacle::Ray(mu) => {
                let mut out = self.line_poly(&(&mu.y - &mu.x)).roots();
                let d = &self.m - mu;
                let two = rat(2, 1);
                out.extend(Poly([Rat::zero(), two * self.r.dot(&d), d.norm2() - &self.rho0]).roots());
                let slope = &self.r.x + &self.r.y;
                if !slope.is_zero() {
                    out.push(QuadAlg::rational(-(&d.x + &d.y) / slope));
                }
                out
            }
        }
    }
}

/// One rational parameter strictly inside every cell cut out by `crit`.
fn cell_samples(mut crit: Vec<QuadAlg>) -> Vec<Rat> {
    crit.sort();
    crit.dedup();
    let Some(first) = crit.first() else { return vec![Rat::zero()] };
    let mut out = vec![first.bounds(0).0 - rat(1, 1)];
    out.extend(crit.windows(2).map(|w| rational_between(&w[0], &w[1])));
    out.push(crit.last().expect("non-empty").bounds(0).1 + rat(1, 1));
    out
}

/// Decides whether some disc of the given mode contains `p` and `q` and
/// avoids every obstacle, returning a witness when one exists.
///
/// Only discs with `p` and `q` on the boundary need to be searched: their
/// centres form a line, each obstacle contributes a piecewise quadratic
/// constraint in the line parameter, and the feasible set is open, so a
/// sample inside each cell between the sorted critical values decides it.
/// Constraints are added lazily: a candidate feasible for the current subset
/// is checked against the full list and any obstacle it hits joins the
/// subset.
pub fn disc_exists(p: &QPoint, q: &QPoint, obs: &[Obstacle], mode: Mode) -> Result<Option<Disc>, GeometryError> {
    if p == q {
        return Err(GeometryError::Degenerate);
    }
    if obs.iter().any(|o| segment_meets(p, q, o)) {
        return Ok(None);
    }
    let pencil = Pencil::new(p, q);
    let mut active: Vec<usize> = (0..obs.len()).filter(|&k| matches!(obs[k], Obstacle::Line(_))).collect();
    let mut crit: Vec<QuadAlg> = active.iter().flat_map(|&k| pencil.critical(&obs[k])).collect();
    'refine: loop {
        for t in cell_samples(crit.clone()) {
            let center = pencil.center(&t);
            let rho = pencil.radius_sq(&t);
            if !active.iter().all(|&k| dist2_to_obstacle(&center, &obs[k]) > rho) {
                continue;
            }
            // the obstacle reaching deepest into the candidate disc
            let worst = (0..obs.len())
                .map(|k| (dist2_to_obstacle(&center, &obs[k]), k))
                .filter(|(d, _)| *d <= rho)
                .min();
            let Some((_, k)) = worst else {
                let radius_sq = match mode {
                    Mode::Closed => rho,
                    Mode::Open => {
                        let clearance = obs.iter().map(|o| dist2_to_obstacle(&center, o)).min().expect("lines present");
                        (rho + clearance) / rat(2, 1)
                    }
                };
                return Ok(Some(Disc::new(center, radius_sq, mode)));
            };
            crit.extend(pencil.critical(&obs[k]));
            active.push(k);
            continue 'refine;
        }
        return Ok(None);
    }
}

pub fn tree_adjacent(a: &NodeId, b: &NodeId) -> bool {
    a.parent().as_ref() == Some(b) || b.parent().as_ref() == Some(a)
}

/// Unordered pairs of distinct nodes of length at most `depth` related by
/// some obstacle-free disc, each pair listed in enumeration order.
pub fn tilde_relation(depth: usize, mode: Mode) -> Result<BTreeSet<(NodeId, NodeId)>, GeometryError> {
    Ok(verify_tilde(depth, mode)?.related)
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub depth: usize,
    pub mode: Mode,
    pub nodes: usize,
    pub obstacles: usize,
    pub pairs_checked: usize,
    pub related: BTreeSet<(NodeId, NodeId)>,
    pub tree_edges: usize,
    /// Pairs where the disc relation and tree adjacency disagree, with the
    /// disc relation's answer.
    pub mismatches: Vec<(NodeId, NodeId, bool)>,
}

pub fn verify_tilde(depth: usize, mode: Mode) -> Result<VerifyReport, GeometryError> {
    if depth == 0 {
        return Err(GeometryError::Precondition("depth must be at least 1"));
    }
    let nodes = NodeId::up_to(depth);
    let points: Vec<QPoint> = nodes.iter().map(embed_node).collect();
    let obs = obstacles(depth + OBSTACLE_MARGIN);
    let mut report = VerifyReport {
        depth,
        mode,
        nodes: nodes.len(),
        obstacles: obs.len(),
        pairs_checked: 0,
        related: BTreeSet::new(),
        tree_edges: 0,
        mismatches: Vec::new(),
    };
    for a in 0..nodes.len() {
        for b in a + 1..nodes.len() {
            let rel = disc_exists(&points[a], &points[b], &obs, mode)?.is_some();
            let adj = tree_adjacent(&nodes[a], &nodes[b]);
            report.pairs_checked += 1;
            report.tree_edges += adj as usize;
            if rel {
                report.related.insert((nodes[a].clone(), nodes[b].clone()));
            }
            if rel != adj {
                report.mismatches.push((nodes[a].clone(), nodes[b].clone(), rel));
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Less,
    Equal,
    Greater,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Less => "<",
            Relation::Equal => "=",
            Relation::Greater => ">",
        })
    }
}

/// An exact comparison `value relation bound`, recomputed from the kernel.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub name: String,
    pub value: Rat,
    pub relation: Relation,
    pub bound: Rat,
}

impl Certificate {
    fn new(name: &str, value: Rat, relation: Relation, bound: Rat) -> Self {
        Certificate { name: name.to_string(), value, relation, bound }
    }

    pub fn holds(&self) -> bool {
        let ord = self.value.cmp(&self.bound);
        match self.relation {
            Relation::Less => ord.is_lt(),
            Relation::Equal => ord.is_eq(),
            Relation::Greater => ord.is_gt(),
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.holds() { "ok" } else { "FAILED" };
        write!(f, "{:<44} {:>10} {} {:<10} {status}", self.name, self.value.to_string(), self.relation, self.bound.to_string())
    }
}

/// The disc through the root and its child `1`, and the circle showing that
/// the root and its grandchild `11` are unrelated.
pub fn certificates() -> Vec<Certificate> {
    use Relation::*;
    let node = |s: &str| embed_node(&s.parse().expect("valid node"));
    let witness = QPoint::new(rat(-1, 4), rat(1, 2));
    let w_r2 = rat(4, 9);
    let far = obstacles(6 + OBSTACLE_MARGIN);
    let min_clear = far.iter().map(|o| dist2_to_obstacle(&witness, o)).min().expect("non-empty");
    let circle = QPoint::new(rat(-7, 32), rat(23, 32));
    let c_r2 = rat(289, 512);
    let touch = QPoint::new(rat(-3, 4), rat(5, 4));
    vec![
        Certificate::new("witness: |c - ε|²", witness.dist2(&node("")), Less, w_r2.clone()),
        Certificate::new("witness: |c - 1|²", witness.dist2(&node("1")), Less, w_r2.clone()),
        Certificate::new("witness: clearance to y = x + 2", dist2_to_obstacle(&witness, &Obstacle::Line(rat(2, 1))), Greater, w_r2.clone()),
        Certificate::new(
            "witness: clearance to ray at mid(ε)",
            dist2_to_obstacle(&witness, &Obstacle::Ray(sibling_midpoint(&NodeId::root()))),
            Greater,
            w_r2.clone(),
        ),
        Certificate::new(
            "witness: clearance to ray at mid(1)",
            dist2_to_obstacle(&witness, &Obstacle::Ray(sibling_midpoint(&"1".parse().expect("valid")))),
            Greater,
            w_r2.clone(),
        ),
        Certificate::new("witness: min clearance, obstacles(10)", min_clear, Greater, w_r2),
        Certificate::new("circle: |c - ε|²", circle.dist2(&node("")), Equal, c_r2.clone()),
        Certificate::new("circle: |c - mid(ε)|²", circle.dist2(&sibling_midpoint(&NodeId::root())), Equal, c_r2.clone()),
        Certificate::new("circle: clearance to y = x + 2", dist2_to_obstacle(&circle, &Obstacle::Line(rat(2, 1))), Equal, c_r2.clone()),
        Certificate::new("circle: touch point on y = x + 2", &touch.y - &touch.x, Equal, rat(2, 1)),
        Certificate::new("circle: |c - touch point|²", circle.dist2(&touch), Equal, c_r2.clone()),
        Certificate::new("circle: |c - 10|²", circle.dist2(&node("10")), Greater, c_r2.clone()),
        Certificate::new("circle: |c - 11|²", circle.dist2(&node("11")), Greater, c_r2),
    ]
}
