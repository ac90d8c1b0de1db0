//! Exact plane geometry for the binary-tree embedding.
//!
//! Nodes of the infinite binary tree map into the plane; the forbidden set is
//! the two lines `y = x ± 2` plus, for every pair of siblings, the ray from
//! their midpoint in direction `(1, 1)`. Two nodes are related when some disc
//! contains both and misses every obstacle.

mod disc;
mod lemma;
mod minkowski;
mod quad;

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use disc::{
    certificates, disc_avoids, disc_exists, segment_meets, tilde_relation, tree_adjacent, verify_tilde, Certificate,
    Disc, Mode, VerifyReport, OBSTACLE_MARGIN,
};
pub use lemma::{circle_lemma_check, cyclic_order, lemma_harness, LemmaReport};
pub use minkowski::{cone_section, minkowski_related, Event, Kind};
pub use quad::{rational_between, QuadAlg};

pub type Rat = BigRational;

/// `n / d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("points coincide")]
    Degenerate,
    #[error("bad node id `{0}`: expected a string over 0 and 1")]
    BadNode(String),
    #[error("precondition failed: {0}")]
    Precondition(&'static str),
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoint {
    pub x: Rat,
    pub y: Rat,
}

impl QPoint {
    pub fn new(x: Rat, y: Rat) -> Self {
        QPoint { x, y }
    }

    pub fn origin() -> Self {
        QPoint::new(Rat::zero(), Rat::zero())
    }

    pub fn dot(&self, o: &QPoint) -> Rat {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn norm2(&self) -> Rat {
        self.dot(self)
    }

    pub fn dist2(&self, o: &QPoint) -> Rat {
        (self - o).norm2()
    }

    /// Quarter turn counter-clockwise.
    pub fn rot90(&self) -> QPoint {
        QPoint::new(-&self.y, self.x.clone())
    }

    pub fn midpoint(&self, o: &QPoint) -> QPoint {
        let half = rat(1, 2);
        QPoint::new((&self.x + &o.x) * &half, (&self.y + &o.y) * half)
    }

    pub fn scale(&self, k: &Rat) -> QPoint {
        QPoint::new(&self.x * k, &self.y * k)
    }

    /// `x - y`; obstacle lines are its level sets.
    pub fn skew(&self) -> Rat {
        &self.x - &self.y
    }
}

impl Add for &QPoint {
    type Output = QPoint;
    fn add(self, o: &QPoint) -> QPoint {
        QPoint::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub for &QPoint {
    type Output = QPoint;
    fn sub(self, o: &QPoint) -> QPoint {
        QPoint::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Mul<&QPoint> for &Rat {
    type Output = QPoint;
    fn mul(self, p: &QPoint) -> QPoint {
        p.scale(self)
    }
}

impl fmt::Display for QPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A tree node as a bit string; the root is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NodeId(Vec<u8>);

impl NodeId {
    pub fn root() -> Self {
        NodeId(Vec::new())
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        assert!(bits.iter().all(|&b| b < 2), "bits must be 0 or 1");
        NodeId(bits.to_vec())
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, bit: u8) -> NodeId {
        assert!(bit < 2);
        let mut v = self.0.clone();
        v.push(bit);
        NodeId(v)
    }

    pub fn parent(&self) -> Option<NodeId> {
        (!self.0.is_empty()).then(|| NodeId(self.0[..self.0.len() - 1].to_vec()))
    }

    pub fn concat(&self, other: &NodeId) -> NodeId {
        NodeId([self.0.as_slice(), other.0.as_slice()].concat())
    }

    /// All nodes of length at most `depth`, shortest first, then by bits.
    pub fn up_to(depth: usize) -> Vec<NodeId> {
        let mut out = vec![NodeId::root()];
        let mut layer = vec![NodeId::root()];
        for _ in 0..depth {
            layer = layer.iter().flat_map(|n| [n.child(0), n.child(1)]).collect();
            out.extend(layer.iter().cloned());
        }
        out
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for NodeId {
    type Err = GeometryError;
    fn from_str(s: &str) -> Result<Self, GeometryError> {
        if s == "ε" {
            return Ok(NodeId::root());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(GeometryError::BadNode(s.to_string())),
            })
            .collect::<Result<Vec<u8>, _>>()
            .map(NodeId)
    }
}

fn unit(bit: u8) -> QPoint {
    if bit == 0 {
        QPoint::new(Rat::one(), Rat::zero())
    } else {
        QPoint::new(Rat::zero(), Rat::one())
    }
}

/// Bit `i` contributes `2^-i` along the x axis for 0 and the y axis for 1.
pub fn embed_node(id: &NodeId) -> QPoint {
    let mut p = QPoint::origin();
    let mut w = Rat::one();
    for &b in id.bits() {
        if b == 0 {
            p.x += &w;
        } else {
            p.y += &w;
        }
        w /= Rat::from_integer(2.into());
    }
    p
}

pub fn sibling_midpoint(id: &NodeId) -> QPoint {
    embed_node(&id.child(0)).midpoint(&embed_node(&id.child(1)))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Obstacle {
    /// The line `y = x + c`.
    Line(Rat),
    /// `origin + t (1, 1)` for `t >= 0`.
    Ray(QPoint),
}

impl fmt::Display for Obstacle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstacle::Line(c) => write!(f, "line y = x + {c}"),
            Obstacle::Ray(mu) => write!(f, "ray from {mu}"),
        }
    }
}

/// The boundary lines and the rays from sibling midpoints of all nodes of
/// length at most `max_depth`.
pub fn obstacles(max_depth: usize) -> Vec<Obstacle> {
    let mut out = vec![Obstacle::Line(rat(-2, 1)), Obstacle::Line(rat(2, 1))];
    out.extend(NodeId::up_to(max_depth).iter().map(|s| Obstacle::Ray(sibling_midpoint(s))));
    out
}

pub fn dist2_to_obstacle(p: &QPoint, o: &Obstacle) -> Rat {
    let line = |c: &Rat| {
        let w = p.skew() + c;
        &w * &w / Rat::from_integer(2.into())
    };
    match o {
        Obstacle::Line(c) => line(c),
        Obstacle::Ray(mu) => {
            let rel = p - mu;
            if !(&rel.x + &rel.y).is_negative() {
                line(&(&mu.y - &mu.x))
            } else {
                rel.norm2()
            }
        }
    }
}

/// `p ↦ translation + scale · p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub scale: Rat,
    pub translation: QPoint,
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap { scale: Rat::one(), translation: QPoint::origin() }
    }

    pub fn apply(&self, p: &QPoint) -> QPoint {
        &self.translation + &p.scale(&self.scale)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap { scale: &self.scale * &other.scale, translation: self.apply(&other.translation) }
    }

    pub fn apply_disc(&self, d: &Disc) -> Disc {
        Disc { center: self.apply(&d.center), radius_sq: &d.radius_sq * &self.scale * &self.scale, mode: d.mode }
    }
}

/// `σ_{b_0} ∘ … ∘ σ_{b_{k-1}}` where `σ_b(p) = e_b + p / 2`.
pub fn similarity_for(id: &NodeId) -> AffineMap {
    id.bits().iter().fold(AffineMap::identity(), |m, &b| {
        m.compose(&AffineMap { scale: rat(1, 2), translation: unit(b) })
    })
}
