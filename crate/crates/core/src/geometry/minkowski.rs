//! Causal orders on Minkowski spacetime and their cone sections.

use std::fmt;

use num_traits::Signed;

use super::{Disc, GeometryError, Mode, QPoint, Rat};

/// A point `(x_1, …, x_m, t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Event {
    pub space: Vec<Rat>,
    pub t: Rat,
}

impl Event {
    pub fn new(space: Vec<Rat>, t: Rat) -> Self {
        assert!(!space.is_empty(), "at least one space dimension");
        Event { space, t }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    IrreflexiveSlow,
    IrreflexiveLightspeed,
    ReflexiveSlow,
    ReflexiveLightspeed,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::IrreflexiveSlow, Kind::IrreflexiveLightspeed, Kind::ReflexiveSlow, Kind::ReflexiveLightspeed];

    pub fn is_reflexive(self) -> bool {
        matches!(self, Kind::ReflexiveSlow | Kind::ReflexiveLightspeed)
    }

    pub fn includes_lightspeed(self) -> bool {
        matches!(self, Kind::IrreflexiveLightspeed | Kind::ReflexiveLightspeed)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::IrreflexiveSlow => "irreflexive-slow",
            Kind::IrreflexiveLightspeed => "irreflexive-lightspeed",
            Kind::ReflexiveSlow => "reflexive-slow",
            Kind::ReflexiveLightspeed => "reflexive-lightspeed",
        })
    }
}

/// `t < t'` and the squared spatial distance is below (or, with lightspeed,
/// at most) `(t' - t)^2`; reflexive kinds also relate an event to itself.
pub fn minkowski_related(e1: &Event, e2: &Event, kind: Kind) -> Result<bool, GeometryError> {
    if e1.space.len() != e2.space.len() {
        return Err(GeometryError::Dimension(e1.space.len(), e2.space.len()));
    }
    if kind.is_reflexive() && e1 == e2 {
        return Ok(true);
    }
    let dt = &e2.t - &e1.t;
    if !dt.is_positive() {
        return Ok(false);
    }
    let dist: Rat = e1.space.iter().zip(&e2.space).map(|(a, b)| (a - b) * (a - b)).sum();
    let bound = &dt * &dt;
    Ok(if kind.includes_lightspeed() { dist <= bound } else { dist < bound })
}

/// The trace on the plane `t = 0` of the past cone of `z`.
pub fn cone_section(z: &Event, kind: Kind) -> Result<Disc, GeometryError> {
    if z.space.len() != 2 {
        return Err(GeometryError::Dimension(z.space.len(), 2));
    }
    if !z.t.is_positive() {
        return Err(GeometryError::Precondition("event must lie above the plane"));
    }
    let mode = if kind.includes_lightspeed() { Mode::Closed } else { Mode::Open };
    Ok(Disc::new(QPoint::new(z.space[0].clone(), z.space[1].clone()), &z.t * &z.t, mode))
}
