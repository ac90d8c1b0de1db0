//! Corridor-tiling games, their compilation into tense-logic formulas, finite
//! model checking of the result, and the exact plane geometry that embeds the
//! binary tree into a spacelike plane of Minkowski spacetime.
//!
//! * [`game`]: instances, legal moves, backward-induction solving, strategies.
//! * [`logic`]: formulas over `F`/`P`, finite Kripke models, evaluation.
//! * [`reduction`]: the game-to-formula compiler and its modal macros.
//! * [`model`]: canonical models built from solved games, strategy extraction.
//! * [`geometry`]: exact rational discs, obstacles and the tree embedding.
//! * [`harness`]: instance families and end-to-end sweeps.

pub mod game;
pub mod geometry;
pub mod harness;
pub mod logic;
pub mod model;
pub mod reduction;
