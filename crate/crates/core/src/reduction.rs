//! Compilation of a corridor-tiling instance into a tense-logic formula that
//! states "the initial position is a win for Eloise".
//!
//! Game positions are drawn on the nodes of a binary tree: each move is spread
//! over `b` tree levels, so a node carries a column index and a depth. Two
//! macros, [`Compiler::diamond`] and [`Compiler::boxed`], speak about the tree
//! children of a node through a clean common upper bound (one with no `f`
//! point in its past).

use std::fmt;

use crate::game::{compatible, play_bound, GameInstance, TileId};
use crate::logic::{Formula, Proposition};

/// Size parameters of the encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionParams {
    /// Corridor width.
    pub n: usize,
    /// Tile types minus two.
    pub s: usize,
    /// Tree levels per move.
    pub b: usize,
    /// Bound on the length of a useful play, `2n(s+2)^n`.
    pub play_bound: u64,
    /// Width of the move counter in bits.
    pub counter_bits: usize,
}

impl ReductionParams {
    pub fn new(n: usize, s: usize) -> Self {
        let play_bound = play_bound(n, s);
        ReductionParams {
            n,
            s,
            b: branching_factor(s),
            play_bound,
            counter_bits: (u64::BITS - play_bound.leading_zeros()) as usize,
        }
    }

    pub fn for_instance(inst: &GameInstance) -> Self {
        Self::new(inst.n(), inst.s())
    }

    /// Largest representable counter value, `2^L - 1`.
    pub fn counter_max(&self) -> u64 {
        if self.counter_bits >= 64 {
            u64::MAX
        } else {
            (1u64 << self.counter_bits) - 1
        }
    }
}

/// `max(3, ⌈log₂(s + 2)⌉)`.
pub fn branching_factor(s: usize) -> usize {
    let x = s as u64 + 2;
    let ceil_log = (u64::BITS - (x - 1).leading_zeros()) as usize;
    ceil_log.max(3)
}

/// Column index and depth of a tree node, `1 ≤ i ≤ n`, `0 ≤ j < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexDepth {
    pub i: usize,
    pub j: usize,
}

impl IndexDepth {
    pub fn new(i: usize, j: usize) -> Self {
        IndexDepth { i, j }
    }

    /// All pairs in `[1, n] × [0, b-1]`, row-major.
    pub fn all(n: usize, b: usize) -> impl Iterator<Item = IndexDepth> {
        (1..=n).flat_map(move |i| (0..b).map(move |j| IndexDepth { i, j }))
    }
}

/// Index and depth of the children of a node labelled `id`.
pub fn bump(id: IndexDepth, n: usize, b: usize) -> IndexDepth {
    if id.j + 1 < b {
        IndexDepth::new(id.i, id.j + 1)
    } else if id.i < n {
        IndexDepth::new(id.i + 1, 0)
    } else {
        IndexDepth::new(1, 0)
    }
}

/// Names of the propositional variables used by the encoding.
#[derive(Debug, Clone)]
pub struct PropSpace {
    n: usize,
    b: usize,
    counter_bits: usize,
    tiles: Vec<String>,
}

impl PropSpace {
    pub fn new(inst: &GameInstance, params: &ReductionParams) -> Self {
        PropSpace {
            n: params.n,
            b: params.b,
            counter_bits: params.counter_bits,
            tiles: inst.tiles().iter().map(|t| t.name.clone()).collect(),
        }
    }

    pub fn f(&self) -> Proposition {
        Proposition::new("f")
    }

    pub fn index(&self, i: usize) -> Proposition {
        Proposition::new(&format!("index_{i}"))
    }

    pub fn depth(&self, j: usize) -> Proposition {
        Proposition::new(&format!("depth_{j}"))
    }

    pub fn col(&self, i: usize, tile: TileId) -> Proposition {
        Proposition::new(&format!("col_{i}_{}", self.tiles[tile]))
    }

    pub fn eloise(&self) -> Proposition {
        Proposition::new("eloise")
    }

    pub fn win(&self) -> Proposition {
        Proposition::new("win")
    }

    /// Counter bit `k`, `1 ≤ k ≤ L`; `q_1` is the least significant.
    pub fn q(&self, k: usize) -> Proposition {
        Proposition::new(&format!("q_{k}"))
    }

    pub fn tile_count(&self) -> usize {
        self.tiles.len()
    }

    /// Every proposition of the space, in declaration order.
    pub fn all(&self) -> Vec<Proposition> {
        let mut out = vec![self.f()];
        out.extend((1..=self.n).map(|i| self.index(i)));
        out.extend((0..self.b).map(|j| self.depth(j)));
        for i in 0..=self.n + 1 {
            out.extend((0..self.tiles.len()).map(|t| self.col(i, t)));
        }
        out.push(self.eloise());
        out.push(self.win());
        out.extend((1..=self.counter_bits).map(|k| self.q(k)));
        out
    }

    pub fn contains(&self, p: &Proposition) -> bool {
        self.all().contains(p)
    }
}

/// The conjuncts of the compiled formula, in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
    X,
    XI,
    XII,
    XIII,
    XIV,
    XV,
    XVI,
    XVII,
    XVIII,
    XIX,
    XX,
}

impl Condition {
    pub const ALL: [Condition; 20] = [
        Condition::I,
        Condition::II,
        Condition::III,
        Condition::IV,
        Condition::V,
        Condition::VI,
        Condition::VII,
        Condition::VIII,
        Condition::IX,
        Condition::X,
        Condition::XI,
        Condition::XII,
        Condition::XIII,
        Condition::XIV,
        Condition::XV,
        Condition::XVI,
        Condition::XVII,
        Condition::XVIII,
        Condition::XIX,
        Condition::XX,
    ];

    pub fn description(self) -> &'static str {
        match self {
            Condition::I => "initial position and depth",
            Condition::II => "unique index",
            Condition::III => "unique depth",
            Condition::IV => "depths exactly on nodes",
            Condition::V => "some tile in every column",
            Condition::VI => "at most one tile per column",
            Condition::VII => "walls hold the wall tile",
            Condition::VIII => "position fixed inside a move",
            Condition::IX => "untouched columns persist",
            Condition::X => "players alternate",
            Condition::XI => "placed tiles match left and below",
            Condition::XII => "column n matches the right wall",
            Condition::XIII => "all Abelard moves present",
            Condition::XIV => "root is winning",
            Condition::XV => "winning is justified",
            Condition::XVI => "counter starts at zero",
            Condition::XVII => "counter fixed inside a move",
            Condition::XVIII => "counter increment, low bit 0",
            Condition::XIX => "counter increment with carry",
            Condition::XX => "counter at bound is losing",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions {
    /// Also require every Abelard move in column `n` (with the right-wall
    /// filter), not just in columns `1..n`.
    pub strict_abelard: bool,
    /// Restrict the Abelard-completeness condition to nodes whose index is
    /// the column in question. Without the guard the condition also fires at
    /// Abelard nodes about to play a different column, where no child can
    /// change the column it talks about.
    pub abelard_column_guard: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions { strict_abelard: false, abelard_column_guard: true }
    }
}

/// Builds the formula for one instance.
pub struct Compiler<'a> {
    inst: &'a GameInstance,
    pub params: ReductionParams,
    pub space: PropSpace,
    pub options: CompileOptions,
}

fn v(p: Proposition) -> Formula {
    Formula::Var(p)
}

impl<'a> Compiler<'a> {
    pub fn new(inst: &'a GameInstance) -> Self {
        Self::with_options(inst, CompileOptions::default())
    }

    pub fn with_options(inst: &'a GameInstance, options: CompileOptions) -> Self {
        let params = ReductionParams::for_instance(inst);
        let space = PropSpace::new(inst, &params);
        Compiler { inst, params, space, options }
    }

    pub fn beta(&self, id: IndexDepth) -> Formula {
        v(self.space.index(id.i)).and(v(self.space.depth(id.j)))
    }

    /// "is a node".
    pub fn beta_any(&self) -> Formula {
        Formula::disj((1..=self.params.n).map(|i| v(self.space.index(i))))
    }

    /// "for some child".
    pub fn diamond(&self, phi: &Formula) -> Formula {
        let clean = v(self.space.f()).not().always_past();
        Formula::disj(IndexDepth::all(self.params.n, self.params.b).map(|id| {
            let child = self.beta(bump(id, self.params.n, self.params.b));
            self.beta(id).and(child.and(phi.clone()).past().and(clean.clone()).future())
        }))
    }

    /// "for all children".
    pub fn boxed(&self, phi: &Formula) -> Formula {
        let clean = v(self.space.f()).not().always_past();
        Formula::conj(IndexDepth::all(self.params.n, self.params.b).map(|id| {
            let child = self.beta(bump(id, self.params.n, self.params.b));
            self.beta(id)
                .implies(clean.clone().implies(child.implies(phi.clone()).always_past()).always_future())
        }))
    }

    /// `G H φ`: on transitive confluent frames, φ everywhere in the component.
    pub fn universal(phi: Formula) -> Formula {
        phi.always_past().always_future()
    }

    /// `(x → □x) ∧ (¬x → □¬x)`.
    fn persist(&self, x: Formula) -> Formula {
        let keep = x.clone().implies(self.boxed(&x));
        let keep_not = x.clone().not().implies(self.boxed(&x.not()));
        keep.and(keep_not)
    }

    fn col(&self, i: usize, t: TileId) -> Formula {
        v(self.space.col(i, t))
    }

    fn last_depth(&self) -> Formula {
        v(self.space.depth(self.params.b - 1))
    }

    fn tiles(&self) -> std::ops::Range<TileId> {
        0..self.inst.tiles().len()
    }

    /// Tiles that may go right of `left` and on top of `below`.
    fn fitting(&self, left: TileId, below: TileId) -> Vec<TileId> {
        self.tiles()
            .filter(|&t| compatible(self.inst.tile(left), self.inst.tile(t), self.inst.tile(below)))
            .collect()
    }

    /// `⋀_k (q_k or ¬q_k)` spelling `value` in binary, least significant first.
    pub fn counter_equals(&self, value: u64) -> Formula {
        assert!(value <= self.params.counter_max(), "value does not fit the counter");
        Formula::conj((1..=self.params.counter_bits).map(|k| {
            let q = v(self.space.q(k));
            if value >> (k - 1) & 1 == 1 {
                q
            } else {
                q.not()
            }
        }))
    }

    pub fn condition(&self, k: Condition) -> Formula {
        let n = self.params.n;
        let b = self.params.b;
        let sp = &self.space;
        let node = self.beta_any();
        let inside_move = node.clone().and(self.last_depth().not());
        let u = Self::universal;
        match k {
            Condition::I => {
                let mut parts = vec![v(sp.eloise()), self.beta(IndexDepth::new(1, 0)), self.col(0, GameInstance::WALL)];
                parts.extend(self.inst.initial_row().iter().enumerate().map(|(c, &t)| self.col(c + 1, t)));
                parts.push(self.col(n + 1, GameInstance::WALL));
                Formula::conj(parts)
            }
            Condition::II => u(Formula::conj((1..=n).flat_map(|i| {
                (1..=n).filter(move |&j| j != i).map(move |j| v(sp.index(i)).implies(v(sp.index(j)).not()))
            }))),
            Condition::III => u(Formula::conj((0..b).flat_map(|i| {
                (0..b).filter(move |&j| j != i).map(move |j| v(sp.depth(i)).implies(v(sp.depth(j)).not()))
            }))),
            Condition::IV => u(node.iff(Formula::disj((0..b).map(|j| v(sp.depth(j)))))),
            Condition::V => u(node.implies(Formula::conj(
                (0..=n + 1).map(|i| Formula::disj(self.tiles().map(|t| self.col(i, t)))),
            ))),
            Condition::VI => Formula::conj((0..=n + 1).flat_map(|i| {
                self.tiles().flat_map(move |a| {
                    self.tiles()
                        .filter(move |&c| c != a)
                        .map(move |c| u(self.col(i, a).implies(self.col(i, c).not())))
                })
            })),
            Condition::VII => u(node.implies(self.col(0, GameInstance::WALL).and(self.col(n + 1, GameInstance::WALL)))),
            Condition::VIII => {
                let mut parts = vec![u(inside_move.clone().implies(self.persist(v(sp.eloise()))))];
                for i in 1..=n {
                    for t in self.tiles() {
                        parts.push(u(inside_move.clone().implies(self.persist(self.col(i, t)))));
                    }
                }
                Formula::conj(parts)
            }
            Condition::IX => {
                let mut parts = Vec::new();
                for i in 1..=n {
                    for j in (1..=n).filter(|&j| j != i) {
                        for t in self.tiles() {
                            parts.push(u(self.beta(IndexDepth::new(i, b - 1)).implies(self.persist(self.col(j, t)))));
                        }
                    }
                }
                Formula::conj(parts)
            }
            Condition::X => {
                let e = v(sp.eloise());
                let flip = e.clone().implies(self.boxed(&e.clone().not())).and(e.clone().not().implies(self.boxed(&e)));
                u(self.last_depth().implies(flip))
            }
            Condition::XI => {
                let mut parts = Vec::new();
                for i in 1..=n {
                    for left in self.tiles() {
                        for below in self.tiles() {
                            let pre = Formula::conj([
                                self.beta(IndexDepth::new(i, b - 1)),
                                self.col(i - 1, left),
                                self.col(i, below),
                            ]);
                            let options = Formula::disj(self.fitting(left, below).into_iter().map(|t| self.col(i, t)));
                            parts.push(u(pre.implies(self.boxed(&options))));
                        }
                    }
                }
                Formula::conj(parts)
            }
            Condition::XII => u(node.implies(Formula::disj(
                self.tiles().filter(|&t| self.inst.tile(t).right.is_white()).map(|t| self.col(n, t)),
            ))),
            Condition::XIII => {
                let last_col = if self.options.strict_abelard { n } else { n - 1 };
                let mut parts = Vec::new();
                for i in 1..=last_col {
                    for below in self.tiles() {
                        for left in self.tiles() {
                            let mut pre = vec![v(sp.eloise()).not(), self.last_depth()];
                            if self.options.abelard_column_guard {
                                pre.push(v(sp.index(i)));
                            }
                            pre.push(self.col(i, below));
                            pre.push(self.col(i - 1, left));
                            let moves = self
                                .fitting(left, below)
                                .into_iter()
                                .filter(|&t| i < n || self.inst.tile(t).right.is_white())
                                .map(|t| self.diamond(&self.col(i, t)));
                            parts.push(u(Formula::conj(pre).implies(Formula::conj(moves))));
                        }
                    }
                }
                Formula::conj(parts)
            }
            Condition::XIV => v(sp.win()),
            Condition::XV => {
                let win = v(sp.win());
                let e = v(sp.eloise());
                let placed = self.col(1, self.inst.target());
                let abelard = Formula::conj([e.clone().not(), self.diamond(&Formula::True), self.boxed(&win)]);
                let eloise = e.and(self.diamond(&win));
                u(win.clone().implies(Formula::disj([placed, abelard, eloise])))
            }
            Condition::XVI => Formula::conj((1..=self.params.counter_bits).rev().map(|k| v(sp.q(k)).not())),
            Condition::XVII => u(inside_move.implies(Formula::conj(
                (1..=self.params.counter_bits).map(|k| self.persist(v(sp.q(k)))),
            ))),
            Condition::XVIII => {
                let low = v(sp.q(1));
                let rest = (2..=self.params.counter_bits).map(|k| self.persist(v(sp.q(k))));
                let post = Formula::conj(std::iter::once(self.boxed(&low)).chain(rest));
                u(self.last_depth().and(low.not()).implies(post))
            }
            Condition::XIX => {
                let bits = self.params.counter_bits;
                Formula::conj((1..bits).map(|k| {
                    let carry = Formula::conj((1..=k).map(|l| v(sp.q(l))));
                    let pre = Formula::conj([self.last_depth(), v(sp.q(k + 1)).not(), carry]);
                    let flipped = Formula::conj(
                        std::iter::once(v(sp.q(k + 1))).chain((1..=k).map(|l| v(sp.q(l)).not())),
                    );
                    let post = Formula::conj(
                        std::iter::once(self.boxed(&flipped))
                            .chain((k + 2..=bits).map(|l| self.persist(v(sp.q(l))))),
                    );
                    u(pre.implies(post))
                }))
            }
            Condition::XX => {
                u(node.and(self.counter_equals(self.params.play_bound)).implies(v(sp.win()).not()))
            }
        }
    }

    pub fn compile(&self) -> Formula {
        Formula::conj(Condition::ALL.iter().map(|&k| self.condition(k)))
    }
}

/// The formula for `inst` with default options.
pub fn compile(inst: &GameInstance) -> Formula {
    Compiler::new(inst).compile()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::TileType;
    use crate::logic::{formula_size, print_formula};

    fn instance_a() -> GameInstance {
        GameInstance::new(vec![TileType::all_white("T0"), TileType::all_white("T1")], vec![0]).unwrap()
    }

    #[test]
    fn branching() {
        assert_eq!(branching_factor(0), 3);
        assert_eq!(branching_factor(6), 3);
        assert_eq!(branching_factor(7), 4);
        // oracle: smallest b with 2^b ≥ s + 2, clamped at 3
        for s in 0..200usize {
            let b = (0..).find(|&b| 1usize << b >= s + 2).unwrap();
            assert_eq!(branching_factor(s), b.max(3));
        }
    }

    #[test]
    fn bump_cases() {
        assert_eq!(bump(IndexDepth::new(1, 0), 2, 3), IndexDepth::new(1, 1));
        assert_eq!(bump(IndexDepth::new(1, 2), 2, 3), IndexDepth::new(2, 0));
        assert_eq!(bump(IndexDepth::new(2, 2), 2, 3), IndexDepth::new(1, 0));
    }

    #[test]
    fn bump_is_one_cycle() {
        for n in 1..5 {
            for b in 3..6 {
                let mut id = IndexDepth::new(1, 0);
                let mut len = 0;
                loop {
                    let next = bump(id, n, b);
                    assert_ne!(bump(next, n, b), id, "(i,j)++ must differ from (i,j)");
                    id = next;
                    len += 1;
                    if id == IndexDepth::new(1, 0) {
                        break;
                    }
                }
                assert_eq!(len, n * b);
            }
        }
    }

    #[test]
    fn params() {
        let p = ReductionParams::new(1, 0);
        assert_eq!((p.b, p.play_bound, p.counter_bits), (3, 4, 3));
        let p = ReductionParams::new(2, 1);
        assert_eq!((p.play_bound, p.counter_bits), (36, 6));
        for n in 1..4 {
            for s in 0..4 {
                let p = ReductionParams::new(n, s);
                let l = p.counter_bits as u32;
                assert!(1u64 << (l - 1) <= p.play_bound && p.play_bound < 1u64 << l);
            }
        }
    }

    #[test]
    fn beta_shapes() {
        let inst = instance_a();
        let c = Compiler::new(&inst);
        assert_eq!(c.beta(IndexDepth::new(1, 0)), Formula::var("index_1").and(Formula::var("depth_0")));
        assert_eq!(c.beta_any(), Formula::var("index_1"));
        let wide = GameInstance::new(inst.tiles().to_vec(), vec![0, 0]).unwrap();
        assert_eq!(Compiler::new(&wide).beta_any(), Formula::var("index_1").or(Formula::var("index_2")));
    }

    #[test]
    fn diamond_expansion() {
        let inst = instance_a();
        let c = Compiler::new(&inst);
        let d = c.diamond(&Formula::True);
        let mut disjuncts = 0;
        let mut cur = &d;
        let clean = Formula::var("f").not().always_past();
        loop {
            let (head, rest) = match cur {
                Formula::Or(a, b) => (&**a, Some(&**b)),
                other => (other, None),
            };
            disjuncts += 1;
            let Formula::And(_, fut) = head else { panic!("disjunct shape") };
            let Formula::Future(inner) = &**fut else { panic!("F expected") };
            let Formula::And(past, h) = &**inner else { panic!("P ∧ H expected") };
            assert!(matches!(&**past, Formula::Past(_)));
            assert_eq!(**h, clean);
            match rest {
                Some(r) => cur = r,
                None => break,
            }
        }
        assert_eq!(disjuncts, 3);
    }

    #[test]
    fn condition_shapes() {
        let inst = instance_a();
        let c = Compiler::new(&inst);
        let expected = Formula::conj([
            Formula::var("eloise"),
            Formula::var("index_1").and(Formula::var("depth_0")),
            Formula::var("col_0_T0"),
            Formula::var("col_1_T0"),
            Formula::var("col_2_T0"),
        ]);
        assert_eq!(c.condition(Condition::I), expected);
        assert_eq!(c.condition(Condition::XIV), Formula::var("win"));
        assert_eq!(c.params.counter_bits, 3);
        assert_eq!(
            c.condition(Condition::XVI),
            Formula::conj([Formula::var("q_3").not(), Formula::var("q_2").not(), Formula::var("q_1").not()])
        );
        // n = 1: no column below n, so the Abelard condition is empty
        assert_eq!(c.condition(Condition::XIII), Formula::True);
    }

    #[test]
    fn counter_values() {
        let inst = instance_a();
        let c = Compiler::new(&inst);
        let nq = |k: usize| Formula::var(&format!("q_{k}")).not();
        let q = |k: usize| Formula::var(&format!("q_{k}"));
        assert_eq!(c.counter_equals(0), Formula::conj([nq(1), nq(2), nq(3)]));
        assert_eq!(c.counter_equals(4), Formula::conj([nq(1), nq(2), q(3)]));
        // n = 1 with eight tile types: N = 16, L = 5
        let tiles: Vec<TileType> = (0..8).map(|t| TileType::all_white(&format!("T{t}"))).collect();
        let wide = GameInstance::new(tiles, vec![0]).unwrap();
        let c5 = Compiler::new(&wide);
        assert_eq!((c5.params.play_bound, c5.params.counter_bits), (16, 5));
        assert_eq!(c5.counter_equals(16), Formula::conj([nq(1), nq(2), nq(3), nq(4), q(5)]));
    }

    #[test]
    fn compiled_props_stay_in_space() {
        let inst = GameInstance::new(
            vec![TileType::all_white("T0"), TileType::new("X", WHITE_, "black", WHITE_, WHITE_), TileType::all_white("T2")],
            vec![1, 0],
        )
        .unwrap();
        for strict in [false, true] {
            let c = Compiler::with_options(&inst, CompileOptions { strict_abelard: strict, ..Default::default() });
            let phi = c.compile();
            for p in phi.propositions() {
                assert!(c.space.contains(&p), "stray proposition {p}");
            }
            assert_eq!(print_formula(&phi), print_formula(&c.compile()));
            assert!(formula_size(&phi) > 0);
        }
    }

    const WHITE_: &str = crate::game::WHITE;
}
