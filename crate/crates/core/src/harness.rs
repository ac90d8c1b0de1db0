//! Exhaustive instance families and the end-to-end sweep.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::game::{self, validate_instance, validate_strategy, GameInstance, Player, Rank, SolveResult, TileType, WHITE};
use crate::logic::{formula_size, is_confluent, is_transitive, Evaluator, Formula};
use crate::model::{check_embedding_condition, extract_strategy, CanonicalModel};
use crate::reduction::{CompileOptions, Compiler, ReductionParams};

pub const BLACK: &str = "black";

/// Size constant for `formula_size <= C * n^2 * b * (s+2)^3 * L`.
///
/// Measured over the n <= 2, s <= 1 family: the maximum ratio is 25.6 with
/// default options and 31.6 with the strict Abelard condition, both at
/// n = 1, s = 0. Rounded up to cover both.
pub const SIZE_CONSTANT: u64 = 32;

/// The polynomial envelope for the compiled formula size.
pub fn size_envelope(params: &ReductionParams) -> u64 {
    let (n, s) = (params.n as u64, params.s as u64);
    n * n * params.b as u64 * (s + 2).pow(3) * params.counter_bits as u64
}

pub fn size_bound(params: &ReductionParams) -> u64 {
    SIZE_CONSTANT * size_envelope(params)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("bad family `{0}`: expected clauses like `n<=2,s=0`")]
pub struct FamilyError(String);

/// Corridor widths and target indices to enumerate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub widths: Vec<usize>,
    pub targets: Vec<usize>,
}

impl Default for Family {
    fn default() -> Self {
        Family { widths: vec![1, 2], targets: vec![0, 1] }
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    /// Comma-separated clauses `n<=K`, `n=K`, `s<=K`, `s=K`; an omitted
    /// variable keeps its default range.
    fn from_str(text: &str) -> Result<Self, FamilyError> {
        let bad = || FamilyError(text.to_string());
        let mut fam = Family::default();
        for clause in text.split(',').map(str::trim).filter(|c| !c.is_empty()) {
            let (var, rest) = clause.split_at(1);
            let (le, num) = match rest.strip_prefix("<=") {
                Some(num) => (true, num),
                None => (false, rest.strip_prefix('=').ok_or_else(bad)?),
            };
            let k: usize = num.trim().parse().map_err(|_| bad())?;
            let range: Vec<usize> = match (var, le) {
                ("n", true) => (1..=k).collect(),
                ("s", true) => (0..=k).collect(),
                (_, false) => vec![k],
                _ => return Err(bad()),
            };
            match var {
                "n" if k >= 1 => fam.widths = range,
                "s" => fam.targets = range,
                _ => return Err(bad()),
            }
        }
        Ok(fam)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("|");
        write!(f, "n in {{{}}}, s in {{{}}}", list(&self.widths), list(&self.targets))
    }
}

/// Every tile over {white, black}, named `name`.
fn all_tiles(name: &str) -> Vec<TileType> {
    let c = |bit: u32, k: u32| if k >> bit & 1 == 1 { BLACK } else { WHITE };
    (0..16).map(|k| TileType::new(name, c(0, k), c(1, k), c(2, k), c(3, k))).collect()
}

fn rows(n: usize, tiles: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|r| (0..tiles).map(move |t| [r.clone(), vec![t]].concat())).collect();
    }
    out
}

/// Enumerates the family exhaustively: the wall `T0` is all white, every
/// other tile ranges over the sixteen two-colour tiles, and the initial row
/// ranges over all rows whose last tile shows white to the right wall.
pub fn family_instances(fam: &Family) -> Vec<GameInstance> {
    let mut out = Vec::new();
    for &s in &fam.targets {
        let mut tile_sets = vec![vec![TileType::all_white("T0")]];
        for k in 1..=s + 1 {
            tile_sets = tile_sets
                .into_iter()
                .flat_map(|set| {
                    all_tiles(&format!("T{k}")).into_iter().map(move |t| [set.clone(), vec![t]].concat())
                })
                .collect();
        }
        for &n in &fam.widths {
            for tiles in &tile_sets {
                for row in rows(n, s + 2) {
                    let inst = GameInstance::new(tiles.clone(), row).expect("well-typed");
                    if validate_instance(&inst).iter().all(|d| !d.is_violation()) {
                        out.push(inst);
                    }
                }
            }
        }
    }
    out
}

/// One sweep line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub n: usize,
    pub s: usize,
    pub winner: Player,
    pub rank: Rank,
    pub play_bound: u64,
    pub verdict: bool,
    pub formula_size: u64,
    pub size_bound: u64,
    pub points: usize,
    /// Transitive, confluent, universal prefix and embedding condition.
    pub frame_ok: bool,
    /// `Some(valid)` for Eloise-winning instances.
    pub strategy_ok: Option<bool>,
}

impl SweepRow {
    pub fn agrees(&self) -> bool {
        self.verdict == (self.winner == Player::Eloise)
    }
}

/// Checks that the `G H` prefix means "everywhere" on this frame: it holds at
/// every point for a valid atom and at no point for one missing somewhere.
fn universal_prefix_ok(cm: &CanonicalModel) -> bool {
    let len = cm.model.frame.len();
    let mut ev = Evaluator::new(&cm.model);
    let everywhere = Compiler::universal(Formula::True);
    if ev.eval(&everywhere).count_ones(..) != len {
        return false;
    }
    // `f` holds at one point only
    let nowhere = Compiler::universal(Formula::var("f"));
    ev.eval(&nowhere).count_ones(..) == 0
}

pub fn run_instance(inst: &GameInstance, options: CompileOptions) -> SweepRow {
    let solved: SolveResult = game::solve(inst);
    run_solved(inst, &solved, options)
}

pub fn run_solved(inst: &GameInstance, solved: &SolveResult, options: CompileOptions) -> SweepRow {
    let compiler = Compiler::with_options(inst, options);
    let phi = compiler.compile();
    let cm = CanonicalModel::build(inst, solved);
    let verdict = Evaluator::new(&cm.model).eval(&phi).contains(cm.root());

    let wf = &cm.witness;
    let frame_ok = is_transitive(&wf.frame)
        && is_confluent(&wf.frame)
        && universal_prefix_ok(&cm)
        && check_embedding_condition(&wf.frame, &cm.graph.adjacency(), &wf.node_map, &cm.forbidden());

    let strategy_ok = (solved.winner == Player::Eloise).then(|| {
        verdict
            && extract_strategy(&cm.model, cm.root(), &compiler.params, &compiler.space)
                .is_ok_and(|st| validate_strategy(inst, &st))
    });

    SweepRow {
        n: inst.n(),
        s: inst.s(),
        winner: solved.winner,
        rank: solved.initial_rank(),
        play_bound: inst.play_bound(),
        verdict,
        formula_size: formula_size(&phi),
        size_bound: size_bound(&compiler.params),
        points: wf.frame.len(),
        frame_ok,
        strategy_ok,
    }
}

/// Aggregate of a sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub instances: usize,
    pub eloise_wins: usize,
    pub agreements: usize,
    pub frame_failures: usize,
    pub strategy_failures: usize,
    pub rank_violations: usize,
    pub size_violations: usize,
    /// Largest `formula_size / envelope` seen, as a pair for exact reporting.
    pub max_size_ratio: (u64, u64),
}

impl SweepSummary {
    pub fn from_rows(rows: &[SweepRow]) -> Self {
        let mut s = SweepSummary { instances: rows.len(), max_size_ratio: (0, 1), ..Default::default() };
        for r in rows {
            s.eloise_wins += (r.winner == Player::Eloise) as usize;
            s.agreements += r.agrees() as usize;
            s.frame_failures += !r.frame_ok as usize;
            s.strategy_failures += (r.strategy_ok == Some(false)) as usize;
            let in_time = r.rank.finite().is_some_and(|k| (k as u64) < r.play_bound);
            s.rank_violations += (r.winner == Player::Eloise && !in_time) as usize;
            s.size_violations += (r.formula_size > r.size_bound) as usize;
            let env = r.size_bound / SIZE_CONSTANT;
            let (a, b) = s.max_size_ratio;
            if r.formula_size * b > a * env {
                s.max_size_ratio = (r.formula_size, env);
            }
        }
        s
    }

    pub fn all_agree(&self) -> bool {
        self.agreements == self.instances
    }

    pub fn agreement_percent(&self) -> f64 {
        if self.instances == 0 {
            100.0
        } else {
            100.0 * self.agreements as f64 / self.instances as f64
        }
    }
}

pub fn sweep(instances: &[GameInstance], options: CompileOptions) -> Vec<SweepRow> {
    instances.iter().map(|inst| run_instance(inst, options)).collect()
}
