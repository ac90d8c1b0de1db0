//! Finite canonical models for compiled instances.
//!
//! The encoded game graph spreads each move over `b` levels and carries a
//! saturating move counter; nodes are identified by (state, depth, counter),
//! which is the quotient of the padded binary game tree by its labels. The
//! witness frame adds one clean upper bound per tree edge, a reflexive top
//! above everything, and a single `f` point below the top so that the top is
//! never clean.

use std::collections::{HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::game::{apply, GameInstance, Player, Position, Rank, SolveResult, State, Strategy, Successor, TileId};
use crate::logic::{KripkeFrame, KripkeModel, Proposition};
use crate::reduction::{bump, IndexDepth, PropSpace, ReductionParams};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("point `{0}` is labelled win but has no winning continuation")]
    ExtractionFailure(String),
    #[error("point `{point}` lacks a {what} label")]
    MissingLabel { point: String, what: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EncodedNode {
    pub state: State,
    /// Level inside the current move, `0..b`.
    pub depth: usize,
    /// Moves made so far, saturating at `2^L - 1`.
    pub counter: u64,
}

#[derive(Debug, Clone)]
pub struct EncodedGraph {
    pub nodes: Vec<EncodedNode>,
    /// Parent-to-child pairs of node indices.
    pub edges: Vec<(usize, usize)>,
    pub params: ReductionParams,
}

impl EncodedGraph {
    pub const ROOT: usize = 0;

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            out[a].push(b);
        }
        out
    }

    /// Unordered adjacency as a set of `(parent, child)` and `(child, parent)`.
    pub fn adjacency(&self) -> HashSet<(usize, usize)> {
        self.edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect()
    }
}

pub fn encode_graph(inst: &GameInstance, solved: &SolveResult) -> EncodedGraph {
    let params = ReductionParams::for_instance(inst);
    let cap = params.counter_max();
    let root = EncodedNode { state: State::Playing(inst.initial_position()), depth: 0, counter: 0 };
    let mut nodes = vec![root.clone()];
    let mut index = HashMap::from([(root, 0usize)]);
    let mut edges = Vec::new();
    let mut cursor = 0;
    while cursor < nodes.len() {
        let node = nodes[cursor].clone();
        let mut children = Vec::new();
        if let State::Playing(pos) = &node.state {
            if node.depth + 1 < params.b {
                children.push(EncodedNode { depth: node.depth + 1, ..node.clone() });
            } else {
                let gi = solved.graph.index[pos];
                for &(tile, succ) in &solved.graph.moves[gi] {
                    let state = match succ {
                        Successor::Live(j) => State::Playing(solved.graph.positions[j].clone()),
                        Successor::Won => apply(inst, pos, tile).expect("legal move"),
                    };
                    children.push(EncodedNode { state, depth: 0, counter: (node.counter + 1).min(cap) });
                }
            }
        }
        for child in children {
            let id = *index.entry(child.clone()).or_insert_with(|| {
                nodes.push(child);
                nodes.len() - 1
            });
            edges.push((cursor, id));
        }
        cursor += 1;
    }
    EncodedGraph { nodes, edges, params }
}

/// An abstract frame realising the tree-embedding condition for a graph.
#[derive(Debug, Clone)]
pub struct WitnessFrame {
    pub frame: KripkeFrame,
    /// Node index to point.
    pub node_map: Vec<usize>,
    /// Edge index to its clean upper bound.
    pub witness_map: Vec<usize>,
    pub top: usize,
    pub fpoint: usize,
}

pub fn witness_frame(g: &EncodedGraph) -> WitnessFrame {
    let mut frame = KripkeFrame::new();
    let node_map: Vec<usize> =
        (0..g.nodes.len()).map(|k| frame.add_point(&format!("n{k}")).expect("fresh")).collect();
    let witness_map: Vec<usize> =
        (0..g.edges.len()).map(|k| frame.add_point(&format!("z{k}")).expect("fresh")).collect();
    let top = frame.add_point("top").expect("fresh");
    let fpoint = frame.add_point("f").expect("fresh");
    for (k, &(a, b)) in g.edges.iter().enumerate() {
        frame.add_edge(node_map[a], witness_map[k]);
        frame.add_edge(node_map[b], witness_map[k]);
    }
    for p in 0..frame.len() {
        frame.add_edge(p, top);
    }
    WitnessFrame { frame, node_map, witness_map, top, fpoint }
}

/// Labels of a node state: index, eloise, and the column contents.
fn label_state(model: &mut KripkeModel, point: usize, pos: &Position, n: usize, space: &PropSpace) {
    model.label(point, &space.index(pos.next_column));
    if pos.player == Player::Eloise {
        model.label(point, &space.eloise());
    }
    for col in 0..=n + 1 {
        model.label(point, &space.col(col, pos.column(col)));
    }
}

/// `win` holds at `(state, j, c)` iff `c < N` and Eloise can force the win
/// within the `N - 1 - c` moves left before the counter reaches `N`.
pub fn bounded_win(rank: Rank, counter: u64, bound: u64) -> bool {
    match rank {
        Rank::Finite(r) => counter < bound && r as u64 <= bound - 1 - counter,
        Rank::Infinite => false,
    }
}

pub fn canonical_valuation(
    inst: &GameInstance,
    g: &EncodedGraph,
    wf: &WitnessFrame,
    solved: &SolveResult,
) -> KripkeModel {
    let params = g.params;
    let space = PropSpace::new(inst, &params);
    let mut model = KripkeModel::new(wf.frame.clone());
    model.label(wf.fpoint, &space.f());
    for (k, node) in g.nodes.iter().enumerate() {
        let p = wf.node_map[k];
        label_state(&mut model, p, node.state.position(), params.n, &space);
        model.label(p, &space.depth(node.depth));
        for bit in 1..=params.counter_bits {
            if node.counter >> (bit - 1) & 1 == 1 {
                model.label(p, &space.q(bit));
            }
        }
        let rank = solved.state_rank(&node.state).expect("state was explored");
        if bounded_win(rank, node.counter, params.play_bound) {
            model.label(p, &space.win());
        }
    }
    model
}

/// Everything built for one instance.
#[derive(Debug, Clone)]
pub struct CanonicalModel {
    pub graph: EncodedGraph,
    pub witness: WitnessFrame,
    pub model: KripkeModel,
}

impl CanonicalModel {
    pub fn build(inst: &GameInstance, solved: &SolveResult) -> Self {
        let graph = encode_graph(inst, solved);
        let witness = witness_frame(&graph);
        let model = canonical_valuation(inst, &graph, &witness, solved);
        CanonicalModel { graph, witness, model }
    }

    pub fn root(&self) -> usize {
        self.witness.node_map[EncodedGraph::ROOT]
    }

    pub fn forbidden(&self) -> FixedBitSet {
        let mut f = FixedBitSet::with_capacity(self.witness.frame.len());
        f.insert(self.witness.fpoint);
        f
    }
}

/// Checks that distinct mapped nodes share an upper bound with no `forbidden`
/// point in its past exactly when they are adjacent.
///
/// Exhaustive over node pairs, organised per upper bound: a pair has a clean
/// common upper bound iff some clean point lies above both images.
pub fn check_embedding_condition(
    frame: &KripkeFrame,
    adjacency: &HashSet<(usize, usize)>,
    node_map: &[usize],
    forbidden: &FixedBitSet,
) -> bool {
    let succ = frame.successors();
    let pred = frame.predecessors();
    let clean: Vec<bool> = (0..frame.len()).map(|z| pred[z].iter().all(|&w| !forbidden.contains(w))).collect();

    let mut nodes_at: HashMap<usize, Vec<usize>> = HashMap::new();
    for (node, &p) in node_map.iter().enumerate() {
        nodes_at.entry(p).or_default().push(node);
    }

    // every clean bound sees only pairwise adjacent nodes
    for z in (0..frame.len()).filter(|&z| clean[z]) {
        let below: Vec<usize> = pred[z].iter().flat_map(|p| nodes_at.get(p).into_iter().flatten().copied()).collect();
        for (k, &x) in below.iter().enumerate() {
            for &y in &below[k + 1..] {
                if x != y && !adjacency.contains(&(x, y)) {
                    return false;
                }
            }
        }
    }

    // every adjacent pair has a clean bound
    adjacency.iter().all(|&(x, y)| {
        let (px, py) = (node_map[x], node_map[y]);
        succ[px].iter().any(|&z| clean[z] && frame.related(py, z))
    })
}

fn labelled(model: &KripkeModel, point: usize, p: &Proposition) -> bool {
    model.is_labelled(point, p)
}

struct Decoder<'a> {
    model: &'a KripkeModel,
    params: &'a ReductionParams,
    space: &'a PropSpace,
}

impl Decoder<'_> {
    fn missing(&self, point: usize, what: &'static str) -> ModelError {
        ModelError::MissingLabel { point: self.model.frame.name(point).to_string(), what }
    }

    fn index_depth(&self, point: usize) -> Option<IndexDepth> {
        let i = (1..=self.params.n).find(|&i| labelled(self.model, point, &self.space.index(i)))?;
        let j = (0..self.params.b).find(|&j| labelled(self.model, point, &self.space.depth(j)))?;
        Some(IndexDepth::new(i, j))
    }

    fn column(&self, point: usize, col: usize) -> Result<TileId, ModelError> {
        (0..self.space.tile_count())
            .find(|&t| labelled(self.model, point, &self.space.col(col, t)))
            .ok_or_else(|| self.missing(point, "column"))
    }

    fn position(&self, point: usize) -> Result<Position, ModelError> {
        let id = self.index_depth(point).ok_or_else(|| self.missing(point, "index/depth"))?;
        let player = if labelled(self.model, point, &self.space.eloise()) { Player::Eloise } else { Player::Abelard };
        let last_row = (1..=self.params.n).map(|c| self.column(point, c)).collect::<Result<_, _>>()?;
        Ok(Position { player, last_row, next_column: id.i })
    }

    fn counter(&self, point: usize) -> u64 {
        (1..=self.params.counter_bits)
            .filter(|&k| labelled(self.model, point, &self.space.q(k)))
            .map(|k| 1u64 << (k - 1))
            .sum()
    }
}

/// Reads a strategy for Eloise off a model in which the compiled formula
/// holds at `root`.
///
/// Children of a node are the points carrying the next index/depth label that
/// share a clean upper bound with it. The walk follows one winning child at
/// Eloise nodes and every child at Abelard nodes. When a position is met at
/// several counter values the choice made at the largest counter is kept, so
/// the counter strictly increases along every play of the resulting
/// positional strategy.
pub fn extract_strategy(
    model: &KripkeModel,
    root: usize,
    params: &ReductionParams,
    space: &PropSpace,
) -> Result<Strategy, ModelError> {
    let frame = &model.frame;
    let succ = frame.successors();
    let pred = frame.predecessors();
    let f = space.f();
    let win = space.win();
    let target = space.tile_count() - 1;
    let clean: Vec<bool> = (0..frame.len()).map(|z| pred[z].iter().all(|&w| !labelled(model, w, &f))).collect();
    let dec = Decoder { model, params, space };

    let children = |x: usize| -> Vec<usize> {
        let Some(id) = dec.index_depth(x) else { return Vec::new() };
        let next = bump(id, params.n, params.b);
        let (idx, dep) = (space.index(next.i), space.depth(next.j));
        let mut out: Vec<usize> = succ[x]
            .iter()
            .filter(|&&z| clean[z])
            .flat_map(|&z| pred[z].iter().copied())
            .filter(|&y| y != x && labelled(model, y, &idx) && labelled(model, y, &dep))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    };

    let mut choices: HashMap<Position, (u64, TileId)> = HashMap::new();
    let mut seen = HashSet::from([root]);
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        let kids = children(x);
        let winning: Vec<usize> = kids.iter().copied().filter(|&y| labelled(model, y, &win)).collect();
        let placed = labelled(model, x, &space.col(1, target));
        let eloise = labelled(model, x, &space.eloise());
        let next: Vec<usize> = if eloise {
            match winning.first() {
                Some(&y) => {
                    let id = dec.index_depth(x).ok_or_else(|| dec.missing(x, "index/depth"))?;
                    if id.j + 1 == params.b {
                        let pos = dec.position(x)?;
                        let tile = dec.column(y, id.i)?;
                        let c = dec.counter(x);
                        let entry = choices.entry(pos).or_insert((c, tile));
                        if c > entry.0 {
                            *entry = (c, tile);
                        }
                    }
                    vec![y]
                }
                None if placed => vec![],
                None => return Err(ModelError::ExtractionFailure(frame.name(x).to_string())),
            }
        } else if !kids.is_empty() && winning.len() == kids.len() {
            kids
        } else if placed {
            vec![]
        } else {
            return Err(ModelError::ExtractionFailure(frame.name(x).to_string()));
        };
        for y in next {
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    Ok(Strategy { choices: choices.into_iter().map(|(p, (_, t))| (p, t)).collect() })
}
