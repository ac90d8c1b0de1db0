//! Two-player corridor-tiling games.
//!
//! Eloise and Abelard alternately place Wang tiles left to right in a corridor
//! of width `n` whose walls (columns `0` and `n + 1`) are filled with the wall
//! tile `T_0`. Placing the target tile `T_{s+1}` in column 1 ends the game with
//! a win for Eloise; a stuck mover or an infinite play is a win for Abelard.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Name of the wall colour.
pub const WHITE: &str = "white";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("an instance needs at least two tile types (wall and target), got {0}")]
    TooFewTiles(usize),
    #[error("the initial row is empty")]
    EmptyCorridor,
    #[error("initial row names unknown tile index {0}")]
    UnknownTile(usize),
    #[error("tile `{tile}` is not a legal move at this position")]
    IllegalMove { tile: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// An interned colour token.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Color(Arc<str>);

impl Color {
    pub fn new(name: &str) -> Self {
        Color(Arc::from(name))
    }

    pub fn white() -> Self {
        Color::new(WHITE)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_white(&self) -> bool {
        &*self.0 == WHITE
    }
}

impl fmt::Debug for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Index of a tile type within [`GameInstance::tiles`].
pub type TileId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TileType {
    pub name: String,
    pub left: Color,
    pub right: Color,
    pub up: Color,
    pub down: Color,
}

impl TileType {
    pub fn new(name: &str, left: &str, right: &str, up: &str, down: &str) -> Self {
        TileType {
            name: name.to_string(),
            left: Color::new(left),
            right: Color::new(right),
            up: Color::new(up),
            down: Color::new(down),
        }
    }

    pub fn all_white(name: &str) -> Self {
        TileType::new(name, WHITE, WHITE, WHITE, WHITE)
    }

    pub fn is_all_white(&self) -> bool {
        self.left.is_white() && self.right.is_white() && self.up.is_white() && self.down.is_white()
    }
}

/// `tile` may sit right of `left_tile` and on top of `below`.
pub fn compatible(left_tile: &TileType, tile: &TileType, below: &TileType) -> bool {
    left_tile.right == tile.left && tile.down == below.up
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Eloise,
    Abelard,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Eloise => Player::Abelard,
            Player::Abelard => Player::Eloise,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Eloise => f.write_str("Eloise"),
            Player::Abelard => f.write_str("Abelard"),
        }
    }
}

/// Everything needed to continue a play: the mover, the last tile placed in
/// each column `1..=n`, and the (1-based) column of the next placement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub player: Player,
    pub last_row: Vec<TileId>,
    pub next_column: usize,
}

impl Position {
    /// Last tile in column `col`, where columns `0` and `n + 1` are walls.
    pub fn column(&self, col: usize) -> TileId {
        if col == 0 || col > self.last_row.len() {
            0
        } else {
            self.last_row[col - 1]
        }
    }
}

/// Result of a placement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum State {
    Playing(Position),
    /// The target tile went into column 1. The board is recorded as if play
    /// had continued: mover toggled, column advanced.
    Won(Position),
}

impl State {
    pub fn position(&self) -> &Position {
        match self {
            State::Playing(p) | State::Won(p) => p,
        }
    }

    pub fn is_won(&self) -> bool {
        matches!(self, State::Won(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameInstance {
    tiles: Vec<TileType>,
    initial_row: Vec<TileId>,
}

impl GameInstance {
    pub fn new(tiles: Vec<TileType>, initial_row: Vec<TileId>) -> Result<Self, GameError> {
        if tiles.len() < 2 {
            return Err(GameError::TooFewTiles(tiles.len()));
        }
        if initial_row.is_empty() {
            return Err(GameError::EmptyCorridor);
        }
        if let Some(&bad) = initial_row.iter().find(|&&t| t >= tiles.len()) {
            return Err(GameError::UnknownTile(bad));
        }
        Ok(GameInstance { tiles, initial_row })
    }

    pub fn tiles(&self) -> &[TileType] {
        &self.tiles
    }

    pub fn tile(&self, id: TileId) -> &TileType {
        &self.tiles[id]
    }

    pub fn tile_id(&self, name: &str) -> Option<TileId> {
        self.tiles.iter().position(|t| t.name == name)
    }

    pub fn initial_row(&self) -> &[TileId] {
        &self.initial_row
    }

    /// Corridor width.
    pub fn n(&self) -> usize {
        self.initial_row.len()
    }

    /// Number of tile types minus two.
    pub fn s(&self) -> usize {
        self.tiles.len() - 2
    }

    pub const WALL: TileId = 0;

    pub fn target(&self) -> TileId {
        self.tiles.len() - 1
    }

    pub fn initial_position(&self) -> Position {
        Position {
            player: Player::Eloise,
            last_row: self.initial_row.clone(),
            next_column: 1,
        }
    }

    /// `N = 2n(s+2)^n`, the number of distinct positions (saturating).
    pub fn play_bound(&self) -> u64 {
        play_bound(self.n(), self.s())
    }

    pub fn legal_moves(&self, pos: &Position) -> Vec<TileId> {
        legal_moves(self, pos)
    }

    pub fn apply(&self, pos: &Position, tile: TileId) -> Result<State, GameError> {
        apply(self, pos, tile)
    }

    /// Parses the line-oriented instance format:
    ///
    /// ```text
    /// corridor 1
    /// tile T0 white white white white
    /// tile T1 white white white white
    /// initial T0
    /// ```
    ///
    /// The first tile listed is the wall tile, the last one the target.
    pub fn parse(text: &str) -> Result<Self, GameError> {
        let mut width: Option<(usize, usize)> = None;
        let mut tiles: Vec<TileType> = Vec::new();
        let mut initial: Option<(usize, Vec<String>)> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| GameError::Parse { line: line_no, msg };
            let words: Vec<&str> = line.split_whitespace().collect();
            match words[0] {
                "corridor" => {
                    if words.len() != 2 {
                        return Err(err("expected `corridor <n>`".into()));
                    }
                    let n: usize = words[1]
                        .parse()
                        .map_err(|_| err(format!("bad corridor width `{}`", words[1])))?;
                    if n == 0 {
                        return Err(err("corridor width must be at least 1".into()));
                    }
                    width = Some((n, line_no));
                }
                "tile" => {
                    if words.len() != 6 {
                        return Err(err("expected `tile <id> <left> <right> <up> <down>`".into()));
                    }
                    if !valid_token(words[1]) {
                        return Err(err(format!("bad tile id `{}`", words[1])));
                    }
                    if tiles.iter().any(|t| t.name == words[1]) {
                        return Err(err(format!("duplicate tile id `{}`", words[1])));
                    }
                    tiles.push(TileType::new(words[1], words[2], words[3], words[4], words[5]));
                }
                "initial" => {
                    initial = Some((line_no, words[1..].iter().map(|w| w.to_string()).collect()));
                }
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        let (init_line, names) = initial.ok_or(GameError::Parse {
            line: text.lines().count(),
            msg: "missing `initial` line".into(),
        })?;
        let mut row = Vec::with_capacity(names.len());
        for name in &names {
            let id = tiles.iter().position(|t| &t.name == name).ok_or_else(|| GameError::Parse {
                line: init_line,
                msg: format!("unknown tile `{name}` in initial row"),
            })?;
            row.push(id);
        }
        if let Some((n, line)) = width {
            if n != row.len() {
                return Err(GameError::Parse {
                    line,
                    msg: format!("corridor width {n} but initial row has {} tiles", row.len()),
                });
            }
        }
        GameInstance::new(tiles, row)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("corridor {}\n", self.n());
        for t in &self.tiles {
            out.push_str(&format!("tile {} {} {} {} {}\n", t.name, t.left, t.right, t.up, t.down));
        }
        let names: Vec<&str> = self.initial_row.iter().map(|&i| self.tiles[i].name.as_str()).collect();
        out.push_str(&format!("initial {}\n", names.join(" ")));
        out
    }
}

pub(crate) fn valid_token(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.')
}

pub fn play_bound(n: usize, s: usize) -> u64 {
    (s as u64 + 2)
        .checked_pow(n as u32)
        .and_then(|p| p.checked_mul(2 * n as u64))
        .unwrap_or(u64::MAX)
}

pub fn legal_moves(inst: &GameInstance, pos: &Position) -> Vec<TileId> {
    let col = pos.next_column;
    let left = inst.tile(pos.column(col - 1));
    let below = inst.tile(pos.column(col));
    let last = col == inst.n();
    (0..inst.tiles.len())
        .filter(|&t| {
            let tile = inst.tile(t);
            compatible(left, tile, below) && (!last || tile.right.is_white())
        })
        .collect()
}

pub fn apply(inst: &GameInstance, pos: &Position, tile: TileId) -> Result<State, GameError> {
    if tile >= inst.tiles.len() || !legal_moves(inst, pos).contains(&tile) {
        return Err(GameError::IllegalMove {
            tile: inst.tiles.get(tile).map_or_else(|| tile.to_string(), |t| t.name.clone()),
        });
    }
    let mut last_row = pos.last_row.clone();
    last_row[pos.next_column - 1] = tile;
    let next = Position {
        player: pos.player.other(),
        last_row,
        next_column: pos.next_column % inst.n() + 1,
    };
    if tile == inst.target() && pos.next_column == 1 {
        Ok(State::Won(next))
    } else {
        Ok(State::Playing(next))
    }
}

/// Successor of a live position in the explored game graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Successor {
    Live(usize),
    Won,
}

/// The finite graph of positions reachable from the initial position.
#[derive(Debug, Clone)]
pub struct GameGraph {
    pub positions: Vec<Position>,
    pub index: HashMap<Position, usize>,
    /// Per position, the legal moves in ascending tile order.
    pub moves: Vec<Vec<(TileId, Successor)>>,
}

impl GameGraph {
    pub fn explore(inst: &GameInstance) -> Self {
        let start = inst.initial_position();
        let mut positions = vec![start.clone()];
        let mut index = HashMap::from([(start, 0usize)]);
        let mut moves = Vec::new();
        let mut cursor = 0;
        while cursor < positions.len() {
            let pos = positions[cursor].clone();
            let mut here = Vec::new();
            for tile in legal_moves(inst, &pos) {
                let succ = match apply(inst, &pos, tile).expect("legal move") {
                    State::Won(_) => Successor::Won,
                    State::Playing(next) => {
                        let id = *index.entry(next.clone()).or_insert_with(|| {
                            positions.push(next);
                            positions.len() - 1
                        });
                        Successor::Live(id)
                    }
                };
                here.push((tile, succ));
            }
            moves.push(here);
            cursor += 1;
        }
        GameGraph { positions, index, moves }
    }
}

pub fn enumerate_positions(inst: &GameInstance) -> Vec<Position> {
    GameGraph::explore(inst).positions
}

/// Number of further moves within which Eloise can force the winning
/// placement. `Infinite` sorts above every finite rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    Finite(u32),
    Infinite,
}

impl Rank {
    pub fn finite(self) -> Option<u32> {
        match self {
            Rank::Finite(r) => Some(r),
            Rank::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Rank::Finite(_))
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(r) => write!(f, "{r}"),
            Rank::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub winner: Player,
    pub graph: GameGraph,
    /// Rank of each live position, aligned with `graph.positions`.
    pub ranks: Vec<Rank>,
}

impl SolveResult {
    pub fn initial_rank(&self) -> Rank {
        self.ranks[0]
    }

    pub fn rank(&self, pos: &Position) -> Option<Rank> {
        self.graph.index.get(pos).map(|&i| self.ranks[i])
    }

    pub fn state_rank(&self, state: &State) -> Option<Rank> {
        match state {
            State::Won(_) => Some(Rank::Finite(0)),
            State::Playing(p) => self.rank(p),
        }
    }

    fn successor_rank(&self, succ: Successor) -> Rank {
        match succ {
            Successor::Won => Rank::Finite(0),
            Successor::Live(i) => self.ranks[i],
        }
    }

    /// Rank-minimising choices at every Eloise position of finite rank.
    pub fn optimal_strategy(&self) -> Strategy {
        let mut choices = HashMap::new();
        for (i, pos) in self.graph.positions.iter().enumerate() {
            if pos.player != Player::Eloise || !self.ranks[i].is_finite() {
                continue;
            }
            if let Some(&(tile, _)) = self.graph.moves[i]
                .iter()
                .min_by_key(|(_, succ)| self.successor_rank(*succ))
            {
                choices.insert(pos.clone(), tile);
            }
        }
        Strategy { choices }
    }

    /// Abelard's reply that delays the win longest (any move if he is lost
    /// anyway, the first if he can escape).
    pub fn abelard_reply(&self, pos: &Position) -> Option<TileId> {
        let i = *self.graph.index.get(pos)?;
        self.graph.moves[i]
            .iter()
            .max_by_key(|(tile, succ)| (self.successor_rank(*succ), std::cmp::Reverse(*tile)))
            .map(|&(tile, _)| tile)
    }
}

/// Backward induction over the reachable position graph.
///
/// Ranks are filled in non-decreasing order from the winning placements: an
/// Eloise position is settled by its first settled successor, an Abelard
/// position by its last. Whatever is left unsettled (cycles, stuck Eloise,
/// escaping Abelard) has infinite rank.
pub fn solve(inst: &GameInstance) -> SolveResult {
    let graph = GameGraph::explore(inst);
    let count = graph.positions.len();
    let mut ranks = vec![Rank::Infinite; count];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); count];
    let mut pending: Vec<usize> = graph.moves.iter().map(Vec::len).collect();
    let mut queue = VecDeque::new();

    for (i, moves) in graph.moves.iter().enumerate() {
        let mut wins_now = false;
        for &(_, succ) in moves {
            match succ {
                Successor::Live(j) => preds[j].push(i),
                Successor::Won => wins_now = true,
            }
        }
        let player = graph.positions[i].player;
        if wins_now {
            match player {
                Player::Eloise => {
                    ranks[i] = Rank::Finite(1);
                    queue.push_back(i);
                }
                Player::Abelard => {
                    let won = moves.iter().filter(|(_, s)| *s == Successor::Won).count();
                    pending[i] -= won;
                    if pending[i] == 0 {
                        ranks[i] = Rank::Finite(1);
                        queue.push_back(i);
                    }
                }
            }
        }
    }

    while let Some(j) = queue.pop_front() {
        let Rank::Finite(r) = ranks[j] else { unreachable!() };
        for &i in &preds[j] {
            if ranks[i].is_finite() {
                continue;
            }
            match graph.positions[i].player {
                Player::Eloise => {
                    ranks[i] = Rank::Finite(r + 1);
                    queue.push_back(i);
                }
                Player::Abelard => {
                    // one decrement per edge, parallel edges included
                    pending[i] -= 1;
                    if pending[i] == 0 {
                        ranks[i] = Rank::Finite(r + 1);
                        queue.push_back(i);
                    }
                }
            }
        }
    }

    let winner = if ranks[0].is_finite() { Player::Eloise } else { Player::Abelard };
    SolveResult { winner, graph, ranks }
}

/// A positional strategy for Eloise.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Strategy {
    pub choices: HashMap<Position, TileId>,
}

impl Strategy {
    pub fn choose(&self, pos: &Position) -> Option<TileId> {
        self.choices.get(pos).copied()
    }
}

/// True iff every play following `strat` against every Abelard reply reaches
/// the winning placement within `N` moves without repeating a position.
pub fn validate_strategy(inst: &GameInstance, strat: &Strategy) -> bool {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        OnPath,
        Done(u64),
    }

    // Longest number of moves to a win from `pos`, or None on failure.
    fn visit(
        inst: &GameInstance,
        strat: &Strategy,
        pos: &Position,
        marks: &mut HashMap<Position, Mark>,
    ) -> Option<u64> {
        match marks.get(pos) {
            Some(Mark::OnPath) => return None,
            Some(Mark::Done(d)) => return Some(*d),
            None => {}
        }
        marks.insert(pos.clone(), Mark::OnPath);
        let replies = match pos.player {
            Player::Eloise => vec![strat.choose(pos)?],
            Player::Abelard => legal_moves(inst, pos),
        };
        if replies.is_empty() {
            return None;
        }
        let mut longest = 0;
        for tile in replies {
            let depth = match apply(inst, pos, tile).ok()? {
                State::Won(_) => 1,
                State::Playing(next) => 1 + visit(inst, strat, &next, marks)?,
            };
            longest = longest.max(depth);
        }
        marks.insert(pos.clone(), Mark::Done(longest));
        Some(longest)
    }

    let mut marks = HashMap::new();
    match visit(inst, strat, &inst.initial_position(), &mut marks) {
        Some(depth) => depth <= inst.play_bound(),
        None => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    /// A side of the wall tile is not white.
    WallNotWhite { side: &'static str, color: Color },
    /// The last initial tile does not show white to the right wall.
    RightWallMismatch { color: Color },
    /// Informational: initial tiles `column - 1` and `column` do not match.
    InitialMismatch { column: usize },
}

impl Diagnostic {
    /// Whether this is a violation, as opposed to an informational note.
    pub fn is_violation(&self) -> bool {
        !matches!(self, Diagnostic::InitialMismatch { .. })
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::WallNotWhite { side, color } => {
                write!(f, "violation: wall tile {side} side is `{color}`, expected white")
            }
            Diagnostic::RightWallMismatch { color } => {
                write!(f, "violation: last initial tile shows `{color}` to the right wall")
            }
            Diagnostic::InitialMismatch { column } => {
                write!(f, "note: initial tiles in columns {} and {column} do not match", column - 1)
            }
        }
    }
}

pub fn validate_instance(inst: &GameInstance) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let wall = inst.tile(GameInstance::WALL);
    for (side, color) in [("left", &wall.left), ("right", &wall.right), ("up", &wall.up), ("down", &wall.down)] {
        if !color.is_white() {
            out.push(Diagnostic::WallNotWhite { side, color: color.clone() });
        }
    }
    let last = inst.tile(*inst.initial_row().last().expect("non-empty row"));
    if !last.right.is_white() {
        out.push(Diagnostic::RightWallMismatch { color: last.right.clone() });
    }
    for col in 2..=inst.n() {
        let a = inst.tile(inst.initial_row()[col - 2]);
        let b = inst.tile(inst.initial_row()[col - 1]);
        if a.right != b.left {
            out.push(Diagnostic::InitialMismatch { column: col });
        }
    }
    out
}
