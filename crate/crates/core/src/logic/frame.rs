use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use super::{LogicError, Proposition};
use crate::game::valid_token;

/// A finite frame: named points plus an accessibility relation.
#[derive(Debug, Clone, Default)]
pub struct KripkeFrame {
    names: Vec<String>,
    index: HashMap<String, usize>,
    rel: Vec<(usize, usize)>,
    rel_set: HashSet<(usize, usize)>,
}

impl KripkeFrame {
    pub fn new() -> Self {
        Self::default()
    }

    /// A frame on points `0..count` named by their index.
    pub fn with_points(count: usize) -> Self {
        let mut frame = Self::new();
        for i in 0..count {
            frame.add_point(&i.to_string()).expect("fresh name");
        }
        frame
    }

    pub fn add_point(&mut self, name: &str) -> Result<usize, LogicError> {
        if self.index.contains_key(name) {
            return Err(LogicError::DuplicatePoint(name.to_string()));
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Adds `a → b`; repeated edges are ignored.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a < self.names.len() && b < self.names.len(), "edge endpoint out of range");
        if self.rel_set.insert((a, b)) {
            self.rel.push((a, b));
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn point(&self, name: &str) -> Result<usize, LogicError> {
        self.index.get(name).copied().ok_or_else(|| LogicError::UnknownPoint(name.to_string()))
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.rel
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.rel_set.contains(&(a, b))
    }

    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.len()];
        for &(a, b) in &self.rel {
            out[a].push(b);
        }
        out
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.len()];
        for &(a, b) in &self.rel {
            out[b].push(a);
        }
        out
    }

    /// Removes a point and its edges; remaining points keep their names.
    pub fn without_point(&self, victim: usize) -> KripkeFrame {
        let mut frame = KripkeFrame::new();
        let mut remap = vec![usize::MAX; self.len()];
        for (i, name) in self.names.iter().enumerate() {
            if i != victim {
                remap[i] = frame.add_point(name).expect("names are unique");
            }
        }
        for &(a, b) in &self.rel {
            if a != victim && b != victim {
                frame.add_edge(remap[a], remap[b]);
            }
        }
        frame
    }
}

/// `x < y < z` implies `x < z`.
pub fn is_transitive(frame: &KripkeFrame) -> bool {
    let succ = frame.successors();
    frame
        .edges()
        .iter()
        .all(|&(x, y)| succ[y].iter().all(|&z| frame.related(x, z)))
}

/// `x < y` and `x < z` imply some `w` with `y < w` and `z < w`.
pub fn is_confluent(frame: &KripkeFrame) -> bool {
    let succ = frame.successors();
    succ.iter().all(|ys| {
        ys.iter().enumerate().all(|(k, &y)| {
            ys[k..].iter().all(|&z| {
                let (small, other) = if succ[y].len() <= succ[z].len() { (y, z) } else { (z, y) };
                succ[small].iter().any(|&w| frame.related(other, w))
            })
        })
    })
}

/// A frame together with a valuation of propositions.
#[derive(Debug, Clone, Default)]
pub struct KripkeModel {
    pub frame: KripkeFrame,
    valuation: HashMap<Proposition, FixedBitSet>,
}

impl KripkeModel {
    pub fn new(frame: KripkeFrame) -> Self {
        KripkeModel { frame, valuation: HashMap::new() }
    }

    pub fn label(&mut self, point: usize, prop: &Proposition) {
        let len = self.frame.len();
        assert!(point < len, "label on unknown point");
        let set = self.valuation.entry(prop.clone()).or_insert_with(|| FixedBitSet::with_capacity(len));
        set.grow(len);
        set.insert(point);
    }

    pub fn is_labelled(&self, point: usize, prop: &Proposition) -> bool {
        self.valuation.get(prop).is_some_and(|s| s.contains(point))
    }

    /// Valuation of `prop`, sized to the frame.
    pub fn extension(&self, prop: &Proposition) -> FixedBitSet {
        let mut set = self.valuation.get(prop).cloned().unwrap_or_default();
        set.grow(self.frame.len());
        set
    }

    pub fn labels_at(&self, point: usize) -> Vec<&Proposition> {
        let mut out: Vec<&Proposition> =
            self.valuation.iter().filter(|(_, s)| s.contains(point)).map(|(p, _)| p).collect();
        out.sort();
        out
    }

    pub fn propositions(&self) -> impl Iterator<Item = &Proposition> {
        self.valuation.keys()
    }

    /// Parses `point <id>`, `edge <a> <b>` and `label <point> <prop>` lines.
    pub fn parse(text: &str) -> Result<Self, LogicError> {
        let mut model = KripkeModel::default();
        let mut labels = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |msg: String| LogicError::ModelFormat { line, msg };
            let words: Vec<&str> = body.split_whitespace().collect();
            match (words[0], words.len()) {
                ("point", 2) => {
                    if !valid_token(words[1]) {
                        return Err(err(format!("bad point id `{}`", words[1])));
                    }
                    model.frame.add_point(words[1]).map_err(|e| err(e.to_string()))?;
                }
                ("edge", 3) => {
                    let a = model.frame.point(words[1]).map_err(|e| err(e.to_string()))?;
                    let b = model.frame.point(words[2]).map_err(|e| err(e.to_string()))?;
                    model.frame.add_edge(a, b);
                }
                ("label", 3) => {
                    let p = model.frame.point(words[1]).map_err(|e| err(e.to_string()))?;
                    if !valid_token(words[2]) {
                        return Err(err(format!("bad proposition `{}`", words[2])));
                    }
                    labels.push((p, Proposition::new(words[2])));
                }
                _ => return Err(err(format!("unrecognised line `{body}`"))),
            }
        }
        for (p, prop) in labels {
            model.label(p, &prop);
        }
        Ok(model)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.frame.len() {
            writeln!(out, "point {}", self.frame.name(i)).unwrap();
        }
        for &(a, b) in self.frame.edges() {
            writeln!(out, "edge {} {}", self.frame.name(a), self.frame.name(b)).unwrap();
        }
        let mut props: Vec<&Proposition> = self.valuation.keys().collect();
        props.sort();
        for i in 0..self.frame.len() {
            for p in &props {
                if self.valuation[*p].contains(i) {
                    writeln!(out, "label {} {}", self.frame.name(i), p).unwrap();
                }
            }
        }
        out
    }
}
