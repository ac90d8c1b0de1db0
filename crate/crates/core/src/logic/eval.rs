use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::{Formula, KripkeModel, LogicError, Proposition};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Var(Proposition),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Iff(usize, usize),
    Future(usize),
    Past(usize),
    AlwaysFuture(usize),
    AlwaysPast(usize),
}

/// Bottom-up labelling over a fixed model.
///
/// Formulas are hash-consed into a DAG keyed by structure, so structurally
/// equal subterms are evaluated once no matter how they are shared.
pub struct Evaluator<'m> {
    model: &'m KripkeModel,
    src: Vec<u32>,
    dst: Vec<u32>,
    nodes: HashMap<Node, usize>,
    sets: Vec<FixedBitSet>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m KripkeModel) -> Self {
        let (src, dst) = model.frame.edges().iter().map(|&(a, b)| (a as u32, b as u32)).unzip();
        Evaluator { model, src, dst, nodes: HashMap::new(), sets: Vec::new() }
    }

    pub fn model(&self) -> &KripkeModel {
        self.model
    }

    /// Set of points where `f` holds.
    pub fn eval(&mut self, f: &Formula) -> &FixedBitSet {
        let mut by_ptr = HashMap::new();
        let id = self.intern(f, &mut by_ptr);
        &self.sets[id]
    }

    /// Number of distinct subformulas evaluated so far.
    pub fn distinct_subformulas(&self) -> usize {
        self.sets.len()
    }

    fn intern(&mut self, f: &Formula, by_ptr: &mut HashMap<*const Formula, usize>) -> usize {
        let key = f as *const Formula;
        if let Some(&id) = by_ptr.get(&key) {
            return id;
        }
        let node = match f {
            Formula::True => Node::True,
            Formula::False => Node::False,
            Formula::Var(p) => Node::Var(p.clone()),
            Formula::Not(a) => Node::Not(self.intern(a, by_ptr)),
            Formula::And(a, b) => Node::And(self.intern(a, by_ptr), self.intern(b, by_ptr)),
            Formula::Or(a, b) => Node::Or(self.intern(a, by_ptr), self.intern(b, by_ptr)),
            Formula::Implies(a, b) => Node::Implies(self.intern(a, by_ptr), self.intern(b, by_ptr)),
            Formula::Iff(a, b) => Node::Iff(self.intern(a, by_ptr), self.intern(b, by_ptr)),
            Formula::Future(a) => Node::Future(self.intern(a, by_ptr)),
            Formula::Past(a) => Node::Past(self.intern(a, by_ptr)),
            Formula::AlwaysFuture(a) => Node::AlwaysFuture(self.intern(a, by_ptr)),
            Formula::AlwaysPast(a) => Node::AlwaysPast(self.intern(a, by_ptr)),
        };
        let id = match self.nodes.get(&node) {
            Some(&id) => id,
            None => {
                let set = self.compute(&node);
                self.sets.push(set);
                let id = self.sets.len() - 1;
                self.nodes.insert(node, id);
                id
            }
        };
        by_ptr.insert(key, id);
        id
    }

    fn compute(&self, node: &Node) -> FixedBitSet {
        let len = self.model.frame.len();
        let full = || {
            let mut s = FixedBitSet::with_capacity(len);
            s.insert_range(..);
            s
        };
        let not = |s: &FixedBitSet| {
            let mut out = s.clone();
            out.toggle_range(..);
            out
        };
        match *node {
            Node::True => full(),
            Node::False => FixedBitSet::with_capacity(len),
            Node::Var(ref p) => self.model.extension(p),
            Node::Not(a) => not(&self.sets[a]),
            Node::And(a, b) => &self.sets[a] & &self.sets[b],
            Node::Or(a, b) => &self.sets[a] | &self.sets[b],
            Node::Implies(a, b) => &not(&self.sets[a]) | &self.sets[b],
            Node::Iff(a, b) => not(&(&self.sets[a] ^ &self.sets[b])),
            Node::Future(a) => self.exists(&self.src, &self.dst, &self.sets[a]),
            Node::Past(a) => self.exists(&self.dst, &self.src, &self.sets[a]),
            Node::AlwaysFuture(a) => not(&self.exists(&self.src, &self.dst, &not(&self.sets[a]))),
            Node::AlwaysPast(a) => not(&self.exists(&self.dst, &self.src, &not(&self.sets[a]))),
        }
    }

    /// `{x : ∃ edge (x, y), y ∈ target}` with the edge direction given by the
    /// `from`/`to` arrays.
    fn exists(&self, from: &[u32], to: &[u32], target: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.model.frame.len());
        for (&x, &y) in from.iter().zip(to) {
            if target.contains(y as usize) {
                out.insert(x as usize);
            }
        }
        out
    }
}

/// Set of points of `model` at which `f` holds.
pub fn holds(model: &KripkeModel, f: &Formula) -> FixedBitSet {
    Evaluator::new(model).eval(f).clone()
}

pub fn holds_at(model: &KripkeModel, f: &Formula, point: &str) -> Result<bool, LogicError> {
    let x = model.frame.point(point)?;
    Ok(holds(model, f).contains(x))
}
