use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// An interned propositional variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Proposition(Arc<str>);

impl Proposition {
    pub fn new(name: &str) -> Self {
        Proposition(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A tense-logic formula. Subterms are reference counted, so a formula built
/// by macro expansion may share subtrees freely.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Var(Proposition),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    Iff(Arc<Formula>, Arc<Formula>),
    /// Somewhere in the future.
    Future(Arc<Formula>),
    /// Somewhere in the past.
    Past(Arc<Formula>),
    /// Everywhere in the future (`G`).
    AlwaysFuture(Arc<Formula>),
    /// Everywhere in the past (`H`).
    AlwaysPast(Arc<Formula>),
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print_formula(self))
    }
}

impl Formula {
    pub fn var(name: &str) -> Self {
        Formula::Var(Proposition::new(name))
    }

    pub fn not(self) -> Self {
        Formula::Not(Arc::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Arc::new(self), Arc::new(other))
    }

    pub fn or(self, other: Formula) -> Self {
        Formula::Or(Arc::new(self), Arc::new(other))
    }

    pub fn implies(self, other: Formula) -> Self {
        Formula::Implies(Arc::new(self), Arc::new(other))
    }

    pub fn iff(self, other: Formula) -> Self {
        Formula::Iff(Arc::new(self), Arc::new(other))
    }

    pub fn future(self) -> Self {
        Formula::Future(Arc::new(self))
    }

    pub fn past(self) -> Self {
        Formula::Past(Arc::new(self))
    }

    pub fn always_future(self) -> Self {
        Formula::AlwaysFuture(Arc::new(self))
    }

    pub fn always_past(self) -> Self {
        Formula::AlwaysPast(Arc::new(self))
    }

    /// Right-nested conjunction; the empty conjunction is `True`.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else { return Formula::True };
        while let Some(next) = items.pop() {
            acc = next.and(acc);
        }
        acc
    }

    /// Right-nested disjunction; the empty disjunction is `False`.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else { return Formula::False };
        while let Some(next) = items.pop() {
            acc = next.or(acc);
        }
        acc
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Arc<Formula>> {
        match self {
            Formula::True | Formula::False | Formula::Var(_) => vec![],
            Formula::Not(a)
            | Formula::Future(a)
            | Formula::Past(a)
            | Formula::AlwaysFuture(a)
            | Formula::AlwaysPast(a) => vec![a],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                vec![a, b]
            }
        }
    }

    /// Every proposition occurring in the formula, in first-occurrence order.
    pub fn propositions(&self) -> Vec<Proposition> {
        let mut seen = std::collections::HashSet::new();
        let mut props = Vec::new();
        let mut visited = std::collections::HashSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if !visited.insert(f as *const Formula) {
                continue;
            }
            if let Formula::Var(p) = f {
                if seen.insert(p.clone()) {
                    props.push(p.clone());
                }
            }
            for c in f.children().into_iter().rev() {
                stack.push(c);
            }
        }
        props
    }
}

/// Number of syntax-tree nodes, counting shared subterms once per occurrence.
pub fn formula_size(f: &Formula) -> u64 {
    fn go(f: &Formula, memo: &mut HashMap<*const Formula, u64>) -> u64 {
        let key = f as *const Formula;
        if let Some(&n) = memo.get(&key) {
            return n;
        }
        let n = 1 + f.children().into_iter().map(|c| go(c, memo)).sum::<u64>();
        memo.insert(key, n);
        n
    }
    go(f, &mut HashMap::new())
}

/// Rewrites into the primitive basis `{Var, Not, Or, F, P}`.
///
/// `True` becomes `p ∨ ¬p` for the fixed variable `p = top`, so the result is
/// equivalent on every model.
pub fn normalize(f: &Formula) -> Formula {
    let top = || {
        let p = Formula::var("top");
        p.clone().or(p.not())
    };
    match f {
        Formula::True => top(),
        Formula::False => top().not(),
        Formula::Var(_) => f.clone(),
        Formula::Not(a) => normalize(a).not(),
        Formula::Or(a, b) => normalize(a).or(normalize(b)),
        Formula::And(a, b) => normalize(a).not().or(normalize(b).not()).not(),
        Formula::Implies(a, b) => normalize(a).not().or(normalize(b)),
        Formula::Iff(a, b) => {
            let (a, b) = (normalize(a), normalize(b));
            let fwd = a.clone().not().or(b.clone());
            let bwd = b.not().or(a);
            fwd.not().or(bwd.not()).not()
        }
        Formula::Future(a) => normalize(a).future(),
        Formula::Past(a) => normalize(a).past(),
        Formula::AlwaysFuture(a) => normalize(a).not().future().not(),
        Formula::AlwaysPast(a) => normalize(a).not().past().not(),
    }
}
