//! First-order formulas over the arithmetic, graph and poset signatures.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    /// Ternary `x + y = z`, `x * y = z`.
    Arith,
    /// Binary edge `E(x, y)`.
    Graph,
    /// Binary `x <= y`.
    Poset,
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Signature::Arith => "arith",
            Signature::Graph => "graph",
            Signature::Poset => "poset",
        })
    }
}

pub type Var = String;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Eq(Var, Var),
    Add(Var, Var, Var),
    Mul(Var, Var, Var),
    Edge(Var, Var),
    Leq(Var, Var),
}

impl Atom {
    pub fn vars(&self) -> Vec<&Var> {
        match self {
            Atom::Eq(a, b) | Atom::Edge(a, b) | Atom::Leq(a, b) => vec![a, b],
            Atom::Add(a, b, c) | Atom::Mul(a, b, c) => vec![a, b, c],
        }
    }

    /// `None` for equality, which every signature has.
    pub fn signature(&self) -> Option<Signature> {
        match self {
            Atom::Eq(..) => None,
            Atom::Add(..) | Atom::Mul(..) => Some(Signature::Arith),
            Atom::Edge(..) => Some(Signature::Graph),
            Atom::Leq(..) => Some(Signature::Poset),
        }
    }

    fn map_vars(&self, f: &impl Fn(&Var) -> Var) -> Atom {
        match self {
            Atom::Eq(a, b) => Atom::Eq(f(a), f(b)),
            Atom::Edge(a, b) => Atom::Edge(f(a), f(b)),
            Atom::Leq(a, b) => Atom::Leq(f(a), f(b)),
            Atom::Add(a, b, c) => Atom::Add(f(a), f(b), f(c)),
            Atom::Mul(a, b, c) => Atom::Mul(f(a), f(b), f(c)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
    /// Macro call, resolved against a [`super::MacroTable`].
    Call(String, Vec<Var>),
}

pub fn v(name: &str) -> Var {
    name.to_string()
}

impl Formula {
    pub fn eq(a: &str, b: &str) -> Formula {
        Formula::Atom(Atom::Eq(v(a), v(b)))
    }

    pub fn neq(a: &str, b: &str) -> Formula {
        Formula::not(Formula::eq(a, b))
    }

    pub fn edge(a: &str, b: &str) -> Formula {
        Formula::Atom(Atom::Edge(v(a), v(b)))
    }

    pub fn leq(a: &str, b: &str) -> Formula {
        Formula::Atom(Atom::Leq(v(a), v(b)))
    }

    pub fn add(a: &str, b: &str, c: &str) -> Formula {
        Formula::Atom(Atom::Add(v(a), v(b), v(c)))
    }

    pub fn mul(a: &str, b: &str, c: &str) -> Formula {
        Formula::Atom(Atom::Mul(v(a), v(b), v(c)))
    }

    pub fn call(name: &str, args: &[&str]) -> Formula {
        Formula::Call(name.to_string(), args.iter().map(|a| v(a)).collect())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    pub fn forall(x: &str, body: Formula) -> Formula {
        Formula::Forall(v(x), Box::new(body))
    }

    pub fn exists(x: &str, body: Formula) -> Formula {
        Formula::Exists(v(x), Box::new(body))
    }

    pub fn forall_many(xs: &[&str], body: Formula) -> Formula {
        xs.iter().rev().fold(body, |acc, x| Formula::forall(x, acc))
    }

    pub fn exists_many(xs: &[&str], body: Formula) -> Formula {
        xs.iter().rev().fold(body, |acc, x| Formula::exists(x, acc))
    }

    /// Left-nested conjunction; `True` for no conjuncts.
    pub fn and_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    pub fn or_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts.into_iter().reduce(Formula::or).unwrap_or(Formula::False)
    }

    /// Pairwise distinctness of the given variables.
    pub fn distinct(names: &[&str]) -> Formula {
        let mut parts = Vec::new();
        for (i, a) in names.iter().enumerate() {
            for b in &names[i + 1..] {
                parts.push(Formula::neq(a, b));
            }
        }
        Formula::and_all(parts)
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => out.extend(a.vars().into_iter().filter(|x| !bound.contains(x)).cloned()),
            Formula::Call(_, args) => out.extend(args.iter().filter(|x| !bound.contains(x)).cloned()),
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Atoms' signatures, equality excluded.
    pub fn atom_signatures(&self) -> BTreeSet<Signature> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Atom(a) = f {
                if let Some(s) = a.signature() {
                    out.insert(s);
                }
            }
        });
        out
    }

    pub fn calls(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Call(n, _) = f {
                out.insert(n.clone());
            }
        });
        out
    }

    pub fn walk(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.walk(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            _ => {}
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Not(a) => a.quantifier_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.quantifier_depth(),
            _ => 0,
        }
    }

    /// Rename free occurrences via `f`; bound variables are left alone, so
    /// the caller must make sure no capture happens.
    pub fn rename_free(&self, f: &impl Fn(&Var) -> Var) -> Formula {
        self.rename_inner(f, &mut Vec::new())
    }

    fn rename_inner(&self, f: &impl Fn(&Var) -> Var, bound: &mut Vec<Var>) -> Formula {
        let g = |x: &Var| if bound.contains(x) { x.clone() } else { f(x) };
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => Formula::Atom(a.map_vars(&g)),
            Formula::Call(n, args) => Formula::Call(n.clone(), args.iter().map(g).collect()),
            Formula::Not(a) => Formula::not(a.rename_inner(f, bound)),
            Formula::And(a, b) => Formula::and(a.rename_inner(f, bound), b.rename_inner(f, bound)),
            Formula::Or(a, b) => Formula::or(a.rename_inner(f, bound), b.rename_inner(f, bound)),
            Formula::Implies(a, b) => Formula::implies(a.rename_inner(f, bound), b.rename_inner(f, bound)),
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                bound.push(x.clone());
                let inner = body.rename_inner(f, bound);
                bound.pop();
                if matches!(self, Formula::Forall(..)) {
                    Formula::Forall(x.clone(), Box::new(inner))
                } else {
                    Formula::Exists(x.clone(), Box::new(inner))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_variables() {
        let f = Formula::exists("x", Formula::and(Formula::add("x", "y", "x"), Formula::call("U", &["z"])));
        assert_eq!(f.free_vars(), ["y".to_string(), "z".to_string()].into());
        assert!(!f.is_sentence());
        assert!(Formula::forall("x", Formula::eq("x", "x")).is_sentence());
    }

    #[test]
    fn renaming_respects_binders() {
        let f = Formula::and(Formula::edge("x", "y"), Formula::exists("x", Formula::edge("x", "y")));
        let g = f.rename_free(&|n| format!("{n}1"));
        assert_eq!(g, Formula::and(Formula::edge("x1", "y1"), Formula::exists("x", Formula::edge("x", "y1"))));
    }

    #[test]
    fn helpers() {
        assert_eq!(Formula::and_all([]), Formula::True);
        assert_eq!(Formula::distinct(&["a", "b", "c"]).size(), 3 * 2 + 2);
        assert_eq!(Formula::forall_many(&["a", "b"], Formula::True).quantifier_depth(), 2);
    }
}
