//! Bounded-quantifier arithmetic sentences with a direct evaluator in N.

use crate::logic::{Formula, Var};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bounded {
    Add(Var, Var, Var),
    Mul(Var, Var, Var),
    Eq(Var, Var),
    Le(Var, Var),
    /// `x = k`
    Is(Var, u32),
    /// `x + y = k`
    SumIs(Var, Var, u32),
    /// `x * y = k`
    ProdIs(Var, Var, u32),
    Not(Box<Bounded>),
    And(Box<Bounded>, Box<Bounded>),
    Or(Box<Bounded>, Box<Bounded>),
    Implies(Box<Bounded>, Box<Bounded>),
    /// `forall x <= k`
    All(Var, u32, Box<Bounded>),
    /// `exists x <= k`
    Ex(Var, u32, Box<Bounded>),
}

impl Bounded {
    /// Truth in N by direct computation.
    pub fn truth(&self) -> bool {
        self.eval(&mut HashMap::new())
    }

    fn eval(&self, env: &mut HashMap<Var, u64>) -> bool {
        let v = |x: &Var, env: &HashMap<Var, u64>| env[x];
        match self {
            Bounded::Add(x, y, z) => v(x, env) + v(y, env) == v(z, env),
            Bounded::Mul(x, y, z) => v(x, env) * v(y, env) == v(z, env),
            Bounded::Eq(x, y) => v(x, env) == v(y, env),
            Bounded::Le(x, y) => v(x, env) <= v(y, env),
            Bounded::Is(x, k) => v(x, env) == *k as u64,
            Bounded::SumIs(x, y, k) => v(x, env) + v(y, env) == *k as u64,
            Bounded::ProdIs(x, y, k) => v(x, env) * v(y, env) == *k as u64,
            Bounded::Not(a) => !a.eval(env),
            Bounded::And(a, b) => a.eval(env) && b.eval(env),
            Bounded::Or(a, b) => a.eval(env) || b.eval(env),
            Bounded::Implies(a, b) => !a.eval(env) || b.eval(env),
            Bounded::All(x, k, a) | Bounded::Ex(x, k, a) => {
                let all = matches!(self, Bounded::All(..));
                let saved = env.get(x).copied();
                let mut out = all;
                for n in 0..=*k as u64 {
                    env.insert(x.clone(), n);
                    if a.eval(env) != all {
                        out = !all;
                        break;
                    }
                }
                match saved {
                    Some(s) => env.insert(x.clone(), s),
                    None => env.remove(x),
                };
                out
            }
        }
    }

    /// The same sentence over `+`, `*` with the numeral and bound macros.
    pub fn to_formula(&self) -> Formula {
        match self {
            Bounded::Add(x, y, z) => Formula::add(x, y, z),
            Bounded::Mul(x, y, z) => Formula::mul(x, y, z),
            Bounded::Eq(x, y) => Formula::eq(x, y),
            Bounded::Le(x, y) => Formula::call("Le", &[x, y]),
            Bounded::Is(x, k) => Formula::call(&format!("Num{k}"), &[x]),
            Bounded::SumIs(x, y, k) => Formula::exists("k_", Formula::and(Formula::call(&format!("Num{k}"), &["k_"]), Formula::add(x, y, "k_"))),
            Bounded::ProdIs(x, y, k) => Formula::exists("k_", Formula::and(Formula::call(&format!("Num{k}"), &["k_"]), Formula::mul(x, y, "k_"))),
            Bounded::Not(a) => Formula::not(a.to_formula()),
            Bounded::And(a, b) => Formula::and(a.to_formula(), b.to_formula()),
            Bounded::Or(a, b) => Formula::or(a.to_formula(), b.to_formula()),
            Bounded::Implies(a, b) => Formula::implies(a.to_formula(), b.to_formula()),
            Bounded::All(x, k, a) => Formula::forall(x, Formula::implies(Formula::call(&format!("Bnd{k}"), &[x]), a.to_formula())),
            Bounded::Ex(x, k, a) => Formula::exists(x, Formula::and(Formula::call(&format!("Bnd{k}"), &[x]), a.to_formula())),
        }
    }

    /// Largest quantifier bound.
    pub fn bound(&self) -> u32 {
        match self {
            Bounded::Not(a) => a.bound(),
            Bounded::And(a, b) | Bounded::Or(a, b) | Bounded::Implies(a, b) => a.bound().max(b.bound()),
            Bounded::All(_, k, a) | Bounded::Ex(_, k, a) => (*k).max(a.bound()),
            _ => 0,
        }
    }

    /// Largest numeral constant.
    pub fn constant(&self) -> u32 {
        match self {
            Bounded::Is(_, k) | Bounded::SumIs(_, _, k) | Bounded::ProdIs(_, _, k) => *k,
            Bounded::Not(a) | Bounded::All(_, _, a) | Bounded::Ex(_, _, a) => a.constant(),
            Bounded::And(a, b) | Bounded::Or(a, b) | Bounded::Implies(a, b) => a.constant().max(b.constant()),
            _ => 0,
        }
    }
}

fn s(x: &str) -> Var {
    x.to_string()
}
fn add(x: &str, y: &str, z: &str) -> Bounded {
    Bounded::Add(s(x), s(y), s(z))
}
fn mul(x: &str, y: &str, z: &str) -> Bounded {
    Bounded::Mul(s(x), s(y), s(z))
}
fn eq(x: &str, y: &str) -> Bounded {
    Bounded::Eq(s(x), s(y))
}
fn le(x: &str, y: &str) -> Bounded {
    Bounded::Le(s(x), s(y))
}
fn is(x: &str, k: u32) -> Bounded {
    Bounded::Is(s(x), k)
}
fn sum_is(x: &str, y: &str, k: u32) -> Bounded {
    Bounded::SumIs(s(x), s(y), k)
}
fn prod_is(x: &str, y: &str, k: u32) -> Bounded {
    Bounded::ProdIs(s(x), s(y), k)
}
fn not(a: Bounded) -> Bounded {
    Bounded::Not(Box::new(a))
}
fn and(a: Bounded, b: Bounded) -> Bounded {
    Bounded::And(Box::new(a), Box::new(b))
}
fn or(a: Bounded, b: Bounded) -> Bounded {
    Bounded::Or(Box::new(a), Box::new(b))
}
fn imp(a: Bounded, b: Bounded) -> Bounded {
    Bounded::Implies(Box::new(a), Box::new(b))
}
fn all(x: &str, k: u32, a: Bounded) -> Bounded {
    Bounded::All(s(x), k, Box::new(a))
}
fn ex(x: &str, k: u32, a: Bounded) -> Bounded {
    Bounded::Ex(s(x), k, Box::new(a))
}

/// Quantifier bounds are at most 4 and constants at most 32, so a gadget
/// fragment with `N = 32` covers every value a sentence can mention.
pub fn corpus() -> Vec<(&'static str, Bounded)> {
    vec![
        ("every x has an upper bound", all("x", 4, ex("y", 4, le("x", "y")))),
        ("a maximum exists", ex("x", 4, all("y", 4, le("y", "x")))),
        ("order is total", all("x", 4, all("y", 4, or(le("x", "y"), le("y", "x"))))),
        ("nonzero additive idempotent", ex("x", 4, and(add("x", "x", "x"), not(is("x", 0))))),
        ("additive idempotent is zero", all("x", 4, imp(add("x", "x", "x"), is("x", 0)))),
        ("12 is a product", ex("x", 4, ex("y", 4, prod_is("x", "y", 12)))),
        ("7 is a product of small factors", ex("x", 4, ex("y", 4, prod_is("x", "y", 7)))),
        ("summands are below the sum", all("x", 4, all("y", 4, all("z", 4, imp(add("x", "y", "z"), le("x", "z")))))),
        ("everything is below everything", all("x", 4, all("y", 4, le("x", "y")))),
        ("16 is a square", ex("x", 4, prod_is("x", "x", 16))),
        ("8 is a square", ex("x", 4, prod_is("x", "x", 8))),
        ("8 = x + y forces 4 + 4", all("x", 4, all("y", 4, imp(sum_is("x", "y", 8), and(is("x", 4), is("y", 4)))))),
        ("5 is even", ex("x", 4, sum_is("x", "x", 5))),
        ("sum 5 product 6", ex("x", 4, ex("y", 4, and(sum_is("x", "y", 5), prod_is("x", "y", 6))))),
        ("sum 5 product 5", ex("x", 4, ex("y", 4, and(sum_is("x", "y", 5), prod_is("x", "y", 5))))),
        (
            "addition commutes",
            all("x", 4, all("y", 4, all("z", 4, all("u", 4, imp(and(add("x", "y", "z"), add("y", "x", "u")), eq("z", "u")))))),
        ),
        ("nonzero factor bounds product", all("x", 4, all("y", 4, all("z", 4, imp(and(mul("x", "y", "z"), not(is("x", 0))), le("y", "z")))))),
        ("any factor bounds product", all("x", 4, all("y", 4, all("z", 4, imp(mul("x", "y", "z"), le("y", "z")))))),
        ("a multiplicative absorber", ex("x", 4, all("y", 4, mul("x", "y", "x")))),
        ("a nonzero absorber", ex("x", 4, and(not(is("x", 0)), all("y", 4, mul("x", "y", "x"))))),
        ("zero products", all("x", 4, all("y", 4, imp(prod_is("x", "y", 0), or(is("x", 0), is("y", 0)))))),
        ("x + y = x * y off zero", ex("x", 4, ex("y", 4, ex("z", 4, and(and(add("x", "y", "z"), mul("x", "y", "z")), not(is("x", 0))))))),
        (
            "x + y = x * y off zero and two",
            ex("x", 4, ex("y", 4, ex("z", 4, and(and(and(add("x", "y", "z"), mul("x", "y", "z")), not(is("x", 0))), not(is("x", 2)))))),
        ),
        ("no maximum up to 4", all("x", 4, ex("y", 4, and(le("x", "y"), not(eq("x", "y")))))),
        ("no maximum up to 3", all("x", 3, ex("y", 4, and(le("x", "y"), not(eq("x", "y")))))),
        ("order is antisymmetric", all("x", 4, all("y", 4, imp(and(le("x", "y"), le("y", "x")), eq("x", "y"))))),
        ("distinct numbers summing to 0", ex("x", 4, ex("y", 4, and(not(eq("x", "y")), sum_is("x", "y", 0))))),
        ("2 + 2 = 2 * 2", ex("x", 4, and(sum_is("x", "x", 4), prod_is("x", "x", 4)))),
        ("one is a left unit", all("x", 4, imp(is("x", 1), all("y", 4, mul("x", "y", "y"))))),
        ("sums stay at most 4", all("x", 4, all("y", 4, ex("z", 4, add("x", "y", "z"))))),
        ("small sums stay at most 4", all("x", 2, all("y", 2, ex("z", 4, add("x", "y", "z"))))),
        ("1 + 2 = 3", ex("x", 4, ex("y", 4, ex("z", 4, and(and(and(is("x", 1), is("y", 2)), is("z", 3)), add("x", "y", "z")))))),
        ("32 is a product of small factors", ex("x", 4, ex("y", 4, prod_is("x", "y", 32)))),
        ("squares up to 16", all("x", 4, ex("y", 4, ex("z", 4, imp(is("x", 4), and(is("y", 4), prod_is("x", "y", 16))))))),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_values() {
        let c = corpus();
        assert!(c.len() >= 30);
        let truths: Vec<bool> = c.iter().map(|(_, b)| b.truth()).collect();
        assert!(truths.iter().any(|t| *t) && truths.iter().any(|t| !*t));
        let get = |name: &str| c.iter().find(|(n, _)| *n == name).unwrap().1.truth();
        assert!(get("sum 5 product 6"));
        assert!(!get("sum 5 product 5"));
        assert!(!get("no maximum up to 4"));
        assert!(get("no maximum up to 3"));
        for (_, b) in &c {
            assert!(b.bound() <= 4 && b.constant() <= 32);
            assert!(b.to_formula().is_sentence());
        }
    }
}
