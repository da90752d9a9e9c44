//! Total computable functions used as reductions.

use super::error::KernelError;
use super::pairing::{pair, unpair};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Closed-form expression in one variable `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    Var,
    Const(u64),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Truncated subtraction.
    Monus(Box<Expr>, Box<Expr>),
    Pair(Box<Expr>, Box<Expr>),
    Left(Box<Expr>),
    Right(Box<Expr>),
    Div(Box<Expr>, u64),
    Mod(Box<Expr>, u64),
    /// `outer(inner(x))`.
    Compose(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, x: u64) -> Option<u64> {
        Some(match self {
            Expr::Var => x,
            Expr::Const(c) => *c,
            Expr::Add(a, b) => a.eval(x)?.checked_add(b.eval(x)?)?,
            Expr::Mul(a, b) => a.eval(x)?.checked_mul(b.eval(x)?)?,
            Expr::Monus(a, b) => a.eval(x)?.saturating_sub(b.eval(x)?),
            Expr::Pair(a, b) => {
                let (l, r) = (a.eval(x)?, b.eval(x)?);
                if l.max(r) > u32::MAX as u64 {
                    return None;
                }
                pair(l, r)
            }
            Expr::Left(a) => unpair(a.eval(x)?).0,
            Expr::Right(a) => unpair(a.eval(x)?).1,
            Expr::Div(a, d) => a.eval(x)?.checked_div(*d)?,
            Expr::Mod(a, d) => a.eval(x)?.checked_rem(*d)?,
            Expr::Compose(outer, inner) => outer.eval(inner.eval(x)?)?,
        })
    }

    pub fn c(v: u64) -> Expr {
        Expr::Const(v)
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn pair(a: Expr, b: Expr) -> Expr {
        Expr::Pair(Box::new(a), Box::new(b))
    }

    pub fn compose(outer: Expr, inner: Expr) -> Expr {
        Expr::Compose(Box::new(outer), Box::new(inner))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var => write!(f, "x"),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Monus(a, b) => write!(f, "({a} -. {b})"),
            Expr::Pair(a, b) => write!(f, "<{a}, {b}>"),
            Expr::Left(a) => write!(f, "({a})_0"),
            Expr::Right(a) => write!(f, "({a})_1"),
            Expr::Div(a, d) => write!(f, "({a} div {d})"),
            Expr::Mod(a, d) => write!(f, "({a} mod {d})"),
            Expr::Compose(o, i) => write!(f, "[{o}]∘[{i}]"),
        }
    }
}

/// A reduction: an expression, a finite table, or a table overriding an
/// expression on a finite prefix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionFn {
    Expr(Expr),
    /// Defined on `0..table.len()` only.
    Table(Vec<u64>),
    Override { table: Vec<u64>, rest: Expr },
}

impl ReductionFn {
    pub fn identity() -> Self {
        ReductionFn::Expr(Expr::Var)
    }

    pub fn eval(&self, x: u64) -> Result<u64, KernelError> {
        let undefined = |why: &str| KernelError::Undefined(x, why.to_string());
        match self {
            ReductionFn::Expr(e) => e.eval(x).ok_or_else(|| undefined("arithmetic overflow or division by zero")),
            ReductionFn::Table(t) => t.get(x as usize).copied().ok_or_else(|| undefined("outside table")),
            ReductionFn::Override { table, rest } => match table.get(x as usize) {
                Some(v) => Ok(*v),
                None => rest.eval(x).ok_or_else(|| undefined("arithmetic overflow or division by zero")),
            },
        }
    }

    pub fn tabulate(&self, bound: u64) -> Result<Vec<u64>, KernelError> {
        (0..bound).map(|x| self.eval(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expressions() {
        let two_x = Expr::mul(Expr::c(2), Expr::Var);
        assert_eq!(two_x.eval(7), Some(14));
        let col = Expr::pair(Expr::c(3), Expr::Var);
        assert_eq!(Expr::Left(Box::new(col.clone())).eval(9), Some(3));
        assert_eq!(Expr::Right(Box::new(col)).eval(9), Some(9));
        assert_eq!(Expr::Monus(Box::new(Expr::c(2)), Box::new(Expr::Var)).eval(5), Some(0));
        assert_eq!(Expr::compose(two_x, Expr::add(Expr::Var, Expr::c(1))).eval(4), Some(10));
        assert_eq!(Expr::Div(Box::new(Expr::Var), 0).eval(4), None);
    }

    #[test]
    fn tables_and_overrides() {
        let t = ReductionFn::Table(vec![0, 1, 0]);
        assert_eq!(t.eval(2), Ok(0));
        assert!(t.eval(3).is_err());
        let o = ReductionFn::Override { table: vec![5], rest: Expr::Var };
        assert_eq!(o.tabulate(3).unwrap(), vec![5, 1, 2]);
    }

    #[test]
    fn json_roundtrip() {
        let f = ReductionFn::Expr(Expr::pair(Expr::c(1), Expr::Var));
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<ReductionFn>(&s).unwrap(), f);
    }
}
