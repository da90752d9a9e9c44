//! Text syntax for formulas.
//!
//! ```text
//! formula := quant | impl
//! quant   := ("forall" | "exists") ident "." formula
//! impl    := disj ["->" impl]
//! disj    := conj {"|" conj}
//! conj    := unary {"&" unary}
//! unary   := "!" unary | quant | "(" formula ")" | "true" | "false" | atom
//! atom    := ident "<=" ident | ident "=" ident | ident "!=" ident
//!          | ident "+" ident "=" ident | ident "*" ident "=" ident
//!          | "E" "(" ident "," ident ")" | Name "(" ident {"," ident} ")"
//! ```
//!
//! `E` with two arguments is the edge atom; any other `Name(...)` is a
//! macro call.

use super::formula::{Atom, Formula};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    Amp,
    Bar,
    Arrow,
    Leq,
    Eq,
    Neq,
    Plus,
    Star,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let two = src.get(i..i + 2).unwrap_or("");
        let tok = match c {
            _ if c.is_whitespace() => {
                i += 1;
                continue;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            _ if c.is_ascii_digit() => {
                return Err(ParseError { pos: i, msg: "variables must start with a letter".into() });
            }
            _ if two == "->" => Tok::Arrow,
            _ if two == "<=" => Tok::Leq,
            _ if two == "!=" => Tok::Neq,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '!' => Tok::Bang,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            '=' => Tok::Eq,
            '+' => Tok::Plus,
            '*' => Tok::Star,
            _ => return Err(ParseError { pos: i, msg: format!("unexpected character {c:?}") }),
        };
        let len = if matches!(tok, Tok::Arrow | Tok::Leq | Tok::Neq) { 2 } else { 1 };
        out.push((i, tok));
        i += len;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let pos = self.toks.get(self.pos).map_or(self.end, |t| t.0);
        Err(ParseError { pos, msg: msg.into() })
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {t:?}"))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !is_keyword(s) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Ident(k)) if k == "forall" || k == "exists" => self.quant(),
            _ => self.implication(),
        }
    }

    fn quant(&mut self) -> Result<Formula, ParseError> {
        let forall = matches!(self.peek(), Some(Tok::Ident(k)) if k == "forall");
        self.pos += 1;
        let x = self.ident()?;
        self.expect(Tok::Dot)?;
        let body = Box::new(self.formula()?);
        Ok(if forall { Formula::Forall(x, body) } else { Formula::Exists(x, body) })
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = match self.peek() {
                Some(Tok::Ident(k)) if k == "forall" || k == "exists" => self.quant()?,
                _ => self.implication()?,
            };
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.peek() == Some(&Tok::Bar) {
            self.pos += 1;
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Ident(k)) if k == "forall" || k == "exists" => self.quant(),
            Some(Tok::Ident(k)) if k == "true" => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Some(Tok::Ident(k)) if k == "false" => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Some(Tok::Ident(_)) => self.atom(),
            _ => self.err("expected a formula"),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        if self.peek_at(1) == Some(&Tok::LParen) {
            let name = self.ident()?;
            self.expect(Tok::LParen)?;
            let mut args = vec![self.ident()?];
            while self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                args.push(self.ident()?);
            }
            self.expect(Tok::RParen)?;
            if name == "E" && args.len() == 2 {
                let b = args.pop().unwrap();
                let a = args.pop().unwrap();
                return Ok(Formula::Atom(Atom::Edge(a, b)));
            }
            return Ok(Formula::Call(name, args));
        }
        let a = self.ident()?;
        match self.peek().cloned() {
            Some(Tok::Leq) => {
                self.pos += 1;
                Ok(Formula::Atom(Atom::Leq(a, self.ident()?)))
            }
            Some(Tok::Eq) => {
                self.pos += 1;
                Ok(Formula::Atom(Atom::Eq(a, self.ident()?)))
            }
            Some(Tok::Neq) => {
                self.pos += 1;
                Ok(Formula::not(Formula::Atom(Atom::Eq(a, self.ident()?))))
            }
            Some(op @ (Tok::Plus | Tok::Star)) => {
                self.pos += 1;
                let b = self.ident()?;
                self.expect(Tok::Eq)?;
                let c = self.ident()?;
                Ok(Formula::Atom(if op == Tok::Plus { Atom::Add(a, b, c) } else { Atom::Mul(a, b, c) }))
            }
            _ => self.err("expected <=, =, !=, + or * after variable"),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "forall" | "exists" | "true" | "false")
}

pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0, end: src.len() };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Forall(..) | Formula::Exists(..) => 0,
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        Formula::Not(inner) if matches!(**inner, Formula::Atom(Atom::Eq(..))) => 5,
        Formula::Not(_) => 4,
        _ => 5,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, phi: &Formula, min: u8) -> fmt::Result {
    if prec(phi) < min {
        write!(f, "(")?;
        write_at(f, phi, 0)?;
        return write!(f, ")");
    }
    match phi {
        Formula::True => write!(f, "true"),
        Formula::False => write!(f, "false"),
        Formula::Atom(a) => match a {
            Atom::Eq(x, y) => write!(f, "{x} = {y}"),
            Atom::Leq(x, y) => write!(f, "{x} <= {y}"),
            Atom::Edge(x, y) => write!(f, "E({x}, {y})"),
            Atom::Add(x, y, z) => write!(f, "{x} + {y} = {z}"),
            Atom::Mul(x, y, z) => write!(f, "{x} * {y} = {z}"),
        },
        Formula::Call(n, args) => write!(f, "{n}({})", args.join(", ")),
        Formula::Not(inner) => match &**inner {
            Formula::Atom(Atom::Eq(x, y)) => write!(f, "{x} != {y}"),
            other => {
                write!(f, "!")?;
                write_at(f, other, 4)
            }
        },
        Formula::And(a, b) => {
            write_at(f, a, 3)?;
            write!(f, " & ")?;
            write_at(f, b, 4)
        }
        Formula::Or(a, b) => {
            write_at(f, a, 2)?;
            write!(f, " | ")?;
            write_at(f, b, 3)
        }
        Formula::Implies(a, b) => {
            write_at(f, a, 2)?;
            write!(f, " -> ")?;
            write_at(f, b, 1)
        }
        Formula::Forall(x, body) => {
            write!(f, "forall {x}. ")?;
            write_at(f, body, 0)
        }
        Formula::Exists(x, body) => {
            write!(f, "exists {x}. ")?;
            write_at(f, body, 0)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(f, self, 0)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn precedence() {
        let f = parse_formula("a = b | c = d & e = f -> g = h").unwrap();
        assert_eq!(
            f,
            Formula::implies(Formula::or(Formula::eq("a", "b"), Formula::and(Formula::eq("c", "d"), Formula::eq("e", "f"))), Formula::eq("g", "h"))
        );
        let q = parse_formula("forall x. x <= x & exists y. E(x, y)").unwrap();
        assert_eq!(q, Formula::forall("x", Formula::and(Formula::leq("x", "x"), Formula::exists("y", Formula::edge("x", "y")))));
    }

    #[test]
    fn atoms_and_calls() {
        assert_eq!(parse_formula("x + y = z").unwrap(), Formula::add("x", "y", "z"));
        assert_eq!(parse_formula("x * y = z").unwrap(), Formula::mul("x", "y", "z"));
        assert_eq!(parse_formula("x != y").unwrap(), Formula::neq("x", "y"));
        assert_eq!(parse_formula("E(x, y, c)").unwrap(), Formula::call("E", &["x", "y", "c"]));
        assert_eq!(parse_formula("!!true").unwrap(), Formula::not(Formula::not(Formula::True)));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_formula("x <= ").unwrap_err();
        assert_eq!(e.pos, 5);
        assert!(parse_formula("x = y )").is_err());
        assert!(parse_formula("forall 1. true").is_err());
        assert!(parse_formula("x ? y").is_err());
    }

    pub(crate) fn arb_formula(vars: &'static [&'static str]) -> impl Strategy<Value = Formula> {
        let var = prop::sample::select(vars);
        let leaf = prop_oneof![
            Just(Formula::True),
            Just(Formula::False),
            (var.clone(), var.clone()).prop_map(|(a, b)| Formula::eq(a, b)),
            (var.clone(), var.clone()).prop_map(|(a, b)| Formula::edge(a, b)),
            (var.clone(), var.clone()).prop_map(|(a, b)| Formula::leq(a, b)),
            (var.clone(), var.clone(), var.clone()).prop_map(|(a, b, c)| Formula::add(a, b, c)),
            (var.clone(), var.clone()).prop_map(|(a, b)| Formula::call("M", &[a, b])),
        ];
        leaf.prop_recursive(4, 24, 2, move |inner| {
            let var = prop::sample::select(vars);
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                (var.clone(), inner.clone()).prop_map(|(x, b)| Formula::forall(x, b)),
                (var, inner).prop_map(|(x, b)| Formula::exists(x, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(f in arb_formula(&["x", "y", "z"])) {
            let text = f.to_string();
            prop_assert_eq!(parse_formula(&text).unwrap(), f, "{}", text);
        }
    }
}
