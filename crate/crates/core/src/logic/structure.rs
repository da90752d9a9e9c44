//! Finite structures the checkers evaluate formulas in.

use super::formula::Signature;
use crate::graph::FiniteGraph;
use serde_json::{json, Value};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("duplicate element {0}")]
    Duplicate(String),
    #[error("unknown element {0}")]
    Unknown(String),
    #[error("self-loop at {0}")]
    SelfLoop(String),
    #[error("order is not antisymmetric: {0} <= {1} <= {0}")]
    Antisymmetry(String, String),
    #[error("malformed structure JSON: {0}")]
    Json(String),
    #[error("expected a {expected} structure, found {found}")]
    Kind { expected: Signature, found: Signature },
}

/// Square bit matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> BitMatrix {
        let words = n.div_ceil(64);
        BitMatrix { n, words, bits: vec![0; n * words] }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn or_row_into(&mut self, src: usize, dst: usize) {
        for w in 0..self.words {
            self.bits[dst * self.words + w] |= self.bits[src * self.words + w];
        }
    }
}

/// A finite graph, poset or initial segment of arithmetic. Elements are
/// `0..size()`; names are kept for I/O.
#[derive(Clone, Debug)]
pub struct FiniteStructure {
    signature: Signature,
    names: Vec<String>,
    index: HashMap<String, u32>,
    rel: BitMatrix,
    fwd: Vec<Vec<u32>>,
    back: Vec<Vec<u32>>,
}

fn name_index(names: &[String]) -> Result<HashMap<String, u32>, StructureError> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if index.insert(n.clone(), i as u32).is_some() {
            return Err(StructureError::Duplicate(n.clone()));
        }
    }
    Ok(index)
}

impl FiniteStructure {
    /// Symmetric irreflexive graph; edges are given in either orientation.
    pub fn graph(names: Vec<String>, edges: &[(usize, usize)]) -> Result<FiniteStructure, StructureError> {
        let index = name_index(&names)?;
        let n = names.len();
        let mut rel = BitMatrix::new(n);
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(StructureError::Unknown(a.max(b).to_string()));
            }
            if a == b {
                return Err(StructureError::SelfLoop(names[a].clone()));
            }
            rel.set(a, b);
            rel.set(b, a);
        }
        let adj: Vec<Vec<u32>> = (0..n).map(|i| (0..n).filter(|&j| rel.get(i, j)).map(|j| j as u32).collect()).collect();
        Ok(FiniteStructure { signature: Signature::Graph, names, index, rel, fwd: adj.clone(), back: adj })
    }

    /// Reflexive-transitive closure of `leq`; rejects cycles.
    pub fn poset(names: Vec<String>, leq: &[(usize, usize)]) -> Result<FiniteStructure, StructureError> {
        let index = name_index(&names)?;
        let n = names.len();
        let mut rel = BitMatrix::new(n);
        for i in 0..n {
            rel.set(i, i);
        }
        for &(a, b) in leq {
            if a >= n || b >= n {
                return Err(StructureError::Unknown(a.max(b).to_string()));
            }
            rel.set(a, b);
        }
        for k in 0..n {
            for i in 0..n {
                if rel.get(i, k) {
                    rel.or_row_into(k, i);
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if rel.get(i, j) && rel.get(j, i) {
                    return Err(StructureError::Antisymmetry(names[i].clone(), names[j].clone()));
                }
            }
        }
        let up = (0..n).map(|i| (0..n).filter(|&j| rel.get(i, j)).map(|j| j as u32).collect()).collect();
        let down = (0..n).map(|j| (0..n).filter(|&i| rel.get(i, j)).map(|i| i as u32).collect()).collect();
        Ok(FiniteStructure { signature: Signature::Poset, names, index, rel, fwd: up, back: down })
    }

    /// `{0, ..., n}` with `+` and `*` as ternary relations.
    pub fn arith(n: u32) -> FiniteStructure {
        let names: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
        let index = name_index(&names).expect("distinct numerals");
        FiniteStructure { signature: Signature::Arith, names, index, rel: BitMatrix::new(0), fwd: Vec::new(), back: Vec::new() }
    }

    pub fn from_graph(g: &FiniteGraph) -> FiniteStructure {
        let verts: Vec<u64> = g.vertices().iter().copied().collect();
        let pos: HashMap<u64, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: Vec<(usize, usize)> = g.edges().iter().map(|(a, b)| (pos[a], pos[b])).collect();
        FiniteStructure::graph(verts.iter().map(|v| v.to_string()).collect(), &edges).expect("graphs are loopless")
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: u32) -> &str {
        &self.names[i as usize]
    }

    pub fn element(&self, name: &str) -> Result<u32, StructureError> {
        self.index.get(name).copied().ok_or_else(|| StructureError::Unknown(name.to_string()))
    }

    pub fn expect(&self, kind: Signature) -> Result<(), StructureError> {
        if self.signature == kind {
            Ok(())
        } else {
            Err(StructureError::Kind { expected: kind, found: self.signature })
        }
    }

    #[inline]
    pub fn edge(&self, a: u32, b: u32) -> bool {
        self.signature == Signature::Graph && self.rel.get(a as usize, b as usize)
    }

    #[inline]
    pub fn leq(&self, a: u32, b: u32) -> bool {
        self.signature == Signature::Poset && self.rel.get(a as usize, b as usize)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32, c: u32) -> bool {
        self.signature == Signature::Arith && a + b == c
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32, c: u32) -> bool {
        self.signature == Signature::Arith && a as u64 * b as u64 == c as u64
    }

    /// Graph neighbors.
    pub fn neighbors(&self, a: u32) -> &[u32] {
        debug_assert_eq!(self.signature, Signature::Graph);
        &self.fwd[a as usize]
    }

    /// Elements `>= a`, including `a`.
    pub fn up(&self, a: u32) -> &[u32] {
        debug_assert_eq!(self.signature, Signature::Poset);
        &self.fwd[a as usize]
    }

    /// Elements `<= a`, including `a`.
    pub fn down(&self, a: u32) -> &[u32] {
        debug_assert_eq!(self.signature, Signature::Poset);
        &self.back[a as usize]
    }

    /// Edges with `a < b`, or strict order pairs for posets.
    pub fn pairs(&self) -> Vec<(u32, u32)> {
        let n = self.size() as u32;
        let mut out = Vec::new();
        for a in 0..n {
            for &b in &self.fwd[a as usize] {
                if (self.signature == Signature::Graph && a < b) || (self.signature == Signature::Poset && a != b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let pairs: Vec<[&str; 2]> = self.pairs().iter().map(|&(a, b)| [self.name(a), self.name(b)]).collect();
        match self.signature {
            Signature::Graph => json!({"kind": "graph", "verts": self.names, "edges": pairs}),
            Signature::Poset => json!({"kind": "poset", "elems": self.names, "leq": pairs}),
            Signature::Arith => json!({"kind": "arith", "n": self.size() - 1}),
        }
    }

    /// Loads `{"kind":"graph","verts","edges"}`, `{"kind":"poset","elems","leq"}`
    /// or `{"kind":"arith","n"}`. Element names may be strings or numbers;
    /// unknown extra fields are ignored.
    pub fn from_json(v: &Value) -> Result<FiniteStructure, StructureError> {
        let bad = |m: &str| StructureError::Json(m.to_string());
        let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| bad("missing kind"))?;
        if kind == "arith" {
            let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("arith needs n"))?;
            return Ok(FiniteStructure::arith(n as u32));
        }
        let (ek, rk) = match kind {
            "graph" => ("verts", "edges"),
            "poset" => ("elems", "leq"),
            other => return Err(bad(&format!("unknown kind {other}"))),
        };
        let names: Vec<String> = v
            .get(ek)
            .and_then(Value::as_array)
            .ok_or_else(|| bad(&format!("missing {ek}")))?
            .iter()
            .map(json_name)
            .collect::<Result<_, _>>()?;
        let index = name_index(&names)?;
        let mut pairs = Vec::new();
        for p in v.get(rk).and_then(Value::as_array).ok_or_else(|| bad(&format!("missing {rk}")))? {
            let arr = p.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("pairs must have two entries"))?;
            let look = |x: &Value| -> Result<usize, StructureError> {
                let n = json_name(x)?;
                index.get(&n).map(|&i| i as usize).ok_or(StructureError::Unknown(n))
            };
            pairs.push((look(&arr[0])?, look(&arr[1])?));
        }
        if kind == "graph" {
            FiniteStructure::graph(names, &pairs)
        } else {
            FiniteStructure::poset(names, &pairs)
        }
    }
}

fn json_name(v: &Value) -> Result<String, StructureError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(StructureError::Json(format!("bad element name {v}"))),
    }
}
