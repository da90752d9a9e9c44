//! Finite simple graphs on natural-number vertices, with JSON and DOT I/O.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(u64),
    #[error("edge ({0}, {1}) mentions a vertex not in the vertex set")]
    UnknownVertex(u64, u64),
    #[error("cannot parse DOT line {line}: {text:?}")]
    Dot { line: usize, text: String },
    #[error("invalid graph JSON: {0}")]
    Json(String),
    #[error("relabelling is not injective on the vertex set")]
    NotInjective,
}

/// Irreflexive symmetric graph; edges are stored with the smaller endpoint
/// first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FiniteGraph {
    vertices: BTreeSet<u64>,
    edges: BTreeSet<(u64, u64)>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    kind: String,
    verts: Vec<u64>,
    edges: Vec<[u64; 2]>,
}

impl FiniteGraph {
    pub fn new(vertices: impl IntoIterator<Item = u64>, edges: impl IntoIterator<Item = (u64, u64)>) -> Result<Self, GraphError> {
        let vertices: BTreeSet<u64> = vertices.into_iter().collect();
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if !vertices.contains(&a) || !vertices.contains(&b) {
                return Err(GraphError::UnknownVertex(a, b));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(FiniteGraph { vertices, edges: set })
    }

    pub fn empty(n: u64) -> Self {
        FiniteGraph::new(0..n, []).unwrap()
    }

    pub fn path(n: u64) -> Self {
        FiniteGraph::new(0..n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: u64) -> Self {
        FiniteGraph::new(0..n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn complete(n: u64) -> Self {
        FiniteGraph::new(0..n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)))).unwrap()
    }

    /// The 6-vertex label gadget: path x–a–d–y and triangle a–b–c, numbered
    /// x=0, a=1, d=2, y=3, b=4, c=5.
    pub fn label_gadget() -> Self {
        FiniteGraph::new(0..6, [(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (5, 1)]).unwrap()
    }

    pub fn vertices(&self) -> &BTreeSet<u64> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(u64, u64)> {
        &self.edges
    }

    pub fn has_vertex(&self, v: u64) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, a: u64, b: u64) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, v: u64) -> Vec<u64> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect()
    }

    /// Image under a vertex renaming, which must be injective on the
    /// vertex set.
    pub fn relabel(&self, f: impl Fn(u64) -> u64) -> Result<Self, GraphError> {
        let g = FiniteGraph::new(self.vertices.iter().map(|&v| f(v)), self.edges.iter().map(|&(a, b)| (f(a), f(b))))?;
        if g.vertices.len() != self.vertices.len() {
            return Err(GraphError::NotInjective);
        }
        Ok(g)
    }

    /// Isomorphism test by backtracking over degree-compatible bijections.
    /// Meant for the small graphs used in checks.
    pub fn is_isomorphic(&self, other: &FiniteGraph) -> bool {
        if self.vertices.len() != other.vertices.len() || self.edges.len() != other.edges.len() {
            return false;
        }
        let a: Vec<u64> = self.vertices.iter().copied().collect();
        let b: Vec<u64> = other.vertices.iter().copied().collect();
        let deg_a: Vec<usize> = a.iter().map(|&v| self.neighbors(v).len()).collect();
        let deg_b: Vec<usize> = b.iter().map(|&v| other.neighbors(v).len()).collect();
        let mut sa = deg_a.clone();
        let mut sb = deg_b.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return false;
        }
        fn extend(i: usize, map: &mut Vec<usize>, used: &mut [bool], ctx: (&FiniteGraph, &FiniteGraph, &[u64], &[u64], &[usize], &[usize])) -> bool {
            let (g, h, a, b, da, db) = ctx;
            if i == a.len() {
                return true;
            }
            for j in 0..b.len() {
                if used[j] || da[i] != db[j] {
                    continue;
                }
                if (0..i).any(|k| g.has_edge(a[k], a[i]) != h.has_edge(b[map[k]], b[j])) {
                    continue;
                }
                used[j] = true;
                map.push(j);
                if extend(i + 1, map, used, ctx) {
                    return true;
                }
                map.pop();
                used[j] = false;
            }
            false
        }
        extend(0, &mut Vec::new(), &mut vec![false; b.len()], (self, other, &a, &b, &deg_a, &deg_b))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GraphJson {
            kind: "graph".into(),
            verts: self.vertices.iter().copied().collect(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        })
        .expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, GraphError> {
        let g: GraphJson = serde_json::from_value(v.clone()).map_err(|e| GraphError::Json(e.to_string()))?;
        if g.kind != "graph" {
            return Err(GraphError::Json(format!("expected kind \"graph\", found {:?}", g.kind)));
        }
        FiniteGraph::new(g.verts, g.edges.into_iter().map(|[a, b]| (a, b)))
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  {v};");
        }
        for (a, b) in &self.edges {
            let _ = writeln!(out, "  {a} -- {b};");
        }
        out.push_str("}\n");
        out
    }

    /// Reads the subset of DOT that [`FiniteGraph::to_dot`] writes: numeric
    /// vertex statements and `a -- b` edge chains, one statement per line.
    pub fn from_dot(text: &str) -> Result<Self, GraphError> {
        let mut verts = BTreeSet::new();
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split("//").next().unwrap_or("").trim().trim_end_matches(';').trim();
            if line.is_empty() || line == "}" || line.ends_with('{') {
                continue;
            }
            let bad = || GraphError::Dot { line: i + 1, text: raw.to_string() };
            let ids: Vec<u64> = line
                .split("--")
                .map(|t| t.trim().trim_matches('"').parse::<u64>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?;
            verts.extend(ids.iter().copied());
            edges.extend(ids.windows(2).map(|w| (w[0], w[1])));
        }
        FiniteGraph::new(verts, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isomorphism() {
        let g = FiniteGraph::path(4);
        let h = g.relabel(|v| [7, 2, 9, 4][v as usize]).unwrap();
        assert!(g.is_isomorphic(&h));
        assert!(!g.is_isomorphic(&FiniteGraph::cycle(4)));
        assert!(!FiniteGraph::new(0..6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap().is_isomorphic(&FiniteGraph::cycle(6)));
        assert!(g.relabel(|_| 0).is_err());
    }

    #[test]
    fn builders() {
        assert_eq!(FiniteGraph::path(3).edges().len(), 2);
        assert_eq!(FiniteGraph::cycle(4).edges().len(), 4);
        assert_eq!(FiniteGraph::complete(4).edges().len(), 6);
        let g = FiniteGraph::label_gadget();
        assert_eq!((g.vertices().len(), g.edges().len()), (6, 6));
        assert_eq!(g.neighbors(1), vec![0, 2, 4, 5]);
    }

    #[test]
    fn rejects_loops_and_strays() {
        assert_eq!(FiniteGraph::new([0, 1], [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert!(FiniteGraph::new([0], [(0, 2)]).is_err());
    }

    #[test]
    fn json_and_dot_roundtrip() {
        let g = FiniteGraph::label_gadget();
        assert_eq!(FiniteGraph::from_json(&g.to_json()).unwrap(), g);
        assert_eq!(FiniteGraph::from_dot(&g.to_dot()).unwrap(), g);
        let chain = FiniteGraph::from_dot("graph {\n 0 -- 1 -- 2;\n 7;\n}").unwrap();
        assert_eq!(chain, FiniteGraph::new([0, 1, 2, 7], [(0, 1), (1, 2)]).unwrap());
        assert!(FiniteGraph::from_dot("graph {\n a -- b;\n}").is_err());
    }
}
