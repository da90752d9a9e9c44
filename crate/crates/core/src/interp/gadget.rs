//! A finite fragment of a graph in which `(N, +, *)` is definable.
//!
//! Element vertices `e_0..e_N` carry the numbers. Each true equation
//! `a + b = c` (resp. `a * b = c`) with all values at most `N` gets a hub
//! with two (resp. three) pendant leaves, joined to `e_a`, `e_b`, `e_c` by
//! fresh paths of length 2, 3 and 4.

use crate::graph::FiniteGraph;
use crate::logic::FiniteStructure;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HubKind {
    Plus,
    Times,
}

impl HubKind {
    pub fn leaves(self) -> usize {
        match self {
            HubKind::Plus => 2,
            HubKind::Times => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hub {
    pub kind: HubKind,
    pub args: [u32; 3],
    pub vertex: u32,
}

#[derive(Clone, Debug)]
pub struct GadgetGraph {
    n: u32,
    names: Vec<String>,
    edges: Vec<(u32, u32)>,
    hubs: Vec<Hub>,
}

impl GadgetGraph {
    /// `n` is clamped below at 1.
    pub fn build(n: u32) -> GadgetGraph {
        let n = n.max(1);
        let mut g = GadgetGraph { n, names: (0..=n).map(|a| format!("e{a}")).collect(), edges: Vec::new(), hubs: Vec::new() };
        for c in 0..=n {
            for a in 0..=c {
                g.add_hub(HubKind::Plus, [a, c - a, c]);
            }
        }
        for a in 0..=n {
            for b in 0..=n {
                if a * b <= n {
                    g.add_hub(HubKind::Times, [a, b, a * b]);
                }
            }
        }
        g
    }

    fn vertex(&mut self, name: String) -> u32 {
        self.names.push(name);
        (self.names.len() - 1) as u32
    }

    fn add_hub(&mut self, kind: HubKind, args: [u32; 3]) {
        let tag = match kind {
            HubKind::Plus => "p",
            HubKind::Times => "m",
        };
        let base = format!("{tag}{}_{}_{}", args[0], args[1], args[2]);
        let h = self.vertex(base.clone());
        for k in 0..kind.leaves() {
            let leaf = self.vertex(format!("{base}.l{k}"));
            self.edges.push((h, leaf));
        }
        for (pos, &target) in args.iter().enumerate() {
            let mut prev = h;
            for step in 0..=pos {
                let m = self.vertex(format!("{base}.a{}.{}", pos + 1, step + 1));
                self.edges.push((prev, m));
                prev = m;
            }
            self.edges.push((prev, target));
        }
        self.hubs.push(Hub { kind, args, vertex: h });
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Vertex index of `e_a`.
    pub fn element(&self, a: u32) -> u32 {
        assert!(a <= self.n, "e_{a} is outside the fragment");
        a
    }

    pub fn hubs(&self) -> &[Hub] {
        &self.hubs
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn structure(&self) -> FiniteStructure {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&(a, b)| (a as usize, b as usize)).collect();
        FiniteStructure::graph(self.names.clone(), &edges).expect("gadget graphs are loopless")
    }

    /// Same graph with vertex ids equal to indices.
    pub fn graph(&self) -> FiniteGraph {
        let verts = 0..self.names.len() as u64;
        let edges = self.edges.iter().map(|&(a, b)| (a.min(b) as u64, a.max(b) as u64));
        FiniteGraph::new(verts, edges).expect("gadget graphs are loopless")
    }

    pub fn to_json(&self) -> Value {
        let edges: Vec<[&str; 2]> = self.edges.iter().map(|&(a, b)| [self.names[a as usize].as_str(), self.names[b as usize].as_str()]).collect();
        json!({"kind": "graph", "n": self.n, "verts": self.names, "edges": edges})
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plus_hubs_for_two() {
        let g = GadgetGraph::build(2);
        let mut plus: Vec<[u32; 3]> = g.hubs().iter().filter(|h| h.kind == HubKind::Plus).map(|h| h.args).collect();
        plus.sort();
        let mut expect = Vec::new();
        for a in 0..=2u32 {
            for b in 0..=2u32 {
                if a + b <= 2 {
                    expect.push([a, b, a + b]);
                }
            }
        }
        expect.sort();
        assert_eq!(plus, expect);
        assert_eq!(plus.len(), 6);
    }

    #[test]
    fn degrees() {
        let g = GadgetGraph::build(4);
        let s = g.structure();
        let deg = |v: u32| s.neighbors(v).len();
        for v in 0..s.size() as u32 {
            assert!(deg(v) > 0, "isolated vertex {}", s.name(v));
        }
        for a in 0..=4 {
            let e = g.element(a);
            assert!(deg(e) >= 3);
            assert!(s.neighbors(e).iter().all(|&m| deg(m) == 2));
        }
        for h in g.hubs() {
            let leaves = s.neighbors(h.vertex).iter().filter(|&&l| deg(l) == 1).count();
            assert_eq!(leaves, h.kind.leaves());
        }
    }

    #[test]
    fn argument_paths_have_fixed_lengths() {
        let g = GadgetGraph::build(3);
        let s = g.structure();
        for h in g.hubs() {
            // breadth-first distances from the hub through degree-2 vertices
            let mut dist = vec![u32::MAX; s.size()];
            dist[h.vertex as usize] = 0;
            let mut frontier = vec![h.vertex];
            while let Some(v) = frontier.pop() {
                for &w in s.neighbors(v) {
                    if dist[w as usize] == u32::MAX && (v == h.vertex || s.neighbors(v).len() == 2) {
                        dist[w as usize] = dist[v as usize] + 1;
                        frontier.insert(0, w);
                    }
                }
            }
            let got: Vec<u32> = h.args.iter().map(|&a| dist[g.element(a) as usize]).collect();
            let distinct: std::collections::BTreeSet<u32> = h.args.iter().copied().collect();
            if distinct.len() == 3 {
                assert_eq!(got, [2, 3, 4], "{:?}", h);
            } else {
                assert!(got.iter().all(|&d| (2..=4).contains(&d)));
            }
        }
    }
}
