//! Requirements and their priority order.

use crate::graph::FiniteGraph;
use crate::kernel::pairing::{pair, unpair};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Requirement {
    Code(usize),
    Edge(usize),
    Dark(usize),
}

impl Requirement {
    fn key(self) -> (usize, u8) {
        match self {
            Requirement::Code(i) => (i, 0),
            Requirement::Edge(i) => (i, 1),
            Requirement::Dark(i) => (i, 2),
        }
    }
}

/// `Code_0 < Edge_0 < Dark_0 < Code_1 < ...`
pub fn priority_order(a: Requirement, b: Requirement) -> Ordering {
    a.key().cmp(&b.key())
}

impl PartialOrd for Requirement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Requirement {
    fn cmp(&self, other: &Self) -> Ordering {
        priority_order(*self, *other)
    }
}

/// `Edge_i` with `i = ⟨a, b⟩` is binding when `a–b` is an edge and `i` is
/// the smaller of `⟨a, b⟩`, `⟨b, a⟩`.
pub fn is_binding(graph: &FiniteGraph, i: usize) -> bool {
    let (a, b) = unpair(i as u64);
    a != b && graph.has_edge(a, b) && pair(b, a) > i as u64
}

/// Number of requirement indices needed to code a finite graph: every
/// vertex and every binding edge index lies below it.
pub fn requirement_bound(graph: &FiniteGraph) -> usize {
    let vertices = graph.vertices().iter().next_back().map_or(0, |v| *v as usize + 1);
    let edges = graph
        .edges()
        .iter()
        .map(|&(a, b)| pair(a, b).min(pair(b, a)) as usize + 1)
        .max()
        .unwrap_or(0);
    vertices.max(edges).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_examples() {
        use Requirement::*;
        assert_eq!(priority_order(Code(0), Dark(0)), Ordering::Less);
        assert_eq!(priority_order(Dark(0), Code(1)), Ordering::Less);
        assert_eq!(priority_order(Edge(2), Edge(2)), Ordering::Equal);
        let mut reqs = vec![Dark(1), Code(1), Edge(0), Dark(0), Code(0), Edge(1)];
        reqs.sort();
        assert_eq!(reqs, vec![Code(0), Edge(0), Dark(0), Code(1), Edge(1), Dark(1)]);
    }

    #[test]
    fn binding_convention() {
        let g = FiniteGraph::path(2);
        // ⟨1,0⟩ = 1 < ⟨0,1⟩ = 2, so Edge_1 binds and Edge_2 does not.
        assert!(is_binding(&g, 1));
        assert!(!is_binding(&g, 2));
        assert!(!is_binding(&g, 0));
        assert_eq!(requirement_bound(&g), 2);
        for i in 0..50 {
            assert!(!is_binding(&FiniteGraph::empty(5), i));
        }
    }

    #[test]
    fn exactly_one_binding_index_per_edge() {
        let g = FiniteGraph::label_gadget();
        let k = requirement_bound(&g);
        let binding: Vec<usize> = (0..k).filter(|&i| is_binding(&g, i)).collect();
        assert_eq!(binding.len(), g.edges().len());
        assert_eq!(k, 50);
    }
}
