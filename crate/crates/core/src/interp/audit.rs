//! Exhaustive checks of the interpretation on gadget fragments.

use super::corpus::corpus;
use super::gadget::GadgetGraph;
use super::tower::{arith_macros, arith_to_graph, graph_macros};
use crate::exec::Exec;
use crate::logic::{eval_many, parse_formula, Checker, FiniteStructure, Program};
use serde::Serialize;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ArithmeticReport {
    pub n: u32,
    pub triples: usize,
    pub plus_mismatches: Vec<[u32; 3]>,
    pub times_mismatches: Vec<[u32; 3]>,
    /// Pairs `(a, b)` with `a + b <= n` for which the set of `z` with
    /// `Plus(e_a, e_b, z)` is not exactly `{e_(a+b)}`.
    pub uniqueness_failures: Vec<[u32; 2]>,
}

impl ArithmeticReport {
    pub fn passed(&self) -> bool {
        self.plus_mismatches.is_empty() && self.times_mismatches.is_empty() && self.uniqueness_failures.is_empty()
    }
}

/// Compare `Plus` and `Times` on element vertices with N, and check that
/// `Plus(e_a, e_b, _)` has exactly one solution among all vertices.
pub fn check_gadget_arithmetic(n: u32, exec: Exec) -> ArithmeticReport {
    let g = GadgetGraph::build(n);
    let st = g.structure();
    let prog = Program::new(graph_macros()).expect("graph macros compile");
    let plus = prog.query(&parse_formula("Plus(x, y, z)").unwrap(), &["x", "y", "z"]).unwrap();
    let times = prog.query(&parse_formula("Times(x, y, z)").unwrap(), &["x", "y", "z"]).unwrap();
    let mut triples = Vec::new();
    for a in 0..=n {
        for b in 0..=n {
            for c in 0..=n {
                triples.push(vec![g.element(a), g.element(b), g.element(c)]);
            }
        }
    }
    let p = eval_many(exec, &st, &prog, &plus, &triples).expect("graph structure");
    let t = eval_many(exec, &st, &prog, &times, &triples).expect("graph structure");
    let mut report = ArithmeticReport { n, triples: triples.len(), plus_mismatches: Vec::new(), times_mismatches: Vec::new(), uniqueness_failures: Vec::new() };
    for (k, tr) in triples.iter().enumerate() {
        let (a, b, c) = (tr[0], tr[1], tr[2]);
        if p[k] != (a + b == c) {
            report.plus_mismatches.push([a, b, c]);
        }
        if t[k] != (a * b == c) {
            report.times_mismatches.push([a, b, c]);
        }
    }
    let pairs: Vec<[u32; 2]> = (0..=n).flat_map(|a| (0..=n - a).map(move |b| [a, b])).collect();
    let size = st.size() as u32;
    let solutions = exec.map_chunks(&pairs, |part| {
        let mut c = Checker::new(&st, &prog).expect("graph structure");
        part.iter().map(|&[a, b]| (0..size).filter(|&z| c.eval(&plus, &[g.element(a), g.element(b), z])).collect::<Vec<u32>>()).collect()
    });
    for (pair, sol) in pairs.iter().zip(solutions) {
        if sol != [g.element(pair[0] + pair[1])] {
            report.uniqueness_failures.push(*pair);
        }
    }
    report
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CorpusLine {
    pub name: String,
    pub oracle: bool,
    pub arithmetic: bool,
    pub graph: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CorpusReport {
    pub n: u32,
    pub lines: Vec<CorpusLine>,
}

impl CorpusReport {
    pub fn agreements(&self) -> usize {
        self.lines.iter().filter(|l| l.oracle == l.graph && l.oracle == l.arithmetic).count()
    }

    pub fn passed(&self) -> bool {
        self.agreements() == self.lines.len()
    }
}

/// Evaluate every corpus sentence three ways: directly in N, on the
/// arithmetic fragment `{0..n}`, and translated on the gadget graph.
pub fn check_corpus(n: u32, exec: Exec) -> CorpusReport {
    let items = corpus();
    let g = GadgetGraph::build(n);
    let gst = g.structure();
    let gprog = Program::new(graph_macros()).expect("graph macros compile");
    let ast = FiniteStructure::arith(n);
    let aprog = Program::new(arith_macros()).expect("arith macros compile");
    let lines = exec.map_chunks(&items, |part| {
        let mut ac = Checker::new(&ast, &aprog).expect("arith structure");
        let mut gc = Checker::new(&gst, &gprog).expect("graph structure");
        part.iter()
            .map(|(name, b)| {
                let f = b.to_formula();
                let gf = arith_to_graph(&f).expect("arithmetic sentence");
                let aq = aprog.query(&f, &[]).expect("compiles");
                let gq = gprog.query(&gf, &[]).expect("compiles");
                CorpusLine { name: name.to_string(), oracle: b.truth(), arithmetic: ac.eval(&aq, &[]), graph: gc.eval(&gq, &[]) }
            })
            .collect()
    });
    CorpusReport { n, lines }
}
