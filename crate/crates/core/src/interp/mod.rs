//! Interpreting arithmetic in graphs and graphs in partial orders.

pub mod audit;
pub mod corpus;
pub mod gadget;
pub mod tower;

pub use audit::{check_corpus, check_gadget_arithmetic, ArithmeticReport, CorpusReport};
pub use corpus::{corpus, Bounded};
pub use gadget::{GadgetGraph, Hub, HubKind};
pub use tower::{
    arith_macros, arith_to_graph, bounded_good_code_formula, good_code_formula, graph_macros, graph_to_poset, poset_macros, q_axioms,
    InterpError, PosetMode, Side, VertexMode,
};
