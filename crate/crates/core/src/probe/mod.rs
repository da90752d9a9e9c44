//! Exhaustive order-theoretic computations on explicit finite posets, and
//! fixture posets with prescribed covers, joins and names.

mod audit;
mod fixture;
mod poset;

pub use audit::{probe_fixture, tower_agreement, CheckLine, FixtureReport, TowerLine};
pub use fixture::{all_fixtures, build_fixture, hasse, layout_fixture, layout_poset, Expect, Fixture, GraphExpect, FAMILIES};
pub use poset::{graph_label_pairs, graph_name_decodes, poset_coding_graph, FinitePoset, ProbeError, Smc};
