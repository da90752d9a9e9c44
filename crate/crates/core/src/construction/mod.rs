//! Priority construction of a ceer whose minimal degrees code a graph.

pub mod audit;
pub mod engine;
pub mod family;
pub mod requirement;
pub mod state;

pub use audit::{check_coding_fidelity, check_layout_tiling, check_parameter_bound, decode_layout_graph, verify_dark_satisfaction, DarkOutcome, DarkReport};
pub use engine::{requires_attention, run, ConstructionConfig, ConstructionError, ConstructionTrace, RunOutput, StageAction, StageRecord};
pub use family::{ClaimedProperties, FamilyKind, GeneratorFamily};
pub use requirement::{is_binding, priority_order, requirement_bound, Requirement};
pub use state::{BlockReason, ColumnContent, ConstructionState, Descriptor};
