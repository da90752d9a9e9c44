//! Ceer algebra, the graph-coding priority construction, and the
//! arithmetic → graph → poset interpretation tower with a finite model
//! checker.

pub mod exec;
pub mod kernel;

pub use exec::Exec;
pub mod construction;
pub mod graph;
pub mod logic;
pub mod interp;
pub mod names;
pub mod probe;
pub mod verify;
