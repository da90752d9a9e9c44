//! First-order logic over finite structures: syntax, macros, checking.

pub mod check;
pub mod formula;
pub mod macros;
pub mod naive;
pub mod structure;
pub mod syntax;

pub use check::{eval_many, model_check, CheckError, Checker, Program, Query};
pub use formula::{Atom, Formula, Signature, Var};
pub use macros::{Macro, MacroError, MacroTable};
pub use structure::{FiniteStructure, StructureError};
pub use syntax::{parse_formula, ParseError};
