//! Ceers as staged partitions and the algebra on them.

pub mod ceset;
mod error;
pub mod facts;
pub mod finite;
pub mod pairing;
pub mod partition;
pub mod reduction;
pub mod staged;
pub mod trace;
pub mod window;

pub use ceset::CeSet;
pub use error::KernelError;
pub use finite::{brute_force_reduces, ClassWitness, FiniteCeer};
pub use pairing::{pair, unpair};
pub use partition::{PairLog, Partition, UnionFind};
pub use reduction::{Expr, ReductionFn};
pub use staged::{column_code, column_generators, StagedCeer};
pub use trace::CeerTrace;
pub use window::{check_reduction_window, Ceer, Direction, LayoutCertificate, Verdict};
