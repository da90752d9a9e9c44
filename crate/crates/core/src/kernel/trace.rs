//! JSON ceer traces.

use super::error::KernelError;
use super::finite::FiniteCeer;
use super::partition::PairLog;
use super::staged::StagedCeer;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CeerTrace {
    Staged {
        pairing: String,
        stages: Vec<Vec<[u64; 2]>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label_metadata: Option<serde_json::Value>,
    },
    Finite {
        classes: Vec<Vec<u64>>,
    },
}

impl CeerTrace {
    pub fn from_log(log: &PairLog) -> Self {
        CeerTrace::Staged {
            pairing: "cantor".into(),
            stages: log.stages.iter().map(|b| b.iter().map(|&(x, y)| [x, y]).collect()).collect(),
            label_metadata: None,
        }
    }

    pub fn from_finite(c: &FiniteCeer) -> Self {
        CeerTrace::Finite {
            classes: c.pattern().classes(),
        }
    }

    pub fn materialize(c: &StagedCeer, stages: usize, bound: usize) -> Result<Self, KernelError> {
        Ok(Self::from_log(&c.materialize(stages, bound)?))
    }

    pub fn into_ceer(self) -> Result<StagedCeer, KernelError> {
        match self {
            CeerTrace::Staged { pairing, stages, .. } => {
                if pairing != "cantor" {
                    return Err(KernelError::Trace(format!("unsupported pairing {pairing:?}")));
                }
                Ok(StagedCeer::from_log(PairLog {
                    stages: stages.into_iter().map(|b| b.into_iter().map(|[x, y]| (x, y)).collect()).collect(),
                }))
            }
            CeerTrace::Finite { classes } => Ok(StagedCeer::Finite(FiniteCeer::from_classes(&classes)?)),
        }
    }
}
