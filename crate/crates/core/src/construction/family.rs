//! Uniformly staged families `R_0, R_1, ...` plugged into the construction.

use crate::kernel::{CeerTrace, KernelError, StagedCeer};
use serde::{Deserialize, Serialize};

/// Properties the caller claims for the family. Carried as metadata only;
/// none of them is checkable at a finite stage.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimedProperties {
    #[default]
    None,
    PairwiseIncomparableDarkMinimal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// Every `R_i` is `Id`.
    Identity,
    /// `R_i` collapses `2t ~ 2t+1` at stage `t * (base + i)`.
    Ladder { base: usize },
    /// `R_i = Id_{i + offset}`.
    Modular { offset: usize },
    /// Explicit list of ceer traces.
    List(Vec<CeerTrace>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorFamily {
    pub kind: FamilyKind,
    #[serde(default)]
    pub claimed: ClaimedProperties,
}

impl GeneratorFamily {
    pub fn new(kind: FamilyKind) -> Self {
        GeneratorFamily {
            kind,
            claimed: ClaimedProperties::None,
        }
    }

    /// `"id"`, `"ladder"`, `"ladder:B"`, `"mod"`, `"mod:K"`.
    pub fn parse(spec: &str) -> Result<Self, KernelError> {
        let (name, arg) = spec.split_once(':').map_or((spec, None), |(n, a)| (n, Some(a)));
        let num = |default: usize| -> Result<usize, KernelError> {
            arg.map_or(Ok(default), |a| a.parse().map_err(|_| KernelError::InvalidArgument(format!("bad family parameter {a:?}"))))
        };
        let kind = match name {
            "id" => FamilyKind::Identity,
            "ladder" => FamilyKind::Ladder { base: num(1)?.max(1) },
            "mod" => FamilyKind::Modular { offset: num(2)?.max(1) },
            other => return Err(KernelError::InvalidArgument(format!("unknown family {other:?}"))),
        };
        Ok(GeneratorFamily::new(kind))
    }

    pub fn member(&self, i: usize) -> Result<StagedCeer, KernelError> {
        match &self.kind {
            FamilyKind::Identity => Ok(StagedCeer::Id),
            FamilyKind::Ladder { base } => Ok(StagedCeer::Ladder { period: base + i }),
            FamilyKind::Modular { offset } => StagedCeer::id_n(i + offset),
            FamilyKind::List(list) => list
                .get(i)
                .cloned()
                .ok_or_else(|| KernelError::InvalidArgument(format!("family has no member {i}")))?
                .into_ceer(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_specs() {
        assert_eq!(GeneratorFamily::parse("id").unwrap().kind, FamilyKind::Identity);
        assert_eq!(GeneratorFamily::parse("ladder:3").unwrap().kind, FamilyKind::Ladder { base: 3 });
        assert!(GeneratorFamily::parse("mystery").is_err());
        let m = GeneratorFamily::parse("mod").unwrap();
        assert_eq!(m.member(1).unwrap().snapshot(0, 9).unwrap().class_count(), 3);
    }

    #[test]
    fn list_members() {
        let f = GeneratorFamily::new(FamilyKind::List(vec![CeerTrace::Finite { classes: vec![vec![0, 1]] }]));
        assert!(f.member(0).is_ok());
        assert!(f.member(1).is_err());
    }
}
