//! Parameters and column layout of the construction at one stage.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ColumnContent {
    /// Copy of `R_index`.
    Code { index: usize },
    /// `(R_left ⊕ R_right)_{/(x,y)}` for the binding `Edge_index`.
    QuotientEdge { index: usize, left: u64, right: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BlockReason {
    /// Column of `Code_index` for a non-vertex index: one class.
    Padding { index: usize },
    /// Collapse performed by `Dark_dark`.
    Collapse { dark: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Descriptor {
    Coding { column: u64, content: ColumnContent },
    /// Columns `first..=last` collapsed to a single class.
    Block { first: u64, last: u64, reason: BlockReason },
}

impl Descriptor {
    pub fn first(&self) -> u64 {
        match self {
            Descriptor::Coding { column, .. } => *column,
            Descriptor::Block { first, .. } => *first,
        }
    }

    pub fn last(&self) -> u64 {
        match self {
            Descriptor::Coding { column, .. } => *column,
            Descriptor::Block { last, .. } => *last,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionState {
    pub stage: usize,
    pub gamma: BTreeMap<usize, u64>,
    pub epsilon: BTreeMap<usize, u64>,
    /// Least fresh column.
    pub r: u64,
    pub satisfied: BTreeSet<usize>,
    /// Sorted by first column.
    pub layout: Vec<Descriptor>,
}

impl ConstructionState {
    pub fn descriptor_at(&self, column: u64) -> Option<&Descriptor> {
        let idx = self.layout.partition_point(|d| d.last() < column);
        self.layout.get(idx).filter(|d| d.first() <= column)
    }

    /// Checks the tiling, the `ε` rule and freshness of `r`.
    pub fn check_invariants(&self, binding: impl Fn(usize) -> bool) -> Result<(), String> {
        let mut next = 0;
        for d in &self.layout {
            if d.first() != next || d.last() < d.first() {
                return Err(format!("layout gap or overlap at column {next}: {d:?}"));
            }
            next = d.last() + 1;
        }
        if next != self.r {
            return Err(format!("layout ends at {next} but r = {}", self.r));
        }
        if self.gamma.keys().ne(self.epsilon.keys()) {
            return Err("gamma and epsilon defined on different indices".into());
        }
        for (&i, &g) in &self.gamma {
            let e = self.epsilon[&i];
            let want = if binding(i) { g + 1 } else { g };
            if e != want {
                return Err(format!("epsilon_{i} = {e}, expected {want}"));
            }
            if e >= self.r {
                return Err(format!("parameter of index {i} not below r = {}", self.r));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_and_invariants() {
        let s = ConstructionState {
            stage: 3,
            gamma: [(0, 0), (1, 1)].into(),
            epsilon: [(0, 0), (1, 2)].into(),
            r: 5,
            satisfied: BTreeSet::new(),
            layout: vec![
                Descriptor::Coding { column: 0, content: ColumnContent::Code { index: 0 } },
                Descriptor::Coding { column: 1, content: ColumnContent::Code { index: 1 } },
                Descriptor::Coding { column: 2, content: ColumnContent::QuotientEdge { index: 1, left: 1, right: 0 } },
                Descriptor::Block { first: 3, last: 4, reason: BlockReason::Collapse { dark: 1 } },
            ],
        };
        assert_eq!(s.descriptor_at(4).unwrap().first(), 3);
        assert!(s.descriptor_at(5).is_none());
        assert!(s.check_invariants(|i| i == 1).is_ok());
        assert!(s.check_invariants(|_| false).is_err());
        let mut gap = s.clone();
        gap.layout.remove(1);
        assert!(gap.check_invariants(|i| i == 1).is_err());
    }
}
