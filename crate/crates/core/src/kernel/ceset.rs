//! Computably enumerable sets given by stage-indexed enumerators.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// A c.e. set. `Schedule` enumerates `elem` at stage `stage` and is the
/// general finite-data form; the other variants are decidable sets that are
/// fully enumerated at stage 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CeSet {
    All,
    Evens,
    Odds,
    Empty,
    Finite(BTreeSet<u64>),
    Schedule(Vec<(usize, u64)>),
}

impl CeSet {
    pub fn schedule(mut events: Vec<(usize, u64)>) -> Self {
        events.sort_unstable();
        events.dedup();
        CeSet::Schedule(events)
    }

    pub fn member(&self, x: u64, stage: usize) -> bool {
        match self {
            CeSet::All => true,
            CeSet::Evens => x.is_multiple_of(2),
            CeSet::Odds => x % 2 == 1,
            CeSet::Empty => false,
            CeSet::Finite(set) => set.contains(&x),
            CeSet::Schedule(ev) => ev.iter().any(|&(s, e)| e == x && s <= stage),
        }
    }

    /// Whether every element is listed explicitly.
    pub fn is_explicit(&self) -> bool {
        matches!(self, CeSet::Empty | CeSet::Finite(_) | CeSet::Schedule(_))
    }

    /// Members enumerated by `stage`; for the infinite variants only those
    /// below `bound`.
    pub fn enumerated(&self, stage: usize, bound: u64) -> Vec<u64> {
        match self {
            CeSet::Finite(set) => set.iter().copied().collect(),
            CeSet::Schedule(ev) => {
                let set: BTreeSet<u64> = ev.iter().filter(|(s, _)| *s <= stage).map(|&(_, e)| e).collect();
                set.into_iter().collect()
            }
            CeSet::Empty => Vec::new(),
            _ => (0..bound).filter(|&x| self.member(x, stage)).collect(),
        }
    }

    /// Elements enumerated exactly at `stage` (explicit variants only).
    pub fn batch(&self, stage: usize) -> Vec<u64> {
        match self {
            CeSet::Schedule(ev) => ev.iter().filter(|(s, _)| *s == stage).map(|&(_, e)| e).collect(),
            CeSet::Finite(set) if stage == 0 => set.iter().copied().collect(),
            _ => Vec::new(),
        }
    }

    /// Stage of the last enumeration event, if the set is explicit.
    pub fn last_event(&self) -> Option<usize> {
        match self {
            CeSet::Schedule(ev) => ev.iter().map(|&(s, _)| s).max(),
            CeSet::Finite(_) | CeSet::Empty => Some(0),
            _ => None,
        }
    }
}
