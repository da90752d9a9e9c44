//! Union-find with a replayable merge log, and canonical partitions.

use serde::{Deserialize, Serialize};

/// Dense union-find over `0..len` that grows on demand.
#[derive(Clone, Debug, Default)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len as u32).collect(),
            size: vec![1; len],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn grow(&mut self, len: usize) {
        while self.parent.len() < len {
            self.parent.push(self.parent.len() as u32);
            self.size.push(1);
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        self.grow(x + 1);
        let mut x = x as u32;
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x as usize
    }

    /// Merge the classes of `a` and `b`; returns false if already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big as u32;
        self.size[big] += self.size[small];
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Canonical partition of `0..len`.
    pub fn partition(&mut self, len: usize) -> Partition {
        self.grow(len);
        let roots: Vec<usize> = (0..len).map(|x| self.find(x)).collect();
        Partition::from_labels(&roots)
    }
}

/// Partition of `0..n` stored as restricted-growth labels: element 0 has
/// label 0 and each new class gets the next unused label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    labels: Vec<u32>,
    classes: u32,
}

impl Partition {
    pub fn discrete(n: usize) -> Self {
        Partition {
            labels: (0..n as u32).collect(),
            classes: n as u32,
        }
    }

    /// Canonicalize arbitrary labels.
    pub fn from_labels<T: Copy + Eq + std::hash::Hash>(raw: &[T]) -> Self {
        let mut seen = std::collections::HashMap::new();
        let labels = raw
            .iter()
            .map(|l| {
                let next = seen.len() as u32;
                *seen.entry(*l).or_insert(next)
            })
            .collect();
        Partition {
            labels,
            classes: seen.len() as u32,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.classes as usize
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> u32 {
        self.labels[x]
    }

    pub fn same(&self, x: usize, y: usize) -> bool {
        self.labels[x] == self.labels[y]
    }

    /// Classes in order of least element, each sorted.
    pub fn classes(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new(); self.classes as usize];
        for (x, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(x as u64);
        }
        out
    }

    /// True when every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.len() > coarser.len() {
            return false;
        }
        let mut image = vec![u32::MAX; self.classes as usize];
        for (x, &l) in self.labels.iter().enumerate() {
            let c = coarser.labels[x];
            match image[l as usize] {
                u32::MAX => image[l as usize] = c,
                prev if prev != c => return false,
                _ => {}
            }
        }
        true
    }

    /// Restriction to the prefix `0..n`.
    pub fn prefix(&self, n: usize) -> Partition {
        Partition::from_labels(&self.labels[..n.min(self.len())])
    }
}

/// Equivalence closure of `pairs` on `0..bound`, ignoring pairs that leave it.
pub fn closure(bound: usize, pairs: impl IntoIterator<Item = (u64, u64)>) -> Partition {
    let mut uf = UnionFind::new(bound);
    for (x, y) in pairs {
        if (x as usize) < bound && (y as usize) < bound {
            uf.union(x as usize, y as usize);
        }
    }
    uf.partition(bound)
}

/// Per-stage merge log: `stages[s]` holds the pairs enumerated at stage `s`.
///
/// Snapshots at any past stage are rebuilt by replaying the prefix.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairLog {
    pub stages: Vec<Vec<(u64, u64)>>,
}

impl PairLog {
    pub fn new() -> Self {
        PairLog::default()
    }

    pub fn push_stage(&mut self, batch: Vec<(u64, u64)>) {
        self.stages.push(batch);
    }

    pub fn stage_count(&self) -> usize {
        self.stages.len()
    }

    /// Pairs enumerated through stage `s` (inclusive).
    pub fn through(&self, s: usize) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.stages.iter().take(s + 1).flatten().copied()
    }

    pub fn max_element(&self) -> Option<u64> {
        self.stages.iter().flatten().map(|&(x, y)| x.max(y)).max()
    }

    pub fn snapshot(&self, s: usize, bound: usize) -> Partition {
        closure(bound, self.through(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Reference closure by repeated relabeling, no union-find.
    fn naive_closure(bound: usize, pairs: &[(u64, u64)]) -> Vec<u32> {
        let mut label: Vec<usize> = (0..bound).collect();
        for &(x, y) in pairs {
            let (x, y) = (x as usize, y as usize);
            if x >= bound || y >= bound {
                continue;
            }
            let (from, to) = (label[y], label[x]);
            for l in label.iter_mut() {
                if *l == from {
                    *l = to;
                }
            }
        }
        Partition::from_labels(&label).labels
    }

    #[test]
    fn canonical_labels() {
        let p = Partition::from_labels(&[7, 3, 7, 9]);
        assert_eq!(p.labels(), &[0, 1, 0, 2]);
        assert_eq!(p.classes(), vec![vec![0, 2], vec![1], vec![3]]);
    }

    #[test]
    fn refinement() {
        let fine = Partition::from_labels(&[0, 1, 2, 3]);
        let coarse = Partition::from_labels(&[0, 0, 1, 1]);
        assert!(fine.refines(&coarse));
        assert!(!coarse.refines(&fine));
    }

    #[test]
    fn log_replays_past_stages() {
        let mut log = PairLog::new();
        log.push_stage(vec![(0, 1)]);
        log.push_stage(vec![]);
        log.push_stage(vec![(1, 2)]);
        assert_eq!(log.snapshot(0, 4).class_count(), 3);
        assert_eq!(log.snapshot(1, 4).class_count(), 3);
        assert_eq!(log.snapshot(2, 4).class_count(), 2);
    }

    proptest! {
        #[test]
        fn closure_matches_naive(bound in 1usize..24,
                                 pairs in prop::collection::vec((0u64..24, 0u64..24), 0..30)) {
            prop_assert_eq!(closure(bound, pairs.clone()).labels, naive_closure(bound, &pairs));
        }

        #[test]
        fn snapshots_are_monotone(batches in prop::collection::vec(
            prop::collection::vec((0u64..16, 0u64..16), 0..4), 1..8)) {
            let log = PairLog { stages: batches };
            for s in 1..log.stage_count() {
                prop_assert!(log.snapshot(s - 1, 16).refines(&log.snapshot(s, 16)));
            }
        }
    }
}
