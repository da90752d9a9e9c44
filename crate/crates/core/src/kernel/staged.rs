//! Ceers presented stage by stage.

use super::ceset::CeSet;
use super::error::KernelError;
use super::finite::FiniteCeer;
use super::pairing::pair;
use super::partition::{closure, PairLog, Partition, UnionFind};
use super::reduction::ReductionFn;
use std::sync::Arc;

/// A ceer as a monotone sequence of partition snapshots.
///
/// `snapshot(stage, bound)` is the relation as enumerated by `stage`,
/// restricted to `0..bound`. Every variant computes it exactly, including
/// collapses routed through elements outside the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StagedCeer {
    /// Equality.
    Id,
    Finite(FiniteCeer),
    /// Explicit pair stream; stays constant after its last stage.
    Log(Arc<PairLog>),
    /// Collapses `2t ~ 2t+1` at stage `t * period`.
    Ladder { period: usize },
    Join(Box<StagedCeer>, Box<StagedCeer>),
    /// Column `i` holds the elements `x ≡ i (mod k)`.
    JoinMany(Vec<StagedCeer>),
    Restrict {
        base: Box<StagedCeer>,
        w: CeSet,
        h: ReductionFn,
    },
    /// Extra pairs `(stage, x, y)` added to the base stream.
    Quotient {
        base: Box<StagedCeer>,
        extra: Vec<(usize, u64, u64)>,
    },
}

impl From<FiniteCeer> for StagedCeer {
    fn from(f: FiniteCeer) -> Self {
        StagedCeer::Finite(f)
    }
}

impl StagedCeer {
    pub fn id_n(n: usize) -> Result<Self, KernelError> {
        Ok(StagedCeer::Finite(FiniteCeer::id_n(n)?))
    }

    pub fn from_log(log: PairLog) -> Self {
        StagedCeer::Log(Arc::new(log))
    }

    pub fn join(r: StagedCeer, s: StagedCeer) -> Self {
        StagedCeer::Join(Box::new(r), Box::new(s))
    }

    pub fn join_many(list: Vec<StagedCeer>) -> Result<Self, KernelError> {
        if list.is_empty() {
            return Err(KernelError::InvalidArgument("empty join".into()));
        }
        Ok(StagedCeer::JoinMany(list))
    }

    /// `X ↦ X ⊕ Id`.
    pub fn iota(x: StagedCeer) -> Self {
        StagedCeer::join(x, StagedCeer::Id)
    }

    pub fn restriction(base: StagedCeer, w: CeSet, h: ReductionFn) -> Self {
        StagedCeer::Restrict {
            base: Box::new(base),
            w,
            h,
        }
    }

    /// Quotient by pairs present from stage 0.
    pub fn quotient(base: StagedCeer, pairs: &[(u64, u64)]) -> Self {
        StagedCeer::quotient_staged(base, pairs.iter().map(|&(x, y)| (0, x, y)).collect())
    }

    pub fn quotient_staged(base: StagedCeer, extra: Vec<(usize, u64, u64)>) -> Self {
        StagedCeer::Quotient {
            base: Box::new(base),
            extra,
        }
    }

    /// Whether the relation is fixed from stage 0 on (no enumeration events).
    pub fn is_static(&self) -> bool {
        match self {
            StagedCeer::Id | StagedCeer::Finite(_) => true,
            StagedCeer::Log(l) => l.stages.iter().skip(1).all(Vec::is_empty),
            StagedCeer::Ladder { .. } => false,
            StagedCeer::Join(a, b) => a.is_static() && b.is_static(),
            StagedCeer::JoinMany(l) => l.iter().all(StagedCeer::is_static),
            StagedCeer::Restrict { base, .. } => base.is_static(),
            StagedCeer::Quotient { base, extra } => base.is_static() && extra.iter().all(|e| e.0 == 0),
        }
    }

    pub fn snapshot(&self, stage: usize, bound: usize) -> Result<Partition, KernelError> {
        if bound == 0 {
            return Err(KernelError::EmptyUniverse);
        }
        self.window(stage, bound)
    }

    fn window(&self, stage: usize, bound: usize) -> Result<Partition, KernelError> {
        Ok(match self {
            StagedCeer::Id => Partition::discrete(bound),
            StagedCeer::Finite(f) => f.window(bound),
            StagedCeer::Log(log) => {
                let reach = bound.max(log.max_element().map_or(0, |m| m as usize + 1));
                log.snapshot(stage, reach).prefix(bound)
            }
            StagedCeer::Ladder { period } => {
                let period = (*period).max(1);
                let raw: Vec<usize> = (0..bound)
                    .map(|x| {
                        let t = x / 2;
                        if t * period <= stage {
                            2 * t
                        } else {
                            x
                        }
                    })
                    .collect();
                Partition::from_labels(&raw)
            }
            StagedCeer::Join(a, b) => {
                let pa = a.window(stage, bound.div_ceil(2).max(1))?;
                let pb = b.window(stage, (bound / 2).max(1))?;
                let raw: Vec<(u8, u32)> = (0..bound)
                    .map(|x| if x % 2 == 0 { (0, pa.label(x / 2)) } else { (1, pb.label(x / 2)) })
                    .collect();
                Partition::from_labels(&raw)
            }
            StagedCeer::JoinMany(list) => {
                let k = list.len();
                let parts = list
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c.window(stage, ((bound + k - 1 - i) / k).max(1)))
                    .collect::<Result<Vec<_>, _>>()?;
                let raw: Vec<(usize, u32)> = (0..bound).map(|x| (x % k, parts[x % k].label(x / k))).collect();
                Partition::from_labels(&raw)
            }
            StagedCeer::Restrict { base, w, h } => {
                let hs = h.tabulate(bound as u64)?;
                for (x, &hx) in hs.iter().enumerate() {
                    if !eventually_member(w, hx) {
                        return Err(KernelError::OutsideRange { x: x as u64, hx, stage });
                    }
                }
                let reach = hs.iter().max().map_or(1, |m| *m as usize + 1);
                let pb = base.window(stage, reach)?;
                let raw: Vec<u32> = hs.iter().map(|&hx| pb.label(hx as usize)).collect();
                Partition::from_labels(&raw)
            }
            StagedCeer::Quotient { base, extra } => {
                let live: Vec<(u64, u64)> = extra.iter().filter(|e| e.0 <= stage).map(|&(_, x, y)| (x, y)).collect();
                let reach = live.iter().map(|&(x, y)| x.max(y) as usize + 1).max().unwrap_or(0).max(bound);
                let pb = base.window(stage, reach)?;
                let mut uf = UnionFind::new(reach);
                let mut first = vec![usize::MAX; pb.class_count()];
                for x in 0..reach {
                    let l = pb.label(x) as usize;
                    if first[l] == usize::MAX {
                        first[l] = x;
                    } else {
                        uf.union(first[l], x);
                    }
                }
                for (x, y) in live {
                    uf.union(x as usize, y as usize);
                }
                uf.partition(reach).prefix(bound)
            }
        })
    }

    /// Elements of `W` enumerated by `stage` below `bound` that `h` misses on
    /// `0..search`. Not a refutation: later arguments may still hit them.
    pub fn restriction_warnings(&self, stage: usize, bound: u64, search: u64) -> Result<Vec<u64>, KernelError> {
        match self {
            StagedCeer::Restrict { w, h, .. } => {
                let hit: std::collections::BTreeSet<u64> = h.tabulate(search)?.into_iter().collect();
                Ok(w.enumerated(stage, bound).into_iter().filter(|x| *x < bound && !hit.contains(x)).collect())
            }
            _ => Ok(Vec::new()),
        }
    }

    /// Spanning pairs whose cumulative closure through each stage equals the
    /// snapshot on `0..bound`; `batches[s]` holds the pairs new at stage `s`.
    pub fn materialize(&self, stages: usize, bound: usize) -> Result<PairLog, KernelError> {
        let mut log = PairLog::new();
        let mut prev = Partition::discrete(bound);
        for s in 0..stages {
            let cur = self.snapshot(s, bound)?;
            log.push_stage(new_links(&prev, &cur));
            prev = cur;
        }
        Ok(log)
    }
}

fn eventually_member(w: &CeSet, x: u64) -> bool {
    match w {
        CeSet::Schedule(ev) => ev.iter().any(|&(_, e)| e == x),
        other => other.member(x, 0),
    }
}

/// Pairs joining the classes of `prev` that `cur` merges.
pub(crate) fn new_links(prev: &Partition, cur: &Partition) -> Vec<(u64, u64)> {
    let mut anchor = vec![usize::MAX; cur.class_count()];
    let mut linked = vec![false; prev.class_count()];
    let mut out = Vec::new();
    for x in 0..cur.len() {
        let c = cur.label(x) as usize;
        let p = prev.label(x) as usize;
        if anchor[c] == usize::MAX {
            anchor[c] = x;
            linked[p] = true;
        } else if !linked[p] {
            linked[p] = true;
            out.push((anchor[c] as u64, x as u64));
        }
    }
    out
}

/// `{n} × E` on `0..width`: every equivalent pair `x < y`, moved to column `n`.
pub fn column_code(n: u64, e: &StagedCeer, stage: usize, width: usize) -> Result<Vec<(u64, u64)>, KernelError> {
    let p = e.snapshot(stage, width)?;
    let mut out = Vec::new();
    for x in 0..width {
        for y in x + 1..width {
            if p.same(x, y) {
                out.push((pair(n, x as u64), pair(n, y as u64)));
            }
        }
    }
    Ok(out)
}

/// Spanning form of [`column_code`]: same closure, fewer pairs.
pub fn column_generators(n: u64, e: &StagedCeer, stage: usize, width: usize) -> Result<Vec<(u64, u64)>, KernelError> {
    let p = e.snapshot(stage, width)?;
    Ok(new_links(&Partition::discrete(width), &p)
        .into_iter()
        .map(|(x, y)| (pair(n, x), pair(n, y)))
        .collect())
}

/// Independent closure of the materialized log; used to cross-check
/// [`StagedCeer::snapshot`].
pub fn replay_closure(log: &PairLog, stage: usize, bound: usize) -> Partition {
    closure(bound, log.through(stage))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::finite::equivalent;
    use crate::kernel::reduction::Expr;
    use proptest::prelude::*;

    fn id(n: usize) -> StagedCeer {
        StagedCeer::id_n(n).unwrap()
    }

    #[test]
    fn join_examples() {
        let ii = StagedCeer::join(StagedCeer::Id, StagedCeer::Id);
        assert_eq!(ii.snapshot(0, 10).unwrap().class_count(), 10);
        let j = StagedCeer::join(id(2), id(3));
        assert_eq!(j.snapshot(0, 10).unwrap().class_count(), 5);
    }

    #[test]
    fn join_many_matches_join() {
        assert_eq!(StagedCeer::join_many(vec![id(1), id(1), id(1)]).unwrap().snapshot(0, 30).unwrap().class_count(), 3);
        assert_eq!(StagedCeer::join_many(vec![StagedCeer::Id]).unwrap().snapshot(0, 9).unwrap(), Partition::discrete(9));
        let a = StagedCeer::join_many(vec![id(2), id(3)]).unwrap().snapshot(0, 20).unwrap();
        let b = StagedCeer::join(id(2), id(3)).snapshot(0, 20).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn restriction_examples() {
        let evens = StagedCeer::restriction(id(5), CeSet::Evens, ReductionFn::Expr(Expr::mul(Expr::c(2), Expr::Var)));
        assert_eq!(evens.snapshot(0, 10).unwrap().class_count(), 5);
        let ladder = StagedCeer::Ladder { period: 1 };
        let same = StagedCeer::restriction(ladder.clone(), CeSet::All, ReductionFn::identity());
        for s in 0..6 {
            assert_eq!(same.snapshot(s, 12).unwrap(), ladder.snapshot(s, 12).unwrap());
        }
        let point = StagedCeer::restriction(id(2), CeSet::Finite([0].into()), ReductionFn::Expr(Expr::c(0)));
        assert_eq!(point.snapshot(0, 6).unwrap().class_count(), 1);
    }

    #[test]
    fn restriction_outside_w_is_an_error() {
        let bad = StagedCeer::restriction(id(3), CeSet::Evens, ReductionFn::identity());
        assert!(matches!(bad.snapshot(0, 4), Err(KernelError::OutsideRange { x: 1, .. })));
    }

    #[test]
    fn restriction_warns_on_missed_members() {
        let r = StagedCeer::restriction(id(3), CeSet::All, ReductionFn::Expr(Expr::mul(Expr::c(2), Expr::Var)));
        assert_eq!(r.restriction_warnings(0, 6, 3).unwrap(), vec![1, 3, 5]);
    }

    #[test]
    fn quotient_examples() {
        let q = StagedCeer::quotient(StagedCeer::Id, &[(0, 1)]);
        assert_eq!(q.snapshot(0, 5).unwrap().classes(), vec![vec![0, 1], vec![2], vec![3], vec![4]]);
        let q4 = StagedCeer::quotient(id(4), &[(0, 1), (1, 2)]);
        assert_eq!(q4.snapshot(0, 8).unwrap().class_count(), 2);
        assert_eq!(StagedCeer::quotient(id(4), &[]).snapshot(0, 8).unwrap(), id(4).snapshot(0, 8).unwrap());
    }

    #[test]
    fn quotient_routes_through_outside_elements() {
        // 0 ~ 9 and 9 ~ 1 only become visible on 0..3 through element 9.
        let q = StagedCeer::quotient(StagedCeer::Id, &[(0, 9), (9, 1)]);
        assert!(q.snapshot(0, 3).unwrap().same(0, 1));
    }

    #[test]
    fn column_code_examples() {
        let mut log = PairLog::new();
        log.push_stage(vec![(1, 2)]);
        let e = StagedCeer::from_log(log);
        assert_eq!(column_code(0, &e, 0, 3).unwrap(), vec![(pair(0, 1), pair(0, 2))]);
        let all = column_code(1, &id(1), 0, 4).unwrap();
        assert_eq!(all.len(), 6);
        let gens = column_generators(1, &id(1), 0, 4).unwrap();
        let codes: Vec<u64> = (0..4).map(|x| pair(1, x)).collect();
        let top = *codes.iter().max().unwrap() as usize + 1;
        let c = closure(top, gens);
        assert!(codes.iter().all(|&a| c.same(a as usize, codes[0] as usize)));
    }

    #[test]
    fn iota_examples() {
        let i1 = StagedCeer::iota(id(1)).snapshot(0, 10).unwrap();
        assert_eq!(i1.classes()[0], vec![0, 2, 4, 6, 8]);
        assert_eq!(i1.class_count(), 6);
        let back = StagedCeer::restriction(StagedCeer::iota(id(3)), CeSet::Evens, ReductionFn::Expr(Expr::mul(Expr::c(2), Expr::Var)));
        assert_eq!(back.snapshot(0, 12).unwrap(), id(3).snapshot(0, 12).unwrap());
    }

    #[test]
    fn finite_and_staged_agree() {
        let f = FiniteCeer::id_n(2).unwrap().join(&FiniteCeer::id_n(3).unwrap());
        let s = StagedCeer::join(id(2), id(3));
        assert_eq!(f.window(24), s.snapshot(0, 24).unwrap());
        assert!(equivalent(&f, &FiniteCeer::id_n(5).unwrap()));
    }

    fn arb_staged() -> impl Strategy<Value = StagedCeer> {
        let leaf = prop_oneof![
            Just(StagedCeer::Id),
            (1usize..5).prop_map(|n| StagedCeer::id_n(n).unwrap()),
            (1usize..4).prop_map(|p| StagedCeer::Ladder { period: p }),
            prop::collection::vec(prop::collection::vec((0u64..20, 0u64..20), 0..3), 1..6)
                .prop_map(|stages| StagedCeer::from_log(PairLog { stages })),
        ];
        leaf.prop_recursive(3, 12, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| StagedCeer::join(a, b)),
                prop::collection::vec(inner.clone(), 1..4).prop_map(StagedCeer::JoinMany),
                (inner.clone(), prop::collection::vec((0usize..6, 0u64..20, 0u64..20), 0..4))
                    .prop_map(|(b, extra)| StagedCeer::quotient_staged(b, extra)),
                inner.prop_map(|b| StagedCeer::restriction(b, CeSet::All, ReductionFn::Expr(Expr::add(Expr::Var, Expr::c(1))))),
            ]
        })
    }

    proptest! {
        #[test]
        fn closure_soundness(c in arb_staged(), bound in 1usize..24) {
            let log = c.materialize(8, bound).unwrap();
            for s in 0..8 {
                prop_assert_eq!(replay_closure(&log, s, bound), c.snapshot(s, bound).unwrap());
            }
        }

        #[test]
        fn monotone(c in arb_staged(), bound in 1usize..24, s in 0usize..8) {
            prop_assert!(c.snapshot(s, bound).unwrap().refines(&c.snapshot(s + 1, bound).unwrap()));
        }

        #[test]
        fn windows_are_consistent(c in arb_staged(), bound in 2usize..24, s in 0usize..8) {
            let small = c.snapshot(s, bound - 1).unwrap();
            prop_assert_eq!(c.snapshot(s, bound).unwrap().prefix(bound - 1), small);
        }
    }
}
