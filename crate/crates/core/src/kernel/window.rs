//! Finite-window semi-decision of `x R y ⇔ f(x) S f(y)`.

use super::error::KernelError;
use super::finite::FiniteCeer;
use super::pairing::unpair;
use super::partition::Partition;
use super::reduction::ReductionFn;
use super::staged::StagedCeer;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Columns whose content is final: elements in two distinct finished
/// columns are never collapsed at any later stage.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutCertificate {
    pub finished_columns: BTreeSet<u64>,
}

impl LayoutCertificate {
    pub fn separates(&self, a: u64, b: u64) -> bool {
        let (ca, cb) = (unpair(a).0, unpair(b).0);
        ca != cb && self.finished_columns.contains(&ca) && self.finished_columns.contains(&cb)
    }
}

/// A ceer argument for [`check_reduction_window`].
#[derive(Clone, Debug)]
pub enum Ceer {
    Finite(FiniteCeer),
    Staged(StagedCeer),
    Certified(StagedCeer, LayoutCertificate),
}

impl Ceer {
    fn snapshot(&self, stage: usize, bound: usize) -> Result<Partition, KernelError> {
        match self {
            Ceer::Finite(f) => Ok(f.window(bound.max(1))),
            Ceer::Staged(s) | Ceer::Certified(s, _) => s.snapshot(stage, bound.max(1)),
        }
    }

    /// `a` and `b` are inequivalent at this stage; can they never collapse?
    fn certainly_apart(&self, a: u64, b: u64) -> bool {
        match self {
            Ceer::Finite(_) => true,
            Ceer::Staged(s) => s.is_static(),
            Ceer::Certified(s, cert) => s.is_static() || cert.separates(a, b),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// `x R y` but `f(x)`, `f(y)` are apart in S.
    Forward,
    /// `f(x) S f(y)` but `x`, `y` are apart in R.
    Backward,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obligation {
    pub x: u64,
    pub y: u64,
    pub direction: Direction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    HardViolation { x: u64, y: u64, direction: Direction },
    ConsistentUpTo { bound: u64, stage: usize, pending: Vec<Obligation> },
}

impl Verdict {
    pub fn is_hard(&self) -> bool {
        matches!(self, Verdict::HardViolation { .. })
    }

    pub fn pending(&self) -> &[Obligation] {
        match self {
            Verdict::ConsistentUpTo { pending, .. } => pending,
            Verdict::HardViolation { .. } => &[],
        }
    }
}

/// Compare `R` and `f⁻¹[S]` on `0..bound` at `stage`.
///
/// A mismatch is a hard violation only when the inequivalent side can never
/// collapse later; otherwise it is recorded as a pending obligation.
pub fn check_reduction_window(
    r: &Ceer,
    s: &Ceer,
    f: &ReductionFn,
    bound: u64,
    stage: usize,
) -> Result<Verdict, KernelError> {
    let images = f.tabulate(bound)?;
    let pr = r.snapshot(stage, bound as usize)?;
    let reach = images.iter().max().map_or(1, |m| *m as usize + 1);
    let ps = s.snapshot(stage, reach)?;
    let mut pending = Vec::new();
    for x in 0..bound {
        for y in x + 1..bound {
            let (fx, fy) = (images[x as usize], images[y as usize]);
            let in_r = pr.same(x as usize, y as usize);
            let in_s = ps.same(fx as usize, fy as usize);
            if in_r == in_s {
                continue;
            }
            let (direction, hard) = if in_r {
                (Direction::Forward, s.certainly_apart(fx, fy))
            } else {
                (Direction::Backward, r.certainly_apart(x, y))
            };
            if hard {
                return Ok(Verdict::HardViolation { x, y, direction });
            }
            pending.push(Obligation { x, y, direction });
        }
    }
    Ok(Verdict::ConsistentUpTo { bound, stage, pending })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ceset::CeSet;
    use crate::kernel::pairing::pair;
    use crate::kernel::partition::PairLog;
    use crate::kernel::reduction::Expr;

    fn fid(n: usize) -> FiniteCeer {
        FiniteCeer::id_n(n).unwrap()
    }

    #[test]
    fn identity_on_id3() {
        let v = check_reduction_window(&Ceer::Finite(fid(3)), &Ceer::Finite(fid(3)), &ReductionFn::identity(), 9, 0).unwrap();
        assert_eq!(v, Verdict::ConsistentUpTo { bound: 9, stage: 0, pending: vec![] });
    }

    #[test]
    fn pigeonhole_into_id2() {
        for table in [vec![0, 1, 2], vec![0, 0, 1], vec![5, 7, 9], vec![1, 1, 1]] {
            let f = ReductionFn::Table(table);
            let v = check_reduction_window(&Ceer::Finite(fid(3)), &Ceer::Finite(fid(2)), &f, 3, 0).unwrap();
            assert!(v.is_hard(), "{v:?}");
        }
    }

    #[test]
    fn parity_table() {
        let r = Ceer::Finite(fid(1).join(&fid(1)));
        let f = ReductionFn::Table((0..16).map(|x| x % 2).collect());
        let v = check_reduction_window(&r, &Ceer::Finite(fid(2)), &f, 16, 0).unwrap();
        assert!(!v.is_hard() && v.pending().is_empty());
    }

    #[test]
    fn iota_is_idempotent_on_windows() {
        let i1 = StagedCeer::iota(StagedCeer::id_n(1).unwrap());
        let i2 = StagedCeer::iota(i1.clone());
        // i2: multiples of 4 form one class; i1: evens form one class.
        let down = ReductionFn::Table((0..32u64).map(|x| if x % 4 == 0 { 0 } else { 2 * x + 1 }).collect());
        let up = ReductionFn::Table((0..32u64).map(|x| if x % 2 == 0 { 0 } else { x }).collect());
        let a = check_reduction_window(&Ceer::Staged(i2.clone()), &Ceer::Staged(i1.clone()), &down, 32, 0).unwrap();
        let b = check_reduction_window(&Ceer::Staged(i1), &Ceer::Staged(i2), &up, 32, 0).unwrap();
        assert!(!a.is_hard() && a.pending().is_empty());
        assert!(!b.is_hard() && b.pending().is_empty());
    }

    #[test]
    fn growing_codomain_gives_pending_not_hard() {
        let r = Ceer::Finite(fid(1));
        let s = Ceer::Staged(StagedCeer::Ladder { period: 5 });
        // 0 ~ 1 already holds at stage 0; 2 ~ 3 only from stage 5 on.
        let v = check_reduction_window(&r, &s, &ReductionFn::identity(), 4, 0).unwrap();
        assert_eq!(v.pending().len(), 5);
        assert!(!v.is_hard());
    }

    #[test]
    fn certified_columns_make_violations_hard() {
        let mut log = PairLog::new();
        log.push_stage(vec![]);
        log.push_stage(vec![(pair(0, 0), pair(0, 1))]);
        let s = StagedCeer::from_log(log);
        let cert = LayoutCertificate { finished_columns: [0, 1].into() };
        let f = ReductionFn::Table(vec![pair(0, 0), pair(1, 0)]);
        let v = check_reduction_window(&Ceer::Finite(fid(1)), &Ceer::Certified(s.clone(), cert), &f, 2, 1).unwrap();
        assert!(v.is_hard());
        let pending = check_reduction_window(&Ceer::Finite(fid(1)), &Ceer::Staged(s), &f, 2, 1).unwrap();
        assert!(!pending.is_hard());
    }

    #[test]
    fn inclusion_reduction() {
        let e = StagedCeer::Ladder { period: 2 };
        let h = ReductionFn::Expr(Expr::add(Expr::mul(Expr::c(3), Expr::Var), Expr::c(1)));
        let r = StagedCeer::restriction(e.clone(), CeSet::All, h.clone());
        for s in 0..10 {
            for b in 1..12 {
                let v = check_reduction_window(&Ceer::Staged(r.clone()), &Ceer::Staged(e.clone()), &h, b, s).unwrap();
                assert!(!v.is_hard());
                assert!(v.pending().is_empty());
            }
        }
    }
}
