//! Brute-force checks of the basic algebraic laws on finite ceers.

use super::finite::{brute_force_reduces, equivalent, FiniteCeer};
use crate::exec::Exec;
use serde::Serialize;

/// Every finite ceer with period `1..=max_universe` and at most
/// `max_classes` classes, one per restricted-growth string.
pub fn all_finite_ceers(max_universe: usize, max_classes: usize) -> Vec<FiniteCeer> {
    let mut out = Vec::new();
    for n in 1..=max_universe {
        let mut labels = vec![0u32; n];
        rgs(&mut labels, 1, 1, max_classes as u32, &mut out);
    }
    out
}

fn rgs(labels: &mut [u32], pos: usize, used: u32, cap: u32, out: &mut Vec<FiniteCeer>) {
    if pos == labels.len() {
        out.push(FiniteCeer::from_labels(labels).expect("nonempty"));
        return;
    }
    for l in 0..=used.min(cap - 1) {
        labels[pos] = l;
        let next = if l == used { used + 1 } else { used };
        rgs(labels, pos + 1, next, cap, out);
    }
}

/// One ceer per (period, multiset of class sizes), classes laid out in
/// contiguous blocks of non-increasing size.
pub fn iso_representatives(max_universe: usize, max_classes: usize) -> Vec<FiniteCeer> {
    let mut out = Vec::new();
    for n in 1..=max_universe {
        let mut parts = Vec::new();
        int_partitions(n, n, max_classes, &mut parts, &mut out);
    }
    out
}

fn int_partitions(rest: usize, max_part: usize, slots: usize, parts: &mut Vec<usize>, out: &mut Vec<FiniteCeer>) {
    if rest == 0 {
        let labels: Vec<u32> = parts.iter().enumerate().flat_map(|(c, &k)| std::iter::repeat_n(c as u32, k)).collect();
        out.push(FiniteCeer::from_labels(&labels).expect("nonempty"));
        return;
    }
    if slots == 0 {
        return;
    }
    for k in (1..=max_part.min(rest)).rev() {
        parts.push(k);
        int_partitions(rest - k, k, slots - 1, parts, out);
        parts.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactReport {
    pub name: String,
    pub cases: u64,
    pub counterexamples: Vec<String>,
}

impl FactReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

const MAX_LISTED: usize = 10;

fn collect(name: &str, chunks: Vec<(u64, Vec<String>)>) -> FactReport {
    let mut cases = 0;
    let mut counterexamples = Vec::new();
    for (c, bad) in chunks {
        cases += c;
        for b in bad {
            if counterexamples.len() < MAX_LISTED {
                counterexamples.push(b);
            }
        }
    }
    FactReport {
        name: name.to_string(),
        cases,
        counterexamples,
    }
}

fn show(c: &FiniteCeer) -> String {
    format!("{:?}", c.pattern().labels())
}

/// Suite parameters. The first argument of each law ranges over every ceer
/// in `all`; the second over the isomorphism representatives in `reps`.
#[derive(Clone, Debug)]
pub struct FactDomain {
    pub all: Vec<FiniteCeer>,
    pub reps: Vec<FiniteCeer>,
    pub max_k: usize,
}

impl FactDomain {
    pub fn new(max_universe: usize, max_classes: usize, max_k: usize) -> Self {
        FactDomain {
            all: all_finite_ceers(max_universe, max_classes),
            reps: iso_representatives(max_universe, max_classes),
            max_k,
        }
    }
}

/// `S ≡ T ⇔ S ⊕ Id_k ≡ T ⊕ Id_k`.
pub fn cancellation(d: &FactDomain, exec: Exec) -> FactReport {
    let ids: Vec<FiniteCeer> = (1..=d.max_k).map(|k| FiniteCeer::id_n(k).unwrap()).collect();
    let t_joins: Vec<Vec<FiniteCeer>> = d.reps.iter().map(|t| ids.iter().map(|i| t.join(i)).collect()).collect();
    let chunks = exec.map(&d.all, |s| {
        let mut cases = 0;
        let mut bad = Vec::new();
        for (k, id) in ids.iter().enumerate() {
            let sk = s.join(id);
            for (t, tj) in d.reps.iter().zip(&t_joins) {
                cases += 1;
                if equivalent(s, t) != equivalent(&sk, &tj[k]) {
                    bad.push(format!("S={} T={} k={}", show(s), show(t), k + 1));
                }
            }
        }
        (cases, bad)
    });
    collect("cancellation", chunks)
}

/// A reduction `R ≤ S` omitting exactly `k` S-classes gives `R ⊕ Id_k ≡ S`.
pub fn omitted_classes(d: &FactDomain, exec: Exec) -> FactReport {
    let chunks = exec.map(&d.all, |r| {
        let mut cases = 0;
        let mut bad = Vec::new();
        for s in &d.reps {
            let Some(w) = brute_force_reduces(r, s) else { continue };
            cases += 1;
            let k = s.class_count() - w.class_map.len();
            let lhs = if k == 0 { r.clone() } else { r.join(&FiniteCeer::id_n(k).unwrap()) };
            if !equivalent(&lhs, s) {
                bad.push(format!("R={} S={} k={k}", show(r), show(s)));
            }
        }
        (cases, bad)
    });
    collect("omitted-classes", chunks)
}

/// `W` missing exactly `k` classes of `E` gives `E↾W ⊕ Id_k ≡ E`. `W` ranges
/// over unions of whole classes and over sets of class representatives.
pub fn restriction_law(d: &FactDomain, exec: Exec) -> FactReport {
    let chunks = exec.map(&d.all, |e| {
        let classes = e.pattern().classes();
        let mut cases = 0;
        let mut bad = Vec::new();
        for mask in 1u32..(1 << classes.len()) {
            let chosen: Vec<&Vec<u64>> = classes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| c).collect();
            let whole: Vec<u64> = chosen.iter().flat_map(|c| c.iter().copied()).collect();
            let reps: Vec<u64> = chosen.iter().map(|c| c[c.len() - 1]).collect();
            for w in [whole, reps] {
                cases += 1;
                let k = e.classes_missed_by(&w);
                let restricted = e.restrict(&w).unwrap();
                let lhs = if k == 0 { restricted } else { restricted.join(&FiniteCeer::id_n(k).unwrap()) };
                if !equivalent(&lhs, e) {
                    bad.push(format!("E={} W={w:?}", show(e)));
                }
            }
        }
        (cases, bad)
    });
    collect("restriction", chunks)
}

/// Injective maps from `0..k` into `0..m`, in lexicographic order.
fn injections(k: usize, m: usize) -> Vec<Vec<u32>> {
    fn go(k: usize, m: usize, cur: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in 0..m {
            if !used[j] {
                used[j] = true;
                cur.push(j as u32);
                go(k, m, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    if k <= m {
        go(k, m, &mut Vec::new(), &mut vec![false; m], &mut out);
    }
    out
}

/// Given `X ≤ R1 ⊕ R2` via `f`, split the range: `V1 = {x | 2x ∈ ran f}`,
/// `V2 = {x | 2x+1 ∈ ran f}`. Returns `(X1, X2)` with empty sides as `None`.
pub fn split_reduction(r1: &FiniteCeer, r2: &FiniteCeer, table: &[u64]) -> (Option<FiniteCeer>, Option<FiniteCeer>) {
    let mut v1: Vec<u64> = table.iter().filter(|y| *y % 2 == 0).map(|y| y / 2).collect();
    let mut v2: Vec<u64> = table.iter().filter(|y| *y % 2 == 1).map(|y| y / 2).collect();
    v1.sort_unstable();
    v1.dedup();
    v2.sort_unstable();
    v2.dedup();
    let x1 = (!v1.is_empty()).then(|| r1.restrict(&v1).unwrap());
    let x2 = (!v2.is_empty()).then(|| r2.restrict(&v2).unwrap());
    (x1, x2)
}

/// `X ≡ X1 ⊕ X2` for the split of every reduction `X ≤ R1 ⊕ R2`.
///
/// Exhaustive over class maps when `X` ranges over representatives, and over
/// the first witness when `X` ranges over every ceer.
pub fn decomposition(d: &FactDomain, pair_reps: &[FiniteCeer], exec: Exec) -> FactReport {
    let pairs: Vec<(FiniteCeer, FiniteCeer, FiniteCeer)> = pair_reps
        .iter()
        .flat_map(|a| pair_reps.iter().map(move |b| (a.clone(), b.clone(), a.join(b))))
        .collect();
    let check = |x: &FiniteCeer, r1: &FiniteCeer, r2: &FiniteCeer, joined: &FiniteCeer, map: &[u32]| -> bool {
        let table: Vec<u64> = (0..x.period() as u64).map(|e| joined.representative(map[x.class_of(e) as usize])).collect();
        match split_reduction(r1, r2, &table) {
            (Some(a), Some(b)) => equivalent(x, &a.join(&b)),
            (Some(a), None) | (None, Some(a)) => equivalent(x, &a),
            (None, None) => false,
        }
    };
    let exhaustive = exec.map(&d.reps, |x| {
        let mut cases = 0;
        let mut bad = Vec::new();
        for (r1, r2, joined) in &pairs {
            for map in injections(x.class_count(), joined.class_count()) {
                cases += 1;
                if !check(x, r1, r2, joined, &map) {
                    bad.push(format!("X={} R1={} R2={} f={map:?}", show(x), show(r1), show(r2)));
                }
            }
        }
        (cases, bad)
    });
    let first = exec.map(&d.all, |x| {
        let mut cases = 0;
        let mut bad = Vec::new();
        for (r1, r2, joined) in &pairs {
            if let Some(w) = brute_force_reduces(x, joined) {
                cases += 1;
                if !check(x, r1, r2, joined, &w.class_map) {
                    bad.push(format!("X={} R1={} R2={}", show(x), show(r1), show(r2)));
                }
            }
        }
        (cases, bad)
    });
    collect("decomposition", exhaustive.into_iter().chain(first).collect())
}

/// `Id_{n+1} ≰ Id_n` for `1 ≤ n ≤ max_n`.
pub fn self_fullness(max_n: usize) -> FactReport {
    let bad = (1..=max_n)
        .filter(|&n| brute_force_reduces(&FiniteCeer::id_n(n + 1).unwrap(), &FiniteCeer::id_n(n).unwrap()).is_some())
        .map(|n| format!("Id_{} <= Id_{n}", n + 1))
        .collect();
    collect("self-fullness", vec![(max_n as u64, bad)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell(n: usize) -> usize {
        // Bell numbers by the triangle, independent of the enumerator.
        let mut row = vec![1usize];
        for _ in 1..n {
            let mut next = vec![*row.last().unwrap()];
            for v in &row {
                next.push(next.last().unwrap() + v);
            }
            row = next;
        }
        *row.last().unwrap()
    }

    #[test]
    fn enumerator_counts() {
        for n in 1..=7 {
            let exact = all_finite_ceers(n, n).len() - all_finite_ceers(n - 1, n).len();
            assert_eq!(exact, bell(n));
        }
        // Stirling numbers S(10, k) for k <= 5 sum to 86472.
        assert_eq!(all_finite_ceers(10, 5).len() - all_finite_ceers(9, 5).len(), 86472);
        assert_eq!(iso_representatives(10, 5).len(), 112);
    }

    #[test]
    fn injection_counts() {
        assert_eq!(injections(2, 4).len(), 12);
        assert_eq!(injections(3, 2).len(), 0);
        assert_eq!(injections(0, 3).len(), 1);
    }

    #[test]
    fn small_domain_laws() {
        let d = FactDomain::new(6, 4, 4);
        let exec = Exec::default();
        assert!(cancellation(&d, exec).passed());
        assert!(omitted_classes(&d, exec).passed());
        assert!(restriction_law(&d, exec).passed());
        assert!(decomposition(&d, &iso_representatives(3, 3), exec).passed());
        assert!(self_fullness(8).passed());
    }

    #[test]
    fn split_example() {
        // X = Id_2 into Id_1 ⊕ Id_2 hitting the even class and one odd class.
        let r1 = FiniteCeer::id_n(1).unwrap();
        let r2 = FiniteCeer::id_n(2).unwrap();
        let (a, b) = split_reduction(&r1, &r2, &[0, 3]);
        assert_eq!(a.unwrap().class_count(), 1);
        assert_eq!(b.unwrap().class_count(), 1);
    }
}
