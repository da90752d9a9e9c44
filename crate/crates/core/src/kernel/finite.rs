//! Periodic finite ceers: finitely many classes given by a labeled period.

use super::error::KernelError;
use super::partition::Partition;
use serde::{Deserialize, Serialize};

/// A ceer with finitely many classes, `x ~ y` iff `x` and `y` have the same
/// label modulo the period. `Id_n` has period `n`; a partition of `0..n`
/// is read as the ceer whose class pattern repeats every `n` elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteCeer {
    pattern: Partition,
}

/// Witness for a reduction between finite ceers: R-class `i` goes to
/// S-class `class_map[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassWitness {
    pub class_map: Vec<u32>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl FiniteCeer {
    pub fn id_n(n: usize) -> Result<Self, KernelError> {
        if n == 0 {
            return Err(KernelError::InvalidArgument("Id_n needs n >= 1".into()));
        }
        Ok(FiniteCeer {
            pattern: Partition::discrete(n),
        })
    }

    pub fn from_partition(pattern: Partition) -> Result<Self, KernelError> {
        if pattern.is_empty() {
            return Err(KernelError::EmptyUniverse);
        }
        Ok(FiniteCeer { pattern })
    }

    /// Labels on one period; any hashable labels are canonicalized.
    pub fn from_labels(labels: &[u32]) -> Result<Self, KernelError> {
        Self::from_partition(Partition::from_labels(labels))
    }

    /// Explicit classes covering `0..n` exactly once.
    pub fn from_classes(classes: &[Vec<u64>]) -> Result<Self, KernelError> {
        let n: usize = classes.iter().map(Vec::len).sum();
        if n == 0 {
            return Err(KernelError::EmptyUniverse);
        }
        let mut labels = vec![u32::MAX; n];
        for (c, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(KernelError::InvalidArgument("empty class".into()));
            }
            for &x in class {
                let slot = labels
                    .get_mut(x as usize)
                    .ok_or_else(|| KernelError::InvalidArgument(format!("element {x} outside 0..{n}")))?;
                if *slot != u32::MAX {
                    return Err(KernelError::InvalidArgument(format!("element {x} in two classes")));
                }
                *slot = c as u32;
            }
        }
        Self::from_labels(&labels)
    }

    pub fn period(&self) -> usize {
        self.pattern.len()
    }

    pub fn class_count(&self) -> usize {
        self.pattern.class_count()
    }

    pub fn pattern(&self) -> &Partition {
        &self.pattern
    }

    pub fn class_of(&self, x: u64) -> u32 {
        self.pattern.label((x % self.period() as u64) as usize)
    }

    pub fn equiv(&self, x: u64, y: u64) -> bool {
        self.class_of(x) == self.class_of(y)
    }

    /// Least element of class `c`.
    pub fn representative(&self, c: u32) -> u64 {
        self.pattern.labels().iter().position(|&l| l == c).expect("class exists") as u64
    }

    /// Partition of the window `0..universe`.
    pub fn window(&self, universe: usize) -> Partition {
        let raw: Vec<u32> = (0..universe as u64).map(|x| self.class_of(x)).collect();
        Partition::from_labels(&raw)
    }

    pub fn classes_on(&self, universe: usize) -> Vec<Vec<u64>> {
        self.window(universe).classes()
    }

    /// `R ⊕ S`: R on the evens, S on the odds.
    pub fn join(&self, other: &FiniteCeer) -> FiniteCeer {
        let half = lcm(self.period(), other.period());
        let shift = self.class_count() as u32;
        let raw: Vec<u32> = (0..2 * half as u64)
            .map(|x| {
                if x % 2 == 0 {
                    self.class_of(x / 2)
                } else {
                    shift + other.class_of(x / 2)
                }
            })
            .collect();
        FiniteCeer::from_labels(&raw).expect("nonempty")
    }

    /// Column `i` of `x` is `x mod k`, its position `x div k`.
    pub fn join_many(list: &[FiniteCeer]) -> Result<FiniteCeer, KernelError> {
        if list.is_empty() {
            return Err(KernelError::InvalidArgument("empty join".into()));
        }
        let k = list.len();
        let base = list.iter().map(FiniteCeer::period).fold(1, lcm);
        let mut offsets = Vec::with_capacity(k);
        let mut acc = 0u32;
        for c in list {
            offsets.push(acc);
            acc += c.class_count() as u32;
        }
        let raw: Vec<u32> = (0..(k * base) as u64)
            .map(|x| {
                let i = (x % k as u64) as usize;
                offsets[i] + list[i].class_of(x / k as u64)
            })
            .collect();
        FiniteCeer::from_labels(&raw)
    }

    /// `E↾W` with `h(x) = w[x mod |w|]`, a surjection onto the finite set `w`.
    pub fn restrict(&self, w: &[u64]) -> Result<FiniteCeer, KernelError> {
        if w.is_empty() {
            return Err(KernelError::InvalidArgument("restriction to empty set".into()));
        }
        let raw: Vec<u32> = w.iter().map(|&x| self.class_of(x)).collect();
        FiniteCeer::from_labels(&raw)
    }

    /// `E_{/W}`: merge the classes of every pair in `pairs`.
    pub fn quotient(&self, pairs: &[(u64, u64)]) -> FiniteCeer {
        let mut uf = super::partition::UnionFind::new(self.class_count());
        for &(x, y) in pairs {
            uf.union(self.class_of(x) as usize, self.class_of(y) as usize);
        }
        let raw: Vec<usize> = self
            .pattern
            .labels()
            .iter()
            .map(|&l| uf.find(l as usize))
            .collect();
        FiniteCeer {
            pattern: Partition::from_labels(&raw),
        }
    }

    /// Number of classes of `self` not met by the finite set `w`.
    pub fn classes_missed_by(&self, w: &[u64]) -> usize {
        let mut hit = vec![false; self.class_count()];
        for &x in w {
            hit[self.class_of(x) as usize] = true;
        }
        hit.iter().filter(|h| !**h).count()
    }

    /// The map `x ↦ representative(class_map[class_of(x)])` as a table on one
    /// period of `self`.
    pub fn witness_table(&self, target: &FiniteCeer, w: &ClassWitness) -> Vec<u64> {
        (0..self.period() as u64)
            .map(|x| target.representative(w.class_map[self.class_of(x) as usize]))
            .collect()
    }
}

/// Exhaustive search for an injective class map from R-classes to S-classes.
///
/// Prunes a branch as soon as the unassigned R-classes outnumber the unused
/// S-classes.
pub fn brute_force_reduces(r: &FiniteCeer, s: &FiniteCeer) -> Option<ClassWitness> {
    let (kr, ks) = (r.class_count(), s.class_count());
    let mut map = Vec::with_capacity(kr);
    let mut used = vec![false; ks];
    if extend(kr, ks, &mut map, &mut used) {
        Some(ClassWitness {
            class_map: map,
        })
    } else {
        None
    }
}

fn extend(kr: usize, ks: usize, map: &mut Vec<u32>, used: &mut [bool]) -> bool {
    let i = map.len();
    if i == kr {
        return true;
    }
    let free = used.iter().filter(|u| !**u).count();
    if kr - i > free {
        return false;
    }
    for j in 0..ks {
        if used[j] {
            continue;
        }
        used[j] = true;
        map.push(j as u32);
        if extend(kr, ks, map, used) {
            return true;
        }
        map.pop();
        used[j] = false;
    }
    false
}

/// Boolean form of [`brute_force_reduces`] without the witness allocation.
pub fn reduces(r: &FiniteCeer, s: &FiniteCeer) -> bool {
    brute_force_reduces(r, s).is_some()
}

pub fn equivalent(r: &FiniteCeer, s: &FiniteCeer) -> bool {
    reduces(r, s) && reduces(s, r)
}

/// Element-level check of a class witness: `x R y ⇔ f(x) S f(y)` over a
/// window covering both periods.
pub fn check_witness(r: &FiniteCeer, s: &FiniteCeer, w: &ClassWitness) -> bool {
    let table = r.witness_table(s, w);
    let n = r.period() as u64;
    (0..n).all(|x| {
        (0..n).all(|y| r.equiv(x, y) == s.equiv(table[x as usize], table[y as usize]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(n: usize) -> FiniteCeer {
        FiniteCeer::id_n(n).unwrap()
    }

    #[test]
    fn id_n_examples() {
        assert_eq!(id(3).classes_on(6), vec![vec![0, 3], vec![1, 4], vec![2, 5]]);
        assert_eq!(id(1).classes_on(5).len(), 1);
        assert_eq!(id(5).classes_on(5).len(), 5);
        assert!(FiniteCeer::id_n(0).is_err());
    }

    #[test]
    fn join_examples() {
        let j = id(1).join(&id(1));
        assert_eq!(j.class_count(), 2);
        assert!(equivalent(&j, &id(2)));
        assert_eq!(id(2).join(&id(3)).classes_on(10).len(), 5);
    }

    #[test]
    fn join_many_examples() {
        assert_eq!(FiniteCeer::join_many(&[id(1), id(1), id(1)]).unwrap().class_count(), 3);
        assert!(FiniteCeer::join_many(&[]).is_err());
        // Two columns under x ↦ (x mod 2, x div 2) is the even/odd join.
        let a = FiniteCeer::join_many(&[id(2), id(3)]).unwrap();
        let b = id(2).join(&id(3));
        for x in 0..20 {
            for y in 0..20 {
                assert_eq!(a.equiv(x, y), b.equiv(x, y));
            }
        }
    }

    #[test]
    fn restriction_examples() {
        let evens: Vec<u64> = (0..5).map(|x| 2 * x).collect();
        assert_eq!(id(5).restrict(&evens).unwrap().classes_on(10).len(), 5);
        assert_eq!(id(2).restrict(&[0]).unwrap().class_count(), 1);
    }

    #[test]
    fn quotient_examples() {
        let q = id(4).quotient(&[(0, 1), (1, 2)]);
        assert_eq!(q.classes_on(8), vec![vec![0, 1, 2, 4, 5, 6], vec![3, 7]]);
        assert_eq!(id(4).quotient(&[]), id(4));
    }

    #[test]
    fn brute_force_examples() {
        assert!(reduces(&id(2), &id(3)));
        assert!(!reduces(&id(3), &id(2)));
        let r = FiniteCeer::from_classes(&[vec![0, 1], vec![2]]).unwrap();
        let w = brute_force_reduces(&r, &id(2)).unwrap();
        assert!(check_witness(&r, &id(2), &w));
    }

    #[test]
    fn self_fullness_shadow() {
        for n in 1..=8 {
            assert!(!reduces(&id(n + 1), &id(n)));
        }
    }

    #[test]
    fn from_classes_validates() {
        assert!(FiniteCeer::from_classes(&[vec![0], vec![0]]).is_err());
        assert!(FiniteCeer::from_classes(&[vec![0], vec![5]]).is_err());
        assert!(FiniteCeer::from_classes(&[]).is_err());
    }
}
