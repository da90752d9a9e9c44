//! Explicit finite posets and exhaustive degree-theoretic scans on them.
//!
//! Everything here is computed directly from the order matrix. The formula
//! route through the poset macros lives in [`super::audit`].

use crate::graph::FiniteGraph;
use crate::logic::{FiniteStructure, Signature, StructureError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProbeError {
    #[error("poset has no bottom element")]
    NoBottom,
    #[error("unknown element {0:?}")]
    Unknown(String),
    #[error("duplicate element {0:?}")]
    Duplicate(String),
    #[error("{0:?} and {1:?} are below each other")]
    Antisymmetry(String, String),
    #[error("unknown fixture family {0:?}")]
    Family(String),
    #[error("invalid fixture: {0}")]
    Invalid(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// A partial order on `0..n` with element names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<Vec<bool>>,
}

/// `cover` is a strongly minimal cover of the pair `low`, `low.0 < low.1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Smc {
    pub cover: usize,
    pub low: (usize, usize),
}

impl FinitePoset {
    /// Reflexive transitive closure of `rel`; fails on cycles.
    pub fn new(names: Vec<String>, rel: &[(usize, usize)]) -> Result<Self, ProbeError> {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, s) in names.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(ProbeError::Duplicate(s.clone()));
            }
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in rel {
            if a >= n || b >= n {
                return Err(ProbeError::Unknown(format!("#{}", a.max(b))));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(ProbeError::Antisymmetry(names[i].clone(), names[j].clone()));
                }
            }
        }
        Ok(FinitePoset { names, index, leq })
    }

    pub fn from_named(names: &[&str], rel: &[(&str, &str)]) -> Result<Self, ProbeError> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let pos = |s: &str| names.iter().position(|n| n == s).ok_or_else(|| ProbeError::Unknown(s.to_string()));
        let rel = rel.iter().map(|&(a, b)| Ok((pos(a)?, pos(b)?))).collect::<Result<Vec<_>, ProbeError>>()?;
        FinitePoset::new(names, &rel)
    }

    pub fn from_structure(st: &FiniteStructure) -> Result<Self, ProbeError> {
        st.expect(Signature::Poset)?;
        let n = st.size() as u32;
        let rel: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| st.leq(a, b)).map(|(a, b)| (a as usize, b as usize)).collect();
        FinitePoset::new(st.names().to_vec(), &rel)
    }

    pub fn to_structure(&self) -> FiniteStructure {
        FiniteStructure::poset(self.names.clone(), &self.pairs()).expect("a valid poset")
    }

    /// Every pair `a <= b`, including the diagonal.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| self.leq[a][b]).collect()
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn element(&self, name: &str) -> Result<usize, ProbeError> {
        self.index.get(name).copied().ok_or_else(|| ProbeError::Unknown(name.to_string()))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    pub fn incomparable(&self, a: usize, b: usize) -> bool {
        !self.leq[a][b] && !self.leq[b][a]
    }

    pub fn bottom(&self) -> Option<usize> {
        (0..self.size()).find(|&b| (0..self.size()).all(|x| self.leq[b][x]))
    }

    pub fn top(&self) -> Option<usize> {
        (0..self.size()).find(|&t| (0..self.size()).all(|x| self.leq[x][t]))
    }

    /// Elements whose only strict predecessor is the bottom.
    pub fn minimal_elements(&self) -> Result<Vec<usize>, ProbeError> {
        let bot = self.bottom().ok_or(ProbeError::NoBottom)?;
        Ok((0..self.size()).filter(|&x| x != bot && (0..self.size()).all(|z| !self.lt(z, x) || z == bot)).collect())
    }

    /// `a` is above the incomparable `d`, `e`, and everything strictly
    /// below `a` is below `d` or below `e`.
    pub fn is_smc(&self, a: usize, d: usize, e: usize) -> bool {
        self.incomparable(d, e) && self.lt(d, a) && self.lt(e, a) && (0..self.size()).all(|z| !self.lt(z, a) || self.leq[z][d] || self.leq[z][e])
    }

    pub fn smc_pairs(&self) -> Result<Vec<Smc>, ProbeError> {
        self.bottom().ok_or(ProbeError::NoBottom)?;
        let n = self.size();
        let mut out = Vec::new();
        for a in 0..n {
            for d in 0..n {
                for e in d + 1..n {
                    if self.is_smc(a, d, e) {
                        out.push(Smc { cover: a, low: (d, e) });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Vertices: minimal elements below `c`. Edge `d–e`: two incomparable
    /// strongly minimal covers of `d`, `e`, both below `c`.
    pub fn decode_gc(&self, c: usize) -> Result<FiniteGraph, ProbeError> {
        let verts: Vec<usize> = self.minimal_elements()?.into_iter().filter(|&x| self.leq[x][c]).collect();
        let mut edges = Vec::new();
        for (k, &d) in verts.iter().enumerate() {
            for &e in &verts[k + 1..] {
                let covers: Vec<usize> = (0..self.size()).filter(|&a| self.leq[a][c] && self.is_smc(a, d, e)).collect();
                if covers.iter().any(|&a| covers.iter().any(|&b| self.incomparable(a, b))) {
                    edges.push((d as u64, e as u64));
                }
            }
        }
        Ok(FiniteGraph::new(verts.iter().map(|&v| v as u64), edges).expect("edges join listed vertices"))
    }

    /// `r` and `s` have a least upper bound.
    pub fn has_join(&self, r: usize, s: usize) -> bool {
        let ub: Vec<usize> = (0..self.size()).filter(|&u| self.leq[r][u] && self.leq[s][u]).collect();
        ub.iter().any(|&j| ub.iter().all(|&u| self.leq[j][u]))
    }

    /// Minimal elements strictly above `i`: nothing lies strictly between.
    pub fn light_minimal(&self, i: usize) -> Vec<usize> {
        (0..self.size()).filter(|&x| self.lt(i, x) && (0..self.size()).all(|z| !(self.lt(i, z) && self.lt(z, x)))).collect()
    }

    /// `y > x >= i` and every `z >= i` strictly below `y` is below `x`.
    pub fn is_light_cover(&self, y: usize, x: usize, i: usize) -> bool {
        self.leq[i][x] && self.lt(x, y) && (0..self.size()).all(|z| !(self.leq[i][z] && self.lt(z, y)) || self.leq[z][x])
    }

    /// Unordered pairs `{p, q}` of light minimal elements below `f` for
    /// which some `x < f` has exactly `p`, `q` as its light minimal
    /// predecessors, and `x < y < z <= f` with `y` a light cover of `x` and
    /// `z` a light cover of `y`. Listed with `p < q`.
    pub fn light_label_pairs(&self, f: usize, i: usize) -> BTreeSet<(usize, usize)> {
        let mins = self.light_minimal(i);
        let mut out = BTreeSet::new();
        for x in (0..self.size()).filter(|&x| self.lt(x, f)) {
            let below: Vec<usize> = mins.iter().copied().filter(|&m| self.leq[m][x]).collect();
            let &[p, q] = below.as_slice() else { continue };
            let chain = (0..self.size())
                .filter(|&y| self.is_light_cover(y, x, i))
                .any(|y| (0..self.size()).any(|z| self.leq[z][f] && self.is_light_cover(z, y, i)));
            if chain {
                out.insert((p.min(q), p.max(q)));
            }
        }
        out
    }

    /// Pairs `(a, y)` linked through some `b` outside the cones of `c` and
    /// `c2`, with `{a, b}` labelled by `f` and `{b, y}` labelled by `g`.
    pub fn light_decodes(&self, f: usize, g: usize, c: usize, c2: usize, i: usize) -> BTreeSet<(usize, usize)> {
        let sym = |s: BTreeSet<(usize, usize)>| -> BTreeSet<(usize, usize)> { s.iter().flat_map(|&(p, q)| [(p, q), (q, p)]).collect() };
        let lf = sym(self.light_label_pairs(f, i));
        let lg = sym(self.light_label_pairs(g, i));
        let mut out = BTreeSet::new();
        for &(a, b) in &lf {
            if self.leq[b][c] || self.leq[b][c2] {
                continue;
            }
            for &(b2, y) in &lg {
                if b2 == b {
                    out.insert((a, y));
                }
            }
        }
        out
    }

    /// Bijections of the element set preserving `<=` in both directions.
    /// Stops after `limit` automorphisms.
    pub fn automorphisms(&self, limit: usize) -> Vec<Vec<usize>> {
        let n = self.size();
        let profile = |x: usize| ((0..n).filter(|&z| self.leq[z][x]).count(), (0..n).filter(|&z| self.leq[x][z]).count());
        let prof: Vec<(usize, usize)> = (0..n).map(profile).collect();
        let mut out = Vec::new();
        let mut map = Vec::with_capacity(n);
        let mut used = vec![false; n];
        self.extend_auto(&prof, &mut map, &mut used, &mut out, limit);
        out
    }

    fn extend_auto(&self, prof: &[(usize, usize)], map: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        let i = map.len();
        if i == self.size() {
            out.push(map.clone());
            return;
        }
        for j in 0..self.size() {
            if used[j] || prof[i] != prof[j] {
                continue;
            }
            if (0..i).any(|k| self.leq[k][i] != self.leq[map[k]][j] || self.leq[i][k] != self.leq[j][map[k]]) {
                continue;
            }
            used[j] = true;
            map.push(j);
            self.extend_auto(prof, map, used, out, limit);
            map.pop();
            used[j] = false;
        }
    }

    /// Copy with element `x` renamed to position `perm[x]`.
    pub fn permuted(&self, perm: &[usize]) -> FinitePoset {
        let mut names = vec![String::new(); self.size()];
        for (x, &p) in perm.iter().enumerate() {
            names[p] = self.names[x].clone();
        }
        let rel: Vec<(usize, usize)> = self.pairs().into_iter().map(|(a, b)| (perm[a], perm[b])).collect();
        FinitePoset::new(names, &rel).expect("a permutation of a poset is a poset")
    }
}

/// The poset coding `g`: a bottom, one minimal element per vertex, two
/// incomparable covers per edge, and a top. Vertex `v` is named `v{v}`,
/// the covers of edge `u–v` are `j{u}_{v}` and `q{u}_{v}`.
pub fn poset_coding_graph(g: &FiniteGraph) -> FinitePoset {
    let mut names = vec!["bot".to_string()];
    let mut pos = HashMap::new();
    for &v in g.vertices() {
        pos.insert(v, names.len());
        names.push(format!("v{v}"));
    }
    let mut rel = Vec::new();
    for i in 1..names.len() {
        rel.push((0, i));
    }
    for &(u, v) in g.edges() {
        for kind in ["j", "q"] {
            let k = names.len();
            names.push(format!("{kind}{u}_{v}"));
            rel.push((pos[&u], k));
            rel.push((pos[&v], k));
        }
    }
    let top = names.len();
    names.push("top".into());
    for i in 0..top {
        rel.push((i, top));
    }
    FinitePoset::new(names, &rel).expect("coding relation is acyclic")
}

/// Labels `(x, y)` present in `g`: a path `x–a–d–y` and a triangle
/// `a–b–c` on six distinct vertices.
pub fn graph_label_pairs(g: &FiniteGraph) -> BTreeSet<(u64, u64)> {
    let mut out = BTreeSet::new();
    for &x in g.vertices() {
        for a in g.neighbors(x) {
            for d in g.neighbors(a) {
                for y in g.neighbors(d) {
                    for b in g.neighbors(a) {
                        for c in g.neighbors(b) {
                            let six = [x, a, d, y, b, c];
                            let distinct = six.iter().collect::<BTreeSet<_>>().len() == 6;
                            if distinct && g.has_edge(c, a) {
                                out.insert((x, y));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Pairs `(x, y)` where `y` is the only label partner of `x`.
pub fn graph_name_decodes(g: &FiniteGraph) -> BTreeSet<(u64, u64)> {
    let labels = graph_label_pairs(g);
    labels.iter().copied().filter(|&(x, y)| labels.iter().all(|&(x2, y2)| x2 != x || y2 == y)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> FinitePoset {
        FinitePoset::from_named(&["bot", "a", "b"], &[("bot", "a"), ("a", "b")]).unwrap()
    }

    fn diamond() -> FinitePoset {
        FinitePoset::from_named(&["bot", "a", "b", "top"], &[("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")]).unwrap()
    }

    fn names(p: &FinitePoset, xs: &[usize]) -> Vec<String> {
        xs.iter().map(|&x| p.name(x).to_string()).collect()
    }

    #[test]
    fn minimal_elements() {
        let c = chain3();
        assert_eq!(names(&c, &c.minimal_elements().unwrap()), ["a"]);
        let d = diamond();
        assert_eq!(names(&d, &d.minimal_elements().unwrap()), ["a", "b"]);
        let anti = FinitePoset::from_named(&["bot", "p", "q", "r", "s"], &[("bot", "p"), ("bot", "q"), ("bot", "r"), ("bot", "s")]).unwrap();
        assert_eq!(anti.minimal_elements().unwrap().len(), 4);
        let no_bot = FinitePoset::from_named(&["a", "b"], &[]).unwrap();
        assert_eq!(no_bot.minimal_elements(), Err(ProbeError::NoBottom));
    }

    #[test]
    fn smc_scan() {
        assert!(chain3().smc_pairs().unwrap().is_empty());
        let d = diamond();
        assert_eq!(d.smc_pairs().unwrap(), [Smc { cover: 3, low: (1, 2) }]);
        let dbl = FinitePoset::from_named(
            &["bot", "r1", "r2", "a", "b"],
            &[("bot", "r1"), ("bot", "r2"), ("r1", "a"), ("r2", "a"), ("r1", "b"), ("r2", "b")],
        )
        .unwrap();
        assert_eq!(dbl.smc_pairs().unwrap(), [Smc { cover: 3, low: (1, 2) }, Smc { cover: 4, low: (1, 2) }]);
    }

    #[test]
    fn closure_and_errors() {
        let p = FinitePoset::from_named(&["x", "y", "z"], &[("x", "y"), ("y", "z")]).unwrap();
        assert!(p.leq(0, 2));
        assert!(matches!(FinitePoset::from_named(&["x", "y"], &[("x", "y"), ("y", "x")]), Err(ProbeError::Antisymmetry(..))));
        assert!(matches!(FinitePoset::from_named(&["x", "x"], &[]), Err(ProbeError::Duplicate(_))));
        let st = p.to_structure();
        assert_eq!(FinitePoset::from_structure(&st).unwrap(), p);
    }

    #[test]
    fn coding_graph_roundtrip() {
        for g in [FiniteGraph::path(3), FiniteGraph::cycle(4), FiniteGraph::complete(4), FiniteGraph::empty(3), FiniteGraph::label_gadget()] {
            let p = poset_coding_graph(&g);
            let top = p.top().unwrap();
            let decoded = p.decode_gc(top).unwrap();
            let back = decoded.relabel(|i| p.name(i as usize)[1..].parse().unwrap()).unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn joins() {
        let d = diamond();
        assert!(d.has_join(1, 2));
        let dbl = FinitePoset::from_named(&["bot", "r1", "r2", "a", "b"], &[("r1", "a"), ("r2", "a"), ("r1", "b"), ("r2", "b"), ("bot", "r1"), ("bot", "r2")]).unwrap();
        assert!(!dbl.has_join(1, 2));
    }

    #[test]
    fn label_pairs_on_gadget() {
        let g = FiniteGraph::label_gadget();
        assert_eq!(graph_label_pairs(&g), BTreeSet::from([(0, 3)]));
        assert_eq!(graph_name_decodes(&g), BTreeSet::from([(0, 3)]));
    }

    #[test]
    fn automorphisms_of_diamond() {
        let d = diamond();
        let autos = d.automorphisms(100);
        assert_eq!(autos.len(), 2);
        assert!(autos.contains(&vec![0, 2, 1, 3]));
    }

    /// Random order on `0..n` with `0` as bottom: `i <= j` only for `i < j`.
    fn arb_poset() -> impl proptest::strategy::Strategy<Value = FinitePoset> {
        use proptest::prelude::*;
        (2usize..8).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
                let names = (0..n).map(|i| format!("p{i}")).collect();
                let mut rel: Vec<(usize, usize)> = (1..n).map(|j| (0, j)).collect();
                rel.extend((1..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| bits[i * n + j]));
                FinitePoset::new(names, &rel).unwrap()
            })
        })
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn smc_and_decode_are_equivariant(p in arb_poset(), seed in proptest::prelude::any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut perm: Vec<usize> = (0..p.size()).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let q = p.permuted(&perm);
            let mapped: BTreeSet<Smc> = p.smc_pairs().unwrap().into_iter().map(|s| {
                let (d, e) = (perm[s.low.0], perm[s.low.1]);
                Smc { cover: perm[s.cover], low: (d.min(e), d.max(e)) }
            }).collect();
            let direct: BTreeSet<Smc> = q.smc_pairs().unwrap().into_iter().collect();
            proptest::prop_assert_eq!(mapped, direct);
            for c in 0..p.size() {
                let g = p.decode_gc(c).unwrap().relabel(|v| perm[v as usize] as u64).unwrap();
                proptest::prop_assert_eq!(g, q.decode_gc(perm[c]).unwrap());
            }
            for m in p.automorphisms(64) {
                let img: BTreeSet<Smc> = p.smc_pairs().unwrap().into_iter().map(|s| {
                    let (d, e) = (m[s.low.0], m[s.low.1]);
                    Smc { cover: m[s.cover], low: (d.min(e), d.max(e)) }
                }).collect();
                proptest::prop_assert_eq!(&img, &p.smc_pairs().unwrap().into_iter().collect::<BTreeSet<_>>());
            }
        }

        #[test]
        fn decode_matches_edge_macro(p in arb_poset()) {
            use crate::interp::poset_macros;
            use crate::logic::{Checker, Program};
            let st = p.to_structure();
            let prog = Program::new(poset_macros()).unwrap();
            let mut ch = Checker::new(&st, &prog).unwrap();
            let n = p.size() as u32;
            for c in 0..n {
                let g = p.decode_gc(c as usize).unwrap();
                for x in 0..n {
                    proptest::prop_assert_eq!(ch.call("V", &[x, c]).unwrap(), g.has_vertex(x as u64));
                    for y in 0..n {
                        let edge = x != y && g.has_vertex(x as u64) && g.has_edge(x as u64, y as u64);
                        proptest::prop_assert_eq!(ch.call("E", &[x, y, c]).unwrap(), edge);
                    }
                }
            }
        }

        #[test]
        fn light_scans_match_macros(p in arb_poset(), i in 0usize..3) {
            use crate::interp::poset_macros;
            use crate::logic::{Checker, Program};
            let i = i.min(p.size() - 1);
            let st = p.to_structure();
            let prog = Program::new(poset_macros()).unwrap();
            let mut ch = Checker::new(&st, &prog).unwrap();
            let n = p.size() as u32;
            let ii = i as u32;
            let mins: BTreeSet<usize> = p.light_minimal(i).into_iter().collect();
            for x in 0..n {
                proptest::prop_assert_eq!(ch.call("LMin", &[x, ii]).unwrap(), mins.contains(&(x as usize)));
            }
            for f in 0..n {
                let labels = p.light_label_pairs(f as usize, i);
                for a in 0..n {
                    for b in 0..n {
                        let want = labels.contains(&((a.min(b)) as usize, (a.max(b)) as usize));
                        proptest::prop_assert_eq!(ch.call("LLabelPair", &[f, a, b, ii]).unwrap(), want);
                    }
                }
            }
        }
    }
}
