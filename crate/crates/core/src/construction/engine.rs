//! The stage loop.

use super::family::GeneratorFamily;
use super::requirement::{is_binding, requirement_bound};
use super::state::{BlockReason, ColumnContent, ConstructionState, Descriptor};
use crate::graph::FiniteGraph;
use crate::kernel::pairing::{pair, unpair};
use crate::kernel::partition::{PairLog, Partition};
use crate::kernel::staged::new_links;
use crate::kernel::{CeSet, CeerTrace, KernelError, StagedCeer};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("stage count must be at least 1")]
    NoStages,
    #[error("quotient pair ({0}, {1}) must be (even, odd)")]
    QuotientPair(u64, u64),
    #[error("internal invariant broken at stage {stage}: {detail}")]
    Invariant { stage: usize, detail: String },
    #[error("layout not stable below index {bound}: {detail}; run more stages")]
    Unstable { bound: usize, detail: String },
    #[error("malformed trace: {0}")]
    Trace(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionConfig {
    /// Drop all `Dark` requirements and stop once every index below the
    /// requirement bound is coded.
    pub finite_mode: bool,
    /// `(x, y)` with `x` even and `y` odd for the edge quotients.
    pub quotient_pair: (u64, u64),
    /// Elements per column written to the pair log.
    pub width: u64,
}

impl Default for ConstructionConfig {
    fn default() -> Self {
        ConstructionConfig {
            finite_mode: true,
            quotient_pair: (0, 1),
            width: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum StageAction {
    Init,
    /// Case (1): `Dark_j` collapsed `block` and restarted `Code_{j+1}`.
    DarkActed { j: usize, witnesses: (u64, u64), block: (u64, u64) },
    /// Case (2): `γ_index` defined at the fresh column.
    Defined { index: usize },
    Idle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: usize,
    pub action: StageAction,
    pub r: u64,
    pub gamma: Vec<Option<u64>>,
    pub epsilon: Vec<Option<u64>>,
    pub satisfied: Vec<usize>,
    /// Requirements found satisfied without acting at this stage.
    pub passive: Vec<usize>,
    pub layout: Vec<Descriptor>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub kind: String,
    pub config: ConstructionConfig,
    pub graph: serde_json::Value,
    pub family: GeneratorFamily,
    pub ws: Vec<CeSet>,
    pub records: Vec<StageRecord>,
    pub ceer: CeerTrace,
}

impl ConstructionTrace {
    pub fn graph(&self) -> Result<FiniteGraph, ConstructionError> {
        FiniteGraph::from_json(&self.graph).map_err(|e| ConstructionError::Trace(e.to_string()))
    }

    pub fn log(&self) -> Result<PairLog, ConstructionError> {
        match &self.ceer {
            CeerTrace::Staged { stages, .. } => Ok(PairLog {
                stages: stages.iter().map(|b| b.iter().map(|&[x, y]| (x, y)).collect()).collect(),
            }),
            CeerTrace::Finite { .. } => Err(ConstructionError::Trace("construction ceer must be staged".into())),
        }
    }

    pub fn final_record(&self) -> &StageRecord {
        self.records.last().expect("at least one stage")
    }

    /// Count of `Dark_j` actions for each `j`.
    pub fn dark_actions(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for r in &self.records {
            if let StageAction::DarkActed { j, .. } = r.action {
                *out.entry(j).or_insert(0) += 1;
            }
        }
        out
    }
}

/// Result of [`run`].
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub ceer: StagedCeer,
    pub state: ConstructionState,
    pub trace: ConstructionTrace,
}

/// Identity of a `C`-class, computed exactly from layout and contents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum ClassKey {
    Fresh(u64),
    Block(u64),
    Coded(u64, u32),
}

pub fn content_ceer(content: &ColumnContent, family: &GeneratorFamily, qpair: (u64, u64)) -> Result<StagedCeer, KernelError> {
    Ok(match *content {
        ColumnContent::Code { index } => family.member(index)?,
        ColumnContent::QuotientEdge { left, right, .. } => StagedCeer::quotient(
            StagedCeer::join(family.member(left as usize)?, family.member(right as usize)?),
            &[qpair],
        ),
    })
}

/// Members of `W_{j,stage}` in columns `lo..hi`. Explicit sets are listed
/// in full; infinite decidable sets are probed on the first `width`
/// elements of each column.
pub fn window_members(w: &CeSet, stage: usize, lo: u64, hi: u64, width: u64) -> Vec<u64> {
    let mut out: Vec<u64> = if w.is_explicit() {
        w.enumerated(stage, 0).into_iter().filter(|&e| (lo..hi).contains(&unpair(e).0)).collect()
    } else {
        (lo..hi).flat_map(|n| (0..width).map(move |x| pair(n, x))).filter(|&e| w.member(e, stage)).collect()
    };
    out.sort_unstable();
    out.dedup();
    out
}

/// `Dark_j` requires attention at `next = s + 1`: `j <= s`, `ε_j(s)`
/// defined, `Dark_j` unsatisfied, and two distinct elements of
/// `W_{j,s+1}` lie in columns `[ε_j + 1, r(s))`. The witness is the least
/// pair in lexicographic order.
pub fn requires_attention(j: usize, state: &ConstructionState, w: &CeSet, next: usize, width: u64) -> Option<(u64, u64)> {
    if next == 0 || j > next - 1 || state.satisfied.contains(&j) {
        return None;
    }
    let eps = *state.epsilon.get(&j)?;
    let m = window_members(w, next, eps + 1, state.r, width);
    (m.len() >= 2).then(|| (m[0], m[1]))
}

struct Engine<'a> {
    graph: &'a FiniteGraph,
    family: &'a GeneratorFamily,
    ws: &'a [CeSet],
    config: ConstructionConfig,
    bound: Option<usize>,
    state: ConstructionState,
    /// Content ceer and last logged window for every coding column.
    contents: BTreeMap<u64, (StagedCeer, Partition)>,
    log: PairLog,
    records: Vec<StageRecord>,
}

impl<'a> Engine<'a> {
    fn binding(&self, i: usize) -> bool {
        is_binding(self.graph, i)
    }

    /// Define `γ_i = r`, `ε_i`, and the new columns; returns new pairs.
    fn define(&mut self, i: usize, pairs: &mut Vec<(u64, u64)>) -> Result<(), ConstructionError> {
        let g = self.state.r;
        let binding = self.binding(i);
        let e = if binding { g + 1 } else { g };
        self.state.gamma.insert(i, g);
        self.state.epsilon.insert(i, e);
        self.state.r = e + 1;
        if self.graph.has_vertex(i as u64) {
            self.add_coding(g, ColumnContent::Code { index: i }, pairs)?;
        } else {
            self.state.layout.push(Descriptor::Block { first: g, last: g, reason: BlockReason::Padding { index: i } });
            pairs.extend(self.block_pairs(g, g, &[]));
        }
        if binding {
            let (left, right) = unpair(i as u64);
            self.add_coding(e, ColumnContent::QuotientEdge { index: i, left, right }, pairs)?;
        }
        Ok(())
    }

    fn add_coding(&mut self, column: u64, content: ColumnContent, pairs: &mut Vec<(u64, u64)>) -> Result<(), ConstructionError> {
        let ceer = content_ceer(&content, self.family, self.config.quotient_pair)?;
        let width = self.config.width as usize;
        let cur = ceer.snapshot(self.state.stage, width)?;
        pairs.extend(new_links(&Partition::discrete(width), &cur).into_iter().map(|(x, y)| (pair(column, x), pair(column, y))));
        self.contents.insert(column, (ceer, cur));
        self.state.layout.push(Descriptor::Coding { column, content });
        Ok(())
    }

    fn block_pairs(&self, first: u64, last: u64, extra: &[u64]) -> Vec<(u64, u64)> {
        let anchor = pair(first, 0);
        (first..=last)
            .flat_map(|n| (0..self.config.width).map(move |x| pair(n, x)))
            .chain(extra.iter().copied())
            .filter(|&e| e != anchor)
            .map(|e| (anchor, e))
            .collect()
    }

    /// New pairs in coding columns whose content grew at this stage.
    fn content_growth(&mut self, pairs: &mut Vec<(u64, u64)>) -> Result<(), ConstructionError> {
        let stage = self.state.stage;
        let width = self.config.width as usize;
        for (&column, (ceer, last)) in self.contents.iter_mut() {
            if ceer.is_static() {
                continue;
            }
            let cur = ceer.snapshot(stage, width)?;
            pairs.extend(new_links(last, &cur).into_iter().map(|(x, y)| (pair(column, x), pair(column, y))));
            *last = cur;
        }
        Ok(())
    }

    fn class_keys(&self, elems: &[u64]) -> Result<Vec<ClassKey>, ConstructionError> {
        let mut by_column: BTreeMap<u64, u64> = BTreeMap::new();
        for &e in elems {
            let (n, x) = unpair(e);
            let m = by_column.entry(n).or_insert(0);
            *m = (*m).max(x + 1);
        }
        let mut windows = BTreeMap::new();
        for (&n, &reach) in &by_column {
            if let Some((ceer, _)) = self.contents.get(&n) {
                windows.insert(n, ceer.snapshot(self.state.stage, reach as usize)?);
            }
        }
        Ok(elems
            .iter()
            .map(|&e| {
                let (n, x) = unpair(e);
                match self.state.descriptor_at(n) {
                    None => ClassKey::Fresh(e),
                    Some(Descriptor::Block { first, .. }) => ClassKey::Block(*first),
                    Some(Descriptor::Coding { .. }) => ClassKey::Coded(n, windows[&n].label(x as usize)),
                }
            })
            .collect())
    }

    /// `W_j` has enumerated two distinct elements that `C` has collapsed.
    fn collapsed_in(&self, w: &CeSet) -> Result<bool, ConstructionError> {
        let elems = window_members(w, self.state.stage, 0, self.state.r, self.config.width);
        let keys = self.class_keys(&elems)?;
        let distinct: BTreeSet<ClassKey> = keys.iter().copied().collect();
        Ok(distinct.len() < keys.len())
    }

    fn darks(&self) -> usize {
        if self.config.finite_mode {
            0
        } else {
            self.ws.len()
        }
    }

    fn finish_stage(&mut self, action: StageAction, mut pairs: Vec<(u64, u64)>) -> Result<(), ConstructionError> {
        self.content_growth(&mut pairs)?;
        pairs.sort_unstable();
        pairs.dedup();
        self.log.push_stage(pairs);
        let mut passive = Vec::new();
        for j in 0..self.darks() {
            if !self.state.satisfied.contains(&j) && self.collapsed_in(&self.ws[j])? {
                self.state.satisfied.insert(j);
                passive.push(j);
            }
        }
        let graph = self.graph;
        self.state
            .check_invariants(|i| is_binding(graph, i))
            .map_err(|detail| ConstructionError::Invariant { stage: self.state.stage, detail })?;
        let top = self.state.gamma.keys().next_back().map_or(0, |k| k + 1);
        self.records.push(StageRecord {
            stage: self.state.stage,
            action,
            r: self.state.r,
            gamma: (0..top).map(|i| self.state.gamma.get(&i).copied()).collect(),
            epsilon: (0..top).map(|i| self.state.epsilon.get(&i).copied()).collect(),
            satisfied: self.state.satisfied.iter().copied().collect(),
            passive,
            layout: self.state.layout.clone(),
        });
        Ok(())
    }

    fn stage_zero(&mut self) -> Result<(), ConstructionError> {
        let mut pairs = Vec::new();
        self.state.r = 0;
        self.define(0, &mut pairs)?;
        self.finish_stage(StageAction::Init, pairs)
    }

    fn stage_step(&mut self) -> Result<(), ConstructionError> {
        let next = self.state.stage + 1;
        let attention = (0..self.darks()).find_map(|j| {
            requires_attention(j, &self.state, &self.ws[j], next, self.config.width).map(|w| (j, w))
        });
        self.state.stage = next;
        let mut pairs = Vec::new();
        let action = if let Some((j, (x, y))) = attention {
            let lo = self.state.epsilon[&j] + 1;
            let hi = self.state.r - 1;
            self.state.layout.retain(|d| d.last() < lo);
            self.contents.retain(|&c, _| c < lo);
            self.state.gamma.retain(|&i, _| i <= j);
            self.state.epsilon.retain(|&i, _| i <= j);
            self.state.layout.push(Descriptor::Block { first: lo, last: hi, reason: BlockReason::Collapse { dark: j } });
            pairs.extend(self.block_pairs(lo, hi, &[x, y]));
            self.state.satisfied.insert(j);
            self.define(j + 1, &mut pairs)?;
            StageAction::DarkActed { j, witnesses: (x, y), block: (lo, hi) }
        } else {
            let i = (0..).find(|i| !self.state.gamma.contains_key(i)).expect("unbounded");
            if self.bound.is_some_and(|k| i >= k) {
                StageAction::Idle
            } else {
                self.define(i, &mut pairs)?;
                StageAction::Defined { index: i }
            }
        };
        self.finish_stage(action, pairs)
    }
}

/// Run stages `0..stages`.
pub fn run(
    graph: &FiniteGraph,
    family: &GeneratorFamily,
    ws: &[CeSet],
    config: ConstructionConfig,
    stages: usize,
) -> Result<RunOutput, ConstructionError> {
    if stages == 0 {
        return Err(ConstructionError::NoStages);
    }
    let (qx, qy) = config.quotient_pair;
    if qx % 2 != 0 || qy % 2 != 1 {
        return Err(ConstructionError::QuotientPair(qx, qy));
    }
    for &v in graph.vertices() {
        family.member(v as usize)?;
    }
    let mut engine = Engine {
        graph,
        family,
        ws,
        config,
        bound: config.finite_mode.then(|| requirement_bound(graph)),
        state: ConstructionState::default(),
        contents: BTreeMap::new(),
        log: PairLog::new(),
        records: Vec::new(),
    };
    engine.stage_zero()?;
    for _ in 1..stages {
        engine.stage_step()?;
    }
    let trace = ConstructionTrace {
        kind: "construction".into(),
        config,
        graph: graph.to_json(),
        family: family.clone(),
        ws: ws.to_vec(),
        records: engine.records,
        ceer: CeerTrace::from_log(&engine.log),
    };
    Ok(RunOutput {
        ceer: StagedCeer::from_log(engine.log),
        state: engine.state,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::partition::closure;

    fn id_family() -> GeneratorFamily {
        GeneratorFamily::parse("id").unwrap()
    }

    fn full() -> ConstructionConfig {
        ConstructionConfig { finite_mode: false, ..Default::default() }
    }

    #[test]
    fn stage_zero_examples() {
        let g = FiniteGraph::path(3);
        let fam = GeneratorFamily::parse("ladder:1").unwrap();
        let out = run(&g, &fam, &[], ConstructionConfig::default(), 1).unwrap();
        assert_eq!(out.state.gamma, [(0, 0)].into());
        assert_eq!(out.state.epsilon, [(0, 0)].into());
        assert_eq!(out.state.r, 1);
        // R_0 = Ladder(1) has 0 ~ 1 at stage 0 and nothing else below 8.
        let c0 = out.ceer.snapshot(0, pair(0, 7) as usize + 1).unwrap();
        for x in 0..8 {
            for y in 0..8 {
                let want = x == y || x / 2 == 0 && y / 2 == 0;
                assert_eq!(c0.same(pair(0, x) as usize, pair(0, y) as usize), want, "{x} {y}");
            }
        }
    }

    #[test]
    fn single_edge_layout() {
        let g = FiniteGraph::path(2);
        let out = run(&g, &id_family(), &[], ConstructionConfig::default(), 10).unwrap();
        assert_eq!(
            out.state.layout,
            vec![
                Descriptor::Coding { column: 0, content: ColumnContent::Code { index: 0 } },
                Descriptor::Coding { column: 1, content: ColumnContent::Code { index: 1 } },
                Descriptor::Coding { column: 2, content: ColumnContent::QuotientEdge { index: 1, left: 1, right: 0 } },
            ]
        );
        assert_eq!(out.trace.records[2].action, StageAction::Idle);
    }

    #[test]
    fn empty_graph_has_no_edge_columns() {
        let out = run(&FiniteGraph::empty(2), &id_family(), &[], ConstructionConfig::default(), 20).unwrap();
        assert!(out.state.layout.iter().all(|d| !matches!(d, Descriptor::Coding { content: ColumnContent::QuotientEdge { .. }, .. })));
    }

    #[test]
    fn quiet_ws_define_in_order() {
        let ws = vec![CeSet::Empty; 4];
        let out = run(&FiniteGraph::path(3), &id_family(), &ws, full(), 30).unwrap();
        assert!(out.state.satisfied.is_empty());
        for (s, rec) in out.trace.records.iter().enumerate().skip(1) {
            assert_eq!(rec.action, StageAction::Defined { index: s });
        }
    }

    #[test]
    fn requires_attention_examples() {
        let state = ConstructionState {
            stage: 4,
            gamma: [(0, 0), (1, 1)].into(),
            epsilon: [(0, 0), (1, 1)].into(),
            r: 4,
            ..Default::default()
        };
        assert_eq!(requires_attention(0, &state, &CeSet::Empty, 5, 8), None);
        let w = CeSet::schedule(vec![(5, pair(1, 0)), (5, pair(1, 1))]);
        assert_eq!(requires_attention(0, &state, &w, 5, 8), Some((pair(1, 0), pair(1, 1))));
        assert_eq!(requires_attention(0, &state, &w, 4, 8), None);
        assert_eq!(requires_attention(1, &state, &w, 5, 8), None);
        let low = CeSet::schedule(vec![(0, pair(0, 3)), (0, pair(0, 5))]);
        assert_eq!(requires_attention(0, &state, &low, 5, 8), None);
    }

    #[test]
    fn dark_zero_collapses_fresh_columns() {
        let w0 = CeSet::schedule(vec![(5, pair(2, 0)), (5, pair(3, 4))]);
        let out = run(&FiniteGraph::path(3), &id_family(), &[w0], full(), 12).unwrap();
        let rec = &out.trace.records[5];
        assert_eq!(rec.action, StageAction::DarkActed { j: 0, witnesses: (pair(2, 0), pair(3, 4)), block: (1, 5) });
        assert!(rec.satisfied.contains(&0));
        assert!(rec.gamma.iter().skip(2).all(Option::is_none));
        assert_eq!(rec.gamma[1], Some(6));
        let log = out.trace.log().unwrap();
        let top = log.max_element().unwrap() as usize + 1;
        let c = closure(top, log.through(5));
        assert!(c.same(pair(2, 0) as usize, pair(3, 4) as usize));
        assert!(c.same(pair(1, 0) as usize, pair(4, 7) as usize));
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = FiniteGraph::path(2);
        assert!(matches!(run(&g, &id_family(), &[], ConstructionConfig::default(), 0), Err(ConstructionError::NoStages)));
        let odd = ConstructionConfig { quotient_pair: (1, 1), ..Default::default() };
        assert!(matches!(run(&g, &id_family(), &[], odd, 3), Err(ConstructionError::QuotientPair(1, 1))));
    }

    #[test]
    fn deterministic() {
        let ws = vec![CeSet::Evens, CeSet::schedule(vec![(7, 40), (9, 41)])];
        let a = run(&FiniteGraph::cycle(4), &GeneratorFamily::parse("ladder:2").unwrap(), &ws, full(), 60).unwrap();
        let b = run(&FiniteGraph::cycle(4), &GeneratorFamily::parse("ladder:2").unwrap(), &ws, full(), 60).unwrap();
        assert_eq!(serde_json::to_string(&a.trace).unwrap(), serde_json::to_string(&b.trace).unwrap());
    }
}
