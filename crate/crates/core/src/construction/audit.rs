//! Checks that replay a finished trace.
//!
//! These recompute attention, collapse and coding facts from the recorded
//! parameters and the emitted pair log, without calling back into the
//! engine.

use super::engine::{content_ceer, ConstructionError, ConstructionTrace, StageAction, StageRecord};
use super::state::{ColumnContent, Descriptor};
use crate::graph::FiniteGraph;
use crate::kernel::pairing::{pair, unpair};
use crate::kernel::{CeSet, UnionFind};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Decode the coded graph from the final layout, after checking that no
/// parameter with index `< bound` changed during the final quarter of the
/// run. The check is a heuristic: stabilization is a limit property.
pub fn decode_layout_graph(trace: &ConstructionTrace, bound: usize) -> Result<FiniteGraph, ConstructionError> {
    let n = trace.records.len();
    let start = n - (n / 4).max(1);
    let last = trace.final_record();
    for i in 0..bound {
        let fin = (last.gamma.get(i).copied().flatten(), last.epsilon.get(i).copied().flatten());
        if fin.0.is_none() {
            return Err(ConstructionError::Unstable { bound, detail: format!("gamma_{i} undefined at the last stage") });
        }
        for rec in &trace.records[start..] {
            let here = (rec.gamma.get(i).copied().flatten(), rec.epsilon.get(i).copied().flatten());
            if here != fin {
                return Err(ConstructionError::Unstable {
                    bound,
                    detail: format!("parameters of index {i} changed at stage {}", rec.stage),
                });
            }
        }
    }
    let mut verts = BTreeSet::new();
    let mut edges = Vec::new();
    for d in &last.layout {
        if let Descriptor::Coding { content, .. } = d {
            match *content {
                ColumnContent::Code { index } if index < bound => {
                    verts.insert(index as u64);
                }
                ColumnContent::QuotientEdge { index, left, right } if index < bound => edges.push((left, right)),
                _ => {}
            }
        }
    }
    FiniteGraph::new(verts, edges).map_err(|e| ConstructionError::Trace(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DarkOutcome {
    ActedAt(usize),
    SatisfiedPassively(usize),
    WindowNeverHit,
    /// Required attention but never acted within the run.
    Pending,
    /// Finite mode has no `Dark` requirements.
    NotInForce,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DarkReport {
    pub outcomes: Vec<(usize, DarkOutcome)>,
    pub violations: Vec<String>,
    /// Passive satisfactions whose witnesses lie outside the logged window.
    pub unverified: usize,
}

/// Log closure, advanced one stage at a time.
struct Replay<'a> {
    log: &'a [Vec<(u64, u64)>],
    uf: UnionFind,
    done: usize,
}

impl<'a> Replay<'a> {
    fn new(log: &'a [Vec<(u64, u64)>]) -> Self {
        let top = log.iter().flatten().map(|&(x, y)| x.max(y)).max().map_or(1, |m| m as usize + 1);
        Replay { log, uf: UnionFind::new(top), done: 0 }
    }

    fn advance_through(&mut self, stage: usize) {
        while self.done <= stage && self.done < self.log.len() {
            for &(x, y) in &self.log[self.done] {
                self.uf.union(x as usize, y as usize);
            }
            self.done += 1;
        }
    }

    fn logged(&self, x: u64) -> bool {
        (x as usize) < self.uf.len()
    }

    fn same(&mut self, x: u64, y: u64) -> bool {
        x == y || (self.logged(x) && self.logged(y) && self.uf.same(x as usize, y as usize))
    }
}

fn members_in(w: &CeSet, stage: usize, lo: u64, hi: u64, width: u64) -> Vec<u64> {
    let mut out = BTreeSet::new();
    match w {
        CeSet::Schedule(ev) => {
            for &(s, e) in ev {
                let c = unpair(e).0;
                if s <= stage && c >= lo && c < hi {
                    out.insert(e);
                }
            }
        }
        CeSet::Finite(set) => out.extend(set.iter().copied().filter(|&e| (lo..hi).contains(&unpair(e).0))),
        CeSet::Empty => {}
        _ => {
            for c in lo..hi {
                for x in 0..width {
                    if w.member(pair(c, x), stage) {
                        out.insert(pair(c, x));
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

fn attention_set(prev: &StageRecord, ws: &[CeSet], next: usize, width: u64) -> Vec<(usize, (u64, u64))> {
    let mut out = Vec::new();
    for (j, w) in ws.iter().enumerate() {
        if j + 1 > next || prev.satisfied.contains(&j) {
            continue;
        }
        let Some(Some(eps)) = prev.epsilon.get(j) else { continue };
        let m = members_in(w, next, eps + 1, prev.r, width);
        if m.len() >= 2 {
            out.push((j, (m[0], m[1])));
        }
    }
    out
}

/// Replays attention and collapse for every `Dark_j` with `j < bound`.
pub fn verify_dark_satisfaction(trace: &ConstructionTrace, bound: usize) -> Result<DarkReport, ConstructionError> {
    let mut report = DarkReport::default();
    if trace.config.finite_mode {
        report.outcomes = (0..bound).map(|j| (j, DarkOutcome::NotInForce)).collect();
        return Ok(report);
    }
    let log = trace.log()?;
    let mut replay = Replay::new(&log.stages);
    let ws = &trace.ws;
    let width = trace.config.width;
    let mut first_attention: BTreeMap<usize, usize> = BTreeMap::new();
    let mut acted: BTreeMap<usize, usize> = BTreeMap::new();
    let mut passive: BTreeMap<usize, usize> = BTreeMap::new();
    for t in 0..trace.records.len() {
        let rec = &trace.records[t];
        replay.advance_through(t);
        if t > 0 {
            let prev = &trace.records[t - 1];
            let att = attention_set(prev, ws, t, width);
            for &(j, _) in &att {
                first_attention.entry(j).or_insert(t);
            }
            match (&rec.action, att.first()) {
                (StageAction::DarkActed { j, witnesses, .. }, Some(&(least, expected))) => {
                    if *j != least {
                        report.violations.push(format!("stage {t}: Dark_{j} acted but Dark_{least} has priority"));
                    }
                    if *witnesses != expected {
                        report.violations.push(format!("stage {t}: witnesses {witnesses:?}, expected {expected:?}"));
                    }
                    let (x, y) = *witnesses;
                    if x == y || !ws[*j].member(x, t) || !ws[*j].member(y, t) {
                        report.violations.push(format!("stage {t}: witnesses {witnesses:?} not distinct members of W_{j}"));
                    }
                    if !replay.same(x, y) {
                        report.violations.push(format!("stage {t}: witnesses of Dark_{j} not collapsed"));
                    }
                    acted.entry(*j).or_insert(t);
                }
                (StageAction::DarkActed { j, .. }, None) => {
                    report.violations.push(format!("stage {t}: Dark_{j} acted without requiring attention"));
                }
                (_, Some(&(least, _))) => {
                    report.violations.push(format!("stage {t}: Dark_{least} required attention but did not act"));
                }
                (_, None) => {}
            }
            for j in &prev.satisfied {
                if !rec.satisfied.contains(j) {
                    report.violations.push(format!("stage {t}: Dark_{j} lost its satisfied flag"));
                }
            }
        }
        for &j in &rec.passive {
            passive.entry(j).or_insert(t);
            let elems = members_in(&ws[j], t, 0, rec.r, width);
            let logged: Vec<u64> = elems.iter().copied().filter(|&e| replay.logged(e)).collect();
            let found = logged.iter().enumerate().any(|(a, &x)| logged[a + 1..].iter().any(|&y| replay.same(x, y)));
            if !found {
                report.unverified += 1;
            }
        }
    }
    for j in 0..bound {
        let outcome = match (first_attention.get(&j), acted.get(&j), passive.get(&j)) {
            (_, Some(&t), _) => DarkOutcome::ActedAt(t),
            (_, None, Some(&t)) => DarkOutcome::SatisfiedPassively(t),
            (Some(_), None, None) => DarkOutcome::Pending,
            (None, None, None) => DarkOutcome::WindowNeverHit,
        };
        if let (Some(&first), DarkOutcome::ActedAt(t)) = (first_attention.get(&j), &outcome) {
            // Between first attention and action only higher-priority
            // requirements may act; the per-stage check above covers that.
            if *t < first {
                report.violations.push(format!("Dark_{j} acted at {t} before first attention at {first}"));
            }
        }
        report.outcomes.push((j, outcome));
    }
    Ok(report)
}

/// Number of stages at which `γ_i` receives a new value, per index.
pub fn gamma_definitions(trace: &ConstructionTrace) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    let mut prev: Vec<Option<u64>> = Vec::new();
    for rec in &trace.records {
        for (i, g) in rec.gamma.iter().enumerate() {
            if g.is_some() && prev.get(i).copied().flatten() != *g {
                *out.entry(i).or_insert(0) += 1;
            }
        }
        prev = rec.gamma.clone();
    }
    out
}

/// `γ_i` changes at most (#actions of `Dark_j`, `j < i`) + 1 times.
pub fn check_parameter_bound(trace: &ConstructionTrace, indices: usize) -> Vec<String> {
    let defs = gamma_definitions(trace);
    let actions = trace.dark_actions();
    (0..indices)
        .filter_map(|i| {
            let changes = defs.get(&i).copied().unwrap_or(0);
            let allowed = actions.range(..i).map(|(_, n)| n).sum::<usize>() + 1;
            (changes > allowed).then(|| format!("gamma_{i} changed {changes} times, bound {allowed}"))
        })
        .collect()
}

/// Every recorded layout tiles `[0, r)`.
pub fn check_layout_tiling(trace: &ConstructionTrace) -> Vec<String> {
    let mut out = Vec::new();
    for rec in &trace.records {
        let mut next = 0;
        for d in &rec.layout {
            if d.first() != next {
                out.push(format!("stage {}: column {next} tiled badly", rec.stage));
                break;
            }
            next = d.last() + 1;
        }
        if next != rec.r {
            out.push(format!("stage {}: layout ends at {next}, r = {}", rec.stage, rec.r));
        }
    }
    out
}

/// For each coding column of the final layout, from the stage it last
/// appeared on: the logged `C` restricted to the column equals the content
/// ceer on the logged width, stage by stage.
pub fn check_coding_fidelity(trace: &ConstructionTrace) -> Result<Vec<String>, ConstructionError> {
    let log = trace.log()?;
    let mut replay = Replay::new(&log.stages);
    let width = trace.config.width;
    let last = trace.final_record();
    let mut columns = Vec::new();
    for d in &last.layout {
        if let Descriptor::Coding { column, content } = d {
            let since = trace
                .records
                .iter()
                .rposition(|r| !r.layout.contains(d))
                .map_or(0, |p| p + 1);
            let ceer = content_ceer(content, &trace.family, trace.config.quotient_pair)?;
            columns.push((*column, since, ceer));
        }
    }
    let mut out = Vec::new();
    for t in 0..trace.records.len() {
        replay.advance_through(t);
        for (column, since, ceer) in &columns {
            if t < *since {
                continue;
            }
            let p = ceer.snapshot(t, width as usize)?;
            for x in 0..width {
                for y in x + 1..width {
                    let logged = replay.same(pair(*column, x), pair(*column, y));
                    if logged != p.same(x as usize, y as usize) {
                        out.push(format!("stage {t}: column {column} disagrees on ({x}, {y})"));
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::engine::{run, ConstructionConfig};
    use super::super::family::GeneratorFamily;
    use super::super::requirement::requirement_bound;
    use super::*;

    fn full() -> ConstructionConfig {
        ConstructionConfig { finite_mode: false, ..Default::default() }
    }

    #[test]
    fn path_roundtrip_both_modes() {
        let g = FiniteGraph::path(3);
        let fam = GeneratorFamily::parse("ladder:2").unwrap();
        for cfg in [ConstructionConfig::default(), full()] {
            let out = run(&g, &fam, &[CeSet::Empty], cfg, 80).unwrap();
            assert_eq!(decode_layout_graph(&out.trace, requirement_bound(&g)).unwrap(), g);
            assert!(check_coding_fidelity(&out.trace).unwrap().is_empty());
            assert!(check_layout_tiling(&out.trace).is_empty());
        }
    }

    #[test]
    fn one_edge_gives_one_quotient_column() {
        let g = FiniteGraph::new(0..3, [(1, 2)]).unwrap();
        let out = run(&g, &GeneratorFamily::parse("id").unwrap(), &[], ConstructionConfig::default(), 40).unwrap();
        let q = out.state.layout.iter().filter(|d| matches!(d, Descriptor::Coding { content: ColumnContent::QuotientEdge { .. }, .. })).count();
        assert_eq!(q, 1);
        assert_eq!(decode_layout_graph(&out.trace, requirement_bound(&g)).unwrap(), g);
    }

    #[test]
    fn unstable_runs_are_refused() {
        let g = FiniteGraph::complete(4);
        let out = run(&g, &GeneratorFamily::parse("id").unwrap(), &[], ConstructionConfig::default(), 5).unwrap();
        assert!(matches!(decode_layout_graph(&out.trace, requirement_bound(&g)), Err(ConstructionError::Unstable { .. })));
    }

    #[test]
    fn dark_outcomes() {
        let g = FiniteGraph::path(3);
        let ws = vec![
            CeSet::schedule(vec![(5, pair(3, 0)), (5, pair(3, 1))]),
            CeSet::schedule(vec![(0, pair(0, 1)), (0, pair(0, 2))]),
            CeSet::Empty,
        ];
        let out = run(&g, &GeneratorFamily::parse("id").unwrap(), &ws, full(), 40).unwrap();
        let rep = verify_dark_satisfaction(&out.trace, 3).unwrap();
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        assert_eq!(rep.outcomes[0], (0, DarkOutcome::ActedAt(5)));
        assert_eq!(rep.outcomes[1], (1, DarkOutcome::WindowNeverHit));
        assert_eq!(rep.outcomes[2], (2, DarkOutcome::WindowNeverHit));
        assert!(check_parameter_bound(&out.trace, 5).is_empty());
        assert!(check_coding_fidelity(&out.trace).unwrap().is_empty());
    }

    #[test]
    fn passive_satisfaction_is_recorded() {
        // R_0 = Id_1 collapses column 0, so two elements of it satisfy Dark_0.
        let g = FiniteGraph::path(2);
        let ws = vec![CeSet::schedule(vec![(3, pair(0, 1)), (3, pair(0, 4))])];
        let out = run(&g, &GeneratorFamily::parse("mod:1").unwrap(), &ws, full(), 10).unwrap();
        let rep = verify_dark_satisfaction(&out.trace, 1).unwrap();
        assert_eq!(rep.outcomes[0], (0, DarkOutcome::SatisfiedPassively(3)));
        assert_eq!(rep.unverified, 0);
    }

    #[test]
    fn tampered_trace_is_caught() {
        let g = FiniteGraph::path(3);
        let ws = vec![CeSet::schedule(vec![(5, pair(3, 0)), (5, pair(3, 1))])];
        let mut out = run(&g, &GeneratorFamily::parse("id").unwrap(), &ws, full(), 20).unwrap();
        out.trace.records[5].action = StageAction::Defined { index: 5 };
        let rep = verify_dark_satisfaction(&out.trace, 1).unwrap();
        assert!(!rep.violations.is_empty());
    }
}
