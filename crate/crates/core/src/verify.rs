//! Verification suites behind `ceerlab verify`.
//!
//! Each suite returns a [`VerifyReport`] whose rendering depends only on the
//! suite and the seed: no timings, no thread counts, no hash-order output.

use crate::construction::{
    check_coding_fidelity, check_layout_tiling, check_parameter_bound, decode_layout_graph, requirement_bound, run, verify_dark_satisfaction,
    ConstructionConfig, DarkOutcome, GeneratorFamily,
};
use crate::exec::Exec;
use crate::graph::FiniteGraph;
use crate::interp::{check_corpus, check_gadget_arithmetic, poset_macros};
use crate::kernel::facts::{cancellation, decomposition, iso_representatives, omitted_classes, restriction_law, self_fullness, FactDomain};
use crate::kernel::{pair, CeSet, CeerTrace, StagedCeer};
use crate::logic::{Checker, Program};
use crate::names::{build_name, expected_label_graph, ladder_supply, trace_metadata, PairSet, Pointed};
use crate::probe::{all_fixtures, build_fixture, probe_fixture, tower_agreement, FinitePoset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt::Write as _;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Kernel,
    Construction,
    Interpretation,
    Names,
    Probe,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["kernel", "construction", "interpretation", "names", "probe", "all"];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Kernel => "kernel",
            Suite::Construction => "construction",
            Suite::Interpretation => "interpretation",
            Suite::Names => "names",
            Suite::Probe => "probe",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "kernel" => Ok(Suite::Kernel),
            "construction" => Ok(Suite::Construction),
            "interpretation" => Ok(Suite::Interpretation),
            "names" => Ok(Suite::Names),
            "probe" => Ok(Suite::Probe),
            "all" => Ok(Suite::All),
            other => Err(format!("unknown suite {other:?}; expected one of {}", Suite::NAMES.join(", "))),
        }
    }
}

/// One checked claim. `id` is `C1`..`C10` for the numbered acceptance
/// criteria and a short tag for supplementary checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub summary: String,
    pub failures: Vec<String>,
}

impl CheckResult {
    fn new(id: &str, title: &str, summary: String, failures: Vec<String>) -> Self {
        CheckResult {
            id: id.to_string(),
            title: title.to_string(),
            passed: failures.is_empty(),
            summary,
            failures,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

const MAX_FAILURES: usize = 12;

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "ceerlab verify suite={} seed={}", self.suite.name(), self.seed);
        for c in &self.checks {
            let _ = writeln!(out, "[{}] {} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.title, c.summary);
            for f in c.failures.iter().take(MAX_FAILURES) {
                let _ = writeln!(out, "    {f}");
            }
            if c.failures.len() > MAX_FAILURES {
                let _ = writeln!(out, "    ... {} more", c.failures.len() - MAX_FAILURES);
            }
        }
        let ok = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "result: {} ({ok}/{} checks passed)", if self.passed() { "PASS" } else { "FAIL" }, self.checks.len());
        out
    }
}

pub fn run_suite(suite: Suite, seed: u64, exec: Exec) -> VerifyReport {
    let mut checks = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Kernel {
        checks.push(kernel_algebra(exec));
        checks.push(self_fullness_shadow());
    }
    if all || suite == Suite::Construction {
        let runs = construction_runs(seed);
        checks.push(construction_roundtrip(&runs));
        checks.push(dark_discipline(seed));
        checks.push(parameter_stabilization(&runs));
    }
    if all || suite == Suite::Interpretation {
        checks.push(gadget_interpretation(exec));
        checks.push(translation_soundness(exec));
        checks.push(tower_check(exec));
    }
    if all || suite == Suite::Names {
        checks.push(names_check(seed));
    }
    if all || suite == Suite::Probe {
        checks.push(poset_macro_fidelity(exec));
        checks.push(name_decoding(exec));
        checks.push(random_posets(seed));
    }
    if all {
        checks.push(determinism(seed, exec));
    }
    VerifyReport { suite, seed, checks }
}

/// Ids accepted by [`run_check`], in report order.
pub const CHECK_IDS: [&str; 13] = ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "tower", "names", "C8", "C9", "posets", "C10"];

/// One check of the `all` suite on its own.
pub fn run_check(id: &str, seed: u64, exec: Exec) -> Option<CheckResult> {
    Some(match id {
        "C1" => kernel_algebra(exec),
        "C2" => self_fullness_shadow(),
        "C3" => construction_roundtrip(&construction_runs(seed)),
        "C4" => dark_discipline(seed),
        "C5" => parameter_stabilization(&construction_runs(seed)),
        "C6" => gadget_interpretation(exec),
        "C7" => translation_soundness(exec),
        "tower" => tower_check(exec),
        "names" => names_check(seed),
        "C8" => poset_macro_fidelity(exec),
        "C9" => name_decoding(exec),
        "posets" => random_posets(seed),
        "C10" => determinism(seed, exec),
        _ => return None,
    })
}

fn kernel_algebra(exec: Exec) -> CheckResult {
    let d = FactDomain::new(10, 5, 3);
    let reports = [
        cancellation(&d, exec),
        omitted_classes(&d, exec),
        restriction_law(&d, exec),
        decomposition(&d, &iso_representatives(3, 3), exec),
    ];
    let cases: u64 = reports.iter().map(|r| r.cases).sum();
    let failures: Vec<String> = reports.iter().flat_map(|r| r.counterexamples.iter().map(move |c| format!("{}: {c}", r.name))).collect();
    let names: Vec<&str> = reports.iter().map(|r| r.name.as_str()).collect();
    CheckResult::new(
        "C1",
        "kernel algebra",
        format!("{} ceers, {} representatives, laws [{}], {cases} cases, {} counterexamples", d.all.len(), d.reps.len(), names.join(", "), failures.len()),
        failures,
    )
}

fn self_fullness_shadow() -> CheckResult {
    let r = self_fullness(8);
    CheckResult::new("C2", "self-fullness shadow", format!("Id_(n+1) <= Id_n refuted for n = 1..8, {} cases", r.cases), r.counterexamples)
}

/// Graphs of the round-trip criterion, with names.
pub fn roundtrip_graphs() -> Vec<(&'static str, FiniteGraph)> {
    vec![
        ("empty3", FiniteGraph::empty(3)),
        ("P3", FiniteGraph::path(3)),
        ("C4", FiniteGraph::cycle(4)),
        ("K4", FiniteGraph::complete(4)),
        ("label", FiniteGraph::label_gadget()),
    ]
}

pub const ROUNDTRIP_STAGES: usize = 500;

/// Scripted `W` sets: two to four sets, each a short schedule of pairs
/// `⟨column, k⟩` enumerated before stage 150, with an occasional decidable
/// or empty set mixed in.
pub fn scripted_ws(rng: &mut ChaCha8Rng) -> Vec<CeSet> {
    let count = rng.gen_range(2..=4);
    (0..count)
        .map(|_| match rng.gen_range(0..10) {
            0 => CeSet::Empty,
            1 => CeSet::Evens,
            _ => {
                let events = rng.gen_range(2..=4);
                CeSet::schedule(
                    (0..events)
                        .map(|_| (rng.gen_range(1..150), pair(rng.gen_range(0..14), rng.gen_range(0..6))))
                        .collect(),
                )
            }
        })
        .collect()
}

struct RoundtripRun {
    label: String,
    graph: FiniteGraph,
    outcome: Result<crate::construction::RunOutput, String>,
}

fn construction_runs(seed: u64) -> Vec<RoundtripRun> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0003);
    let family = GeneratorFamily::parse("ladder").expect("built-in family");
    let mut runs = Vec::new();
    for (name, g) in roundtrip_graphs() {
        let ws = scripted_ws(&mut rng);
        for finite in [true, false] {
            let cfg = ConstructionConfig { finite_mode: finite, ..ConstructionConfig::default() };
            let w: &[CeSet] = if finite { &[] } else { &ws };
            runs.push(RoundtripRun {
                label: format!("{name}/{}", if finite { "finite" } else { "full" }),
                graph: g.clone(),
                outcome: run(&g, &family, w, cfg, ROUNDTRIP_STAGES).map_err(|e| e.to_string()),
            });
        }
    }
    runs
}

fn construction_roundtrip(runs: &[RoundtripRun]) -> CheckResult {
    let mut failures = Vec::new();
    let mut actions = 0;
    for r in runs {
        match &r.outcome {
            Err(e) => failures.push(format!("{}: run failed: {e}", r.label)),
            Ok(out) => {
                actions += out.trace.dark_actions().values().sum::<usize>();
                match decode_layout_graph(&out.trace, requirement_bound(&r.graph)) {
                    Ok(g) if g == r.graph => {}
                    Ok(g) => failures.push(format!("{}: decoded {:?}, input {:?}", r.label, g.edges(), r.graph.edges())),
                    Err(e) => failures.push(format!("{}: {e}", r.label)),
                }
                failures.extend(check_layout_tiling(&out.trace).into_iter().map(|f| format!("{}: {f}", r.label)));
                match check_coding_fidelity(&out.trace) {
                    Ok(v) => failures.extend(v.into_iter().map(|f| format!("{}: {f}", r.label))),
                    Err(e) => failures.push(format!("{}: {e}", r.label)),
                }
            }
        }
    }
    CheckResult::new(
        "C3",
        "construction round-trip",
        format!("{} runs of {ROUNDTRIP_STAGES} stages (finite and full mode), {actions} dark actions, {} mismatches", runs.len(), failures.len()),
        failures,
    )
}

pub const DARK_SCENARIOS: usize = 20;

fn dark_discipline(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0004);
    let family = GeneratorFamily::parse("ladder").expect("built-in family");
    let graphs = roundtrip_graphs();
    let cfg = ConstructionConfig { finite_mode: false, ..ConstructionConfig::default() };
    let mut failures = Vec::new();
    let (mut acted, mut passive, mut idle) = (0, 0, 0);
    for s in 0..DARK_SCENARIOS {
        let ws = scripted_ws(&mut rng);
        let (name, g) = &graphs[s % graphs.len()];
        let out = match run(g, &family, &ws, cfg, 300) {
            Ok(o) => o,
            Err(e) => {
                failures.push(format!("scenario {s} ({name}): {e}"));
                continue;
            }
        };
        match verify_dark_satisfaction(&out.trace, ws.len()) {
            Ok(rep) => {
                failures.extend(rep.violations.iter().map(|v| format!("scenario {s} ({name}): {v}")));
                if rep.unverified > 0 {
                    failures.push(format!("scenario {s} ({name}): {} passive satisfactions not confirmed by the log", rep.unverified));
                }
                for (j, o) in &rep.outcomes {
                    match o {
                        DarkOutcome::ActedAt(_) => acted += 1,
                        DarkOutcome::SatisfiedPassively(_) => passive += 1,
                        DarkOutcome::WindowNeverHit => idle += 1,
                        DarkOutcome::Pending => failures.push(format!("scenario {s} ({name}): Dark_{j} required attention but never acted")),
                        DarkOutcome::NotInForce => failures.push(format!("scenario {s} ({name}): Dark_{j} not in force in full mode")),
                    }
                }
            }
            Err(e) => failures.push(format!("scenario {s} ({name}): {e}")),
        }
    }
    if acted == 0 {
        failures.push("no scenario produced a dark action".into());
    }
    CheckResult::new(
        "C4",
        "dark-requirement discipline",
        format!("{DARK_SCENARIOS} scenarios, {acted} acted, {passive} passively satisfied, {idle} never attended, {} violations", failures.len()),
        failures,
    )
}

fn parameter_stabilization(runs: &[RoundtripRun]) -> CheckResult {
    let mut failures = Vec::new();
    let mut checked = 0;
    for r in runs {
        if let Ok(out) = &r.outcome {
            checked += 1;
            failures.extend(check_parameter_bound(&out.trace, 5).into_iter().map(|f| format!("{}: {f}", r.label)));
        }
    }
    CheckResult::new("C5", "parameter stabilization", format!("gamma_0..gamma_4 bounded in {checked} runs"), failures)
}

fn gadget_interpretation(exec: Exec) -> CheckResult {
    let r = check_gadget_arithmetic(20, exec);
    let mut failures = Vec::new();
    failures.extend(r.plus_mismatches.iter().map(|m| format!("plus {m:?}")));
    failures.extend(r.times_mismatches.iter().map(|m| format!("times {m:?}")));
    failures.extend(r.uniqueness_failures.iter().map(|m| format!("uniqueness {m:?}")));
    CheckResult::new(
        "C6",
        "gadget-graph interpretation",
        format!("N = {}, {} triples, {} plus, {} times, {} uniqueness mismatches", r.n, r.triples, r.plus_mismatches.len(), r.times_mismatches.len(), r.uniqueness_failures.len()),
        failures,
    )
}

fn translation_soundness(exec: Exec) -> CheckResult {
    let r = check_corpus(32, exec);
    let failures: Vec<String> = r
        .lines
        .iter()
        .filter(|l| !(l.oracle == l.arithmetic && l.oracle == l.graph))
        .map(|l| format!("{}: oracle {}, fragment {}, gadget graph {}", l.name, l.oracle, l.arithmetic, l.graph))
        .collect();
    let truths = r.lines.iter().filter(|l| l.oracle).count();
    let mut failures = failures;
    if r.lines.len() < 30 {
        failures.push(format!("corpus has only {} sentences", r.lines.len()));
    }
    CheckResult::new(
        "C7",
        "translation soundness",
        format!("{} sentences ({truths} true), fragment N = {}, {}/{} agree", r.lines.len(), r.n, r.agreements(), r.lines.len()),
        failures,
    )
}

fn tower_check(exec: Exec) -> CheckResult {
    let mut failures = Vec::new();
    let mut total = 0;
    for n in 1..=2 {
        let lines = tower_agreement(n, exec);
        total += lines.len();
        failures.extend(
            lines
                .iter()
                .filter(|l| !l.agrees())
                .map(|l| format!("N = {n}, {}: expected {}, graph {}, poset V {}, poset NI {}", l.statement, l.expected, l.graph, l.poset_v, l.poset_ni)),
        );
    }
    CheckResult::new(
        "tower",
        "graph and poset-coded gadget agree",
        format!("{total} statements (bounded Q, plus, times) on N = 1, 2 in three structures"),
        failures,
    )
}

fn names_check(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0105);
    let pool: Vec<Pointed> = (0..6).map(|i| Pointed::new(StagedCeer::Ladder { period: 50 + i })).collect();
    let mut failures = Vec::new();
    let cases = 40;
    for case in 0..cases {
        let count = rng.gen_range(1..=4);
        let mut pairs = Vec::new();
        while pairs.len() < count {
            let p = (rng.gen_range(0..pool.len()), rng.gen_range(0..pool.len()));
            if !pairs.contains(&p) {
                pairs.push(p);
            }
        }
        let f = PairSet::new(pool.clone(), pairs.clone()).expect("valid pair set");
        let name = match build_name(&f, &mut ladder_supply(rng.gen_range(1..8))) {
            Ok(n) => n,
            Err(e) => {
                failures.push(format!("case {case} {pairs:?}: {e}"));
                continue;
            }
        };
        if name.metadata.columns.len() != 12 * f.len() {
            failures.push(format!("case {case}: {} columns for {} pairs", name.metadata.columns.len(), f.len()));
        }
        match name.metadata.decode() {
            Ok(g) if g == expected_label_graph(&f) => {}
            Ok(g) => failures.push(format!("case {case} {pairs:?}: decoded {:?}", g.edges())),
            Err(e) => failures.push(format!("case {case}: {e}")),
        }
        let bound = 12 * f.len() * 4;
        match name.metadata.check_columns(&name.ceer, 16, bound) {
            Ok(v) => failures.extend(v.into_iter().map(|p| format!("case {case}: {p}"))),
            Err(e) => failures.push(format!("case {case}: {e}")),
        }
        let back = name
            .trace(4, bound)
            .ok()
            .and_then(|t| serde_json::to_string(&t).ok())
            .and_then(|s| serde_json::from_str::<CeerTrace>(&s).ok())
            .and_then(|t| trace_metadata(&t).ok());
        if back.as_ref() != Some(&name.metadata) {
            failures.push(format!("case {case}: label metadata did not survive the trace round-trip"));
        }
    }
    CheckResult::new("names", "names decode to their label graphs", format!("{cases} random pair sets, metadata, columns and trace round-trip"), failures)
}

fn poset_macro_fidelity(exec: Exec) -> CheckResult {
    let mut failures = Vec::new();
    let mut checks = 0;
    let fixtures = all_fixtures();
    for fx in &fixtures {
        match probe_fixture(fx, exec) {
            Ok(r) => {
                checks += r.lines.len();
                failures.extend(r.lines.iter().filter(|l| !l.passed).map(|l| format!("{}: {} {}", r.family, l.check, l.detail)));
            }
            Err(e) => failures.push(format!("{}: {e}", fx.family)),
        }
    }
    let edge = |family: &str| -> Option<usize> {
        let fx = build_fixture(family).ok()?;
        let c = fx.poset.element(&fx.designated.get("c")?[0]).ok()?;
        Some(fx.poset.decode_gc(c).ok()?.edges().len())
    };
    let (d, s, z) = (edge("double-cover"), edge("single-cover"), edge("z-dark-join"));
    if d != Some(1) {
        failures.push(format!("double-cover decodes {d:?} edges, expected one"));
    }
    if s != Some(0) {
        failures.push(format!("single-cover decodes {s:?} edges, expected none"));
    }
    // The z-dark-join fixture keeps one edge away from r; r itself must be
    // isolated, which the fixture's own checks cover.
    if z != Some(1) {
        failures.push(format!("z-dark-join decodes {z:?} edges, expected only s1-s2"));
    }
    CheckResult::new(
        "C8",
        "poset macro fidelity",
        format!("{} fixtures, {checks} checks; edges: double-cover {}, single-cover {}, z-dark-join at r none", fixtures.len(), d.unwrap_or(0), s.unwrap_or(0)),
        failures,
    )
}

fn name_decoding(exec: Exec) -> CheckResult {
    let mut failures = Vec::new();
    let mut lines = 0;
    for family in ["name-label", "name-label:2", "light-triple"] {
        let fx = match build_fixture(family) {
            Ok(f) => f,
            Err(e) => {
                failures.push(format!("{family}: {e}"));
                continue;
            }
        };
        match probe_fixture(&fx, exec) {
            Ok(r) => {
                let relevant: Vec<_> = r.lines.iter().filter(|l| l.check.contains("Decodes") || l.check.contains("Label") || l.check.contains("label")).collect();
                if relevant.is_empty() {
                    failures.push(format!("{family}: no decoding checks"));
                }
                lines += relevant.len();
                failures.extend(relevant.iter().filter(|l| !l.passed).map(|l| format!("{family}: {} {}", l.check, l.detail)));
            }
            Err(e) => failures.push(format!("{family}: {e}")),
        }
    }
    CheckResult::new("C9", "name decoding", format!("{lines} exact decoding checks on name-label, name-label:2, light-triple"), failures)
}

/// Random order with `0` as bottom, edges only upward in index order.
pub fn random_poset(rng: &mut ChaCha8Rng, max: usize) -> FinitePoset {
    let n = rng.gen_range(2..=max);
    let density = rng.gen_range(0.15..0.6);
    let names = (0..n).map(|i| format!("p{i}")).collect();
    let mut rel: Vec<(usize, usize)> = (1..n).map(|j| (0, j)).collect();
    for i in 1..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                rel.push((i, j));
            }
        }
    }
    FinitePoset::new(names, &rel).expect("upward relation is acyclic")
}

fn random_posets(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0108);
    let prog = Program::new(poset_macros()).expect("poset macros compile");
    let mut failures = Vec::new();
    let cases = 40;
    let mut pairs = 0;
    for case in 0..cases {
        let p = random_poset(&mut rng, 9);
        let st = p.to_structure();
        let mut ch = Checker::new(&st, &prog).expect("poset program");
        let n = p.size() as u32;
        for c in 0..n {
            let g = p.decode_gc(c as usize).expect("bottom exists");
            for x in 0..n {
                for y in 0..n {
                    pairs += 1;
                    let scan = x != y && g.has_vertex(x as u64) && g.has_edge(x as u64, y as u64);
                    if ch.call("E", &[x, y, c]).expect("E") != scan {
                        failures.push(format!("case {case}: E(p{x}, p{y}, p{c}) disagrees with the scan"));
                    }
                }
            }
        }
    }
    CheckResult::new("posets", "random posets: E macro vs exhaustive scan", format!("{cases} posets, {pairs} triples"), failures)
}

/// The seeded inputs regenerate identically, and a full probe-suite report
/// renders byte-identically twice.
fn determinism(seed: u64, exec: Exec) -> CheckResult {
    let mut failures = Vec::new();
    let mut a = ChaCha8Rng::seed_from_u64(seed);
    let mut b = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..DARK_SCENARIOS {
        if scripted_ws(&mut a) != scripted_ws(&mut b) {
            failures.push(format!("scenario {i} differs between generations"));
        }
    }
    let r1 = run_suite(Suite::Probe, seed, exec).render();
    let r2 = run_suite(Suite::Probe, seed, Exec::Sequential).render();
    if r1 != r2 {
        failures.push("probe suite report differs between parallel and sequential runs".into());
    }
    CheckResult::new("C10", "determinism", format!("seeded scenarios regenerate, probe report identical across execution modes ({} bytes)", r1.len()), failures)
}
