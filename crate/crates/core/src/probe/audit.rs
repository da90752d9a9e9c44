//! Fixture checks: expectations against the exhaustive scans, and the
//! scans against model checking of the poset macros.

use super::fixture::Fixture;
use super::poset::{graph_name_decodes, FinitePoset, ProbeError};
use crate::exec::Exec;
use crate::graph::FiniteGraph;
use crate::interp::{graph_macros, poset_macros, GadgetGraph};
use crate::logic::{Checker, FiniteStructure, Program};
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureReport {
    pub family: String,
    pub lines: Vec<CheckLine>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }
}

type NamePairs = BTreeSet<(String, String)>;

fn unordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

fn line<T: std::fmt::Debug + PartialEq>(check: String, expected: T, computed: T) -> CheckLine {
    let passed = expected == computed;
    let detail = if passed { String::new() } else { format!("expected {expected:?}, computed {computed:?}") };
    CheckLine { check, passed, detail }
}

fn graph_names(p: &FinitePoset, g: &FiniteGraph) -> (BTreeSet<String>, NamePairs) {
    let v = g.vertices().iter().map(|&x| p.name(x as usize).to_string()).collect();
    let e = g.edges().iter().map(|&(a, b)| unordered(p.name(a as usize), p.name(b as usize))).collect();
    (v, e)
}

/// Tuples of elements (as indices) on which `name(prefix.., x, y, suffix..)`
/// holds, `x` and `y` ranging over the whole poset.
fn macro_pairs(exec: Exec, st: &FiniteStructure, prog: &Program, name: &str, args: impl Fn(u32, u32) -> Vec<u32> + Sync) -> Result<BTreeSet<(u32, u32)>, ProbeError> {
    let n = st.size() as u32;
    let xs: Vec<u32> = (0..n).collect();
    let rows = exec.map_chunks(&xs, |part| {
        let mut ch = Checker::new(st, prog).expect("poset program");
        part.iter()
            .flat_map(|&x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| ch.call(name, &args(x, y)).expect("macro is defined"))
            .collect::<Vec<_>>()
    });
    Ok(rows.into_iter().collect())
}

fn elem(p: &FinitePoset, s: &str) -> Result<u32, ProbeError> {
    Ok(p.element(s)? as u32)
}

/// Run every check the fixture's expectations call for, plus automorphism
/// invariance of the cover scan.
pub fn probe_fixture(fx: &Fixture, exec: Exec) -> Result<FixtureReport, ProbeError> {
    fx.validate()?;
    let p = &fx.poset;
    let st = p.to_structure();
    let prog = Program::new(poset_macros()).expect("poset macros compile");
    let mut lines = Vec::new();
    let smcs = p.smc_pairs()?;
    let smc_names: BTreeSet<(String, (String, String))> = smcs.iter().map(|s| (p.name(s.cover).to_string(), unordered(p.name(s.low.0), p.name(s.low.1)))).collect();
    if let Some(exp) = &fx.expect.smc {
        let want: BTreeSet<(String, (String, String))> = exp.iter().map(|s| (s.cover.clone(), unordered(&s.low[0], &s.low[1]))).collect();
        lines.push(line("smc_pairs".into(), want, smc_names.clone()));
    }
    let smc_set: BTreeSet<(usize, (usize, usize))> = smcs.iter().map(|s| (s.cover, s.low)).collect();
    let autos = p.automorphisms(512);
    let moved = autos
        .iter()
        .filter(|m| {
            let img: BTreeSet<(usize, (usize, usize))> = smc_set.iter().map(|&(a, (d, e))| (m[a], (m[d].min(m[e]), m[d].max(m[e])))).collect();
            img != smc_set
        })
        .count();
    lines.push(line(format!("smc_pairs invariant under {} automorphisms", autos.len()), 0, moved));

    for g in &fx.expect.graphs {
        let c = p.element(&g.c)?;
        let decoded = p.decode_gc(c)?;
        let (dv, de) = graph_names(p, &decoded);
        let want_v: BTreeSet<String> = g.vertices.iter().cloned().collect();
        let want_e: NamePairs = g.edges.iter().map(|[a, b]| unordered(a, b)).collect();
        lines.push(line(format!("decode_Gc({}) vertices", g.c), want_v, dv));
        lines.push(line(format!("decode_Gc({}) edges", g.c), want_e, de));
        let cc = c as u32;
        let mut ch = Checker::new(&st, &prog).expect("poset program");
        let v_macro: BTreeSet<u64> = (0..st.size() as u32).filter(|&x| ch.call("V", &[x, cc]).expect("V")).map(u64::from).collect();
        lines.push(line(format!("V(x, {}) agrees with decode_Gc", g.c), decoded.vertices().clone(), v_macro));
        let e_macro = macro_pairs(exec, &st, &prog, "E", |x, y| vec![x, y, cc])?;
        let e_scan: BTreeSet<(u32, u32)> = decoded.edges().iter().flat_map(|&(a, b)| [(a as u32, b as u32), (b as u32, a as u32)]).collect();
        lines.push(line(format!("E(x, y, {}) agrees with decode_Gc on all pairs", g.c), e_scan, e_macro));
    }

    for iso in &fx.expect.isolated {
        let c = p.element(&iso.c)?;
        let r = p.element(&iso.vertex)?;
        let decoded = p.decode_gc(c)?;
        lines.push(line(format!("{} is a vertex of G_{}", iso.vertex, iso.c), true, decoded.has_vertex(r as u64)));
        lines.push(line(format!("{} is isolated in G_{}", iso.vertex, iso.c), Vec::<u64>::new(), decoded.neighbors(r as u64)));
        let no_join: Vec<&str> = (0..p.size()).filter(|&s| p.incomparable(r, s) && !p.has_join(r, s)).map(|s| p.name(s)).collect();
        lines.push(line(format!("{} has a join with every incomparable element", iso.vertex), Vec::<&str>::new(), no_join));
        let double: Vec<(usize, usize)> = decoded.edges().iter().filter(|&&(a, b)| a == r as u64 || b == r as u64).map(|&(a, b)| (a as usize, b as usize)).collect();
        lines.push(line(format!("no pair with {} has two incomparable covers", iso.vertex), Vec::<(usize, usize)>::new(), double));
        let mut ch = Checker::new(&st, &prog).expect("poset program");
        lines.push(line(format!("NI({}, {}) is false", iso.vertex, iso.c), false, ch.call("NI", &[r as u32, c as u32]).expect("NI")));
    }

    for ne in &fx.expect.name_decodes {
        let f = elem(p, &ne.f)?;
        let want: BTreeSet<(u32, u32)> = ne.pairs.iter().map(|[x, y]| Ok((elem(p, x)?, elem(p, y)?))).collect::<Result<_, ProbeError>>()?;
        let by_macro = macro_pairs(exec, &st, &prog, "NameDecodes", |x, y| vec![f, x, y])?;
        lines.push(line(format!("NameDecodes({}, x, y) holds exactly on the coded pairs", ne.f), want.clone(), by_macro));
        let scan: BTreeSet<(u32, u32)> = graph_name_decodes(&p.decode_gc(f as usize)?).into_iter().map(|(x, y)| (x as u32, y as u32)).collect();
        lines.push(line(format!("label scan of G_{} finds exactly the coded pairs", ne.f), want, scan));
    }

    for ll in &fx.expect.light_labels {
        let (f, i) = (elem(p, &ll.f)?, elem(p, &ll.i)?);
        let mut want = BTreeSet::new();
        for [a, b] in &ll.pairs {
            let (a, b) = (elem(p, a)?, elem(p, b)?);
            want.extend([(a, b), (b, a)]);
        }
        let by_macro = macro_pairs(exec, &st, &prog, "LLabelPair", |x, y| vec![f, x, y, i])?;
        lines.push(line(format!("LLabelPair({}, p, q, {}) holds exactly on the coded pairs", ll.f, ll.i), want.clone(), by_macro));
        let scan: BTreeSet<(u32, u32)> = p.light_label_pairs(f as usize, i as usize).into_iter().flat_map(|(a, b)| [(a as u32, b as u32), (b as u32, a as u32)]).collect();
        lines.push(line(format!("light label scan of {} finds exactly the coded pairs", ll.f), want, scan));
    }

    for ld in &fx.expect.light_decodes {
        let [f, g, c, c2, i] = [&ld.f, &ld.g, &ld.c, &ld.c2, &ld.i].map(|s| elem(p, s));
        let (f, g, c, c2, i) = (f?, g?, c?, c2?, i?);
        let want: BTreeSet<(u32, u32)> = ld.pairs.iter().map(|[a, y]| Ok((elem(p, a)?, elem(p, y)?))).collect::<Result<_, ProbeError>>()?;
        let by_macro = macro_pairs(exec, &st, &prog, "LightDecodes", |a, y| vec![f, g, c, c2, a, y, i])?;
        lines.push(line(format!("LightDecodes({}, {}, {}, {}, a, y, {}) holds exactly on the coded pairs", ld.f, ld.g, ld.c, ld.c2, ld.i), want.clone(), by_macro));
        let scan: BTreeSet<(u32, u32)> = p
            .light_decodes(f as usize, g as usize, c as usize, c2 as usize, i as usize)
            .into_iter()
            .map(|(a, y)| (a as u32, y as u32))
            .collect();
        lines.push(line("light decode scan finds exactly the coded pairs".into(), want, scan));
    }

    Ok(FixtureReport { family: fx.family.clone(), lines })
}

/// One statement about the gadget graph evaluated three ways: on the graph
/// itself, and on its poset coding through the `V` and `NI` translations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerLine {
    pub statement: String,
    pub expected: bool,
    pub graph: bool,
    pub poset_v: bool,
    pub poset_ni: bool,
}

impl TowerLine {
    pub fn agrees(&self) -> bool {
        self.graph == self.expected && self.poset_v == self.expected && self.poset_ni == self.expected
    }
}

/// Bounded good code `QB(e_b)` for every `b <= n`, plus `Plus`/`Times` on
/// all element triples, on the gadget graph for `n` and on its poset coding
/// with the top as code. `QB(e_b)` is expected to hold exactly for `b < n`,
/// where every number up to `b` has a successor in the fragment.
pub fn tower_agreement(n: u32, exec: Exec) -> Vec<TowerLine> {
    let gadget = GadgetGraph::build(n);
    let gst = gadget.structure();
    let gprog = Program::new(graph_macros()).expect("graph macros compile");
    let coding = super::poset::poset_coding_graph(&gadget.graph());
    let pst = coding.to_structure();
    let pprog = Program::new(poset_macros()).expect("poset macros compile");
    let top = coding.top().expect("coding has a top") as u32;
    let pv = |a: u32| coding.element(&format!("v{}", gadget.element(a))).expect("vertex element") as u32;
    let mut jobs: Vec<(String, bool, &str, Vec<u32>)> = (0..=n).map(|b| (format!("QB(e{b})"), b < n, "QB", vec![b])).collect();
    for a in 0..=n {
        for b in 0..=n {
            for c in 0..=n {
                jobs.push((format!("Plus(e{a}, e{b}, e{c})"), a + b == c, "Plus", vec![a, b, c]));
                jobs.push((format!("Times(e{a}, e{b}, e{c})"), a * b == c, "Times", vec![a, b, c]));
            }
        }
    }
    exec.map_chunks(&jobs, |part| {
        let mut gc = Checker::new(&gst, &gprog).expect("graph program");
        let mut pc = Checker::new(&pst, &pprog).expect("poset program");
        part.iter()
            .map(|(statement, expected, name, args)| {
                let gargs: Vec<u32> = args.iter().map(|&a| gadget.element(a)).collect();
                let mut pargs: Vec<u32> = args.iter().map(|&a| pv(a)).collect();
                pargs.push(top);
                TowerLine {
                    statement: statement.clone(),
                    expected: *expected,
                    graph: gc.call(name, &gargs).expect("graph macro"),
                    poset_v: pc.call(&format!("Gv_{name}"), &pargs).expect("poset macro"),
                    poset_ni: pc.call(&format!("Gni_{name}"), &pargs).expect("poset macro"),
                }
            })
            .collect()
    })
}
