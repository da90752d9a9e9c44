//! `ceerlab`: construct, decode, translate, check and verify.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

use anyhow::{anyhow, bail, Context, Result};
use ceerlab_core::construction::{
    check_coding_fidelity, check_layout_tiling, check_parameter_bound, decode_layout_graph, requirement_bound, run, verify_dark_satisfaction,
    ConstructionConfig, ConstructionTrace, GeneratorFamily,
};
use ceerlab_core::graph::FiniteGraph;
use ceerlab_core::interp::{arith_macros, arith_to_graph, graph_macros, graph_to_poset, poset_macros, GadgetGraph, PosetMode, Side, VertexMode};
use ceerlab_core::kernel::{CeSet, CeerTrace, StagedCeer};
use ceerlab_core::logic::{model_check, parse_formula, FiniteStructure, Formula, MacroTable, Signature};
use ceerlab_core::names::{build_name, ladder_supply, trace_metadata, PairSet, Pointed};
use ceerlab_core::probe::{build_fixture, graph_name_decodes, hasse, probe_fixture, Fixture, FinitePoset, FAMILIES};
use ceerlab_core::verify::{run_suite, Suite};
use ceerlab_core::Exec;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ceerlab", version, about = "Experiments with ceers, graph codings and interpreted arithmetic")]
struct Cli {
    /// Run every suite on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the graph-coding construction and write its trace.
    Construct(ConstructArgs),
    /// Decode the graph coded by a construction trace or a name trace.
    Decode {
        #[arg(long)]
        trace: PathBuf,
        /// Requirement bound; defaults to the one of the trace's graph.
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        format: GraphFormat,
        /// Also run the layout, coding and dark-requirement audits.
        #[arg(long)]
        audit: bool,
    },
    /// Translate a formula one or two steps down the interpretation tower.
    Translate {
        #[arg(long, value_enum, default_value_t = Level::Arith)]
        from: Level,
        #[arg(long, value_enum, default_value_t = Level::Poset)]
        to: Level,
        #[arg(long, value_enum, default_value_t = Mode::Ni)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = SideArg::Dark)]
        side: SideArg,
        /// Name of the code parameter.
        #[arg(long, default_value = "w")]
        code: String,
        /// Name of the identity-degree parameter on the light side.
        #[arg(long, default_value = "i")]
        ident: String,
        /// Replace every macro call by its definition.
        #[arg(long)]
        expand: bool,
        formula: String,
    },
    /// Model-check a formula on a finite structure.
    Check {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        formula: String,
        /// Free-variable assignment `var=element`, repeatable.
        #[arg(long = "assign", value_name = "VAR=ELEM")]
        assign: Vec<String>,
        /// Macro table; defaults to the one matching the structure.
        #[arg(long, value_enum)]
        macros: Option<MacroArg>,
        /// Exit 1 unless the formula evaluates to this value.
        #[arg(long)]
        expect: Option<bool>,
    },
    /// Build the gadget graph interpreting arithmetic on 0..=N.
    Gadget {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        format: GraphFormat,
    },
    /// Write a packaged fixture poset.
    Fixture {
        /// One of the packaged families, or `name-label:K`.
        #[arg(long)]
        family: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Query a poset or fixture file.
    Probe {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long, value_enum)]
        op: ProbeOp,
        /// Code element for decode-gc, or label element for the name ops.
        #[arg(long)]
        at: Option<String>,
        /// Identity degree for light-labels.
        #[arg(long)]
        ident: Option<String>,
    },
    /// Run verification suites and print a deterministic report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert a graph, trace, poset or fixture file to DOT.
    ExportDot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct ConstructArgs {
    /// Graph as JSON (`{"kind":"graph",...}`) or DOT.
    #[arg(long, required_unless_present = "name_pairs", conflicts_with = "name_pairs")]
    graph: Option<PathBuf>,
    /// Build a name for these pairs `x:y,...` over a pool of ladder ceers
    /// instead of running the construction.
    #[arg(long, value_name = "PAIRS")]
    name_pairs: Option<String>,
    #[arg(long, default_value = "ladder")]
    family: String,
    /// JSON array of c.e. sets `W_0, W_1, ...`.
    #[arg(long)]
    ws: Option<PathBuf>,
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    stages: u64,
    /// Drop the dark requirements and code the graph alone.
    #[arg(long)]
    finite: bool,
    /// Quotient pair `x,y` with x even and y odd.
    #[arg(long, default_value = "0,1", value_parser = parse_pair)]
    quotient_pair: (u64, u64),
    #[arg(long, default_value_t = 8)]
    width: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Level {
    Arith,
    Graph,
    Poset,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Ni,
    V,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Dark,
    Light,
}

#[derive(Clone, Copy, ValueEnum)]
enum MacroArg {
    None,
    Arith,
    Graph,
    Poset,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProbeOp {
    Minimal,
    #[value(name = "smc_pairs", alias = "smc-pairs")]
    SmcPairs,
    #[value(name = "decode-gc", alias = "decode_gc")]
    DecodeGc,
    #[value(name = "name-decodes", alias = "name_decodes")]
    NameDecodes,
    #[value(name = "light-labels", alias = "light_labels")]
    LightLabels,
    /// Check the fixture's `expect` block.
    Audit,
}

fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once(',').ok_or("expected x,y")?;
    let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    match dispatch(cli.command, exec) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` is a verification failure.
fn dispatch(cmd: Command, exec: Exec) -> Result<bool> {
    match cmd {
        Command::Construct(a) => construct(a),
        Command::Decode { trace, bound, format, audit } => decode(&trace, bound, format, audit),
        Command::Translate { from, to, mode, side, code, ident, expand, formula } => {
            translate(from, to, mode, side, &code, &ident, expand, &formula)
        }
        Command::Check { structure, formula, assign, macros, expect } => check(&structure, &formula, &assign, macros, expect),
        Command::Gadget { n, out, format } => {
            let g = GadgetGraph::build(n);
            let text = match format {
                GraphFormat::Json => pretty(&g.to_json()),
                GraphFormat::Dot => g.graph().to_dot(),
            };
            emit(out.as_deref(), &text)?;
            eprintln!("gadget N = {n}: {} vertices, {} edges", g.vertex_count(), g.edges().len());
            Ok(true)
        }
        Command::Fixture { family, out } => {
            let fx = build_fixture(&family).map_err(|e| anyhow!("{e}; families: {}", FAMILIES.join(", ")))?;
            emit(out.as_deref(), &pretty(&fx.to_json()))?;
            Ok(true)
        }
        Command::Probe { poset, op, at, ident } => probe(&poset, op, at.as_deref(), ident.as_deref(), exec),
        Command::Verify { suite, seed, out } => {
            let report = run_suite(suite, seed, exec);
            print!("{}", report.render());
            if let Some(p) = out {
                write(&p, &pretty(&serde_json::to_value(&report)?))?;
            }
            Ok(report.passed())
        }
        Command::ExportDot { input, out } => {
            let v = read_json(&input)?;
            emit(out.as_deref(), &to_dot(&v)?)?;
            Ok(true)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_json(path: &Path) -> Result<Value> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn read_graph(path: &Path) -> Result<FiniteGraph> {
    let text = read(path)?;
    let g = if text.trim_start().starts_with('{') {
        FiniteGraph::from_json(&serde_json::from_str(&text)?)
    } else {
        FiniteGraph::from_dot(&text)
    };
    g.with_context(|| format!("graph {}", path.display()))
}

fn construct(a: ConstructArgs) -> Result<bool> {
    if let Some(spec) = &a.name_pairs {
        return construct_name(spec, a.stages as usize, a.out.as_deref());
    }
    let g = read_graph(a.graph.as_deref().expect("clap requires --graph"))?;
    let family = GeneratorFamily::parse(&a.family)?;
    let ws: Vec<CeSet> = match &a.ws {
        Some(p) => serde_json::from_value(read_json(p)?).context("--ws must be a JSON array of c.e. sets")?,
        None => Vec::new(),
    };
    let cfg = ConstructionConfig { finite_mode: a.finite, quotient_pair: a.quotient_pair, width: a.width };
    let out = run(&g, &family, &ws, cfg, a.stages as usize)?;
    emit(a.out.as_deref(), &pretty(&serde_json::to_value(&out.trace)?))?;
    let actions: usize = out.trace.dark_actions().values().sum();
    let decoded = decode_layout_graph(&out.trace, requirement_bound(&g));
    let status = match &decoded {
        Ok(d) if *d == g => "decodes to the input graph".to_string(),
        Ok(d) => format!("decodes to a different graph with edges {:?}", d.edges()),
        Err(e) => e.to_string(),
    };
    eprintln!("{} stages, {} dark actions, {status}", out.trace.records.len(), actions);
    Ok(true)
}

fn construct_name(spec: &str, stages: usize, out: Option<&Path>) -> Result<bool> {
    let pairs: Vec<(usize, usize)> = spec
        .split(',')
        .map(|p| {
            let (x, y) = p.split_once(':').ok_or_else(|| anyhow!("pair {p:?} must be x:y"))?;
            Ok((x.trim().parse()?, y.trim().parse()?))
        })
        .collect::<Result<_>>()?;
    let size = pairs.iter().map(|&(x, y)| x.max(y) + 1).max().unwrap_or(0);
    let pool = (0..size).map(|i| Pointed::new(StagedCeer::Ladder { period: 2 + i })).collect();
    let f = PairSet::new(pool, pairs)?;
    let name = build_name(&f, &mut ladder_supply(2 + size))?;
    let trace = name.trace(stages, 48 * f.len())?;
    emit(out, &pretty(&serde_json::to_value(&trace)?))?;
    eprintln!("name with {} pairs, {} columns", f.len(), name.metadata.columns.len());
    Ok(true)
}

fn decode(path: &Path, bound: Option<usize>, format: GraphFormat, audit: bool) -> Result<bool> {
    let v = read_json(path)?;
    let (graph, problems) = if v.get("records").is_some() {
        let trace: ConstructionTrace = serde_json::from_value(v).context("construction trace")?;
        let bound = bound.unwrap_or(requirement_bound(&trace.graph()?));
        let g = decode_layout_graph(&trace, bound)?;
        let mut problems = Vec::new();
        if audit {
            problems.extend(check_layout_tiling(&trace));
            problems.extend(check_coding_fidelity(&trace)?);
            problems.extend(check_parameter_bound(&trace, 5));
            if !trace.config.finite_mode {
                let rep = verify_dark_satisfaction(&trace, trace.ws.len())?;
                problems.extend(rep.violations);
            }
        }
        (g, problems)
    } else {
        let trace: CeerTrace = serde_json::from_value(v).context("ceer trace")?;
        let meta = trace_metadata(&trace)?;
        let mut problems = Vec::new();
        if audit {
            let stages = match &trace {
                CeerTrace::Staged { stages, .. } => stages.len(),
                CeerTrace::Finite { .. } => 1,
            };
            problems.extend(meta.check_columns(&trace.clone().into_ceer()?, stages.saturating_sub(1), bound.unwrap_or(48 * meta.pairs.len()))?);
        }
        (meta.decode()?, problems)
    };
    let text = match format {
        GraphFormat::Json => pretty(&graph.to_json()),
        GraphFormat::Dot => graph.to_dot(),
    };
    print!("{text}");
    for p in &problems {
        eprintln!("audit: {p}");
    }
    Ok(problems.is_empty())
}

#[allow(clippy::too_many_arguments)]
fn translate(from: Level, to: Level, mode: Mode, side: SideArg, code: &str, ident: &str, expand: bool, src: &str) -> Result<bool> {
    let f = parse_formula(src)?;
    let pmode = PosetMode {
        vertices: match mode {
            Mode::Ni => VertexMode::NonIsolated,
            Mode::V => VertexMode::All,
        },
        side: match side {
            SideArg::Dark => Side::Dark,
            SideArg::Light => Side::Light,
        },
    };
    let (out, table): (Formula, &MacroTable) = match (from, to) {
        (Level::Arith, Level::Arith) => (f, arith_macros()),
        (Level::Graph, Level::Graph) => (f, graph_macros()),
        (Level::Poset, Level::Poset) => (f, poset_macros()),
        (Level::Arith, Level::Graph) => (arith_to_graph(&f)?, graph_macros()),
        (Level::Graph, Level::Poset) => (graph_to_poset(&f, pmode, code, ident)?, poset_macros()),
        (Level::Arith, Level::Poset) => (graph_to_poset(&arith_to_graph(&f)?, pmode, code, ident)?, poset_macros()),
        _ => bail!("translation only goes down the tower: arith -> graph -> poset"),
    };
    let out = if expand { table.expand(&out)? } else { out };
    println!("{out}");
    Ok(true)
}

fn default_table(sig: Signature) -> &'static MacroTable {
    match sig {
        Signature::Arith => arith_macros(),
        Signature::Graph => graph_macros(),
        Signature::Poset => poset_macros(),
    }
}

fn check(path: &Path, src: &str, assign: &[String], macros: Option<MacroArg>, expect: Option<bool>) -> Result<bool> {
    let st = FiniteStructure::from_json(&read_json(path)?)?;
    let f = parse_formula(src)?;
    let mut env = BTreeMap::new();
    for a in assign {
        let (var, elem) = a.split_once('=').ok_or_else(|| anyhow!("assignment {a:?} must be VAR=ELEM"))?;
        env.insert(var.trim().to_string(), elem.trim().to_string());
    }
    let table = match macros {
        None => Some(default_table(st.signature())),
        Some(MacroArg::None) => None,
        Some(MacroArg::Arith) => Some(arith_macros()),
        Some(MacroArg::Graph) => Some(graph_macros()),
        Some(MacroArg::Poset) => Some(poset_macros()),
    };
    let value = model_check(&f, table, &st, &env)?;
    println!("{value}");
    Ok(expect.is_none_or(|e| e == value))
}

fn load_fixture(path: &Path) -> Result<Fixture> {
    Ok(Fixture::from_json(&read_json(path)?)?)
}

fn probe(path: &Path, op: ProbeOp, at: Option<&str>, ident: Option<&str>, exec: Exec) -> Result<bool> {
    let fx = load_fixture(path)?;
    let p = &fx.poset;
    let name = |i: usize| p.name(i).to_string();
    let element = |label: &str, given: Option<&str>, keys: &[&str]| -> Result<usize> {
        let n = match given {
            Some(n) => n.to_string(),
            None => keys
                .iter()
                .find_map(|k| fx.designated.get(*k).and_then(|v| v.first()))
                .cloned()
                .ok_or_else(|| anyhow!("--{label} is required (no designated {})", keys.join(" or ")))?,
        };
        Ok(p.element(&n)?)
    };
    let value = match op {
        ProbeOp::Minimal => json!(p.minimal_elements()?.into_iter().map(name).collect::<Vec<_>>()),
        ProbeOp::SmcPairs => json!(p
            .smc_pairs()?
            .into_iter()
            .map(|s| json!({"cover": name(s.cover), "low": [name(s.low.0), name(s.low.1)]}))
            .collect::<Vec<_>>()),
        ProbeOp::DecodeGc => {
            let c = match (at, fx.designated.contains_key("c")) {
                (None, false) => p.top().ok_or_else(|| anyhow!("--at is required: poset has no top"))?,
                _ => element("at", at, &["c"])?,
            };
            named_graph(p, &p.decode_gc(c)?)
        }
        ProbeOp::NameDecodes => {
            let f = element("at", at, &["name", "names"])?;
            let pairs = graph_name_decodes(&p.decode_gc(f)?);
            json!(pairs.into_iter().map(|(x, y)| [name(x as usize), name(y as usize)]).collect::<Vec<_>>())
        }
        ProbeOp::LightLabels => {
            let f = element("at", at, &["name", "names"])?;
            let i = element("ident", ident, &["i"])?;
            json!(p.light_label_pairs(f, i).into_iter().map(|(a, b)| [name(a), name(b)]).collect::<Vec<_>>())
        }
        ProbeOp::Audit => {
            let report = probe_fixture(&fx, exec)?;
            for l in &report.lines {
                let status = if l.passed { "PASS" } else { "FAIL" };
                if l.detail.is_empty() {
                    println!("[{status}] {}", l.check);
                } else {
                    println!("[{status}] {}: {}", l.check, l.detail);
                }
            }
            return Ok(report.passed());
        }
    };
    print!("{}", pretty(&value));
    Ok(true)
}

fn named_graph(p: &FinitePoset, g: &FiniteGraph) -> Value {
    let n = |v: &u64| p.name(*v as usize).to_string();
    json!({
        "kind": "graph",
        "verts": g.vertices().iter().map(n).collect::<Vec<_>>(),
        "edges": g.edges().iter().map(|(a, b)| [n(a), n(b)]).collect::<Vec<_>>(),
    })
}

fn to_dot(v: &Value) -> Result<String> {
    if v.get("records").is_some() {
        let trace: ConstructionTrace = serde_json::from_value(v.clone())?;
        let g = decode_layout_graph(&trace, requirement_bound(&trace.graph()?))?;
        return Ok(g.to_dot());
    }
    match v.get("kind").and_then(Value::as_str) {
        Some("staged") | Some("finite") => {
            let trace: CeerTrace = serde_json::from_value(v.clone())?;
            Ok(trace_metadata(&trace)?.decode()?.to_dot())
        }
        Some("graph") => match FiniteGraph::from_json(v) {
            Ok(g) => Ok(g.to_dot()),
            Err(_) => Ok(structure_dot(&FiniteStructure::from_json(v)?)),
        },
        Some("poset") => {
            let st = FiniteStructure::from_json(v)?;
            let p = FinitePoset::from_structure(&st)?;
            let mut out = String::from("digraph P {\n  rankdir=BT;\n");
            for name in p.names() {
                out.push_str(&format!("  \"{name}\";\n"));
            }
            for (a, b) in hasse(&p) {
                out.push_str(&format!("  \"{}\" -> \"{}\";\n", p.name(a), p.name(b)));
            }
            out.push_str("}\n");
            Ok(out)
        }
        other => bail!("cannot export {other:?} to DOT"),
    }
}

fn structure_dot(st: &FiniteStructure) -> String {
    let mut out = String::from("graph G {\n");
    for name in st.names() {
        out.push_str(&format!("  \"{name}\";\n"));
    }
    for (a, b) in st.pairs().into_iter().filter(|(a, b)| a < b) {
        out.push_str(&format!("  \"{}\" -- \"{}\";\n", st.name(a), st.name(b)));
    }
    out.push_str("}\n");
    out
}
