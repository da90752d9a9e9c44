//! Macro tables for the three signatures and the translations between them.
//!
//! Arithmetic formulas become graph formulas by `arith_to_graph`, graph
//! formulas become poset formulas in a code variable by `graph_to_poset`.
//! Every arithmetic macro has a graph counterpart of the same name, and
//! every graph macro `M` has poset counterparts `Gv_M`, `Gni_M`, `Lv_M`,
//! `Lni_M` taking the code (and, on the light side, the identity degree)
//! as trailing arguments.

use crate::logic::{Atom, Formula, MacroError, MacroTable, Signature, Var};
use std::collections::BTreeSet;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InterpError {
    #[error("{found} atom in a {expected} formula")]
    Signature { expected: Signature, found: Signature },
    #[error("variable {0} is reserved for the translation")]
    Reserved(Var),
    #[error(transparent)]
    Macro(#[from] MacroError),
}

/// Largest numeral with `Num{k}` and `Bnd{k}` macros.
pub const MAX_NUMERAL: u32 = 32;

/// Which minimal degrees below the code count as vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexMode {
    /// All minimal degrees below the code.
    All,
    /// Only those with at least one edge.
    NonIsolated,
}

/// Dark codes use minimal degrees; light codes use degrees minimal over
/// the identity degree, passed as an extra parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Dark,
    Light,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PosetMode {
    pub vertices: VertexMode,
    pub side: Side,
}

impl PosetMode {
    pub const DARK_V: PosetMode = PosetMode { vertices: VertexMode::All, side: Side::Dark };
    pub const DARK_NI: PosetMode = PosetMode { vertices: VertexMode::NonIsolated, side: Side::Dark };
    pub const LIGHT_V: PosetMode = PosetMode { vertices: VertexMode::All, side: Side::Light };
    pub const LIGHT_NI: PosetMode = PosetMode { vertices: VertexMode::NonIsolated, side: Side::Light };

    pub fn all() -> [PosetMode; 4] {
        [PosetMode::DARK_V, PosetMode::DARK_NI, PosetMode::LIGHT_V, PosetMode::LIGHT_NI]
    }

    pub fn prefix(self) -> &'static str {
        match (self.side, self.vertices) {
            (Side::Dark, VertexMode::All) => "Gv_",
            (Side::Dark, VertexMode::NonIsolated) => "Gni_",
            (Side::Light, VertexMode::All) => "Lv_",
            (Side::Light, VertexMode::NonIsolated) => "Lni_",
        }
    }

    fn extra<'a>(self, w: &'a str, i: &'a str) -> Vec<&'a str> {
        match self.side {
            Side::Dark => vec![w],
            Side::Light => vec![w, i],
        }
    }

    fn vertex(self, x: &str, w: &str, i: &str) -> Formula {
        let name = match (self.side, self.vertices) {
            (Side::Dark, VertexMode::All) => "V",
            (Side::Dark, VertexMode::NonIsolated) => "NI",
            (Side::Light, VertexMode::All) => "LV",
            (Side::Light, VertexMode::NonIsolated) => "LNI",
        };
        let mut args = vec![x];
        args.extend(self.extra(w, i));
        Formula::call(name, &args)
    }

    fn edge(self, x: &str, y: &str, w: &str, i: &str) -> Formula {
        let name = if self.side == Side::Dark { "E" } else { "LE" };
        let mut args = vec![x, y];
        args.extend(self.extra(w, i));
        Formula::call(name, &args)
    }
}

fn check_atoms(f: &Formula, expected: Signature) -> Result<(), InterpError> {
    match f.atom_signatures().into_iter().find(|s| *s != expected) {
        Some(found) => Err(InterpError::Signature { expected, found }),
        None => Ok(()),
    }
}

/// `σ ↦ σ°`: `+`/`*` atoms become `Plus`/`Times`, quantifiers are
/// relativized to `U`, connectives and macro calls are kept.
pub fn arith_to_graph(f: &Formula) -> Result<Formula, InterpError> {
    check_atoms(f, Signature::Arith)?;
    Ok(to_graph(f))
}

fn to_graph(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Call(..) => f.clone(),
        Formula::Atom(Atom::Add(x, y, z)) => Formula::call("Plus", &[x, y, z]),
        Formula::Atom(Atom::Mul(x, y, z)) => Formula::call("Times", &[x, y, z]),
        Formula::Atom(_) => f.clone(),
        Formula::Not(a) => Formula::not(to_graph(a)),
        Formula::And(a, b) => Formula::and(to_graph(a), to_graph(b)),
        Formula::Or(a, b) => Formula::or(to_graph(a), to_graph(b)),
        Formula::Implies(a, b) => Formula::implies(to_graph(a), to_graph(b)),
        Formula::Forall(x, a) => Formula::forall(x, Formula::implies(Formula::call("U", &[x]), to_graph(a))),
        Formula::Exists(x, a) => Formula::exists(x, Formula::and(Formula::call("U", &[x]), to_graph(a))),
    }
}

/// `σ ↦ σ~(w)`: quantifiers are relativized to the vertices of the graph
/// coded by `w`, edges become the coded edge relation, and graph macro
/// calls become calls of their translated counterparts.
pub fn graph_to_poset(f: &Formula, mode: PosetMode, w: &str, i: &str) -> Result<Formula, InterpError> {
    check_atoms(f, Signature::Graph)?;
    let mut names = BTreeSet::new();
    f.walk(&mut |g| match g {
        Formula::Atom(a) => names.extend(a.vars().into_iter().cloned()),
        Formula::Call(_, args) => names.extend(args.iter().cloned()),
        Formula::Forall(x, _) | Formula::Exists(x, _) => {
            names.insert(x.clone());
        }
        _ => {}
    });
    for r in mode.extra(w, i) {
        if names.contains(r) {
            return Err(InterpError::Reserved(r.to_string()));
        }
    }
    Ok(to_poset(f, mode, w, i))
}

fn to_poset(f: &Formula, mode: PosetMode, w: &str, i: &str) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(Atom::Edge(x, y)) => mode.edge(x, y, w, i),
        Formula::Atom(_) => f.clone(),
        Formula::Call(n, args) => {
            let mut a: Vec<&str> = args.iter().map(String::as_str).collect();
            a.extend(mode.extra(w, i));
            Formula::call(&format!("{}{n}", mode.prefix()), &a)
        }
        Formula::Not(a) => Formula::not(to_poset(a, mode, w, i)),
        Formula::And(a, b) => Formula::and(to_poset(a, mode, w, i), to_poset(b, mode, w, i)),
        Formula::Or(a, b) => Formula::or(to_poset(a, mode, w, i), to_poset(b, mode, w, i)),
        Formula::Implies(a, b) => Formula::implies(to_poset(a, mode, w, i), to_poset(b, mode, w, i)),
        Formula::Forall(x, a) => Formula::forall(x, Formula::implies(mode.vertex(x, w, i), to_poset(a, mode, w, i))),
        Formula::Exists(x, a) => Formula::exists(x, Formula::and(mode.vertex(x, w, i), to_poset(a, mode, w, i))),
    }
}

fn def(t: &mut MacroTable, name: &str, params: &[&str], body: &str) {
    t.define_text(name, params, body).unwrap_or_else(|e| panic!("built-in macro {name}: {e}"));
}

/// The axioms of Robinson's Q in relational form, with totality and
/// functionality of the defined operations spelled out.
pub fn q_axioms() -> Vec<(&'static str, &'static str)> {
    vec![
        ("zero exists", "exists z. Zero(z)"),
        ("+ total", "forall x. forall y. exists z. x + y = z"),
        ("+ functional", "forall x. forall y. forall z. forall u. x + y = z & x + y = u -> z = u"),
        ("* total", "forall x. forall y. exists z. x * y = z"),
        ("* functional", "forall x. forall y. forall z. forall u. x * y = z & x * y = u -> z = u"),
        ("S total", "forall x. exists y. Succ(x, y)"),
        ("S functional", "forall x. forall y. forall u. Succ(x, y) & Succ(x, u) -> y = u"),
        ("S x != 0", "forall x. forall y. Succ(x, y) -> !Zero(y)"),
        ("S injective", "forall x. forall y. forall u. Succ(x, u) & Succ(y, u) -> x = y"),
        ("predecessor", "forall x. !Zero(x) -> exists y. Succ(y, x)"),
        ("x + 0 = x", "forall x. forall z. Zero(z) -> x + z = x"),
        ("x + S y = S (x + y)", "forall x. forall y. forall u. forall v. forall t. Succ(y, u) & x + y = v & Succ(v, t) -> x + u = t"),
        ("x * 0 = 0", "forall x. forall z. Zero(z) -> x * z = z"),
        ("x * S y = x * y + x", "forall x. forall y. forall u. forall v. forall t. Succ(y, u) & x * y = v & v + x = t -> x * u = t"),
    ]
}

/// Relativize every universal quantifier to `Le(_, b)`.
pub fn bound_universals(f: &Formula, b: &str) -> Formula {
    match f {
        Formula::Forall(x, a) => Formula::forall(x, Formula::implies(Formula::call("Le", &[x, b]), bound_universals(a, b))),
        Formula::Exists(x, a) => Formula::exists(x, bound_universals(a, b)),
        Formula::Not(a) => Formula::not(bound_universals(a, b)),
        Formula::And(a, c) => Formula::and(bound_universals(a, b), bound_universals(c, b)),
        Formula::Or(a, c) => Formula::or(bound_universals(a, b), bound_universals(c, b)),
        Formula::Implies(a, c) => Formula::implies(bound_universals(a, b), bound_universals(c, b)),
        _ => f.clone(),
    }
}

fn build_arith() -> MacroTable {
    let mut t = MacroTable::new(Signature::Arith);
    def(&mut t, "Zero", &["x"], "x + x = x");
    def(&mut t, "Le", &["x", "y"], "exists w. x + w = y");
    def(&mut t, "Lt", &["x", "y"], "Le(x, y) & x != y");
    def(&mut t, "Succ", &["x", "y"], "Lt(x, y) & forall z. Lt(x, z) -> Le(y, z)");
    def(&mut t, "Num0", &["x"], "Zero(x)");
    for k in 1..=MAX_NUMERAL {
        def(&mut t, &format!("Num{k}"), &["x"], &format!("exists y. Num{}(y) & Succ(y, x)", k - 1));
    }
    for k in 0..=MAX_NUMERAL {
        def(&mut t, &format!("Bnd{k}"), &["x"], &format!("exists b. Num{k}(b) & Le(x, b)"));
    }
    let axioms: Vec<Formula> = q_axioms().iter().map(|(_, s)| s.parse().expect("axiom syntax")).collect();
    let bounded = Formula::and_all(axioms.iter().map(|a| bound_universals(a, "b")));
    t.define("Q", &[], Formula::and_all(axioms)).expect("Q");
    t.define("QB", &["b"], bounded).expect("QB");
    t
}

fn build_graph() -> MacroTable {
    let mut t = MacroTable::new(Signature::Graph);
    def(&mut t, "Leaf", &["x"], "exists y. E(x, y) & forall z. E(x, z) -> z = y");
    def(&mut t, "Hub", &["x"], "exists y. E(x, y) & Leaf(y)");
    def(&mut t, "Mid", &["x"], "!Leaf(x) & !Hub(x) & exists y. E(x, y) & exists z. E(x, z) & y != z & forall u. E(x, u) -> u = y | u = z");
    def(&mut t, "U", &["x"], "!Leaf(x) & !Hub(x) & !Mid(x) & (exists y. E(x, y)) & forall y. E(x, y) -> Mid(y)");
    def(
        &mut t,
        "PlusHub",
        &["h"],
        "exists l1. E(h, l1) & Leaf(l1) & exists l2. E(h, l2) & Leaf(l2) & l1 != l2 & forall l. E(h, l) -> !Leaf(l) | l = l1 | l = l2",
    );
    def(
        &mut t,
        "TimesHub",
        &["h"],
        "exists l1. E(h, l1) & Leaf(l1) & exists l2. E(h, l2) & Leaf(l2) & l1 != l2 & exists l3. E(h, l3) & Leaf(l3) & l3 != l1 & l3 != l2 \
         & forall l. E(h, l) -> !Leaf(l) | l = l1 | l = l2 | l = l3",
    );
    def(&mut t, "Arg1", &["h", "x"], "exists m. E(h, m) & Mid(m) & E(m, x) & U(x)");
    def(&mut t, "Arg2", &["h", "x"], "exists m1. E(h, m1) & Mid(m1) & exists m2. E(m1, m2) & Mid(m2) & E(m2, x) & U(x)");
    def(
        &mut t,
        "Arg3",
        &["h", "x"],
        "exists m1. E(h, m1) & Mid(m1) & exists m2. E(m1, m2) & Mid(m2) & exists m3. E(m2, m3) & Mid(m3) & E(m3, x) & U(x)",
    );
    // Anchored at the first argument; equivalent to
    // exists h. PlusHub(h) & Arg1(h, x) & Arg2(h, y) & Arg3(h, z),
    // since each Arg_k already demands U of its endpoint.
    def(
        &mut t,
        "Plus",
        &["x", "y", "z"],
        "U(x) & U(y) & U(z) & exists m. E(x, m) & Mid(m) & exists h. E(m, h) & PlusHub(h) & Arg1(h, x) & Arg2(h, y) & Arg3(h, z)",
    );
    def(
        &mut t,
        "Times",
        &["x", "y", "z"],
        "U(x) & U(y) & U(z) & exists m. E(x, m) & Mid(m) & exists h. E(m, h) & TimesHub(h) & Arg1(h, x) & Arg2(h, y) & Arg3(h, z)",
    );
    for m in arith_macros().iter() {
        let params: Vec<&str> = m.params.iter().map(String::as_str).collect();
        let guard = Formula::and_all(params.iter().map(|p| Formula::call("U", &[p])));
        let body = to_graph(&m.body);
        let body = if params.is_empty() { body } else { Formula::and(guard, body) };
        t.define(&m.name, &params, body).expect("translated arithmetic macro");
    }
    t
}

fn fresh_param(params: &[&str], body: &Formula, base: &str) -> String {
    let mut used: BTreeSet<String> = params.iter().map(|p| p.to_string()).collect();
    body.walk(&mut |g| match g {
        Formula::Atom(a) => used.extend(a.vars().into_iter().cloned()),
        Formula::Call(_, args) => used.extend(args.iter().cloned()),
        Formula::Forall(x, _) | Formula::Exists(x, _) => {
            used.insert(x.clone());
        }
        _ => {}
    });
    let mut cand = base.to_string();
    let mut k = 1;
    while used.contains(&cand) {
        cand = format!("{base}{k}");
        k += 1;
    }
    cand
}

const POSET_BASE: &[(&str, &[&str], &str)] = &[
    ("Bot", &["x"], "forall y. x <= y"),
    ("Lt", &["x", "y"], "x <= y & x != y"),
    ("Incomp", &["x", "y"], "!(x <= y) & !(y <= x)"),
    ("Minimal", &["x"], "!Bot(x) & forall z. z <= x -> z = x | Bot(z)"),
    ("SMC", &["a", "d", "e"], "Incomp(d, e) & Lt(d, a) & Lt(e, a) & forall z. z <= a -> z = a | z <= d | z <= e"),
    ("V", &["x", "c"], "x <= c & Minimal(x)"),
    (
        "E",
        &["x", "y", "c"],
        "V(x, c) & V(y, c) & exists a. x <= a & a <= c & SMC(a, x, y) & exists b. x <= b & b <= c & SMC(b, x, y) & Incomp(a, b)",
    ),
    ("NI", &["x", "c"], "V(x, c) & exists y. E(x, y, c)"),
    ("LMin", &["x", "i"], "i <= x & i != x & forall z. i <= z -> z = i | z = x | !(z <= x)"),
    ("LV", &["x", "c", "i"], "x <= c & LMin(x, i)"),
    ("LSMC", &["a", "d", "e", "i"], "Incomp(d, e) & Lt(d, a) & Lt(e, a) & forall z. i <= z -> !(z <= a) | z = a | z = d | z = e | z = i"),
    (
        "LE",
        &["x", "y", "c", "i"],
        "LV(x, c, i) & LV(y, c, i) & exists a. x <= a & a <= c & LSMC(a, x, y, i) & exists b. x <= b & b <= c & LSMC(b, x, y, i) & Incomp(a, b)",
    ),
    ("LNI", &["x", "c", "i"], "LV(x, c, i) & exists y. LE(x, y, c, i)"),
    ("LCover", &["y", "x", "i"], "i <= x & Lt(x, y) & forall z. i <= z -> !(z <= y) | z = y | z <= x"),
];

const POSET_NAMES: &[(&str, &[&str], &str)] = &[
    (
        "Label",
        &["x", "y", "f"],
        "exists a. E(x, a, f) & exists d. E(a, d, f) & E(d, y, f) & exists b. E(a, b, f) & exists cc. E(b, cc, f) & E(cc, a, f) \
         & a != b & a != cc & a != d & b != cc & b != d & cc != d \
         & a != x & a != y & b != x & b != y & cc != x & cc != y & d != x & d != y",
    ),
    ("NameDecodes", &["f", "x", "y"], "Label(x, y, f) & forall y2. Label(x, y2, f) -> y2 = y"),
    ("InInterval", &["x", "c", "d"], "Gv_U(x, c) & Gv_Le(x, d, c) & exists z. Gv_Zero(z, c) & Gv_Le(z, x, c)"),
    (
        "NameBij",
        &["f", "c", "d", "c2", "d2"],
        "(forall x. InInterval(x, c, d) -> exists y. NameDecodes(f, x, y) & InInterval(y, c2, d2)) \
         & (forall y. InInterval(y, c2, d2) -> exists x. InInterval(x, c, d) & NameDecodes(f, x, y)) \
         & (forall x1. InInterval(x1, c, d) -> forall x2. InInterval(x2, c, d) -> forall y1. NameDecodes(f, x1, y1) \
            -> forall y2. NameDecodes(f, x2, y2) -> (x1 = x2 -> y1 = y2) & (y1 = y2 -> x1 = x2) \
            & (Gv_Le(x1, x2, c) -> Gv_Le(y1, y2, c2)) & (Gv_Le(y1, y2, c2) -> Gv_Le(x1, x2, c)))",
    ),
    ("Good", &["c"], "Gv_Q(c)"),
    (
        "Sim",
        &["c", "d", "c2", "d2"],
        "c = c2 & d = d2 | Good(c) & Good(c2) & Gv_U(d, c) & Gv_U(d2, c2) & exists f. NameBij(f, c, d, c2, d2)",
    ),
    ("NMember", &["c", "d"], "Good(c) & Gv_U(d, c) & forall c2. Good(c2) -> exists d2. Sim(c, d, c2, d2)"),
    (
        "NPlus",
        &["c", "d", "c1", "d1", "c2", "d2"],
        "exists h. Good(h) & exists e. Sim(c, d, h, e) & exists e1. Sim(c1, d1, h, e1) & exists e2. Sim(c2, d2, h, e2) & Gv_Plus(e, e1, e2, h)",
    ),
    (
        "NTimes",
        &["c", "d", "c1", "d1", "c2", "d2"],
        "exists h. Good(h) & exists e. Sim(c, d, h, e) & exists e1. Sim(c1, d1, h, e1) & exists e2. Sim(c2, d2, h, e2) & Gv_Times(e, e1, e2, h)",
    ),
    (
        "LLabelPair",
        &["f", "p", "q", "i"],
        "LV(p, f, i) & LV(q, f, i) & p != q & exists x. p <= x & q <= x & Lt(x, f) \
         & (forall m. m <= x -> !LMin(m, i) | m = p | m = q) \
         & exists y. x <= y & LCover(y, x, i) & exists z. y <= z & z <= f & LCover(z, y, i)",
    ),
    (
        "LightDecodes",
        &["f", "g", "c", "c2", "a", "y", "i"],
        "exists b. LLabelPair(f, a, b, i) & !(b <= c) & !(b <= c2) & LLabelPair(g, b, y, i)",
    ),
    ("LInInterval", &["x", "c", "d", "i"], "Lv_U(x, c, i) & Lv_Le(x, d, c, i) & exists z. Lv_Zero(z, c, i) & Lv_Le(z, x, c, i)"),
    (
        "LNameBij",
        &["f", "g", "c", "d", "c2", "d2", "i"],
        "(forall x. LInInterval(x, c, d, i) -> exists y. LightDecodes(f, g, c, c2, x, y, i) & LInInterval(y, c2, d2, i)) \
         & (forall x. LInInterval(x, c, d, i) -> forall y1. LightDecodes(f, g, c, c2, x, y1, i) \
            -> forall y2. LightDecodes(f, g, c, c2, x, y2, i) -> y1 = y2) \
         & (forall y. LInInterval(y, c2, d2, i) -> exists x. LInInterval(x, c, d, i) & LightDecodes(f, g, c, c2, x, y, i)) \
         & (forall x1. LInInterval(x1, c, d, i) -> forall x2. LInInterval(x2, c, d, i) -> forall y1. LightDecodes(f, g, c, c2, x1, y1, i) \
            -> forall y2. LightDecodes(f, g, c, c2, x2, y2, i) -> (y1 = y2 -> x1 = x2) \
            & (Lv_Le(x1, x2, c, i) -> Lv_Le(y1, y2, c2, i)) & (Lv_Le(y1, y2, c2, i) -> Lv_Le(x1, x2, c, i)))",
    ),
    ("LGood", &["c", "i"], "Lv_Q(c, i)"),
    (
        "LSim",
        &["c", "d", "c2", "d2", "i"],
        "c = c2 & d = d2 | LGood(c, i) & LGood(c2, i) & Lv_U(d, c, i) & Lv_U(d2, c2, i) & exists f. exists g. LNameBij(f, g, c, d, c2, d2, i)",
    ),
    ("LNMember", &["c", "d", "i"], "LGood(c, i) & Lv_U(d, c, i) & forall c2. LGood(c2, i) -> exists d2. LSim(c, d, c2, d2, i)"),
    (
        "LNPlus",
        &["c", "d", "c1", "d1", "c2", "d2", "i"],
        "exists h. LGood(h, i) & exists e. LSim(c, d, h, e, i) & exists e1. LSim(c1, d1, h, e1, i) & exists e2. LSim(c2, d2, h, e2, i) \
         & Lv_Plus(e, e1, e2, h, i)",
    ),
    (
        "LNTimes",
        &["c", "d", "c1", "d1", "c2", "d2", "i"],
        "exists h. LGood(h, i) & exists e. LSim(c, d, h, e, i) & exists e1. LSim(c1, d1, h, e1, i) & exists e2. LSim(c2, d2, h, e2, i) \
         & Lv_Times(e, e1, e2, h, i)",
    ),
];

fn build_poset() -> MacroTable {
    let mut t = MacroTable::new(Signature::Poset);
    for (name, params, body) in POSET_BASE {
        def(&mut t, name, params, body);
    }
    for mode in PosetMode::all() {
        for m in graph_macros().iter() {
            let params: Vec<&str> = m.params.iter().map(String::as_str).collect();
            let w = fresh_param(&params, &m.body, "w");
            let i = fresh_param(&params, &m.body, "i");
            let body = to_poset(&m.body, mode, &w, &i);
            let guard = Formula::and_all(params.iter().map(|p| mode.vertex(p, &w, &i)));
            let body = if params.is_empty() { body } else { Formula::and(guard, body) };
            let mut all = params.clone();
            all.extend(mode.extra(&w, &i));
            t.define(&format!("{}{}", mode.prefix(), m.name), &all, body).expect("translated graph macro");
        }
    }
    for (name, params, body) in POSET_NAMES {
        def(&mut t, name, params, body);
    }
    t
}

pub fn arith_macros() -> &'static MacroTable {
    static T: OnceLock<MacroTable> = OnceLock::new();
    T.get_or_init(build_arith)
}

/// Gadget recognizers plus the translations of every arithmetic macro.
pub fn graph_macros() -> &'static MacroTable {
    static T: OnceLock<MacroTable> = OnceLock::new();
    T.get_or_init(build_graph)
}

/// Order-theoretic macros, translated graph macros for every mode, and the
/// name, label and number-system formulas.
pub fn poset_macros() -> &'static MacroTable {
    static T: OnceLock<MacroTable> = OnceLock::new();
    T.get_or_init(build_poset)
}

/// The good-code condition on `w` at macro level; `poset_macros().expand`
/// gives the one-free-variable order formula.
pub fn good_code_formula(w: &str) -> Formula {
    Formula::call("Good", &[w])
}

/// The bounded relaxation: universal quantifiers range over numbers at
/// most `b`, existential ones over the whole coded universe.
pub fn bounded_good_code_formula(b: &str, w: &str) -> Formula {
    Formula::call("Gv_QB", &[b, w])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn tables_build() {
        assert!(arith_macros().contains("Succ"));
        assert!(graph_macros().contains("Plus") && graph_macros().contains("Num20"));
        for name in ["Gv_Plus", "Gni_U", "Lv_Q", "Lni_Times", "NameDecodes", "LightDecodes", "NPlus", "LNTimes"] {
            assert!(poset_macros().contains(name), "{name}");
        }
    }

    #[test]
    fn arith_translation_rules() {
        let f = p("exists x. x + x = x");
        assert_eq!(arith_to_graph(&f).unwrap(), p("exists x. U(x) & Plus(x, x, x)"));
        let g = p("forall x. exists y. x * y = x");
        assert_eq!(arith_to_graph(&g).unwrap(), p("forall x. U(x) -> (exists y. U(y) & Times(x, y, x))"));
        assert!(matches!(arith_to_graph(&p("x <= y")), Err(InterpError::Signature { .. })));
    }

    #[test]
    fn translations_are_compositional() {
        let s = p("exists x. x + x = x");
        let t = p("forall y. Zero(y) | y * y = y");
        assert_eq!(arith_to_graph(&Formula::not(s.clone())).unwrap(), Formula::not(arith_to_graph(&s).unwrap()));
        assert_eq!(
            arith_to_graph(&Formula::and(s.clone(), t.clone())).unwrap(),
            Formula::and(arith_to_graph(&s).unwrap(), arith_to_graph(&t).unwrap())
        );
        let gs = arith_to_graph(&s).unwrap();
        let gt = arith_to_graph(&t).unwrap();
        for mode in PosetMode::all() {
            let tr = |f: &Formula| graph_to_poset(f, mode, "w", "i").unwrap();
            assert_eq!(tr(&Formula::not(gs.clone())), Formula::not(tr(&gs)));
            assert_eq!(tr(&Formula::or(gs.clone(), gt.clone())), Formula::or(tr(&gs), tr(&gt)));
        }
    }

    #[test]
    fn graph_translation_shape() {
        let f = p("exists x. exists y. E(x, y)");
        let ni = graph_to_poset(&f, PosetMode::DARK_NI, "w", "i").unwrap();
        assert_eq!(ni, p("exists x. NI(x, w) & (exists y. NI(y, w) & E(x, y, w))"));
        let lv = graph_to_poset(&p("forall x. U(x)"), PosetMode::LIGHT_V, "w", "i").unwrap();
        assert_eq!(lv, p("forall x. LV(x, w, i) -> Lv_U(x, w, i)"));
        assert_eq!(graph_to_poset(&p("exists w. E(w, w)"), PosetMode::DARK_V, "w", "i"), Err(InterpError::Reserved("w".into())));
        assert!(graph_to_poset(&p("x <= y"), PosetMode::DARK_V, "w", "i").is_err());
    }

    #[test]
    fn expansion_is_a_fixpoint() {
        let t = poset_macros();
        for name in ["E", "NI", "LE", "Gv_Zero", "Label", "NameDecodes", "LLabelPair"] {
            let once = t.expand_macro(name).unwrap();
            assert_eq!(t.expand(&once).unwrap(), once, "{name}");
            assert_eq!(t.expand_macro(name).unwrap(), once, "{name}");
        }
    }

    #[test]
    fn good_code_is_closed_except_for_code() {
        let t = poset_macros();
        let g = good_code_formula("w");
        assert_eq!(g.free_vars(), ["w".to_string()].into());
        t.validate("good", &g).unwrap();
        let size = t.expanded_size(&g);
        let full = t.expand(&g).unwrap();
        assert_eq!(full.size() as u128, size);
        assert_eq!(full.free_vars(), ["w".to_string()].into());
        assert!(full.calls().is_empty());
        let small = t.expand(&Formula::call("Gv_Zero", &["w0", "w"])).unwrap();
        assert_eq!(small.free_vars(), ["w".to_string(), "w0".to_string()].into());
        assert_eq!(small.atom_signatures(), [Signature::Poset].into());
    }
}
