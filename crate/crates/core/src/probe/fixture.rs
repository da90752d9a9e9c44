//! Packaged fixture posets. Each node stands for one degree; the order is
//! exactly the cover, join and name relations the family is meant to exhibit.

use super::poset::{FinitePoset, ProbeError};
use crate::construction::{self, ConstructionConfig, Descriptor, ColumnContent, GeneratorFamily};
use crate::graph::FiniteGraph;
use crate::logic::FiniteStructure;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};

pub const FAMILIES: [&str; 8] = ["oplus-ismc", "second-ismc", "single-cover", "double-cover", "z-dark-join", "name-label", "light-triple", "p3-layout"];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmcExpect {
    pub cover: String,
    /// Unordered.
    pub low: [String; 2],
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphExpect {
    pub c: String,
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

/// `vertex` is isolated in `G_c` and has a join with every element
/// incomparable to it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolatedExpect {
    pub c: String,
    pub vertex: String,
}

/// Exactly `pairs` satisfy `NameDecodes(f, x, y)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NameExpect {
    pub f: String,
    pub pairs: Vec<[String; 2]>,
}

/// Exactly `pairs`, in both orders, satisfy `LLabelPair(f, p, q, i)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LightLabelExpect {
    pub f: String,
    pub i: String,
    pub pairs: Vec<[String; 2]>,
}

/// Exactly `pairs` satisfy `LightDecodes(f, g, c, c2, a, y, i)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LightDecodeExpect {
    pub f: String,
    pub g: String,
    pub c: String,
    pub c2: String,
    pub i: String,
    pub pairs: Vec<[String; 2]>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expect {
    /// Complete list of strongly minimal covers, when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smc: Option<Vec<SmcExpect>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub graphs: Vec<GraphExpect>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub isolated: Vec<IsolatedExpect>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub name_decodes: Vec<NameExpect>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub light_labels: Vec<LightLabelExpect>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub light_decodes: Vec<LightDecodeExpect>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub family: String,
    pub poset: FinitePoset,
    pub designated: BTreeMap<String, Vec<String>>,
    pub expect: Expect,
}

impl Fixture {
    /// Poset JSON plus `family`, `designated` and `expect`. The order is
    /// written as its covering pairs.
    pub fn to_json(&self) -> Value {
        let p = &self.poset;
        let covers: Vec<[&str; 2]> = hasse(p).into_iter().map(|(a, b)| [p.name(a), p.name(b)]).collect();
        json!({
            "kind": "poset",
            "family": self.family,
            "elems": p.names(),
            "leq": covers,
            "designated": self.designated,
            "expect": self.expect,
        })
    }

    pub fn from_json(v: &Value) -> Result<Fixture, ProbeError> {
        let st = FiniteStructure::from_json(v)?;
        let poset = FinitePoset::from_structure(&st)?;
        let field = |k: &str| v.get(k).cloned().unwrap_or(Value::Null);
        let family = field("family").as_str().unwrap_or("custom").to_string();
        let designated: BTreeMap<String, Vec<String>> = match field("designated") {
            Value::Null => BTreeMap::new(),
            d => serde_json::from_value(d).map_err(|e| ProbeError::Invalid(format!("designated: {e}")))?,
        };
        let expect: Expect = match field("expect") {
            Value::Null => Expect::default(),
            e => serde_json::from_value(e).map_err(|e| ProbeError::Invalid(format!("expect: {e}")))?,
        };
        let fx = Fixture { family, poset, designated, expect };
        fx.validate()?;
        Ok(fx)
    }

    /// Every designated or expected element name exists in the poset.
    pub fn validate(&self) -> Result<(), ProbeError> {
        let mut names: Vec<&str> = self.designated.values().flatten().map(String::as_str).collect();
        let e = &self.expect;
        for s in e.smc.iter().flatten() {
            names.push(&s.cover);
            names.extend(s.low.iter().map(String::as_str));
        }
        for g in &e.graphs {
            names.push(&g.c);
            names.extend(g.vertices.iter().map(String::as_str));
            names.extend(g.edges.iter().flatten().map(String::as_str));
        }
        for iso in &e.isolated {
            names.extend([iso.c.as_str(), iso.vertex.as_str()]);
        }
        for n in &e.name_decodes {
            names.push(&n.f);
            names.extend(n.pairs.iter().flatten().map(String::as_str));
        }
        for l in &e.light_labels {
            names.extend([l.f.as_str(), l.i.as_str()]);
            names.extend(l.pairs.iter().flatten().map(String::as_str));
        }
        for l in &e.light_decodes {
            names.extend([l.f.as_str(), l.g.as_str(), l.c.as_str(), l.c2.as_str(), l.i.as_str()]);
            names.extend(l.pairs.iter().flatten().map(String::as_str));
        }
        for n in names {
            self.poset.element(n)?;
        }
        Ok(())
    }
}

/// Covering pairs `a ⋖ b`.
pub fn hasse(p: &FinitePoset) -> Vec<(usize, usize)> {
    let n = p.size();
    p.pairs()
        .into_iter()
        .filter(|&(a, b)| a != b && !(0..n).any(|z| p.lt(a, z) && p.lt(z, b)))
        .collect()
}

#[derive(Default)]
struct Builder {
    names: Vec<String>,
    rel: Vec<(String, String)>,
    designated: BTreeMap<String, Vec<String>>,
}

impl Builder {
    fn add(&mut self, name: &str, below: &[&str]) {
        self.names.push(name.to_string());
        self.rel.extend(below.iter().map(|b| (b.to_string(), name.to_string())));
    }

    fn mark(&mut self, role: &str, names: &[&str]) {
        self.designated.entry(role.to_string()).or_default().extend(names.iter().map(|s| s.to_string()));
    }

    fn finish(self, family: &str, expect: Expect) -> Result<Fixture, ProbeError> {
        let names: Vec<&str> = self.names.iter().map(String::as_str).collect();
        let rel: Vec<(&str, &str)> = self.rel.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let fx = Fixture {
            family: family.to_string(),
            poset: FinitePoset::from_named(&names, &rel)?,
            designated: self.designated,
            expect,
        };
        fx.validate()?;
        Ok(fx)
    }
}

fn s(x: &str) -> String {
    x.to_string()
}

fn pair(a: &str, b: &str) -> [String; 2] {
    [s(a), s(b)]
}

fn smc(cover: &str, d: &str, e: &str) -> SmcExpect {
    SmcExpect { cover: s(cover), low: pair(d, e) }
}

fn graph(c: &str, vertices: &[&str], edges: &[(&str, &str)]) -> GraphExpect {
    GraphExpect {
        c: s(c),
        vertices: vertices.iter().map(|v| s(v)).collect(),
        edges: edges.iter().map(|&(a, b)| pair(a, b)).collect(),
    }
}

/// `bot` below two minimal elements `r1`, `r2`.
fn two_minimal() -> Builder {
    let mut b = Builder::default();
    b.add("bot", &[]);
    b.add("r1", &["bot"]);
    b.add("r2", &["bot"]);
    b.mark("bottom", &["bot"]);
    b.mark("minimal", &["r1", "r2"]);
    b
}

fn oplus_ismc() -> Result<Fixture, ProbeError> {
    let mut b = two_minimal();
    b.add("j", &["r1", "r2"]);
    b.mark("c", &["j"]);
    b.finish(
        "oplus-ismc",
        Expect {
            smc: Some(vec![smc("j", "r1", "r2")]),
            graphs: vec![graph("j", &["r1", "r2"], &[])],
            ..Expect::default()
        },
    )
}

fn second_ismc() -> Result<Fixture, ProbeError> {
    let mut b = two_minimal();
    b.add("j", &["r1", "r2"]);
    b.add("q", &["r1", "r2"]);
    b.add("t", &["j", "q"]);
    b.mark("c", &["t"]);
    b.mark("covers", &["j", "q"]);
    b.finish(
        "second-ismc",
        Expect {
            smc: Some(vec![smc("j", "r1", "r2"), smc("q", "r1", "r2"), smc("t", "j", "q")]),
            graphs: vec![graph("t", &["r1", "r2"], &[("r1", "r2")]), graph("j", &["r1", "r2"], &[]), graph("q", &["r1", "r2"], &[])],
            ..Expect::default()
        },
    )
}

fn single_cover() -> Result<Fixture, ProbeError> {
    let mut b = two_minimal();
    b.add("j", &["r1", "r2"]);
    b.add("t", &["j"]);
    b.mark("c", &["t"]);
    b.finish(
        "single-cover",
        Expect {
            smc: Some(vec![smc("j", "r1", "r2")]),
            graphs: vec![graph("t", &["r1", "r2"], &[])],
            ..Expect::default()
        },
    )
}

fn double_cover() -> Result<Fixture, ProbeError> {
    let mut b = two_minimal();
    b.add("r3", &["bot"]);
    b.add("a", &["r1", "r2"]);
    b.add("b", &["r1", "r2"]);
    b.add("t", &["a", "b", "r3"]);
    b.mark("minimal", &["r3"]);
    b.mark("c", &["t"]);
    b.mark("covers", &["a", "b"]);
    b.finish(
        "double-cover",
        Expect {
            smc: Some(vec![smc("a", "r1", "r2"), smc("b", "r1", "r2")]),
            graphs: vec![graph("t", &["r1", "r2", "r3"], &[("r1", "r2")])],
            ..Expect::default()
        },
    )
}

/// `r` has a least upper bound with every element incomparable to it, so
/// each pair `r, s` has a single strongly minimal cover and `r` is
/// isolated, while `s1`, `s2` keep their two incomparable covers.
fn z_dark_join() -> Result<Fixture, ProbeError> {
    let mut b = Builder::default();
    b.add("bot", &[]);
    for m in ["r", "s1", "s2"] {
        b.add(m, &["bot"]);
    }
    b.add("j1", &["r", "s1"]);
    b.add("j2", &["r", "s2"]);
    b.add("u1", &["j1"]);
    b.add("a", &["s1", "s2"]);
    b.add("b", &["s1", "s2"]);
    b.add("t", &["u1", "j2", "a", "b"]);
    b.mark("bottom", &["bot"]);
    b.mark("z_dark", &["r"]);
    b.mark("c", &["t"]);
    b.finish(
        "z-dark-join",
        Expect {
            smc: Some(vec![smc("j1", "r", "s1"), smc("j2", "r", "s2"), smc("a", "s1", "s2"), smc("b", "s1", "s2")]),
            graphs: vec![graph("t", &["r", "s1", "s2"], &[("s1", "s2")])],
            isolated: vec![IsolatedExpect { c: s("t"), vertex: s("r") }],
            ..Expect::default()
        },
    )
}

/// `pairs` disjoint labels `x_k → y_k` below a top `f`, each label edge
/// realized by two incomparable covers.
fn name_label(pairs: usize) -> Result<Fixture, ProbeError> {
    let mut b = Builder::default();
    b.add("bot", &[]);
    b.mark("bottom", &["bot"]);
    let mut smcs = Vec::new();
    let mut verts = Vec::new();
    let mut edges = Vec::new();
    let mut covers = Vec::new();
    let mut coded = Vec::new();
    for k in 1..=pairs {
        let v = |r: &str| format!("{r}{k}");
        for r in ["x", "a", "d", "y", "b", "c"] {
            b.add(&v(r), &["bot"]);
            verts.push(v(r));
        }
        for (l, r) in [("x", "a"), ("a", "d"), ("d", "y"), ("a", "b"), ("b", "c"), ("a", "c")] {
            let (l, r) = (v(l), v(r));
            for kind in ["j", "q"] {
                let cover = format!("{kind}_{l}_{r}");
                b.add(&cover, &[&l, &r]);
                smcs.push(smc(&cover, &l, &r));
                covers.push(cover);
            }
            edges.push((l, r));
        }
        coded.push(pair(&v("x"), &v("y")));
        b.mark("x", &[&v("x")]);
        b.mark("y", &[&v("y")]);
    }
    let cover_refs: Vec<&str> = covers.iter().map(String::as_str).collect();
    b.add("f", &cover_refs);
    b.mark("name", &["f"]);
    let vrefs: Vec<&str> = verts.iter().map(String::as_str).collect();
    b.mark("minimal", &vrefs);
    let erefs: Vec<(&str, &str)> = edges.iter().map(|(a, c)| (a.as_str(), c.as_str())).collect();
    b.finish(
        "name-label",
        Expect {
            smc: Some(smcs),
            graphs: vec![graph("f", &vrefs, &erefs)],
            name_decodes: vec![NameExpect { f: s("f"), pairs: coded }],
            ..Expect::default()
        },
    )
}

/// Light names `f` for `{u1, b1}, {u2, b2}` and `g` for `{b1, v1}, {b2, v2}`
/// above the designated `i`. Each coded pair `{p, q}` has a chain
/// `x < y < z` of light strongly minimal covers below its name. A decoy
/// `{u1, b2}` below `f` has only one cover step, and a dark element `dk`
/// sits below one of the `x`'s.
fn light_triple() -> Result<Fixture, ProbeError> {
    let mut b = Builder::default();
    b.add("bot", &[]);
    b.add("dk", &["bot"]);
    b.add("i", &["bot"]);
    for m in ["u1", "u2", "v1", "v2", "b1", "b2"] {
        b.add(m, &["i"]);
    }
    b.add("c", &["u1", "u2"]);
    b.add("c2", &["v1", "v2"]);
    let mut tops: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for (name, p, q) in [("f", "u1", "b1"), ("f", "u2", "b2"), ("g", "b1", "v1"), ("g", "b2", "v2")] {
        let x = format!("x_{p}_{q}");
        let y = format!("y_{p}_{q}");
        let z = format!("z_{p}_{q}");
        if p == "u1" {
            b.add(&x, &[p, q, "dk"]);
        } else {
            b.add(&x, &[p, q]);
        }
        b.add(&y, &[&x]);
        b.add(&z, &[&y]);
        tops.entry(name).or_default().push(z);
    }
    b.add("x_u1_b2", &["u1", "b2"]);
    b.add("y_u1_b2", &["x_u1_b2"]);
    tops.get_mut("f").unwrap().push("y_u1_b2".into());
    for (name, below) in &tops {
        let refs: Vec<&str> = below.iter().map(String::as_str).collect();
        b.add(name, &refs);
    }
    b.mark("bottom", &["bot"]);
    b.mark("i", &["i"]);
    b.mark("names", &["f", "g"]);
    b.mark("codes", &["c", "c2"]);
    b.mark("chain", &["x_u1_b1", "y_u1_b1", "z_u1_b1"]);
    b.mark("decoy", &["x_u1_b2"]);
    b.finish(
        "light-triple",
        Expect {
            light_labels: vec![
                LightLabelExpect { f: s("f"), i: s("i"), pairs: vec![pair("u1", "b1"), pair("u2", "b2")] },
                LightLabelExpect { f: s("g"), i: s("i"), pairs: vec![pair("b1", "v1"), pair("b2", "v2")] },
            ],
            light_decodes: vec![LightDecodeExpect {
                f: s("f"),
                g: s("g"),
                c: s("c"),
                c2: s("c2"),
                i: s("i"),
                pairs: vec![pair("u1", "v1"), pair("u2", "v2")],
            }],
            ..Expect::default()
        },
    )
}

/// One element per column content of a finished layout: `r{i}` for each
/// `Code_i` column, and for each edge quotient both the plain join
/// `j{l}_{r}` and the quotient `q{index}` above `r{l}`, `r{r}`. Collapsed
/// and padding blocks are finite and add nothing above the bottom.
pub fn layout_poset(layout: &[Descriptor]) -> Result<FinitePoset, ProbeError> {
    let mut b = Builder::default();
    b.add("bot", &[]);
    let mut seen = BTreeSet::new();
    for d in layout {
        if let Descriptor::Coding { content: ColumnContent::Code { index }, .. } = d {
            if seen.insert(*index) {
                b.add(&format!("r{index}"), &["bot"]);
            }
        }
    }
    let mut joins = BTreeSet::new();
    for d in layout {
        if let Descriptor::Coding { content: ColumnContent::QuotientEdge { index, left, right }, .. } = d {
            let (l, r) = (format!("r{left}"), format!("r{right}"));
            if !b.names.contains(&l) || !b.names.contains(&r) {
                return Err(ProbeError::Invalid(format!("edge column {index} refers to an uncoded vertex")));
            }
            if joins.insert((left.min(right), left.max(right))) {
                b.add(&format!("j{}_{}", left.min(right), left.max(right)), &[&l, &r]);
            }
            b.add(&format!("q{index}"), &[&l, &r]);
        }
    }
    let all: Vec<String> = b.names.clone();
    let refs: Vec<&str> = all.iter().map(String::as_str).collect();
    b.add("top", &refs);
    let names: Vec<&str> = b.names.iter().map(String::as_str).collect();
    let rel: Vec<(&str, &str)> = b.rel.iter().map(|(a, c)| (a.as_str(), c.as_str())).collect();
    FinitePoset::from_named(&names, &rel)
}

/// The layout fixture for `g`, run through the finite-mode construction.
pub fn layout_fixture(g: &FiniteGraph, stages: usize) -> Result<Fixture, ProbeError> {
    let family = GeneratorFamily::parse("ladder").expect("built-in family");
    let out = construction::run(g, &family, &[], ConstructionConfig::default(), stages).map_err(|e| ProbeError::Invalid(e.to_string()))?;
    let coded = construction::decode_layout_graph(&out.trace, construction::requirement_bound(g)).map_err(|e| ProbeError::Invalid(e.to_string()))?;
    let poset = layout_poset(&out.state.layout)?;
    let vname = |v: u64| format!("r{v}");
    let mut designated = BTreeMap::new();
    designated.insert(s("c"), vec![s("top")]);
    let fx = Fixture {
        family: "p3-layout".into(),
        poset,
        designated,
        expect: Expect {
            graphs: vec![GraphExpect {
                c: s("top"),
                vertices: coded.vertices().iter().map(|&v| vname(v)).collect(),
                edges: coded.edges().iter().map(|&(a, b)| [vname(a), vname(b)]).collect(),
            }],
            ..Expect::default()
        },
    };
    fx.validate()?;
    Ok(fx)
}

/// `name-label` takes an optional pair count, as in `name-label:2`.
pub fn build_fixture(spec: &str) -> Result<Fixture, ProbeError> {
    let (family, arg) = spec.split_once(':').map_or((spec, None), |(f, a)| (f, Some(a)));
    let family = family.to_ascii_lowercase().replace('_', "-");
    if arg.is_some() && family != "name-label" {
        return Err(ProbeError::Family(spec.to_string()));
    }
    match family.as_str() {
        "oplus-ismc" | "oplusismc" => oplus_ismc(),
        "second-ismc" | "secondismc" => second_ismc(),
        "single-cover" => single_cover(),
        "double-cover" => double_cover(),
        "z-dark-join" => z_dark_join(),
        "name-label" => {
            let k = arg.map_or(Ok(1), |a| a.parse::<usize>().map_err(|_| ProbeError::Family(spec.to_string())))?;
            if k == 0 {
                return Err(ProbeError::Family(spec.to_string()));
            }
            name_label(k)
        }
        "light-triple" => light_triple(),
        "p3-layout" => layout_fixture(&FiniteGraph::path(3), 500),
        _ => Err(ProbeError::Family(spec.to_string())),
    }
}

/// One fixture per packaged family.
pub fn all_fixtures() -> Vec<Fixture> {
    FAMILIES.iter().map(|f| build_fixture(f).expect("packaged fixtures build")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_family_builds_and_validates() {
        for fx in all_fixtures() {
            fx.validate().unwrap();
            assert!(fx.poset.bottom().is_some(), "{}", fx.family);
        }
        assert!(matches!(build_fixture("nope"), Err(ProbeError::Family(_))));
        assert!(matches!(build_fixture("double-cover:3"), Err(ProbeError::Family(_))));
        assert!(matches!(build_fixture("name-label:0"), Err(ProbeError::Family(_))));
        assert_eq!(build_fixture("name-label:2").unwrap().poset.size(), 1 + 2 * 18 + 1);
    }

    #[test]
    fn json_roundtrip() {
        for fx in all_fixtures() {
            let v = fx.to_json();
            let back = Fixture::from_json(&v).unwrap();
            assert_eq!(back, fx, "{}", fx.family);
        }
    }

    #[test]
    fn validation_catches_missing_names() {
        let mut fx = build_fixture("double-cover").unwrap();
        fx.designated.insert("c".into(), vec!["nowhere".into()]);
        assert_eq!(fx.validate(), Err(ProbeError::Unknown("nowhere".into())));
        let mut v = build_fixture("single-cover").unwrap().to_json();
        v["expect"]["graphs"][0]["c"] = json!("ghost");
        assert!(Fixture::from_json(&v).is_err());
    }

    #[test]
    fn name_label_shape() {
        let fx = build_fixture("name-label").unwrap();
        assert_eq!(fx.poset.size(), 20);
        assert_eq!(fx.poset.minimal_elements().unwrap().len(), 6);
        assert_eq!(fx.expect.smc.as_ref().unwrap().len(), 12);
    }

    #[test]
    fn layout_poset_matches_coded_graph() {
        let fx = build_fixture("p3-layout").unwrap();
        let g = &fx.expect.graphs[0];
        assert_eq!(g.vertices, ["r0", "r1", "r2"]);
        assert_eq!(g.edges, [pair("r0", "r1"), pair("r1", "r2")]);
    }
}
