//! Named formula abbreviations and their capture-avoiding expansion.

use super::formula::{Formula, Signature, Var};
use super::syntax::{parse_formula, ParseError};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MacroError {
    #[error("macro {0} is already defined")]
    Duplicate(String),
    #[error("unknown macro {0}")]
    Unknown(String),
    #[error("macro {name} takes {expected} arguments, got {got}")]
    Arity { name: String, expected: usize, got: usize },
    #[error("macro {name}: variable {var} is free but not a parameter")]
    FreeVariable { name: String, var: Var },
    #[error("macro {name}: repeated parameter {var}")]
    RepeatedParameter { name: String, var: Var },
    #[error("{name}: {found} atom in a {expected} formula")]
    Signature { name: String, expected: Signature, found: Signature },
    #[error("macro {name}: {source}")]
    Parse { name: String, source: ParseError },
    #[error("a binary macro may not be called E; that spelling is the edge atom")]
    ReservedName,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Macro {
    pub name: String,
    pub params: Vec<Var>,
    pub body: Formula,
}

/// An ordered table of macros over one signature. A body may only call
/// macros defined before it, so expansion always terminates.
#[derive(Clone, Debug)]
pub struct MacroTable {
    signature: Signature,
    macros: Vec<Macro>,
    index: HashMap<String, usize>,
}

impl MacroTable {
    pub fn new(signature: Signature) -> MacroTable {
        MacroTable { signature, macros: Vec::new(), index: HashMap::new() }
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn len(&self) -> usize {
        self.macros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.macros.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Macro> {
        self.macros.iter()
    }

    pub fn get(&self, name: &str) -> Option<&Macro> {
        self.index.get(name).map(|&i| &self.macros[i])
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn define(&mut self, name: &str, params: &[&str], body: Formula) -> Result<(), MacroError> {
        if self.index.contains_key(name) {
            return Err(MacroError::Duplicate(name.to_string()));
        }
        if name == "E" && params.len() == 2 {
            return Err(MacroError::ReservedName);
        }
        for (i, p) in params.iter().enumerate() {
            if params[..i].contains(p) {
                return Err(MacroError::RepeatedParameter { name: name.to_string(), var: p.to_string() });
            }
        }
        self.validate(name, &body)?;
        if let Some(var) = body.free_vars().into_iter().find(|v| !params.contains(&v.as_str())) {
            return Err(MacroError::FreeVariable { name: name.to_string(), var });
        }
        self.index.insert(name.to_string(), self.macros.len());
        self.macros.push(Macro { name: name.to_string(), params: params.iter().map(|p| p.to_string()).collect(), body });
        Ok(())
    }

    pub fn define_text(&mut self, name: &str, params: &[&str], src: &str) -> Result<(), MacroError> {
        let body = parse_formula(src).map_err(|source| MacroError::Parse { name: name.to_string(), source })?;
        self.define(name, params, body)
    }

    /// Checks that every call in `f` resolves with the right arity and
    /// every atom belongs to this table's signature.
    pub fn validate(&self, context: &str, f: &Formula) -> Result<(), MacroError> {
        let mut err = None;
        f.walk(&mut |g| {
            if err.is_some() {
                return;
            }
            match g {
                Formula::Atom(a) => {
                    if let Some(s) = a.signature() {
                        if s != self.signature {
                            err = Some(MacroError::Signature { name: context.to_string(), expected: self.signature, found: s });
                        }
                    }
                }
                Formula::Call(n, args) => match self.get(n) {
                    None => err = Some(MacroError::Unknown(n.clone())),
                    Some(m) if m.params.len() != args.len() => {
                        err = Some(MacroError::Arity { name: n.clone(), expected: m.params.len(), got: args.len() })
                    }
                    _ => {}
                },
                _ => {}
            }
        });
        err.map_or(Ok(()), Err)
    }

    /// Macros reachable from the calls in `f`, in definition order.
    pub fn dependencies(&self, f: &Formula) -> Vec<&Macro> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<String> = f.calls().into_iter().collect();
        while let Some(n) = stack.pop() {
            if let Some(&i) = self.index.get(&n) {
                if seen.insert(i) {
                    stack.extend(self.macros[i].body.calls());
                }
            }
        }
        seen.into_iter().map(|i| &self.macros[i]).collect()
    }

    /// Inline every call. Bound variables of inlined bodies are renamed
    /// apart from every name already in `f`, deterministically.
    pub fn expand(&self, f: &Formula) -> Result<Formula, MacroError> {
        self.validate("formula", f)?;
        let mut used = Fresh::default();
        collect_names(f, &mut used.used);
        Ok(self.expand_in(f, &mut used))
    }

    /// The fully expanded body of a macro applied to its own parameters.
    pub fn expand_macro(&self, name: &str) -> Result<Formula, MacroError> {
        let m = self.get(name).ok_or_else(|| MacroError::Unknown(name.to_string()))?;
        let call = Formula::Call(m.name.clone(), m.params.clone());
        self.expand(&call)
    }

    /// Node count of `expand(f)`, computed without building it.
    pub fn expanded_size(&self, f: &Formula) -> u128 {
        let mut sizes: Vec<u128> = Vec::with_capacity(self.macros.len());
        for m in &self.macros {
            let s = self.size_with(&m.body, &sizes);
            sizes.push(s);
        }
        self.size_with(f, &sizes)
    }

    fn size_with(&self, f: &Formula, sizes: &[u128]) -> u128 {
        match f {
            Formula::Call(n, _) => sizes[self.index[n]],
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + self.size_with(a, sizes),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + self.size_with(a, sizes) + self.size_with(b, sizes),
            _ => 1,
        }
    }

    fn expand_in(&self, f: &Formula, used: &mut Fresh) -> Formula {
        match f {
            Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
            Formula::Not(a) => Formula::not(self.expand_in(a, used)),
            Formula::And(a, b) => Formula::and(self.expand_in(a, used), self.expand_in(b, used)),
            Formula::Or(a, b) => Formula::or(self.expand_in(a, used), self.expand_in(b, used)),
            Formula::Implies(a, b) => Formula::implies(self.expand_in(a, used), self.expand_in(b, used)),
            Formula::Forall(x, a) => Formula::forall(x, self.expand_in(a, used)),
            Formula::Exists(x, a) => Formula::exists(x, self.expand_in(a, used)),
            Formula::Call(n, args) => {
                let m = &self.macros[self.index[n]];
                let subst: BTreeMap<Var, Var> = m.params.iter().cloned().zip(args.iter().cloned()).collect();
                let inst = instantiate(&m.body, &subst, used);
                self.expand_in(&inst, used)
            }
        }
    }
}

fn collect_names(f: &Formula, out: &mut BTreeSet<Var>) {
    f.walk(&mut |g| match g {
        Formula::Atom(a) => out.extend(a.vars().into_iter().cloned()),
        Formula::Call(_, args) => out.extend(args.iter().cloned()),
        Formula::Forall(x, _) | Formula::Exists(x, _) => {
            out.insert(x.clone());
        }
        _ => {}
    });
}

#[derive(Default)]
struct Fresh {
    used: BTreeSet<Var>,
    next: HashMap<String, usize>,
}

impl Fresh {
    fn name(&mut self, base: &str) -> Var {
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = if stem.is_empty() { "v" } else { stem };
        let k = self.next.entry(stem.to_string()).or_insert(1);
        loop {
            let cand = format!("{stem}{k}");
            *k += 1;
            if self.used.insert(cand.clone()) {
                return cand;
            }
        }
    }
}

/// Substitute parameters and rename every binder to a fresh name.
fn instantiate(f: &Formula, subst: &BTreeMap<Var, Var>, used: &mut Fresh) -> Formula {
    let map = |x: &Var| subst.get(x).cloned().unwrap_or_else(|| x.clone());
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(_) => f.rename_free(&map),
        Formula::Call(n, args) => Formula::Call(n.clone(), args.iter().map(map).collect()),
        Formula::Not(a) => Formula::not(instantiate(a, subst, used)),
        Formula::And(a, b) => Formula::and(instantiate(a, subst, used), instantiate(b, subst, used)),
        Formula::Or(a, b) => Formula::or(instantiate(a, subst, used), instantiate(b, subst, used)),
        Formula::Implies(a, b) => Formula::implies(instantiate(a, subst, used), instantiate(b, subst, used)),
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            let y = used.name(x);
            let mut inner = subst.clone();
            inner.insert(x.clone(), y.clone());
            let body = instantiate(a, &inner, used);
            if matches!(f, Formula::Forall(..)) {
                Formula::forall(&y, body)
            } else {
                Formula::exists(&y, body)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> MacroTable {
        let mut t = MacroTable::new(Signature::Poset);
        t.define_text("Lt", &["x", "y"], "x <= y & x != y").unwrap();
        t.define_text("Below", &["x"], "exists y. Lt(x, y)").unwrap();
        t
    }

    #[test]
    fn expansion_avoids_capture() {
        let t = table();
        let f = parse_formula("exists y. Below(y)").unwrap();
        let e = t.expand(&f).unwrap();
        assert_eq!(e, parse_formula("exists y. exists y1. y <= y1 & y != y1").unwrap());
        assert_eq!(t.expand(&e).unwrap(), e);
    }

    #[test]
    fn expansion_is_deterministic() {
        let t = table();
        let f = parse_formula("forall a. Below(a) | Lt(a, a)").unwrap();
        assert_eq!(t.expand(&f).unwrap(), t.expand(&f).unwrap());
        let e = t.expand(&f).unwrap();
        assert!(e.calls().is_empty());
        assert_eq!(t.expanded_size(&f), e.size() as u128);
    }

    #[test]
    fn definitions_are_validated() {
        let mut t = table();
        assert_eq!(t.define_text("Lt", &["a", "b"], "true"), Err(MacroError::Duplicate("Lt".into())));
        assert!(matches!(t.define_text("F", &["x"], "x <= y"), Err(MacroError::FreeVariable { .. })));
        assert!(matches!(t.define_text("G", &["x"], "Lt(x)"), Err(MacroError::Arity { .. })));
        assert!(matches!(t.define_text("H", &["x"], "Nope(x)"), Err(MacroError::Unknown(_))));
        assert!(matches!(t.define_text("I", &["x", "y"], "E(x, y)"), Err(MacroError::Signature { .. })));
        assert_eq!(t.define_text("E", &["x", "y"], "x = y"), Err(MacroError::ReservedName));
        assert!(matches!(t.define_text("J", &["x", "x"], "true"), Err(MacroError::RepeatedParameter { .. })));
    }

    #[test]
    fn dependencies_in_order() {
        let t = table();
        let deps: Vec<_> = t.dependencies(&Formula::call("Below", &["z"])).iter().map(|m| m.name.clone()).collect();
        assert_eq!(deps, ["Lt", "Below"]);
    }
}
