//! Compiled model checker.
//!
//! Formulas and macro bodies are compiled to slot-addressed trees. A
//! quantifier ranges over a guard taken from its body when possible: an
//! equality, edge or order atom against an outer variable, or a macro call
//! whose extension in the quantified position is computed once and cached.
//! Macro results are memoized per argument tuple.

use super::formula::{Atom, Formula, Signature, Var};
use super::macros::{MacroError, MacroTable};
use super::structure::{FiniteStructure, StructureError};
use crate::exec::Exec;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error(transparent)]
    Macro(#[from] MacroError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("variable {0} is free but unassigned")]
    Unassigned(Var),
    #[error("{found} atom evaluated in a {structure} structure")]
    Signature { found: Signature, structure: Signature },
    #[error("macro table is over {table}, structure is a {structure}")]
    TableSignature { table: Signature, structure: Signature },
}

const MAX_KEY: usize = 8;
type Slot = u16;

#[derive(Clone, Debug)]
enum Guard {
    All,
    Eq(Slot),
    Adj(Slot),
    Up(Slot),
    Down(Slot),
    Ext { mac: u32, args: Vec<Slot>, hole: usize },
}

#[derive(Clone, Debug)]
enum Node {
    Const(bool),
    Eq(Slot, Slot),
    Edge(Slot, Slot),
    Leq(Slot, Slot),
    Add(Slot, Slot, Slot),
    Mul(Slot, Slot, Slot),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Implies(Box<Node>, Box<Node>),
    Exists(Slot, Guard, Box<Node>),
    Forall(Slot, Guard, Box<Node>),
    Call(u32, Vec<Slot>),
}

#[derive(Clone, Debug)]
struct Compiled {
    arity: usize,
    frame: usize,
    body: Node,
}

/// A macro table compiled for checking.
#[derive(Clone, Debug)]
pub struct Program {
    signature: Signature,
    macros: Vec<Compiled>,
    table: MacroTable,
}

/// A compiled formula with its free variables in slot order.
#[derive(Clone, Debug)]
pub struct Query {
    pub free: Vec<Var>,
    frame: usize,
    body: Node,
}

struct Compiler<'t> {
    table: &'t MacroTable,
    scope: Vec<(Var, Slot)>,
    next: usize,
}

impl Compiler<'_> {
    fn lookup(&self, v: &Var) -> Result<Slot, CheckError> {
        self.scope.iter().rev().find(|(n, _)| n == v).map(|&(_, s)| s).ok_or_else(|| CheckError::Unassigned(v.clone()))
    }

    fn compile(&mut self, f: &Formula) -> Result<Node, CheckError> {
        Ok(match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Atom(a) => match a {
                Atom::Eq(x, y) => Node::Eq(self.lookup(x)?, self.lookup(y)?),
                Atom::Edge(x, y) => Node::Edge(self.lookup(x)?, self.lookup(y)?),
                Atom::Leq(x, y) => Node::Leq(self.lookup(x)?, self.lookup(y)?),
                Atom::Add(x, y, z) => Node::Add(self.lookup(x)?, self.lookup(y)?, self.lookup(z)?),
                Atom::Mul(x, y, z) => Node::Mul(self.lookup(x)?, self.lookup(y)?, self.lookup(z)?),
            },
            Formula::Call(n, args) => {
                let id = self.table.position(n).ok_or_else(|| MacroError::Unknown(n.clone()))?;
                Node::Call(id as u32, args.iter().map(|a| self.lookup(a)).collect::<Result<_, _>>()?)
            }
            Formula::Not(a) => Node::Not(Box::new(self.compile(a)?)),
            Formula::And(..) => {
                let mut parts = Vec::new();
                for p in conjuncts(f) {
                    parts.push(self.compile(p)?);
                }
                Node::And(parts)
            }
            Formula::Or(..) => {
                let mut parts = Vec::new();
                for p in disjuncts(f) {
                    parts.push(self.compile(p)?);
                }
                Node::Or(parts)
            }
            Formula::Implies(a, b) => Node::Implies(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Exists(x, body) | Formula::Forall(x, body) => {
                let slot = self.next as Slot;
                self.next += 1;
                let guard_src: Vec<&Formula> = match (f, &**body) {
                    (Formula::Exists(..), b) => conjuncts(b),
                    (Formula::Forall(..), Formula::Implies(ante, _)) => conjuncts(ante),
                    _ => Vec::new(),
                };
                let guard = self.guard(x, &guard_src)?;
                self.scope.push((x.clone(), slot));
                let inner = self.compile(body)?;
                self.scope.pop();
                if matches!(f, Formula::Exists(..)) {
                    Node::Exists(slot, guard, Box::new(inner))
                } else {
                    Node::Forall(slot, guard, Box::new(inner))
                }
            }
        })
    }

    fn guard(&self, x: &Var, parts: &[&Formula]) -> Result<Guard, CheckError> {
        fn other<'v>(x: &Var, a: &'v Var, b: &'v Var) -> Option<(bool, &'v Var)> {
            match (a == x, b == x) {
                (true, false) => Some((true, b)),
                (false, true) => Some((false, a)),
                _ => None,
            }
        }
        let mut ext = None;
        for p in parts {
            match p {
                Formula::Atom(Atom::Eq(a, b)) => {
                    if let Some((_, t)) = other(x, a, b) {
                        return Ok(Guard::Eq(self.lookup(t)?));
                    }
                }
                Formula::Atom(Atom::Edge(a, b)) => {
                    if let Some((_, t)) = other(x, a, b) {
                        return Ok(Guard::Adj(self.lookup(t)?));
                    }
                }
                Formula::Atom(Atom::Leq(a, b)) => match other(x, a, b) {
                    Some((true, t)) => return Ok(Guard::Down(self.lookup(t)?)),
                    Some((false, t)) => return Ok(Guard::Up(self.lookup(t)?)),
                    None => {}
                },
                Formula::Call(n, args) if ext.is_none() && args.len() <= MAX_KEY => {
                    let holes: Vec<usize> = (0..args.len()).filter(|&i| &args[i] == x).collect();
                    if holes.len() == 1 {
                        let id = self.table.position(n).ok_or_else(|| MacroError::Unknown(n.clone()))? as u32;
                        let slots = args
                            .iter()
                            .enumerate()
                            .map(|(i, a)| if i == holes[0] { Ok(0) } else { self.lookup(a) })
                            .collect::<Result<Vec<_>, _>>()?;
                        ext = Some(Guard::Ext { mac: id, args: slots, hole: holes[0] });
                    }
                }
                _ => {}
            }
        }
        Ok(ext.unwrap_or(Guard::All))
    }
}

fn conjuncts(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::And(a, b) => {
            let mut v = conjuncts(a);
            v.extend(conjuncts(b));
            v
        }
        _ => vec![f],
    }
}

fn disjuncts(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::Or(a, b) => {
            let mut v = disjuncts(a);
            v.extend(disjuncts(b));
            v
        }
        _ => vec![f],
    }
}

impl Program {
    pub fn new(table: &MacroTable) -> Result<Program, CheckError> {
        let mut macros = Vec::with_capacity(table.len());
        for m in table.iter() {
            let mut c = Compiler { table, scope: Vec::new(), next: m.params.len() };
            for (i, p) in m.params.iter().enumerate() {
                c.scope.push((p.clone(), i as Slot));
            }
            let body = c.compile(&m.body)?;
            macros.push(Compiled { arity: m.params.len(), frame: c.next, body });
        }
        Ok(Program { signature: table.signature(), macros, table: table.clone() })
    }

    pub fn empty(signature: Signature) -> Program {
        Program::new(&MacroTable::new(signature)).expect("empty table compiles")
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn table(&self) -> &MacroTable {
        &self.table
    }

    /// Compile `f` with free variables bound to slots in the order `free`.
    pub fn query(&self, f: &Formula, free: &[&str]) -> Result<Query, CheckError> {
        self.table.validate("formula", f)?;
        let mut c = Compiler { table: &self.table, scope: Vec::new(), next: free.len() };
        for (i, v) in free.iter().enumerate() {
            c.scope.push((v.to_string(), i as Slot));
        }
        let body = c.compile(f)?;
        Ok(Query { free: free.iter().map(|v| v.to_string()).collect(), frame: c.next, body })
    }
}

/// Evaluation state over one structure. Memo tables live as long as the
/// checker, so reuse a checker across many queries on the same structure.
pub struct Checker<'a> {
    st: &'a FiniteStructure,
    prog: &'a Program,
    memo: HashMap<(u32, [u32; MAX_KEY]), bool>,
    ext: HashMap<(u32, [u32; MAX_KEY]), Rc<[u32]>>,
    all: Rc<[u32]>,
}

const HOLE: u32 = u32::MAX;

impl<'a> Checker<'a> {
    pub fn new(st: &'a FiniteStructure, prog: &'a Program) -> Result<Checker<'a>, CheckError> {
        if !prog.table.is_empty() && prog.signature != st.signature() {
            return Err(CheckError::TableSignature { table: prog.signature, structure: st.signature() });
        }
        let all: Rc<[u32]> = (0..st.size() as u32).collect();
        Ok(Checker { st, prog, memo: HashMap::new(), ext: HashMap::new(), all })
    }

    pub fn structure(&self) -> &FiniteStructure {
        self.st
    }

    /// Evaluate with `assignment[i]` bound to `q.free[i]`.
    pub fn eval(&mut self, q: &Query, assignment: &[u32]) -> bool {
        assert_eq!(assignment.len(), q.free.len(), "assignment length");
        let mut frame = vec![0u32; q.frame.max(1)];
        frame[..assignment.len()].copy_from_slice(assignment);
        self.node(&q.body, &mut frame)
    }

    /// Evaluate a macro directly on element arguments.
    pub fn call(&mut self, name: &str, args: &[u32]) -> Result<bool, CheckError> {
        let m = self.prog.table.get(name).ok_or_else(|| MacroError::Unknown(name.to_string()))?;
        if m.params.len() != args.len() {
            return Err(MacroError::Arity { name: name.to_string(), expected: m.params.len(), got: args.len() }.into());
        }
        let id = self.prog.table.position(name).unwrap() as u32;
        Ok(self.invoke(id, args))
    }

    fn invoke(&mut self, id: u32, args: &[u32]) -> bool {
        let key = if args.len() <= MAX_KEY {
            let mut k = [0u32; MAX_KEY];
            k[..args.len()].copy_from_slice(args);
            if let Some(&r) = self.memo.get(&(id, k)) {
                return r;
            }
            Some(k)
        } else {
            None
        };
        let prog = self.prog;
        let m = &prog.macros[id as usize];
        let mut frame = vec![0u32; m.frame.max(1)];
        frame[..m.arity].copy_from_slice(args);
        let r = self.node(&m.body, &mut frame);
        if let Some(k) = key {
            self.memo.insert((id, k), r);
        }
        r
    }

    fn candidates(&mut self, g: &Guard, frame: &[u32]) -> Candidates<'a> {
        let st = self.st;
        match g {
            Guard::All => Candidates::Shared(self.all.clone()),
            Guard::Eq(s) => Candidates::One(frame[*s as usize]),
            Guard::Adj(s) => Candidates::Slice(st.neighbors(frame[*s as usize])),
            Guard::Up(s) => Candidates::Slice(st.up(frame[*s as usize])),
            Guard::Down(s) => Candidates::Slice(st.down(frame[*s as usize])),
            Guard::Ext { mac, args, hole } => {
                let mut k = [0u32; MAX_KEY];
                for (i, s) in args.iter().enumerate() {
                    k[i] = if i == *hole { HOLE } else { frame[*s as usize] };
                }
                if let Some(list) = self.ext.get(&(*mac, k)) {
                    return Candidates::Shared(list.clone());
                }
                let mut call = k[..args.len()].to_vec();
                let mut list = Vec::new();
                for e in 0..st.size() as u32 {
                    call[*hole] = e;
                    if self.invoke(*mac, &call) {
                        list.push(e);
                    }
                }
                let list: Rc<[u32]> = list.into();
                self.ext.insert((*mac, k), list.clone());
                Candidates::Shared(list)
            }
        }
    }

    fn node(&mut self, n: &Node, frame: &mut [u32]) -> bool {
        let st = self.st;
        match n {
            Node::Const(b) => *b,
            Node::Eq(a, b) => frame[*a as usize] == frame[*b as usize],
            Node::Edge(a, b) => st.edge(frame[*a as usize], frame[*b as usize]),
            Node::Leq(a, b) => st.leq(frame[*a as usize], frame[*b as usize]),
            Node::Add(a, b, c) => st.add(frame[*a as usize], frame[*b as usize], frame[*c as usize]),
            Node::Mul(a, b, c) => st.mul(frame[*a as usize], frame[*b as usize], frame[*c as usize]),
            Node::Not(a) => !self.node(a, frame),
            Node::And(parts) => parts.iter().all(|p| self.node(p, frame)),
            Node::Or(parts) => parts.iter().any(|p| self.node(p, frame)),
            Node::Implies(a, b) => !self.node(a, frame) || self.node(b, frame),
            Node::Exists(slot, g, body) => {
                let cands = self.candidates(g, frame);
                cands.as_slice().iter().any(|&e| {
                    frame[*slot as usize] = e;
                    self.node(body, frame)
                })
            }
            Node::Forall(slot, g, body) => {
                let cands = self.candidates(g, frame);
                cands.as_slice().iter().all(|&e| {
                    frame[*slot as usize] = e;
                    self.node(body, frame)
                })
            }
            Node::Call(id, args) => {
                let vals: Vec<u32> = args.iter().map(|s| frame[*s as usize]).collect();
                self.invoke(*id, &vals)
            }
        }
    }
}

enum Candidates<'a> {
    One(u32),
    Slice(&'a [u32]),
    Shared(Rc<[u32]>),
}

impl Candidates<'_> {
    fn as_slice(&self) -> &[u32] {
        match self {
            Candidates::One(e) => std::slice::from_ref(e),
            Candidates::Slice(s) => s,
            Candidates::Shared(r) => r,
        }
    }
}

/// Check that `f` uses only atoms of the structure's signature.
pub fn signature_compatible(f: &Formula, st: &FiniteStructure) -> Result<(), CheckError> {
    match f.atom_signatures().into_iter().find(|s| *s != st.signature()) {
        Some(found) => Err(CheckError::Signature { found, structure: st.signature() }),
        None => Ok(()),
    }
}

/// One-shot check of `f` under an assignment of element names.
pub fn model_check(
    f: &Formula,
    table: Option<&MacroTable>,
    st: &FiniteStructure,
    assignment: &BTreeMap<Var, String>,
) -> Result<bool, CheckError> {
    signature_compatible(f, st)?;
    let prog = match table {
        Some(t) => Program::new(t)?,
        None => Program::empty(st.signature()),
    };
    let free: Vec<Var> = f.free_vars().into_iter().collect();
    let free_refs: Vec<&str> = free.iter().map(String::as_str).collect();
    let q = prog.query(f, &free_refs)?;
    let mut vals = Vec::with_capacity(free.len());
    for v in &free {
        let name = assignment.get(v).ok_or_else(|| CheckError::Unassigned(v.clone()))?;
        vals.push(st.element(name)?);
    }
    let mut c = Checker::new(st, &prog)?;
    Ok(c.eval(&q, &vals))
}

/// Evaluate one query on many assignments. Each contiguous chunk gets its own
/// checker; results come back in input order.
pub fn eval_many(exec: Exec, st: &FiniteStructure, prog: &Program, q: &Query, assignments: &[Vec<u32>]) -> Result<Vec<bool>, CheckError> {
    Checker::new(st, prog)?;
    Ok(exec.map_chunks(assignments, |part| {
        let mut c = Checker::new(st, prog).expect("signature checked above");
        part.iter().map(|a| c.eval(q, a)).collect()
    }))
}
