//! Names for finite sets of pairs: the `Z_(X,Y)` gadget join and its
//! graph-label bookkeeping.
//!
//! Every name is a uniform join of `Z` ceers, one per pair, and every `Z`
//! is a uniform join of twelve summands: the six vertex ceers of the label
//! followed by one quotiented join per label edge. The metadata records
//! which column carries which vertex or edge, so the coded label graph can
//! be read back without inspecting degrees.

use crate::graph::FiniteGraph;
use crate::kernel::{CeerTrace, KernelError, StagedCeer};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NameError {
    #[error("a name needs at least one pair")]
    EmptyPairSet,
    #[error("Z needs 4 fresh ceers, got {0}")]
    FreshCount(usize),
    #[error("fresh supply ran out after {0} ceers")]
    FreshExhausted(usize),
    #[error("pair {pair} mentions vertex {vertex}, but the pool has {pool} ceers")]
    UnknownVertex { pair: usize, vertex: usize, pool: usize },
    #[error("pair ({0}, {1}) listed twice")]
    DuplicatePair(usize, usize),
    #[error("invalid label metadata: {0}")]
    Metadata(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// A ceer with the element whose class is assumed non-computable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pointed {
    pub ceer: StagedCeer,
    pub rep: u64,
}

impl Pointed {
    pub fn new(ceer: StagedCeer) -> Self {
        Pointed { ceer, rep: 0 }
    }

    pub fn with_rep(ceer: StagedCeer, rep: u64) -> Self {
        Pointed { ceer, rep }
    }
}

/// The six positions of a label, in summand order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    X,
    A,
    D,
    Y,
    B,
    C,
}

impl Role {
    pub const ALL: [Role; 6] = [Role::X, Role::A, Role::D, Role::Y, Role::B, Role::C];
}

/// One summand of `Z_(X,Y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ZSummand {
    Vertex { role: Role },
    Edge { left: Role, right: Role },
}

/// Summands of `Z_(X,Y)` in join order.
pub const Z_SUMMANDS: [ZSummand; 12] = [
    ZSummand::Vertex { role: Role::X },
    ZSummand::Vertex { role: Role::A },
    ZSummand::Vertex { role: Role::D },
    ZSummand::Vertex { role: Role::Y },
    ZSummand::Vertex { role: Role::B },
    ZSummand::Vertex { role: Role::C },
    ZSummand::Edge { left: Role::X, right: Role::A },
    ZSummand::Edge { left: Role::A, right: Role::D },
    ZSummand::Edge { left: Role::D, right: Role::Y },
    ZSummand::Edge { left: Role::A, right: Role::B },
    ZSummand::Edge { left: Role::B, right: Role::C },
    ZSummand::Edge { left: Role::A, right: Role::C },
];

/// `(S ⊕ T)/(2s, 2t+1)`: the join with the designated classes merged.
pub fn quotient_join(s: &Pointed, t: &Pointed) -> StagedCeer {
    StagedCeer::quotient(StagedCeer::join(s.ceer.clone(), t.ceer.clone()), &[(2 * s.rep, 2 * t.rep + 1)])
}

/// `Z_(X,Y)` from `fresh = [A, B, C, D]`.
pub fn build_z(x: &Pointed, y: &Pointed, fresh: &[Pointed]) -> Result<StagedCeer, NameError> {
    if fresh.len() != 4 {
        return Err(NameError::FreshCount(fresh.len()));
    }
    let pick = |r: Role| match r {
        Role::X => x,
        Role::Y => y,
        Role::A => &fresh[0],
        Role::B => &fresh[1],
        Role::C => &fresh[2],
        Role::D => &fresh[3],
    };
    let summands = Z_SUMMANDS
        .iter()
        .map(|s| match *s {
            ZSummand::Vertex { role } => pick(role).ceer.clone(),
            ZSummand::Edge { left, right } => quotient_join(pick(left), pick(right)),
        })
        .collect();
    Ok(StagedCeer::join_many(summands)?)
}

/// Pool of ceers plus the pairs to be named, as indices into the pool.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSet {
    pool: Vec<Pointed>,
    pairs: Vec<(usize, usize)>,
}

impl PairSet {
    pub fn new(pool: Vec<Pointed>, pairs: Vec<(usize, usize)>) -> Result<Self, NameError> {
        let mut seen = BTreeSet::new();
        for (k, &(x, y)) in pairs.iter().enumerate() {
            for v in [x, y] {
                if v >= pool.len() {
                    return Err(NameError::UnknownVertex { pair: k, vertex: v, pool: pool.len() });
                }
            }
            if !seen.insert((x, y)) {
                return Err(NameError::DuplicatePair(x, y));
            }
        }
        Ok(PairSet { pool, pairs })
    }

    pub fn pool(&self) -> &[Pointed] {
        &self.pool
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Label vertex id of a fresh gadget ceer: pool ceers are `0..pool`,
    /// then four ids per pair in the order `a, b, c, d`.
    pub fn fresh_id(&self, pair: usize, role: Role) -> u64 {
        let slot = match role {
            Role::A => 0,
            Role::B => 1,
            Role::C => 2,
            Role::D => 3,
            Role::X | Role::Y => panic!("{role:?} is not a fresh role"),
        };
        (self.pool.len() + 4 * pair + slot) as u64
    }
}

/// The graph a name for `f` must code: one label per pair, gadget vertices
/// private to their pair, `x`/`y` shared whenever the pool index repeats.
pub fn expected_label_graph(f: &PairSet) -> FiniteGraph {
    let mut verts = BTreeSet::new();
    let mut edges = Vec::new();
    for (k, &(x, y)) in f.pairs().iter().enumerate() {
        let (x, y) = (x as u64, y as u64);
        let [a, b, c, d] = [Role::A, Role::B, Role::C, Role::D].map(|r| f.fresh_id(k, r));
        verts.extend([x, y, a, b, c, d]);
        edges.extend([(x, a), (a, d), (d, y), (a, b), (b, c), (c, a)]);
    }
    FiniteGraph::new(verts, edges).expect("label edges join distinct vertices")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub x: u64,
    pub y: u64,
    /// Label ids of `a, b, c, d`.
    pub gadget: [u64; 4],
}

/// What one column of the name carries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ColumnRecord {
    Vertex { pair: usize, summand: usize, vertex: u64, rep: u64 },
    Edge { pair: usize, summand: usize, left: u64, right: u64, quotient: [u64; 2] },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMetadata {
    pub pool: usize,
    pub pairs: Vec<PairRecord>,
    pub columns: Vec<ColumnRecord>,
}

impl LabelMetadata {
    /// Position of summand `j` of pair `k`'s `Z` inside the name, as
    /// `(residue, stride)`: element `t` of that summand is
    /// `residue + stride * t`.
    pub fn column_position(&self, pair: usize, summand: usize) -> (u64, u64) {
        let n = self.pairs.len() as u64;
        (pair as u64 + n * summand as u64, n * 12)
    }

    /// Read the coded graph back from the column records alone.
    pub fn decode(&self) -> Result<FiniteGraph, NameError> {
        let mut verts = BTreeSet::new();
        let mut edges = Vec::new();
        for col in &self.columns {
            match *col {
                ColumnRecord::Vertex { vertex, .. } => {
                    verts.insert(vertex);
                }
                ColumnRecord::Edge { left, right, .. } => edges.push((left, right)),
            }
        }
        FiniteGraph::new(verts, edges).map_err(|e| NameError::Metadata(e.to_string()))
    }

    /// Check the materialized name against the records: each edge column
    /// merges its two designated classes, and no two distinct columns share
    /// a class. Examines elements below `bound` at `stage`.
    pub fn check_columns(&self, name: &StagedCeer, stage: usize, bound: usize) -> Result<Vec<String>, NameError> {
        let part = name.snapshot(stage, bound)?;
        let mut problems = Vec::new();
        let n = self.pairs.len();
        let stride = (12 * n) as u64;
        for col in &self.columns {
            if let ColumnRecord::Edge { pair, summand, quotient: [p, q], .. } = *col {
                let (r, s) = self.column_position(pair, summand);
                let (u, v) = (r + s * p, r + s * q);
                if (u as usize) < bound && (v as usize) < bound && !part.same(u as usize, v as usize) {
                    problems.push(format!("edge column {r} does not merge elements {u} and {v}"));
                }
            }
        }
        for class in part.classes() {
            if let Some(&x) = class.iter().find(|&&x| x % stride != class[0] % stride) {
                problems.push(format!("elements {} and {x} lie in different columns but are equivalent", class[0]));
            }
        }
        Ok(problems)
    }
}

/// A name together with its label bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Name {
    pub ceer: StagedCeer,
    pub metadata: LabelMetadata,
}

impl Name {
    pub fn trace(&self, stages: usize, bound: usize) -> Result<CeerTrace, NameError> {
        let mut t = CeerTrace::materialize(&self.ceer, stages, bound)?;
        if let CeerTrace::Staged { label_metadata, .. } = &mut t {
            *label_metadata = Some(serde_json::to_value(&self.metadata).expect("metadata serializes"));
        }
        Ok(t)
    }
}

/// Read label metadata back out of a trace.
pub fn trace_metadata(t: &CeerTrace) -> Result<LabelMetadata, NameError> {
    match t {
        CeerTrace::Staged { label_metadata: Some(v), .. } => serde_json::from_value(v.clone()).map_err(|e| NameError::Metadata(e.to_string())),
        _ => Err(NameError::Metadata("trace carries no label metadata".into())),
    }
}

/// `⊕_{(X,Y) ∈ F} Z_(X,Y)`, drawing four fresh ceers per pair in the order
/// `a, b, c, d`.
pub fn build_name(f: &PairSet, fresh: &mut dyn Iterator<Item = Pointed>) -> Result<Name, NameError> {
    if f.is_empty() {
        return Err(NameError::EmptyPairSet);
    }
    let mut zs = Vec::with_capacity(f.len());
    let mut pairs = Vec::with_capacity(f.len());
    let mut columns = Vec::with_capacity(12 * f.len());
    let mut drawn = 0;
    for (k, &(xi, yi)) in f.pairs().iter().enumerate() {
        let quad: Vec<Pointed> = fresh.take(4).collect();
        drawn += quad.len();
        if quad.len() < 4 {
            return Err(NameError::FreshExhausted(drawn));
        }
        let (x, y) = (&f.pool()[xi], &f.pool()[yi]);
        zs.push(build_z(x, y, &quad)?);
        let id = |r: Role| match r {
            Role::X => xi as u64,
            Role::Y => yi as u64,
            other => f.fresh_id(k, other),
        };
        let rep = |r: Role| match r {
            Role::X => x.rep,
            Role::Y => y.rep,
            Role::A => quad[0].rep,
            Role::B => quad[1].rep,
            Role::C => quad[2].rep,
            Role::D => quad[3].rep,
        };
        pairs.push(PairRecord {
            x: xi as u64,
            y: yi as u64,
            gadget: [Role::A, Role::B, Role::C, Role::D].map(id),
        });
        for (j, s) in Z_SUMMANDS.iter().enumerate() {
            columns.push(match *s {
                ZSummand::Vertex { role } => ColumnRecord::Vertex { pair: k, summand: j, vertex: id(role), rep: rep(role) },
                ZSummand::Edge { left, right } => ColumnRecord::Edge {
                    pair: k,
                    summand: j,
                    left: id(left),
                    right: id(right),
                    quotient: [2 * rep(left), 2 * rep(right) + 1],
                },
            });
        }
    }
    Ok(Name {
        ceer: StagedCeer::join_many(zs)?,
        metadata: LabelMetadata { pool: f.pool().len(), pairs, columns },
    })
}

/// Fresh ceers `Ladder { period: start }, Ladder { period: start + 1 }, ...`
/// with representative 0. Distinct periods give distinct ceers; nothing
/// about their degrees is claimed.
pub fn ladder_supply(start: usize) -> impl Iterator<Item = Pointed> {
    (start.max(1)..).map(|period| Pointed::new(StagedCeer::Ladder { period }))
}
