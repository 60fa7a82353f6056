//! Graphs, instances, packings and the packing verifier.
//!
//! Vertices are dense indices `0..n`. Every graph is simple and undirected
//! with sorted neighbor lists, so two graphs with the same edge set compare
//! equal and hash identically.

use std::collections::BTreeMap;
use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::error::{Error, Result};

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: Vertex, n: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl Graph {
    /// Graph on `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> std::result::Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut b = GraphBuilder::new(n);
        for (u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && v < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.adj.iter().map(Vec::len).min()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Subgraph induced by the vertices with `keep[v]`, relabelled densely in
    /// increasing order. Returns the graph and the new-to-old vertex map.
    pub fn induced(&self, keep: &[bool]) -> (Graph, Vec<Vertex>) {
        let old: Vec<Vertex> = (0..self.n()).filter(|&v| keep[v]).collect();
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in old.iter().enumerate() {
            new_id[v] = i;
        }
        let mut b = GraphBuilder::new(old.len());
        for (u, v) in self.edges() {
            if keep[u] && keep[v] {
                b.push_edge_unchecked(new_id[u], new_id[v]);
            }
        }
        (b.build(), old)
    }

    /// Whether `vertices` is a simple path in this graph (distinct vertices,
    /// consecutive ones adjacent).
    pub fn is_path(&self, vertices: &[Vertex]) -> bool {
        let mut seen = std::collections::HashSet::new();
        vertices.iter().all(|&v| v < self.n() && seen.insert(v))
            && vertices.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }
}

/// Incremental construction of a [`Graph`].
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.adj.len() && self.adj[u].contains(&v)
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> std::result::Result<(), GraphError> {
        let n = self.adj.len();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.push_edge_unchecked(u, v);
        Ok(())
    }

    fn push_edge_unchecked(&mut self, u: Vertex, v: Vertex) {
        self.adj[u].push(v);
        self.adj[v].push(u);
        self.m += 1;
    }

    /// Appends a path of `length` edges hanging from `from` and returns the
    /// new vertices in order away from `from`.
    pub fn attach_path(&mut self, from: Vertex, length: usize) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(length);
        let mut prev = from;
        for _ in 0..length {
            let x = self.add_vertex();
            self.push_edge_unchecked(prev, x);
            out.push(x);
            prev = x;
        }
        out
    }

    /// Connects `u` and `v` by a fresh path of `length >= 1` edges and
    /// returns the internal vertices, ordered from `u` to `v`.
    pub fn connect_by_path(
        &mut self,
        u: Vertex,
        v: Vertex,
        length: usize,
    ) -> std::result::Result<Vec<Vertex>, GraphError> {
        assert!(length >= 1, "path length must be positive");
        if length == 1 {
            self.add_edge(u, v)?;
            return Ok(Vec::new());
        }
        let internal = self.attach_path(u, length - 1);
        let last = *internal.last().expect("non-empty");
        self.push_edge_unchecked(last, v);
        Ok(internal)
    }

    pub fn build(mut self) -> Graph {
        for ns in &mut self.adj {
            ns.sort_unstable();
        }
        Graph {
            adj: self.adj,
            m: self.m,
        }
    }
}

/// Which packing question an instance asks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    /// Paths of exactly `ell` edges.
    Alpp,
    /// Nontrivial paths of at most `ell` edges.
    Sapp,
}

impl ProblemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKind::Alpp => "alpp",
            ProblemKind::Sapp => "sapp",
        }
    }
}

/// A graph, a terminal set `A`, the demanded path count `k` and the length
/// parameter `ell`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    graph: Graph,
    terminals: Vec<Vertex>,
    is_terminal: Vec<bool>,
    k: usize,
    ell: usize,
    kind: ProblemKind,
}

impl Instance {
    pub fn new(graph: Graph, terminals: Vec<Vertex>, k: usize, ell: usize) -> Result<Self> {
        Self::with_kind(graph, terminals, k, ell, ProblemKind::Alpp)
    }

    pub fn with_kind(
        graph: Graph,
        mut terminals: Vec<Vertex>,
        k: usize,
        ell: usize,
        kind: ProblemKind,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("k must be positive".into()));
        }
        if ell == 0 {
            return Err(Error::Input("ell must be positive".into()));
        }
        let n = graph.n();
        let mut is_terminal = vec![false; n];
        for &t in &terminals {
            if t >= n {
                return Err(GraphError::VertexOutOfRange { vertex: t, n }.into());
            }
            if is_terminal[t] {
                return Err(Error::Input(format!("terminal {t} listed twice")));
            }
            is_terminal[t] = true;
        }
        terminals.sort_unstable();
        Ok(Instance {
            graph,
            terminals,
            is_terminal,
            k,
            ell,
            kind,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn terminals(&self) -> &[Vertex] {
        &self.terminals
    }

    pub fn is_terminal(&self, v: Vertex) -> bool {
        self.is_terminal[v]
    }

    pub fn terminal_mask(&self) -> &[bool] {
        &self.is_terminal
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn with_k(&self, k: usize) -> Result<Self> {
        Self::with_kind(self.graph.clone(), self.terminals.clone(), k, self.ell, self.kind)
    }

    pub fn with_ell(&self, ell: usize) -> Result<Self> {
        Self::with_kind(self.graph.clone(), self.terminals.clone(), self.k, ell, self.kind)
    }

    pub fn as_kind(&self, kind: ProblemKind) -> Self {
        Instance { kind, ..self.clone() }
    }

    /// `k > |A|/2`: no family of `k` disjoint A-paths can exist.
    pub fn exceeds_terminal_pairs(&self) -> bool {
        2 * self.k > self.terminals.len()
    }

    /// Hex SHA-256 of the canonical serialization.
    pub fn digest(&self) -> String {
        let text = crate::io::serialize_instance(self);
        Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// A family of paths, each a vertex sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PathPacking {
    pub paths: Vec<Vec<Vertex>>,
}

impl PathPacking {
    pub fn new(paths: Vec<Vec<Vertex>>) -> Self {
        PathPacking { paths }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Orients every path from its smaller endpoint and sorts the family.
    pub fn normalized(mut self) -> Self {
        for p in &mut self.paths {
            if p.first() > p.last() {
                p.reverse();
            }
        }
        self.paths.sort();
        self
    }
}

/// The first rule a packing breaks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    TrivialPath { path: usize },
    WrongLength { path: usize, length: usize, expected: String },
    EndpointNotTerminal { path: usize, vertex: Vertex },
    InternalTerminal { path: usize, vertex: Vertex },
    NotDisjoint { vertex: Vertex },
    WrongCount { found: usize, expected: usize },
    NotAdjacent { path: usize, u: Vertex, v: Vertex },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TrivialPath { path } => write!(f, "path {path} is trivial"),
            Violation::WrongLength {
                path,
                length,
                expected,
            } => write!(f, "path {path} has length {length}, expected {expected}"),
            Violation::EndpointNotTerminal { path, vertex } => {
                write!(f, "path {path} ends at non-terminal {vertex}")
            }
            Violation::InternalTerminal { path, vertex } => {
                write!(f, "path {path} passes through terminal {vertex}")
            }
            Violation::NotDisjoint { vertex } => write!(f, "vertex {vertex} is used twice"),
            Violation::WrongCount { found, expected } => {
                write!(f, "{found} paths given, expected {expected}")
            }
            Violation::NotAdjacent { path, u, v } => {
                write!(f, "path {path} uses non-edge {{{u}, {v}}}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(Violation),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

#[derive(Clone, Copy)]
enum LengthRule {
    Exact(usize),
    AtMost(usize),
}

fn check_packing(inst: &Instance, packing: &PathPacking, rule: LengthRule) -> Result<Verdict> {
    let n = inst.n();
    for p in &packing.paths {
        if let Some(&v) = p.iter().find(|&&v| v >= n) {
            return Err(Error::Malformed(format!("vertex {v} out of range (n = {n})")));
        }
    }
    let g = inst.graph();
    let mut used = vec![false; n];
    for (i, p) in packing.paths.iter().enumerate() {
        let len = p.len().saturating_sub(1);
        match rule {
            LengthRule::Exact(ell) if len != ell => {
                return Ok(Verdict::Invalid(Violation::WrongLength {
                    path: i,
                    length: len,
                    expected: ell.to_string(),
                }))
            }
            LengthRule::AtMost(_) if len == 0 => {
                return Ok(Verdict::Invalid(Violation::TrivialPath { path: i }))
            }
            LengthRule::AtMost(ell) if len > ell => {
                return Ok(Verdict::Invalid(Violation::WrongLength {
                    path: i,
                    length: len,
                    expected: format!("1..={ell}"),
                }))
            }
            _ => {}
        }
        if p.is_empty() {
            return Ok(Verdict::Invalid(Violation::TrivialPath { path: i }));
        }
        for &end in [p[0], p[p.len() - 1]].iter() {
            if !inst.is_terminal(end) {
                return Ok(Verdict::Invalid(Violation::EndpointNotTerminal { path: i, vertex: end }));
            }
        }
        if p.len() > 2 {
            if let Some(&v) = p[1..p.len() - 1].iter().find(|&&v| inst.is_terminal(v)) {
                return Ok(Verdict::Invalid(Violation::InternalTerminal { path: i, vertex: v }));
            }
        }
        for &v in p {
            if used[v] {
                return Ok(Verdict::Invalid(Violation::NotDisjoint { vertex: v }));
            }
            used[v] = true;
        }
        if let Some(w) = p.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
            return Ok(Verdict::Invalid(Violation::NotAdjacent {
                path: i,
                u: w[0],
                v: w[1],
            }));
        }
    }
    if packing.len() != inst.k() {
        return Ok(Verdict::Invalid(Violation::WrongCount {
            found: packing.len(),
            expected: inst.k(),
        }));
    }
    Ok(Verdict::Valid)
}

/// Checks that `packing` is `k` vertex-disjoint (A, ell)-paths of `inst`.
pub fn verify_packing(inst: &Instance, packing: &PathPacking) -> Result<Verdict> {
    check_packing(inst, packing, LengthRule::Exact(inst.ell()))
}

/// Checks that `packing` is `k` vertex-disjoint nontrivial A-paths of length
/// at most ell.
pub fn verify_short_packing(inst: &Instance, packing: &PathPacking) -> Result<Verdict> {
    check_packing(inst, packing, LengthRule::AtMost(inst.ell()))
}

/// Verifies against the rule matching the instance's [`ProblemKind`].
pub fn verify(inst: &Instance, packing: &PathPacking) -> Result<Verdict> {
    match inst.kind() {
        ProblemKind::Alpp => verify_packing(inst, packing),
        ProblemKind::Sapp => verify_short_packing(inst, packing),
    }
}

/// Outcome of a solver run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveResult {
    pub decision: bool,
    pub witness: Option<PathPacking>,
    /// Maximum number of disjoint paths, for solvers that optimize.
    pub optimum: Option<usize>,
    pub stats: BTreeMap<String, u64>,
}

impl SolveResult {
    pub fn no() -> Self {
        SolveResult::default()
    }

    pub fn yes(witness: Option<PathPacking>) -> Self {
        SolveResult {
            decision: true,
            witness,
            ..Default::default()
        }
    }

    pub fn with_optimum(mut self, optimum: usize) -> Self {
        self.optimum = Some(optimum);
        self
    }

    pub fn stat(&mut self, name: &str, value: u64) {
        self.stats.insert(name.to_string(), value);
    }
}

/// Answers shared by all solvers before any real work: `k > |A|/2`, or an
/// exact-length instance whose paths would need more than `n` vertices.
pub(crate) fn trivial_no(inst: &Instance) -> bool {
    inst.exceeds_terminal_pairs() || (inst.kind() == ProblemKind::Alpp && inst.ell() >= inst.n())
}
