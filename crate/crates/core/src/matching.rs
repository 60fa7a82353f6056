//! Polynomial-time packing for `ell <= 3` through maximum matching.
//!
//! `ell = 1` is a matching in `G[A]`. `ell = 3` is decided on an auxiliary
//! graph with two copies of every non-terminal: the instance is a yes-instance
//! iff that graph has a matching of size `k + |V \ A|`. `ell = 2` is turned
//! into `ell = 3` by giving every non-terminal a true twin.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{trivial_no, Graph, GraphBuilder, Instance, PathPacking, ProblemKind, SolveResult, Vertex};

/// A set of pairwise vertex-disjoint edges, stored as a mate array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    mate: Vec<Option<Vertex>>,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Matching { mate: vec![None; n] }
    }

    /// Builds a matching from an edge list, rejecting edges that share a
    /// vertex.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut m = Matching::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::Input(format!("bad matching edge {{{u}, {v}}}")));
            }
            if m.mate[u].is_some() || m.mate[v].is_some() {
                return Err(Error::Input(format!("edge {{{u}, {v}}} shares a vertex")));
            }
            m.link(u, v);
        }
        Ok(m)
    }

    pub fn mate(&self, v: Vertex) -> Option<Vertex> {
        self.mate[v]
    }

    pub fn size(&self) -> usize {
        self.mate.iter().filter(|m| m.is_some()).count() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.mate
            .iter()
            .enumerate()
            .filter_map(|(u, m)| m.filter(|&v| u < v).map(|v| (u, v)))
            .collect()
    }

    pub fn is_valid_in(&self, g: &Graph) -> bool {
        self.mate.len() == g.n()
            && self.mate.iter().enumerate().all(|(u, m)| match *m {
                None => true,
                Some(v) => self.mate[v] == Some(u) && g.has_edge(u, v),
            })
    }

    fn link(&mut self, u: Vertex, v: Vertex) {
        self.mate[u] = Some(v);
        self.mate[v] = Some(u);
    }

    fn unlink(&mut self, u: Vertex, v: Vertex) {
        debug_assert_eq!(self.mate[u], Some(v));
        self.mate[u] = None;
        self.mate[v] = None;
    }
}

/// Maximum-cardinality matching in a general graph (Edmonds' blossom
/// algorithm; odd cycles are contracted while searching for augmenting
/// paths).
pub fn max_matching(g: &Graph) -> Matching {
    let n = g.n();
    let mut mate: Vec<Option<Vertex>> = vec![None; n];
    for v in 0..n {
        if mate[v].is_none() {
            if let Some(&u) = g.neighbors(v).iter().find(|&&u| mate[u].is_none()) {
                mate[v] = Some(u);
                mate[u] = Some(v);
            }
        }
    }
    let mut search = BlossomSearch::new(n);
    for root in 0..n {
        if mate[root].is_none() {
            if let Some(end) = search.augmenting_path(g, &mate, root) {
                // flip the alternating path ending at `end`
                let mut v = Some(end);
                while let Some(x) = v {
                    let pv = search.parent[x].expect("tree parent");
                    let next = mate[pv];
                    mate[x] = Some(pv);
                    mate[pv] = Some(x);
                    v = next;
                }
            }
        }
    }
    Matching { mate }
}

struct BlossomSearch {
    parent: Vec<Option<Vertex>>,
    base: Vec<Vertex>,
    in_tree: Vec<bool>,
    in_blossom: Vec<bool>,
    lca_mark: Vec<bool>,
    queue: VecDeque<Vertex>,
}

impl BlossomSearch {
    fn new(n: usize) -> Self {
        BlossomSearch {
            parent: vec![None; n],
            base: (0..n).collect(),
            in_tree: vec![false; n],
            in_blossom: vec![false; n],
            lca_mark: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lca(&mut self, mate: &[Option<Vertex>], mut a: Vertex, mut b: Vertex) -> Vertex {
        self.lca_mark.iter_mut().for_each(|x| *x = false);
        loop {
            a = self.base[a];
            self.lca_mark[a] = true;
            match mate[a] {
                None => break,
                Some(m) => a = self.parent[m].expect("outer vertex has a parent"),
            }
        }
        loop {
            b = self.base[b];
            if self.lca_mark[b] {
                return b;
            }
            let m = mate[b].expect("inner base is matched");
            b = self.parent[m].expect("outer vertex has a parent");
        }
    }

    fn mark_path(&mut self, mate: &[Option<Vertex>], mut v: Vertex, b: Vertex, mut child: Vertex) {
        while self.base[v] != b {
            let m = mate[v].expect("matched on blossom path");
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[m]] = true;
            self.parent[v] = Some(child);
            child = m;
            v = self.parent[m].expect("outer vertex has a parent");
        }
    }

    /// BFS over alternating paths from `root`; returns the free endpoint of
    /// an augmenting path with `parent` pointers describing it.
    fn augmenting_path(&mut self, g: &Graph, mate: &[Option<Vertex>], root: Vertex) -> Option<Vertex> {
        let n = g.n();
        self.parent.iter_mut().for_each(|p| *p = None);
        self.in_tree.iter_mut().for_each(|x| *x = false);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.queue.clear();
        self.in_tree[root] = true;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in g.neighbors(v) {
                if self.base[v] == self.base[to] || mate[v] == Some(to) {
                    continue;
                }
                let outer = to == root || mate[to].is_some_and(|m| self.parent[m].is_some());
                if outer {
                    let cur = self.lca(mate, v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(mate, v, cur, to);
                    self.mark_path(mate, to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.in_tree[i] {
                                self.in_tree[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to].is_none() {
                    self.parent[to] = Some(v);
                    match mate[to] {
                        None => return Some(to),
                        Some(m) => {
                            self.in_tree[m] = true;
                            self.queue.push_back(m);
                        }
                    }
                }
            }
        }
        None
    }
}

/// Which side of the auxiliary graph a vertex belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuxPart {
    Terminal,
    First,
    Second,
}

/// Edge classes of the auxiliary graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuxEdgeClass {
    /// `{u, v1}` for an edge `{u, v}` with `u` a terminal.
    TerminalFirst,
    /// `{v1, v2}` for every non-terminal `v`.
    Link,
    /// `{u2, v2}` for an edge between non-terminals.
    SecondSecond,
}

/// The auxiliary graph on `A + V1 + V2` used to decide `ell = 3`.
///
/// Terminals come first (in increasing order), then the first copies of the
/// non-terminals, then the second copies.
#[derive(Clone, Debug)]
pub struct AuxiliaryMatchingGraph {
    graph: Graph,
    part: Vec<AuxPart>,
    origin: Vec<Vertex>,
    first: Vec<Option<Vertex>>,
    second: Vec<Option<Vertex>>,
    nonterminals: usize,
}

impl AuxiliaryMatchingGraph {
    pub fn build(inst: &Instance) -> Self {
        let g = inst.graph();
        let terms = inst.terminals();
        let nonterm: Vec<Vertex> = (0..g.n()).filter(|&v| !inst.is_terminal(v)).collect();
        let q = nonterm.len();
        let a = terms.len();
        let total = a + 2 * q;
        let mut part = Vec::with_capacity(total);
        let mut origin = Vec::with_capacity(total);
        let mut term_id = vec![usize::MAX; g.n()];
        for (i, &t) in terms.iter().enumerate() {
            part.push(AuxPart::Terminal);
            origin.push(t);
            term_id[t] = i;
        }
        let mut first = vec![None; g.n()];
        let mut second = vec![None; g.n()];
        for (i, &v) in nonterm.iter().enumerate() {
            first[v] = Some(a + i);
            second[v] = Some(a + q + i);
        }
        part.extend(std::iter::repeat_n(AuxPart::First, q));
        origin.extend(nonterm.iter().copied());
        part.extend(std::iter::repeat_n(AuxPart::Second, q));
        origin.extend(nonterm.iter().copied());

        let mut b = GraphBuilder::new(total);
        let mut add = |x: Vertex, y: Vertex| b.add_edge(x, y).expect("auxiliary edges are simple");
        for (u, v) in g.edges() {
            match (inst.is_terminal(u), inst.is_terminal(v)) {
                (true, false) => add(term_id[u], first[v].expect("copy")),
                (false, true) => add(term_id[v], first[u].expect("copy")),
                (false, false) => add(second[u].expect("copy"), second[v].expect("copy")),
                (true, true) => {}
            }
        }
        for &v in &nonterm {
            add(first[v].expect("copy"), second[v].expect("copy"));
        }
        AuxiliaryMatchingGraph {
            graph: b.build(),
            part,
            origin,
            first,
            second,
            nonterminals: q,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn part(&self, x: Vertex) -> AuxPart {
        self.part[x]
    }

    /// Original vertex behind an auxiliary vertex.
    pub fn origin(&self, x: Vertex) -> Vertex {
        self.origin[x]
    }

    pub fn first_copy(&self, v: Vertex) -> Option<Vertex> {
        self.first[v]
    }

    pub fn second_copy(&self, v: Vertex) -> Option<Vertex> {
        self.second[v]
    }

    /// `|V \ A|`.
    pub fn nonterminal_count(&self) -> usize {
        self.nonterminals
    }

    pub fn edge_class(&self, x: Vertex, y: Vertex) -> Option<AuxEdgeClass> {
        if !self.graph.has_edge(x, y) {
            return None;
        }
        use AuxPart::*;
        Some(match (self.part[x], self.part[y]) {
            (Terminal, First) | (First, Terminal) => AuxEdgeClass::TerminalFirst,
            (First, Second) | (Second, First) => AuxEdgeClass::Link,
            (Second, Second) => AuxEdgeClass::SecondSecond,
            _ => unreachable!("no other edge classes are built"),
        })
    }

    /// Matching size that certifies `k` disjoint (A,3)-paths.
    pub fn threshold(&self, k: usize) -> usize {
        k + self.nonterminals
    }
}

/// Rewrites a maximum matching so that it covers every vertex of `V1 + V2`
/// without changing its size.
///
/// A first copy matched to a terminal while its second copy is free trades
/// that edge for the link edge. A free first copy whose second copy is
/// matched to another second copy `w2` takes the link edge instead, after
/// which `w` is repaired the same way.
pub fn saturate_matching(aux: &AuxiliaryMatchingGraph, m: &Matching) -> Result<Matching> {
    let g = aux.graph();
    if !m.is_valid_in(g) {
        return Err(Error::Contract("not a matching of the auxiliary graph".into()));
    }
    let max = max_matching(g).size();
    if m.size() != max {
        return Err(Error::Contract(format!(
            "matching of size {} is not maximum (maximum is {max})",
            m.size()
        )));
    }
    let grew = || Error::Contract("a swap enlarged the matching, so it was not maximum".into());
    let mut m = m.clone();
    let copies: Vec<(Vertex, Vertex)> = (0..g.n())
        .filter(|&x| aux.part(x) == AuxPart::First)
        .map(|x| (x, aux.second_copy(aux.origin(x)).expect("copy")))
        .collect();
    loop {
        let mut changed = false;
        for &(v1, v2) in &copies {
            match (m.mate(v1), m.mate(v2)) {
                (Some(_), Some(_)) => {}
                (None, None) => return Err(grew()),
                (Some(u), None) => {
                    m.unlink(u, v1);
                    m.link(v1, v2);
                    changed = true;
                }
                (None, Some(w2)) => {
                    m.unlink(v2, w2);
                    m.link(v1, v2);
                    let w1 = aux.first_copy(aux.origin(w2)).expect("copy");
                    match m.mate(w1) {
                        None => return Err(grew()),
                        Some(x) => {
                            m.unlink(x, w1);
                            m.link(w1, w2);
                        }
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    debug_assert_eq!(m.size(), max);
    Ok(m)
}

fn require_alpp(inst: &Instance, ell: usize) -> Result<()> {
    if inst.kind() != ProblemKind::Alpp {
        return Err(Error::Contract(
            "matching solver answers the exact-length problem; reduce short-path instances first".into(),
        ));
    }
    if inst.ell() != ell {
        return Err(Error::Contract(format!(
            "expected ell = {ell}, instance has ell = {}",
            inst.ell()
        )));
    }
    Ok(())
}

/// `ell = 1`: a maximum matching of `G[A]`.
pub fn solve_ell1(inst: &Instance) -> Result<SolveResult> {
    require_alpp(inst, 1)?;
    if trivial_no(inst) {
        return Ok(SolveResult::no());
    }
    let (sub, old) = inst.graph().induced(inst.terminal_mask());
    let m = max_matching(&sub);
    let mut res = if m.size() >= inst.k() {
        let paths = m
            .edges()
            .into_iter()
            .take(inst.k())
            .map(|(u, v)| vec![old[u], old[v]])
            .collect();
        SolveResult::yes(Some(PathPacking::new(paths)))
    } else {
        SolveResult::no()
    };
    res.stat("matching_size", m.size() as u64);
    Ok(res)
}

/// `ell = 2` instance rewritten as an equivalent `ell = 3` instance.
#[derive(Clone, Debug)]
pub struct TwinInstance {
    pub instance: Instance,
    /// For every vertex of the new instance, the original vertex it stands
    /// for (a twin maps to its original).
    pub original: Vec<Vertex>,
}

impl TwinInstance {
    /// Maps an (A,3)-path of the twin graph back to an (A,2)-path.
    pub fn pull_back(&self, path: &[Vertex]) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = Vec::with_capacity(3);
        for &v in path {
            let o = self.original[v];
            if out.last() != Some(&o) {
                out.push(o);
            }
        }
        out
    }
}

/// Drops edges inside `A` and inside `V \ A`, then adds a true twin `v'`
/// for every non-terminal `v`.
pub fn build_true_twin_instance(inst: &Instance) -> Result<TwinInstance> {
    require_alpp(inst, 2)?;
    let g = inst.graph();
    let n = g.n();
    let nonterm: Vec<Vertex> = (0..n).filter(|&v| !inst.is_terminal(v)).collect();
    let mut b = GraphBuilder::new(n + nonterm.len());
    let mut original: Vec<Vertex> = (0..n).collect();
    let mut twin = vec![usize::MAX; n];
    for (i, &v) in nonterm.iter().enumerate() {
        twin[v] = n + i;
        original.push(v);
    }
    for (u, v) in g.edges() {
        if inst.is_terminal(u) != inst.is_terminal(v) {
            let (a, x) = if inst.is_terminal(u) { (u, v) } else { (v, u) };
            b.add_edge(a, x)?;
            b.add_edge(a, twin[x])?;
        }
    }
    for &v in &nonterm {
        b.add_edge(v, twin[v])?;
    }
    let instance = Instance::new(b.build(), inst.terminals().to_vec(), inst.k(), 3)?;
    Ok(TwinInstance { instance, original })
}

/// `ell = 3` through the auxiliary matching graph.
pub fn solve_ell3(inst: &Instance) -> Result<SolveResult> {
    require_alpp(inst, 3)?;
    if inst.exceeds_terminal_pairs() {
        return Ok(SolveResult::no());
    }
    let aux = AuxiliaryMatchingGraph::build(inst);
    let m = max_matching(aux.graph());
    let threshold = aux.threshold(inst.k());
    let mut res = if m.size() >= threshold {
        let sat = saturate_matching(&aux, &m)?;
        let mut middle: Vec<(Vertex, Vertex)> = sat
            .edges()
            .into_iter()
            .filter(|&(x, y)| aux.edge_class(x, y) == Some(AuxEdgeClass::SecondSecond))
            .map(|(x, y)| {
                let (u, v) = (aux.origin(x), aux.origin(y));
                (u.min(v), u.max(v))
            })
            .collect();
        if middle.len() < inst.k() {
            return Err(Error::Contract(format!(
                "saturated matching has {} middle edges, fewer than k = {}",
                middle.len(),
                inst.k()
            )));
        }
        middle.sort_unstable();
        let end = |v: Vertex| {
            let x = sat
                .mate(aux.first_copy(v).expect("copy"))
                .expect("saturated matching covers every first copy");
            debug_assert_eq!(aux.part(x), AuxPart::Terminal);
            aux.origin(x)
        };
        let paths = middle
            .iter()
            .take(inst.k())
            .map(|&(u, v)| vec![end(u), u, v, end(v)])
            .collect();
        let mut r = SolveResult::yes(Some(PathPacking::new(paths)));
        r.stat("middle_edges", middle.len() as u64);
        r
    } else {
        SolveResult::no()
    };
    res.stat("aux_vertices", aux.graph().n() as u64);
    res.stat("aux_edges", aux.graph().m() as u64);
    res.stat("matching_size", m.size() as u64);
    res.stat("threshold", threshold as u64);
    Ok(res)
}

/// Dispatches on `ell` in `{1, 2, 3}`.
pub fn solve_small_ell(inst: &Instance) -> Result<SolveResult> {
    match inst.ell() {
        1 => solve_ell1(inst),
        2 => {
            if inst.kind() != ProblemKind::Alpp {
                return require_alpp(inst, 2).map(|_| unreachable!());
            }
            if inst.exceeds_terminal_pairs() {
                return Ok(SolveResult::no());
            }
            let twin = build_true_twin_instance(inst)?;
            let mut res = solve_ell3(&twin.instance)?;
            if let Some(w) = res.witness.take() {
                let paths = w.paths.iter().map(|p| twin.pull_back(p)).collect();
                res.witness = Some(PathPacking::new(paths));
            }
            Ok(res)
        }
        3 => solve_ell3(inst),
        ell => Err(Error::Contract(format!(
            "matching solver needs ell <= 3, got {ell}; for every fixed ell >= 4 the problem is NP-complete"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::verify_packing;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn p4_instance() -> Instance {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        Instance::new(g, vec![0, 3], 1, 3).unwrap()
    }

    /// Maximum matching by trying every edge subset (test oracle).
    fn brute_matching(g: &Graph) -> usize {
        let edges: Vec<_> = g.edges().collect();
        fn go(edges: &[(usize, usize)], i: usize, used: &mut Vec<bool>) -> usize {
            if i == edges.len() {
                return 0;
            }
            let skip = go(edges, i + 1, used);
            let (u, v) = edges[i];
            if used[u] || used[v] {
                return skip;
            }
            used[u] = true;
            used[v] = true;
            let take = 1 + go(edges, i + 1, used);
            used[u] = false;
            used[v] = false;
            skip.max(take)
        }
        go(&edges, 0, &mut vec![false; g.n()])
    }

    fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, e).unwrap()
    }

    #[test]
    fn matching_sizes() {
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(max_matching(&k2).size(), 1);
        assert_eq!(max_matching(&cycle(5)).size(), 2);
        let p = petersen();
        assert_eq!(brute_matching(&p), 5);
        let m = max_matching(&p);
        assert_eq!(m.size(), 5);
        assert!(m.is_valid_in(&p));
    }

    #[test]
    fn blossom_needed() {
        // triangle 0-1-2 with pendant 3 on vertex 2 and pendant 4 on vertex 0;
        // a greedy start matching {0,1} must be repaired through the odd cycle
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (0, 4)]).unwrap();
        assert_eq!(max_matching(&g).size(), 2);
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (2, 3), (0, 4), (1, 5)]).unwrap();
        assert_eq!(max_matching(&g).size(), 3);
    }

    #[test]
    fn ell1_examples() {
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        let yes = Instance::new(k2.clone(), vec![0, 1], 1, 1).unwrap();
        assert!(solve_small_ell(&yes).unwrap().decision);
        let no = Instance::new(k2, vec![0], 1, 1).unwrap();
        assert!(!solve_small_ell(&no).unwrap().decision);
        let c4 = Instance::new(cycle(4), vec![0, 1, 2, 3], 2, 1).unwrap();
        let r = solve_small_ell(&c4).unwrap();
        assert!(r.decision);
        assert!(verify_packing(&c4, r.witness.as_ref().unwrap()).unwrap().is_valid());
    }

    #[test]
    fn twin_transform_on_p3() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let inst = Instance::new(g, vec![0, 2], 1, 2).unwrap();
        let t = build_true_twin_instance(&inst).unwrap();
        let g2 = t.instance.graph();
        assert_eq!(g2.n(), 4);
        let edges: Vec<_> = g2.edges().collect();
        // vertex 3 is the twin of 1
        assert_eq!(edges, vec![(0, 1), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(t.pull_back(&[0, 1, 3, 2]), vec![0, 1, 2]);
        assert_eq!(t.pull_back(&[0, 3, 1, 2]), vec![0, 1, 2]);
    }

    #[test]
    fn twin_transform_prunes_terminal_edges() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let inst = Instance::new(g, vec![0, 2], 1, 2).unwrap();
        let t = build_true_twin_instance(&inst).unwrap();
        assert!(!t.instance.graph().has_edge(0, 2));

        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let inst = Instance::new(g, vec![0, 1], 1, 2).unwrap();
        let t = build_true_twin_instance(&inst).unwrap();
        assert_eq!(t.instance.graph().m(), 0);
        assert!(!solve_small_ell(&inst).unwrap().decision);
    }

    #[test]
    fn ell3_on_p4() {
        let inst = p4_instance();
        let aux = AuxiliaryMatchingGraph::build(&inst);
        assert_eq!(aux.graph().n(), 6);
        assert_eq!(brute_matching(aux.graph()), 3);
        let r = solve_ell3(&inst).unwrap();
        assert!(r.decision);
        assert_eq!(r.witness.unwrap().paths, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn aux_graph_edge_classes() {
        let inst = p4_instance();
        let aux = AuxiliaryMatchingGraph::build(&inst);
        let (b1, c1) = (aux.first_copy(1).unwrap(), aux.first_copy(2).unwrap());
        let (b2, c2) = (aux.second_copy(1).unwrap(), aux.second_copy(2).unwrap());
        assert_eq!(aux.edge_class(0, b1), Some(AuxEdgeClass::TerminalFirst));
        assert_eq!(aux.edge_class(1, c1), Some(AuxEdgeClass::TerminalFirst));
        assert_eq!(aux.edge_class(b1, b2), Some(AuxEdgeClass::Link));
        assert_eq!(aux.edge_class(b2, c2), Some(AuxEdgeClass::SecondSecond));
        assert_eq!(aux.edge_class(b1, c1), None);
        assert_eq!(aux.nonterminal_count(), 2);
    }

    #[test]
    fn saturation_examples() {
        let inst = p4_instance();
        let aux = AuxiliaryMatchingGraph::build(&inst);
        let a = 0; // terminal 0
        let d = 1; // terminal 3
        let (b1, c1) = (aux.first_copy(1).unwrap(), aux.first_copy(2).unwrap());
        let (b2, c2) = (aux.second_copy(1).unwrap(), aux.second_copy(2).unwrap());
        let n = aux.graph().n();

        let small = Matching::from_edges(n, &[(a, b1), (c1, c2)]).unwrap();
        assert!(matches!(saturate_matching(&aux, &small), Err(Error::Contract(_))));

        let full = Matching::from_edges(n, &[(a, b1), (b2, c2), (c1, d)]).unwrap();
        assert_eq!(saturate_matching(&aux, &full).unwrap(), full);
    }

    #[test]
    fn saturation_repairs_both_cases() {
        // star: terminal 0 joined to non-terminals 1 and 2, which are adjacent
        let g = Graph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let inst = Instance::new(g, vec![0], 1, 3).unwrap();
        let aux = AuxiliaryMatchingGraph::build(&inst);
        let n = aux.graph().n();
        let (x1, y1) = (aux.first_copy(1).unwrap(), aux.first_copy(2).unwrap());
        let (x2, y2) = (aux.second_copy(1).unwrap(), aux.second_copy(2).unwrap());
        // case 2 at vertex 2: y1 free, y2 matched to x2; x1 matched to the terminal
        let m = Matching::from_edges(n, &[(0, x1), (x2, y2)]).unwrap();
        let s = saturate_matching(&aux, &m).unwrap();
        assert_eq!(s.size(), 2);
        for v in [x1, y1, x2, y2] {
            assert!(s.mate(v).is_some());
        }
    }

    #[test]
    fn ell3_no_and_two_components() {
        let tri = Instance::new(cycle(3), vec![0], 1, 3).unwrap();
        assert!(!solve_small_ell(&tri).unwrap().decision);

        let g = Graph::from_edges(8, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)]).unwrap();
        let inst = Instance::new(g, vec![0, 3, 4, 7], 2, 3).unwrap();
        let r = solve_small_ell(&inst).unwrap();
        assert!(r.decision);
        assert!(verify_packing(&inst, r.witness.as_ref().unwrap()).unwrap().is_valid());
    }

    #[test]
    fn ell2_examples() {
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let inst = Instance::new(p3, vec![0, 2], 1, 2).unwrap();
        let r = solve_small_ell(&inst).unwrap();
        assert!(r.decision);
        assert_eq!(r.witness.unwrap().paths, vec![vec![0, 1, 2]]);

        let c4 = Instance::new(cycle(4), vec![0, 2], 1, 2).unwrap();
        let r = solve_small_ell(&c4).unwrap();
        assert!(r.decision);
        assert!(verify_packing(&c4, r.witness.as_ref().unwrap()).unwrap().is_valid());
    }

    #[test]
    fn rejects_long_paths() {
        let inst = p4_instance().with_ell(4).unwrap();
        let err = solve_small_ell(&inst).unwrap_err();
        assert!(err.to_string().contains("NP-complete"));
    }

    mod props {
        use super::super::*;
        use crate::oracle::oracle_max_packing;
        use proptest::prelude::*;

    fn arb_instance(max_n: usize, max_ell: usize) -> impl Strategy<Value = Instance> {
        (2..=max_n).prop_flat_map(move |n| {
            (
                proptest::collection::vec(any::<bool>(), n * (n - 1) / 2),
                proptest::collection::vec(any::<bool>(), n),
                1..=3usize,
                1..=max_ell,
            )
                .prop_map(move |(edges, terms, k, ell)| {
                    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
                    let g = Graph::from_edges(n, pairs.zip(edges).filter(|(_, e)| *e).map(|(p, _)| p)).unwrap();
                    let a = (0..n).filter(|&v| terms[v]).collect();
                    Instance::new(g, a, k, ell).unwrap()
                })
        })
    }

        fn brute(g: &Graph, used: &mut Vec<bool>, from: usize) -> usize {
            let Some(v) = (from..g.n()).find(|&v| !used[v]) else {
                return 0;
            };
            used[v] = true;
            let mut best = brute(g, used, v + 1);
            for &w in g.neighbors(v) {
                if !used[w] {
                    used[w] = true;
                    best = best.max(1 + brute(g, used, v + 1));
                    used[w] = false;
                }
            }
            used[v] = false;
            best
        }

        proptest! {
            #[test]
            fn blossom_is_maximum(inst in arb_instance(11, 1)) {
                let g = inst.graph();
                let m = max_matching(g);
                prop_assert!(m.is_valid_in(g));
                prop_assert_eq!(m.size(), brute(g, &mut vec![false; g.n()], 0));
            }

            #[test]
            fn small_ell_matches_oracle(inst in arb_instance(9, 3)) {
                let truth = oracle_max_packing(&inst).unwrap().count >= inst.k();
                let r = solve_small_ell(&inst).unwrap();
                prop_assert_eq!(r.decision, truth);
                if let Some(w) = &r.witness {
                    prop_assert!(crate::graph::verify_packing(&inst, w).unwrap().is_valid());
                }
            }
        }
    }
}
