//! Weighted disjoint paths with prescribed lengths, and their reduction to
//! full packing: weights become subdivisions, and each pair `(s_i, t_i)`
//! gets pendant paths whose lengths force `s_i'` to pair with `t_i'`.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashSet};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, Instance, PathPacking, Vertex};

/// Outputs with more vertices than this are refused.
pub const MAX_FULL_VERTICES: u128 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Triple {
    pub source: Vertex,
    pub target: Vertex,
    pub length: u64,
}

/// A graph with positive integer edge weights and triples `(s_i, t_i, l_i)`
/// asking for disjoint `s_i`-`t_i` paths of weight exactly `l_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedInstance {
    graph: Graph,
    weights: BTreeMap<(Vertex, Vertex), u64>,
    triples: Vec<Triple>,
}

impl ExtendedInstance {
    /// `weights` maps every edge `(u, v)`, `u < v`, to its weight.
    pub fn new(graph: Graph, weights: BTreeMap<(Vertex, Vertex), u64>, triples: Vec<(Vertex, Vertex, u64)>) -> Result<Self> {
        if weights.len() != graph.m() {
            return Err(Error::Input(format!(
                "{} weights for {} edges",
                weights.len(),
                graph.m()
            )));
        }
        for (&(u, v), &w) in &weights {
            if u >= v || !graph.has_edge(u, v) {
                return Err(Error::Input(format!("weight given for non-edge {{{u}, {v}}}")));
            }
            if w == 0 {
                return Err(Error::Input(format!("edge {{{u}, {v}}} has weight 0")));
            }
        }
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(triples.len());
        for (s, t, len) in triples {
            for x in [s, t] {
                if x >= graph.n() {
                    return Err(Error::Input(format!("triple endpoint {x} out of range")));
                }
                if !seen.insert(x) {
                    return Err(Error::Input(format!("vertex {x} is an endpoint of two triples")));
                }
            }
            if len == 0 {
                return Err(Error::Input(format!("triple ({s}, {t}) has length 0")));
            }
            out.push(Triple {
                source: s,
                target: t,
                length: len,
            });
        }
        Ok(ExtendedInstance {
            graph,
            weights,
            triples: out,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    /// Weight of the edge `{u, v}`; panics on a non-edge.
    pub fn weight(&self, u: Vertex, v: Vertex) -> u64 {
        self.weights[&(u.min(v), u.max(v))]
    }

    pub fn max_weight(&self) -> u64 {
        self.weights.values().copied().max().unwrap_or(0)
    }

    pub fn total_weight(&self) -> u128 {
        self.weights.values().map(|&w| w as u128).sum()
    }

    /// Weighted distances from `src`; `u64::MAX` marks unreachable vertices.
    pub fn distances_from(&self, src: Vertex) -> Vec<u64> {
        let mut dist = vec![u64::MAX; self.graph.n()];
        let mut heap = BinaryHeap::new();
        dist[src] = 0;
        heap.push(Reverse((0u64, src)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &u in self.graph.neighbors(v) {
                let nd = d.saturating_add(self.weight(v, u));
                if nd < dist[u] {
                    dist[u] = nd;
                    heap.push(Reverse((nd, u)));
                }
            }
        }
        dist
    }

    /// Checks that `paths[i]` joins the endpoints of triple `i` with the
    /// right weight and that the paths are vertex-disjoint. A path may be
    /// given in either direction.
    pub fn check_paths(&self, paths: &[Vec<Vertex>]) -> std::result::Result<(), String> {
        if paths.len() != self.triples.len() {
            return Err(format!("{} paths for {} triples", paths.len(), self.triples.len()));
        }
        let mut used = HashSet::new();
        for (i, (p, t)) in paths.iter().zip(&self.triples).enumerate() {
            let (Some(&a), Some(&b)) = (p.first(), p.last()) else {
                return Err(format!("path {i} is empty"));
            };
            if !((a, b) == (t.source, t.target) || (a, b) == (t.target, t.source)) {
                return Err(format!("path {i} does not join its triple's endpoints"));
            }
            let mut total: u64 = 0;
            for w in p.windows(2) {
                if w[0] >= self.graph.n() || w[1] >= self.graph.n() || !self.graph.has_edge(w[0], w[1]) {
                    return Err(format!("path {i} uses non-edge {{{}, {}}}", w[0], w[1]));
                }
                total += self.weight(w[0], w[1]);
            }
            if total != t.length {
                return Err(format!("path {i} has weight {total}, expected {}", t.length));
            }
            for &v in p {
                if !used.insert(v) {
                    return Err(format!("vertex {v} is used twice"));
                }
            }
        }
        Ok(())
    }
}

/// Sizes of the full packing instance, computed without building it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullPlan {
    /// Vertices after subdividing weighted edges.
    pub p: u128,
    pub ell: u128,
    pub terminals: usize,
    /// Lengths of the pendant paths at `s_i` and `t_i`.
    pub attachments: Vec<(u128, u128)>,
    pub vertices: u128,
    /// Index of a triple longer than any simple path, if there is one.
    pub unroutable: Option<usize>,
}

/// Computes the sizes of [`reduce_extended_to_full`]'s output.
///
/// A triple whose length is at least `p` cannot be routed by a simple path
/// of the subdivided graph; the output is then the fixed no-instance of
/// `2r` isolated terminals and `unroutable` names the first such triple.
pub fn plan_extended_to_full(x: &ExtendedInstance) -> Result<FullPlan> {
    let extra: u128 = x.weights.values().map(|&w| w as u128 - 1).sum();
    let p = x.graph.n() as u128 + extra;
    let r = x.triples.len();
    if let Some(bad) = x.triples.iter().position(|t| t.length as u128 >= p) {
        return Ok(FullPlan {
            p,
            ell: 2 * p * p,
            terminals: 2 * r,
            attachments: Vec::new(),
            vertices: 2 * r as u128,
            unroutable: Some(bad),
        });
    }
    let mut attachments = Vec::with_capacity(r);
    let mut vertices = p;
    for (idx, t) in x.triples.iter().enumerate() {
        let i = idx as u128 + 1;
        let s_len = p * p + i * p;
        // terminals are distinct, so i <= p/2 and length < p keep this positive
        let t_len = (p * p).checked_sub(i * p + t.length as u128).filter(|&l| l > 0).ok_or_else(|| {
            Error::Construction(format!(
                "triple {i} ({}, {}, {}): p^2 - i*p - length is not positive for p = {p}",
                t.source, t.target, t.length
            ))
        })?;
        attachments.push((s_len, t_len));
        vertices += s_len + t_len;
    }
    Ok(FullPlan {
        p,
        ell: 2 * p * p,
        terminals: 2 * r,
        attachments,
        vertices,
        unroutable: None,
    })
}

/// Where the pieces of the full instance came from.
#[derive(Clone, Debug)]
pub struct ExtendedTrace {
    original_n: usize,
    /// Internal vertices of each subdivided edge `(u, v)`, `u < v`, from
    /// `u` to `v`.
    subdivisions: BTreeMap<(Vertex, Vertex), Vec<Vertex>>,
    /// Pendant path at `s_i`, from `s_i` outwards (last vertex is `s_i'`).
    source_paths: Vec<Vec<Vertex>>,
    /// Pendant path at `t_i`, from `t_i` outwards (last vertex is `t_i'`).
    target_paths: Vec<Vec<Vertex>>,
    triples: Vec<Triple>,
    unroutable: Option<usize>,
}

impl ExtendedTrace {
    pub fn source_terminal(&self, i: usize) -> Vertex {
        *self.source_paths[i].last().expect("pendant paths are non-empty")
    }

    pub fn target_terminal(&self, i: usize) -> Vertex {
        *self.target_paths[i].last().expect("pendant paths are non-empty")
    }

    fn expand_edge(&self, u: Vertex, v: Vertex, out: &mut Vec<Vertex>) {
        if let Some(mid) = self.subdivisions.get(&(u.min(v), u.max(v))) {
            if u < v {
                out.extend(mid.iter().copied());
            } else {
                out.extend(mid.iter().rev().copied());
            }
        }
        out.push(v);
    }

    /// Maps weighted paths (one per triple, in triple order) to the
    /// `s_i'`-`t_i'` paths of the full instance.
    pub fn forward(&self, paths: &[Vec<Vertex>]) -> Result<PathPacking> {
        if paths.len() != self.triples.len() {
            return Err(Error::Input("one path per triple is required".into()));
        }
        if let Some(i) = self.unroutable {
            return Err(Error::Input(format!("triple {} is longer than any simple path", i + 1)));
        }
        let mut out = Vec::with_capacity(paths.len());
        for (i, p) in paths.iter().enumerate() {
            let t = self.triples[i];
            let mut p = p.clone();
            if p.first() == Some(&t.target) {
                p.reverse();
            }
            if p.first() != Some(&t.source) || p.last() != Some(&t.target) {
                return Err(Error::Input(format!("path {i} does not join its triple")));
            }
            let mut q: Vec<Vertex> = self.source_paths[i].iter().rev().copied().collect();
            for w in p.windows(2) {
                self.expand_edge(w[0], w[1], &mut q);
            }
            q.extend(self.target_paths[i].iter().skip(1).copied());
            out.push(q);
        }
        Ok(PathPacking::new(out))
    }

    /// Keeps the original vertices of each path, oriented from `s_i`.
    pub fn pull_back(&self, packing: &PathPacking) -> Vec<Vec<Vertex>> {
        let mut out = vec![Vec::new(); self.triples.len()];
        for p in &packing.paths {
            let Some(i) = (0..self.triples.len())
                .find(|&i| p.first() == Some(&self.source_terminal(i)) || p.last() == Some(&self.source_terminal(i)))
            else {
                continue;
            };
            let mut q: Vec<Vertex> = p.iter().copied().filter(|&v| v < self.original_n).collect();
            if q.first() != Some(&self.triples[i].source) {
                q.reverse();
            }
            out[i] = q;
        }
        out
    }
}

/// Builds the full packing instance with `|A| = 2r`, `k = r` and
/// `ell = 2p^2`, refusing outputs above [`MAX_FULL_VERTICES`].
pub fn reduce_extended_to_full(x: &ExtendedInstance) -> Result<(Instance, ExtendedTrace)> {
    reduce_extended_to_full_capped(x, MAX_FULL_VERTICES)
}

pub fn reduce_extended_to_full_capped(x: &ExtendedInstance, max_vertices: u128) -> Result<(Instance, ExtendedTrace)> {
    let plan = plan_extended_to_full(x)?;
    if plan.vertices > max_vertices {
        return Err(Error::Budget(format!(
            "full instance would have {} vertices (p = {}, ell = {}), limit is {max_vertices}",
            plan.vertices, plan.p, plan.ell
        )));
    }
    if x.triples.is_empty() {
        return Err(Error::Input("no triples to route".into()));
    }
    let n = x.graph.n();
    if plan.unroutable.is_some() {
        let r = x.triples.len();
        let inst = Instance::new(Graph::empty(2 * r), (0..2 * r).collect(), r, plan.ell as usize)?;
        let trace = ExtendedTrace {
            original_n: n,
            subdivisions: BTreeMap::new(),
            source_paths: (0..r).map(|i| vec![2 * i]).collect(),
            target_paths: (0..r).map(|i| vec![2 * i + 1]).collect(),
            triples: x.triples.clone(),
            unroutable: plan.unroutable,
        };
        return Ok((inst, trace));
    }
    let mut b = GraphBuilder::new(n);
    let mut subdivisions = BTreeMap::new();
    for (u, v) in x.graph.edges() {
        let w = x.weight(u, v) as usize;
        let mid = b.connect_by_path(u, v, w)?;
        if !mid.is_empty() {
            subdivisions.insert((u, v), mid);
        }
    }
    debug_assert_eq!(b.n() as u128, plan.p);
    let mut source_paths = Vec::new();
    let mut target_paths = Vec::new();
    let mut terminals = Vec::new();
    for (t, &(sl, tl)) in x.triples.iter().zip(&plan.attachments) {
        let mut sp = vec![t.source];
        sp.extend(b.attach_path(t.source, sl as usize));
        let mut tp = vec![t.target];
        tp.extend(b.attach_path(t.target, tl as usize));
        terminals.push(*sp.last().expect("non-empty"));
        terminals.push(*tp.last().expect("non-empty"));
        source_paths.push(sp);
        target_paths.push(tp);
    }
    let inst = Instance::new(b.build(), terminals, x.triples.len(), plan.ell as usize)?;
    Ok((
        inst,
        ExtendedTrace {
            original_n: n,
            subdivisions,
            source_paths,
            target_paths,
            triples: x.triples.clone(),
            unroutable: None,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::verify_packing;

    fn single_edge(weight: u64, length: u64) -> ExtendedInstance {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        ExtendedInstance::new(g, [((0, 1), weight)].into_iter().collect(), vec![(0, 1, length)]).unwrap()
    }

    #[test]
    fn plan_arithmetic() {
        let plan = plan_extended_to_full(&single_edge(2, 2)).unwrap();
        assert_eq!(plan.p, 3);
        assert_eq!(plan.ell, 18);
        assert_eq!(plan.attachments, vec![(12, 4)]);
        assert_eq!(plan.terminals, 2);
    }

    #[test]
    fn forward_witness_has_full_length() {
        let x = single_edge(2, 2);
        let (inst, trace) = reduce_extended_to_full(&x).unwrap();
        assert_eq!(inst.terminals().len(), 2);
        assert_eq!(inst.k(), 1);
        let packing = trace.forward(&[vec![0, 1]]).unwrap();
        assert_eq!(packing.paths[0].len() - 1, 18);
        assert!(verify_packing(&inst, &packing).unwrap().is_valid());
        assert_eq!(trace.pull_back(&packing), vec![vec![0, 1]]);
    }

    #[test]
    fn overlong_triple_gives_fixed_no_instance() {
        // p = 2, so no simple path has length 3
        let x = single_edge(1, 3);
        let plan = plan_extended_to_full(&x).unwrap();
        assert_eq!(plan.unroutable, Some(0));
        let (inst, trace) = reduce_extended_to_full(&x).unwrap();
        assert_eq!((inst.n(), inst.terminals().len(), inst.graph().m()), (2, 2, 0));
        assert!(trace.forward(&[vec![0, 1]]).is_err());
    }

    #[test]
    fn input_validation() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let w: BTreeMap<_, _> = [((0, 1), 1), ((1, 2), 1)].into_iter().collect();
        assert!(ExtendedInstance::new(g.clone(), w.clone(), vec![(0, 1, 1), (1, 2, 1)]).is_err());
        assert!(ExtendedInstance::new(g.clone(), w.clone(), vec![(0, 2, 0)]).is_err());
        let partial: BTreeMap<_, _> = [((0, 1), 1)].into_iter().collect();
        assert!(ExtendedInstance::new(g.clone(), partial, vec![]).is_err());
        let x = ExtendedInstance::new(g, w, vec![(0, 2, 2)]).unwrap();
        assert_eq!(x.distances_from(0), vec![0, 1, 2]);
        assert!(x.check_paths(&[vec![2, 1, 0]]).is_ok());
        assert!(x.check_paths(&[vec![0, 2]]).is_err());
    }

    #[test]
    fn size_guard() {
        let x = single_edge(50, 3);
        assert!(matches!(reduce_extended_to_full_capped(&x, 1000), Err(Error::Budget(_))));
    }
}
