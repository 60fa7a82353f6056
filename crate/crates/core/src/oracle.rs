//! Exhaustive ground-truth solvers for desk-scale inputs.
//!
//! Every search here is budgeted. Running out of budget is reported as
//! [`Error::Budget`], never as an answer.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::{Graph, Instance, PathPacking, ProblemKind, SolveResult, Vertex};
use crate::reductions::ExtendedInstance;

/// Resource limits for the exhaustive searches.
#[derive(Clone, Debug)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_nodes: u64,
    pub time_limit: Option<Duration>,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices: 16,
            max_nodes: 200_000_000,
            time_limit: Some(Duration::from_secs(120)),
        }
    }
}

impl OracleBudget {
    pub fn with_max_vertices(mut self, n: usize) -> Self {
        self.max_vertices = n;
        self
    }
}

struct Meter<'a> {
    budget: &'a OracleBudget,
    start: Instant,
    nodes: u64,
}

impl<'a> Meter<'a> {
    fn new(budget: &'a OracleBudget) -> Self {
        Meter {
            budget,
            start: Instant::now(),
            nodes: 0,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(Error::Budget(format!(
                "search exceeded {} nodes",
                self.budget.max_nodes
            )));
        }
        if self.nodes & 0xfff == 0 {
            if let Some(limit) = self.budget.time_limit {
                if self.start.elapsed() > limit {
                    return Err(Error::Budget(format!("search exceeded {limit:?}")));
                }
            }
        }
        Ok(())
    }
}

fn check_size(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::Budget(format!("{n} vertices exceeds oracle cap {cap}")));
    }
    Ok(())
}

/// Maximum packing found by exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxPacking {
    pub count: usize,
    pub witness: PathPacking,
    pub nodes: u64,
}

/// All A-paths whose length lies in `lengths`, oriented from the smaller
/// endpoint. Paths with the same vertex set are interchangeable for packing
/// and only the first one found is kept.
fn enumerate_a_paths(
    inst: &Instance,
    min_len: usize,
    max_len: usize,
    meter: &mut Meter<'_>,
) -> Result<Vec<Vec<Vertex>>> {
    let g = inst.graph();
    let mut out = Vec::new();
    let mut seen_sets: HashSet<Vec<Vertex>> = HashSet::new();
    let mut on_path = vec![false; g.n()];
    let mut path = Vec::with_capacity(max_len + 1);

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        inst: &Instance,
        g: &Graph,
        min_len: usize,
        max_len: usize,
        path: &mut Vec<Vertex>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<Vertex>>,
        seen_sets: &mut HashSet<Vec<Vertex>>,
        meter: &mut Meter<'_>,
    ) -> Result<()> {
        meter.tick()?;
        let v = *path.last().expect("non-empty");
        let len = path.len() - 1;
        let start = path[0];
        for &u in g.neighbors(v) {
            if on_path[u] {
                continue;
            }
            if inst.is_terminal(u) {
                if u > start && len + 1 >= min_len && len < max_len {
                    let mut p = path.clone();
                    p.push(u);
                    let mut key = p.clone();
                    key.sort_unstable();
                    if seen_sets.insert(key) {
                        out.push(p);
                    }
                }
            } else if len + 1 < max_len {
                on_path[u] = true;
                path.push(u);
                dfs(inst, g, min_len, max_len, path, on_path, out, seen_sets, meter)?;
                path.pop();
                on_path[u] = false;
            }
        }
        Ok(())
    }

    for &s in inst.terminals() {
        path.clear();
        path.push(s);
        on_path[s] = true;
        dfs(
            inst,
            g,
            min_len,
            max_len,
            &mut path,
            &mut on_path,
            &mut out,
            &mut seen_sets,
            meter,
        )?;
        on_path[s] = false;
    }
    Ok(out)
}

/// Maximum set packing of `paths` by branching on the smallest undecided
/// terminal: it either starts one of its paths or stays unused.
fn max_disjoint(
    inst: &Instance,
    paths: &[Vec<Vertex>],
    meter: &mut Meter<'_>,
) -> Result<Vec<usize>> {
    let terms = inst.terminals();
    let mut by_start: Vec<Vec<usize>> = vec![Vec::new(); terms.len()];
    let pos = |v: Vertex| terms.binary_search(&v).expect("terminal");
    for (i, p) in paths.iter().enumerate() {
        by_start[pos(p[0])].push(i);
    }

    struct Search<'s> {
        paths: &'s [Vec<Vertex>],
        by_start: &'s [Vec<usize>],
        terms: &'s [Vertex],
        used: Vec<bool>,
        current: Vec<usize>,
        best: Vec<usize>,
        cap: usize,
    }

    impl Search<'_> {
        fn go(&mut self, idx: usize, meter: &mut Meter<'_>) -> Result<()> {
            meter.tick()?;
            if self.best.len() == self.cap {
                return Ok(());
            }
            let mut i = idx;
            while i < self.terms.len() && self.used[self.terms[i]] {
                i += 1;
            }
            let free = (i..self.terms.len())
                .filter(|&j| !self.used[self.terms[j]])
                .count();
            if self.current.len() + free / 2 <= self.best.len() {
                return Ok(());
            }
            if i == self.terms.len() {
                return Ok(());
            }
            for &pi in &self.by_start[i] {
                let p = &self.paths[pi];
                if p.iter().any(|&v| self.used[v]) {
                    continue;
                }
                for &v in p {
                    self.used[v] = true;
                }
                self.current.push(pi);
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
                self.go(i + 1, meter)?;
                self.current.pop();
                for &v in p {
                    self.used[v] = false;
                }
            }
            // leave terms[i] unused
            let t = self.terms[i];
            self.used[t] = true;
            let r = self.go(i + 1, meter);
            self.used[t] = false;
            r
        }
    }

    let mut s = Search {
        paths,
        by_start: &by_start,
        terms,
        used: vec![false; inst.n()],
        current: Vec::new(),
        best: Vec::new(),
        cap: terms.len() / 2,
    };
    s.go(0, meter)?;
    Ok(s.best)
}

fn max_packing_impl(
    inst: &Instance,
    min_len: usize,
    max_len: usize,
    budget: &OracleBudget,
) -> Result<MaxPacking> {
    check_size(inst.n(), budget.max_vertices)?;
    let mut meter = Meter::new(budget);
    if max_len < min_len || inst.terminals().len() < 2 {
        return Ok(MaxPacking {
            count: 0,
            witness: PathPacking::default(),
            nodes: 0,
        });
    }
    let paths = enumerate_a_paths(inst, min_len, max_len, &mut meter)?;
    let chosen = max_disjoint(inst, &paths, &mut meter)?;
    let witness = PathPacking::new(chosen.iter().map(|&i| paths[i].clone()).collect());
    Ok(MaxPacking {
        count: chosen.len(),
        witness,
        nodes: meter.nodes,
    })
}

/// Exact maximum number of vertex-disjoint (A, ell)-paths.
pub fn oracle_max_packing(inst: &Instance) -> Result<MaxPacking> {
    oracle_max_packing_with(inst, &OracleBudget::default())
}

pub fn oracle_max_packing_with(inst: &Instance, budget: &OracleBudget) -> Result<MaxPacking> {
    let ell = inst.ell();
    if ell >= inst.n() {
        check_size(inst.n(), budget.max_vertices)?;
        return Ok(MaxPacking {
            count: 0,
            witness: PathPacking::default(),
            nodes: 0,
        });
    }
    max_packing_impl(inst, ell, ell, budget)
}

/// Exact maximum number of vertex-disjoint nontrivial A-paths of length at
/// most ell.
pub fn oracle_max_short_packing(inst: &Instance) -> Result<MaxPacking> {
    oracle_max_short_packing_with(inst, &OracleBudget::default())
}

pub fn oracle_max_short_packing_with(inst: &Instance, budget: &OracleBudget) -> Result<MaxPacking> {
    let max_len = inst.ell().min(inst.n().saturating_sub(1));
    max_packing_impl(inst, 1, max_len, budget)
}

/// Decision for the instance's own problem kind, with a witness of exactly
/// `k` paths on yes.
pub fn oracle_solve(inst: &Instance, budget: &OracleBudget) -> Result<SolveResult> {
    let best = match inst.kind() {
        ProblemKind::Alpp => oracle_max_packing_with(inst, budget)?,
        ProblemKind::Sapp => oracle_max_short_packing_with(inst, budget)?,
    };
    let mut res = if best.count >= inst.k() {
        let mut w = best.witness.clone();
        w.paths.truncate(inst.k());
        SolveResult::yes(Some(w))
    } else {
        SolveResult::no()
    }
    .with_optimum(best.count);
    res.stat("search_nodes", best.nodes);
    Ok(res)
}

/// Hard cap for [`oracle_exact_pathwidth`].
pub const PATHWIDTH_CAP: usize = 12;
/// Absolute ceiling for [`exact_pathwidth_capped`]; the table has `2^n`
/// entries.
pub const PATHWIDTH_CEILING: usize = 22;

/// Exact pathwidth, computed as the vertex separation number.
pub fn oracle_exact_pathwidth(g: &Graph) -> Result<usize> {
    exact_pathwidth_capped(g, PATHWIDTH_CAP)
}

/// [`oracle_exact_pathwidth`] with a caller-chosen vertex cap (at most
/// [`PATHWIDTH_CEILING`]).
///
/// `vs(S) = max(|boundary(S)|, min over v in S of vs(S - v))`, where the
/// boundary of a prefix `S` of a layout is the set of its vertices with a
/// neighbor outside `S`.
pub fn exact_pathwidth_capped(g: &Graph, cap: usize) -> Result<usize> {
    let n = g.n();
    check_size(n, cap.min(PATHWIDTH_CEILING))?;
    if n == 0 {
        return Ok(0);
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let full = (1u32 << n) - 1;
    let mut vs = vec![u8::MAX; 1usize << n];
    vs[0] = 0;
    for s in 1..=full {
        let mut boundary = 0u8;
        let mut best = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if nbr[v] & !s != 0 {
                boundary += 1;
            }
            best = best.min(vs[(s & !(1 << v)) as usize]);
        }
        vs[s as usize] = best.max(boundary);
    }
    Ok(vs[full as usize] as usize)
}

/// Searches for `r` vertex-disjoint paths, path `i` joining `s_i` and `t_i`
/// with weight exactly `l_i`. Returns the paths on yes.
pub fn oracle_weighted_disjoint_paths(x: &ExtendedInstance) -> Result<Option<Vec<Vec<Vertex>>>> {
    oracle_weighted_disjoint_paths_with(x, &OracleBudget::default().with_max_vertices(usize::MAX))
}

pub fn oracle_weighted_disjoint_paths_with(
    x: &ExtendedInstance,
    budget: &OracleBudget,
) -> Result<Option<Vec<Vec<Vertex>>>> {
    const MAX_TRIPLES: usize = 6;
    let r = x.triples().len();
    if r > MAX_TRIPLES {
        return Err(Error::Budget(format!("{r} triples exceeds cap {MAX_TRIPLES}")));
    }
    check_size(x.graph().n(), budget.max_vertices)?;
    let g = x.graph();
    let n = g.n();
    let mut is_endpoint = vec![false; n];
    for t in x.triples() {
        is_endpoint[t.source] = true;
        is_endpoint[t.target] = true;
    }
    // unconstrained weighted distance to each target, as an admissible bound
    let dist: Vec<Vec<u64>> = x.triples().iter().map(|t| x.distances_from(t.target)).collect();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by_key(|&i| x.triples()[i].length);

    struct Ctx<'c> {
        x: &'c ExtendedInstance,
        dist: &'c [Vec<u64>],
        is_endpoint: &'c [bool],
        order: &'c [usize],
        used: Vec<bool>,
        paths: Vec<Vec<Vertex>>,
    }

    impl Ctx<'_> {
        fn route(&mut self, slot: usize, meter: &mut Meter<'_>) -> Result<bool> {
            if slot == self.order.len() {
                return Ok(true);
            }
            let i = self.order[slot];
            let t = self.x.triples()[i];
            let mut path = vec![t.source];
            self.used[t.source] = true;
            let found = self.extend(slot, i, &mut path, 0, meter)?;
            self.used[t.source] = false;
            Ok(found)
        }

        fn extend(
            &mut self,
            slot: usize,
            i: usize,
            path: &mut Vec<Vertex>,
            weight: u64,
            meter: &mut Meter<'_>,
        ) -> Result<bool> {
            meter.tick()?;
            let t = self.x.triples()[i];
            let v = *path.last().expect("non-empty");
            let g = self.x.graph();
            for &u in g.neighbors(v) {
                if self.used[u] {
                    continue;
                }
                let w = weight + self.x.weight(v, u);
                if u == t.target {
                    if w == t.length {
                        path.push(u);
                        self.used[u] = true;
                        self.paths[i] = path.clone();
                        let done = self.route(slot + 1, meter)?;
                        self.used[u] = false;
                        path.pop();
                        if done {
                            return Ok(true);
                        }
                    }
                    continue;
                }
                if self.is_endpoint[u] {
                    continue;
                }
                let d = self.dist[i][u];
                if d == u64::MAX || w.saturating_add(d) > t.length {
                    continue;
                }
                self.used[u] = true;
                path.push(u);
                let done = self.extend(slot, i, path, w, meter)?;
                path.pop();
                self.used[u] = false;
                if done {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }

    let mut meter = Meter::new(budget);
    let mut ctx = Ctx {
        x,
        dist: &dist,
        is_endpoint: &is_endpoint,
        order: &order,
        used: vec![false; n],
        paths: vec![Vec::new(); r],
    };
    if ctx.route(0, &mut meter)? {
        Ok(Some(ctx.paths))
    } else {
        Ok(None)
    }
}

/// Brute-force subgraph containment (not necessarily induced): an injective
/// map from pattern vertices to host vertices that preserves edges.
///
/// When `identical_components` is set the pattern's connected components are
/// declared pairwise isomorphic, and images of their first vertices are forced
/// into increasing order to skip permuted copies of the same embedding.
pub fn oracle_subgraph_embedding(
    host: &Graph,
    pattern: &Graph,
    identical_components: bool,
    budget: &OracleBudget,
) -> Result<Option<Vec<Vertex>>> {
    let pn = pattern.n();
    if pn > host.n() || pattern.m() > host.m() {
        return Ok(None);
    }
    // BFS order inside each component, highest-degree root first
    let mut order = Vec::with_capacity(pn);
    let mut comp_root = vec![false; pn];
    let mut placed = vec![false; pn];
    let mut roots: Vec<Vertex> = Vec::new();
    for start in 0..pn {
        if placed[start] {
            continue;
        }
        let mut comp = vec![start];
        placed[start] = true;
        let mut q = 0;
        while q < comp.len() {
            let v = comp[q];
            q += 1;
            for &u in pattern.neighbors(v) {
                if !placed[u] {
                    placed[u] = true;
                    comp.push(u);
                }
            }
        }
        let root = *comp
            .iter()
            .max_by_key(|&&v| (pattern.degree(v), std::cmp::Reverse(v)))
            .expect("non-empty");
        let mut seen = vec![false; pn];
        let mut bfs = vec![root];
        seen[root] = true;
        let mut q = 0;
        while q < bfs.len() {
            let v = bfs[q];
            q += 1;
            let mut ns: Vec<Vertex> = pattern.neighbors(v).iter().copied().filter(|&u| !seen[u]).collect();
            ns.sort_by_key(|&u| std::cmp::Reverse(pattern.degree(u)));
            for u in ns {
                seen[u] = true;
                bfs.push(u);
            }
        }
        comp_root[root] = true;
        roots.push(root);
        order.extend(bfs);
    }

    struct Emb<'e> {
        host: &'e Graph,
        pattern: &'e Graph,
        order: &'e [Vertex],
        comp_root: &'e [bool],
        identical: bool,
        map: Vec<Option<Vertex>>,
        used: Vec<bool>,
        last_root_image: Vec<Vertex>,
    }

    impl Emb<'_> {
        fn go(&mut self, idx: usize, meter: &mut Meter<'_>) -> Result<bool> {
            if idx == self.order.len() {
                return Ok(true);
            }
            meter.tick()?;
            let p = self.order[idx];
            let anchor = self
                .pattern
                .neighbors(p)
                .iter()
                .find_map(|&q| self.map[q]);
            let candidates: Vec<Vertex> = match anchor {
                Some(h) => self.host.neighbors(h).to_vec(),
                None => {
                    let lo = if self.identical && self.comp_root[p] {
                        self.last_root_image.last().map_or(0, |&x| x + 1)
                    } else {
                        0
                    };
                    (lo..self.host.n()).collect()
                }
            };
            for h in candidates {
                if self.used[h] || self.host.degree(h) < self.pattern.degree(p) {
                    continue;
                }
                let ok = self.pattern.neighbors(p).iter().all(|&q| match self.map[q] {
                    Some(hq) => self.host.has_edge(h, hq),
                    None => true,
                });
                if !ok {
                    continue;
                }
                self.map[p] = Some(h);
                self.used[h] = true;
                let is_root = anchor.is_none() && self.comp_root[p];
                if is_root {
                    self.last_root_image.push(h);
                }
                let found = self.go(idx + 1, meter)?;
                if is_root {
                    self.last_root_image.pop();
                }
                if found {
                    return Ok(true);
                }
                self.used[h] = false;
                self.map[p] = None;
            }
            Ok(false)
        }
    }

    let mut meter = Meter::new(budget);
    let mut e = Emb {
        host,
        pattern,
        order: &order,
        comp_root: &comp_root,
        identical: identical_components,
        map: vec![None; pn],
        used: vec![false; host.n()],
        last_root_image: Vec::new(),
    };
    if e.go(0, &mut meter)? {
        Ok(Some(e.map.into_iter().map(|x| x.expect("mapped")).collect()))
    } else {
        Ok(None)
    }
}
