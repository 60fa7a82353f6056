//! Short paths to exact-length paths: every edge gets detours of all
//! lengths `1..=ell`, so a short path can be stretched by swapping one of
//! its edges for a longer detour.

use std::collections::BTreeMap;

use crate::colorcoding::{solve_color_coding, ColorCodingOptions};
use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, Instance, PathPacking, ProblemKind, SolveResult, Vertex};
use crate::matching::solve_small_ell;
use crate::oracle::{oracle_max_short_packing_with, OracleBudget};
use crate::td::{exact_decomposition, heuristic_tree_decomposition, make_nice, solve_dp, StateMode, TreeDecomposition};

/// Detours added for each original edge.
#[derive(Clone, Debug)]
pub struct SappTrace {
    original_n: usize,
    ell: usize,
    /// `(u, v)` with `u < v` to the internal vertices of the detours of
    /// lengths `2..=ell`, each ordered from `u` to `v`.
    detours: BTreeMap<(Vertex, Vertex), Vec<Vec<Vertex>>>,
}

impl SappTrace {
    pub fn original_n(&self) -> usize {
        self.original_n
    }

    /// Internal vertices of the detour of `length` between `u` and `v`,
    /// ordered from `u` to `v`.
    pub fn detour(&self, u: Vertex, v: Vertex, length: usize) -> Option<Vec<Vertex>> {
        if length == 1 {
            return Some(Vec::new());
        }
        let list = self.detours.get(&(u.min(v), u.max(v)))?;
        let mut d = list.get(length.checked_sub(2)?)?.clone();
        if u > v {
            d.reverse();
        }
        Some(d)
    }

    /// Stretches each short path to length `ell` by replacing its first
    /// edge with the detour of the missing length.
    pub fn forward(&self, packing: &PathPacking) -> Result<PathPacking> {
        let mut out = Vec::with_capacity(packing.len());
        for p in &packing.paths {
            let len = p.len().saturating_sub(1);
            if len == 0 || len > self.ell {
                return Err(Error::Input(format!("path of length {len} cannot be stretched")));
            }
            let detour = self
                .detour(p[0], p[1], self.ell - len + 1)
                .ok_or_else(|| Error::Input(format!("{{{}, {}}} is not an edge", p[0], p[1])))?;
            let mut q = vec![p[0]];
            q.extend(detour);
            q.extend_from_slice(&p[1..]);
            out.push(q);
        }
        Ok(PathPacking::new(out))
    }

    /// Contracts detours back to original edges.
    pub fn pull_back(&self, packing: &PathPacking) -> PathPacking {
        PathPacking::new(
            packing
                .paths
                .iter()
                .map(|p| p.iter().copied().filter(|&v| v < self.original_n).collect())
                .collect(),
        )
    }

    /// Extends a decomposition of the source graph to the reduced graph,
    /// adding at most one to the width.
    pub fn lift_decomposition(&self, td: &TreeDecomposition) -> TreeDecomposition {
        let mut bags = td.bags().to_vec();
        let mut edges = td.tree_edges().to_vec();
        for (&(u, v), list) in &self.detours {
            let host = bags
                .iter()
                .position(|b| b.binary_search(&u).is_ok() && b.binary_search(&v).is_ok())
                .expect("every edge lies in some bag");
            for internal in list {
                // u stays in every bag while the detour is walked towards v
                let mut prev = host;
                let mut chain: Vec<Vertex> = internal.clone();
                chain.push(v);
                for w in chain.windows(2).rev() {
                    bags.push(vec![u, w[0], w[1]]);
                    edges.push((prev, bags.len() - 1));
                    prev = bags.len() - 1;
                }
            }
        }
        TreeDecomposition::new(bags, edges)
    }
}

/// Builds the exact-length instance with the same terminals, `k` and `ell`.
pub fn reduce_sapp_to_alpp(inst: &Instance) -> Result<(Instance, SappTrace)> {
    if inst.kind() != ProblemKind::Sapp {
        return Err(Error::Contract("expected a short-path instance".into()));
    }
    let g = inst.graph();
    let ell = inst.ell();
    let mut b = GraphBuilder::new(g.n());
    let mut detours = BTreeMap::new();
    for (u, v) in g.edges() {
        b.add_edge(u, v)?;
        let list: Vec<Vec<Vertex>> = (2..=ell).map(|len| b.connect_by_path(u, v, len)).collect::<std::result::Result<_, _>>()?;
        detours.insert((u, v), list);
    }
    let reduced = Instance::new(b.build(), inst.terminals().to_vec(), inst.k(), ell)?;
    Ok((
        reduced,
        SappTrace {
            original_n: g.n(),
            ell,
            detours,
        },
    ))
}

/// Exact-length solver used behind [`solve_sapp`].
#[derive(Clone, Debug)]
pub enum Backend {
    /// Ground truth on the original graph (the reduced graph is too large
    /// for exhaustive search).
    Oracle(OracleBudget),
    Matching,
    Dp { mode: StateMode, exact_decomposition: bool },
    ColorCoding(ColorCodingOptions),
}

/// Decides a short-path instance by reducing it and running `backend`; the
/// witness is pulled back through the detours.
pub fn solve_sapp(inst: &Instance, backend: &Backend) -> Result<SolveResult> {
    if inst.kind() != ProblemKind::Sapp {
        return Err(Error::Contract("expected a short-path instance".into()));
    }
    if let Backend::Oracle(budget) = backend {
        let best = oracle_max_short_packing_with(inst, budget)?;
        let mut r = if best.count >= inst.k() {
            let mut w = best.witness;
            w.paths.truncate(inst.k());
            SolveResult::yes(Some(w))
        } else {
            SolveResult::no()
        };
        r.optimum = Some(best.count);
        r.stat("search_nodes", best.nodes);
        return Ok(r);
    }
    let (reduced, trace) = reduce_sapp_to_alpp(inst)?;
    let mut res = match backend {
        Backend::Oracle(_) => unreachable!("handled above"),
        Backend::Matching => solve_small_ell(&reduced)?,
        Backend::Dp {
            mode,
            exact_decomposition: exact,
        } => {
            let td = if *exact {
                exact_decomposition(inst.graph()).map(|(_, td)| trace.lift_decomposition(&td))?
            } else {
                trace.lift_decomposition(&heuristic_tree_decomposition(inst.graph(), None))
            };
            solve_dp(&reduced, &make_nice(&td), *mode)?
        }
        Backend::ColorCoding(opts) => solve_color_coding(&reduced, opts)?,
    };
    if let Some(w) = res.witness.take() {
        res.witness = Some(trace.pull_back(&w));
    }
    res.stat("reduced_vertices", reduced.n() as u64);
    res.stat("reduced_edges", reduced.graph().m() as u64);
    Ok(res)
}
