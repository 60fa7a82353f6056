//! Seeded random instance models.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, Instance, ProblemKind};
use crate::reductions::MccInput;

/// Parameters shared by the random packing models.
#[derive(Clone, Copy, Debug)]
pub struct RandomParams {
    /// Fraction of vertices made terminals, rounded, at least 2.
    pub terminal_fraction: f64,
    pub k: usize,
    pub ell: usize,
    pub kind: ProblemKind,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            terminal_fraction: 0.4,
            k: 1,
            ell: 2,
            kind: ProblemKind::Alpp,
        }
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Input(format!("probability {p} is outside [0, 1]")));
    }
    Ok(())
}

fn pick_terminals(rng: &mut ChaCha8Rng, g: Graph, params: &RandomParams) -> Result<Instance> {
    check_probability(params.terminal_fraction)?;
    let n = g.n();
    let count = ((params.terminal_fraction * n as f64).round() as usize).max(2).min(n);
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    ids.truncate(count);
    Instance::with_kind(g, ids, params.k, params.ell, params.kind)
}

/// Erdős–Rényi graph `G(n, p)` with a random terminal set.
pub fn random_gnp(n: usize, p: f64, params: &RandomParams, seed: u64) -> Result<Instance> {
    check_probability(p)?;
    if n < 2 {
        return Err(Error::Input("need at least 2 vertices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                b.add_edge(u, v)?;
            }
        }
    }
    pick_terminals(&mut rng, b.build(), params)
}

/// `G(n, p)` conditioned on at most `max_edges` edges: surplus edges are
/// dropped at random.
pub fn random_gnp_capped(n: usize, p: f64, max_edges: usize, params: &RandomParams, seed: u64) -> Result<Instance> {
    let inst = random_gnp(n, p, params, seed)?;
    if inst.graph().m() <= max_edges {
        return Ok(inst);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut edges: Vec<_> = inst.graph().edges().collect();
    edges.shuffle(&mut rng);
    edges.truncate(max_edges);
    let g = Graph::from_edges(n, edges)?;
    Instance::with_kind(g, inst.terminals().to_vec(), inst.k(), inst.ell(), inst.kind())
}

/// Subgraph of the `rows × cols` grid keeping each edge with probability
/// `keep`. Treewidth is at most `min(rows, cols)`.
pub fn random_grid_subgraph(rows: usize, cols: usize, keep: f64, params: &RandomParams, seed: u64) -> Result<Instance> {
    check_probability(keep)?;
    if rows * cols < 2 {
        return Err(Error::Input("grid needs at least 2 vertices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = |r: usize, c: usize| r * cols + c;
    let mut b = GraphBuilder::new(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols && rng.random_bool(keep) {
                b.add_edge(id(r, c), id(r, c + 1))?;
            }
            if r + 1 < rows && rng.random_bool(keep) {
                b.add_edge(id(r, c), id(r + 1, c))?;
            }
        }
    }
    pick_terminals(&mut rng, b.build(), params)
}

/// Random multicolored clique input: each cross edge present with
/// probability `p`, plus a planted clique on random vertices if `plant`.
pub fn random_mcc(k: usize, n: usize, p: f64, plant: bool, seed: u64) -> Result<MccInput> {
    check_probability(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for c1 in 1..=k {
        for c2 in c1 + 1..=k {
            for j1 in 1..=n {
                for j2 in 1..=n {
                    if rng.random_bool(p) {
                        edges.push((c1, j1, c2, j2));
                    }
                }
            }
        }
    }
    if plant {
        let sigma: Vec<usize> = (0..k).map(|_| rng.random_range(1..=n)).collect();
        for c1 in 1..=k {
            for c2 in c1 + 1..=k {
                let e = (c1, sigma[c1 - 1], c2, sigma[c2 - 1]);
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
        }
    }
    MccInput::new(k, n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_under_seed() {
        let p = RandomParams {
            k: 2,
            ell: 3,
            ..RandomParams::default()
        };
        let a = random_gnp(10, 0.3, &p, 7).unwrap();
        assert_eq!(a, random_gnp(10, 0.3, &p, 7).unwrap());
        assert_eq!(a.terminals().len(), 4);
        let g = random_grid_subgraph(3, 4, 0.8, &p, 1).unwrap();
        assert_eq!(g, random_grid_subgraph(3, 4, 0.8, &p, 1).unwrap());
        assert!(g.graph().edges().all(|(u, v)| v == u + 1 || v == u + 4));
    }

    #[test]
    fn capped_edges() {
        let inst = random_gnp_capped(12, 0.9, 24, &RandomParams::default(), 3).unwrap();
        assert!(inst.graph().m() <= 24);
    }

    #[test]
    fn planted_clique_exists() {
        for seed in 0..10 {
            assert!(random_mcc(3, 3, 0.1, true, seed).unwrap().find_clique().is_some());
        }
    }

    #[test]
    fn bad_probability() {
        assert!(random_gnp(5, 1.5, &RandomParams::default(), 0).is_err());
    }
}
