//! Tree decompositions: acquisition, nice form, and the packing DP.

mod decomposition;
mod dp;
mod nice;

pub use decomposition::{
    exact_decomposition, exact_treewidth, exact_treewidth_capped, heuristic_tree_decomposition,
    Heuristic, EXACT_TREEWIDTH_CAP,
};
pub use dp::{solve_dp, solve_dp_with, DpOptions, StateMode};
pub use nice::{make_nice, NiceNode, NiceTreeDecomposition};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Bags plus tree edges over bag indices. Bags are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<Vertex>>,
    edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(mut bags: Vec<Vec<Vertex>>, edges: Vec<(usize, usize)>) -> Self {
        for b in &mut bags {
            b.sort_unstable();
            b.dedup();
        }
        TreeDecomposition { bags, edges }
    }

    pub fn bags(&self) -> &[Vec<Vertex>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// Adjacency lists of the decomposition tree.
    pub fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    /// Checks that the tree is a tree and that vertex coverage, edge
    /// coverage and per-vertex connectivity hold for `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let nb = self.bags.len();
        let bad = |m: String| Err(Error::Contract(format!("invalid tree decomposition: {m}")));
        if nb == 0 {
            return if g.n() == 0 { Ok(()) } else { bad("no bags".into()) };
        }
        for &(i, j) in &self.edges {
            if i >= nb || j >= nb || i == j {
                return bad(format!("bad tree edge ({i}, {j})"));
            }
        }
        if self.edges.len() != nb - 1 {
            return bad(format!("{} tree edges for {nb} bags", self.edges.len()));
        }
        let adj = self.tree_adjacency();
        let mut seen = vec![false; nb];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(b) = stack.pop() {
            for &c in &adj[b] {
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("tree is disconnected".into());
        }
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= g.n() {
                    return bad(format!("vertex {v} out of range"));
                }
                holders[v].push(i);
            }
        }
        for (v, hs) in holders.iter().enumerate() {
            if hs.is_empty() {
                return bad(format!("vertex {v} in no bag"));
            }
        }
        for (u, v) in g.edges() {
            if !holders[u].iter().any(|&b| self.bags[b].binary_search(&v).is_ok()) {
                return bad(format!("edge {{{u}, {v}}} in no bag"));
            }
        }
        // bags holding v must induce a connected subtree
        let mut mark = vec![usize::MAX; nb];
        for (v, hs) in holders.iter().enumerate() {
            for &b in hs {
                mark[b] = v;
            }
            let mut reached = 1;
            let mut stack = vec![hs[0]];
            mark[hs[0]] = usize::MAX - 1;
            while let Some(b) = stack.pop() {
                for &c in &adj[b] {
                    if mark[c] == v {
                        mark[c] = usize::MAX - 1;
                        reached += 1;
                        stack.push(c);
                    }
                }
            }
            if reached != hs.len() {
                return bad(format!("bags containing vertex {v} are not connected"));
            }
            for &b in hs {
                mark[b] = usize::MAX;
            }
        }
        Ok(())
    }
}
