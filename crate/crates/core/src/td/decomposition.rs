//! Decompositions from elimination orderings: greedy heuristics and an exact
//! subset DP for small graphs.

use std::collections::BTreeSet;

use super::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Default vertex cap for [`exact_treewidth`].
pub const EXACT_TREEWIDTH_CAP: usize = 12;
const EXACT_TREEWIDTH_CEILING: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Heuristic {
    MinDegree,
    MinFill,
}

fn fill_in(adj: &[BTreeSet<Vertex>], v: Vertex) -> usize {
    let nb: Vec<_> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nb.iter().enumerate() {
        for &b in &nb[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

fn greedy_order(g: &Graph, h: Heuristic) -> Vec<Vertex> {
    let n = g.n();
    let mut adj: Vec<BTreeSet<Vertex>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| match h {
                Heuristic::MinDegree => (adj[v].len(), 0, v),
                Heuristic::MinFill => (fill_in(&adj, v), adj[v].len(), v),
            })
            .expect("a live vertex remains");
        eliminate(&mut adj, v);
        alive[v] = false;
        order.push(v);
    }
    order
}

fn eliminate(adj: &mut [BTreeSet<Vertex>], v: Vertex) -> Vec<Vertex> {
    let nb: Vec<Vertex> = std::mem::take(&mut adj[v]).into_iter().collect();
    for &a in &nb {
        adj[a].remove(&v);
        for &b in &nb {
            if a != b {
                adj[a].insert(b);
            }
        }
    }
    nb
}

/// Tree decomposition induced by eliminating vertices in `order`.
pub(crate) fn decomposition_from_order(g: &Graph, order: &[Vertex]) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition::new(vec![vec![]], vec![]);
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<Vertex>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut parent = vec![None; n];
    for (i, &v) in order.iter().enumerate() {
        let nb = eliminate(&mut adj, v);
        parent[i] = nb.iter().map(|&u| pos[u]).min();
        let mut bag = nb;
        bag.push(v);
        bags.push(bag);
    }
    let mut edges = Vec::new();
    let mut last_root: Option<usize> = None;
    for (i, par) in parent.iter().enumerate() {
        match *par {
            Some(p) => edges.push((i, p)),
            None => {
                if let Some(r) = last_root {
                    edges.push((r, i));
                }
                last_root = Some(i);
            }
        }
    }
    simplify(TreeDecomposition::new(bags, edges))
}

/// Contracts tree edges whose bags are nested.
fn simplify(td: TreeDecomposition) -> TreeDecomposition {
    let nb = td.bags.len();
    let mut bags: Vec<Option<Vec<Vertex>>> = td.bags.into_iter().map(Some).collect();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nb];
    for &(i, j) in &td.edges {
        adj[i].insert(j);
        adj[j].insert(i);
    }
    let subset = |a: &[Vertex], b: &[Vertex]| a.iter().all(|x| b.binary_search(x).is_ok());
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..nb {
            let Some(bi) = bags[i].clone() else { continue };
            let target = adj[i]
                .iter()
                .copied()
                .find(|&j| bags[j].as_deref().is_some_and(|bj| subset(&bi, bj)));
            if let Some(j) = target {
                let nbrs: Vec<usize> = std::mem::take(&mut adj[i]).into_iter().collect();
                for c in nbrs {
                    adj[c].remove(&i);
                    if c != j {
                        adj[c].insert(j);
                        adj[j].insert(c);
                    }
                }
                bags[i] = None;
                changed = true;
            }
        }
    }
    let mut index = vec![usize::MAX; nb];
    let mut out = Vec::new();
    for (i, b) in bags.iter().enumerate() {
        if let Some(b) = b {
            index[i] = out.len();
            out.push(b.clone());
        }
    }
    let mut edges = Vec::new();
    for i in 0..nb {
        for &j in &adj[i] {
            if i < j && index[i] != usize::MAX && index[j] != usize::MAX {
                edges.push((index[i], index[j]));
            }
        }
    }
    TreeDecomposition::new(out, edges)
}

/// Greedy elimination decomposition. `None` for the strategy picks the
/// narrower of min-degree and min-fill.
pub fn heuristic_tree_decomposition(g: &Graph, strategy: Option<Heuristic>) -> TreeDecomposition {
    match strategy {
        Some(h) => decomposition_from_order(g, &greedy_order(g, h)),
        None => {
            let a = decomposition_from_order(g, &greedy_order(g, Heuristic::MinFill));
            let b = decomposition_from_order(g, &greedy_order(g, Heuristic::MinDegree));
            if b.width() < a.width() {
                b
            } else {
                a
            }
        }
    }
}

fn masks(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect()
}

/// Neighbours outside `s + v` of the component of `v` in `G[s + v]`.
fn outer_degree(adj: &[u32], s: u32, v: usize) -> u32 {
    let mut comp = 1u32 << v;
    let mut frontier = comp;
    let mut reach = 0u32;
    while frontier != 0 {
        let x = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        reach |= adj[x];
        let new = adj[x] & s & !comp;
        comp |= new;
        frontier |= new;
    }
    (reach & !(s | (1 << v))).count_ones()
}

fn treewidth_table(g: &Graph, cap: usize) -> Result<Vec<u8>> {
    let n = g.n();
    let cap = cap.min(EXACT_TREEWIDTH_CEILING);
    if n > cap {
        return Err(Error::Budget(format!(
            "exact treewidth limited to {cap} vertices, graph has {n}"
        )));
    }
    let adj = masks(g);
    let full = if n == 0 { 0 } else { (1u64 << n) - 1 } as usize;
    let mut tw = vec![u8::MAX; full + 1];
    tw[0] = 0;
    for s in 1..=full as u32 {
        let mut best = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1 << v);
            let q = outer_degree(&adj, without, v) as u8;
            best = best.min(tw[without as usize].max(q));
        }
        tw[s as usize] = best;
    }
    Ok(tw)
}

/// Exact treewidth for graphs with at most [`EXACT_TREEWIDTH_CAP`] vertices.
pub fn exact_treewidth(g: &Graph) -> Result<usize> {
    exact_treewidth_capped(g, EXACT_TREEWIDTH_CAP)
}

/// Exact treewidth with a caller-chosen vertex cap (at most 20).
pub fn exact_treewidth_capped(g: &Graph, cap: usize) -> Result<usize> {
    let tw = treewidth_table(g, cap)?;
    Ok(*tw.last().expect("table is non-empty") as usize)
}

/// An optimal-width decomposition for small graphs, with its width.
pub fn exact_decomposition(g: &Graph) -> Result<(usize, TreeDecomposition)> {
    let tw = treewidth_table(g, EXACT_TREEWIDTH_CAP)?;
    let adj = masks(g);
    let mut s = tw.len() as u32 - 1;
    let mut rev = Vec::with_capacity(g.n());
    while s != 0 {
        let target = tw[s as usize];
        let mut rest = s;
        let v = loop {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1 << v);
            if tw[without as usize].max(outer_degree(&adj, without, v) as u8) == target {
                break v;
            }
        };
        rev.push(v);
        s &= !(1 << v);
    }
    rev.reverse();
    let td = decomposition_from_order(g, &rev);
    let width = *tw.last().expect("table is non-empty") as usize;
    debug_assert_eq!(td.width(), width);
    Ok((width, td))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(r: usize, c: usize) -> Graph {
        let mut e = Vec::new();
        for i in 0..r {
            for j in 0..c {
                let v = i * c + j;
                if j + 1 < c {
                    e.push((v, v + 1));
                }
                if i + 1 < r {
                    e.push((v, v + c));
                }
            }
        }
        Graph::from_edges(r * c, e).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn heuristic_widths() {
        let tree = Graph::from_edges(6, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)]).unwrap();
        for h in [Heuristic::MinDegree, Heuristic::MinFill] {
            let td = heuristic_tree_decomposition(&tree, Some(h));
            td.validate(&tree).unwrap();
            assert_eq!(td.width(), 1);
            let td = heuristic_tree_decomposition(&cycle(5), Some(h));
            td.validate(&cycle(5)).unwrap();
            assert_eq!(td.width(), 2);
            let td = heuristic_tree_decomposition(&complete(5), Some(h));
            assert_eq!(td.width(), 4);
            assert_eq!(td.bags().len(), 1);
        }
    }

    #[test]
    fn disconnected_and_empty() {
        let g = Graph::from_edges(5, [(0, 1), (3, 4)]).unwrap();
        let td = heuristic_tree_decomposition(&g, None);
        td.validate(&g).unwrap();
        let e = Graph::empty(0);
        heuristic_tree_decomposition(&e, None).validate(&e).unwrap();
        assert_eq!(exact_treewidth(&e).unwrap(), 0);
    }

    #[test]
    fn exact_values() {
        let tree = Graph::from_edges(4, [(0, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(exact_treewidth(&tree).unwrap(), 1);
        assert_eq!(exact_treewidth(&cycle(6)).unwrap(), 2);
        assert_eq!(exact_treewidth(&complete(6)).unwrap(), 5);
        // the 3x3 grid contains a K4 minor, so its treewidth is 3
        assert_eq!(exact_treewidth(&grid(3, 3)).unwrap(), 3);
        assert_eq!(exact_treewidth_capped(&grid(4, 4), 16).unwrap(), 4);
        assert!(matches!(exact_treewidth(&cycle(13)), Err(Error::Budget(_))));
    }

    #[test]
    fn exact_decomposition_is_optimal_and_valid() {
        for g in [grid(3, 3), cycle(7), complete(4), grid(2, 5)] {
            let (w, td) = exact_decomposition(&g).unwrap();
            td.validate(&g).unwrap();
            assert_eq!(td.width(), w);
            assert!(heuristic_tree_decomposition(&g, None).width() >= w);
        }
    }
}
