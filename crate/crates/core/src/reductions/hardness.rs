//! Full packing instances built from Hamiltonian cycle and path partition
//! inputs.

use super::Generated;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, Instance, Vertex};

/// Full packing instance that is a yes-instance iff `g` has a Hamiltonian
/// cycle, with `alpha` terminals.
///
/// A degree-2 vertex `v` (smallest id) is deleted; its neighbours `u, w`
/// become terminals asked to be joined by a path through all remaining
/// vertices, and `alpha/2 - 1` isolated paths of the same length pad the
/// terminal count. A graph of minimum degree below 2 yields a fixed
/// no-instance.
pub fn generate_from_hamiltonian(g: &Graph, alpha: usize) -> Result<Generated> {
    if alpha < 2 || !alpha.is_multiple_of(2) {
        return Err(Error::Input(format!("alpha must be even and at least 2, got {alpha}")));
    }
    let n = g.n();
    let delta = g.min_degree().unwrap_or(0);
    if delta < 2 {
        let instance = Instance::new(Graph::empty(alpha), (0..alpha).collect(), alpha / 2, 1)?;
        let names = (0..alpha).map(|i| format!("isolated{i}")).collect();
        return Ok(Generated { instance, names });
    }
    let v = (0..n)
        .find(|&v| g.degree(v) == 2)
        .ok_or_else(|| Error::Construction(format!("no vertex of degree 2 (minimum degree is {delta})")))?;
    let (u, w) = (g.neighbors(v)[0], g.neighbors(v)[1]);
    let new_id = |x: Vertex| if x < v { x } else { x - 1 };
    let mut b = GraphBuilder::new(n - 1);
    for (x, y) in g.edges() {
        if x != v && y != v {
            b.add_edge(new_id(x), new_id(y))?;
        }
    }
    let mut names: Vec<String> = (0..n).filter(|&x| x != v).map(|x| format!("g{x}")).collect();
    let ell = n - 2;
    let mut terminals = vec![new_id(u), new_id(w)];
    for c in 0..alpha / 2 - 1 {
        let start = b.add_vertex();
        let path = b.attach_path(start, ell);
        terminals.push(start);
        terminals.push(*path.last().expect("ell >= 1"));
        names.push(format!("pad{c}_0"));
        names.extend((1..=ell).map(|i| format!("pad{c}_{i}")));
    }
    let instance = Instance::new(b.build(), terminals, alpha / 2, ell)?;
    Ok(Generated { instance, names })
}

/// Full packing instance that is a yes-instance iff `g` splits into
/// `|V|/(lambda+1)` vertex-disjoint paths of length `lambda`: `2k` new
/// terminals joined to every vertex, and `ell = lambda + 2`.
pub fn generate_from_path_partition(g: &Graph, lambda: usize) -> Result<Generated> {
    if lambda < 2 {
        return Err(Error::Input(format!("lambda must be at least 2, got {lambda}")));
    }
    let n = g.n();
    if n == 0 || !n.is_multiple_of(lambda + 1) {
        return Err(Error::Input(format!(
            "{n} vertices cannot be split into paths of {} vertices",
            lambda + 1
        )));
    }
    let k = n / (lambda + 1);
    let mut b = GraphBuilder::new(n + 2 * k);
    for (x, y) in g.edges() {
        b.add_edge(x, y)?;
    }
    for a in n..n + 2 * k {
        for x in 0..n {
            b.add_edge(a, x)?;
        }
    }
    let mut names: Vec<String> = (0..n).map(|x| format!("g{x}")).collect();
    names.extend((0..2 * k).map(|i| format!("term{i}")));
    let instance = Instance::new(b.build(), (n..n + 2 * k).collect(), k, lambda + 2)?;
    Ok(Generated { instance, names })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_max_packing;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn four_cycle() {
        let g = generate_from_hamiltonian(&cycle(4), 2).unwrap().instance;
        // vertex 0 removed; neighbours 1 and 3 become 0 and 2
        assert_eq!(g.n(), 3);
        assert_eq!(g.terminals(), &[0, 2]);
        assert_eq!((g.k(), g.ell()), (1, 2));
        assert!(g.graph().is_path(&[0, 1, 2]));
        assert_eq!(oracle_max_packing(&g).unwrap().count, 1);
    }

    #[test]
    fn star_is_trivial_no() {
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let g = generate_from_hamiltonian(&star, 2).unwrap().instance;
        assert_eq!(oracle_max_packing(&g).unwrap().count, 0);
        assert_eq!(g.k() * 2, g.terminals().len());
    }

    #[test]
    fn six_cycle_padding() {
        let g = generate_from_hamiltonian(&cycle(6), 4).unwrap().instance;
        assert_eq!(g.n(), 5 + 5);
        assert_eq!(g.terminals().len(), 4);
        assert_eq!(oracle_max_packing(&g).unwrap().count, 2);
    }

    #[test]
    fn cubic_graph_is_rejected() {
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(matches!(generate_from_hamiltonian(&k4, 2), Err(Error::Construction(_))));
        assert!(matches!(generate_from_hamiltonian(&cycle(4), 3), Err(Error::Input(_))));
    }

    #[test]
    fn path_partition_examples() {
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let g = generate_from_path_partition(&p3, 2).unwrap().instance;
        assert_eq!((g.k(), g.ell()), (1, 4));
        assert_eq!(oracle_max_packing(&g).unwrap().count, 1);

        let two = Graph::from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        let g = generate_from_path_partition(&two, 2).unwrap().instance;
        assert_eq!(g.k(), 2);
        assert_eq!(oracle_max_packing(&g).unwrap().count, 2);

        let k3k1 = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(matches!(generate_from_path_partition(&k3k1, 2), Err(Error::Input(_))));
    }
}
