//! Nice tree decompositions: every node is a leaf, introduce, forget or
//! binary join.

use super::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NiceNode {
    Leaf,
    Introduce { vertex: Vertex, child: usize },
    Forget { vertex: Vertex, child: usize },
    Join { left: usize, right: usize },
}

/// Nodes are stored children-first; the root is the last node.
#[derive(Clone, Debug)]
pub struct NiceTreeDecomposition {
    nodes: Vec<NiceNode>,
    bags: Vec<Vec<Vertex>>,
}

impl NiceTreeDecomposition {
    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn bag(&self, i: usize) -> &[Vertex] {
        &self.bags[i]
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    fn push(&mut self, node: NiceNode, bag: Vec<Vertex>) -> usize {
        self.nodes.push(node);
        self.bags.push(bag);
        self.nodes.len() - 1
    }

    /// Appends forget nodes above the root until its bag is empty.
    pub fn forget_root(&mut self) {
        while let Some(&v) = self.bags[self.root()].first() {
            let child = self.root();
            let bag = self.bags[child][1..].to_vec();
            self.push(NiceNode::Forget { vertex: v, child }, bag);
        }
    }

    /// Checks node-kind constraints and that the underlying decomposition
    /// is valid for `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let bad = |i: usize, m: &str| Err(Error::Contract(format!("nice node {i}: {m}")));
        let mut used = vec![false; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            let bag = &self.bags[i];
            let mut take = |c: usize| -> bool {
                if c >= i || used[c] {
                    return false;
                }
                used[c] = true;
                true
            };
            match *node {
                NiceNode::Leaf => {
                    if !bag.is_empty() {
                        return bad(i, "leaf bag not empty");
                    }
                }
                NiceNode::Introduce { vertex, child } => {
                    if !take(child) {
                        return bad(i, "bad child");
                    }
                    let mut want = self.bags[child].clone();
                    if want.binary_search(&vertex).is_ok() {
                        return bad(i, "introduced vertex already present");
                    }
                    want.push(vertex);
                    want.sort_unstable();
                    if &want != bag {
                        return bad(i, "introduce bag mismatch");
                    }
                }
                NiceNode::Forget { vertex, child } => {
                    if !take(child) {
                        return bad(i, "bad child");
                    }
                    let want: Vec<Vertex> = self.bags[child].iter().copied().filter(|&x| x != vertex).collect();
                    if want.len() + 1 != self.bags[child].len() || &want != bag {
                        return bad(i, "forget bag mismatch");
                    }
                }
                NiceNode::Join { left, right } => {
                    if left == right || !take(left) || !take(right) {
                        return bad(i, "bad children");
                    }
                    if &self.bags[left] != bag || &self.bags[right] != bag {
                        return bad(i, "join bags differ");
                    }
                }
            }
        }
        if used.iter().filter(|u| !**u).count() != 1 {
            return Err(Error::Contract("nice decomposition is not a single tree".into()));
        }
        let mut edges = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            match *node {
                NiceNode::Leaf => {}
                NiceNode::Introduce { child, .. } | NiceNode::Forget { child, .. } => edges.push((child, i)),
                NiceNode::Join { left, right } => {
                    edges.push((left, i));
                    edges.push((right, i));
                }
            }
        }
        TreeDecomposition::new(self.bags.clone(), edges).validate(g)
    }
}

/// Converts a decomposition into nice form, rooted at bag 0. The root keeps
/// bag 0's contents.
pub fn make_nice(td: &TreeDecomposition) -> NiceTreeDecomposition {
    let mut out = NiceTreeDecomposition { nodes: Vec::new(), bags: Vec::new() };
    let nb = td.bags().len();
    if nb == 0 {
        out.push(NiceNode::Leaf, Vec::new());
        return out;
    }
    let adj = td.tree_adjacency();
    // iterative post-order from bag 0
    let mut parent = vec![usize::MAX; nb];
    let mut order = Vec::with_capacity(nb);
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(b) = stack.pop() {
        order.push(b);
        for &c in &adj[b] {
            if parent[c] == usize::MAX {
                parent[c] = b;
                stack.push(c);
            }
        }
    }
    let mut top = vec![usize::MAX; nb];
    for &b in order.iter().rev() {
        let bag = &td.bags()[b];
        // parent[0] == 0 and bag 0 is never its own neighbour
        let mut children: Vec<usize> = adj[b].iter().copied().filter(|&c| c != parent[b]).collect();
        children.sort_unstable();
        let mut chains = Vec::new();
        for c in children {
            chains.push(transition(&mut out, top[c], bag));
        }
        if chains.is_empty() {
            let leaf = out.push(NiceNode::Leaf, Vec::new());
            chains.push(transition(&mut out, leaf, bag));
        }
        let mut cur = chains[0];
        for &next in &chains[1..] {
            cur = out.push(NiceNode::Join { left: cur, right: next }, bag.clone());
        }
        top[b] = cur;
    }
    out
}

/// Forgets then introduces vertices to move from `from`'s bag to `to`.
fn transition(out: &mut NiceTreeDecomposition, from: usize, to: &[Vertex]) -> usize {
    let mut cur = from;
    let start = out.bags[from].clone();
    for &v in start.iter().filter(|v| to.binary_search(v).is_err()) {
        let bag: Vec<Vertex> = out.bags[cur].iter().copied().filter(|&x| x != v).collect();
        cur = out.push(NiceNode::Forget { vertex: v, child: cur }, bag);
    }
    for &v in to.iter().filter(|v| start.binary_search(v).is_err()) {
        let mut bag = out.bags[cur].clone();
        let at = bag.binary_search(&v).unwrap_err();
        bag.insert(at, v);
        cur = out.push(NiceNode::Introduce { vertex: v, child: cur }, bag);
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::td::heuristic_tree_decomposition;

    #[test]
    fn single_bag_triangle() {
        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1, 2]], vec![]);
        let nice = make_nice(&td);
        nice.validate(&k3).unwrap();
        assert_eq!(nice.len(), 4);
        assert_eq!(nice.nodes()[0], NiceNode::Leaf);
        assert!(nice.nodes()[1..].iter().all(|n| matches!(n, NiceNode::Introduce { .. })));
        assert_eq!(nice.bag(nice.root()), &[0, 1, 2]);
    }

    #[test]
    fn path_of_bags_alternates() {
        let p4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let td = TreeDecomposition::new(vec![vec![2, 3], vec![1, 2], vec![0, 1]], vec![(0, 1), (1, 2)]);
        let nice = make_nice(&td);
        nice.validate(&p4).unwrap();
        let kinds: Vec<char> = nice
            .nodes()
            .iter()
            .map(|n| match n {
                NiceNode::Leaf => 'L',
                NiceNode::Introduce { .. } => 'I',
                NiceNode::Forget { .. } => 'F',
                NiceNode::Join { .. } => 'J',
            })
            .collect();
        assert_eq!(kinds.iter().collect::<String>(), "LIIFIFI");
        assert_eq!(nice.width(), 1);
    }

    #[test]
    fn joins_equalize_children() {
        // star with centre 0: bags {0,1},{0,2},{0,3} hanging off {0}
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let td = TreeDecomposition::new(
            vec![vec![0], vec![0, 1], vec![0, 2], vec![0, 3]],
            vec![(0, 1), (0, 2), (0, 3)],
        );
        let nice = make_nice(&td);
        nice.validate(&g).unwrap();
        let joins = nice.nodes().iter().filter(|n| matches!(n, NiceNode::Join { .. })).count();
        assert_eq!(joins, 2);
    }

    #[test]
    fn forget_root_empties_bag() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let mut nice = make_nice(&heuristic_tree_decomposition(&g, None));
        nice.forget_root();
        assert!(nice.bag(nice.root()).is_empty());
        nice.validate(&g).unwrap();
        let forgets = nice.nodes().iter().filter(|n| matches!(n, NiceNode::Forget { .. })).count();
        assert_eq!(forgets, 5);
    }
}
