//! Multicolored clique to weighted disjoint paths.
//!
//! Class `i` gets `n` vertical paths `P_{i,j}` of length `k` joined by
//! horizontal edges at both ends, and a triple asking for an `a_{i,1}` to
//! `a_{i,n}` path of length `(k+1)(n-1)`: such a path skips exactly one
//! `P_{i,j}`, which selects vertex `j`. Every pair of classes gets three
//! vertices `s, p, t` and four heavy edges per cross edge whose weights only
//! add up to the pair's target when both ends match the selected vertices.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::extended::{plan_extended_to_full, reduce_extended_to_full, ExtendedInstance, ExtendedTrace, FullPlan};
use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, Instance, Vertex};

/// `k` classes of `n` vertices each (numbered from 1) and edges between
/// different classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MccInput {
    k: usize,
    n: usize,
    edges: Vec<(usize, usize, usize, usize)>,
}

impl MccInput {
    /// Edges are `(class1, vertex1, class2, vertex2)`, all 1-based. They are
    /// normalized so that `class1 < class2` and sorted.
    pub fn new(k: usize, n: usize, edges: Vec<(usize, usize, usize, usize)>) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::Input("k and n must be positive".into()));
        }
        let mut set = BTreeSet::new();
        for (c1, j1, c2, j2) in edges {
            for (c, j) in [(c1, j1), (c2, j2)] {
                if c == 0 || c > k || j == 0 || j > n {
                    return Err(Error::Input(format!("vertex {j} of class {c} is out of range")));
                }
            }
            if c1 == c2 {
                return Err(Error::Input(format!("edge inside class {c1}")));
            }
            let e = if c1 < c2 { (c1, j1, c2, j2) } else { (c2, j2, c1, j1) };
            if !set.insert(e) {
                return Err(Error::Input(format!("duplicate edge {e:?}")));
            }
        }
        Ok(MccInput {
            k,
            n,
            edges: set.into_iter().collect(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, c1: usize, j1: usize, c2: usize, j2: usize) -> bool {
        let e = if c1 < c2 { (c1, j1, c2, j2) } else { (c2, j2, c1, j1) };
        self.edges.binary_search(&e).is_ok()
    }

    /// A multicolored clique as `sigma[i-1]` = chosen vertex of class `i`,
    /// by exhaustive search.
    pub fn find_clique(&self) -> Option<Vec<usize>> {
        fn go(m: &MccInput, sigma: &mut Vec<usize>) -> bool {
            let c = sigma.len() + 1;
            if c > m.k {
                return true;
            }
            for j in 1..=m.n {
                if (1..c).all(|c0| m.has_edge(c0, sigma[c0 - 1], c, j)) {
                    sigma.push(j);
                    if go(m, sigma) {
                        return true;
                    }
                    sigma.pop();
                }
            }
            false
        }
        let mut sigma = Vec::new();
        go(self, &mut sigma).then_some(sigma)
    }
}

/// Vertex roles of the weighted instance.
#[derive(Clone, Debug)]
pub struct MccTrace {
    pub k: usize,
    /// Class size after padding (odd).
    pub n: usize,
    /// Set when an even `n` was padded with an isolated vertex per class.
    pub padded: bool,
    pub l1: u64,
    pub l2: u64,
    /// `a[i][j]`, `b[i][j]` with 0-based class and vertex indices.
    pub a: Vec<Vec<Vertex>>,
    pub b: Vec<Vec<Vertex>>,
    /// `x[(i, j, i2)]`, 0-based.
    pub x: HashMap<(usize, usize, usize), Vertex>,
    /// `(s, p, t)` per class pair `(i1, i2)`, `i1 < i2`, 0-based.
    pub pair: BTreeMap<(usize, usize), (Vertex, Vertex, Vertex)>,
    /// Vertex sequence from `s` to `t` of the four heavy edges of each
    /// cross edge, keyed by the 0-based `(i1, j1, i2, j2)`.
    pub heavy: HashMap<(usize, usize, usize, usize), Vec<Vertex>>,
    pub names: Vec<String>,
}

impl MccTrace {
    /// Index of the vertex-gadget triple for class `i` and of the pair triple
    /// for `(i1, i2)`, matching the order of the generated triples.
    pub fn pair_triple_index(&self, i1: usize, i2: usize) -> usize {
        self.k + self.pair.keys().position(|&p| p == (i1, i2)).expect("known pair")
    }

    /// Vertices of `P_{i,j}` from `a` to `b` (0-based).
    pub fn vertical(&self, i: usize, j: usize) -> Vec<Vertex> {
        let mut p = vec![self.a[i][j]];
        p.extend((0..self.k).filter(|&i2| i2 != i).map(|i2| self.x[&(i, j, i2)]));
        p.push(self.b[i][j]);
        p
    }

    /// The witness paths built from a clique, `sigma[i]` being the 1-based
    /// vertex chosen in class `i+1`; one path per triple, in triple order.
    pub fn forward(&self, sigma: &[usize]) -> Result<Vec<Vec<Vertex>>> {
        if sigma.len() != self.k || sigma.iter().any(|&j| j == 0 || j > self.n) {
            return Err(Error::Input("sigma must pick one vertex per class".into()));
        }
        let mut out = Vec::new();
        for (i, &choice) in sigma.iter().enumerate() {
            let skip = choice - 1;
            let mut path = vec![self.a[i][0]];
            let mut on_a = true;
            let mut col = 0;
            for j in (0..self.n).filter(|&j| j != skip) {
                let side = if on_a { &self.a[i] } else { &self.b[i] };
                path.extend_from_slice(&side[col + 1..=j]);
                col = j;
                let mut v = self.vertical(i, j);
                if !on_a {
                    v.reverse();
                }
                path.extend_from_slice(&v[1..]);
                on_a = !on_a;
            }
            debug_assert!(on_a, "an even number of traversals ends on the a side");
            path.extend_from_slice(&self.a[i][col + 1..]);
            out.push(path);
        }
        for &(i1, i2) in self.pair.keys() {
            let key = (i1, sigma[i1] - 1, i2, sigma[i2] - 1);
            let path = self
                .heavy
                .get(&key)
                .ok_or_else(|| Error::Input(format!("classes {} and {} are not adjacent under sigma", i1 + 1, i2 + 1)))?;
            out.push(path.clone());
        }
        Ok(out)
    }
}

/// Builds the weighted instance; even `n` is padded to `n + 1` with an
/// isolated vertex per class.
pub fn generate_mcc_extended(mcc: &MccInput) -> Result<(ExtendedInstance, MccTrace)> {
    let k = mcc.k;
    let padded = mcc.n.is_multiple_of(2);
    let n = if padded { mcc.n + 1 } else { mcc.n };
    let nn = n as u64;
    let l1 = ((k + 1) * (n - 1)) as u64;
    let l2 = 60 * nn.pow(6);
    let q = l2 / 4;

    let mut g = GraphBuilder::new(0);
    let mut names = Vec::new();
    let mut weights: BTreeMap<(Vertex, Vertex), u64> = BTreeMap::new();
    let mut add = |g: &mut GraphBuilder, u: Vertex, v: Vertex, w: u64| -> Result<()> {
        g.add_edge(u, v)?;
        weights.insert((u.min(v), u.max(v)), w);
        Ok(())
    };
    let mut fresh = |g: &mut GraphBuilder, name: String| {
        names.push(name);
        g.add_vertex()
    };

    let mut a = vec![vec![0; n]; k];
    let mut b = vec![vec![0; n]; k];
    let mut x = HashMap::new();
    for i in 0..k {
        for j in 0..n {
            a[i][j] = fresh(&mut g, format!("a_{}_{}", i + 1, j + 1));
            let mut prev = a[i][j];
            for i2 in (0..k).filter(|&i2| i2 != i) {
                let v = fresh(&mut g, format!("x_{}_{}_{}", i + 1, j + 1, i2 + 1));
                x.insert((i, j, i2), v);
                add(&mut g, prev, v, 1)?;
                prev = v;
            }
            b[i][j] = fresh(&mut g, format!("b_{}_{}", i + 1, j + 1));
            add(&mut g, prev, b[i][j], 1)?;
        }
        for j in 0..n - 1 {
            add(&mut g, a[i][j], a[i][j + 1], 1)?;
            add(&mut g, b[i][j], b[i][j + 1], 1)?;
        }
    }
    let mut triples: Vec<(Vertex, Vertex, u64)> = (0..k).map(|i| (a[i][0], a[i][n - 1], l1)).collect();

    let mut pair = BTreeMap::new();
    for i1 in 0..k {
        for i2 in i1 + 1..k {
            let s = fresh(&mut g, format!("s_{}_{}", i1 + 1, i2 + 1));
            let p = fresh(&mut g, format!("p_{}_{}", i1 + 1, i2 + 1));
            let t = fresh(&mut g, format!("t_{}_{}", i1 + 1, i2 + 1));
            pair.insert((i1, i2), (s, p, t));
            triples.push((s, t, l2));
        }
    }
    let mut heavy = HashMap::new();
    for &(c1, j1, c2, j2) in &mcc.edges {
        let (i1, i2) = (c1 - 1, c2 - 1);
        let (s, p, t) = pair[&(i1, i2)];
        let x1 = x[&(i1, j1 - 1, i2)];
        let x2 = x[&(i2, j2 - 1, i1)];
        let shift = j1 as u64 * nn.pow(4) + j2 as u64 * nn.pow(2);
        let mut seq = vec![s];
        for (u, v, w) in [(s, x1, q + shift), (x1, p, q), (p, x2, q), (x2, t, q - shift)] {
            if g.has_edge(u, v) {
                // a parallel copy: route it through a new midpoint
                let m = fresh(&mut g, format!("mid_{u}_{v}_{}_{}", j1, j2));
                add(&mut g, u, m, w / 2)?;
                add(&mut g, m, v, w - w / 2)?;
                seq.push(m);
            } else {
                add(&mut g, u, v, w)?;
            }
            seq.push(v);
        }
        heavy.insert((i1, j1 - 1, i2, j2 - 1), seq);
    }
    let graph = g.build();
    let xinst = ExtendedInstance::new(graph, weights, triples)?;
    Ok((
        xinst,
        MccTrace {
            k,
            n,
            padded,
            l1,
            l2,
            a,
            b,
            x,
            pair,
            heavy,
            names,
        },
    ))
}

/// Sizes of the full packing instance obtained by composing both
/// reductions, without building it.
pub fn plan_mcc_to_full(mcc: &MccInput) -> Result<FullPlan> {
    let (x, _) = generate_mcc_extended(mcc)?;
    plan_extended_to_full(&x)
}

/// Composes [`generate_mcc_extended`] and the full-packing reduction.
pub fn reduce_mcc_to_full(mcc: &MccInput) -> Result<(Instance, MccTrace, ExtendedTrace)> {
    let (x, mt) = generate_mcc_extended(mcc)?;
    let (inst, et) = reduce_extended_to_full(&x)?;
    Ok((inst, mt, et))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(with_clique: bool) -> MccInput {
        let mut edges = vec![(1, 1, 2, 2), (1, 3, 2, 3)];
        if with_clique {
            edges.push((1, 2, 2, 1));
        }
        MccInput::new(2, 3, edges).unwrap()
    }

    #[test]
    fn lengths() {
        let m = MccInput::new(4, 9, vec![]).unwrap();
        let (_, t) = generate_mcc_extended(&m).unwrap();
        assert_eq!(t.l1, 40);
        assert_eq!(t.l2, 60 * 9u64.pow(6));
    }

    #[test]
    fn gadget_shape() {
        let m = MccInput::new(4, 9, vec![]).unwrap();
        let (x, t) = generate_mcc_extended(&m).unwrap();
        // class 2: nine vertical paths of length 4
        for j in 0..9 {
            let p = t.vertical(1, j);
            assert_eq!(p.len(), 5);
            assert!(x.graph().is_path(&p));
            assert_eq!(t.names[p[1]], format!("x_2_{}_1", j + 1));
        }
        assert_eq!(x.triples().len(), 4 + 6);
    }

    #[test]
    fn forward_paths_validate() {
        let m = toy(true);
        let (x, t) = generate_mcc_extended(&m).unwrap();
        let sigma = m.find_clique().unwrap();
        let paths = t.forward(&sigma).unwrap();
        x.check_paths(&paths).unwrap();
        assert_eq!(paths[0].len() - 1, t.l1 as usize);
    }

    #[test]
    fn every_sigma_choice_routes() {
        let m = MccInput::new(2, 3, (1..=3).flat_map(|a| (1..=3).map(move |b| (1, a, 2, b))).collect()).unwrap();
        let (x, t) = generate_mcc_extended(&m).unwrap();
        for s1 in 1..=3 {
            for s2 in 1..=3 {
                x.check_paths(&t.forward(&[s1, s2]).unwrap()).unwrap();
            }
        }
    }

    #[test]
    fn non_clique_sigma_is_rejected() {
        let m = toy(false);
        let (_, t) = generate_mcc_extended(&m).unwrap();
        assert!(m.find_clique().is_some());
        assert!(t.forward(&[2, 1]).is_err());
        let none = MccInput::new(2, 3, vec![]).unwrap();
        assert!(none.find_clique().is_none());
    }

    #[test]
    fn even_n_is_padded() {
        let m = MccInput::new(2, 2, vec![(1, 1, 2, 2)]).unwrap();
        let (_, t) = generate_mcc_extended(&m).unwrap();
        assert!(t.padded);
        assert_eq!(t.n, 3);
    }

    #[test]
    fn composition_counts() {
        let plan = plan_mcc_to_full(&toy(true)).unwrap();
        assert_eq!(plan.terminals, 2 * (2 + 1));
        assert!(matches!(reduce_mcc_to_full(&toy(true)), Err(Error::Budget(_))));
    }

    #[test]
    fn input_checks() {
        assert!(MccInput::new(2, 3, vec![(1, 1, 1, 2)]).is_err());
        assert!(MccInput::new(2, 3, vec![(1, 4, 2, 2)]).is_err());
        assert!(MccInput::new(2, 3, vec![(1, 1, 2, 2), (2, 2, 1, 1)]).is_err());
    }
}
