//! Randomized packing by color coding, plus the subdivided host/pattern pair
//! that turns packing into subgraph containment.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{trivial_no, verify_packing, Graph, GraphBuilder, Instance, PathPacking, ProblemKind, SolveResult, Vertex};

/// Largest supported number of colors `k * (ell + 1)`.
pub const MAX_COLORS: usize = 24;
const MAX_TRIALS: f64 = 1e12;

/// A color per vertex, drawn for one trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorAssignment {
    pub colors: Vec<u8>,
    pub num_colors: usize,
    pub trial: u64,
}

impl ColorAssignment {
    /// Validates that every color is below `num_colors`.
    pub fn new(colors: Vec<u8>, num_colors: usize, trial: u64) -> Result<Self> {
        if num_colors == 0 || num_colors > MAX_COLORS {
            return Err(Error::Input(format!("{num_colors} colors is out of range")));
        }
        if let Some(c) = colors.iter().find(|&&c| c as usize >= num_colors) {
            return Err(Error::Input(format!("color {c} not below {num_colors}")));
        }
        Ok(ColorAssignment {
            colors,
            num_colors,
            trial,
        })
    }

    fn draw(n: usize, num_colors: usize, base: u64, trial: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(base);
        rng.set_stream(trial);
        let colors = (0..n).map(|_| rng.random_range(0..num_colors) as u8).collect();
        ColorAssignment {
            colors,
            num_colors,
            trial,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ColorCodingOptions {
    /// Allowed probability of missing a yes-instance.
    pub epsilon: f64,
    pub seed: u64,
}

impl Default for ColorCodingOptions {
    fn default() -> Self {
        ColorCodingOptions {
            epsilon: 1e-3,
            seed: 0,
        }
    }
}

/// `ceil(e^colors * ln(1/epsilon))`.
pub fn planned_trials(colors: usize, epsilon: f64) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Input(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let t = ((colors as f64).exp() * (1.0 / epsilon).ln()).ceil();
    if t > MAX_TRIALS {
        return Err(Error::Budget(format!("{t:.3e} trials requested")));
    }
    Ok(t.max(1.0) as u64)
}

/// Visited (vertex, color set) pairs, either as a stamped table or a hash
/// set when the table would be large.
enum Memo {
    Table { stamp: Vec<u32>, current: u32 },
    Hash(HashSet<u64>),
}

impl Memo {
    fn new(n: usize, colors: usize) -> Self {
        let cells = n << colors;
        if cells <= 1 << 22 {
            Memo::Table {
                stamp: vec![0; cells],
                current: 0,
            }
        } else {
            Memo::Hash(HashSet::new())
        }
    }

    fn reset(&mut self) {
        match self {
            Memo::Table { stamp, current } => {
                *current = current.wrapping_add(1);
                if *current == 0 {
                    stamp.iter_mut().for_each(|s| *s = 0);
                    *current = 1;
                }
            }
            Memo::Hash(h) => h.clear(),
        }
    }

    /// True if the pair was not seen before in this trial.
    fn insert(&mut self, v: Vertex, mask: u32, colors: usize) -> bool {
        match self {
            Memo::Table { stamp, current } => {
                let cell = &mut stamp[(v << colors) | mask as usize];
                if *cell == *current {
                    false
                } else {
                    *cell = *current;
                    true
                }
            }
            Memo::Hash(h) => h.insert(((v as u64) << 32) | mask as u64),
        }
    }
}

struct Scratch {
    memo: Memo,
    found: HashMap<u32, Vec<Vertex>>,
    path: Vec<Vertex>,
}

struct Search<'a> {
    inst: &'a Instance,
    colors: usize,
    k: usize,
    ell: usize,
}

impl Search<'_> {
    fn scratch(&self) -> Scratch {
        Scratch {
            memo: Memo::new(self.inst.n(), self.colors),
            found: HashMap::new(),
            path: Vec::with_capacity(self.ell + 1),
        }
    }

    /// Phase (a): every color set carried by a colorful (A, ell)-path,
    /// with one such path each.
    fn colorful_paths(&self, col: &[u8], s: &mut Scratch) {
        s.memo.reset();
        s.found.clear();
        for &t in self.inst.terminals() {
            let mask = 1u32 << col[t];
            s.path.clear();
            s.path.push(t);
            self.extend(col, t, mask, s);
        }
    }

    fn extend(&self, col: &[u8], v: Vertex, mask: u32, s: &mut Scratch) {
        let g = self.inst.graph();
        let last_step = s.path.len() == self.ell;
        for &u in g.neighbors(v) {
            let bit = 1u32 << col[u];
            if mask & bit != 0 || self.inst.is_terminal(u) != last_step {
                continue;
            }
            let next = mask | bit;
            if !s.memo.insert(u, next, self.colors) {
                continue;
            }
            s.path.push(u);
            if last_step {
                s.found.entry(next).or_insert_with(|| s.path.clone());
            } else {
                self.extend(col, u, next, s);
            }
            s.path.pop();
        }
    }

    /// Phase (b): `k` color-disjoint sets covering every color.
    fn cover(&self, found: &HashMap<u32, Vec<Vertex>>) -> Option<Vec<u32>> {
        let full: u32 = if self.colors == 32 { u32::MAX } else { (1u32 << self.colors) - 1 };
        let mut by_color: Vec<Vec<u32>> = vec![Vec::new(); self.colors];
        let mut masks: Vec<u32> = found.keys().copied().collect();
        masks.sort_unstable();
        for &m in &masks {
            by_color[m.trailing_zeros() as usize].push(m);
        }
        let mut failed = HashSet::new();
        let mut picked = Vec::with_capacity(self.k);
        if cover_from(0, full, &by_color, &mut failed, &mut picked) {
            Some(picked)
        } else {
            None
        }
    }

    fn trial(&self, col: &ColorAssignment, s: &mut Scratch) -> Option<PathPacking> {
        self.colorful_paths(&col.colors, s);
        let picked = self.cover(&s.found)?;
        let paths = picked.iter().map(|m| s.found[m].clone()).collect();
        Some(PathPacking::new(paths))
    }
}

/// Sets in `by_color[c]` have lowest color `c`; since the sets are disjoint
/// and cover everything, the lowest uncovered color must be the lowest color
/// of the next set.
fn cover_from(
    covered: u32,
    full: u32,
    by_color: &[Vec<u32>],
    failed: &mut HashSet<u32>,
    picked: &mut Vec<u32>,
) -> bool {
    if covered == full {
        return true;
    }
    if failed.contains(&covered) {
        return false;
    }
    let x = (!covered).trailing_zeros() as usize;
    for &m in &by_color[x] {
        if m & covered == 0 {
            picked.push(m);
            if cover_from(covered | m, full, by_color, failed, picked) {
                return true;
            }
            picked.pop();
        }
    }
    failed.insert(covered);
    false
}

fn seed_base(inst: &Instance, seed: u64) -> u64 {
    let digest = inst.digest();
    let head = u64::from_str_radix(&digest[..16], 16).expect("hex digest");
    head ^ seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn search_for(inst: &Instance) -> Result<Search<'_>> {
    if inst.kind() != ProblemKind::Alpp {
        return Err(Error::Contract(
            "color coding answers the exact-length problem; reduce short-path instances first".into(),
        ));
    }
    let colors = inst.k().saturating_mul(inst.ell() + 1);
    if colors > MAX_COLORS {
        return Err(Error::Budget(format!(
            "k(ell+1) = {colors} colors exceeds the limit of {MAX_COLORS}"
        )));
    }
    Ok(Search {
        inst,
        colors,
        k: inst.k(),
        ell: inst.ell(),
    })
}

/// Runs one trial with a given coloring. A returned packing is always valid.
pub fn color_coding_trial(inst: &Instance, coloring: &ColorAssignment) -> Result<Option<PathPacking>> {
    let search = search_for(inst)?;
    if coloring.num_colors != search.colors || coloring.colors.len() != inst.n() {
        return Err(Error::Input("coloring does not fit the instance".into()));
    }
    let mut s = search.scratch();
    Ok(search.trial(coloring, &mut s))
}

/// One-sided Monte Carlo decision: a no-instance is always answered no, a
/// yes-instance is answered yes with probability at least `1 - epsilon`.
/// The outcome is a deterministic function of the instance and the seed.
pub fn solve_color_coding(inst: &Instance, opts: &ColorCodingOptions) -> Result<SolveResult> {
    let search = search_for(inst)?;
    let planned = planned_trials(search.colors, opts.epsilon)?;
    let internal = inst.n() - inst.terminals().len();
    let mut res = if trivial_no(inst) || internal < inst.k() * (inst.ell() - 1) {
        let mut r = SolveResult::no();
        r.stat("trials_run", 0);
        r
    } else {
        let base = seed_base(inst, opts.seed);
        let n = inst.n();
        let hit = (0..planned)
            .into_par_iter()
            .map_init(
                || search.scratch(),
                |s, t| {
                    let col = ColorAssignment::draw(n, search.colors, base, t);
                    search.trial(&col, s).map(|w| (t, w))
                },
            )
            .find_first(Option::is_some)
            .flatten();
        match hit {
            Some((t, w)) => {
                if !verify_packing(inst, &w)?.is_valid() {
                    return Err(Error::Contract("color-coding witness failed verification".into()));
                }
                let mut r = SolveResult::yes(Some(w));
                r.stat("trials_run", t + 1);
                r
            }
            None => {
                let mut r = SolveResult::no();
                r.stat("trials_run", planned);
                r
            }
        }
    };
    res.stat("colors", search.colors as u64);
    res.stat("trials_planned", planned);
    Ok(res)
}

/// Where a host vertex comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HostVertex {
    Original(Vertex),
    /// Middle vertex of the subdivided edge `{u, v}`, `u < v`.
    Subdivision(Vertex, Vertex),
    /// One of the two extra vertices of the triangle on a terminal.
    Triangle(Vertex, u8),
}

/// Host `G''`: every edge subdivided once, then a triangle hung on every
/// terminal. Pattern `H''`: `k` paths on `2 ell + 1` vertices with a triangle
/// hung on both ends. `G` has `k` disjoint (A, ell)-paths iff `H''` is a
/// subgraph of `G''`.
#[derive(Clone, Debug)]
pub struct TriangledPatternPair {
    pub host: Graph,
    pub pattern: Graph,
    /// The subdivided graph before triangles are added.
    pub subdivided: Graph,
    pub origin: Vec<HostVertex>,
    subdivision: HashMap<(Vertex, Vertex), Vertex>,
    triangle: HashMap<Vertex, [Vertex; 2]>,
    ell: usize,
    k: usize,
}

impl TriangledPatternPair {
    pub fn pattern_component_size(&self) -> usize {
        2 * self.ell + 1 + 4
    }

    /// Embeds a packing of the original instance into the host.
    pub fn embedding_from_packing(&self, packing: &PathPacking) -> Vec<Vertex> {
        let mut map = Vec::with_capacity(self.pattern.n());
        for p in packing.paths.iter().take(self.k) {
            for (i, &v) in p.iter().enumerate() {
                map.push(v);
                if i + 1 < p.len() {
                    let key = (v.min(p[i + 1]), v.max(p[i + 1]));
                    map.push(self.subdivision[&key]);
                }
            }
            map.extend_from_slice(&self.triangle[&p[0]]);
            map.extend_from_slice(&self.triangle[&p[p.len() - 1]]);
        }
        map
    }

    /// Reads a packing off an embedding: the even positions of every pattern
    /// path, when they all land on original vertices.
    pub fn packing_from_embedding(&self, map: &[Vertex]) -> Option<PathPacking> {
        let size = self.pattern_component_size();
        let mut paths = Vec::with_capacity(self.k);
        for c in 0..self.k {
            let base = c * size;
            let mut path = Vec::with_capacity(self.ell + 1);
            for i in 0..=self.ell {
                match self.origin[map[base + 2 * i]] {
                    HostVertex::Original(v) => path.push(v),
                    _ => return None,
                }
            }
            paths.push(path);
        }
        Some(PathPacking::new(paths))
    }
}

pub fn build_triangled_pair(inst: &Instance) -> TriangledPatternPair {
    let g = inst.graph();
    let n = g.n();
    let mut b = GraphBuilder::new(n);
    let mut origin: Vec<HostVertex> = (0..n).map(HostVertex::Original).collect();
    let mut subdivision = HashMap::new();
    for (u, v) in g.edges() {
        let mid = b.connect_by_path(u, v, 2).expect("fresh vertex")[0];
        origin.push(HostVertex::Subdivision(u, v));
        subdivision.insert((u, v), mid);
    }
    let subdivided = b.clone().build();
    let mut triangle = HashMap::new();
    for &a in inst.terminals() {
        let x = b.add_vertex();
        let y = b.add_vertex();
        for (p, q) in [(a, x), (a, y), (x, y)] {
            b.add_edge(p, q).expect("fresh vertices");
        }
        origin.push(HostVertex::Triangle(a, 0));
        origin.push(HostVertex::Triangle(a, 1));
        triangle.insert(a, [x, y]);
    }
    let host = b.build();

    let len = 2 * inst.ell() + 1;
    let mut pb = GraphBuilder::new(0);
    for _ in 0..inst.k() {
        let start = pb.add_vertex();
        let path = pb.attach_path(start, len - 1);
        let end = *path.last().unwrap_or(&start);
        for a in [start, end] {
            let x = pb.add_vertex();
            let y = pb.add_vertex();
            for (p, q) in [(a, x), (a, y), (x, y)] {
                pb.add_edge(p, q).expect("fresh vertices");
            }
        }
    }
    TriangledPatternPair {
        host,
        pattern: pb.build(),
        subdivided,
        origin,
        subdivision,
        triangle,
        ell: inst.ell(),
        k: inst.k(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{oracle_subgraph_embedding, OracleBudget};

    fn p4(ell: usize) -> Instance {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        Instance::new(g, vec![0, 3], 1, ell).unwrap()
    }

    fn c6() -> Instance {
        let g = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        Instance::new(g, vec![0, 1, 3, 4], 2, 2).unwrap()
    }

    #[test]
    fn trial_counts() {
        assert_eq!(planned_trials(1, (-1f64).exp()).unwrap(), 3);
        assert!(planned_trials(4, 0.0).is_err());
        assert!(planned_trials(4, 1.0).is_err());
    }

    #[test]
    fn finds_known_packings() {
        let opts = ColorCodingOptions::default();
        for inst in [p4(3), c6()] {
            let r = solve_color_coding(&inst, &opts).unwrap();
            assert!(r.decision);
            assert!(verify_packing(&inst, r.witness.as_ref().unwrap()).unwrap().is_valid());
        }
    }

    #[test]
    fn no_instance_is_no() {
        let r = solve_color_coding(&p4(2), &ColorCodingOptions::default()).unwrap();
        assert!(!r.decision);
        // terminals adjacent on a triangle, but a length-2 path would have to
        // end at a terminal through the third vertex
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let inst = Instance::new(g, vec![0, 1], 1, 3).unwrap();
        assert!(!solve_color_coding(&inst, &ColorCodingOptions::default()).unwrap().decision);
    }

    #[test]
    fn deterministic_per_seed() {
        let opts = ColorCodingOptions { epsilon: 1e-3, seed: 9 };
        let a = solve_color_coding(&c6(), &opts).unwrap();
        let b = solve_color_coding(&c6(), &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn colorful_solution_is_found() {
        let inst = c6();
        // the two paths 0-5-4 and 1-2-3 get distinct colors
        let mut colors = vec![0u8; 6];
        for (c, v) in [0, 5, 4, 1, 2, 3].into_iter().enumerate() {
            colors[v] = c as u8;
        }
        let col = ColorAssignment::new(colors, 6, 0).unwrap();
        let w = color_coding_trial(&inst, &col).unwrap().unwrap();
        assert!(verify_packing(&inst, &w).unwrap().is_valid());

        let clash = ColorAssignment::new(vec![0; 6], 6, 0).unwrap();
        assert!(color_coding_trial(&inst, &clash).unwrap().is_none());
    }

    #[test]
    fn parameter_cap() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let inst = Instance::new(g, vec![0, 1, 2, 3], 2, 12).unwrap();
        assert!(matches!(
            solve_color_coding(&inst, &ColorCodingOptions::default()),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn triangled_pair_sizes() {
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        let inst = Instance::new(k2, vec![0, 1], 1, 1).unwrap();
        let pair = build_triangled_pair(&inst);
        assert_eq!(pair.host.n(), 7);
        assert_eq!(pair.pattern.n(), 7);
        let budget = OracleBudget::default();
        assert!(oracle_subgraph_embedding(&pair.host, &pair.pattern, true, &budget)
            .unwrap()
            .is_some());

        let yes = build_triangled_pair(&p4(3));
        assert_eq!(yes.host.n(), 11);
        let map = oracle_subgraph_embedding(&yes.host, &yes.pattern, true, &budget)
            .unwrap()
            .unwrap();
        let back = yes.packing_from_embedding(&map).unwrap();
        assert!(verify_packing(&p4(3), &back).unwrap().is_valid());

        let no = build_triangled_pair(&p4(2));
        assert!(oracle_subgraph_embedding(&no.host, &no.pattern, true, &budget)
            .unwrap()
            .is_none());
    }

    #[test]
    fn forward_embedding_preserves_edges() {
        let inst = c6();
        let pair = build_triangled_pair(&inst);
        let w = PathPacking::new(vec![vec![0, 5, 4], vec![1, 2, 3]]);
        let map = pair.embedding_from_packing(&w);
        assert_eq!(map.len(), pair.pattern.n());
        for (a, b) in pair.pattern.edges() {
            assert!(pair.host.has_edge(map[a], map[b]));
        }
        let mut sorted = map.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), map.len());
    }

    #[test]
    fn containment_may_route_through_a_terminal() {
        // a - c - b with every vertex a terminal: no (A, 2)-path, yet the
        // pattern embeds with its middle on c
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let inst = Instance::new(g, vec![0, 1, 2], 1, 2).unwrap();
        let pair = build_triangled_pair(&inst);
        let map = oracle_subgraph_embedding(&pair.host, &pair.pattern, true, &OracleBudget::default())
            .unwrap()
            .expect("pattern embeds");
        let decoded = pair.packing_from_embedding(&map).unwrap();
        assert_eq!(decoded.paths[0][1], 1);
        assert!(!verify_packing(&inst, &decoded).unwrap().is_valid());
    }
}
