//! Packing DP over a nice tree decomposition.
//!
//! A partial solution at a node is a subgraph `H` of the graph seen so far
//! whose components are paths, with terminals only at path ends. An edge
//! `{u, v}` enters `H` at the forget node of whichever endpoint is
//! forgotten first; the other endpoint is still in the bag there.
//!
//! A state records, per bag vertex, its degree in `H` and the block of the
//! bag partition it belongs to (bag vertices in the same component of `H`),
//! and per block the number of edges and the terminals of the component.
//! In subset mode the terminals are kept by identity; in counted mode only
//! the number of terminals that have already been forgotten is kept. The
//! value of a state is the largest number `kappa` of completed
//! (A, ell)-paths. A component is counted when its last vertex is forgotten.

use std::collections::hash_map::Entry as MapEntry;
use std::collections::{HashMap, HashSet};

use super::{NiceNode, NiceTreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{Instance, PathPacking, ProblemKind, SolveResult, Vertex};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StateMode {
    /// Terminal identities per block.
    #[default]
    Subset,
    /// Only the count of already-forgotten terminals per block.
    Counted,
}

#[derive(Clone, Copy, Debug)]
pub struct DpOptions {
    pub mode: StateMode,
    /// Fail if a node's table outgrows the worst-case signature bound.
    pub check_state_bound: bool,
    /// Return every path of an optimal packing instead of the first `k`.
    pub full_witness: bool,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions {
            mode: StateMode::Subset,
            check_state_bound: true,
            full_witness: false,
        }
    }
}

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Block {
    len: u32,
    /// Subset mode: sorted terminal indices padded with `NONE`.
    /// Counted mode: `[forgotten terminals, 0]`.
    ends: [u32; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Key {
    deg: Vec<u8>,
    block: Vec<u8>,
    info: Vec<Block>,
}

impl Key {
    /// Renumbers blocks by first occurrence and drops unused ones.
    fn canonical(mut self) -> Key {
        let mut remap = vec![u8::MAX; self.info.len()];
        let mut info = Vec::with_capacity(self.info.len());
        for b in self.block.iter_mut() {
            let old = *b as usize;
            if remap[old] == u8::MAX {
                remap[old] = info.len() as u8;
                info.push(self.info[old]);
            }
            *b = remap[old];
        }
        self.info = info;
        self
    }
}

#[derive(Clone, Copy, Debug)]
enum Back {
    Leaf,
    Introduce(u32),
    Forget { child: u32, chosen: [Vertex; 2], count: u8 },
    Join(u32, u32),
}

struct Entry {
    key: Key,
    kappa: u32,
    back: Back,
}

#[derive(Default)]
struct Table {
    entries: Vec<Entry>,
    index: HashMap<Key, u32>,
}

impl Table {
    fn offer(&mut self, key: Key, kappa: u32, back: Back) {
        match self.index.entry(key) {
            MapEntry::Occupied(o) => {
                let e = &mut self.entries[*o.get() as usize];
                if kappa > e.kappa {
                    e.kappa = kappa;
                    e.back = back;
                }
            }
            MapEntry::Vacant(v) => {
                let key = v.key().clone();
                v.insert(self.entries.len() as u32);
                self.entries.push(Entry { key, kappa, back });
            }
        }
    }

    fn finish(self) -> Vec<Entry> {
        self.entries
    }
}

struct Dp<'a> {
    inst: &'a Instance,
    mode: StateMode,
    ell: u32,
    tid: Vec<u32>,
}

impl Dp<'_> {
    fn cap(&self, v: Vertex) -> u8 {
        if self.inst.is_terminal(v) {
            1
        } else {
            2
        }
    }

    fn alpha_size(&self, key: &Key, b: u8, bag: &[Vertex]) -> u32 {
        let blk = key.info[b as usize];
        match self.mode {
            StateMode::Subset => blk.ends.iter().filter(|&&x| x != NONE).count() as u32,
            StateMode::Counted => {
                blk.ends[0]
                    + bag
                        .iter()
                        .zip(&key.block)
                        .filter(|&(&v, &bb)| bb == b && self.inst.is_terminal(v))
                        .count() as u32
            }
        }
    }

    fn merge_ends(&self, a: [u32; 2], b: [u32; 2]) -> Option<[u32; 2]> {
        match self.mode {
            StateMode::Counted => Some([a[0] + b[0], 0]),
            StateMode::Subset => {
                let mut all: Vec<u32> = a.iter().chain(&b).copied().filter(|&x| x != NONE).collect();
                all.sort_unstable();
                all.dedup();
                match all.len() {
                    0 => Some([NONE, NONE]),
                    1 => Some([all[0], NONE]),
                    2 => Some([all[0], all[1]]),
                    _ => None,
                }
            }
        }
    }

    /// Can a component with `len` edges and `alpha` terminals still become
    /// part of a solution?
    fn viable(&self, len: u32, alpha: u32) -> bool {
        alpha <= 2
            && len <= self.ell
            && (alpha < 2 || len == self.ell)
            && (len == 0 || len + (2 - alpha) <= self.ell)
    }

    fn introduce(&self, bag: &[Vertex], v: Vertex, child: &[Entry], out: &mut Table) {
        let p = bag.binary_search(&v).expect("introduced vertex in bag");
        let ends = match self.mode {
            StateMode::Subset => [self.tid[v], NONE],
            StateMode::Counted => [0, 0],
        };
        for (i, e) in child.iter().enumerate() {
            let mut key = e.key.clone();
            key.deg.insert(p, 0);
            key.block.insert(p, key.info.len() as u8);
            key.info.push(Block { len: 0, ends });
            out.offer(key.canonical(), e.kappa, Back::Introduce(i as u32));
        }
    }

    fn forget(&self, bag: &[Vertex], v: Vertex, child: &[Entry], out: &mut Table) {
        let g = self.inst.graph();
        let p = bag.binary_search(&v).expect("forgotten vertex in child bag");
        let terminal = self.inst.is_terminal(v);
        let allowed = |f: u8| if terminal { f <= 1 } else { f == 0 || f == 2 };
        let neighbours: Vec<usize> = (0..bag.len()).filter(|&q| q != p && g.has_edge(v, bag[q])).collect();
        for (i, e) in child.iter().enumerate() {
            let key = &e.key;
            let d = key.deg[p];
            let cands: Vec<usize> = neighbours
                .iter()
                .copied()
                .filter(|&q| key.block[q] != key.block[p] && key.deg[q] < self.cap(bag[q]))
                .collect();
            if allowed(d) {
                self.close(bag, p, e, i, &[], out);
            }
            if allowed(d + 1) {
                for &q in &cands {
                    self.close(bag, p, e, i, &[q], out);
                }
            }
            if allowed(d + 2) {
                for (x, &q) in cands.iter().enumerate() {
                    for &r in &cands[x + 1..] {
                        if key.block[q] != key.block[r] {
                            self.close(bag, p, e, i, &[q, r], out);
                        }
                    }
                }
            }
        }
    }

    /// Adds edges from position `p` to `chosen`, then drops `p`.
    fn close(&self, bag: &[Vertex], p: usize, e: &Entry, ci: usize, chosen: &[usize], out: &mut Table) {
        let v = bag[p];
        let mut key = e.key.clone();
        let bv = key.block[p];
        let mut blk = key.info[bv as usize];
        key.deg[p] += chosen.len() as u8;
        blk.len += chosen.len() as u32;
        for &q in chosen {
            key.deg[q] += 1;
            let b = key.block[q];
            let other = key.info[b as usize];
            blk.len += other.len;
            match self.merge_ends(blk.ends, other.ends) {
                Some(ends) => blk.ends = ends,
                None => return,
            }
            for x in key.block.iter_mut() {
                if *x == b {
                    *x = bv;
                }
            }
        }
        key.info[bv as usize] = blk;
        let alpha = self.alpha_size(&key, bv, bag);
        if !self.viable(blk.len, alpha) {
            return;
        }
        let mut kappa = e.kappa;
        let shared = (0..bag.len()).any(|q| q != p && key.block[q] == bv);
        if shared {
            if self.mode == StateMode::Counted && self.inst.is_terminal(v) {
                key.info[bv as usize].ends[0] += 1;
            }
        } else if blk.len > 0 {
            if alpha == 2 && blk.len == self.ell {
                kappa += 1;
            } else {
                return;
            }
        }
        key.deg.remove(p);
        key.block.remove(p);
        let mut pair = [0; 2];
        for (slot, &q) in pair.iter_mut().zip(chosen) {
            *slot = bag[q];
        }
        out.offer(
            key.canonical(),
            kappa,
            Back::Forget {
                child: ci as u32,
                chosen: pair,
                count: chosen.len() as u8,
            },
        );
    }

    fn join(&self, bag: &[Vertex], left: &[Entry], right: &[Entry], out: &mut Table) {
        let group = |t: &[Entry]| {
            let mut order: Vec<(Vec<u8>, Vec<usize>)> = Vec::new();
            let mut at: HashMap<&[u8], usize> = HashMap::new();
            for (i, e) in t.iter().enumerate() {
                let slot = *at.entry(e.key.deg.as_slice()).or_insert_with(|| {
                    order.push((e.key.deg.clone(), Vec::new()));
                    order.len() - 1
                });
                order[slot].1.push(i);
            }
            order
        };
        let caps: Vec<u8> = bag.iter().map(|&v| self.cap(v)).collect();
        let lg = group(left);
        let rg = group(right);
        for (ldeg, lis) in &lg {
            for (rdeg, ris) in &rg {
                if ldeg.iter().zip(rdeg).zip(&caps).any(|((a, b), c)| a + b > *c) {
                    continue;
                }
                for &i in lis {
                    for &j in ris {
                        if let Some(key) = self.combine(bag, &left[i].key, &right[j].key) {
                            out.offer(key, left[i].kappa + right[j].kappa, Back::Join(i as u32, j as u32));
                        }
                    }
                }
            }
        }
    }

    fn combine(&self, bag: &[Vertex], l: &Key, r: &Key) -> Option<Key> {
        let b = bag.len();
        let mut parent: Vec<usize> = (0..b).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut firsts: [Vec<usize>; 2] = [vec![usize::MAX; l.info.len()], vec![usize::MAX; r.info.len()]];
        for (side, key) in [l, r].into_iter().enumerate() {
            for q in 0..b {
                let bl = key.block[q] as usize;
                let f = firsts[side][bl];
                if f == usize::MAX {
                    firsts[side][bl] = q;
                } else {
                    let (x, y) = (find(&mut parent, f), find(&mut parent, q));
                    if x == y {
                        return None;
                    }
                    parent[x] = y;
                }
            }
        }
        let mut block = vec![0u8; b];
        let mut info: Vec<Block> = Vec::new();
        let mut id_of_root = vec![u8::MAX; b];
        let empty = match self.mode {
            StateMode::Subset => [NONE, NONE],
            StateMode::Counted => [0, 0],
        };
        for (q, slot) in block.iter_mut().enumerate() {
            let root = find(&mut parent, q);
            if id_of_root[root] == u8::MAX {
                id_of_root[root] = info.len() as u8;
                info.push(Block { len: 0, ends: empty });
            }
            *slot = id_of_root[root];
        }
        for (side, key) in [l, r].into_iter().enumerate() {
            for (bl, &f) in firsts[side].iter().enumerate() {
                let target = &mut info[block[f] as usize];
                let src = key.info[bl];
                target.len += src.len;
                target.ends = self.merge_ends(target.ends, src.ends)?;
            }
        }
        let deg = l.deg.iter().zip(&r.deg).map(|(a, b)| a + b).collect();
        let key = Key { deg, block, info };
        for bl in 0..key.info.len() {
            let alpha = self.alpha_size(&key, bl as u8, bag);
            if !self.viable(key.info[bl].len, alpha) {
                return None;
            }
        }
        Some(key)
    }

    /// Distinct per-vertex (terminals, edges, degree) projections of a table.
    fn signatures(&self, bag: &[Vertex], table: &[Entry]) -> usize {
        let mut seen: HashSet<Vec<(u32, u32, u32, u8)>> = HashSet::new();
        for e in table {
            let sig = (0..bag.len())
                .map(|q| {
                    let b = e.key.block[q];
                    let blk = e.key.info[b as usize];
                    let (x, y) = match self.mode {
                        StateMode::Subset => (blk.ends[0], blk.ends[1]),
                        StateMode::Counted => (self.alpha_size(&e.key, b, bag), 0),
                    };
                    (x, y, blk.len, e.key.deg[q])
                })
                .collect();
            seen.insert(sig);
        }
        seen.len()
    }
}

/// Natural log of `(|A|^2 + |A| + 1)^b * (ell + 1)^b * 3^b`.
pub(crate) fn state_bound_ln(terminals: usize, ell: usize, bag: usize) -> f64 {
    let a = terminals as f64;
    bag as f64 * ((a * a + a + 1.0).ln() + (ell as f64 + 1.0).ln() + 3f64.ln())
}

pub fn solve_dp(inst: &Instance, nice: &NiceTreeDecomposition, mode: StateMode) -> Result<SolveResult> {
    solve_dp_with(
        inst,
        nice,
        &DpOptions {
            mode,
            ..DpOptions::default()
        },
    )
}

pub fn solve_dp_with(inst: &Instance, nice: &NiceTreeDecomposition, opts: &DpOptions) -> Result<SolveResult> {
    if inst.kind() != ProblemKind::Alpp {
        return Err(Error::Contract(
            "the DP answers the exact-length problem; reduce short-path instances first".into(),
        ));
    }
    nice.validate(inst.graph())
        .map_err(|e| Error::Contract(format!("decomposition does not fit the instance: {e}")))?;
    if nice.width() >= u8::MAX as usize {
        return Err(Error::Budget(format!("width {} too large for the DP", nice.width())));
    }
    if inst.ell() >= inst.n() {
        let mut r = SolveResult::no().with_optimum(0);
        r.stat("width", nice.width() as u64);
        return Ok(r);
    }
    let mut nice = nice.clone();
    nice.forget_root();
    let mut tid = vec![NONE; inst.n()];
    for (i, &t) in inst.terminals().iter().enumerate() {
        tid[t] = i as u32;
    }
    let dp = Dp {
        inst,
        mode: opts.mode,
        ell: inst.ell() as u32,
        tid,
    };
    let a = inst.terminals().len();
    let mut tables: Vec<Vec<Entry>> = Vec::with_capacity(nice.len());
    let (mut total, mut max_states, mut max_sigs) = (0u64, 0u64, 0u64);
    for (i, node) in nice.nodes().iter().enumerate() {
        let bag = nice.bag(i);
        let mut out = Table::default();
        match *node {
            NiceNode::Leaf => out.offer(
                Key {
                    deg: vec![],
                    block: vec![],
                    info: vec![],
                },
                0,
                Back::Leaf,
            ),
            NiceNode::Introduce { vertex, child } => dp.introduce(bag, vertex, &tables[child], &mut out),
            NiceNode::Forget { vertex, child } => dp.forget(nice.bag(child), vertex, &tables[child], &mut out),
            NiceNode::Join { left, right } => dp.join(bag, &tables[left], &tables[right], &mut out),
        }
        let table = out.finish();
        total += table.len() as u64;
        max_states = max_states.max(table.len() as u64);
        if opts.check_state_bound {
            let sigs = dp.signatures(bag, &table);
            max_sigs = max_sigs.max(sigs as u64);
            let bound = state_bound_ln(a, inst.ell(), bag.len()) + 1e-9;
            for (count, what) in [(sigs, "signatures"), (table.len(), "stored states")] {
                if (count as f64).ln() > bound {
                    return Err(Error::Contract(format!(
                        "node {i}: {count} {what} exceed the state bound for a bag of {}",
                        bag.len()
                    )));
                }
            }
        }
        tables.push(table);
    }
    let root = nice.root();
    let best = tables[root].first().map_or(0, |e| e.kappa) as usize;
    debug_assert!(best <= a / 2);

    let mut res = if best >= inst.k() || (opts.full_witness && best > 0) {
        let paths = reconstruct(inst, &nice, &tables)?;
        if paths.len() != best {
            return Err(Error::Contract(format!(
                "reconstructed {} paths for an optimum of {best}",
                paths.len()
            )));
        }
        let keep = if opts.full_witness { best } else { inst.k().min(best) };
        let packing = PathPacking::new(paths.into_iter().take(keep).collect());
        let check = inst.with_k(keep.max(1))?;
        if keep > 0 && !crate::graph::verify_packing(&check, &packing)?.is_valid() {
            return Err(Error::Contract("DP witness failed verification".into()));
        }
        let mut r = SolveResult::yes(Some(packing));
        r.decision = best >= inst.k();
        r
    } else {
        SolveResult::no()
    };
    res.optimum = Some(best);
    res.stat("dp_states", total);
    res.stat("max_node_states", max_states);
    if opts.check_state_bound {
        res.stat("max_node_signatures", max_sigs);
    }
    res.stat("nice_nodes", nice.len() as u64);
    res.stat("width", nice.width() as u64);
    Ok(res)
}

fn reconstruct(inst: &Instance, nice: &NiceTreeDecomposition, tables: &[Vec<Entry>]) -> Result<Vec<Vec<Vertex>>> {
    let n = inst.n();
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let mut stack = vec![(nice.root(), 0u32)];
    while let Some((node, idx)) = stack.pop() {
        match (nice.nodes()[node], tables[node][idx as usize].back) {
            (NiceNode::Leaf, Back::Leaf) => {}
            (NiceNode::Introduce { child, .. }, Back::Introduce(c)) => stack.push((child, c)),
            (NiceNode::Forget { vertex, child }, Back::Forget { child: c, chosen, count }) => {
                for &u in &chosen[..count as usize] {
                    adj[vertex].push(u);
                    adj[u].push(vertex);
                }
                stack.push((child, c));
            }
            (NiceNode::Join { left, right }, Back::Join(a, b)) => {
                stack.push((left, a));
                stack.push((right, b));
            }
            _ => return Err(Error::Contract("backpointer does not match node kind".into())),
        }
    }
    let mut seen = vec![false; n];
    let mut paths = Vec::new();
    for &t in inst.terminals() {
        if seen[t] || adj[t].len() != 1 {
            continue;
        }
        let mut path = vec![t];
        seen[t] = true;
        let mut prev = t;
        let mut cur = adj[t][0];
        loop {
            seen[cur] = true;
            path.push(cur);
            match adj[cur].iter().find(|&&x| x != prev) {
                Some(&next) if adj[cur].len() == 2 => {
                    prev = cur;
                    cur = next;
                }
                _ => break,
            }
        }
        paths.push(path);
    }
    if (0..n).any(|v| !adj[v].is_empty() && !seen[v]) {
        return Err(Error::Contract("reconstructed subgraph has a component without terminals".into()));
    }
    Ok(paths)
}
