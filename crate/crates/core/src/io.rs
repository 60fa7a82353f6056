//! Line-oriented text formats.
//!
//! Instance files:
//!
//! ```text
//! # comment
//! p alpp <n> <m> <k> <ell>      (or: p sapp ...)
//! t <v>
//! e <u> <v>
//! ```
//!
//! Vertex ids in instance files may be arbitrary non-negative integers. When
//! every id is below `n` they are used as-is; otherwise the distinct ids are
//! mapped to `0..` in increasing order and the labels are kept so packings
//! can be printed in the file's own ids.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, GraphError, Instance, PathPacking, ProblemKind, Vertex};
use crate::reductions::{ExtendedInstance, MccInput};
use crate::td::TreeDecomposition;

/// Non-comment, non-empty lines with 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

fn num<T: std::str::FromStr>(line: usize, tok: Option<&&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("bad {what} '{tok}'")))
}

fn expect_arity(line: usize, toks: &[&str], arity: usize) -> Result<()> {
    if toks.len() != arity {
        return Err(Error::parse(
            line,
            format!("'{}' expects {} fields, found {}", toks[0], arity - 1, toks.len() - 1),
        ));
    }
    Ok(())
}

/// Dense relabelling of raw vertex ids.
struct Labels {
    labels: Vec<u64>,
    index: BTreeMap<u64, Vertex>,
}

impl Labels {
    fn build(n: usize, raw: impl Iterator<Item = u64>, header_line: usize) -> Result<Self> {
        let distinct: std::collections::BTreeSet<u64> = raw.collect();
        if distinct.iter().all(|&x| x < n as u64) {
            let labels: Vec<u64> = (0..n as u64).collect();
            let index = labels.iter().map(|&x| (x, x as usize)).collect();
            return Ok(Labels { labels, index });
        }
        if distinct.len() > n {
            return Err(Error::parse(
                header_line,
                format!("{} distinct vertex ids but n = {n}", distinct.len()),
            ));
        }
        let mut labels: Vec<u64> = distinct.into_iter().collect();
        let mut next = labels.last().map_or(0, |&x| x + 1);
        while labels.len() < n {
            labels.push(next);
            next += 1;
        }
        let index = labels.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        Ok(Labels { labels, index })
    }

    fn get(&self, raw: u64) -> Vertex {
        self.index[&raw]
    }
}

/// Parses an instance, discarding the original vertex labels.
pub fn parse_instance(text: &str) -> Result<Instance> {
    parse_instance_labeled(text).map(|(inst, _)| inst)
}

/// Parses an instance and returns, for every dense vertex, its id in the file.
pub fn parse_instance_labeled(text: &str) -> Result<(Instance, Vec<u64>)> {
    let mut header: Option<(usize, ProblemKind, usize, usize, usize, usize)> = None;
    let mut terms: Vec<(usize, u64)> = Vec::new();
    let mut edges: Vec<(usize, u64, u64)> = Vec::new();
    for (line, toks) in records(text) {
        match toks[0] {
            "p" => {
                if header.is_some() {
                    return Err(Error::parse(line, "second header line"));
                }
                expect_arity(line, &toks, 6)?;
                let kind = match toks[1] {
                    "alpp" => ProblemKind::Alpp,
                    "sapp" => ProblemKind::Sapp,
                    other => {
                        return Err(Error::parse(line, format!("unknown problem '{other}'")))
                    }
                };
                header = Some((
                    line,
                    kind,
                    num(line, toks.get(2), "n")?,
                    num(line, toks.get(3), "m")?,
                    num(line, toks.get(4), "k")?,
                    num(line, toks.get(5), "ell")?,
                ));
            }
            "t" if header.is_some() => {
                expect_arity(line, &toks, 2)?;
                terms.push((line, num(line, toks.get(1), "vertex")?));
            }
            "e" if header.is_some() => {
                expect_arity(line, &toks, 3)?;
                edges.push((
                    line,
                    num(line, toks.get(1), "vertex")?,
                    num(line, toks.get(2), "vertex")?,
                ));
            }
            "t" | "e" => return Err(Error::parse(line, "record before header")),
            other => return Err(Error::parse(line, format!("unknown record '{other}'"))),
        }
    }
    let (hline, kind, n, m, k, ell) = header.ok_or_else(|| Error::parse(0, "missing header"))?;
    if edges.len() != m {
        return Err(Error::parse(
            hline,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    let raw = terms
        .iter()
        .map(|&(_, v)| v)
        .chain(edges.iter().flat_map(|&(_, u, v)| [u, v]));
    let labels = Labels::build(n, raw, hline)?;
    let mut b = GraphBuilder::new(n);
    for &(line, u, v) in &edges {
        b.add_edge(labels.get(u), labels.get(v)).map_err(|e| {
            let msg = match e {
                GraphError::SelfLoop(_) => format!("self-loop at vertex {u}"),
                GraphError::DuplicateEdge(..) => format!("duplicate edge {{{u}, {v}}}"),
                other => other.to_string(),
            };
            Error::parse(line, msg)
        })?;
    }
    let mut seen = vec![false; n];
    let mut terminals = Vec::with_capacity(terms.len());
    for &(line, t) in &terms {
        let v = labels.get(t);
        if seen[v] {
            return Err(Error::parse(line, format!("terminal {t} listed twice")));
        }
        seen[v] = true;
        terminals.push(v);
    }
    let inst = Instance::with_kind(b.build(), terminals, k, ell, kind)
        .map_err(|e| Error::parse(hline, e.to_string()))?;
    Ok((inst, labels.labels))
}

/// Canonical text: dense ids, sorted terminals, edges `u < v` in order.
pub fn serialize_instance(inst: &Instance) -> String {
    let g = inst.graph();
    let mut out = format!(
        "p {} {} {} {} {}\n",
        inst.kind().as_str(),
        g.n(),
        g.m(),
        inst.k(),
        inst.ell()
    );
    for t in inst.terminals() {
        out.push_str(&format!("t {t}\n"));
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

/// `serialize_instance(parse_instance(text))`.
pub fn canonicalize(text: &str) -> Result<String> {
    parse_instance(text).map(|i| serialize_instance(&i))
}

/// Parses a bare graph: `p edge <n> <m>` followed by `e` lines. Instance
/// files are accepted too; their terminal lines are ignored.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let first = records(text).next();
    if let Some((_, toks)) = &first {
        if toks.len() > 1 && toks[0] == "p" && (toks[1] == "alpp" || toks[1] == "sapp") {
            return parse_instance(text).map(|i| i.graph().clone());
        }
    }
    let mut n = None;
    let mut m = 0;
    let mut hline = 0;
    let mut edges = Vec::new();
    for (line, toks) in records(text) {
        match toks[0] {
            "p" => {
                if n.is_some() {
                    return Err(Error::parse(line, "second header line"));
                }
                expect_arity(line, &toks, 4)?;
                if toks[1] != "edge" {
                    return Err(Error::parse(line, format!("unknown problem '{}'", toks[1])));
                }
                hline = line;
                n = Some(num::<usize>(line, toks.get(2), "n")?);
                m = num(line, toks.get(3), "m")?;
            }
            "e" if n.is_some() => {
                expect_arity(line, &toks, 3)?;
                edges.push((
                    line,
                    num::<u64>(line, toks.get(1), "vertex")?,
                    num::<u64>(line, toks.get(2), "vertex")?,
                ));
            }
            other => return Err(Error::parse(line, format!("unexpected record '{other}'"))),
        }
    }
    let n = n.ok_or_else(|| Error::parse(0, "missing header"))?;
    if edges.len() != m {
        return Err(Error::parse(hline, format!("header declares {m} edges, found {}", edges.len())));
    }
    let mut b = GraphBuilder::new(n);
    for (line, u, v) in edges {
        if u >= n as u64 || v >= n as u64 {
            return Err(Error::parse(line, format!("vertex out of range (n = {n})")));
        }
        b.add_edge(u as usize, v as usize)
            .map_err(|e| Error::parse(line, e.to_string()))?;
    }
    Ok(b.build())
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

/// Prints a packing as `path ...` lines preceded by a `decision` line.
/// `labels` maps dense ids back to file ids.
pub fn format_packing(decision: bool, packing: Option<&PathPacking>, labels: Option<&[u64]>) -> String {
    let mut out = format!("decision {}\n", if decision { "yes" } else { "no" });
    if let Some(p) = packing {
        for path in &p.paths {
            out.push_str("path");
            for &v in path {
                let id = labels.map_or(v as u64, |l| l[v]);
                out.push_str(&format!(" {id}"));
            }
            out.push('\n');
        }
    }
    out
}

/// Parses `path` lines (and an optional `decision` line). Ids are
/// translated through `labels` when given.
pub fn parse_packing(text: &str, labels: Option<&[u64]>) -> Result<(Option<bool>, PathPacking)> {
    let index: Option<BTreeMap<u64, Vertex>> =
        labels.map(|l| l.iter().enumerate().map(|(i, &x)| (x, i)).collect());
    let mut decision = None;
    let mut paths = Vec::new();
    for (line, toks) in records(text) {
        match toks[0] {
            "decision" => {
                expect_arity(line, &toks, 2)?;
                decision = Some(match toks[1] {
                    "yes" => true,
                    "no" => false,
                    other => return Err(Error::parse(line, format!("bad decision '{other}'"))),
                });
            }
            "path" => {
                let mut p = Vec::with_capacity(toks.len() - 1);
                for tok in &toks[1..] {
                    let raw: u64 = num(line, Some(tok), "vertex")?;
                    let v = match &index {
                        Some(ix) => *ix
                            .get(&raw)
                            .ok_or_else(|| Error::parse(line, format!("unknown vertex {raw}")))?,
                        None => raw as usize,
                    };
                    p.push(v);
                }
                paths.push(p);
            }
            // report lines from `alpp solve` are tolerated
            "c" | "json" => {}
            other => return Err(Error::parse(line, format!("unknown record '{other}'"))),
        }
    }
    Ok((decision, PathPacking::new(paths)))
}

/// Tree decomposition in the PACE `.td` layout: `s td <bags> <width+1> <n>`,
/// `b <id> <v...>` with bag ids starting at 1, and `<i> <j>` tree edges
/// (an optional leading `e` is accepted). Vertex ids are the instance's
/// dense ids.
pub fn parse_td(text: &str) -> Result<TreeDecomposition> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Option<Vec<Vertex>>> = Vec::new();
    let mut tree_edges = Vec::new();
    for (line, toks) in text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#') && !l.starts_with('c'))
        .map(|(i, l)| (i, l.split_whitespace().collect::<Vec<_>>()))
    {
        match toks[0] {
            "s" => {
                expect_arity(line, &toks, 5)?;
                if toks[1] != "td" {
                    return Err(Error::parse(line, "expected 's td'"));
                }
                let nb: usize = num(line, toks.get(2), "bag count")?;
                header = Some((line, nb));
                bags = vec![None; nb];
            }
            "b" => {
                let nb = bags.len();
                let id: usize = num(line, toks.get(1), "bag id")?;
                if id == 0 || id > nb {
                    return Err(Error::parse(line, format!("bag id {id} out of range")));
                }
                let mut bag = Vec::new();
                for tok in &toks[2..] {
                    bag.push(num::<usize>(line, Some(tok), "vertex")?);
                }
                if bags[id - 1].replace(bag).is_some() {
                    return Err(Error::parse(line, format!("bag {id} defined twice")));
                }
            }
            _ => {
                let t = if toks[0] == "e" { &toks[1..] } else { &toks[..] };
                if t.len() != 2 {
                    return Err(Error::parse(line, "tree edge expects two bag ids"));
                }
                let i: usize = num(line, t.first(), "bag id")?;
                let j: usize = num(line, t.get(1), "bag id")?;
                if i == 0 || j == 0 || i > bags.len() || j > bags.len() {
                    return Err(Error::parse(line, "tree edge references unknown bag"));
                }
                tree_edges.push((i - 1, j - 1));
            }
        }
    }
    let (hline, _) = header.ok_or_else(|| Error::parse(0, "missing 's td' header"))?;
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| Error::parse(hline, format!("bag {} missing", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok(TreeDecomposition::new(bags, tree_edges))
}

pub fn serialize_td(td: &TreeDecomposition, n: usize) -> String {
    let mut out = format!("s td {} {} {}\n", td.bags().len(), td.width() + 1, n);
    for (i, bag) in td.bags().iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for v in bag {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    for &(i, j) in td.tree_edges() {
        out.push_str(&format!("{} {}\n", i + 1, j + 1));
    }
    out
}

/// Weighted format: `p xalpp <n> <m> <r>`, `e <u> <v> <w>`, `q <s> <t> <len>`.
pub fn parse_extended(text: &str) -> Result<ExtendedInstance> {
    let mut header = None;
    let mut edges = Vec::new();
    let mut triples = Vec::new();
    for (line, toks) in records(text) {
        match toks[0] {
            "p" => {
                expect_arity(line, &toks, 5)?;
                if toks[1] != "xalpp" {
                    return Err(Error::parse(line, "expected 'p xalpp'"));
                }
                header = Some((
                    line,
                    num::<usize>(line, toks.get(2), "n")?,
                    num::<usize>(line, toks.get(3), "m")?,
                    num::<usize>(line, toks.get(4), "r")?,
                ));
            }
            "e" => {
                expect_arity(line, &toks, 4)?;
                edges.push((
                    line,
                    num::<usize>(line, toks.get(1), "vertex")?,
                    num::<usize>(line, toks.get(2), "vertex")?,
                    num::<u64>(line, toks.get(3), "weight")?,
                ));
            }
            "q" => {
                expect_arity(line, &toks, 4)?;
                triples.push((
                    num::<usize>(line, toks.get(1), "vertex")?,
                    num::<usize>(line, toks.get(2), "vertex")?,
                    num::<u64>(line, toks.get(3), "length")?,
                ));
            }
            other => return Err(Error::parse(line, format!("unknown record '{other}'"))),
        }
    }
    let (hline, n, m, r) = header.ok_or_else(|| Error::parse(0, "missing header"))?;
    if edges.len() != m || triples.len() != r {
        return Err(Error::parse(hline, "edge or triple count disagrees with header"));
    }
    let mut b = GraphBuilder::new(n);
    let mut weights = Vec::with_capacity(m);
    for (line, u, v, w) in edges {
        b.add_edge(u, v).map_err(|e| Error::parse(line, e.to_string()))?;
        weights.push(((u.min(v), u.max(v)), w));
    }
    ExtendedInstance::new(b.build(), weights.into_iter().collect(), triples)
        .map_err(|e| Error::parse(hline, e.to_string()))
}

pub fn serialize_extended(x: &ExtendedInstance) -> String {
    let g = x.graph();
    let mut out = format!("p xalpp {} {} {}\n", g.n(), g.m(), x.triples().len());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {u} {v} {}\n", x.weight(u, v)));
    }
    for t in x.triples() {
        out.push_str(&format!("q {} {} {}\n", t.source, t.target, t.length));
    }
    out
}

/// Multicolored clique input: `p mcc <k> <n>` then `e <c1> <j1> <c2> <j2>`
/// with classes in `1..=k` and vertices in `1..=n`.
pub fn parse_mcc(text: &str) -> Result<MccInput> {
    let mut header = None;
    let mut edges = Vec::new();
    for (line, toks) in records(text) {
        match toks[0] {
            "p" => {
                expect_arity(line, &toks, 4)?;
                if toks[1] != "mcc" {
                    return Err(Error::parse(line, "expected 'p mcc'"));
                }
                header = Some((
                    line,
                    num::<usize>(line, toks.get(2), "k")?,
                    num::<usize>(line, toks.get(3), "n")?,
                ));
            }
            "e" => {
                expect_arity(line, &toks, 5)?;
                edges.push((
                    num::<usize>(line, toks.get(1), "class")?,
                    num::<usize>(line, toks.get(2), "vertex")?,
                    num::<usize>(line, toks.get(3), "class")?,
                    num::<usize>(line, toks.get(4), "vertex")?,
                ));
            }
            other => return Err(Error::parse(line, format!("unknown record '{other}'"))),
        }
    }
    let (hline, k, n) = header.ok_or_else(|| Error::parse(0, "missing header"))?;
    MccInput::new(k, n, edges).map_err(|e| Error::parse(hline, e.to_string()))
}

pub fn serialize_mcc(mcc: &MccInput) -> String {
    let mut out = format!("p mcc {} {}\n", mcc.k(), mcc.n());
    for e in mcc.edges() {
        out.push_str(&format!("e {} {} {} {}\n", e.0, e.1, e.2, e.3));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const K2: &str = "p alpp 2 1 1 1\nt 0\nt 1\ne 0 1\n";

    #[test]
    fn parses_k2() {
        let inst = parse_instance(K2).unwrap();
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.terminals(), &[0, 1]);
        assert_eq!((inst.k(), inst.ell()), (1, 1));
        assert!(inst.graph().has_edge(0, 1));
    }

    #[test]
    fn rejects_self_loop_with_line_number() {
        let err = parse_instance("p alpp 2 1 1 1\nt 0\ne 0 0\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                message: "self-loop at vertex 0".into()
            }
        );
    }

    #[test]
    fn rejects_duplicates_and_range() {
        assert!(matches!(
            parse_instance("p alpp 2 2 1 1\ne 0 1\ne 1 0\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        // three distinct ids cannot fit in n = 2
        assert!(matches!(
            parse_instance("p alpp 2 1 1 1\nt 5\ne 7 9\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_instance("p alpp 2 0 1 1\nt 0\nt 0\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn round_trip_p4() {
        let messy = "# P4 out of order\np alpp 4 3 1 3\ne 3 2\nt 3\ne 1 0\nt 0\ne 2 1\n";
        let canon = canonicalize(messy).unwrap();
        assert_eq!(canon, "p alpp 4 3 1 3\nt 0\nt 3\ne 0 1\ne 1 2\ne 2 3\n");
        assert_eq!(canonicalize(&canon).unwrap(), canon);
    }

    #[test]
    fn sparse_ids_are_relabelled() {
        let (inst, labels) =
            parse_instance_labeled("p sapp 3 2 1 2\nt 10\nt 30\ne 10 20\ne 20 30\n").unwrap();
        assert_eq!(labels, vec![10, 20, 30]);
        assert_eq!(inst.kind(), ProblemKind::Sapp);
        assert!(inst.graph().has_edge(0, 1) && inst.graph().has_edge(1, 2));
        let p = PathPacking::new(vec![vec![0, 1, 2]]);
        let text = format_packing(true, Some(&p), Some(&labels));
        assert_eq!(text, "decision yes\npath 10 20 30\n");
        let (d, back) = parse_packing(&text, Some(&labels)).unwrap();
        assert_eq!((d, back), (Some(true), p));
    }

    #[test]
    fn td_round_trip() {
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let text = serialize_td(&td, 3);
        assert_eq!(text, "s td 2 2 3\nb 1 0 1\nb 2 1 2\n1 2\n");
        assert_eq!(parse_td(&text).unwrap(), td);
    }

    #[test]
    fn graph_format() {
        let g = parse_graph("p edge 3 2\ne 0 1\ne 1 2\n").unwrap();
        assert_eq!(serialize_graph(&g), "p edge 3 2\ne 0 1\ne 1 2\n");
        assert_eq!(parse_graph(K2).unwrap().m(), 1);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

    fn arb_instance(max_n: usize, max_ell: usize) -> impl Strategy<Value = Instance> {
        (2..=max_n).prop_flat_map(move |n| {
            (
                proptest::collection::vec(any::<bool>(), n * (n - 1) / 2),
                proptest::collection::vec(any::<bool>(), n),
                1..=3usize,
                1..=max_ell,
            )
                .prop_map(move |(edges, terms, k, ell)| {
                    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
                    let g = Graph::from_edges(n, pairs.zip(edges).filter(|(_, e)| *e).map(|(p, _)| p)).unwrap();
                    let a = (0..n).filter(|&v| terms[v]).collect();
                    Instance::new(g, a, k, ell).unwrap()
                })
        })
    }

        proptest! {
            #[test]
            fn instance_text_round_trips(inst in arb_instance(10, 6)) {
                let text = serialize_instance(&inst);
                prop_assert_eq!(parse_instance(&text).unwrap(), inst);
                prop_assert_eq!(canonicalize(&text).unwrap(), text);
            }
        }
    }
}
