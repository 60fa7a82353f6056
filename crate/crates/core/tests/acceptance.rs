//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every expected decision comes from an exhaustive oracle or from a
//! brute-force routine written here, never from the solver under test.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use alpp_core::colorcoding::{build_triangled_pair, solve_color_coding, ColorCodingOptions};
use alpp_core::generate::{random_gnp_capped, random_grid_subgraph, RandomParams};
use alpp_core::matching::{max_matching, solve_small_ell, AuxiliaryMatchingGraph};
use alpp_core::oracle::{
    exact_pathwidth_capped, oracle_max_packing, oracle_max_packing_with, oracle_max_short_packing_with,
    oracle_subgraph_embedding, oracle_weighted_disjoint_paths, OracleBudget,
};
use alpp_core::reductions::{
    generate_from_hamiltonian, generate_from_path_partition, generate_mcc_extended, plan_mcc_to_full,
    reduce_extended_to_full, reduce_sapp_to_alpp, MccInput,
};
use alpp_core::td::{exact_decomposition, heuristic_tree_decomposition, make_nice, solve_dp, StateMode};
use alpp_core::{verify_packing, Error, Graph, GraphBuilder, Instance, ProblemKind, SolveResult, Verdict, Violation};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn big_budget() -> OracleBudget {
    OracleBudget {
        max_vertices: 256,
        ..OracleBudget::default()
    }
}

/// `ln((|A|^2 + |A| + 1)^b (ell + 1)^b 3^b)` for a bag of `b` vertices.
fn state_bound_ln(terminals: usize, ell: usize, b: usize) -> f64 {
    let a = terminals as f64;
    b as f64 * ((a * a + a + 1.0).ln() + (ell as f64 + 1.0).ln() + 3f64.ln())
}

fn sweep_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0000 + seed);
    let n = rng.random_range(4..=12);
    let a_max = n.min(8);
    let a = rng.random_range(2..=a_max);
    let params = RandomParams {
        terminal_fraction: a as f64 / n as f64,
        k: rng.random_range(1..=4),
        ell: rng.random_range(1..=5),
        kind: ProblemKind::Alpp,
    };
    let p = rng.random_range(0.15..0.55);
    random_gnp_capped(n, p, 24, &params, seed).unwrap()
}

fn check_dp_run(inst: &Instance, r: &SolveResult, runs: &mut usize, worst: &mut f64) -> bool {
    *runs += 1;
    let b = r.stats["width"] as usize + 1;
    let bound = state_bound_ln(inst.terminals().len(), inst.ell(), b);
    // ell >= n is answered before any table is built
    let Some(&states) = r.stats.get("max_node_states") else {
        return inst.ell() >= inst.n();
    };
    let sigs = r.stats["max_node_signatures"];
    let used = (states.max(sigs).max(1) as f64).ln();
    *worst = worst.max(used / bound.max(1e-9));
    used <= bound + 1e-9
}

fn criterion_1_and_3() -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let (mut cc_runs, mut cc_missed, mut match_runs) = (0usize, 0usize, 0usize);
    let (mut dp_runs, mut worst) = (0usize, 0f64);
    let mut bound_violations = Vec::new();
    let total = 500u64;
    let mut yes = 0;
    for seed in 0..total {
        let inst = sweep_instance(seed);
        let truth = oracle_max_packing(&inst).unwrap().count >= inst.k();
        yes += truth as usize;
        if inst.ell() <= 3 {
            match_runs += 1;
            let r = solve_small_ell(&inst).unwrap();
            if r.decision != truth {
                mismatches.push(format!("seed {seed}: matching"));
            }
        }
        let heuristic = heuristic_tree_decomposition(inst.graph(), None);
        let (_, exact) = exact_decomposition(inst.graph()).unwrap();
        for (td_name, td) in [("heuristic", &heuristic), ("exact", &exact)] {
            let nice = make_nice(td);
            for mode in [StateMode::Subset, StateMode::Counted] {
                match solve_dp(&inst, &nice, mode) {
                    Ok(r) => {
                        if r.decision != truth {
                            mismatches.push(format!("seed {seed}: dp {td_name} {mode:?}"));
                        }
                        if !check_dp_run(&inst, &r, &mut dp_runs, &mut worst) {
                            bound_violations.push(format!("seed {seed}"));
                        }
                    }
                    Err(Error::Contract(m)) if m.contains("state bound") => {
                        dp_runs += 1;
                        bound_violations.push(format!("seed {seed}: {m}"));
                    }
                    Err(e) => mismatches.push(format!("seed {seed}: dp {td_name} {mode:?} error {e}")),
                }
            }
        }
        if inst.k() * (inst.ell() + 1) <= 12 {
            cc_runs += 1;
            let r = solve_color_coding(&inst, &ColorCodingOptions { epsilon: 1e-3, seed }).unwrap();
            if r.decision && !truth {
                mismatches.push(format!("seed {seed}: color coding false yes"));
            } else if !r.decision && truth {
                cc_missed += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let miss_rate = cc_missed as f64 / cc_runs.max(1) as f64;
    let c1 = outcome(
        mismatches.is_empty() && miss_rate <= 0.005 && elapsed < Duration::from_secs(300),
        format!(
            "{total} instances ({yes} yes), matching {match_runs}, dp {dp_runs}, color coding {cc_runs} \
             (missed {cc_missed}, rate {miss_rate:.4}), mismatches {:?}, {elapsed:.1?}",
            mismatches
        ),
    );
    let c3 = outcome(
        bound_violations.is_empty() && dp_runs > 0,
        format!(
            "{dp_runs} dp runs checked per node, worst log-ratio to bound {worst:.3}, violations {:?}",
            bound_violations
        ),
    );
    (c1, c3)
}

/// Maximum matching by trying every edge choice.
fn brute_force_matching(g: &Graph) -> usize {
    fn go(g: &Graph, used: &mut Vec<bool>, from: usize) -> usize {
        let Some(v) = (from..g.n()).find(|&v| !used[v]) else {
            return 0;
        };
        used[v] = true;
        let mut best = go(g, used, v + 1);
        for &w in g.neighbors(v) {
            if !used[w] {
                used[w] = true;
                best = best.max(1 + go(g, used, v + 1));
                used[w] = false;
            }
        }
        used[v] = false;
        best
    }
    go(g, &mut vec![false; g.n()], 0)
}

fn criterion_2() -> Outcome {
    let mut failures = Vec::new();
    let (mut total, mut brute_checked, mut yes) = (0, 0, 0);
    for seed in 0..240u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x7e01 + seed);
        // every other instance is small enough for brute-force matching
        let n = if seed % 2 == 0 {
            rng.random_range(4..=8)
        } else {
            rng.random_range(6..=12)
        };
        let a = rng.random_range(2..=n.min(8));
        let params = RandomParams {
            terminal_fraction: a as f64 / n as f64,
            k: rng.random_range(1..=3),
            ell: 3,
            kind: ProblemKind::Alpp,
        };
        let inst = random_gnp_capped(n, rng.random_range(0.2..0.6), 24, &params, seed).unwrap();
        let aux = AuxiliaryMatchingGraph::build(&inst);
        let size = max_matching(aux.graph()).size();
        if aux.graph().n() <= 14 {
            brute_checked += 1;
            let brute = brute_force_matching(aux.graph());
            if brute != size {
                failures.push(format!("seed {seed}: blossom {size} vs brute force {brute}"));
            }
        }
        let truth = oracle_max_packing(&inst).unwrap().count >= inst.k();
        yes += truth as usize;
        if (size >= aux.threshold(inst.k())) != truth {
            failures.push(format!("seed {seed}: matching {size}, threshold {}", aux.threshold(inst.k())));
        }
        total += 1;
    }
    outcome(
        failures.is_empty() && total >= 200,
        format!("{total} instances ({yes} yes), {brute_checked} matching sizes brute-forced, failures {failures:?}"),
    )
}

fn has_hamiltonian_cycle(g: &Graph) -> bool {
    let n = g.n();
    if n < 3 {
        return false;
    }
    // reach[mask][v]: a path from 0 through exactly `mask` ending at v
    let mut reach = vec![vec![false; n]; 1 << n];
    reach[1][0] = true;
    for mask in 1usize..1 << n {
        if mask & 1 == 0 {
            continue;
        }
        for v in 0..n {
            if !reach[mask][v] {
                continue;
            }
            for &w in g.neighbors(v) {
                if mask & (1 << w) == 0 {
                    reach[mask | (1 << w)][w] = true;
                }
            }
        }
    }
    let full = (1 << n) - 1;
    g.neighbors(0).iter().any(|&v| reach[full][v])
}

/// Whether `g` splits into vertex-disjoint paths on three vertices.
fn has_p3_partition(g: &Graph) -> bool {
    fn go(g: &Graph, used: &mut Vec<bool>) -> bool {
        let Some(v) = (0..g.n()).find(|&v| !used[v]) else {
            return true;
        };
        used[v] = true;
        let nb: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| !used[w]).collect();
        // v as an end: v - x - y; v as the middle: x - v - y
        for &x in &nb {
            used[x] = true;
            for &y in g.neighbors(x) {
                if !used[y] {
                    used[y] = true;
                    if go(g, used) {
                        return true;
                    }
                    used[y] = false;
                }
            }
            for &y in &nb {
                if y > x && !used[y] {
                    used[y] = true;
                    if go(g, used) {
                        return true;
                    }
                    used[y] = false;
                }
            }
            used[x] = false;
        }
        used[v] = false;
        false
    }
    go(g, &mut vec![false; g.n()])
}

fn near_cycle(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut b = GraphBuilder::new(n);
    let open = rng.random_bool(0.2);
    for i in 0..n {
        if !(open && i == n - 1) {
            b.add_edge(i, (i + 1) % n).unwrap();
        }
    }
    for _ in 0..rng.random_range(0..=2) {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        if u != v && !b.has_edge(u, v) {
            b.add_edge(u, v).unwrap();
        }
    }
    // relabel so the removed degree-2 vertex is not always 0
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let g = b.build();
    Graph::from_edges(n, g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap()
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let budget = big_budget();

    let mut sapp_count = 0;
    for seed in 0..120u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5a99 + seed);
        let n = rng.random_range(3..=10);
        let params = RandomParams {
            terminal_fraction: rng.random_range(0.2..0.7),
            k: rng.random_range(1..=3),
            ell: rng.random_range(1..=4),
            kind: ProblemKind::Sapp,
        };
        let src = random_gnp_capped(n, rng.random_range(0.15..0.45), 14, &params, seed).unwrap();
        let (dst, _) = reduce_sapp_to_alpp(&src).unwrap();
        let a = oracle_max_short_packing_with(&src, &budget).unwrap().count >= src.k();
        let b = oracle_max_packing_with(&dst, &budget).unwrap().count >= dst.k();
        if a != b {
            failures.push(format!("short-path seed {seed}: {a} vs {b}"));
        }
        sapp_count += 1;
    }

    let (mut hc_count, mut hc_yes, mut hc_skipped) = (0, 0, 0);
    for seed in 0..80u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x4c + seed);
        let g = near_cycle(rng.random_range(4..=10), &mut rng);
        let alpha = if seed % 2 == 0 { 2 } else { 4 };
        let gen = match generate_from_hamiltonian(&g, alpha) {
            Ok(gen) => gen,
            Err(Error::Construction(_)) => {
                hc_skipped += 1;
                continue;
            }
            Err(e) => panic!("{e}"),
        };
        let src = has_hamiltonian_cycle(&g);
        let dst = oracle_max_packing_with(&gen.instance, &budget).unwrap().count >= gen.instance.k();
        if src != dst {
            failures.push(format!("cycle seed {seed}: {src} vs {dst}"));
        }
        hc_count += 1;
        hc_yes += src as usize;
    }

    let (mut pp_count, mut pp_yes) = (0, 0);
    for seed in 0..80u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x99 + seed);
        let n = 3 * rng.random_range(1..=3);
        let g = random_gnp_capped(n, rng.random_range(0.2..0.6), 40, &RandomParams::default(), seed)
            .unwrap()
            .graph()
            .clone();
        let gen = generate_from_path_partition(&g, 2).unwrap();
        let src = has_p3_partition(&g);
        let dst = oracle_max_packing_with(&gen.instance, &budget).unwrap().count >= gen.instance.k();
        if src != dst {
            failures.push(format!("path partition seed {seed}: {src} vs {dst}"));
        }
        pp_count += 1;
        pp_yes += src as usize;
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed < Duration::from_secs(120),
        format!(
            "short-path {sapp_count}, cycle {hc_count} ({hc_yes} yes, {hc_skipped} without a degree-2 vertex), \
             path partition {pp_count} ({pp_yes} yes), failures {failures:?}, {elapsed:.1?}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let with = MccInput::new(2, 3, vec![(1, 1, 2, 2), (1, 2, 2, 1), (1, 3, 2, 3)]).unwrap();
    let without = MccInput::new(2, 3, vec![]).unwrap();
    for (name, mcc, clique) in [("with clique", &with, true), ("without clique", &without, false)] {
        let (x, trace) = generate_mcc_extended(mcc).unwrap();
        let found = oracle_weighted_disjoint_paths(&x).unwrap();
        if found.is_some() != clique {
            pass = false;
        }
        notes.push(format!("{name}: weighted oracle {}", found.is_some()));
        let plan = plan_mcc_to_full(mcc).unwrap();
        let k = mcc.k();
        if plan.terminals != 2 * (k + k * (k - 1) / 2) {
            pass = false;
        }
        notes.push(format!("{name}: |A| = {}", plan.terminals));
        if clique {
            let sigma = vec![2, 1];
            let paths = trace.forward(&sigma).unwrap();
            if let Err(e) = x.check_paths(&paths) {
                pass = false;
                notes.push(format!("weighted forward witness invalid: {e}"));
            }
            match reduce_extended_to_full(&x) {
                Ok((inst, et)) => {
                    let packing = et.forward(&paths).unwrap();
                    if !verify_packing(&inst, &packing).unwrap().is_valid() {
                        pass = false;
                        notes.push("full forward witness invalid".into());
                    }
                }
                Err(e) => {
                    pass = false;
                    notes.push(format!(
                        "full instance not built ({} vertices, ell = {}): {e}",
                        plan.vertices, plan.ell
                    ));
                }
            }
        }
    }
    outcome(pass, format!("notes {notes:?}"))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let (mut worst_sub, mut worst_att) = (0i64, 0i64);
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6a + seed);
        let n = rng.random_range(3..=7);
        let g = random_gnp_capped(n, rng.random_range(0.3..0.8), 21, &RandomParams::default(), seed)
            .unwrap()
            .graph()
            .clone();
        let pw = exact_pathwidth_capped(&g, 20).unwrap() as i64;

        // attachments only
        let mut b = GraphBuilder::new(n);
        for (u, v) in g.edges() {
            b.add_edge(u, v).unwrap();
        }
        for _ in 0..rng.random_range(1..=3) {
            let at = rng.random_range(0..b.n());
            b.attach_path(at, rng.random_range(1..=3));
        }
        let attached = b.clone().build();
        // then subdivisions on top
        let mut sub = GraphBuilder::new(attached.n());
        let edges: Vec<_> = attached.edges().collect();
        for (u, v) in edges {
            if sub.n() < 20 && rng.random_bool(0.3) {
                sub.connect_by_path(u, v, rng.random_range(2..=3)).unwrap();
            } else {
                sub.add_edge(u, v).unwrap();
            }
        }
        let both = sub.build();
        let pw_att = exact_pathwidth_capped(&attached, 22).unwrap() as i64;
        let pw_both = exact_pathwidth_capped(&both, 22).unwrap() as i64;
        worst_att = worst_att.max(pw_att - pw);
        worst_sub = worst_sub.max(pw_both - pw);
        if pw_att > pw + 1 || pw_both > pw + 2 {
            failures.push(format!("seed {seed}: {pw} -> {pw_att} / {pw_both}"));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed < Duration::from_secs(180),
        format!(
            "100 graphs, largest increase {worst_att} (attachments) and {worst_sub} (with subdivisions), \
             failures {failures:?}, {elapsed:.1?}"
        ),
    )
}

fn is_embedding(host: &Graph, pattern: &Graph, map: &[usize]) -> bool {
    let distinct: BTreeSet<_> = map.iter().collect();
    map.len() == pattern.n() && distinct.len() == map.len() && pattern.edges().all(|(u, v)| host.has_edge(map[u], map[v]))
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    let mut through_terminal = Vec::new();
    let mut yes = 0;
    let budget = OracleBudget {
        max_vertices: 64,
        ..OracleBudget::default()
    };
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x77 + seed);
        let n = rng.random_range(3..=8);
        let params = RandomParams {
            terminal_fraction: rng.random_range(0.25..0.7),
            k: rng.random_range(1..=2),
            ell: rng.random_range(1..=4),
            kind: ProblemKind::Alpp,
        };
        let inst = random_gnp_capped(n, rng.random_range(0.2..0.5), 12, &params, seed).unwrap();
        let best = oracle_max_packing(&inst).unwrap();
        let truth = best.count >= inst.k();
        yes += truth as usize;
        let pair = build_triangled_pair(&inst);
        if truth {
            let mut w = best.witness.clone();
            w.paths.truncate(inst.k());
            if !is_embedding(&pair.host, &pair.pattern, &pair.embedding_from_packing(&w)) {
                failures.push(format!("seed {seed}: packing does not embed"));
            }
        }
        let emb = oracle_subgraph_embedding(&pair.host, &pair.pattern, true, &budget).unwrap();
        if let Some(map) = &emb {
            match pair.packing_from_embedding(map).map(|p| verify_packing(&inst, &p).unwrap()) {
                Some(Verdict::Valid) => {}
                Some(Verdict::Invalid(Violation::InternalTerminal { .. })) => through_terminal.push(seed),
                other => failures.push(format!("seed {seed}: embedding decodes to {other:?}")),
            }
        }
        if emb.is_some() != truth {
            failures.push(format!("seed {seed}: containment {} but oracle {truth}", emb.is_some()));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "100 instances ({yes} yes), embeddings whose path runs through a terminal at seeds {through_terminal:?}, \
             failures {failures:?}"
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut widths = BTreeSet::new();
    let mut runs = 0;
    for seed in 0..12u64 {
        let params = RandomParams {
            terminal_fraction: [0.2, 0.35, 0.5][seed as usize % 3],
            k: 3,
            ell: 4 + seed as usize % 3,
            kind: ProblemKind::Alpp,
        };
        let keep = [0.8, 0.9, 1.0][seed as usize / 4 % 3];
        let inst = random_grid_subgraph(4, 15, keep, &params, seed).unwrap();
        let td = heuristic_tree_decomposition(inst.graph(), None);
        widths.insert(td.width());
        if td.width() > 4 {
            failures.push(format!("seed {seed}: heuristic width {}", td.width()));
            continue;
        }
        let nice = make_nice(&td);
        for mode in [StateMode::Subset, StateMode::Counted] {
            let t = Instant::now();
            let r = solve_dp(&inst, &nice, mode);
            let dt = t.elapsed();
            slowest = slowest.max(dt);
            runs += 1;
            if r.is_err() || dt >= Duration::from_secs(10) {
                failures.push(format!("seed {seed} {mode:?}: {:?} in {dt:.1?}", r.err()));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{runs} runs on n = 60, widths {widths:?}, slowest {slowest:.2?}, failures {failures:?}"),
    )
}

#[test]
fn acceptance() {
    let (c1, c3) = criterion_1_and_3();
    let results = [
        (1, "oracle equivalence sweep", c1),
        (2, "matching threshold identity", criterion_2()),
        (3, "dp state bound", c3),
        (4, "reduction equivalence", criterion_4()),
        (5, "clique gadget chain", criterion_5()),
        (6, "pathwidth under subdivision and attachment", criterion_6()),
        (7, "triangled pair containment", criterion_7()),
        (8, "dp performance on n = 60", criterion_8()),
    ];
    let mut failed = Vec::new();
    for (id, name, o) in &results {
        println!("{} criterion {id} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(*id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
