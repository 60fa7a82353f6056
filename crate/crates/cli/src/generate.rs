use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use serde_json::json;

use alpp_core::generate::{random_gnp, random_grid_subgraph, random_mcc, RandomParams};
use alpp_core::io::{parse_graph, parse_mcc, serialize_extended, serialize_instance, serialize_mcc};
use alpp_core::reductions::{
    generate_from_hamiltonian, generate_from_path_partition, generate_mcc_extended, plan_extended_to_full,
    reduce_extended_to_full_capped, Generated, MAX_FULL_VERTICES,
};
use alpp_core::{Graph, ProblemKind};

use crate::{CliResult, Failure};

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(subcommand)]
    family: Family,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct PackingFlags {
    /// Fraction of vertices that become terminals.
    #[arg(long, default_value_t = 0.4)]
    a_frac: f64,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 2)]
    ell: usize,
    /// Emit a short-path instance instead of an exact-length one.
    #[arg(long)]
    sapp: bool,
}

impl PackingFlags {
    fn params(&self) -> RandomParams {
        RandomParams {
            terminal_fraction: self.a_frac,
            k: self.k,
            ell: self.ell,
            kind: if self.sapp { ProblemKind::Sapp } else { ProblemKind::Alpp },
        }
    }

    fn describe(&self) -> String {
        format!("a-frac={} k={} ell={} sapp={}", self.a_frac, self.k, self.ell, self.sapp)
    }
}

#[derive(Subcommand, Debug)]
enum Family {
    /// Erdős–Rényi graph with random terminals.
    RandomGnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        packing: PackingFlags,
    },
    /// Random edge subset of a grid.
    RandomGridSubgraph {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        /// Probability of keeping each grid edge.
        #[arg(long, default_value_t = 0.8)]
        keep: f64,
        #[command(flatten)]
        packing: PackingFlags,
    },
    /// Instance equivalent to Hamiltonicity of a graph.
    Hc {
        /// Use the cycle on this many vertices.
        #[arg(long, conflicts_with = "graph")]
        cycle: Option<usize>,
        /// Graph file (`p edge <n> <m>` / `e <u> <v>`).
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        alpha: usize,
    },
    /// Instance equivalent to partitioning a graph into paths of length lambda.
    Lpp {
        #[arg(long, conflicts_with = "n")]
        graph: Option<PathBuf>,
        /// Random `G(n, p)` source graph.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0.4)]
        p: f64,
        #[arg(long, default_value_t = 2)]
        lambda: usize,
    },
    /// Multicolored clique input taken through the weighted instance to a
    /// full packing instance.
    MccChain {
        #[arg(long, conflicts_with = "mcc")]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Cross-edge probability for the random input.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Plant a clique in the random input.
        #[arg(long)]
        plant: bool,
        /// Read the clique input instead (`p mcc <k> <n>` / `e c1 j1 c2 j2`).
        #[arg(long)]
        mcc: Option<PathBuf>,
        /// Also write the weighted instance here.
        #[arg(long)]
        extended_out: Option<PathBuf>,
        /// Size limit for the full instance.
        #[arg(long, default_value_t = MAX_FULL_VERTICES)]
        max_vertices: u128,
    },
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read_graph(path: &Path) -> CliResult<Graph> {
    Ok(parse_graph(&std::fs::read_to_string(path)?)?)
}

fn cycle(n: usize) -> CliResult<Graph> {
    if n < 3 {
        return Err(Failure::usage("a cycle needs at least 3 vertices"));
    }
    Ok(Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).map_err(alpp_core::Error::from)?)
}

fn with_names(header: &str, g: &Generated) -> String {
    let mut text = header.to_string();
    for (v, name) in g.names.iter().enumerate() {
        text.push_str(&format!("# vertex {v} {name}\n"));
    }
    text.push_str(&serialize_instance(&g.instance));
    text
}

pub fn run(args: &GenerateArgs) -> CliResult<u8> {
    let seed = args.seed;
    let out = args.out.as_deref();
    match &args.family {
        Family::RandomGnp { n, p, packing } => {
            let inst = random_gnp(*n, *p, &packing.params(), seed)?;
            let header = format!("# alpp generate random-gnp n={n} p={p} {} seed={seed}\n", packing.describe());
            emit(out, &(header + &serialize_instance(&inst)))?;
        }
        Family::RandomGridSubgraph {
            rows,
            cols,
            keep,
            packing,
        } => {
            let inst = random_grid_subgraph(*rows, *cols, *keep, &packing.params(), seed)?;
            let header = format!(
                "# alpp generate random-grid-subgraph rows={rows} cols={cols} keep={keep} {} seed={seed}\n",
                packing.describe()
            );
            emit(out, &(header + &serialize_instance(&inst)))?;
        }
        Family::Hc { cycle: c, graph, alpha } => {
            let (g, source) = match (c, graph) {
                (Some(n), None) => (cycle(*n)?, format!("cycle={n}")),
                (None, Some(path)) => (read_graph(path)?, format!("graph={}", path.display())),
                _ => return Err(Failure::usage("hc needs exactly one of --cycle and --graph")),
            };
            let gen = generate_from_hamiltonian(&g, *alpha)?;
            let header = format!("# alpp generate hc {source} alpha={alpha}\n");
            emit(out, &with_names(&header, &gen))?;
        }
        Family::Lpp { graph, n, p, lambda } => {
            let (g, source) = match (graph, n) {
                (Some(path), None) => (read_graph(path)?, format!("graph={}", path.display())),
                (None, Some(n)) => (
                    random_gnp(*n, *p, &RandomParams::default(), seed)?.graph().clone(),
                    format!("n={n} p={p} seed={seed}"),
                ),
                _ => return Err(Failure::usage("lpp needs exactly one of --graph and --n")),
            };
            let gen = generate_from_path_partition(&g, *lambda)?;
            let header = format!("# alpp generate lpp {source} lambda={lambda}\n");
            emit(out, &with_names(&header, &gen))?;
        }
        Family::MccChain {
            k,
            n,
            p,
            plant,
            mcc,
            extended_out,
            max_vertices,
        } => {
            let (input, source) = match (mcc, k, n) {
                (Some(path), None, None) => (
                    parse_mcc(&std::fs::read_to_string(path)?)?,
                    format!("mcc={}", path.display()),
                ),
                (None, Some(k), Some(n)) => (
                    random_mcc(*k, *n, *p, *plant, seed)?,
                    format!("k={k} n={n} p={p} plant={plant} seed={seed}"),
                ),
                _ => return Err(Failure::usage("mcc-chain needs --mcc, or both --k and --n")),
            };
            let (x, trace) = generate_mcc_extended(&input)?;
            if let Some(path) = extended_out {
                std::fs::write(path, serialize_extended(&x))?;
            }
            let plan = plan_extended_to_full(&x)?;
            let sidecar = json!({
                "source": source,
                "mcc": serialize_mcc(&input),
                "clique": input.find_clique(),
                "class_size": trace.n,
                "padded": trace.padded,
                "l1": trace.l1,
                "l2": trace.l2,
                "weighted_vertices": x.graph().n(),
                "triples": x.triples().len(),
                "full_p": plan.p.to_string(),
                "full_ell": plan.ell.to_string(),
                "full_vertices": plan.vertices.to_string(),
                "full_terminals": plan.terminals,
                "unroutable_triple": plan.unroutable,
                "names": trace.names,
            });
            if let Some(path) = out {
                let mut trace_path = path.as_os_str().to_owned();
                trace_path.push(".trace.json");
                std::fs::write(trace_path, format!("{sidecar:#}\n"))?;
            }
            let (inst, _) = reduce_extended_to_full_capped(&x, *max_vertices)?;
            let header = format!("# alpp generate mcc-chain {source}\n");
            emit(out, &(header + &serialize_instance(&inst)))?;
        }
    }
    Ok(0)
}
