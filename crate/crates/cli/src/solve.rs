use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};

use alpp_core::colorcoding::{solve_color_coding, ColorCodingOptions};
use alpp_core::io::{parse_instance_labeled, parse_td};
use alpp_core::matching::solve_small_ell;
use alpp_core::oracle::{oracle_solve, OracleBudget};
use alpp_core::reductions::{solve_sapp, Backend};
use alpp_core::td::{exact_decomposition, heuristic_tree_decomposition, make_nice, solve_dp, Heuristic, StateMode};
use alpp_core::{verify, Instance, ProblemKind, SolveResult, Verdict};

use crate::report::RunReport;
use crate::{CliResult, Failure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Auto,
    Oracle,
    Matching,
    Dp,
    Colorcoding,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Auto => "auto",
            Algo::Oracle => "oracle",
            Algo::Matching => "matching",
            Algo::Dp => "dp",
            Algo::Colorcoding => "colorcoding",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TdSource {
    /// Narrower of min-degree and min-fill.
    Heuristic,
    MinDegree,
    MinFill,
    /// Optimal decomposition (small graphs only).
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Subset,
    Counted,
}

#[derive(Args, Clone, Debug)]
pub struct SolverFlags {
    #[arg(long, value_enum, default_value_t = TdSource::Heuristic)]
    pub td: TdSource,
    /// Decomposition in PACE `.td` format; overrides `--td`.
    #[arg(long)]
    pub td_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Subset)]
    pub mode: Mode,
    /// Allowed probability of missing a yes-instance (color coding).
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest instance the exhaustive oracle accepts.
    #[arg(long, default_value_t = 16)]
    pub oracle_max_vertices: usize,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    pub algo: Algo,
    #[command(flatten)]
    pub flags: SolverFlags,
    /// With `auto`, use the oracle when the instance is small enough.
    #[arg(long)]
    pub prefer_oracle: bool,
    #[arg(long)]
    pub k_override: Option<usize>,
    #[arg(long)]
    pub ell_override: Option<usize>,
    /// Also write the decision and paths to this file.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    /// Append a single-line machine-readable block.
    #[arg(long)]
    pub json: bool,
}

/// The algorithm `auto` resolves to.
pub fn pick(inst: &Instance, algo: Algo, prefer_oracle: bool, flags: &SolverFlags) -> Algo {
    match algo {
        Algo::Auto if inst.ell() <= 3 => Algo::Matching,
        Algo::Auto if prefer_oracle && inst.n() <= flags.oracle_max_vertices => Algo::Oracle,
        Algo::Auto => Algo::Dp,
        other => other,
    }
}

fn state_mode(m: Mode) -> StateMode {
    match m {
        Mode::Subset => StateMode::Subset,
        Mode::Counted => StateMode::Counted,
    }
}

/// Runs one concrete algorithm (not `auto`).
pub fn run_algorithm(inst: &Instance, algo: Algo, flags: &SolverFlags) -> CliResult<SolveResult> {
    if algo == Algo::Matching && inst.ell() > 3 {
        return Err(Failure::usage(format!(
            "the matching solver needs ell <= 3, got ell = {}: the problem is NP-complete for every fixed \
             ell >= 4 (partition into paths of length ell - 2 reduces to it)",
            inst.ell()
        )));
    }
    let budget = OracleBudget {
        max_vertices: flags.oracle_max_vertices,
        ..OracleBudget::default()
    };
    let cc = ColorCodingOptions {
        epsilon: flags.epsilon,
        seed: flags.seed,
    };
    let res = if inst.kind() == ProblemKind::Sapp {
        if flags.td_file.is_some() {
            return Err(Failure::usage(
                "--td-file is not supported for short-path instances (the decomposition is lifted internally)",
            ));
        }
        let backend = match algo {
            Algo::Oracle => Backend::Oracle(budget),
            Algo::Matching => Backend::Matching,
            Algo::Dp => Backend::Dp {
                mode: state_mode(flags.mode),
                exact_decomposition: flags.td == TdSource::Exact,
            },
            Algo::Colorcoding => Backend::ColorCoding(cc),
            Algo::Auto => unreachable!("resolved by pick"),
        };
        solve_sapp(inst, &backend)?
    } else {
        match algo {
            Algo::Oracle => oracle_solve(inst, &budget)?,
            Algo::Matching => solve_small_ell(inst)?,
            Algo::Dp => {
                let td = match &flags.td_file {
                    Some(path) => parse_td(&std::fs::read_to_string(path)?)?,
                    None => match flags.td {
                        TdSource::Heuristic => heuristic_tree_decomposition(inst.graph(), None),
                        TdSource::MinDegree => heuristic_tree_decomposition(inst.graph(), Some(Heuristic::MinDegree)),
                        TdSource::MinFill => heuristic_tree_decomposition(inst.graph(), Some(Heuristic::MinFill)),
                        TdSource::Exact => exact_decomposition(inst.graph())?.1,
                    },
                };
                solve_dp(inst, &make_nice(&td), state_mode(flags.mode))?
            }
            Algo::Colorcoding => solve_color_coding(inst, &cc)?,
            Algo::Auto => unreachable!("resolved by pick"),
        }
    };
    if let Some(w) = &res.witness {
        if res.decision {
            if let Verdict::Invalid(v) = verify(inst, w)? {
                return Err(Failure {
                    code: 4,
                    message: format!("{} produced an invalid witness: {v}", algo.name()),
                });
            }
        }
    }
    Ok(res)
}

pub fn run(args: &SolveArgs) -> CliResult<u8> {
    let text = std::fs::read_to_string(&args.instance)?;
    let (mut inst, labels) = parse_instance_labeled(&text)?;
    if let Some(k) = args.k_override {
        inst = inst.with_k(k)?;
    }
    if let Some(ell) = args.ell_override {
        inst = inst.with_ell(ell)?;
    }
    let algo = pick(&inst, args.algo, args.prefer_oracle, &args.flags);
    let start = Instant::now();
    let res = run_algorithm(&inst, algo, &args.flags)?;
    let wall = start.elapsed();
    let witness = if res.decision { res.witness } else { None };
    let report = RunReport {
        digest: inst.digest(),
        algorithm: algo.name().to_string(),
        decision: res.decision,
        optimum: res.optimum,
        witness,
        witness_file: args.witness.clone(),
        wall,
        stats: res.stats,
        seed: (algo == Algo::Colorcoding).then_some(args.flags.seed),
    };
    if let Some(path) = &args.witness {
        let body = alpp_core::io::format_packing(report.decision, report.witness.as_ref(), Some(&labels));
        std::fs::write(path, body)?;
    }
    print!("{}", report.render(&labels, args.json));
    Ok(0)
}
