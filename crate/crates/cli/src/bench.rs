use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use clap::Args;

use alpp_core::io::{parse_instance, serialize_instance};
use alpp_core::{Graph, Instance};

use crate::solve::{run_algorithm, Algo, SolverFlags};
use crate::{CliResult, Failure};

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Directory of instance files.
    corpus: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = vec![Algo::Oracle, Algo::Matching, Algo::Dp, Algo::Colorcoding])]
    algos: Vec<Algo>,
    #[arg(long, default_value_t = 1)]
    repetitions: usize,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Color coding is skipped above this many colors.
    #[arg(long, default_value_t = 12)]
    cc_max_colors: usize,
    /// Where a disagreement reproduction is written; defaults to the corpus.
    #[arg(long)]
    repro_dir: Option<PathBuf>,
    #[command(flatten)]
    flags: SolverFlags,
}

#[derive(Clone, Debug)]
enum Cell {
    Decided { yes: bool, time: Duration },
    Resource(String),
    NotApplicable,
}

type RowResult = CliResult<Vec<(Algo, Cell)>>;

struct Row {
    name: String,
    inst: Instance,
    cells: Vec<(Algo, Cell)>,
}

fn applicable(inst: &Instance, algo: Algo, args: &BenchArgs) -> bool {
    match algo {
        Algo::Matching => inst.ell() <= 3,
        Algo::Oracle => inst.n() <= args.flags.oracle_max_vertices,
        Algo::Colorcoding => inst.k() * (inst.ell() + 1) <= args.cc_max_colors,
        Algo::Dp => true,
        Algo::Auto => false,
    }
}

fn run_cell(inst: &Instance, algo: Algo, args: &BenchArgs) -> CliResult<Cell> {
    if !applicable(inst, algo, args) {
        return Ok(Cell::NotApplicable);
    }
    let mut best = Duration::MAX;
    let mut decision = None;
    for _ in 0..args.repetitions.max(1) {
        let start = Instant::now();
        match run_algorithm(inst, algo, &args.flags) {
            Ok(r) => {
                best = best.min(start.elapsed());
                decision = Some(r.decision);
            }
            Err(f) if f.code == 3 => return Ok(Cell::Resource(f.message)),
            Err(f) => return Err(f),
        }
    }
    Ok(Cell::Decided {
        yes: decision.expect("at least one repetition"),
        time: best,
    })
}

fn decisions(cells: &[(Algo, Cell)]) -> Vec<(Algo, bool)> {
    cells
        .iter()
        .filter_map(|(a, c)| match c {
            Cell::Decided { yes, .. } => Some((*a, *yes)),
            _ => None,
        })
        .collect()
}

/// Two algorithms whose decisions differ on `inst`, if any.
fn disagreeing_pair(inst: &Instance, algos: &[Algo], args: &BenchArgs) -> Option<(Algo, Algo)> {
    let mut seen: Option<(Algo, bool)> = None;
    for &a in algos {
        if let Ok(Cell::Decided { yes, .. }) = run_cell(inst, a, args) {
            match seen {
                Some((b, y)) if y != yes => return Some((b, a)),
                None => seen = Some((a, yes)),
                _ => {}
            }
        }
    }
    None
}

/// Drops edges one at a time while the two algorithms keep disagreeing.
fn minimize(inst: &Instance, pair: (Algo, Algo), args: &BenchArgs) -> Instance {
    let mut cur = inst.clone();
    let algos = [pair.0, pair.1];
    loop {
        let edges: Vec<_> = cur.graph().edges().collect();
        let mut shrunk = false;
        for i in 0..edges.len() {
            let rest = edges.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &e)| e);
            let Ok(g) = Graph::from_edges(cur.n(), rest) else { continue };
            let Ok(cand) = Instance::with_kind(g, cur.terminals().to_vec(), cur.k(), cur.ell(), cur.kind()) else {
                continue;
            };
            if disagreeing_pair(&cand, &algos, args).is_some() {
                cur = cand;
                shrunk = true;
                break;
            }
        }
        if !shrunk {
            return cur;
        }
    }
}

fn fmt_cell(c: &Cell) -> String {
    match c {
        Cell::Decided { yes, time } => format!(
            "{} {:.3}ms",
            if *yes { "yes" } else { "no" },
            time.as_secs_f64() * 1e3
        ),
        Cell::Resource(_) => "resource".to_string(),
        Cell::NotApplicable => "-".to_string(),
    }
}

fn corpus_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            !name.starts_with('.') && !name.starts_with("repro-")
        })
        .collect();
    files.sort();
    Ok(files)
}

pub fn run(args: &BenchArgs) -> CliResult<u8> {
    let files = corpus_files(&args.corpus)?;
    let mut rows = Vec::new();
    let mut skipped = 0;
    for f in &files {
        let name = f.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        match std::fs::read_to_string(f).map_err(Failure::from).and_then(|t| Ok(parse_instance(&t)?)) {
            Ok(inst) => rows.push(Row {
                name,
                inst,
                cells: Vec::new(),
            }),
            Err(e) => {
                eprintln!("warning: skipping {name}: {}", e.message);
                skipped += 1;
            }
        }
    }

    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<RowResult>>> = rows.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..args.jobs.max(1) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(row) = rows.get(i) else { break };
                let cells: CliResult<Vec<_>> =
                    args.algos.iter().map(|&a| run_cell(&row.inst, a, args).map(|c| (a, c))).collect();
                *slots[i].lock().expect("no poisoned slot") = Some(cells);
            });
        }
    });
    for (row, slot) in rows.iter_mut().zip(slots) {
        row.cells = slot.into_inner().expect("no poisoned slot").expect("every row ran")?;
    }

    let header: Vec<String> = args.algos.iter().map(|a| a.name().to_string()).collect();
    println!("instance\t{}", header.join("\t"));
    for row in &rows {
        let cells: Vec<String> = row.cells.iter().map(|(_, c)| fmt_cell(c)).collect();
        println!("{}\t{}", row.name, cells.join("\t"));
        for (a, c) in &row.cells {
            if let Cell::Resource(m) = c {
                eprintln!("warning: {} on {}: {m}", a.name(), row.name);
            }
        }
    }
    for row in &rows {
        let d = decisions(&row.cells);
        if let Some(&(b, _)) = d.iter().find(|(_, y)| *y != d[0].1) {
            let pair = (d[0].0, b);
            let small = minimize(&row.inst, pair, args);
            let dir = args.repro_dir.clone().unwrap_or_else(|| args.corpus.clone());
            let path = dir.join(format!("repro-{}.alpp", &small.digest()[..12]));
            let text = format!(
                "# disagreement between {} and {} on {} (edges removed while it persisted)\n{}",
                pair.0.name(),
                pair.1.name(),
                row.name,
                serialize_instance(&small)
            );
            std::fs::write(&path, text)?;
            eprintln!(
                "error: {} and {} disagree on {}; reproduction written to {}",
                pair.0.name(),
                pair.1.name(),
                row.name,
                path.display()
            );
            return Ok(4);
        }
    }
    println!("c files {} solved {} skipped {skipped}", files.len(), rows.len());
    Ok(if skipped > 0 { 5 } else { 0 })
}
