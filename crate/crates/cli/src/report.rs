//! The `solve` report: `c` comment lines, a `decision` line, `path` lines
//! and an optional single-line `json` block.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Duration;

use serde_json::json;

use alpp_core::io::format_packing;
use alpp_core::PathPacking;

pub struct RunReport {
    pub digest: String,
    pub algorithm: String,
    pub decision: bool,
    pub optimum: Option<usize>,
    pub witness: Option<PathPacking>,
    pub witness_file: Option<PathBuf>,
    pub wall: Duration,
    pub stats: BTreeMap<String, u64>,
    pub seed: Option<u64>,
}

impl RunReport {
    pub fn render(&self, labels: &[u64], with_json: bool) -> String {
        let mut out = String::new();
        out.push_str(&format!("c instance {}\n", self.digest));
        out.push_str(&format!("c algorithm {}\n", self.algorithm));
        if let Some(seed) = self.seed {
            out.push_str(&format!("c seed {seed}\n"));
        }
        out.push_str(&format!("c time_ms {:.3}\n", self.wall.as_secs_f64() * 1e3));
        if let Some(opt) = self.optimum {
            out.push_str(&format!("c optimum {opt}\n"));
        }
        for (k, v) in &self.stats {
            out.push_str(&format!("c stat {k} {v}\n"));
        }
        if let Some(f) = &self.witness_file {
            out.push_str(&format!("c witness {}\n", f.display()));
        }
        out.push_str(&format_packing(self.decision, self.witness.as_ref(), Some(labels)));
        if with_json {
            let paths: Option<Vec<Vec<u64>>> = self
                .witness
                .as_ref()
                .map(|w| w.paths.iter().map(|p| p.iter().map(|&v| labels[v]).collect()).collect());
            let block = json!({
                "instance": self.digest,
                "algorithm": self.algorithm,
                "decision": if self.decision { "yes" } else { "no" },
                "optimum": self.optimum,
                "wall_ms": self.wall.as_secs_f64() * 1e3,
                "stats": self.stats,
                "seed": self.seed,
                "witness_file": self.witness_file.as_ref().map(|f| f.display().to_string()),
                "paths": paths,
            });
            out.push_str(&format!("json {block}\n"));
        }
        out
    }
}
