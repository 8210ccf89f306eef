//! Architecture similarity metrics and exhaustive small-instance oracles.

mod a2a;
mod matching;
mod mojo;
mod oracle;
mod partition;
mod registry;
mod table;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use a2a::{a2a, a2a_adj, mto, mto_m_max, transfer_distance};
pub use mojo::{max_mojo_distance, mojo_distance, mojo_fm};
pub use oracle::{oracle_mojo, oracle_moves, ORACLE_LIMIT};
pub use partition::{ari, c2c_cvg};
pub use registry::{ArchitectureMetric, MetricRegistry};
pub use table::restrict_to_shared;

use crate::error::Result;
use crate::model::Architecture;

/// Default c2c_cvg overlap threshold.
pub const DEFAULT_C2C_THRESHOLD: f64 = 0.66;

pub const CSV_HEADER: &str = "project,mojofm,a2a,c2c_cvg,ari,a2a_adj";

/// All five metrics in percent; `ari` is the adjusted Rand index times 100.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub mojofm: f64,
    pub a2a: f64,
    pub c2c_cvg: f64,
    pub c2c_threshold: f64,
    pub ari: f64,
    pub a2a_adj: f64,
}

impl MetricReport {
    pub fn compute(recovered: &Architecture, reference: &Architecture, c2c_threshold: f64) -> Result<Self> {
        let scores: std::collections::BTreeMap<String, f64> = MetricRegistry::standard(c2c_threshold)
            .evaluate(&[], recovered, reference)?
            .into_iter()
            .collect();
        Ok(MetricReport {
            mojofm: scores["mojofm"],
            a2a: scores["a2a"],
            c2c_cvg: scores["c2c_cvg"],
            c2c_threshold,
            ari: scores["ari"],
            a2a_adj: scores["a2a_adj"],
        })
    }

    pub fn csv_row(&self, project: &str) -> String {
        format!(
            "{project},{:.4},{:.4},{:.4},{:.4},{:.4}",
            self.mojofm, self.a2a, self.c2c_cvg, self.ari, self.a2a_adj
        )
    }
}

impl fmt::Display for MetricReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<16}{:>10}", "metric", "score")?;
        writeln!(f, "{:<16}{:>10.2}", "MoJoFM", self.mojofm)?;
        writeln!(f, "{:<16}{:>10.2}", "a2a", self.a2a)?;
        writeln!(f, "{:<16}{:>10.2}", format!("c2c_cvg@{}", self.c2c_threshold), self.c2c_cvg)?;
        writeln!(f, "{:<16}{:>10.2}", "ARI", self.ari)?;
        write!(f, "{:<16}{:>10.2}", "a2a_adj", self.a2a_adj)
    }
}
