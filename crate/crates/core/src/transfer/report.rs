use serde::Serialize;

use super::SweepConfig;
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// What produced a report.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub inputs: Vec<String>,
    pub config: SweepConfig,
    pub tool: String,
    pub version: String,
    pub seed: u64,
}

impl RunManifest {
    pub fn new(command: Vec<String>, inputs: Vec<String>, config: SweepConfig) -> Self {
        RunManifest {
            command,
            inputs,
            seed: config.seed,
            config,
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// One prime and one direction of a statement.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PrimeRecord {
    pub statement: String,
    pub p: u32,
    /// Hypothesis side.
    pub field: String,
    /// Conclusion side.
    pub partner: String,
    pub depth: u32,
    pub grid_size: usize,
    pub characters: usize,
    /// Index into the coefficient list, for combination statements.
    pub c_index: Option<usize>,
    pub hypothesis_ok: Option<bool>,
    pub conclusion_ok: Option<bool>,
    /// Both fields gave the same verdict.
    pub agree: Option<bool>,
    pub min_n: Option<u64>,
    pub max_ratio: Option<f64>,
    /// Class bound `N′` from the reduction on the conclusion side.
    pub n_prime: Option<usize>,
    /// The constant `min_n` is compared with.
    pub bound: Option<u64>,
    /// Points where `G = 0` but `H ≠ 0` on the conclusion side.
    pub violations: Vec<String>,
    /// Counterexamples, disagreements and collisions.
    pub witnesses: Vec<String>,
    pub flags: Vec<String>,
    pub violated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct UniformN {
    pub p: u32,
    pub field: String,
    pub n: Option<u64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub violated: bool,
    /// Smallest sampled prime from which the per-prime verdicts no longer change.
    pub stable_from: Option<u32>,
    pub uniform_n: Vec<UniformN>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferReport {
    pub schema_version: u32,
    pub statement: String,
    pub manifest: RunManifest,
    pub records: Vec<PrimeRecord>,
    pub summary: Summary,
    pub caveats: Vec<String>,
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

impl TransferReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// Flat table, one row per record.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record([
            "statement",
            "p",
            "field",
            "depth",
            "grid_size",
            "hypothesis_ok",
            "min_N",
            "violations",
            "flags",
        ])
        .map_err(io)?;
        for r in &self.records {
            let statement = match r.c_index {
                Some(k) => format!("{}[c{k}]", r.statement),
                None => r.statement.clone(),
            };
            w.write_record([
                statement,
                r.p.to_string(),
                r.field.clone(),
                r.depth.to_string(),
                r.grid_size.to_string(),
                opt(&r.hypothesis_ok),
                opt(&r.min_n),
                r.violations.len().to_string(),
                r.flags.join("|"),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}
