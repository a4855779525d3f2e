//! Line-delimited results files and TOML benchmark configs.
//!
//! ```text
//! #nmls-results v1 seed=42 plan=9f2c0a6b1d3e4f50
//! NM4<TAB>rastrigin<TAB>0<TAB>BudgetExhausted<TAB>best_f<TAB>f_evals<TAB>g_evals<TAB>0:f0,3:f,…
//! ```
//!
//! Reals are written with 17 significant digits so that reading a file
//! back reproduces every value exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::counter::Breakpoint;
use crate::error::{Error, Result};
use crate::grid::BenchPlan;
use crate::params::LineSearchParams;
use crate::record::RunSummary;

pub const SCHEMA_TAG: &str = "#nmls-results";
pub const SCHEMA_VERSION: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResultsHeader {
    pub master_seed: u64,
    pub plan_hash: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultsFile {
    pub header: ResultsHeader,
    pub records: Vec<RunSummary>,
}

impl ResultsFile {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        write_records(&mut buf, &self.header, &self.records).expect("writing to memory cannot fail");
        buf
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        write_records_to(path, &self.header, &self.records)
    }
}

/// Formats a real with 17 significant digits.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_records<W: Write>(out: W, header: &ResultsHeader, records: &[RunSummary]) -> Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(
        out,
        "{SCHEMA_TAG} {SCHEMA_VERSION} seed={} plan={:016x}",
        header.master_seed, header.plan_hash
    )?;
    for r in records {
        let breakpoints: Vec<String> = r
            .breakpoints
            .iter()
            .map(|b| format!("{}:{}", b.evals, fmt_real(b.best_f)))
            .collect();
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.method,
            r.function,
            r.start_index,
            r.status,
            fmt_real(r.best_f),
            r.f_evals,
            r.g_evals,
            breakpoints.join(",")
        )?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_records_to(path: &Path, header: &ResultsHeader, records: &[RunSummary]) -> Result<()> {
    write_records(File::create(path)?, header, records)
}

fn parse_header(line: &str) -> Result<ResultsHeader> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some(SCHEMA_TAG) {
        return Err(Error::SchemaMismatch(format!("missing `{SCHEMA_TAG}` header")));
    }
    match parts.next() {
        Some(SCHEMA_VERSION) => {}
        other => {
            return Err(Error::SchemaMismatch(format!(
                "unsupported version {}, expected {SCHEMA_VERSION}",
                other.unwrap_or("<none>")
            )))
        }
    }
    let mut seed = None;
    let mut plan = None;
    for kv in parts {
        match kv.split_once('=') {
            Some(("seed", v)) => seed = v.parse().ok(),
            Some(("plan", v)) => plan = u64::from_str_radix(v, 16).ok(),
            _ => return Err(Error::SchemaMismatch(format!("unexpected header field `{kv}`"))),
        }
    }
    match (seed, plan) {
        (Some(master_seed), Some(plan_hash)) => Ok(ResultsHeader { master_seed, plan_hash }),
        _ => Err(Error::SchemaMismatch("header needs seed=<u64> and plan=<hex>".into())),
    }
}

fn parse_line(line: &str, lineno: usize) -> Result<RunSummary> {
    let err = |message: String| Error::Parse { line: lineno, message };
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 8 {
        return Err(err(format!("expected 8 tab-separated fields, found {}", fields.len())));
    }
    let real = |s: &str| s.parse::<f64>().map_err(|_| err(format!("bad real `{s}`")));
    let int = |s: &str| s.parse::<u64>().map_err(|_| err(format!("bad integer `{s}`")));
    let breakpoints = if fields[7].is_empty() {
        Vec::new()
    } else {
        fields[7]
            .split(',')
            .map(|pair| {
                let (e, f) = pair.split_once(':').ok_or_else(|| err(format!("bad breakpoint `{pair}`")))?;
                Ok(Breakpoint {
                    evals: int(e)?,
                    best_f: real(f)?,
                })
            })
            .collect::<Result<Vec<_>>>()?
    };
    Ok(RunSummary {
        method: fields[0].parse().map_err(|e: Error| err(e.to_string()))?,
        function: fields[1].to_string(),
        start_index: fields[2].parse().map_err(|_| err(format!("bad start index `{}`", fields[2])))?,
        status: fields[3].parse().map_err(|e: Error| err(e.to_string()))?,
        best_f: real(fields[4])?,
        f_evals: int(fields[5])?,
        g_evals: int(fields[6])?,
        breakpoints,
    })
}

pub fn read_records<R: Read>(input: R) -> Result<ResultsFile> {
    let mut lines = BufReader::new(input).lines();
    let header = match lines.next() {
        Some(line) => parse_header(&line?)?,
        None => return Err(Error::SchemaMismatch("empty results file".into())),
    };
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        records.push(parse_line(&line, i + 2)?);
    }
    Ok(ResultsFile { header, records })
}

pub fn read_records_from(path: &Path) -> Result<ResultsFile> {
    read_records(File::open(path)?)
}

/// A benchmark configuration file: the plan and the line-search knobs.
/// Missing keys take the desk/paper defaults; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    pub plan: BenchPlan,
    pub params: LineSearchParams,
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: BenchConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.plan.validate()?;
        cfg.params.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}
