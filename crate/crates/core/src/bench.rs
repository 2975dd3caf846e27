//! Multi-seed benchmark runs and their summary report.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::instance::Instance;
use crate::validate::is_valid;
use crate::vns::{solve, SearchParams, StopCondition};

const BUILTIN_BKS: &str = include_str!("../data/bks.csv");

/// `100 * (score / bks - 1)`, in percent.
pub fn gap(score: f64, bks: f64) -> f64 {
    100.0 * (score / bks - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub min: f64,
    pub mean: f64,
    /// Population standard deviation.
    pub stdev: f64,
}

pub fn summarize(values: &[f64]) -> Option<Summary> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Some(Summary {
        min,
        mean,
        stdev: var.sqrt(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub bks: f64,
    pub origin: String,
}

#[derive(Debug, Error)]
pub enum BksError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Best known scores keyed by instance name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BksTable {
    entries: BTreeMap<String, Reference>,
}

impl BksTable {
    /// Reference scores shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_BKS).expect("bundled reference file is well formed")
    }

    /// Reads `instance,bks[,origin]` rows; a header row is skipped.
    pub fn parse(text: &str) -> Result<Self, BksError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut entries = BTreeMap::new();
        for (k, rec) in reader.records().enumerate() {
            let rec = rec?;
            let line = rec.position().map_or(k + 1, |p| p.line() as usize);
            if line == 1 && rec.get(0) == Some("instance") {
                continue;
            }
            let (Some(name), Some(v)) = (rec.get(0), rec.get(1)) else {
                return Err(BksError::Malformed {
                    line,
                    msg: "expected instance,bks".into(),
                });
            };
            let bks = v.parse::<f64>().map_err(|_| BksError::Malformed {
                line,
                msg: format!("bad score {v:?}"),
            })?;
            let origin = rec.get(2).unwrap_or("").to_string();
            entries.insert(name.to_string(), Reference { bks, origin });
        }
        Ok(BksTable { entries })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, BksError> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn get(&self, instance: &str) -> Option<&Reference> {
        self.entries.get(instance)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub weights: Vec<f64>,
    pub summary: Option<Summary>,
    pub bks: Option<f64>,
    /// Messages of failed runs.
    pub errors: Vec<String>,
}

impl BenchRow {
    pub fn gap_min(&self) -> Option<f64> {
        Some(gap(self.summary?.min, self.bks?))
    }

    pub fn gap_mean(&self) -> Option<f64> {
        Some(gap(self.summary?.mean, self.bks?))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub runs: usize,
    pub seeds: Vec<u64>,
}

fn opt(v: Option<f64>, prec: usize) -> String {
    v.map_or_else(String::new, |x| {
        let s = format!("{x:.prec$}");
        match s.strip_prefix('-') {
            Some(abs) if abs.bytes().all(|b| b == b'0' || b == b'.') => abs.to_string(),
            _ => s,
        }
    })
}

impl BenchReport {
    pub const CSV_HEADER: &'static str =
        "instance,runs,min,mean,stdev,bks,gap_min,gap_mean,failures";

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{}", Self::CSV_HEADER).unwrap();
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                r.instance,
                r.weights.len(),
                opt(r.summary.map(|x| x.min), 2),
                opt(r.summary.map(|x| x.mean), 2),
                opt(r.summary.map(|x| x.stdev), 2),
                opt(r.bks, 2),
                opt(r.gap_min(), 2),
                opt(r.gap_mean(), 2),
                r.errors.len()
            )
            .unwrap();
        }
        s
    }

    pub fn to_table(&self) -> String {
        let header = ["instance", "min", "gap%", "mean", "gap%", "stdev", "failed"];
        let body: Vec<[String; 7]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.instance.clone(),
                    opt(r.summary.map(|x| x.min), 2),
                    opt(r.gap_min(), 2),
                    opt(r.summary.map(|x| x.mean), 2),
                    opt(r.gap_mean(), 2),
                    opt(r.summary.map(|x| x.stdev), 2),
                    r.errors.len().to_string(),
                ]
            })
            .collect();
        let mut width = header.map(str::len);
        for row in &body {
            for (w, cell) in width.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut s = String::new();
        let line = |s: &mut String, cells: &[&str]| {
            for (k, (c, w)) in cells.iter().zip(width).enumerate() {
                if k == 0 {
                    write!(s, "{c:<w$}").unwrap();
                } else {
                    write!(s, "  {c:>w$}").unwrap();
                }
            }
            s.push('\n');
        };
        line(&mut s, &header);
        for row in &body {
            line(&mut s, &row.iter().map(String::as_str).collect::<Vec<_>>());
        }
        s
    }
}

/// Instance files (`*.evrp`) in a directory, sorted by name.
pub fn list_instances(dir: impl AsRef<Path>) -> io::Result<Vec<PathBuf>> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .is_some_and(|x| x.eq_ignore_ascii_case("evrp"))
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Solves every instance with seeds `seed_base..seed_base + runs`, all runs
/// in parallel.
pub fn run_bench<S>(
    instances: &[Instance],
    runs: usize,
    seed_base: u64,
    params: &SearchParams,
    stop: S,
    bks: &BksTable,
) -> BenchReport
where
    S: Fn(&Instance) -> StopCondition + Sync,
{
    let seeds: Vec<u64> = (0..runs as u64).map(|k| seed_base + k).collect();
    let jobs: Vec<(usize, u64)> = (0..instances.len())
        .flat_map(|i| seeds.iter().map(move |&s| (i, s)))
        .collect();
    let results: Vec<(usize, Result<f64, String>)> = jobs
        .par_iter()
        .map(|&(i, seed)| {
            let inst = &instances[i];
            let p = params.clone().with_seed(seed);
            let res = solve(inst, &p, stop(inst))
                .map_err(|e| format!("seed {seed}: {e}"))
                .and_then(|r| {
                    if is_valid(inst, &r.tour) {
                        Ok(r.weight)
                    } else {
                        Err(format!("seed {seed}: invalid tour"))
                    }
                });
            (i, res)
        })
        .collect();
    let mut rows: Vec<BenchRow> = instances
        .iter()
        .map(|inst| BenchRow {
            instance: inst.name().to_string(),
            weights: Vec::new(),
            summary: None,
            bks: bks.get(inst.name()).map(|r| r.bks),
            errors: Vec::new(),
        })
        .collect();
    for (i, res) in results {
        match res {
            Ok(w) => rows[i].weights.push(w),
            Err(e) => rows[i].errors.push(e),
        }
    }
    for r in &mut rows {
        r.summary = summarize(&r.weights);
    }
    BenchReport { rows, runs, seeds }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_formula() {
        assert_eq!(gap(384.67, 384.67), 0.0);
        assert!((gap(110.0, 100.0) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn population_stdev() {
        let s = summarize(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]).unwrap();
        assert_eq!(s.min, 2.0);
        assert_eq!(s.mean, 5.0);
        assert_eq!(s.stdev, 2.0);
        assert!(summarize(&[]).is_none());
    }

    #[test]
    fn builtin_reference() {
        let t = BksTable::builtin();
        assert_eq!(t.len(), 17);
        assert_eq!(t.get("E-n22-k4").unwrap().bks, 384.67);
        assert_eq!(t.get("X-n351-k40").unwrap().origin, "baco-time-budget");
        assert!(BksTable::parse("a,b\n").is_err());
        assert!(BksTable::parse("a\n").is_err());
        let t = BksTable::parse("# comment\nx, 1.5\n").unwrap();
        assert_eq!(t.get("x").unwrap().bks, 1.5);
    }

    #[test]
    fn report_formats() {
        let report = BenchReport {
            rows: vec![BenchRow {
                instance: "E-n22-k4".into(),
                weights: vec![384.67, 384.67],
                summary: summarize(&[384.67, 384.67]),
                bks: Some(384.67),
                errors: vec![],
            }],
            runs: 2,
            seeds: vec![1, 2],
        };
        let csv = report.to_csv();
        assert_eq!(csv.lines().next().unwrap(), BenchReport::CSV_HEADER);
        assert_eq!(
            csv.lines().nth(1).unwrap(),
            "E-n22-k4,2,384.67,384.67,0.00,384.67,0.00,0.00,0"
        );
        assert_eq!(opt(Some(-0.0001), 2), "0.00");
        assert_eq!(opt(Some(-0.01), 2), "-0.01");
        let table = report.to_table();
        assert!(table.lines().nth(1).unwrap().starts_with("E-n22-k4"));
    }
}
