//! Table and convergence reports: CSV output, JSON sidecar metadata and the
//! exit status derived from the cross-checks.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::classify::{balanced_subset_variance, class_counts, variance_from_classes, ClassCounts};
use crate::error::{Error, Result};
use crate::graph::{build_binary_graph, DirectedGraph};
use crate::orbits::EnumerationMode;
use crate::quantize::{sample_bond_lengths, BondLengths, BondScattering};
use crate::scalar::Dyadic;
use crate::spectral::{mc_variance, minor_sum_variance, MonteCarloConfig, VarianceEstimate};

/// Largest bond count for which class counts and the minor oracle are run.
pub const EXHAUSTIVE_MAX_BONDS: usize = 24;
/// Largest bond count for which the convergence study adds exact values.
pub const CONVERGENCE_EXACT_MAX_BONDS: usize = 32;
/// Tolerance between the class-count value and the minor oracle.
pub const ORACLE_TOLERANCE: f64 = 1e-12;
/// Absolute floor of the Monte Carlo acceptance band.
pub const MC_ABS_TOLERANCE: f64 = 5e-3;
pub const MC_SIGMAS: f64 = 3.0;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ORACLE_MISMATCH: i32 = 3;
pub const EXIT_TABLE_MISMATCH: i32 = 4;
pub const EXIT_MC_NONCONVERGENCE: i32 = 5;

pub const LENGTH_INTERVAL: (f64, f64) = (1.0, 2.0);

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphSource {
    Binary { p: usize, r: u32 },
    File(PathBuf),
}

impl GraphSource {
    /// The graph and the JSON text it is hashed from.
    pub fn load(&self) -> Result<(DirectedGraph, String)> {
        match self {
            GraphSource::Binary { p, r } => {
                let g = build_binary_graph(*p, *r)?;
                let text = g.to_json()?;
                Ok((g, text))
            }
            GraphSource::File(path) => {
                let text = fs::read_to_string(path)?;
                Ok((DirectedGraph::from_json(&text)?, text))
            }
        }
    }

    fn binary_params(&self) -> Option<(usize, u32)> {
        match self {
            GraphSource::Binary { p, r } => Some((*p, *r)),
            GraphSource::File(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub graph: GraphSource,
    pub n_min: usize,
    /// Defaults to `B / 2`.
    pub n_max: Option<usize>,
    pub mode: EnumerationMode,
    /// Zero skips Monte Carlo.
    pub samples: u64,
    /// Drives both the bond lengths and the k draws.
    pub seed: u64,
    pub k_max: f64,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let mc = MonteCarloConfig::default();
        RunConfig {
            graph: GraphSource::Binary { p: 1, r: 3 },
            n_min: 0,
            n_max: None,
            mode: EnumerationMode::BondDistinct,
            samples: mc.samples,
            seed: mc.seed,
            k_max: mc.k_max,
            threads: None,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn n_range(&self, bond_count: usize) -> Result<Vec<usize>> {
        let n_max = self.n_max.unwrap_or(bond_count / 2);
        if n_max > bond_count {
            return Err(Error::IndexOutOfRange { n: n_max, max: bond_count });
        }
        if self.n_min > n_max {
            return Err(Error::InvalidSampling(format!("empty n range {}..={}", self.n_min, n_max)));
        }
        Ok((self.n_min..=n_max).collect())
    }

    fn mc_config(&self) -> MonteCarloConfig {
        MonteCarloConfig::new(self.samples, self.seed, self.k_max)
    }
}

/// Git-style object hash (`blob <len>\0` header) using SHA-256.
pub fn content_hash(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("blob {}\0", bytes.len()).as_bytes());
    hasher.update(bytes);
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// A known row for one of the two small binary graphs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceRow {
    pub n: usize,
    pub p0: u64,
    /// `|P̂_1|, |P̂_2|, ...`
    pub phat: &'static [u64],
    /// Variance as `numerator / 2^exponent`.
    pub variance: (i64, u32),
    pub numerics: f64,
}

impl ReferenceRow {
    pub fn variance(&self) -> Dyadic {
        Dyadic::new(self.variance.0, self.variance.1)
    }

    pub fn counts(&self) -> ClassCounts {
        ClassCounts {
            n: self.n,
            p0: self.p0,
            phat: self.phat.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (i + 1, c)).collect(),
            excluded: 0,
        }
    }

    /// Whether the row's own counts give its own variance.
    pub fn is_self_consistent(&self) -> bool {
        variance_from_classes(&self.counts()) == self.variance()
    }
}

const fn row(n: usize, p0: u64, phat: &'static [u64], variance: (i64, u32), numerics: f64) -> ReferenceRow {
    ReferenceRow { n, p0, phat, variance, numerics }
}

const DE_BRUIJN_8: [ReferenceRow; 9] = [
    row(0, 1, &[0, 0], (1, 0), 1.000000),
    row(1, 2, &[0, 0], (1, 0), 0.999991),
    row(2, 2, &[0, 0], (1, 1), 0.499999),
    row(3, 4, &[0, 0], (1, 1), 0.499999),
    row(4, 8, &[0, 0], (1, 1), 0.499999),
    row(5, 8, &[8, 0], (3, 2), 0.749998),
    row(6, 8, &[20, 0], (3, 2), 0.749986),
    row(7, 16, &[16, 8], (5, 3), 0.624989),
    row(8, 16, &[16, 24], (9, 4), 0.562501),
];

const BINARY_6: [ReferenceRow; 7] = [
    row(0, 1, &[0], (1, 0), 1.000000),
    row(1, 2, &[0], (1, 0), 1.000000),
    row(2, 3, &[0], (3, 2), 0.750001),
    row(3, 6, &[0], (3, 2), 0.750003),
    row(4, 10, &[4], (7, 3), 0.874999),
    row(5, 8, &[4], (1, 1), 0.499998),
    row(6, 8, &[8], (3, 3), 0.374999),
];

/// Known rows for the binary graphs `(p, r) = (1, 3)` and `(3, 1)`.
pub fn reference_table(p: usize, r: u32) -> Option<&'static [ReferenceRow]> {
    match (p, r) {
        (1, 3) => Some(&DE_BRUIJN_8),
        (3, 1) => Some(&BINARY_6),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub counts: Option<ClassCounts>,
    #[serde(serialize_with = "serialize_dyadic")]
    pub exact: Option<Dyadic>,
    pub oracle: Option<f64>,
    pub mc: Option<VarianceEstimate>,
}

fn serialize_dyadic<S: serde::Serializer>(value: &Option<Dyadic>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(d) => s.serialize_some(&d.to_string()),
        None => s.serialize_none(),
    }
}

impl TableRow {
    pub fn oracle_discrepancy(&self) -> Option<f64> {
        Some((self.exact.as_ref()?.to_f64() - self.oracle?).abs())
    }

    /// `|mc - exact|`, falling back to the oracle.
    pub fn mc_error(&self) -> Option<f64> {
        let reference = self.exact.as_ref().map(Dyadic::to_f64).or(self.oracle)?;
        Some((self.mc.as_ref()?.mean - reference).abs())
    }

    pub fn mc_converged(&self) -> Option<bool> {
        let err = self.mc_error()?;
        let stderr = self.mc.as_ref()?.std_error;
        Some(err <= MC_ABS_TOLERANCE.max(MC_SIGMAS * stderr))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckStatus {
    pub oracle_mismatch: Vec<usize>,
    pub table_mismatch: Vec<usize>,
    pub mc_nonconvergence: Vec<usize>,
}

impl CheckStatus {
    pub fn exit_code(&self) -> i32 {
        if !self.oracle_mismatch.is_empty() {
            EXIT_ORACLE_MISMATCH
        } else if !self.table_mismatch.is_empty() {
            EXIT_TABLE_MISMATCH
        } else if !self.mc_nonconvergence.is_empty() {
            EXIT_MC_NONCONVERGENCE
        } else {
            EXIT_OK
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableReport {
    pub config: RunConfig,
    pub vertex_count: usize,
    pub bond_count: usize,
    pub graph_hash: String,
    pub exhaustive: bool,
    pub rows: Vec<TableRow>,
    pub notes: Vec<String>,
    pub checks: CheckStatus,
    /// Wall-clock seconds per stage.
    pub timings: BTreeMap<String, f64>,
}

impl TableReport {
    pub fn exit_code(&self) -> i32 {
        self.checks.exit_code()
    }

    /// Number of `|P̂_N|` columns: the largest `N` seen, at least one.
    pub fn phat_columns(&self) -> usize {
        self.rows
            .iter()
            .filter_map(|r| r.counts.as_ref()?.phat.keys().max().copied())
            .max()
            .unwrap_or(0)
            .max(1)
    }
}

pub fn run_table_report(config: &RunConfig) -> Result<TableReport> {
    let (g, text) = config.graph.load()?;
    let ns = config.n_range(g.bond_count())?;
    let exhaustive = g.bond_count() <= EXHAUSTIVE_MAX_BONDS;
    let s = BondScattering::<f64>::new(&g)?;
    let mut timings = BTreeMap::new();
    let mut notes = Vec::new();

    let mut rows: Vec<TableRow> =
        ns.iter().map(|&n| TableRow { n, counts: None, exact: None, oracle: None, mc: None }).collect();

    if exhaustive {
        let t = Instant::now();
        for row in &mut rows {
            let counts = class_counts(&g, row.n, config.mode, usize::MAX)?;
            row.exact = Some(variance_from_classes(&counts));
            row.counts = Some(counts);
        }
        timings.insert("classes".to_string(), t.elapsed().as_secs_f64());
        let t = Instant::now();
        for row in &mut rows {
            row.oracle = Some(minor_sum_variance(&s, row.n)?);
        }
        timings.insert("oracle".to_string(), t.elapsed().as_secs_f64());
    } else {
        notes.push(format!("B = {} exceeds {EXHAUSTIVE_MAX_BONDS}: exact and oracle columns skipped", g.bond_count()));
    }

    if config.samples > 0 {
        let t = Instant::now();
        let lengths: BondLengths<f64> = sample_bond_lengths(&g, config.seed, LENGTH_INTERVAL.0, LENGTH_INTERVAL.1)?;
        let estimates = mc_variance(&s, &lengths, &ns, &config.mc_config())?;
        for (row, est) in rows.iter_mut().zip(estimates) {
            row.mc = Some(est);
        }
        timings.insert("monte_carlo".to_string(), t.elapsed().as_secs_f64());
    }

    let mut checks = CheckStatus::default();
    for row in &rows {
        if row.oracle_discrepancy().is_some_and(|d| d > ORACLE_TOLERANCE) {
            checks.oracle_mismatch.push(row.n);
        }
        if row.mc_converged() == Some(false) {
            checks.mc_nonconvergence.push(row.n);
        }
    }

    let reference = config.graph.binary_params().and_then(|(p, r)| reference_table(p, r));
    if let (Some(reference), true) = (reference, config.mode == EnumerationMode::BondDistinct) {
        for row in &rows {
            let (Some(known), Some(counts), Some(exact)) =
                (reference.iter().find(|k| k.n == row.n), &row.counts, &row.exact)
            else {
                continue;
            };
            if *exact != known.variance() {
                checks.table_mismatch.push(row.n);
                notes.push(format!("n={}: variance {} differs from reference {}", row.n, exact, known.variance()));
            } else if !same_counts(counts, &known.counts()) {
                if known.is_self_consistent() {
                    checks.table_mismatch.push(row.n);
                    notes.push(format!("n={}: class counts {} differ from reference {}", row.n, describe(counts), describe(&known.counts())));
                } else {
                    notes.push(format!(
                        "n={}: reference counts {} give {} but the reference value is {}; enumerated counts {} give {}",
                        row.n,
                        describe(&known.counts()),
                        variance_from_classes(&known.counts()),
                        known.variance(),
                        describe(counts),
                        exact
                    ));
                }
            }
        }
    }

    Ok(TableReport {
        config: config.clone(),
        vertex_count: g.vertex_count(),
        bond_count: g.bond_count(),
        graph_hash: content_hash(text.as_bytes()),
        exhaustive,
        rows,
        notes,
        checks,
        timings,
    })
}

fn same_counts(a: &ClassCounts, b: &ClassCounts) -> bool {
    a.p0 == b.p0 && a.phat == b.phat
}

fn describe(c: &ClassCounts) -> String {
    let mut s = format!("|P_0|={}", c.p0);
    for (k, v) in &c.phat {
        s.push_str(&format!(", |P̂_{k}|={v}"));
    }
    s
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| x.to_string())
}

pub fn write_table_csv<W: Write>(report: &TableReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let phat = report.phat_columns();
    let mut header = vec!["n".to_string(), "|P_0|".to_string()];
    header.extend((1..=phat).map(|k| format!("|P̂_{k}|")));
    header.extend(
        ["exact_fraction", "exact", "oracle", "mc_mean", "mc_stderr", "exact_oracle_diff", "abs_error"]
            .map(String::from),
    );
    w.write_record(&header)?;
    for row in &report.rows {
        let mut rec = vec![row.n.to_string(), opt(row.counts.as_ref().map(|c| c.p0))];
        rec.extend((1..=phat).map(|k| opt(row.counts.as_ref().map(|c| c.phat_count(k)))));
        rec.push(opt(row.exact.as_ref()));
        rec.push(opt(row.exact.as_ref().map(Dyadic::to_decimal_string)));
        rec.push(opt(row.oracle));
        rec.push(opt(row.mc.as_ref().map(|m| m.mean)));
        rec.push(opt(row.mc.as_ref().map(|m| m.std_error)));
        rec.push(opt(row.oracle_discrepancy()));
        rec.push(opt(row.mc_error()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Sidecar<'a> {
    config: &'a RunConfig,
    vertex_count: usize,
    bond_count: usize,
    graph_hash: &'a str,
    length_interval: (f64, f64),
    exhaustive: bool,
    notes: &'a [String],
    checks: &'a CheckStatus,
    exit_code: i32,
    timings: &'a BTreeMap<String, f64>,
}

pub fn sidecar_json(report: &TableReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(&Sidecar {
        config: &report.config,
        vertex_count: report.vertex_count,
        bond_count: report.bond_count,
        graph_hash: &report.graph_hash,
        length_interval: LENGTH_INTERVAL,
        exhaustive: report.exhaustive,
        notes: &report.notes,
        checks: &report.checks,
        exit_code: report.exit_code(),
        timings: &report.timings,
    })?)
}

/// Writes `path` as CSV and the sidecar next to it with a `.json` extension.
pub fn save_table_report(report: &TableReport, path: &Path) -> Result<PathBuf> {
    write_table_csv(report, fs::File::create(path)?)?;
    let sidecar = path.with_extension("json");
    fs::write(&sidecar, sidecar_json(report)?)?;
    Ok(sidecar)
}

/// One row of the variance CSV.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VarianceRow {
    pub n: usize,
    pub exact: Option<Dyadic>,
    pub oracle: Option<f64>,
    pub mc: Option<VarianceEstimate>,
}

pub fn write_variance_csv<W: Write>(rows: &[VarianceRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "exact", "oracle", "mc_mean", "mc_stderr", "samples", "seed"])?;
    for row in rows {
        w.write_record([
            row.n.to_string(),
            opt(row.exact.as_ref()),
            opt(row.oracle),
            opt(row.mc.as_ref().map(|m| m.mean)),
            opt(row.mc.as_ref().map(|m| m.std_error)),
            opt(row.mc.as_ref().map(|m| m.samples)),
            opt(row.mc.as_ref().map(|m| m.seed)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NRule {
    HalfBonds,
    Fixed(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceConfig {
    pub p: usize,
    pub rs: Vec<u32>,
    pub n_rule: NRule,
    pub samples: u64,
    pub seed: u64,
    pub k_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergencePoint {
    pub r: u32,
    #[serde(rename = "B")]
    pub bond_count: usize,
    pub n: usize,
    pub estimate: f64,
    pub stderr: f64,
    pub deviation: f64,
    #[serde(serialize_with = "serialize_dyadic")]
    pub exact: Option<Dyadic>,
}

pub fn run_convergence_study(config: &ConvergenceConfig) -> Result<Vec<ConvergencePoint>> {
    let mc = MonteCarloConfig::new(config.samples, config.seed, config.k_max);
    config
        .rs
        .iter()
        .map(|&r| {
            let g = build_binary_graph(config.p, r)?;
            let b = g.bond_count();
            let n = match config.n_rule {
                NRule::HalfBonds => b / 2,
                NRule::Fixed(n) => n,
            };
            let s = BondScattering::<f64>::new(&g)?;
            let lengths: BondLengths<f64> = sample_bond_lengths(&g, config.seed, LENGTH_INTERVAL.0, LENGTH_INTERVAL.1)?;
            let est = mc_variance(&s, &lengths, &[n], &mc)?.remove(0);
            let exact = if b <= CONVERGENCE_EXACT_MAX_BONDS { Some(balanced_subset_variance(&g, n)?) } else { None };
            Ok(ConvergencePoint {
                r,
                bond_count: b,
                n,
                estimate: est.mean,
                stderr: est.std_error,
                deviation: (est.mean - 0.5).abs(),
                exact,
            })
        })
        .collect()
}

pub fn write_convergence_csv<W: Write>(points: &[ConvergencePoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["r", "B", "n", "estimate", "stderr", "abs_dev_half", "exact"])?;
    for p in points {
        w.write_record([
            p.r.to_string(),
            p.bond_count.to_string(),
            p.n.to_string(),
            p.estimate.to_string(),
            p.stderr.to_string(),
            p.deviation.to_string(),
            opt(p.exact.as_ref()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(p: usize, r: u32, samples: u64) -> RunConfig {
        RunConfig { graph: GraphSource::Binary { p, r }, samples, ..RunConfig::default() }
    }

    #[test]
    fn reference_rows_consistency() {
        let inconsistent: Vec<(usize, usize)> = [(1, 3), (3, 1)]
            .iter()
            .flat_map(|&(p, r)| reference_table(p, r).unwrap().iter().filter(|k| !k.is_self_consistent()).map(move |k| (p, k.n)))
            .collect();
        assert_eq!(inconsistent, vec![(3, 4)]);
    }

    #[test]
    fn exact_tables_without_mc() {
        let report = run_table_report(&config(1, 3, 0)).unwrap();
        assert_eq!(report.rows.len(), 9);
        assert_eq!(report.exit_code(), EXIT_OK);
        assert!(report.notes.is_empty());
        assert_eq!(report.phat_columns(), 2);

        let report = run_table_report(&config(3, 1, 0)).unwrap();
        assert_eq!(report.exit_code(), EXIT_OK);
        assert_eq!(report.notes.len(), 1);
        assert!(report.notes[0].starts_with("n=4: reference counts |P_0|=10, |P̂_1|=4 give 9/8"), "{}", report.notes[0]);
        let row4 = &report.rows[4];
        assert_eq!(row4.counts.as_ref().unwrap().p0, 6);
    }

    #[test]
    fn zero_row_is_exactly_one() {
        let cfg = RunConfig { n_max: Some(0), samples: 100, ..config(1, 3, 0) };
        let report = run_table_report(&cfg).unwrap();
        let row = &report.rows[0];
        assert_eq!(row.exact, Some(Dyadic::from_integer(1)));
        let mc = row.mc.as_ref().unwrap();
        assert_eq!((mc.mean, mc.std_error), (1.0, 0.0));
    }

    #[test]
    fn csv_layout_and_determinism() {
        let cfg = RunConfig { samples: 2000, ..config(3, 1, 0) };
        let render = || {
            let mut buf = Vec::new();
            write_table_csv(&run_table_report(&cfg).unwrap(), &mut buf).unwrap();
            String::from_utf8(buf).unwrap()
        };
        let a = render();
        assert_eq!(a, render());
        let mut lines = a.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,|P_0|,|P̂_1|,exact_fraction,exact,oracle,mc_mean,mc_stderr,exact_oracle_diff,abs_error"
        );
        assert!(lines.nth(4).unwrap().starts_with("4,6,4,7/8,0.875,"));
    }

    #[test]
    fn exit_code_priority() {
        let mut c = CheckStatus::default();
        assert_eq!(c.exit_code(), EXIT_OK);
        c.mc_nonconvergence.push(1);
        assert_eq!(c.exit_code(), EXIT_MC_NONCONVERGENCE);
        c.table_mismatch.push(1);
        assert_eq!(c.exit_code(), EXIT_TABLE_MISMATCH);
        c.oracle_mismatch.push(1);
        assert_eq!(c.exit_code(), EXIT_ORACLE_MISMATCH);
    }

    #[test]
    fn large_graphs_skip_exhaustive_columns() {
        let cfg = RunConfig { n_min: 2, n_max: Some(3), samples: 50, ..config(1, 4, 0) };
        let report = run_table_report(&cfg).unwrap();
        assert!(!report.exhaustive);
        assert!(report.rows.iter().all(|r| r.exact.is_none() && r.oracle.is_none() && r.mc.is_some()));
        let mut buf = Vec::new();
        write_table_csv(&report, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().lines().nth(1).unwrap().starts_with("2,n/a,n/a,n/a,n/a,n/a,"));
    }

    #[test]
    fn hash_matches_git_blob_format() {
        // `printf 'hello\n' | git hash-object --object-format=sha256 --stdin`
        assert_eq!(content_hash(b"hello\n"), "2cf8d83d9ee29543b34a87727421fdecb7e3f3a183d337639025de576db9ebb4");
    }

    #[test]
    fn variance_csv_header() {
        let mut buf = Vec::new();
        write_variance_csv(&[VarianceRow { n: 0, exact: Some(Dyadic::from_integer(1)), ..VarianceRow::default() }], &mut buf)
            .unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,exact,oracle,mc_mean,mc_stderr,samples,seed\n0,1,n/a,n/a,n/a,n/a,n/a\n");
    }

    #[test]
    fn convergence_trivial_row() {
        let cfg = ConvergenceConfig { p: 1, rs: vec![2], n_rule: NRule::Fixed(0), samples: 10, seed: 0, k_max: 1e8 };
        let pts = run_convergence_study(&cfg).unwrap();
        assert_eq!((pts[0].bond_count, pts[0].estimate, pts[0].stderr), (8, 1.0, 0.0));
        assert_eq!(pts[0].exact, Some(Dyadic::from_integer(1)));
    }
}
