use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qgraph::classify::{class_counts, diagonal_approximation, variance_from_classes, write_orbit_dump};
use qgraph::orbits::{enumerate_pseudo_orbits, EnumerationMode, DEFAULT_GENERAL_CAP};
use qgraph::quantize::sample_bond_lengths;
use qgraph::report::{
    run_convergence_study, run_table_report, save_table_report, sidecar_json, write_convergence_csv, write_table_csv,
    write_variance_csv, ConvergenceConfig, GraphSource, NRule, RunConfig, VarianceRow, LENGTH_INTERVAL,
};
use qgraph::spectral::{mc_variance, minor_sum_variance, MonteCarloConfig};
use qgraph::{validate_graph, DirectedGraph, Lengths, Scattering};

#[derive(Parser)]
#[command(name = "qgraph", version, about = "Coefficient variance of 4-regular quantum graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Odd factor of the binary graph size V = p * 2^r
    #[arg(long, global = true, default_value_t = 1)]
    p: usize,
    /// Binary exponent; a comma-separated list for `report convergence`
    #[arg(long, global = true, value_delimiter = ',')]
    r: Vec<u32>,
    #[arg(long, global = true)]
    graph_file: Option<PathBuf>,
    /// A single coefficient index
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Upper end of the index range 0..=n-max [default: B/2]
    #[arg(long, global = true)]
    n_max: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Mode::BondDistinct)]
    mode: Mode,
    #[arg(long, global = true, default_value_t = MonteCarloConfig::default().samples)]
    samples: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = MonteCarloConfig::default().k_max)]
    kmax: f64,
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    BondDistinct,
    General,
}

impl From<Mode> for EnumerationMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::BondDistinct => EnumerationMode::BondDistinct,
            Mode::General => EnumerationMode::General,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Graph(GraphCmd),
    #[command(subcommand)]
    Orbits(OrbitsCmd),
    #[command(subcommand)]
    Variance(VarianceCmd),
    #[command(subcommand)]
    Report(ReportCmd),
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Write the binary graph as JSON; with --out, lengths go next to it
    Gen,
    Validate,
}

#[derive(Subcommand)]
enum OrbitsCmd {
    /// Dump pseudo orbits as JSON lines
    Enumerate,
    /// Class counts per n
    Classify,
}

#[derive(Subcommand)]
enum VarianceCmd {
    /// Class-count formula, as an exact fraction
    Exact,
    /// Sum of squared principal minors
    Oracle,
    /// Monte Carlo average over k
    Mc,
    Diagonal,
}

#[derive(Subcommand)]
enum ReportCmd {
    Table,
    Convergence,
}

impl Opts {
    fn source(&self) -> anyhow::Result<GraphSource> {
        match (&self.graph_file, self.r.as_slice()) {
            (Some(path), []) => Ok(GraphSource::File(path.clone())),
            (Some(_), _) => bail!("give either --graph-file or --r, not both"),
            (None, [r]) => Ok(GraphSource::Binary { p: self.p, r: *r }),
            (None, []) => bail!("no graph: give --r (with --p) or --graph-file"),
            (None, _) => bail!("a single --r value is expected here"),
        }
    }

    fn graph(&self) -> anyhow::Result<(DirectedGraph, String)> {
        Ok(self.source()?.load()?)
    }

    fn n_range(&self, bond_count: usize) -> anyhow::Result<Vec<usize>> {
        if let Some(n) = self.n {
            if self.n_max.is_some() {
                bail!("give either --n or --n-max, not both");
            }
            if n > bond_count {
                bail!("n = {n} exceeds B = {bond_count}");
            }
            return Ok(vec![n]);
        }
        let n_max = self.n_max.unwrap_or(bond_count / 2);
        if n_max > bond_count {
            bail!("n-max = {n_max} exceeds B = {bond_count}");
        }
        Ok((0..=n_max).collect())
    }

    fn mc(&self) -> MonteCarloConfig {
        MonteCarloConfig::new(self.samples, self.seed, self.kmax)
    }

    fn run_config(&self) -> anyhow::Result<RunConfig> {
        let (n_min, n_max) = match self.n {
            Some(n) => (n, Some(n)),
            None => (0, self.n_max),
        };
        Ok(RunConfig {
            graph: self.source()?,
            n_min,
            n_max,
            mode: self.mode.into(),
            samples: self.samples,
            seed: self.seed,
            k_max: self.kmax,
            threads: self.threads,
            out: self.out.clone(),
        })
    }

    fn output(&self) -> anyhow::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(fs::File::create(path).with_context(|| format!("creating {}", path.display()))?),
            None => Box::new(io::stdout().lock()),
        })
    }
}

fn lengths_path(out: &Path) -> PathBuf {
    out.with_extension("lengths.json")
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let o = &cli.opts;
    if let Some(t) = o.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    match cli.command {
        Command::Graph(GraphCmd::Gen) => {
            let (g, text) = o.graph()?;
            match &o.out {
                Some(path) => {
                    fs::write(path, &text)?;
                    let lengths: Lengths = sample_bond_lengths(&g, o.seed, LENGTH_INTERVAL.0, LENGTH_INTERVAL.1)?;
                    let lp = lengths_path(path);
                    fs::write(&lp, serde_json::to_string(&lengths.to_file(Some(o.seed)))?)?;
                    eprintln!("wrote {} and {}", path.display(), lp.display());
                }
                None => println!("{text}"),
            }
        }
        Command::Graph(GraphCmd::Validate) => {
            let g = match &o.graph_file {
                Some(path) => DirectedGraph::from_json_unchecked(&fs::read_to_string(path)?)?,
                None => o.graph()?.0,
            };
            let report = validate_graph(&g);
            println!("{}", report.summary());
            if !report.is_valid() {
                return Ok(1);
            }
        }
        Command::Orbits(cmd) => {
            let (g, _) = o.graph()?;
            let ns = o.n_range(g.bond_count())?;
            let mode = o.mode.into();
            match cmd {
                OrbitsCmd::Enumerate => {
                    let mut out = o.output()?;
                    for n in ns {
                        write_orbit_dump(&g, &enumerate_pseudo_orbits(&g, n, mode, DEFAULT_GENERAL_CAP)?, &mut out)?;
                    }
                }
                OrbitsCmd::Classify => {
                    let counts = ns
                        .iter()
                        .map(|&n| class_counts(&g, n, mode, DEFAULT_GENERAL_CAP))
                        .collect::<Result<Vec<_>, _>>()?;
                    let phat = counts.iter().filter_map(|c| c.phat.keys().max().copied()).max().unwrap_or(0).max(1);
                    let mut w = csv::Writer::from_writer(o.output()?);
                    let mut header = vec!["n".to_string(), "|P_0|".to_string()];
                    header.extend((1..=phat).map(|k| format!("|P̂_{k}|")));
                    header.push("excluded".into());
                    w.write_record(&header)?;
                    for c in &counts {
                        let mut rec = vec![c.n.to_string(), c.p0.to_string()];
                        rec.extend((1..=phat).map(|k| c.phat_count(k).to_string()));
                        rec.push(c.excluded.to_string());
                        w.write_record(&rec)?;
                    }
                    w.flush()?;
                }
            }
        }
        Command::Variance(cmd) => {
            let (g, _) = o.graph()?;
            let ns = o.n_range(g.bond_count())?;
            let mut rows: Vec<VarianceRow> = ns.iter().map(|&n| VarianceRow { n, ..VarianceRow::default() }).collect();
            match cmd {
                VarianceCmd::Exact => {
                    for row in &mut rows {
                        row.exact = Some(variance_from_classes(&class_counts(&g, row.n, o.mode.into(), DEFAULT_GENERAL_CAP)?));
                    }
                }
                VarianceCmd::Oracle => {
                    let s = Scattering::new(&g)?;
                    for row in &mut rows {
                        row.oracle = Some(minor_sum_variance(&s, row.n)?);
                    }
                }
                VarianceCmd::Mc => {
                    let s = Scattering::new(&g)?;
                    let lengths: Lengths = sample_bond_lengths(&g, o.seed, LENGTH_INTERVAL.0, LENGTH_INTERVAL.1)?;
                    for (row, est) in rows.iter_mut().zip(mc_variance(&s, &lengths, &ns, &o.mc())?) {
                        row.mc = Some(est);
                    }
                }
                VarianceCmd::Diagonal => {
                    let mut w = csv::Writer::from_writer(o.output()?);
                    w.write_record(["n", "diagonal_fraction", "diagonal"])?;
                    for &n in &ns {
                        let d = diagonal_approximation(&g, n, DEFAULT_GENERAL_CAP)?;
                        w.write_record([n.to_string(), d.to_string(), d.to_decimal_string()])?;
                    }
                    w.flush()?;
                    return Ok(0);
                }
            }
            write_variance_csv(&rows, o.output()?)?;
        }
        Command::Report(ReportCmd::Table) => {
            let report = run_table_report(&o.run_config()?)?;
            match &o.out {
                Some(path) => {
                    let sidecar = save_table_report(&report, path)?;
                    eprintln!("wrote {} and {}", path.display(), sidecar.display());
                }
                None => {
                    write_table_csv(&report, io::stdout().lock())?;
                    eprintln!("{}", sidecar_json(&report)?);
                }
            }
            for note in &report.notes {
                eprintln!("note: {note}");
            }
            return Ok(report.exit_code());
        }
        Command::Report(ReportCmd::Convergence) => {
            if o.graph_file.is_some() {
                bail!("convergence studies run on binary graphs; use --p and --r");
            }
            let rs = if o.r.is_empty() { vec![2, 3, 4, 5] } else { o.r.clone() };
            let config = ConvergenceConfig {
                p: o.p,
                rs,
                n_rule: o.n.map_or(NRule::HalfBonds, NRule::Fixed),
                samples: o.samples,
                seed: o.seed,
                k_max: o.kmax,
            };
            write_convergence_csv(&run_convergence_study(&config)?, o.output()?)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
