//! `mana`: figure experiments, self-verification, prediction tables and
//! Wigner-transform benchmarks.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use mana_core::design_probe::{distinguish_table, empirical_distinguish};
use mana_core::ensembles::{sample_haar_pure, SeededStream};
use mana_core::experiments::{run_figure, ExperimentConfig, FigureId};
use mana_core::predictions::{exact_pure_norm, prediction_table_deltas, prediction_table_dims};
use mana_core::stats::median;
use mana_core::verify::{run_verify, Fault};
use mana_core::wigner::{wigner_with, WignerPath};
use mana_core::{Cell, ManaError, Table};
use serde_json::json;

const BUILD_ID: &str = env!("MANA_BUILD_ID");

/// Largest dimension `bench` accepts.
const BENCH_MAX_DIM: usize = 2187;
/// Matrix-trace path is `O(d⁴)`; skipped above this.
const MATRIX_TRACE_MAX_DIM: usize = 81;

#[derive(Parser)]
#[command(name = "mana", version = BUILD_ID, about = "Wigner functions, mana and random qudit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Master seed for all random streams.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Samples per grid point.
    #[arg(long)]
    samples: Option<usize>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a figure experiment and write CSV plus a metadata JSON.
    Figure {
        /// fig_mixed_intro, fig_mixed_detail, fig_mixed_var, fig_exact_db,
        /// fig_ensembles, fig_pure_norm, fig_pure_std or fig_pure_mana.
        id: String,
        /// System dimensions, comma separated.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        /// Ancilla dimensions or mixture sizes, comma separated.
        #[arg(long, value_delimiter = ',')]
        knobs: Option<Vec<usize>>,
        /// Spacing of target entropy deficits.
        #[arg(long)]
        delta_step: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Check the operator algebra, Wigner constraints and closed forms.
    Verify {
        /// Largest odd dimension for the algebra checks.
        #[arg(long, default_value_t = 31)]
        max_d: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate closed-form predictions.
    Predict {
        /// Dimension for a Δ grid.
        #[arg(long, conflicts_with_all = ["d_a", "d_b"])]
        d: Option<usize>,
        /// Δ grid as `start:stop:step`.
        #[arg(long, default_value = "0:4:0.1")]
        delta_grid: String,
        /// System dimension for a reduced-state grid.
        #[arg(long, requires = "d_b")]
        d_a: Option<usize>,
        /// Ancilla dimensions as `lo..hi` or a comma list.
        #[arg(long)]
        d_b: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Time the matrix-trace, direct and FFT Wigner paths.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "3,9,27,81,243")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Fraction of Haar states with Wigner norm below a threshold, next to
    /// the Chebyshev-inequality bound.
    Distinguish {
        #[arg(long)]
        d: usize,
        /// Offsets δ below the mean norm, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1.0")]
        deltas: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Print a plotting script template for a figure's CSV.
    PlotTemplate { id: String },
}

enum Failure {
    Verification,
    Config(String),
}

impl From<ManaError> for Failure {
    fn from(e: ManaError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn set_threads(common: &Common) -> Result<(), Failure> {
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(Failure::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(e.to_string()))?;
    }
    Ok(())
}

fn write_table(table: &Table, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?;
            table.write_csv(BufWriter::new(file))?;
        }
        None => table.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

fn write_metadata(out: Option<&Path>, meta: serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(&meta).expect("json value serializes");
    match out {
        Some(path) => {
            let path = path.with_extension("json");
            std::fs::write(&path, text + "\n")
                .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?;
        }
        None => eprintln!("{text}"),
    }
    Ok(())
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Figure {
            id,
            dims,
            knobs,
            delta_step,
            common,
        } => {
            set_threads(&common)?;
            let figure: FigureId = id.parse()?;
            let mut cfg = ExperimentConfig::default_for(figure);
            cfg.master_seed = common.seed;
            if let Some(n) = common.samples {
                cfg.n_samples = n;
            }
            if let Some(d) = dims {
                cfg.dims = d;
            }
            if let Some(k) = knobs {
                cfg.knobs = k;
            }
            if let Some(s) = delta_step {
                cfg.delta_step = s;
            }
            cfg.validate()?;
            let start = Instant::now();
            let table = run_figure(&cfg)?;
            let elapsed = start.elapsed().as_secs_f64();
            write_table(&table, common.out.as_deref())?;
            write_metadata(
                common.out.as_deref(),
                json!({
                    "experiment": figure.name(),
                    "seed": cfg.master_seed,
                    "n_samples": cfg.n_samples,
                    "dims": cfg.dims,
                    "knobs": cfg.knobs,
                    "delta_step": cfg.delta_step,
                    "build_id": BUILD_ID,
                    "elapsed_seconds": elapsed,
                }),
            )
        }
        Command::Verify {
            max_d,
            inject_fault,
            common,
        } => {
            set_threads(&common)?;
            if max_d < 3 {
                return Err(Failure::Config("--max-d must be at least 3".into()));
            }
            let fault = inject_fault.then_some(Fault::CorruptPhasePoint);
            let start = Instant::now();
            let report = run_verify(max_d, fault)?;
            let mut out = io::stdout().lock();
            for c in &report.checks {
                let tag = if c.passed() { "ok  " } else { "FAIL" };
                writeln!(out, "{tag} {:<40} residual {:.3e} (tol {:.0e})", c.name, c.residual, c.tolerance)?;
            }
            let failures = report.failures();
            writeln!(
                out,
                "{} checks, {} failed, {:.2} s",
                report.checks.len(),
                failures.len(),
                start.elapsed().as_secs_f64()
            )?;
            if failures.is_empty() {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Predict {
            d,
            delta_grid,
            d_a,
            d_b,
            common,
        } => {
            let table = match (d_a, d_b) {
                (Some(d_a), Some(d_b)) => prediction_table_dims(d_a, &parse_list(&d_b)?)?,
                _ => {
                    let d = d.ok_or_else(|| {
                        Failure::Config("give --d with --delta-grid, or --d-a with --d-b".into())
                    })?;
                    let max = (d as f64).ln();
                    let grid: Vec<f64> = parse_grid(&delta_grid)?
                        .into_iter()
                        .filter(|&x| x <= max + 1e-12)
                        .collect();
                    prediction_table_deltas(d, &grid)?
                }
            };
            write_table(&table, common.out.as_deref())
        }
        Command::Bench { dims, reps, common } => {
            set_threads(&common)?;
            let table = bench(&dims, reps, common.seed)?;
            write_table(&table, common.out.as_deref())
        }
        Command::Distinguish { d, deltas, common } => {
            set_threads(&common)?;
            let n = common.samples.unwrap_or(10_000);
            let mean = exact_pure_norm(d)?;
            let start = Instant::now();
            let results = deltas
                .iter()
                .map(|&delta| empirical_distinguish(d, n, mean - delta, common.seed))
                .collect::<Result<Vec<_>, _>>()?;
            let elapsed = start.elapsed().as_secs_f64();
            write_table(&distinguish_table(&results), common.out.as_deref())?;
            write_metadata(
                common.out.as_deref(),
                json!({
                    "experiment": "distinguish",
                    "seed": common.seed,
                    "n_samples": n,
                    "dims": [d],
                    "build_id": BUILD_ID,
                    "elapsed_seconds": elapsed,
                    "assumptions": [
                        "the Gaussian variance estimate d^-1(1-2/pi) is taken as an upper bound on the Wigner-norm variance"
                    ],
                }),
            )
        }
        Command::PlotTemplate { id } => {
            let figure: FigureId = id.parse()?;
            print!("{}", plot_template(figure)?);
            Ok(())
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::Config(format!("cannot parse `{s}` as `lo..hi` or a comma list"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

fn parse_grid(s: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Config(format!("cannot parse `{s}` as start:stop:step"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|x| x.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    if !(step > 0.0) || stop < start || start < 0.0 {
        return Err(bad());
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

fn bench(dims: &[usize], reps: usize, seed: u64) -> Result<Table, Failure> {
    if reps == 0 {
        return Err(Failure::Config("--reps must be at least 1".into()));
    }
    let mut t = Table::new(&["d", "path", "median_seconds", "reps"]);
    for &d in dims {
        if d > BENCH_MAX_DIM {
            return Err(Failure::Config(format!(
                "d = {d} exceeds the memory budget (max {BENCH_MAX_DIM})"
            )));
        }
        let psi = sample_haar_pure(d, &SeededStream::new(seed, d as u64))?;
        let reference = wigner_with(WignerPath::Fft, &psi)?;
        for path in WignerPath::ALL {
            if path == WignerPath::MatrixTrace && d > MATRIX_TRACE_MAX_DIM {
                t.push(vec![d.into(), path.name().into(), Cell::Empty, 0usize.into()]);
                continue;
            }
            let w = wigner_with(path, &psi)?;
            let diff = w
                .values()
                .iter()
                .zip(reference.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if diff > 1e-10 {
                eprintln!("{} disagrees with fft at d = {d}: {diff:.3e}", path.name());
                return Err(Failure::Verification);
            }
            let times: Vec<f64> = (0..reps)
                .map(|_| {
                    let start = Instant::now();
                    let _ = std::hint::black_box(wigner_with(path, &psi));
                    start.elapsed().as_secs_f64()
                })
                .collect();
            t.push(vec![d.into(), path.name().into(), median(&times).into(), reps.into()]);
        }
    }
    Ok(t)
}

fn plot_template(figure: FigureId) -> Result<String, Failure> {
    let mut cfg = ExperimentConfig::default_for(figure);
    cfg.n_samples = 1;
    cfg.dims.truncate(1);
    cfg.knobs.truncate(1);
    let header = run_figure(&cfg)?.header;
    let cols = header
        .iter()
        .map(|h| format!("#   {h}"))
        .collect::<Vec<_>>()
        .join("\n");
    let name = figure.name();
    Ok(format!(
        r#"# Plot template for {name}.csv
# Columns:
{cols}
import sys

import matplotlib.pyplot as plt
import pandas as pd

df = pd.read_csv(sys.argv[1] if len(sys.argv) > 1 else "{name}.csv")
fig, ax = plt.subplots()
x, y = df.columns[0], df.columns[1]  # choose columns from the list above
ax.plot(df[x], df[y], "o")
ax.set_xlabel(x)
ax.set_ylabel(y)
fig.savefig("{name}.pdf")
"#
    ))
}
