use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use super::bounds_table::bounds_table;
use super::conjecture::{conjecture_probe, ConjectureSpec};
use super::csv::emit_csv;
use super::sweep::{sweep_with_progress, IterationCap, KRange, SweepSpec};
use super::trace::write_trace_file;
use super::verify::{verify, Preset, VerifyPlan};
use crate::algorithm::{run, RunConfig, TraceLevel};
use crate::analysis::compute_potential;
use crate::error::{Error, Result};
use crate::fitness::{FitnessFamily, FitnessFunction};
use crate::model::ModelParams;

/// Output directory used when `--out` is absent.
pub const OUT_DIR_ENV: &str = "RCGA_OUT_DIR";
/// Number of worker threads; defaults to the number of CPUs.
pub const WORKERS_ENV: &str = "RCGA_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "rcga", version, about = "r-valued compact GA experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Single run; prints status, iterations and evaluations.
    Run {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "r-onemax")]
        fitness: FitnessFamily,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_iterations: Option<u64>,
        /// Keep iterating after the maximum became unreachable.
        #[arg(long)]
        no_stagnation_check: bool,
        /// Write a trace file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Also list every count change in the trace.
        #[arg(long, requires = "trace")]
        full_trace: bool,
    },
    /// Parameter sweep over r and K; one CSV per r.
    Sweep {
        #[arg(long)]
        n: usize,
        /// Comma-separated alphabet sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<usize>,
        /// K range `start:end:stride`.
        #[arg(long)]
        k: KRange,
        #[arg(long, default_value = "r-onemax")]
        fitness: FitnessFamily,
        #[arg(long, default_value_t = 300)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_iterations: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
    /// Monte Carlo and exact checks of the drift bounds.
    Verify {
        #[arg(long, default_value = "paper-defaults")]
        preset: Preset,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also write every probe report into this directory.
        #[arg(long)]
        report_dir: Option<PathBuf>,
    },
    /// Tabulates the closed-form bounds over a grid at the uniform model.
    Bounds {
        #[arg(long, value_delimiter = ',', default_value = "100,500")]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,4,10")]
        r: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "100,400,1000")]
        k: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "100,1000")]
        t: Vec<u64>,
    },
    /// G-OneMax scaling diagnostic (non-conclusive).
    Conjecture {
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long, default_value_t = 20)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "100,200,400")]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
        c: Vec<f64>,
    },
}

/// Sizes the global rayon pool from `RCGA_WORKERS`, if set. Only the first
/// call has an effect.
pub fn configure_workers() -> Result<()> {
    let Ok(value) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let workers: usize = value.parse().ok().filter(|&w| w > 0).ok_or_else(|| {
        Error::InvalidParams(format!("{WORKERS_ENV}={value:?} is not a positive integer"))
    })?;
    // a second initialisation fails harmlessly
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global();
    Ok(())
}

fn out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Entry point of the `rcga` binary. Returns the process exit code:
/// `0` on success, `1` on failed verification or runtime errors, `2` on
/// usage errors.
pub fn cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let parsed = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return if code == 0 { 0 } else { 2 };
        }
    };
    match execute(parsed.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    configure_workers()?;
    let io = |e: std::io::Error| Error::io("<stdout>", e);
    match command {
        Command::Run {
            n,
            r,
            k,
            fitness,
            seed,
            max_iterations,
            no_stagnation_check,
            trace,
            full_trace,
        } => {
            let params = ModelParams::new(n, r, k)?;
            let function = FitnessFunction::from_family(fitness, n, r, seed);
            let mut config =
                RunConfig::new(params, function, seed).with_stagnation_check(!no_stagnation_check);
            if let Some(cap) = max_iterations {
                config = config.with_max_iterations(cap);
            }
            if trace.is_some() {
                config = config.with_trace(if full_trace {
                    TraceLevel::Full
                } else {
                    TraceLevel::Summary
                });
            }
            let outcome = run(&config)?;
            writeln!(out, "status: {}", outcome.status.as_str()).map_err(io)?;
            writeln!(out, "iterations: {}", outcome.iterations).map_err(io)?;
            writeln!(out, "evaluations: {}", outcome.evaluations).map_err(io)?;
            writeln!(
                out,
                "final_potential: {}",
                compute_potential(&outcome.final_model)
            )
            .map_err(io)?;
            if let (Some(path), Some(t)) = (trace, outcome.trace.as_ref()) {
                write_trace_file(t, &path)?;
                writeln!(out, "trace: {}", path.display()).map_err(io)?;
            }
            Ok(0)
        }
        Command::Sweep {
            n,
            r,
            k,
            fitness,
            reps,
            seed,
            max_iterations,
            out: dir,
            quiet,
        } => {
            let spec = SweepSpec {
                n,
                r_list: r,
                k_range: k,
                family: fitness,
                repetitions: reps,
                master_seed: seed,
                max_iterations: max_iterations.map_or(IterationCap::Default, IterationCap::Fixed),
            };
            let result = sweep_with_progress(&spec, |cell| {
                if !quiet {
                    let mean = cell
                        .mean_iterations
                        .map_or("nan".into(), |m| format!("{m:.1}"));
                    let _ = writeln!(
                        err,
                        "r={} K={}: mean {} success {}/{}",
                        cell.r, cell.k, mean, cell.success_count, cell.repetitions
                    );
                }
            })?;
            for (r, k) in &result.skipped {
                writeln!(out, "skipped: r={r} K={k} (r does not divide K)").map_err(io)?;
            }
            for path in emit_csv(&result, &out_dir(dir))? {
                writeln!(out, "wrote: {}", path.display()).map_err(io)?;
            }
            Ok(0)
        }
        Command::Verify {
            preset,
            seed,
            report_dir,
        } => {
            let report = verify(&VerifyPlan::preset(preset, seed))?;
            write!(out, "{}", report.summary()).map_err(io)?;
            if let Some(dir) = report_dir {
                std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                for check in &report.checks {
                    let path =
                        dir.join(format!("{}.txt", check.name.replace([' ', '(', ')'], "_")));
                    std::fs::write(&path, check.report.to_text())
                        .map_err(|e| Error::io(&path, e))?;
                }
            }
            let passed = report.passed();
            writeln!(
                out,
                "{}",
                if passed {
                    "all checks passed"
                } else {
                    "verification FAILED"
                }
            )
            .map_err(io)?;
            Ok(if passed { 0 } else { 1 })
        }
        Command::Bounds { n, r, k, t } => {
            write!(out, "{}", bounds_table(&n, &r, &k, &t)?.to_aligned()).map_err(io)?;
            Ok(0)
        }
        Command::Conjecture {
            r,
            reps,
            seed,
            n,
            c,
        } => {
            let report = conjecture_probe(&ConjectureSpec {
                r,
                ns: n,
                cs: c.clone(),
                repetitions: reps,
                seed,
            })?;
            writeln!(
                out,
                "diagnostic only: ratio = mean_iterations / (K sqrt(n) ln r)"
            )
            .map_err(io)?;
            write!(out, "{}", report.table().to_aligned()).map_err(io)?;
            for c in c {
                if let Some(spread) = report.spread(c) {
                    writeln!(out, "c={c}: max/min ratio across n = {spread:.3}").map_err(io)?;
                }
            }
            Ok(0)
        }
    }
}
