//! Command-line interface shared by the `lpsnn` binary and the tests.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use crate::audit::audit;
use crate::eval::{eval_genome, pattern_set, PatternSpec, Role};
use crate::oracle::enumerate_oracle;
use crate::trace::emit_traces;
use crate::{run_iris, run_xor, ExperimentConfig, HarnessError, TaskKind};
use clap::{Parser, Subcommand};
use lpsnn_core::Genome;

#[derive(Parser)]
#[command(
    name = "lpsnn",
    version,
    about = "Limited-precision spiking networks trained by a genetic algorithm"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Experiment configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Replaces the configured seed list; may be repeated.
    #[arg(long = "seed")]
    seeds: Vec<u64>,
}

#[derive(clap::Args)]
struct Patterns {
    /// Iris fold to evaluate (default: all 150 samples).
    #[arg(long)]
    fold: Option<usize>,
    /// Side of the fold: train or val.
    #[arg(long, default_value = "val")]
    role: Role,
}

#[derive(Subcommand)]
enum Command {
    /// Train XOR networks, one GA run per seed.
    TrainXor {
        #[command(flatten)]
        common: Common,
        /// Output directory (overrides the configuration).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train iris classifiers over the cross-validation folds.
    TrainIris {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a stored genome without training.
    Eval {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        genome: PathBuf,
        #[command(flatten)]
        patterns: Patterns,
    },
    /// Find the global optimum by enumerating every chromosome.
    Oracle {
        #[arg(long)]
        config: PathBuf,
        /// Stored genomes to compare against the optimum.
        #[arg(long)]
        compare: Vec<PathBuf>,
        /// Where to write the optimal genome.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the membrane-potential trace of one pattern.
    Trace {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        genome: PathBuf,
        /// Pattern index within the selected set.
        #[arg(long, default_value_t = 0)]
        pattern: usize,
        #[command(flatten)]
        patterns: Patterns,
        /// Trace CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Optional SVG plot path.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Recompute every results table cell of a finished run from its genomes.
    Audit {
        /// Experiment output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(
    path: &Path,
    seeds: &[u64],
    out: Option<&PathBuf>,
) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = ExperimentConfig::load(path)?;
    if !seeds.is_empty() {
        cfg.seeds = seeds.to_vec();
    }
    if let Some(out) = out {
        cfg.output_dir = Some(out.clone());
    }
    Ok(cfg)
}

fn spec(task: TaskKind, p: &Patterns) -> PatternSpec {
    match (task, p.fold) {
        (TaskKind::Iris, Some(fold)) => PatternSpec::IrisFold { fold, role: p.role },
        _ => PatternSpec::default_for(task),
    }
}

fn read_genome(path: &Path) -> Result<Genome, HarnessError> {
    Genome::read(path).map_err(|e| HarnessError::genome(path, e))
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::TrainXor { common, out } => {
            let report = run_xor(&load(&common.config, &common.seeds, out.as_ref())?)?;
            print!("{}", report.render());
        }
        Command::TrainIris { common, out } => {
            let report = run_iris(&load(&common.config, &common.seeds, out.as_ref())?)?;
            print!("{}", report.render());
        }
        Command::Eval {
            config,
            genome,
            patterns,
        } => {
            let exp = load(&config, &[], None)?.resolve()?;
            let set = pattern_set(&exp, spec(exp.task, &patterns))?;
            print!(
                "{}",
                eval_genome(&read_genome(&genome)?, &exp, &set)?.render()
            );
        }
        Command::Oracle {
            config,
            compare,
            out,
        } => {
            let exp = load(&config, &[], None)?.resolve()?;
            let compare: Vec<&Path> = compare.iter().map(PathBuf::as_path).collect();
            let report = enumerate_oracle(&exp, &compare)?;
            if let Some(out) = out {
                report
                    .genome
                    .write(&out)
                    .map_err(|e| HarnessError::io(&out, e))?;
            }
            print!("{}", report.render());
            if report.comparisons.iter().any(|c| !c.equals_optimum) {
                return Err(HarnessError::Usage(
                    "a stored genome misses the global optimum".into(),
                ));
            }
        }
        Command::Trace {
            config,
            genome,
            pattern,
            patterns,
            out,
            svg,
        } => {
            let exp = load(&config, &[], None)?.resolve()?;
            let set = pattern_set(&exp, spec(exp.task, &patterns))?;
            let trace = emit_traces(
                &read_genome(&genome)?,
                &exp,
                &set,
                pattern,
                &out,
                svg.as_deref(),
            )?;
            println!("wrote {} rows to {}", trace.rows.len(), out.display());
        }
        Command::Audit { out } => {
            let report = audit(&out)?;
            let bad = report.mismatches();
            for c in &bad {
                println!("MISMATCH {c}");
            }
            println!(
                "{} cells checked, {} mismatches",
                report.cells.len(),
                bad.len()
            );
            if !report.passed() {
                return Err(HarnessError::Usage("audit failed".into()));
            }
        }
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the command. Errors are
/// printed to stderr and turned into a failing exit code.
pub fn run_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    report(run(cli))
}

/// Like [`run_args`] but returns the error, parse errors included.
pub fn try_run<I, T>(args: I) -> Result<(), HarnessError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| HarnessError::Usage(e.to_string()))?;
    run(cli)
}

fn report(result: Result<(), HarnessError>) -> ExitCode {
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
