//! Flag parsing and command dispatch.

use crate::error::CliError;
use crate::runners::*;
use crate::spec::{Command, ExperimentSpec};
use crate::table::Table;
use crate::theory::{run_theory_check, theory_table};
use clap::Parser;
use gercp::genmat::Family;
use gercp::{SketchConfig, StrategyKind};
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "gercp-cli", version, about = "LU pivoting experiments, written as CSV")]
pub struct Cli {
    #[arg(long, value_enum)]
    pub command: Command,
    /// Matrix families, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "gaussian")]
    pub family: Vec<Family>,
    /// Generator parameter `key=value`; repeatable.
    #[arg(long = "param")]
    pub params: Vec<String>,
    /// Matrix sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// Strategies among genp, gepp, gecp, gerp, ge2cp, gercp; comma separated.
    #[arg(long, value_delimiter = ',')]
    pub strategies: Vec<StrategyKind>,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Base seed; trial t uses seed + t.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path; CSV goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Matrix Market input for factor and solve.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Sketch rows (default min(n, 64)).
    #[arg(long)]
    pub r: Option<usize>,
    /// Column threshold in (0, 1]; the current column is kept if its sketched norm is at least g times the largest.
    #[arg(long)]
    pub g: Option<f64>,
    /// JL distortion used to size the sketch.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// JL failure probability used to size the sketch.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Panel width of the blocked factorizations.
    #[arg(long)]
    pub block_size: Option<usize>,
    /// Always use the stable sketch update.
    #[arg(long)]
    pub force_stable_update: bool,
    /// Record Schur complement norms; needed for growth columns.
    #[arg(long)]
    pub track_growth: bool,
}

impl Cli {
    pub fn into_spec(self) -> ExperimentSpec {
        let d = SketchConfig::default();
        let sketch = SketchConfig {
            r: self.r,
            g: self.g.unwrap_or(d.g),
            epsilon: self.epsilon.unwrap_or(d.epsilon),
            delta: self.delta.unwrap_or(d.delta),
            block_size: self.block_size.unwrap_or(d.block_size),
            force_stable_update: self.force_stable_update,
            seed: self.seed,
        };
        ExperimentSpec {
            command: self.command,
            families: self.family,
            params: self.params,
            sizes: self.sizes,
            strategies: self.strategies,
            trials: self.trials,
            seed: self.seed,
            output_path: self.out,
            input_path: self.input,
            sketch,
            track_growth: self.track_growth,
        }
    }
}

/// Runs `spec`, writing CSV to `--out` or `stdout` and notes to `stderr`.
pub fn execute(spec: &ExperimentSpec, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    spec.validate()?;
    let table: Table = match spec.command {
        Command::Generate => {
            let g = spec.generator(spec.families[0], spec.sizes[0], spec.seed)?;
            let path = spec.output_path.as_ref().expect("validated");
            gercp::dense::mmio::write_path(&g.generate()?, path)?;
            writeln!(stderr, "wrote {} n={} to {}", g.family, g.n, path.display())?;
            return Ok(());
        }
        Command::Factor => factor_table(&run_factor(spec, false)?, false),
        Command::Solve => factor_table(&run_factor(spec, true)?, true),
        Command::Bench => {
            let rep = run_bench(spec)?;
            write!(stderr, "{}", bench_summary_text(&rep))?;
            bench_table(&rep)
        }
        Command::GrowthSweep => growth_table(&run_growth_sweep(spec)?),
        Command::GrowthRandom => random_growth_table(&run_element_growth_random(spec)?),
        Command::ResidualExperiment => residual_table(&run_residual_experiment(spec)?),
        Command::JlCheck => {
            let rows = run_jl_check(spec)?;
            let ok: Vec<_> = rows.iter().filter_map(|r| r.result.as_ref().ok()).collect();
            let bad = ok.iter().filter(|o| o.jl_violated).count();
            writeln!(stderr, "runs with a JL violation: {bad} of {}", ok.len())?;
            jl_table(&rows)
        }
        Command::TheoryCheck => {
            let rows = run_theory_check(spec.seed)?;
            let failed = rows.iter().filter(|r| !r.passed).count();
            writeln!(stderr, "theory checks: {} passed, {failed} failed", rows.len() - failed)?;
            theory_table(&rows)
        }
    };
    match &spec.output_path {
        Some(p) => {
            let f = File::create(p).map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", p.display())))?;
            table.write(BufWriter::new(f))
        }
        None => table.write(stdout),
    }
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli.into_spec(), stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}
