//! Experiment description shared by every command.

use crate::error::CliError;
use gercp::genmat::{Family, GeneratorSpec};
use gercp::{PivotStrategy, SketchConfig, StrategyKind};
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Write one generated matrix in Matrix Market format.
    Generate,
    /// Factor a matrix with each strategy and report growth and backward error.
    Factor,
    /// Solve a Gaussian right-hand side with each strategy.
    Solve,
    /// Time factorizations.
    Bench,
    /// Growth and backward error over families, sizes, strategies and trials.
    GrowthSweep,
    /// Mean element growth on Gaussian matrices.
    GrowthRandom,
    /// Relative residuals of Gaussian systems.
    ResidualExperiment,
    /// Sketch norm preservation and the randomized growth bound.
    JlCheck,
    /// Numerical checks of the identities and bounds behind the growth analysis.
    TheoryCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Generate => "generate",
            Command::Factor => "factor",
            Command::Solve => "solve",
            Command::Bench => "bench",
            Command::GrowthSweep => "growth-sweep",
            Command::GrowthRandom => "growth-random",
            Command::ResidualExperiment => "residual-experiment",
            Command::JlCheck => "jl-check",
            Command::TheoryCheck => "theory-check",
        }
    }

    fn needs_sizes(self) -> bool {
        !matches!(self, Command::TheoryCheck)
    }

    fn needs_strategies(self) -> bool {
        matches!(
            self,
            Command::Factor
                | Command::Solve
                | Command::Bench
                | Command::GrowthSweep
                | Command::GrowthRandom
                | Command::ResidualExperiment
        )
    }
}

/// Everything a command needs; trial `t` uses seed `seed + t`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub command: Command,
    pub families: Vec<Family>,
    /// `key=value` generator parameters applied to every family that reads the key.
    pub params: Vec<String>,
    pub sizes: Vec<usize>,
    pub strategies: Vec<StrategyKind>,
    pub trials: usize,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    /// Matrix Market input for `factor` and `solve`, instead of a generator.
    pub input_path: Option<PathBuf>,
    pub sketch: SketchConfig,
    pub track_growth: bool,
}

impl ExperimentSpec {
    pub fn new(command: Command) -> Self {
        ExperimentSpec {
            command,
            families: vec![Family::Gaussian],
            params: Vec::new(),
            sizes: Vec::new(),
            strategies: Vec::new(),
            trials: 1,
            seed: 0,
            output_path: None,
            input_path: None,
            sketch: SketchConfig::default(),
            track_growth: false,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.trials == 0 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        let from_file = self.input_path.is_some() && matches!(self.command, Command::Factor | Command::Solve);
        if self.command.needs_sizes() && !from_file {
            if self.sizes.is_empty() {
                return Err(CliError::Usage(format!("{} needs --sizes", self.command.name())));
            }
            if self.sizes.contains(&0) {
                return Err(CliError::Usage("sizes must be at least 1".into()));
            }
        }
        if self.command.needs_strategies() && self.strategies.is_empty() {
            return Err(CliError::Usage(format!("{} needs a nonempty --strategies list", self.command.name())));
        }
        if self.families.is_empty() {
            return Err(CliError::Usage("--family list is empty".into()));
        }
        if self.command == Command::Generate {
            if self.families.len() != 1 || self.sizes.len() != 1 {
                return Err(CliError::Usage("generate takes exactly one family and one size".into()));
            }
            if self.output_path.is_none() {
                return Err(CliError::Usage("generate needs --out".into()));
            }
        }
        self.sketch.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        for f in &self.families {
            self.generator(*f, 1, 0)?;
        }
        Ok(())
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.seed.wrapping_add(trial as u64)
    }

    /// Generator for `family` with the parameters that family reads.
    pub fn generator(&self, family: Family, n: usize, seed: u64) -> Result<GeneratorSpec, CliError> {
        let mut g = GeneratorSpec::new(family, n, seed);
        for kv in &self.params {
            let key = kv.split_once('=').map_or(kv.as_str(), |(k, _)| k.trim());
            if !Family::ALL.iter().any(|f| f.param_keys().contains(&key)) {
                return Err(CliError::Usage(format!("unknown generator parameter '{key}'")));
            }
            if family.param_keys().contains(&key) {
                g.set_param(kv).map_err(|e| CliError::Usage(e.to_string()))?;
            }
        }
        Ok(g)
    }

    pub fn strategy(&self, kind: StrategyKind) -> PivotStrategy {
        match kind {
            StrategyKind::Randomized => PivotStrategy::gercp(self.sketch.clone()).expect("validated sketch config"),
            k => PivotStrategy::new(k),
        }
    }
}
