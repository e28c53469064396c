//! Experiment runners. Each returns typed rows; `to_table` turns them into CSV.
//!
//! Independent trials run on the rayon pool. Results are collected in job
//! order, so output does not depend on scheduling.

use crate::error::CliError;
use crate::spec::ExperimentSpec;
use crate::table::{cell, num, Table};
use gercp::diagnostics::{
    backward_error, column_growth, element_growth, gepp_growth_bounds, gercp_growth_bound, relative_residual,
};
use gercp::genmat::{gaussian, rhs_gaussian, Family};
use gercp::sketch::required_sampling_dim;
use gercp::{factorize, Matrix, PivotStrategy, StrategyKind};
use rayon::prelude::*;
use std::time::Instant;

/// Growth factors and backward error of one tracked factorization.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthMeasure {
    pub rho_elem: f64,
    pub rho_col: f64,
    pub backward_error: f64,
}

pub fn measure_growth(a: &Matrix, strategy: &PivotStrategy, seed: u64) -> Result<GrowthMeasure, String> {
    let f = factorize(a, strategy, true, seed).map_err(|e| e.to_string())?;
    let stats = f.stats.as_ref().ok_or("growth was not tracked")?;
    Ok(GrowthMeasure {
        rho_elem: element_growth(stats).map_err(|e| e.to_string())?,
        rho_col: column_growth(stats).map_err(|e| e.to_string())?,
        backward_error: backward_error(a, &f).map_err(|e| e.to_string())?,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRow {
    pub family: Family,
    pub n: usize,
    pub strategy: StrategyKind,
    pub trial: usize,
    pub seed: u64,
    pub result: Result<GrowthMeasure, String>,
}

/// One row per (family, n, strategy, trial). Trial `t` draws the matrix and
/// the sketch from seed `seed + t`; failures are kept as error rows.
pub fn run_growth_sweep(spec: &ExperimentSpec) -> Result<Vec<GrowthRow>, CliError> {
    spec.validate()?;
    let mut jobs = Vec::new();
    for &family in &spec.families {
        for &n in &spec.sizes {
            for &strategy in &spec.strategies {
                for trial in 0..spec.trials {
                    jobs.push((family, n, strategy, trial));
                }
            }
        }
    }
    jobs.into_par_iter()
        .map(|(family, n, strategy, trial)| {
            let seed = spec.trial_seed(trial);
            let a = spec.generator(family, n, seed)?.generate()?;
            let result = measure_growth(&a, &spec.strategy(strategy), seed);
            Ok(GrowthRow { family, n, strategy, trial, seed, result })
        })
        .collect()
}

pub fn growth_table(rows: &[GrowthRow]) -> Table {
    let mut t = Table::new(&["family", "n", "strategy", "trial", "seed", "rho_elem", "rho_col", "backward_error"]);
    for r in rows {
        let pick = |f: fn(&GrowthMeasure) -> f64| cell(&r.result.as_ref().map(f).map_err(Clone::clone));
        t.push(vec![
            r.family.to_string(),
            r.n.to_string(),
            r.strategy.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            pick(|m| m.rho_elem),
            pick(|m| m.rho_col),
            pick(|m| m.backward_error),
        ]);
    }
    t
}

/// Mean of `value` over the successful rows of each (n, strategy), in
/// first-seen order. Tables print a mean row only when it averages more
/// than one trial.
fn group_means<R>(
    rows: &[R],
    key: impl Fn(&R) -> (usize, StrategyKind),
    value: impl Fn(&R) -> Option<f64>,
) -> Vec<GroupMean> {
    let mut out: Vec<(usize, StrategyKind, f64, usize)> = Vec::new();
    for r in rows {
        let (n, s) = key(r);
        let Some(v) = value(r) else { continue };
        match out.iter_mut().find(|g| g.0 == n && g.1 == s) {
            Some(g) => {
                g.2 += v;
                g.3 += 1;
            }
            None => out.push((n, s, v, 1)),
        }
    }
    out.into_iter()
        .map(|(n, strategy, sum, count)| GroupMean { n, strategy, mean: sum / count as f64, count })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupMean {
    pub n: usize,
    pub strategy: StrategyKind,
    pub mean: f64,
    pub count: usize,
}

pub fn find_mean(means: &[GroupMean], n: usize, strategy: StrategyKind) -> Option<f64> {
    means.iter().find(|m| m.n == n && m.strategy == strategy).map(|m| m.mean)
}

/// Element growth on Gaussian matrices, with the mean per (n, strategy).
#[derive(Clone, Debug, PartialEq)]
pub struct RandomGrowthReport {
    pub rows: Vec<GrowthRow>,
    pub means: Vec<GroupMean>,
}

pub fn run_element_growth_random(spec: &ExperimentSpec) -> Result<RandomGrowthReport, CliError> {
    let mut s = spec.clone();
    s.families = vec![Family::Gaussian];
    let rows = run_growth_sweep(&s)?;
    let means = group_means(&rows, |r| (r.n, r.strategy), |r| r.result.as_ref().ok().map(|m| m.rho_elem));
    Ok(RandomGrowthReport { rows, means })
}

pub fn random_growth_table(rep: &RandomGrowthReport) -> Table {
    let mut t = Table::new(&["n", "strategy", "trial", "seed", "rho_elem", "rho_col"]);
    for r in &rep.rows {
        let m = r.result.as_ref().map_err(Clone::clone);
        t.push(vec![
            r.n.to_string(),
            r.strategy.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            cell(&m.clone().map(|m| m.rho_elem)),
            cell(&m.map(|m| m.rho_col)),
        ]);
    }
    for g in rep.means.iter().filter(|g| g.count > 1) {
        t.push(vec![g.n.to_string(), g.strategy.to_string(), "mean".into(), String::new(), num(g.mean), String::new()]);
    }
    t
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualRow {
    pub n: usize,
    pub strategy: StrategyKind,
    pub trial: usize,
    pub seed: u64,
    pub relative_residual: Result<f64, String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub rows: Vec<ResidualRow>,
    pub means: Vec<GroupMean>,
}

/// Solves `A x = b` with Gaussian `A` and `b` drawn from seed `seed + t`
/// and records `‖b - A x‖_∞ / (‖A‖_∞ ‖x‖_∞)`.
pub fn run_residual_experiment(spec: &ExperimentSpec) -> Result<ResidualReport, CliError> {
    spec.validate()?;
    let mut jobs = Vec::new();
    for &n in &spec.sizes {
        for &strategy in &spec.strategies {
            for trial in 0..spec.trials {
                jobs.push((n, strategy, trial));
            }
        }
    }
    let rows: Vec<ResidualRow> = jobs
        .into_par_iter()
        .map(|(n, strategy, trial)| {
            let seed = spec.trial_seed(trial);
            let a = gaussian(n, seed);
            let b = rhs_gaussian(n, seed);
            let res = factorize(&a, &spec.strategy(strategy), false, seed)
                .and_then(|f| f.solve(&b))
                .and_then(|x| relative_residual(&a, &x, &b))
                .map_err(|e| e.to_string());
            ResidualRow { n, strategy, trial, seed, relative_residual: res }
        })
        .collect();
    let means = group_means(&rows, |r| (r.n, r.strategy), |r| r.relative_residual.as_ref().ok().copied());
    Ok(ResidualReport { rows, means })
}

pub fn residual_table(rep: &ResidualReport) -> Table {
    let mut t = Table::new(&["n", "strategy", "trial", "seed", "relative_residual"]);
    for r in &rep.rows {
        t.push(vec![
            r.n.to_string(),
            r.strategy.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            cell(&r.relative_residual),
        ]);
    }
    for g in rep.means.iter().filter(|g| g.count > 1) {
        t.push(vec![g.n.to_string(), g.strategy.to_string(), "mean".into(), String::new(), num(g.mean)]);
    }
    t
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub strategy: StrategyKind,
    pub trial: usize,
    pub seed: u64,
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchSummary {
    pub n: usize,
    pub strategy: StrategyKind,
    pub mean: f64,
    pub min: f64,
}

/// `(t_gercp - t_gepp) / t_gepp` at one size, from means and from minima.
#[derive(Clone, Debug, PartialEq)]
pub struct Overhead {
    pub n: usize,
    pub from_mean: f64,
    pub from_min: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub summary: Vec<BenchSummary>,
    /// Present for each size when both `gepp` and `gercp` ran.
    pub overhead: Vec<Overhead>,
}

/// Times the factorization call only, sequentially. Each strategy gets one
/// untimed warmup run per size; trials then alternate between strategies.
pub fn run_bench(spec: &ExperimentSpec) -> Result<BenchReport, CliError> {
    spec.validate()?;
    let mut rows = Vec::new();
    for &n in &spec.sizes {
        let mats: Vec<Matrix> = (0..spec.trials).map(|t| gaussian(n, spec.trial_seed(t))).collect();
        let strategies: Vec<_> = spec.strategies.iter().map(|&k| (k, spec.strategy(k))).collect();
        for (_, s) in &strategies {
            factorize(&mats[0], s, spec.track_growth, spec.seed)?;
        }
        for (trial, a) in mats.iter().enumerate() {
            let seed = spec.trial_seed(trial);
            for (kind, s) in &strategies {
                let start = Instant::now();
                let f = factorize(a, s, spec.track_growth, seed)?;
                let wall_seconds = start.elapsed().as_secs_f64();
                drop(f);
                rows.push(BenchRow { n, strategy: *kind, trial, seed, wall_seconds });
            }
        }
    }
    let mut summary = Vec::new();
    for &n in &spec.sizes {
        for &strategy in &spec.strategies {
            let ts: Vec<f64> =
                rows.iter().filter(|r| r.n == n && r.strategy == strategy).map(|r| r.wall_seconds).collect();
            let mean = ts.iter().sum::<f64>() / ts.len() as f64;
            let min = ts.iter().copied().fold(f64::INFINITY, f64::min);
            summary.push(BenchSummary { n, strategy, mean, min });
        }
    }
    let get = |n: usize, k: StrategyKind| summary.iter().find(|s| s.n == n && s.strategy == k);
    let overhead = spec
        .sizes
        .iter()
        .filter_map(|&n| {
            let (pp, rcp) = (get(n, StrategyKind::Partial)?, get(n, StrategyKind::Randomized)?);
            Some(Overhead { n, from_mean: rcp.mean / pp.mean - 1.0, from_min: rcp.min / pp.min - 1.0 })
        })
        .collect();
    Ok(BenchReport { rows, summary, overhead })
}

pub fn bench_table(rep: &BenchReport) -> Table {
    let mut t = Table::new(&["n", "strategy", "trial", "seed", "wall_seconds"]);
    for r in &rep.rows {
        t.push(vec![
            r.n.to_string(),
            r.strategy.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            num(r.wall_seconds),
        ]);
    }
    t
}

/// Human-readable bench summary.
pub fn bench_summary_text(rep: &BenchReport) -> String {
    let mut s = String::new();
    for b in &rep.summary {
        s += &format!("n={} {}: mean {:.4}s min {:.4}s\n", b.n, b.strategy, b.mean, b.min);
    }
    for o in &rep.overhead {
        s += &format!(
            "n={} gercp overhead vs gepp: {:.1}% (mean) {:.1}% (min)\n",
            o.n,
            100.0 * o.from_mean,
            100.0 * o.from_min
        );
    }
    s
}

#[derive(Clone, Debug, PartialEq)]
pub struct JlRow {
    pub family: Family,
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub r: usize,
    pub result: Result<JlOutcome, String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JlOutcome {
    /// Some Schur column left the `1 ± ε` band at some step.
    pub jl_violated: bool,
    pub rho_col: f64,
    pub gercp_bound: f64,
    /// `2^{n-1} / sqrt(n)`, which holds whatever the sketch does.
    pub fallback_bound: f64,
}

/// Tracked randomized factorizations with `r = required_sampling_dim(n, ε, δ)`
/// unless `--r` is given, recording JL violations and column growth against
/// both bounds.
pub fn run_jl_check(spec: &ExperimentSpec) -> Result<Vec<JlRow>, CliError> {
    spec.validate()?;
    let (eps, g) = (spec.sketch.epsilon, spec.sketch.g);
    let mut jobs = Vec::new();
    for &family in &spec.families {
        for &n in &spec.sizes {
            let r = match spec.sketch.r {
                Some(r) => r,
                None => required_sampling_dim(n, eps, spec.sketch.delta)?,
            };
            for trial in 0..spec.trials {
                jobs.push((family, n, r, trial));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(family, n, r, trial)| {
            let seed = spec.trial_seed(trial);
            let a = spec.generator(family, n, seed)?.generate()?;
            let mut cfg = spec.sketch.clone();
            cfg.r = Some(r);
            let gercp_bound = gercp_growth_bound(n, eps, g)?;
            let fallback_bound = gepp_growth_bounds(n).1;
            let result = (|| {
                let f = factorize(&a, &PivotStrategy::gercp(cfg)?, true, seed)?;
                let audit = f.sketch_audit.as_ref().expect("tracked run has an audit");
                let rho_col = column_growth(f.stats.as_ref().expect("tracked run has stats"))?;
                Ok(JlOutcome { jl_violated: audit.jl_violated(eps), rho_col, gercp_bound, fallback_bound })
            })()
            .map_err(|e: gercp::LuError| e.to_string());
            Ok(JlRow { family, n, trial, seed, r, result })
        })
        .collect()
}

pub fn jl_table(rows: &[JlRow]) -> Table {
    let mut t = Table::new(&[
        "family",
        "n",
        "trial",
        "seed",
        "r",
        "jl_violated",
        "rho_col",
        "gercp_bound",
        "within_gercp_bound",
        "fallback_bound",
        "within_fallback_bound",
    ]);
    for row in rows {
        let mut cells = vec![
            row.family.to_string(),
            row.n.to_string(),
            row.trial.to_string(),
            row.seed.to_string(),
            row.r.to_string(),
        ];
        match &row.result {
            Ok(o) => cells.extend([
                o.jl_violated.to_string(),
                num(o.rho_col),
                num(o.gercp_bound),
                (o.rho_col <= o.gercp_bound).to_string(),
                num(o.fallback_bound),
                (o.rho_col <= o.fallback_bound).to_string(),
            ]),
            Err(e) => cells.extend(std::iter::repeat_n(format!("error:{e}"), 6)),
        }
        t.push(cells);
    }
    t
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorRow {
    pub source: String,
    pub n: usize,
    pub strategy: StrategyKind,
    pub seed: u64,
    pub result: Result<FactorOutcome, String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorOutcome {
    /// Growth factors, present with `--track-growth`.
    pub growth: Option<(f64, f64)>,
    pub backward_error: f64,
    pub max_multiplier: f64,
    pub singular: bool,
    /// Relative residual of a Gaussian right-hand side (`solve` only).
    pub relative_residual: Option<f64>,
}

/// Inputs of `factor` and `solve`: the `--input` file, or one generated
/// matrix per (family, n, trial).
fn sources(spec: &ExperimentSpec) -> Result<Vec<(String, u64, Matrix)>, CliError> {
    if let Some(p) = &spec.input_path {
        let a = gercp::dense::mmio::read_path(p)?;
        return Ok(vec![(p.display().to_string(), spec.seed, a)]);
    }
    let mut out = Vec::new();
    for &family in &spec.families {
        for &n in &spec.sizes {
            for trial in 0..spec.trials {
                let seed = spec.trial_seed(trial);
                out.push((family.to_string(), seed, spec.generator(family, n, seed)?.generate()?));
            }
        }
    }
    Ok(out)
}

pub fn run_factor(spec: &ExperimentSpec, solve: bool) -> Result<Vec<FactorRow>, CliError> {
    spec.validate()?;
    let src = sources(spec)?;
    let mut jobs = Vec::new();
    for (i, _) in src.iter().enumerate() {
        for &k in &spec.strategies {
            jobs.push((i, k));
        }
    }
    Ok(jobs
        .into_par_iter()
        .map(|(i, strategy)| {
            let (source, seed, a) = &src[i];
            let result = (|| {
                let f = factorize(a, &spec.strategy(strategy), spec.track_growth, *seed)?;
                let growth = match &f.stats {
                    Some(s) => Some((element_growth(s)?, column_growth(s)?)),
                    None => None,
                };
                let relative_residual = if solve {
                    let b = rhs_gaussian(a.rows(), *seed);
                    Some(relative_residual(a, &f.solve(&b)?, &b)?)
                } else {
                    None
                };
                Ok(FactorOutcome {
                    growth,
                    backward_error: backward_error(a, &f)?,
                    max_multiplier: f.max_multiplier(),
                    singular: f.singular,
                    relative_residual,
                })
            })()
            .map_err(|e: gercp::LuError| e.to_string());
            FactorRow { source: source.clone(), n: a.rows(), strategy, seed: *seed, result }
        })
        .collect())
}

pub fn factor_table(rows: &[FactorRow], solve: bool) -> Table {
    let mut cols =
        vec!["source", "n", "strategy", "seed", "rho_elem", "rho_col", "backward_error", "max_multiplier", "singular"];
    if solve {
        cols.push("relative_residual");
    }
    let mut t = Table::new(&cols);
    for r in rows {
        let mut cells = vec![r.source.clone(), r.n.to_string(), r.strategy.to_string(), r.seed.to_string()];
        match &r.result {
            Ok(o) => {
                match o.growth {
                    Some((e, c)) => cells.extend([num(e), num(c)]),
                    None => cells.extend(["untracked".to_string(), "untracked".to_string()]),
                }
                cells.extend([num(o.backward_error), num(o.max_multiplier), o.singular.to_string()]);
                if solve {
                    cells.push(o.relative_residual.map_or_else(String::new, num));
                }
            }
            Err(e) => cells.extend(std::iter::repeat_n(format!("error:{e}"), cols.len() - 4)),
        }
        t.push(cells);
    }
    t
}
