//! Gaussian elimination with pluggable pivot rules.

mod blocked;
pub(crate) mod engine;
pub(crate) mod rules;

pub use rules::{pivot_complete, pivot_l2col, pivot_partial, pivot_rook, PartialPivot};

use crate::dense::{Factorization, Matrix};
use crate::error::{arg, Result};
use crate::sketch::{block_gercp_factorize, SketchConfig};
use engine::{run_unblocked, ClassicRule, LuState};
use std::fmt;
use std::str::FromStr;

/// Panel width used by the blocked drivers unless told otherwise.
pub const DEFAULT_BLOCK_SIZE: usize = 64;

/// Work counters accumulated during a factorization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PivotCounters {
    /// Magnitude comparisons made by pivot searches.
    pub comparisons: u64,
    /// Matrix entries moved by row interchanges (`n` per interchange).
    pub row_entry_swaps: u64,
    /// Matrix entries moved by column interchanges (`n` per interchange).
    pub col_entry_swaps: u64,
    /// Rook scans that moved the candidate pivot.
    pub rook_alternations: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    /// No pivoting (`genp`).
    None,
    /// Row partial pivoting (`gepp`).
    Partial,
    /// Complete pivoting (`gecp`).
    Complete,
    /// Rook pivoting (`gerp`).
    Rook,
    /// Largest Euclidean column, then row partial pivoting (`ge2cp`).
    L2Complete,
    /// Randomized complete pivoting on sketched column norms (`gercp`).
    Randomized,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 6] = [
        StrategyKind::None,
        StrategyKind::Partial,
        StrategyKind::Complete,
        StrategyKind::Rook,
        StrategyKind::L2Complete,
        StrategyKind::Randomized,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::None => "genp",
            StrategyKind::Partial => "gepp",
            StrategyKind::Complete => "gecp",
            StrategyKind::Rook => "gerp",
            StrategyKind::L2Complete => "ge2cp",
            StrategyKind::Randomized => "gercp",
        }
    }

    /// Whether every multiplier is bounded by one in magnitude.
    pub fn is_top_heavy(self) -> bool {
        self != StrategyKind::None
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = crate::LuError;
    fn from_str(s: &str) -> Result<Self> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .map_or_else(|| arg(format!("unknown strategy '{s}'")), Ok)
    }
}

/// A pivoting strategy; the randomized one carries its sketch settings.
#[derive(Clone, Debug, PartialEq)]
pub struct PivotStrategy {
    kind: StrategyKind,
    config: Option<SketchConfig>,
}

impl PivotStrategy {
    /// Strategy of the given kind, with default sketch settings for `gercp`.
    pub fn new(kind: StrategyKind) -> Self {
        let config = (kind == StrategyKind::Randomized).then(SketchConfig::default);
        PivotStrategy { kind, config }
    }

    pub fn gercp(config: SketchConfig) -> Result<Self> {
        config.validate()?;
        Ok(PivotStrategy { kind: StrategyKind::Randomized, config: Some(config) })
    }

    pub fn gercp_default() -> Self {
        PivotStrategy::new(StrategyKind::Randomized)
    }

    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    pub fn sketch_config(&self) -> Option<&SketchConfig> {
        self.config.as_ref()
    }
}

impl FromStr for PivotStrategy {
    type Err = crate::LuError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(PivotStrategy::new(s.parse()?))
    }
}

/// Factors `a` with the given strategy.
///
/// With `track_growth` the result carries per-step Schur complement norms
/// (and, for `gercp`, a sketch audit); this costs an extra pass over the
/// trailing matrix per step and routes every strategy through the
/// unblocked loop. `seed` drives the Gaussian sketch of `gercp` and
/// overrides the seed stored in its configuration.
///
/// Partial and no pivoting run blocked with [`DEFAULT_BLOCK_SIZE`]; `gercp`
/// uses the block size of its configuration.
pub fn factorize(a: &Matrix, strategy: &PivotStrategy, track_growth: bool, seed: u64) -> Result<Factorization> {
    let nb = match &strategy.config {
        Some(c) => c.block_size,
        None => DEFAULT_BLOCK_SIZE,
    };
    factorize_blocked(a, strategy, track_growth, seed, nb)
}

/// [`factorize`] with an explicit panel width for the blocked drivers.
pub fn factorize_blocked(
    a: &Matrix,
    strategy: &PivotStrategy,
    track_growth: bool,
    seed: u64,
    block_size: usize,
) -> Result<Factorization> {
    if !a.is_square() || a.rows() == 0 {
        return arg(format!("factorize needs a nonempty square matrix, got {}x{}", a.rows(), a.cols()));
    }
    if block_size == 0 {
        return arg("block size must be at least 1");
    }
    let classic = match strategy.kind {
        StrategyKind::None => ClassicRule::None,
        StrategyKind::Partial => ClassicRule::Partial,
        StrategyKind::Complete => ClassicRule::Complete,
        StrategyKind::Rook => ClassicRule::Rook,
        StrategyKind::L2Complete => ClassicRule::L2,
        StrategyKind::Randomized => {
            let mut cfg = strategy.config.clone().unwrap_or_default();
            cfg.seed = seed;
            cfg.block_size = block_size;
            return block_gercp_factorize_tracked(a, &cfg, track_growth);
        }
    };
    let mut st = LuState::new(a, track_growth);
    match classic {
        ClassicRule::None | ClassicRule::Partial if !track_growth => {
            blocked::run_blocked(&mut st, classic == ClassicRule::Partial, block_size)?
        }
        _ => run_unblocked(&mut st, classic)?,
    }
    Ok(st.finish(None))
}

fn block_gercp_factorize_tracked(a: &Matrix, cfg: &SketchConfig, track: bool) -> Result<Factorization> {
    if track {
        crate::sketch::gercp_factorize_tracked(a, cfg, true)
    } else {
        block_gercp_factorize(a, cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::{backward_error, element_growth};
    use crate::genmat::{gaussian, rook_adversarial, wilkinson};
    use crate::LuError;
    use proptest::prelude::*;

    fn run(a: &Matrix, kind: StrategyKind, track: bool) -> Factorization {
        factorize(a, &PivotStrategy::new(kind), track, 1).unwrap()
    }

    #[test]
    fn strategy_names_round_trip() {
        for k in StrategyKind::ALL {
            assert_eq!(k.name().parse::<StrategyKind>().unwrap(), k);
        }
        assert!("lu".parse::<StrategyKind>().is_err());
        assert_eq!("GEPP".parse::<StrategyKind>().unwrap(), StrategyKind::Partial);
    }

    #[test]
    fn genp_instability_showcase() {
        let a = Matrix::from_rows(&[[1e-20, -1.0], [1.0, 1.0]]).unwrap();
        let f = run(&a, StrategyKind::None, false);
        let err = backward_error(&a, &f).unwrap();
        assert!((err - 1.0).abs() < 1e-12, "{err}");
        assert!(backward_error(&a, &run(&a, StrategyKind::Partial, false)).unwrap() < 1e-16);
    }

    #[test]
    fn genp_zero_pivot_reports_step() {
        let a = Matrix::from_rows(&[[1.0, 2.0, 0.0], [1.0, 2.0, 1.0], [0.0, 1.0, 1.0]]).unwrap();
        for track in [false, true] {
            let e = factorize(&a, &PivotStrategy::new(StrategyKind::None), track, 0).unwrap_err();
            assert_eq!(e, LuError::ZeroPivot { step: 1 });
        }
    }

    #[test]
    fn gepp_wilkinson_three() {
        let f = run(&wilkinson(3), StrategyKind::Partial, true);
        assert!(f.perm_r.is_identity());
        let u = f.u();
        assert_eq!((u[(0, 0)], u[(1, 1)], u[(2, 2)]), (1.0, 1.0, 4.0));
        assert_eq!(element_growth(f.stats.as_ref().unwrap()).unwrap(), 4.0);
    }

    #[test]
    fn gecp_first_pivot() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let f = run(&a, StrategyKind::Complete, false);
        assert_eq!(f.perm_r.swaps(), &[(0, 1)]);
        assert_eq!(f.perm_c.swaps(), &[(0, 1)]);
    }

    #[test]
    fn singular_inputs_are_flagged() {
        let z = Matrix::zeros(4, 4);
        for kind in [
            StrategyKind::Partial,
            StrategyKind::Complete,
            StrategyKind::Rook,
            StrategyKind::L2Complete,
            StrategyKind::Randomized,
        ] {
            for track in [false, true] {
                let f = run(&z, kind, track);
                assert!(f.singular, "{kind}");
                assert_eq!(f.lu, z);
            }
        }
        let rank1 = Matrix::from_fn(5, 5, |i, j| (i + 1) as f64 * (j + 2) as f64).unwrap();
        let f = run(&rank1, StrategyKind::Partial, false);
        assert!(f.singular);
        assert!(backward_error(&rank1, &f).unwrap() < 1e-15);
        assert!(matches!(f.solve(&[1.0; 5]), Err(LuError::Singular)));
    }

    #[test]
    fn rejects_non_square() {
        assert!(factorize(&Matrix::zeros(2, 3), &PivotStrategy::new(StrategyKind::Partial), false, 0).is_err());
        assert!(factorize(&Matrix::zeros(0, 0), &PivotStrategy::new(StrategyKind::Partial), false, 0).is_err());
    }

    #[test]
    fn comparison_counts() {
        for n in [1usize, 2, 7, 30, 100, 150] {
            let a = gaussian(n, n as u64);
            let pp = run(&a, StrategyKind::Partial, false).counters.comparisons;
            assert_eq!(pp, (n * (n - 1) / 2) as u64);
            let pp_tracked = run(&a, StrategyKind::Partial, true).counters.comparisons;
            assert_eq!(pp_tracked, pp);
            let cp = run(&a, StrategyKind::Complete, false).counters.comparisons;
            assert_eq!(cp, (n * (n + 1) * (2 * n + 1) / 6 - n) as u64);
        }
    }

    #[test]
    fn rook_adversarial_separation() {
        for n in [64usize, 100] {
            let adv = run(&rook_adversarial(n, 1.0).unwrap(), StrategyKind::Rook, false).counters;
            let id = run(&Matrix::identity(n), StrategyKind::Rook, false).counters;
            assert!(adv.comparisons >= 5 * id.comparisons, "{} vs {}", adv.comparisons, id.comparisons);
            assert!(adv.rook_alternations >= (2 * n - 2) as u64);
            assert_eq!(id.rook_alternations, 0);
        }
    }

    #[test]
    fn gepp_wilkinson_growth_is_exact() {
        for n in 1..=50 {
            let f = run(&wilkinson(n), StrategyKind::Partial, true);
            assert_eq!(element_growth(f.stats.as_ref().unwrap()).unwrap(), 2f64.powi(n as i32 - 1));
        }
    }

    #[test]
    fn blocked_and_unblocked_partial_agree() {
        let a = gaussian(150, 3);
        let strat = PivotStrategy::new(StrategyKind::Partial);
        let blocked = factorize_blocked(&a, &strat, false, 0, 16).unwrap();
        let unblocked = run(&a, StrategyKind::Partial, true);
        assert_eq!(blocked.perm_r, unblocked.perm_r);
        let d = blocked.lu.data().iter().zip(unblocked.lu.data()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        assert!(d < 1e-12, "{d}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn top_heavy_and_small_backward_error(n in 1usize..40, seed in 0u64..10_000, kind_ix in 1usize..6) {
            let kind = StrategyKind::ALL[kind_ix];
            let a = gaussian(n, seed);
            for track in [false, true] {
                let f = run(&a, kind, track);
                prop_assert!(f.max_multiplier() <= 1.0 + 1e-15);
                let err = backward_error(&a, &f).unwrap();
                let mut bound = 100.0 * n as f64 * crate::EPS_MACH;
                if let Some(s) = &f.stats {
                    bound *= crate::diagnostics::column_growth(s).unwrap();
                }
                prop_assert!(err <= bound.max(1e-14), "{kind} n={n} err={err}");
            }
        }
    }
}
