//! Gaussian sketching of the Schur complement and randomized complete
//! pivoting.
//!
//! A fixed `r x n` Gaussian matrix `Ω` is drawn once and `Ψ = Ω A` is formed.
//! After every elimination step the live columns of `Ψ` equal `Ω_R S_k`, where
//! `S_k` is the current Schur complement and `Ω_R` the columns of `Ω` matching
//! its rows (they are permuted along with the row interchanges). Column norms
//! of `Ψ` then estimate column norms of `S_k` at `O(r)` cost per column.

mod block;
mod scalar;

pub use block::block_gercp_factorize;
pub(crate) use scalar::gercp_factorize_tracked;
pub use scalar::{gercp_factorize, gercp_factorize_observed, StepEvent, StepPhase};

use crate::dense::kernels::{gemm, View};
use crate::dense::{axpy, dot, norm_one_two, nrm2, rank1_sumsq, Matrix};
use crate::error::{arg, LuError, Result};
use crate::pivot::PivotCounters;
use crate::rng::{fill_normal, stream, Stream};
use crate::EPS_MACH;
use std::fmt::Write as _;

/// Sketch size used when none is configured, capped at `n`.
pub const DEFAULT_SAMPLING_DIM: usize = 64;

/// Parameters of randomized complete pivoting.
#[derive(Clone, Debug, PartialEq)]
pub struct SketchConfig {
    /// Rows of `Ω`; `None` means `min(n, 64)`.
    pub r: Option<usize>,
    /// Column threshold in `(0, 1]`; 1 is plain argmax selection.
    pub g: f64,
    /// JL distortion in `(0, 1)`.
    pub epsilon: f64,
    /// Failure probability in `(0, 1)`.
    pub delta: f64,
    /// Panel width of the blocked driver.
    pub block_size: usize,
    /// Always use the division-free sketch update.
    pub force_stable_update: bool,
    pub seed: u64,
}

impl Default for SketchConfig {
    fn default() -> Self {
        SketchConfig { r: None, g: 1.0, epsilon: 0.5, delta: 0.01, block_size: 64, force_stable_update: false, seed: 0 }
    }
}

impl SketchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.g > 0.0 && self.g <= 1.0) {
            return arg(format!("g must lie in (0, 1], got {}", self.g));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return arg(format!("epsilon must lie in (0, 1), got {}", self.epsilon));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return arg(format!("delta must lie in (0, 1), got {}", self.delta));
        }
        if self.r == Some(0) {
            return arg("r must be at least 1");
        }
        if self.block_size == 0 {
            return arg("block_size must be at least 1");
        }
        Ok(())
    }

    /// Sketch rows used for an `n x n` input.
    ///
    /// An explicit `r` larger than `n` is kept as is (with a warning): the
    /// norm-preservation guarantee depends on `r` alone, so shrinking it
    /// would weaken the sketch.
    pub fn effective_r(&self, n: usize) -> usize {
        match self.r {
            Some(r) => {
                if r > n {
                    log::warn!("sketch dimension r = {r} exceeds n = {n}");
                }
                r
            }
            None => n.clamp(1, DEFAULT_SAMPLING_DIM),
        }
    }

    /// Serializes as `key = value` lines.
    pub fn to_kv_string(&self) -> String {
        let mut s = String::new();
        match self.r {
            Some(r) => writeln!(s, "r = {r}").unwrap(),
            None => writeln!(s, "r = auto").unwrap(),
        }
        writeln!(s, "g = {}", self.g).unwrap();
        writeln!(s, "epsilon = {}", self.epsilon).unwrap();
        writeln!(s, "delta = {}", self.delta).unwrap();
        writeln!(s, "block_size = {}", self.block_size).unwrap();
        writeln!(s, "force_stable_update = {}", self.force_stable_update).unwrap();
        writeln!(s, "seed = {}", self.seed).unwrap();
        s
    }

    /// Parses `key = value` lines on top of the defaults. Blank lines and
    /// lines starting with `#` are ignored; unknown keys are errors.
    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut c = SketchConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| LuError::Argument(format!("line {}: expected key = value", lineno + 1)))?;
            c.set(key.trim(), value.trim())?;
        }
        c.validate()?;
        Ok(c)
    }

    /// Sets one field from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| LuError::Argument(format!("bad value '{v}' for {key}")))
        }
        match key {
            "r" => self.r = if value == "auto" { None } else { Some(parse(key, value)?) },
            "g" => self.g = parse(key, value)?,
            "epsilon" => self.epsilon = parse(key, value)?,
            "delta" => self.delta = parse(key, value)?,
            "block_size" => self.block_size = parse(key, value)?,
            "force_stable_update" => self.force_stable_update = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            _ => return arg(format!("unknown sketch config key '{key}'")),
        }
        Ok(())
    }
}

/// Smallest integer `r` strictly above `4 / (ε² - ε³) ln(n (n + 1) / (2 δ))`.
///
/// With that many rows every one of the `n (n + 1) / 2` Schur complement
/// columns met during elimination keeps its norm within `sqrt(1 ± ε)` with
/// probability at least `1 - δ`.
pub fn required_sampling_dim(n: usize, epsilon: f64, delta: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0) || n == 0 {
        return arg("required_sampling_dim needs n >= 1, epsilon and delta in (0, 1)");
    }
    let nf = n as f64;
    let bound = 4.0 / (epsilon * epsilon - epsilon.powi(3)) * (nf * (nf + 1.0) / (2.0 * delta)).ln();
    Ok((bound.floor() as usize + 1).max(1))
}

/// Which sketch update formula was applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdatePath {
    /// Uses `Ψ(:,k) / U(k,k)`.
    Fast,
    /// Division-free update through `Ω` and the multipliers.
    Stable,
}

/// `Ω`, the running sketch `Ψ` and the step counter.
///
/// Squared column norms of `Ψ` are cached and refreshed by every update.
#[derive(Clone, Debug)]
pub struct SketchState {
    omega: Matrix,
    psi: Matrix,
    norms2: Vec<f64>,
    psi1_norm: f64,
    k: usize,
}

/// Draws `Ω` from `config.seed` and forms `Ψ = Ω A`.
pub fn init_sketch(a: &Matrix, config: &SketchConfig) -> Result<SketchState> {
    config.validate()?;
    if !a.is_square() || a.is_empty() {
        return arg("sketching needs a nonempty square matrix");
    }
    let r = config.effective_r(a.rows());
    let mut omega = vec![0.0; r * a.rows()];
    fill_normal(&mut stream(config.seed, Stream::Sketch), &mut omega);
    SketchState::with_omega(a, Matrix::from_raw(r, a.rows(), omega))
}

impl SketchState {
    /// Sketch of `a` with a caller-supplied `Ω`.
    pub fn with_omega(a: &Matrix, omega: Matrix) -> Result<Self> {
        if omega.cols() != a.rows() || !a.is_square() || omega.rows() == 0 {
            return arg("omega must be r x n for an n x n matrix");
        }
        let mut psi = Matrix::zeros(omega.rows(), a.cols());
        gemm(1.0, View::whole(&omega), View::whole(a), 0.0, &mut psi);
        let psi1_norm = norm_one_two(&psi)?;
        let norms2 = (0..psi.cols()).map(|j| dot(psi.col(j), psi.col(j))).collect();
        Ok(SketchState { omega, psi, norms2, psi1_norm, k: 0 })
    }

    pub fn omega(&self) -> &Matrix {
        &self.omega
    }

    pub fn psi(&self) -> &Matrix {
        &self.psi
    }

    /// Largest column norm of the initial sketch.
    pub fn psi1_norm(&self) -> f64 {
        self.psi1_norm
    }

    /// First live column.
    pub fn step(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.omega.rows()
    }

    /// The sketched matrix was zero.
    pub fn is_degenerate(&self) -> bool {
        self.psi1_norm == 0.0
    }

    /// Norms of the live sketch columns `k..n`.
    pub fn column_norms(&self, k: usize) -> Vec<f64> {
        (k..self.psi.cols()).map(|j| nrm2(self.psi.col(j))).collect()
    }

    /// Thresholded argmax over sketched column norms: with `ℓ` the first
    /// column of largest norm, keeps `k` if `‖Ψ(:,k)‖ ≥ g ‖Ψ(:,ℓ)‖` and
    /// returns `ℓ` otherwise.
    pub fn select_pivot_column(&self, k: usize, g: f64) -> usize {
        self.select_counted(k, g, &mut PivotCounters::default())
    }

    pub(crate) fn select_counted(&self, k: usize, g: f64, c: &mut PivotCounters) -> usize {
        let live = &self.norms2[k..];
        c.comparisons += (live.len() - 1) as u64;
        let first = live[0];
        let (mut best, mut val) = (0, first);
        for (j, &v) in live.iter().enumerate().skip(1) {
            if v > val {
                best = j;
                val = v;
            }
        }
        if first >= g * g * val {
            k
        } else {
            k + best
        }
    }

    /// Follows a column interchange of the factored matrix.
    pub fn swap_columns(&mut self, k: usize, alpha: usize) {
        self.psi.swap_cols(k, alpha);
        self.norms2.swap(k, alpha);
    }

    /// Follows a row interchange of the factored matrix: `Ω` tracks rows.
    pub fn swap_rows(&mut self, k: usize, beta: usize) {
        self.omega.swap_cols(k, beta);
    }

    fn check_step(&self, k: usize, lcol: usize, urow: usize) -> Result<()> {
        let n = self.psi.cols();
        if k != self.k || k >= n || lcol != n - k - 1 || urow != n - k - 1 {
            return Err(LuError::Invariant(format!("sketch at step {} asked to update step {k}", self.k)));
        }
        Ok(())
    }

    /// `Ψ(:,k+1:) -= w U(k,k+1:)` and refresh the cached norms.
    fn rank1(&mut self, k: usize, w: &[f64], urow: &[f64], scale: f64) {
        let r = self.r();
        rank1_sumsq(&mut self.psi.data_mut()[(k + 1) * r..], scale, w, urow, &mut self.norms2[k + 1..]);
        self.k += 1;
    }

    /// Fast update from the pivot and `U(k,k+1:)`.
    pub(crate) fn fast_step(&mut self, k: usize, piv: f64, urow: &[f64]) -> Result<()> {
        self.check_step(k, urow.len(), urow.len())?;
        if piv == 0.0 {
            return Err(LuError::Argument(format!("fast sketch update with zero pivot at step {}", k + 1)));
        }
        let r = self.r();
        let w = self.psi.data()[k * r..(k + 1) * r].to_vec();
        self.rank1(k, &w, urow, 1.0 / piv);
        Ok(())
    }

    /// Stable update from `L(k+1:,k)` and `U(k,k+1:)`.
    pub(crate) fn stable_step(&mut self, k: usize, lcol: &[f64], urow: &[f64]) -> Result<()> {
        self.check_step(k, lcol.len(), urow.len())?;
        let mut w = self.omega.col(k).to_vec();
        for (i, &l) in (k + 1..).zip(lcol) {
            if l != 0.0 {
                axpy(&mut w, -l, self.omega.col(i));
            }
        }
        self.rank1(k, &w, urow, 1.0);
        Ok(())
    }

    /// `Ψ(:,k+1:) -= Ψ(:,k) U(k,k+1:) / U(k,k)`, reading `U` from the packed
    /// factor `lu`.
    pub fn update_fast(&mut self, lu: &Matrix, k: usize) -> Result<()> {
        let urow = packed_urow(lu, k)?;
        self.fast_step(k, lu[(k, k)], &urow)
    }

    /// `Ψ(:,k+1:) -= (Ω(:,k) + Ω(:,k+1:) L(k+1:,k)) U(k,k+1:)`.
    pub fn update_stable(&mut self, lu: &Matrix, k: usize) -> Result<()> {
        let urow = packed_urow(lu, k)?;
        self.stable_step(k, &lu.col(k)[k + 1..], &urow)
    }

    fn path_for(&self, piv: f64, force_stable: bool) -> UpdatePath {
        let piv = piv.abs();
        if !force_stable && piv != 0.0 && piv >= EPS_MACH.sqrt() * self.psi1_norm {
            UpdatePath::Fast
        } else {
            UpdatePath::Stable
        }
    }

    /// Fast path iff the pivot is at least `sqrt(ε_mach) ‖Ψ₁‖` in magnitude
    /// (and nonzero) and the stable path is not forced.
    pub fn choose_update(&self, lu: &Matrix, k: usize, force_stable: bool) -> UpdatePath {
        self.path_for(lu[(k, k)], force_stable)
    }

    /// Runs the update chosen by [`SketchState::choose_update`].
    pub fn apply_update(&mut self, lu: &Matrix, k: usize, force_stable: bool) -> Result<UpdatePath> {
        let urow = packed_urow(lu, k)?;
        self.apply_parts(k, lu[(k, k)], &lu.col(k)[k + 1..], &urow, force_stable)
    }

    pub(crate) fn apply_parts(
        &mut self,
        k: usize,
        piv: f64,
        lcol: &[f64],
        urow: &[f64],
        force_stable: bool,
    ) -> Result<UpdatePath> {
        let path = self.path_for(piv, force_stable);
        match path {
            UpdatePath::Fast => self.fast_step(k, piv, urow)?,
            UpdatePath::Stable => self.stable_step(k, lcol, urow)?,
        }
        Ok(path)
    }
}

fn packed_urow(lu: &Matrix, k: usize) -> Result<Vec<f64>> {
    if k >= lu.rows() || !lu.is_square() {
        return Err(LuError::Invariant(format!("no pivot row {k} in a {}x{} factor", lu.rows(), lu.cols())));
    }
    Ok((k + 1..lu.cols()).map(|j| lu[(k, j)]).collect())
}

/// Sketch quality at one elimination step of a tracked run.
#[derive(Clone, Debug, PartialEq)]
pub struct SketchStepAudit {
    pub step: usize,
    /// The column was chosen from the sketch (rather than exact norms).
    pub sketched: bool,
    /// Extremes over nonzero Schur columns of `‖Ψ(:,j)‖² / (r ‖S_k(:,j)‖²)`.
    pub jl_min_ratio: f64,
    pub jl_max_ratio: f64,
    /// Exact norm of the chosen pivot column of `S_k`.
    pub pivot_colnorm: f64,
    /// Largest exact column norm of `S_k`.
    pub max_colnorm: f64,
}

/// Per-step sketch record of a tracked randomized factorization.
#[derive(Clone, Debug, PartialEq)]
pub struct SketchAudit {
    pub r: usize,
    pub steps: Vec<SketchStepAudit>,
}

impl SketchAudit {
    /// Whether some Schur column left the band `[1 - ε, 1 + ε]`.
    pub fn jl_violated(&self, epsilon: f64) -> bool {
        self.steps.iter().any(|s| s.jl_min_ratio < 1.0 - epsilon || s.jl_max_ratio > 1.0 + epsilon)
    }

    /// Largest `‖S_k‖_{1,2} / ‖S_k(:,α_k)‖` over steps with a nonzero pivot column.
    pub fn worst_selection_ratio(&self) -> f64 {
        self.steps.iter().filter(|s| s.pivot_colnorm > 0.0).map(|s| s.max_colnorm / s.pivot_colnorm).fold(1.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn two_by_two() -> (Matrix, Matrix) {
        (Matrix::from_rows(&[[2.0, 1.0], [4.0, 5.0]]).unwrap(), Matrix::from_rows(&[[1.0, 1.0]]).unwrap())
    }

    // LU of [[2,1],[4,5]] without pivoting: L21 = 2, U = [[2,1],[0,3]].
    fn packed() -> Matrix {
        Matrix::from_rows(&[[2.0, 1.0], [2.0, 3.0]]).unwrap()
    }

    #[test]
    fn sampling_dimension() {
        assert_eq!(required_sampling_dim(100, 0.5, 0.01).unwrap(), 421);
        assert_eq!(required_sampling_dim(1, 0.5, 0.99).unwrap(), 1);
        assert_eq!(required_sampling_dim(100, 0.5, 0.05).unwrap(), 369);
        assert!(required_sampling_dim(10, 1.0, 0.1).is_err());
        assert!(required_sampling_dim(10, 0.5, 0.0).is_err());
    }

    #[test]
    fn per_vector_anchor() {
        // A single vector with failure probability 1e-5 needs
        // r > 4/(ε²-ε³) ln(2/Δ) = 32 ln(2e5) ≈ 390.6, so 400 suffices.
        let r = 32.0 * (2.0f64 / 1e-5).ln();
        assert!(r > 390.0 && r < 400.0);
    }

    #[test]
    fn init_by_hand() {
        let (a, omega) = two_by_two();
        let s = SketchState::with_omega(&a, omega).unwrap();
        assert_eq!(s.psi().data(), &[6.0, 6.0]);
        assert_eq!(s.psi1_norm(), 6.0);
        let z = SketchState::with_omega(&Matrix::zeros(2, 2), Matrix::from_rows(&[[1.0, 1.0]]).unwrap()).unwrap();
        assert!(z.is_degenerate());
    }

    #[test]
    fn updates_by_hand() {
        let (a, omega) = two_by_two();
        let mut fast = SketchState::with_omega(&a, omega.clone()).unwrap();
        fast.update_fast(&packed(), 0).unwrap();
        assert_eq!(fast.psi()[(0, 1)], 3.0);
        let mut stable = SketchState::with_omega(&a, omega).unwrap();
        stable.update_stable(&packed(), 0).unwrap();
        assert_eq!(stable.psi()[(0, 1)], 3.0);
        assert_eq!(stable.step(), 1);
        assert!(stable.update_stable(&packed(), 0).is_err());
    }

    #[test]
    fn degenerate_updates_leave_sketch() {
        let (a, omega) = two_by_two();
        // U(0,1) = 0 kills the rank-1 term.
        let lu = Matrix::from_rows(&[[2.0, 0.0], [2.0, 3.0]]).unwrap();
        let mut s = SketchState::with_omega(&a, omega.clone()).unwrap();
        s.update_fast(&lu, 0).unwrap();
        assert_eq!(s.psi()[(0, 1)], 6.0);
        // Zero pivot refuses the fast path.
        let mut s = SketchState::with_omega(&a, omega).unwrap();
        let lu0 = Matrix::from_rows(&[[0.0, 1.0], [0.0, 3.0]]).unwrap();
        assert!(s.update_fast(&lu0, 0).is_err());
        assert_eq!(s.choose_update(&lu0, 0, false), UpdatePath::Stable);
        // Ω(:,k) = 0 and a zero multiplier column leave Ψ alone.
        let mut s = SketchState::with_omega(&a, Matrix::from_rows(&[[0.0, 1.0]]).unwrap()).unwrap();
        let before = s.psi()[(0, 1)];
        let lu = Matrix::from_rows(&[[2.0, 1.0], [0.0, 3.0]]).unwrap();
        s.update_stable(&lu, 0).unwrap();
        assert_eq!(s.psi()[(0, 1)], before);
    }

    #[test]
    fn selection_rule() {
        let a = Matrix::identity(2);
        // Ω = diag(3, 5) gives sketch column norms (3, 5).
        let s = SketchState::with_omega(&a, Matrix::from_rows(&[[3.0, 0.0], [0.0, 5.0]]).unwrap()).unwrap();
        assert_eq!(s.select_pivot_column(0, 1.0), 1);
        assert_eq!(s.select_pivot_column(0, 0.5), 0);
        let eq = SketchState::with_omega(&a, Matrix::identity(2)).unwrap();
        assert_eq!(eq.select_pivot_column(0, 1.0), 0);
    }

    #[test]
    fn update_choice() {
        let a = Matrix::identity(2);
        let s = SketchState::with_omega(&a, Matrix::from_rows(&[[1.0, 0.0]]).unwrap()).unwrap();
        assert_eq!(s.psi1_norm(), 1.0);
        let one = Matrix::identity(2);
        let tiny = Matrix::from_rows(&[[1e-12, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(s.choose_update(&one, 0, false), UpdatePath::Fast);
        assert_eq!(s.choose_update(&tiny, 0, false), UpdatePath::Stable);
        assert_eq!(s.choose_update(&one, 0, true), UpdatePath::Stable);
    }

    #[test]
    fn fast_and_stable_agree_on_random_input() {
        let a = crate::genmat::gaussian(20, 5);
        let cfg = SketchConfig { r: Some(5), seed: 9, ..SketchConfig::default() };
        let s0 = init_sketch(&a, &cfg).unwrap();
        // One GEPP step gives a valid packed state for step 0.
        let f = crate::factorize(&a, &crate::PivotStrategy::new(crate::StrategyKind::Partial), false, 0).unwrap();
        let mut s = s0.clone();
        for &(x, y) in f.perm_r.swaps().iter().take_while(|(x, _)| *x == 0) {
            s.swap_rows(x, y);
        }
        let mut work = a.clone();
        let p = f.perm_r.map()[0];
        work.swap_rows(0, p);
        let piv = work[(0, 0)];
        for i in 1..20 {
            work[(i, 0)] /= piv;
        }
        let (mut fast, mut stable) = (s.clone(), s);
        fast.update_fast(&work, 0).unwrap();
        stable.update_stable(&work, 0).unwrap();
        for j in 1..20 {
            for i in 0..5 {
                assert!((fast.psi()[(i, j)] - stable.psi()[(i, j)]).abs() <= 1e-12 * s0.psi1_norm());
            }
        }
    }

    #[test]
    fn config_text_round_trip() {
        let c = SketchConfig {
            r: Some(12),
            g: 0.75,
            epsilon: 0.25,
            delta: 0.05,
            block_size: 8,
            force_stable_update: true,
            seed: 42,
        };
        assert_eq!(SketchConfig::from_kv_str(&c.to_kv_string()).unwrap(), c);
        let d = SketchConfig::default();
        assert_eq!(SketchConfig::from_kv_str(&d.to_kv_string()).unwrap(), d);
        assert_eq!(SketchConfig::from_kv_str("# only a comment\n\n").unwrap(), d);
        assert!(SketchConfig::from_kv_str("rows = 3").is_err());
        assert!(SketchConfig::from_kv_str("g = 1.5").is_err());
        assert!(SketchConfig::from_kv_str("g").is_err());
        assert!(SketchConfig::from_kv_str("r = 0").is_err());
    }

    #[test]
    fn effective_r() {
        let c = SketchConfig::default();
        assert_eq!(c.effective_r(10), 10);
        assert_eq!(c.effective_r(1000), 64);
        assert_eq!(SketchConfig { r: Some(100), ..c }.effective_r(10), 100);
    }

    #[test]
    fn norm_preservation_frequency() {
        // Fixed unit vector, r = 400: ‖Ωx‖²/r stays in [0.5, 1.5].
        let d = 30;
        let x = Matrix::from_fn(d, d, |i, j| {
            if j == 0 {
                1.0 / (d as f64).sqrt()
            } else if i == j {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        let mut bad = 0;
        for seed in 0..300 {
            let cfg = SketchConfig { r: Some(400), seed, ..SketchConfig::default() };
            let s = init_sketch(&x, &cfg).unwrap();
            let ratio = nrm2(s.psi().col(0)).powi(2) / 400.0;
            if !(0.5..=1.5).contains(&ratio) {
                bad += 1;
            }
        }
        assert_eq!(bad, 0);
        assert_relative_eq!(nrm2(x.col(0)), 1.0, max_relative = 1e-15);
    }
}
