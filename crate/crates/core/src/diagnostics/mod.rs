//! Growth factors, backward errors, closed-form growth bounds and numerical
//! checks of the auxiliary inequalities behind them.

mod bounds;
mod empirical;
mod lemmas;

pub use bounds::{
    gecp_growth_bound, gepp_growth_bounds, gercp_growth_bound, ln_gecp_growth_bound, ln_gepp_growth_bounds,
    ln_gercp_growth_bound, ln_wilkinson_function, ln_wilkinson_function_bound, wilkinson_function,
    wilkinson_function_bound,
};
pub use empirical::{
    binomial_slack, jl_empirical_check, jl_failure_bound, lipschitz_concentration_check, JlCheck, TailCheck,
};
pub use lemmas::{
    improper_integral_bound, improper_integral_check, special_b, special_b_inverse, telescoping_check,
    verify_special_inverse,
};

use crate::dense::{norm_one_inf, op_norms, Factorization, Matrix};
use crate::error::{arg, LuError, Result};

/// Per-step norms of the Schur complements `S_0 = A, S_1, ...`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GrowthStats {
    /// `‖S_k‖_{1,∞}`, the largest absolute entry, recorded before step `k`.
    pub per_step_max_entry: Vec<f64>,
    /// `‖S_k‖_{1,2}`, the largest column norm, recorded before step `k`.
    pub per_step_max_colnorm: Vec<f64>,
    pub input_max_entry: f64,
    pub input_max_colnorm: f64,
}

fn ratio(steps: &[f64], input: f64) -> Result<f64> {
    if input == 0.0 || steps.is_empty() {
        return Err(LuError::UndefinedGrowth);
    }
    Ok(steps.iter().copied().fold(0.0, f64::max) / input)
}

/// `max_k ‖S_k‖_{1,∞} / ‖A‖_{1,∞}`.
pub fn element_growth(stats: &GrowthStats) -> Result<f64> {
    ratio(&stats.per_step_max_entry, stats.input_max_entry)
}

/// `max_k ‖S_k‖_{1,2} / ‖A‖_{1,2}`.
pub fn column_growth(stats: &GrowthStats) -> Result<f64> {
    ratio(&stats.per_step_max_colnorm, stats.input_max_colnorm)
}

/// `‖A - P_r^T L U P_c^T‖_{1,∞} / ‖A‖_{1,∞}`, using the max-entry norm.
pub fn backward_error(a: &Matrix, f: &Factorization) -> Result<f64> {
    if a.rows() != f.lu.rows() || a.cols() != f.lu.cols() {
        return arg("matrix and factorization shapes differ");
    }
    let na = norm_one_inf(a)?;
    if na == 0.0 {
        return arg("backward error of a zero matrix is undefined");
    }
    let rec = f.reconstruct();
    let diff = a.data().iter().zip(rec.data()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    Ok(diff / na)
}

/// `‖A x - b‖_∞ / (‖A‖_∞ ‖x‖_∞)`.
pub fn relative_residual(a: &Matrix, x: &[f64], b: &[f64]) -> Result<f64> {
    if b.len() != a.rows() {
        return arg("right-hand side length differs from the row count");
    }
    let ax = a.matvec(x)?;
    let xn = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if xn == 0.0 {
        return arg("relative residual needs a nonzero solution vector");
    }
    let (_, an) = op_norms(a)?;
    let r = ax.iter().zip(b).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
    Ok(r / (an * xn))
}
