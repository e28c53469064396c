//! The `theory-check` command: numeric checks of the identities and
//! inequalities behind the growth bounds.

use crate::table::{num, Table};
use gercp::diagnostics::{
    improper_integral_check, jl_empirical_check, lipschitz_concentration_check, ln_wilkinson_function,
    ln_wilkinson_function_bound, telescoping_check, verify_special_inverse,
};
use gercp::Result;

/// Sizes for the closed-form inverse check.
pub const SPECIAL_INVERSE_SIZES: [usize; 9] = [1, 2, 3, 5, 10, 50, 100, 250, 500];
pub const SPECIAL_INVERSE_TOL: f64 = 1e-12;
pub const TELESCOPING_TOL: f64 = 1e-14;
/// Grid of the Wilkinson function check: every `m` in `2..=WILKINSON_M_MAX` at each `t`.
pub const WILKINSON_M_MAX: usize = 1000;
pub const WILKINSON_T: [f64; 9] = [0.0, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0, 1000.0];
pub const INTEGRAL_C: [f64; 4] = [2.0, std::f64::consts::E, 10.0, 100.0];
pub const MC_TRIALS: usize = 4000;

/// One verified statement: `value` is compared with `bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckRow {
    pub check: &'static str,
    pub param: String,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

fn row(check: &'static str, param: String, value: f64, bound: f64) -> CheckRow {
    CheckRow { check, param, value, bound, passed: value <= bound }
}

fn telescoping_pairs() -> Vec<(u64, u64)> {
    let mut v = Vec::new();
    for r in [1u64, 2, 3, 5, 10, 50, 100] {
        for q in [r + 1, 2 * r, 10 * r, 1000, 100_000] {
            if q > r {
                v.push((r, q));
            }
        }
    }
    v
}

/// Runs every check; Monte Carlo checks draw from `seed`.
pub fn run_theory_check(seed: u64) -> Result<Vec<CheckRow>> {
    let mut out = Vec::new();
    for n in SPECIAL_INVERSE_SIZES {
        out.push(row("special_inverse", format!("n={n}"), verify_special_inverse(n), SPECIAL_INVERSE_TOL));
    }
    for (r, q) in telescoping_pairs() {
        out.push(row("telescoping", format!("r={r};q={q}"), telescoping_check(r, q)?, TELESCOPING_TOL));
    }
    // Worst log-margin ln f(m, t) - ln bound(m, t) over the m grid, against 0.
    for t in WILKINSON_T {
        let mut worst = f64::NEG_INFINITY;
        for m in 2..=WILKINSON_M_MAX {
            worst = worst.max(ln_wilkinson_function(m, t)? - ln_wilkinson_function_bound(m, t)?);
        }
        out.push(row("wilkinson_function", format!("t={t};m=2..{WILKINSON_M_MAX}"), worst, 0.0));
    }
    for c in INTEGRAL_C {
        let (v, b) = improper_integral_check(c)?;
        out.push(row("improper_integral", format!("c={c}"), v, b));
    }
    for t in lipschitz_concentration_check(8, 16, MC_TRIALS, seed)? {
        out.push(row("lipschitz_tail", format!("r=8;n=16;t={}", t.t), t.exceedance, t.allowed));
    }
    for r in [1usize, 4, 16, 64, 400] {
        let c = jl_empirical_check(100, r, 0.5, MC_TRIALS, seed.wrapping_add(r as u64))?;
        out.push(row("jl_violation", format!("d=100;r={r};eps=0.5"), c.violation_fraction, c.allowed));
    }
    Ok(out)
}

pub fn theory_table(rows: &[CheckRow]) -> Table {
    let mut t = Table::new(&["check", "param", "value", "bound", "passed"]);
    for r in rows {
        t.push(vec![r.check.into(), r.param.clone(), num(r.value), num(r.bound), r.passed.to_string()]);
    }
    t
}
