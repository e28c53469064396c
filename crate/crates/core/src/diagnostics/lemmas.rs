//! Numerical checks of small identities and inequalities used by the growth
//! analysis.

use crate::dense::Matrix;
use crate::error::{arg, Result};

/// Unit upper triangular `B` with `b_ij = -1/(n - i)` above the diagonal
/// (zero-based `i`), so row `i` carries `-1/(n - i)`.
pub fn special_b(n: usize) -> Matrix {
    let mut b = Matrix::identity(n);
    for j in 0..n {
        for i in 0..j {
            b[(i, j)] = -1.0 / (n - i) as f64;
        }
    }
    b
}

/// Closed-form inverse of [`special_b`]: unit upper triangular with
/// `c_ij = 1/(n - j + 1)` above the diagonal (zero-based `j`).
pub fn special_b_inverse(n: usize) -> Matrix {
    let mut c = Matrix::identity(n);
    for j in 0..n {
        for i in 0..j {
            c[(i, j)] = 1.0 / (n - j + 1) as f64;
        }
    }
    c
}

/// `‖B C - I‖_{1,∞}` for the pair above.
pub fn verify_special_inverse(n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = special_b(n).matmul(&special_b_inverse(n)).expect("square factors");
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            let id = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((p[(i, j)] - id).abs());
        }
    }
    worst
}

/// `|1/r - 1/q - Σ_{j=r}^{q-1} 1/((j+1) j)|`.
pub fn telescoping_check(r: u64, q: u64) -> Result<f64> {
    if !(q > r && r > 0) {
        return arg(format!("telescoping check needs q > r > 0, got r = {r}, q = {q}"));
    }
    // Smallest terms first.
    let sum: f64 = (r..q).rev().map(|j| 1.0 / ((j + 1) as f64 * j as f64)).sum();
    Ok((1.0 / r as f64 - 1.0 / q as f64 - sum).abs())
}

/// `ln²(c)/2 + ln(c) + 1`.
pub fn improper_integral_bound(c: f64) -> f64 {
    let l = c.ln();
    0.5 * l * l + l + 1.0
}

/// `∫_1^∞ c ln(x) / (x (x + c)) dx` by quadrature, with its upper bound.
///
/// With `x = 1/(1-u)` the integral becomes
/// `∫_0^1 -c ln(1-u) / (1 + c(1-u)) du`, whose only singularity is the
/// integrable logarithm at `u = 1`; a double exponential rule handles it.
pub fn improper_integral_check(c: f64) -> Result<(f64, f64)> {
    if !(c > 1.0) || !c.is_finite() {
        return arg(format!("improper integral check needs finite c > 1, got {c}"));
    }
    let bound = improper_integral_bound(c);
    let f = |u: f64| {
        let v = 1.0 - u;
        if v <= 0.0 {
            0.0
        } else {
            -c * v.ln() / (1.0 + c * v)
        }
    };
    let out = quadrature::double_exponential::integrate(f, 0.0, 1.0, 1e-12 * bound);
    Ok((out.integral, bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `Li₂(-c)` for `c > 1` through `Li₂(-x) = -π²/6 - ln²(x)/2 - Li₂(-1/x)`.
    fn dilog_neg(c: f64) -> f64 {
        let z = -1.0 / c;
        let mut s = 0.0;
        let mut p = 1.0;
        for k in 1..2000 {
            p *= z;
            s += p / (k * k) as f64;
        }
        -std::f64::consts::PI.powi(2) / 6.0 - 0.5 * c.ln().powi(2) - s
    }

    #[test]
    fn special_inverse_small() {
        let c = special_b_inverse(3);
        let want = Matrix::from_rows(&[[1.0, 1.0 / 3.0, 0.5], [0.0, 1.0, 0.5], [0.0, 0.0, 1.0]]).unwrap();
        assert_eq!(c, want);
        assert_eq!(special_b(3)[(0, 1)], -1.0 / 3.0);
        assert_eq!(special_b(3)[(1, 2)], -0.5);
        assert!(verify_special_inverse(3) <= 1e-15);
        assert_eq!(special_b_inverse(1), Matrix::identity(1));
        assert_eq!(verify_special_inverse(1), 0.0);
    }

    #[test]
    fn special_inverse_large() {
        assert!(verify_special_inverse(100) <= 1e-13);
        for n in [250, 500] {
            assert!(verify_special_inverse(n) <= 1e-12);
        }
    }

    #[test]
    fn telescoping() {
        assert!(telescoping_check(2, 4).unwrap() < 1e-16);
        assert!(telescoping_check(1, 2).unwrap() < 1e-16);
        assert!(telescoping_check(7, 1000).unwrap() <= 1e-14);
        assert!(telescoping_check(1, 100_000).unwrap() <= 1e-14);
        assert!(telescoping_check(4, 2).is_err());
        assert!(telescoping_check(0, 2).is_err());
    }

    #[test]
    fn integral_bounds() {
        let (v, b) = improper_integral_check(std::f64::consts::E).unwrap();
        assert!((b - 2.5).abs() < 1e-15 && v < b);
        let (v, b) = improper_integral_check(10.0).unwrap();
        assert!((b - 5.9535).abs() < 1e-4 && v < b);
        let (v, b) = improper_integral_check(1.0 + 1e-9).unwrap();
        assert!((b - 1.0).abs() < 1e-8 && v > 0.0 && v < b);
        assert!(improper_integral_check(1.0).is_err());
        assert!(improper_integral_check(f64::NAN).is_err());
    }

    #[test]
    fn integral_matches_dilogarithm() {
        for c in [2.0, std::f64::consts::E, 10.0, 1e3] {
            let (v, _) = improper_integral_check(c).unwrap();
            let want = -dilog_neg(c);
            assert!((v - want).abs() <= 1e-9 * want, "c={c}: {v} vs {want}");
        }
    }
}
