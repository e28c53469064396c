//! Closed-form growth bounds. Every bound has a `ln_` form so that it stays
//! finite for large `n`; the plain form is its exponential and overflows to
//! infinity once the bound exceeds `f64::MAX`.

use crate::error::{arg, Result};

/// `ln` of `(2^{n-1}, 2^{n-1} / sqrt(n))`: element and column growth bounds
/// for partial pivoting.
pub fn ln_gepp_growth_bounds(n: usize) -> (f64, f64) {
    let nf = n.max(1) as f64;
    let e = (nf - 1.0) * std::f64::consts::LN_2;
    (e, e - 0.5 * nf.ln())
}

pub fn gepp_growth_bounds(n: usize) -> (f64, f64) {
    let e = ((n.max(1) - 1) as f64).exp2();
    (e, e / (n.max(1) as f64).sqrt())
}

/// `ln` of `sqrt(n) (2 · 3^{1/2} ⋯ n^{1/(n-1)})^{1/2}`, the complete pivoting bound.
pub fn ln_gecp_growth_bound(n: usize) -> f64 {
    let nf = n.max(1) as f64;
    let s: f64 = (2..=n).map(|k| (k as f64).ln() / (k - 1) as f64).sum();
    0.5 * nf.ln() + 0.5 * s
}

pub fn gecp_growth_bound(n: usize) -> f64 {
    ln_gecp_growth_bound(n).exp()
}

/// `ln` of the column growth bound of randomized complete pivoting,
/// `(1/g²) q √(e(n+1)) n^{1 + ln(√q / g)} n^{(ln n)/2}` with
/// `q = (1+ε)/(1-ε)`.
pub fn ln_gercp_growth_bound(n: usize, epsilon: f64, g: f64) -> Result<f64> {
    if n == 0 || !(0.0..1.0).contains(&epsilon) || !(g > 0.0 && g <= 1.0) {
        return arg("gercp bound needs n >= 1, epsilon in [0, 1), g in (0, 1]");
    }
    let nf = n as f64;
    let ln_q = (1.0 + epsilon).ln() - (1.0 - epsilon).ln();
    let ln_g = g.ln();
    let ln_n = nf.ln();
    Ok(ln_q - 2.0 * ln_g + 0.5 * (1.0 + (nf + 1.0).ln()) + ln_n * (1.0 + 0.5 * ln_q - ln_g) + 0.5 * ln_n * ln_n)
}

pub fn gercp_growth_bound(n: usize, epsilon: f64, g: f64) -> Result<f64> {
    ln_gercp_growth_bound(n, epsilon, g).map(f64::exp)
}

fn check_wilkinson_args(m: usize, t: f64) -> Result<()> {
    if m < 2 || !(t >= 0.0) || !t.is_finite() {
        return arg("wilkinson function needs m >= 2 and finite t >= 0");
    }
    Ok(())
}

/// `ln f(m, t)` with `f(m, t) = sqrt(∏_{k=2..m} (k + t)^{1/(k-1)})`.
pub fn ln_wilkinson_function(m: usize, t: f64) -> Result<f64> {
    check_wilkinson_args(m, t)?;
    Ok(0.5 * (2..=m).map(|k| (k as f64 + t).ln() / (k - 1) as f64).sum::<f64>())
}

pub fn wilkinson_function(m: usize, t: f64) -> Result<f64> {
    ln_wilkinson_function(m, t).map(f64::exp)
}

/// `ln` of `sqrt(e (t+2)(t+1)) m^{ln(m+t)/4} m^{ln((m+t)/m)/4} (t+1)^{ln(t+1)/4}`.
pub fn ln_wilkinson_function_bound(m: usize, t: f64) -> Result<f64> {
    check_wilkinson_args(m, t)?;
    let mf = m as f64;
    let (lm, lmt, lt1) = (mf.ln(), (mf + t).ln(), (t + 1.0).ln());
    Ok(0.5 * (1.0 + (t + 2.0).ln() + lt1) + 0.25 * lm * lmt + 0.25 * lm * (lmt - lm) + 0.25 * lt1 * lt1)
}

pub fn wilkinson_function_bound(m: usize, t: f64) -> Result<f64> {
    ln_wilkinson_function_bound(m, t).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn partial_pivoting_bounds() {
        assert_eq!(gepp_growth_bounds(4), (8.0, 4.0));
        assert_eq!(gepp_growth_bounds(1), (1.0, 1.0));
        let (e, _) = ln_gepp_growth_bounds(1_000_000);
        assert!(e.is_finite() && gepp_growth_bounds(2000).0.is_infinite());
    }

    #[test]
    fn complete_pivoting_bound() {
        assert_eq!(gecp_growth_bound(1), 1.0);
        let want = 3f64.sqrt() * (2.0 * 3f64.sqrt()).sqrt();
        assert_relative_eq!(gecp_growth_bound(3), want, max_relative = 1e-14);
        assert_relative_eq!(gecp_growth_bound(3), 3.224, max_relative = 1e-3);
        assert_relative_eq!(gecp_growth_bound(2), 2.0, max_relative = 1e-15);
    }

    #[test]
    fn randomized_bound_values() {
        // ε = 0, g = 1: √(101 e) · 100 · 100^{(ln 100)/2}.
        let l100 = 100f64.ln();
        let want = (0.5 * (101f64.ln() + 1.0) + l100 + 0.5 * l100 * l100).exp();
        let got = gercp_growth_bound(100, 0.0, 1.0).unwrap();
        assert_relative_eq!(got, want, max_relative = 1e-13);
        assert!((got / 6.7e7 - 1.0).abs() < 0.01);
        // The leading factor is 1 for g = 1, ε = 0; n = 1 leaves √(2e).
        assert_relative_eq!(
            gercp_growth_bound(1, 0.0, 1.0).unwrap(),
            (2.0 * std::f64::consts::E).sqrt(),
            max_relative = 1e-14
        );
        assert!(gercp_growth_bound(200, 0.5, 1.0).unwrap() > gercp_growth_bound(100, 0.5, 1.0).unwrap());
        assert!(gercp_growth_bound(100, 0.5, 0.5).unwrap() > gercp_growth_bound(100, 0.5, 1.0).unwrap());
        assert!(gercp_growth_bound(10, 1.0, 1.0).is_err());
        assert!(gercp_growth_bound(10, 0.5, 0.0).is_err());
        assert!(gercp_growth_bound(0, 0.5, 1.0).is_err());
    }

    #[test]
    fn log_forms_monotone_and_finite() {
        let ns = [1usize, 2, 10, 100, 1_000, 10_000, 100_000, 1_000_000];
        for w in ns.windows(2) {
            let (a, b) = (w[0], w[1]);
            assert!(ln_gepp_growth_bounds(b).0 > ln_gepp_growth_bounds(a).0);
            assert!(ln_gecp_growth_bound(b) > ln_gecp_growth_bound(a));
            assert!(ln_gercp_growth_bound(b, 0.5, 0.9).unwrap() > ln_gercp_growth_bound(a, 0.5, 0.9).unwrap());
            assert!(ln_gecp_growth_bound(b).is_finite());
            assert!(ln_gercp_growth_bound(b, 0.5, 0.9).unwrap().is_finite());
        }
    }

    #[test]
    fn wilkinson_function_values() {
        assert_relative_eq!(wilkinson_function(2, 0.0).unwrap(), 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(wilkinson_function(3, 1.0).unwrap(), 6f64.sqrt(), max_relative = 1e-15);
        assert!(wilkinson_function(1, 0.0).is_err());
        assert!(wilkinson_function_bound(3, -1.0).is_err());
        // f(n, 0) · √n is the complete pivoting bound.
        for n in [2usize, 5, 40] {
            let lhs = ln_wilkinson_function(n, 0.0).unwrap() + 0.5 * (n as f64).ln();
            assert_relative_eq!(lhs, ln_gecp_growth_bound(n), max_relative = 1e-13);
        }
    }

    #[test]
    fn wilkinson_function_below_bound() {
        for t in [0.0, 1.0, 10.0, 100.0] {
            for m in 2..=200 {
                let f = ln_wilkinson_function(m, t).unwrap();
                let b = ln_wilkinson_function_bound(m, t).unwrap();
                assert!(f <= b, "m={m} t={t}: {f} > {b}");
            }
        }
    }
}
