//! Monte Carlo checks of Gaussian concentration bounds.

use crate::dense::nrm2;
use crate::error::{arg, Result};
use crate::rng::{fill_normal, stream, Stream};

/// Three binomial standard deviations at success probability `p`.
pub fn binomial_slack(p: f64, trials: usize) -> f64 {
    let p = p.clamp(0.0, 1.0);
    3.0 * (p * (1.0 - p) / trials as f64).sqrt()
}

/// `2 exp(-(ε² - ε³) r / 4)`: chance that a Gaussian sketch with `r` rows
/// distorts the squared norm of a fixed vector by more than `ε`.
pub fn jl_failure_bound(r: usize, epsilon: f64) -> f64 {
    2.0 * (-(epsilon * epsilon - epsilon.powi(3)) * r as f64 / 4.0).exp()
}

/// Outcome of [`jl_empirical_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct JlCheck {
    pub violation_fraction: f64,
    pub per_trial_bound: f64,
    /// Bound plus binomial slack; the check passes at or below it.
    pub allowed: f64,
}

impl JlCheck {
    pub fn passed(&self) -> bool {
        self.violation_fraction <= self.allowed
    }
}

/// Draws a fixed unit vector `x ∈ R^d`, then a fresh `r x d` Gaussian `Ω`
/// per trial, and counts trials with `|‖Ωx‖²/r - 1| > ε`.
pub fn jl_empirical_check(d: usize, r: usize, epsilon: f64, trials: usize, seed: u64) -> Result<JlCheck> {
    if d == 0 || r == 0 || trials == 0 || !(epsilon > 0.0 && epsilon < 1.0) {
        return arg("jl check needs d, r, trials >= 1 and epsilon in (0, 1)");
    }
    let mut x = vec![0.0; d];
    fill_normal(&mut stream(seed, Stream::Check), &mut x);
    let nx = nrm2(&x);
    if nx == 0.0 {
        x[0] = 1.0;
    } else {
        x.iter_mut().for_each(|v| *v /= nx);
    }
    let mut rng = stream(seed, Stream::Sketch);
    let mut row = vec![0.0; d];
    let mut bad = 0usize;
    for _ in 0..trials {
        let mut sq = 0.0;
        for _ in 0..r {
            fill_normal(&mut rng, &mut row);
            let y: f64 = row.iter().zip(&x).map(|(a, b)| a * b).sum();
            sq += y * y;
        }
        if (sq / r as f64 - 1.0).abs() > epsilon {
            bad += 1;
        }
    }
    let p = jl_failure_bound(r, epsilon);
    Ok(JlCheck {
        violation_fraction: bad as f64 / trials as f64,
        per_trial_bound: p,
        allowed: p.min(1.0) + binomial_slack(p, trials),
    })
}

/// One tail level of [`lipschitz_concentration_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct TailCheck {
    pub t: f64,
    pub exceedance: f64,
    /// `exp(-t²/2)`.
    pub bound: f64,
    pub allowed: f64,
}

impl TailCheck {
    pub fn passed(&self) -> bool {
        self.exceedance <= self.allowed
    }
}

/// Fraction of `r x n` Gaussian matrices with `‖G‖_F ≥ sqrt(r n) + t`, for
/// `t = 0, 1, 2, 3`, against `exp(-t²/2)`.
pub fn lipschitz_concentration_check(r: usize, n: usize, trials: usize, seed: u64) -> Result<Vec<TailCheck>> {
    if r == 0 || n == 0 || trials == 0 {
        return arg("concentration check needs r, n, trials >= 1");
    }
    let ts = [0.0, 1.0, 2.0, 3.0];
    let mean_bound = ((r * n) as f64).sqrt();
    let mut rng = stream(seed, Stream::Check);
    let mut g = vec![0.0; r * n];
    let mut hits = [0usize; 4];
    for _ in 0..trials {
        fill_normal(&mut rng, &mut g);
        let f = nrm2(&g);
        for (h, t) in hits.iter_mut().zip(ts) {
            if f >= mean_bound + t {
                *h += 1;
            }
        }
    }
    Ok(ts
        .iter()
        .zip(hits)
        .map(|(&t, h)| {
            let bound = (-t * t / 2.0).exp();
            TailCheck { t, exceedance: h as f64 / trials as f64, bound, allowed: bound + binomial_slack(bound, trials) }
        })
        .collect())
}
