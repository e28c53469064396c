//! Test matrix generators. Every generator is a pure function of its
//! arguments; the random ones draw from a ChaCha stream seeded by `seed`.

use crate::dense::{nrm2, Matrix};
use crate::error::{arg, LuError, Result};
use crate::rng::{fill_normal, stream, Stream};
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Unit diagonal, `-1` below it, last column all ones.
pub fn wilkinson(n: usize) -> Matrix {
    let mut a = Matrix::identity(n);
    for j in 0..n {
        for i in j + 1..n {
            a[(i, j)] = -1.0;
        }
    }
    if n > 0 {
        a.col_mut(n - 1).iter_mut().for_each(|x| *x = 1.0);
    }
    a
}

/// `A = L + (1, ..., 1, 0)ᵀ e_nᵀ` with unit lower triangular
/// `L_ij = -u_iᵀ W_{i-1} ⋯ W_{j+1} v_j`.
///
/// `u_i`, `v_j` and `W_i` have uniform `(0, 1)` entries; vectors are scaled
/// to unit norm and each `W_i` by `1 / (sqrt(r) max_col_norm)`, which bounds
/// its spectral norm by 1. Hence `|L_ij| ≤ 1` and partial pivoting never
/// exchanges rows.
pub fn generalized_wilkinson(n: usize, r: usize, seed: u64) -> Result<Matrix> {
    if n < 2 || r == 0 {
        return arg("generalized wilkinson needs n >= 2 and r >= 1");
    }
    let mut rng = stream(seed, Stream::Matrix);
    let unit_vec = |rng: &mut rand_chacha::ChaCha8Rng| {
        let mut v: Vec<f64> = (0..r).map(|_| rng.random::<f64>()).collect();
        let s = nrm2(&v);
        v.iter_mut().for_each(|x| *x /= s);
        v
    };
    let us: Vec<Vec<f64>> = (0..n).map(|_| unit_vec(&mut rng)).collect();
    let vs: Vec<Vec<f64>> = (0..n).map(|_| unit_vec(&mut rng)).collect();
    let ws: Vec<Matrix> = (0..n)
        .map(|_| {
            let mut w = Matrix::from_raw(r, r, (0..r * r).map(|_| rng.random::<f64>()).collect());
            let s = (0..r).map(|j| nrm2(w.col(j))).fold(0.0, f64::max) * (r as f64).sqrt();
            w.data_mut().iter_mut().for_each(|x| *x /= s);
            w
        })
        .collect();
    Ok(gw_from_parts(n, &us, &vs, &ws))
}

/// The `r = 1`, `u = v = W = 1` member of the family, which is
/// [`wilkinson`] built through the generalized construction.
pub fn generalized_wilkinson_unit(n: usize) -> Result<Matrix> {
    if n < 2 {
        return arg("generalized wilkinson needs n >= 2");
    }
    let one = vec![vec![1.0]; n];
    let w = vec![Matrix::identity(1); n];
    Ok(gw_from_parts(n, &one, &one, &w))
}

fn gw_from_parts(n: usize, us: &[Vec<f64>], vs: &[Vec<f64>], ws: &[Matrix]) -> Matrix {
    let mut a = Matrix::identity(n);
    for j in 0..n - 1 {
        let mut t = vs[j].clone();
        for i in j + 1..n {
            a[(i, j)] = -us[i].iter().zip(&t).map(|(x, y)| x * y).sum::<f64>();
            if i + 1 < n {
                t = ws[i].matvec(&t).expect("square factor");
            }
        }
    }
    for i in 0..n - 1 {
        a[(i, n - 1)] += 1.0;
    }
    a
}

fn check_volterra(n: usize, c: f64, t: f64) -> Result<f64> {
    if n < 2 || !(c > 0.0) || !(t > 0.0) || !c.is_finite() || !t.is_finite() {
        return arg("volterra needs n >= 2 and finite c, T > 0");
    }
    Ok(c * t / (n - 1) as f64)
}

/// Trapezoid discretization of `x(t) - c ∫_0^t x(s) ds = f(t)` on `[0, T]`
/// with `n` nodes: lower triangular, `A(0,0) = 1`, `A(i,i) = 1 - ch/2`,
/// `A(i,0) = -ch/2` and `A(i,j) = -ch` for `0 < j < i`, `h = T/(n-1)`.
pub fn volterra(n: usize, c: f64, t: f64) -> Result<Matrix> {
    let ch = check_volterra(n, c, t)?;
    let mut a = Matrix::identity(n);
    for i in 1..n {
        a[(i, i)] = 1.0 - ch / 2.0;
        a[(i, 0)] = -ch / 2.0;
        for j in 1..i {
            a[(i, j)] = -ch;
        }
    }
    Ok(a)
}

/// [`volterra`] with its last column replaced by `-1` above the diagonal
/// and `1 - ch/2` on it, a coupling of every node to the final unknown.
///
/// Partial pivoting keeps the diagonal pivots and the last column grows by
/// roughly `1 + ch/(1 - ch/2)` per step.
pub fn volterra_bordered(n: usize, c: f64, t: f64) -> Result<Matrix> {
    let ch = check_volterra(n, c, t)?;
    let mut a = volterra(n, c, t)?;
    for i in 0..n - 1 {
        a[(i, n - 1)] = -1.0;
    }
    a[(n - 1, n - 1)] = 1.0 - ch / 2.0;
    Ok(a)
}

/// I.i.d. standard normal entries.
pub fn gaussian(n: usize, seed: u64) -> Matrix {
    let mut d = vec![0.0; n * n];
    fill_normal(&mut stream(seed, Stream::Matrix), &mut d);
    Matrix::from_raw(n, n, d)
}

/// I.i.d. standard normal right-hand side, independent of [`gaussian`]
/// with the same seed.
pub fn rhs_gaussian(n: usize, seed: u64) -> Vec<f64> {
    let mut b = vec![0.0; n];
    fill_normal(&mut stream(seed, Stream::Rhs), &mut b);
    b
}

/// Upper bidiagonal with diagonal `θ_1, θ_3, ..., θ_{2n-1}` and
/// superdiagonal `θ_2, ..., θ_{2n-2}`, `θ_k = base · k`. Rook pivoting walks
/// the whole staircase at the first step.
pub fn rook_adversarial(n: usize, base: f64) -> Result<Matrix> {
    if n == 0 || !(base > 0.0) || !base.is_finite() {
        return arg("rook adversarial matrix needs n >= 1 and a finite base > 0");
    }
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = base * (2 * i + 1) as f64;
        if i + 1 < n {
            a[(i, i + 1)] = base * (2 * i + 2) as f64;
        }
    }
    Ok(a)
}

pub fn identity(n: usize) -> Matrix {
    Matrix::identity(n)
}

/// Gaussian matrix whose diagonal is replaced by `1 + Σ_{j≠i} |a_ij|`.
pub fn diag_dominant(n: usize, seed: u64) -> Matrix {
    let mut a = gaussian(n, seed);
    for i in 0..n {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
        a[(i, i)] = 1.0 + off;
    }
    a
}

/// `GᵀG + n I` for Gaussian `G`; each entry pair is written from one dot
/// product, so the result is exactly symmetric.
pub fn spd(n: usize, seed: u64) -> Matrix {
    let g = gaussian(n, seed);
    let mut a = Matrix::zeros(n, n);
    for j in 0..n {
        for i in 0..=j {
            let v: f64 = g.col(i).iter().zip(g.col(j)).map(|(x, y)| x * y).sum();
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
        a[(j, j)] += n as f64;
    }
    a
}

/// Named matrix family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Wilkinson,
    GeneralizedWilkinson,
    Volterra,
    Gaussian,
    RookAdversarial,
    Identity,
    DiagDominant,
    Spd,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Wilkinson,
        Family::GeneralizedWilkinson,
        Family::Volterra,
        Family::Gaussian,
        Family::RookAdversarial,
        Family::Identity,
        Family::DiagDominant,
        Family::Spd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Wilkinson => "wilkinson",
            Family::GeneralizedWilkinson => "generalized_wilkinson",
            Family::Volterra => "volterra",
            Family::Gaussian => "gaussian",
            Family::RookAdversarial => "rook_adversarial",
            Family::Identity => "identity",
            Family::DiagDominant => "diag_dominant",
            Family::Spd => "spd",
        }
    }

    /// Parameter keys the family reads.
    pub fn param_keys(self) -> &'static [&'static str] {
        match self {
            Family::GeneralizedWilkinson => &["r_gw", "gw_unit"],
            Family::Volterra => &["volterra_c", "volterra_T", "volterra_boundary"],
            Family::RookAdversarial => &["theta_base"],
            _ => &[],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = LuError;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .or_else(|| (s == "gw").then_some(Family::GeneralizedWilkinson))
            .ok_or_else(|| LuError::Argument(format!("unknown matrix family '{s}'")))
    }
}

/// Default Volterra kernel constant.
pub const VOLTERRA_C: f64 = 2.0;
/// Default step `c h` of the Volterra family.
pub const VOLTERRA_CH: f64 = 0.3;
/// Default sketch inner dimension of the generalized Wilkinson family.
pub const GW_R: usize = 3;

/// A family, a size, parameters and a seed.
///
/// Missing parameters take defaults: `r_gw = 3`, `gw_unit = 0`,
/// `volterra_c = 2`, `volterra_T = 0.3 (n-1) / c` (so `c h = 0.3`),
/// `volterra_boundary = 0`, `theta_base = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub params: BTreeMap<String, f64>,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        GeneratorSpec { family, n, params: BTreeMap::new(), seed }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    /// Parses and stores a `key=value` parameter, rejecting keys the
    /// family does not read.
    pub fn set_param(&mut self, kv: &str) -> Result<()> {
        let (k, v) = kv.split_once('=').ok_or_else(|| LuError::Argument(format!("expected key=value, got '{kv}'")))?;
        let (k, v) = (k.trim(), v.trim());
        if !self.family.param_keys().contains(&k) {
            return arg(format!("family {} takes no parameter '{k}'", self.family));
        }
        let x: f64 = v.parse().map_err(|_| LuError::Argument(format!("bad number '{v}' for {k}")))?;
        self.params.insert(k.to_string(), x);
        Ok(())
    }

    fn param(&self, key: &str, default: f64) -> f64 {
        self.params.get(key).copied().unwrap_or(default)
    }

    fn count_param(&self, key: &str, default: usize) -> Result<usize> {
        let x = self.param(key, default as f64);
        if x < 0.0 || x.fract() != 0.0 || !x.is_finite() {
            return arg(format!("{key} must be a nonnegative integer, got {x}"));
        }
        Ok(x as usize)
    }

    /// Builds the matrix.
    pub fn generate(&self) -> Result<Matrix> {
        let n = self.n;
        if n == 0 {
            return arg("matrix size must be at least 1");
        }
        Ok(match self.family {
            Family::Wilkinson => wilkinson(n),
            Family::GeneralizedWilkinson => {
                if self.param("gw_unit", 0.0) != 0.0 {
                    generalized_wilkinson_unit(n)?
                } else {
                    generalized_wilkinson(n, self.count_param("r_gw", GW_R)?, self.seed)?
                }
            }
            Family::Volterra => {
                let c = self.param("volterra_c", VOLTERRA_C);
                let t = self.param("volterra_T", VOLTERRA_CH * n.saturating_sub(1) as f64 / c);
                if self.param("volterra_boundary", 0.0) != 0.0 {
                    volterra_bordered(n, c, t)?
                } else {
                    volterra(n, c, t)?
                }
            }
            Family::Gaussian => gaussian(n, self.seed),
            Family::RookAdversarial => rook_adversarial(n, self.param("theta_base", 1.0))?,
            Family::Identity => identity(n),
            Family::DiagDominant => diag_dominant(n, self.seed),
            Family::Spd => spd(n, self.seed),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::{backward_error, element_growth};
    use crate::{factorize, PivotStrategy, StrategyKind};
    use proptest::prelude::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    fn tracked(a: &Matrix, kind: StrategyKind) -> crate::Factorization {
        factorize(a, &PivotStrategy::new(kind), true, 0).unwrap()
    }

    #[test]
    fn wilkinson_shape() {
        assert_eq!(wilkinson(3), m(&[&[1.0, 0.0, 1.0], &[-1.0, 1.0, 1.0], &[-1.0, -1.0, 1.0]]));
        assert_eq!(wilkinson(1), m(&[&[1.0]]));
        for n in [2usize, 7, 30] {
            let w = wilkinson(n);
            assert!(w.data().iter().all(|&x| x == 0.0 || x == 1.0 || x == -1.0));
            assert_eq!(w.data().iter().filter(|&&x| x == -1.0).count(), n * (n - 1) / 2);
        }
        let f = tracked(&wilkinson(20), StrategyKind::Partial);
        assert_eq!(element_growth(f.stats.as_ref().unwrap()).unwrap(), 2f64.powi(19));
    }

    #[test]
    fn generalized_wilkinson_unit_is_wilkinson() {
        for n in [2, 5, 17] {
            assert_eq!(generalized_wilkinson_unit(n).unwrap(), wilkinson(n));
        }
        let spec = GeneratorSpec::new(Family::GeneralizedWilkinson, 9, 0).with_param("gw_unit", 1.0);
        assert_eq!(spec.generate().unwrap(), wilkinson(9));
    }

    #[test]
    fn generalized_wilkinson_no_row_exchanges() {
        for seed in 0..10 {
            let a = generalized_wilkinson(60, 3, seed).unwrap();
            let f = factorize(&a, &PivotStrategy::new(StrategyKind::Partial), false, 0).unwrap();
            assert!(f.perm_r.is_identity(), "seed {seed}");
            assert_eq!(f.counters.row_entry_swaps, 0);
        }
        assert!(generalized_wilkinson(1, 3, 0).is_err());
        assert!(generalized_wilkinson(4, 0, 0).is_err());
    }

    #[test]
    fn generalized_wilkinson_bounded_multipliers() {
        for seed in 0..1000 {
            let a = generalized_wilkinson(12, 1 + (seed as usize % 4), seed).unwrap();
            for j in 0..12 {
                for i in j + 1..12 {
                    assert!(a[(i, j)].abs() <= 1.0 && a[(i, j)] < 0.0);
                }
            }
        }
    }

    #[test]
    fn generalized_wilkinson_by_hand() {
        // r = 1 with u, v, W given: L_ij = -u_i w_{i-1} ⋯ w_{j+1} v_j.
        let us = vec![vec![0.5], vec![0.5], vec![0.25], vec![1.0]];
        let vs = vec![vec![1.0], vec![0.5], vec![1.0], vec![1.0]];
        let ws: Vec<Matrix> = [1.0, 0.5, 0.25, 1.0].iter().map(|&w| m(&[&[w]])).collect();
        let a = gw_from_parts(4, &us, &vs, &ws);
        assert_eq!(a[(1, 0)], -0.5);
        assert_eq!(a[(2, 0)], -0.25 * 0.5);
        assert_eq!(a[(3, 0)], -(0.5 * 0.25));
        assert_eq!(a[(3, 1)], -0.25 * 0.5);
        assert_eq!(a[(3, 3)], 1.0);
        assert_eq!(a[(0, 3)], 1.0);
    }

    #[test]
    fn volterra_structure() {
        let a = volterra(5, 2.0, 0.4).unwrap();
        // h = 0.1, ch = 0.2.
        assert!((a[(3, 3)] - 0.9).abs() < 1e-15);
        assert!((a[(3, 0)] + 0.1).abs() < 1e-15);
        assert!((a[(3, 2)] + 0.2).abs() < 1e-15);
        assert_eq!(a[(0, 0)], 1.0);
        for i in 0..5 {
            let nz = (0..5).filter(|&j| a[(i, j)] != 0.0).count();
            assert_eq!(nz, i + 1);
        }
        let sums: Vec<f64> = (0..5).map(|i| a.row(i).iter().sum()).collect();
        assert!(sums.windows(2).all(|w| w[1] < w[0]));
        assert!(volterra(1, 2.0, 1.0).is_err());
        assert!(volterra(4, 0.0, 1.0).is_err());
        assert!(volterra(4, 1.0, -1.0).is_err());
    }

    #[test]
    fn volterra_small_step_is_benign() {
        let a = volterra(100, 1.0, 0.5).unwrap();
        let f = tracked(&a, StrategyKind::Partial);
        assert!(backward_error(&a, &f).unwrap() < 1e-15);
    }

    #[test]
    fn volterra_bordered_growth() {
        let a = volterra_bordered(60, 2.0, 0.3 * 59.0 / 2.0).unwrap();
        let f = tracked(&a, StrategyKind::Partial);
        assert!(f.perm_r.is_identity());
        let g = element_growth(f.stats.as_ref().unwrap()).unwrap();
        assert!(g > 1e6, "{g}");
        let f = tracked(&a, StrategyKind::Complete);
        assert!(element_growth(f.stats.as_ref().unwrap()).unwrap() < 10.0);
    }

    #[test]
    fn gaussian_statistics() {
        let a = gaussian(500, 17);
        assert_eq!(a, gaussian(500, 17));
        assert_ne!(a, gaussian(500, 18));
        let n = a.data().len() as f64;
        let mean = a.data().iter().sum::<f64>() / n;
        let var = a.data().iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!(mean.abs() <= 0.01, "{mean}");
        assert!((0.99..=1.01).contains(&var), "{var}");
        let b = rhs_gaussian(500, 17);
        assert_ne!(&b[..], a.col(0));
    }

    #[test]
    fn rook_staircase() {
        assert_eq!(rook_adversarial(3, 1.0).unwrap(), m(&[&[1.0, 2.0, 0.0], &[0.0, 3.0, 4.0], &[0.0, 0.0, 5.0]]));
        assert_eq!(rook_adversarial(1, 2.5).unwrap(), m(&[&[2.5]]));
        assert!(rook_adversarial(3, 0.0).is_err());
        let f =
            factorize(&rook_adversarial(40, 1.0).unwrap(), &PivotStrategy::new(StrategyKind::Rook), false, 0).unwrap();
        assert!(f.counters.rook_alternations >= 40);
    }

    #[test]
    fn dominant_and_spd_need_no_pivoting() {
        for n in [5usize, 50, 200] {
            let d = diag_dominant(n, n as u64);
            let s = spd(n, n as u64);
            assert_eq!(s, s.transpose());
            for a in [&d, &s] {
                let f = tracked(a, StrategyKind::None);
                assert!(element_growth(f.stats.as_ref().unwrap()).unwrap() <= 4.0);
                assert!(backward_error(a, &f).unwrap() <= 100.0 * n as f64 * crate::EPS_MACH);
            }
        }
    }

    #[test]
    fn spec_parsing() {
        let mut s = GeneratorSpec::new("volterra".parse().unwrap(), 10, 0);
        s.set_param("volterra_c=4").unwrap();
        assert!(s.set_param("r_gw=2").is_err());
        assert!(s.set_param("volterra_c").is_err());
        assert!(s.set_param("volterra_c=x").is_err());
        // Default T keeps c h = 0.3.
        let a = s.generate().unwrap();
        assert!((a[(2, 1)] + 0.3).abs() < 1e-15);
        assert_eq!("gw".parse::<Family>().unwrap(), Family::GeneralizedWilkinson);
        assert!("hilbert".parse::<Family>().is_err());
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
            assert!(GeneratorSpec::new(f, 6, 1).generate().is_ok());
            assert!(GeneratorSpec::new(f, 0, 1).generate().is_err());
        }
        let bad = GeneratorSpec::new(Family::GeneralizedWilkinson, 6, 1).with_param("r_gw", 1.5);
        assert!(bad.generate().is_err());
    }

    proptest! {
        #[test]
        fn generators_are_pure(n in 1usize..20, seed in any::<u64>()) {
            for f in Family::ALL {
                let s = GeneratorSpec::new(f, n.max(2), seed);
                prop_assert_eq!(s.generate().unwrap(), s.generate().unwrap());
            }
        }
    }
}
