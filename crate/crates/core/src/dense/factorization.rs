use super::{Matrix, Permutation};
use crate::diagnostics::GrowthStats;
use crate::error::{arg, LuError, Result};
use crate::pivot::PivotCounters;
use crate::sketch::SketchAudit;

/// Packed LU factors with their permutations.
///
/// `lu` holds `L` strictly below the diagonal (unit diagonal implied) and `U`
/// on and above it, with `A[perm_r.map[i], perm_c.map[j]] = (L U)[i, j]`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub lu: Matrix,
    pub perm_r: Permutation,
    pub perm_c: Permutation,
    /// Set when some pivot search region was entirely zero.
    pub singular: bool,
    /// Per-step Schur complement norms, present when growth tracking was on.
    pub stats: Option<GrowthStats>,
    pub counters: PivotCounters,
    /// Sketch quality record of a tracked randomized run.
    pub sketch_audit: Option<SketchAudit>,
}

impl Factorization {
    pub fn n(&self) -> usize {
        self.lu.rows()
    }

    /// Unit lower triangular factor.
    pub fn l(&self) -> Matrix {
        let n = self.n();
        let mut l = Matrix::identity(n);
        for j in 0..n {
            for i in j + 1..n {
                l[(i, j)] = self.lu[(i, j)];
            }
        }
        l
    }

    /// Upper triangular factor.
    pub fn u(&self) -> Matrix {
        let n = self.n();
        let mut u = Matrix::zeros(n, n);
        for j in 0..n {
            for i in 0..=j {
                u[(i, j)] = self.lu[(i, j)];
            }
        }
        u
    }

    /// Largest magnitude among the strictly lower (multiplier) entries.
    pub fn max_multiplier(&self) -> f64 {
        let n = self.n();
        let mut m = 0.0f64;
        for j in 0..n {
            for &x in &self.lu.col(j)[j + 1..] {
                m = m.max(x.abs());
            }
        }
        m
    }

    /// Solves `A x = b` with the stored factors.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n();
        if self.singular {
            return Err(LuError::Singular);
        }
        if b.len() != n {
            return arg(format!("right-hand side has length {}, expected {}", b.len(), n));
        }
        let mut y = self.perm_r.gather(b);
        for k in 0..n {
            let yk = y[k];
            if yk != 0.0 {
                for (yi, &l) in y[k + 1..].iter_mut().zip(&self.lu.col(k)[k + 1..]) {
                    *yi -= l * yk;
                }
            }
        }
        for k in (0..n).rev() {
            let col = self.lu.col(k);
            if col[k] == 0.0 {
                return Err(LuError::Singular);
            }
            y[k] /= col[k];
            let yk = y[k];
            if yk != 0.0 {
                for (yi, &u) in y[..k].iter_mut().zip(&col[..k]) {
                    *yi -= u * yk;
                }
            }
        }
        Ok(self.perm_c.scatter(&y))
    }

    /// Multiplies the factors back together and undoes the permutations.
    ///
    /// Each entry of `L U` is accumulated in increasing order of the inner
    /// index, so the rounding of the product is reproducible.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.n();
        let lu = &self.lu;
        let mut prod = vec![0.0; n * n];
        for j in 0..n {
            let out = &mut prod[j * n..(j + 1) * n];
            for p in 0..=j {
                let u = lu[(p, j)];
                if u == 0.0 {
                    continue;
                }
                out[p] += u;
                for (o, &l) in out[p + 1..].iter_mut().zip(&lu.col(p)[p + 1..]) {
                    *o += l * u;
                }
            }
        }
        let mut a = Matrix::zeros(n, n);
        let (pr, pc) = (self.perm_r.map(), self.perm_c.map());
        for j in 0..n {
            for i in 0..n {
                a[(pr[i], pc[j])] = prod[i + j * n];
            }
        }
        a
    }
}
