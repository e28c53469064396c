use super::level1::dot;
use super::Matrix;
use crate::error::{arg, Result};

/// Euclidean norm of a slice.
///
/// The plain sum of squares is used when it neither overflows nor falls into
/// the subnormal range; otherwise the slice is rescaled by its largest entry.
#[inline]
pub(crate) fn nrm2(x: &[f64]) -> f64 {
    let s = dot(x, x);
    if s.is_finite() && s >= f64::MIN_POSITIVE {
        return s.sqrt();
    }
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let t: f64 = x.iter().map(|v| (v / scale) * (v / scale)).sum();
    scale * t.sqrt()
}

/// Euclidean norm of `m[from_row.., j]`.
pub fn col_norm2(m: &Matrix, j: usize, from_row: usize) -> Result<f64> {
    if j >= m.cols() || from_row >= m.rows() {
        return arg(format!("column {} from row {} out of range for {}x{}", j, from_row, m.rows(), m.cols()));
    }
    Ok(nrm2(&m.col(j)[from_row..]))
}

fn nonempty(m: &Matrix) -> Result<()> {
    if m.is_empty() {
        arg("empty matrix")
    } else {
        Ok(())
    }
}

/// Largest Euclidean column norm.
pub fn norm_one_two(m: &Matrix) -> Result<f64> {
    nonempty(m)?;
    Ok((0..m.cols()).map(|j| nrm2(m.col(j))).fold(0.0, f64::max))
}

/// Largest absolute entry.
pub fn norm_one_inf(m: &Matrix) -> Result<f64> {
    nonempty(m)?;
    Ok(m.data().iter().fold(0.0f64, |a, x| a.max(x.abs())))
}

/// Operator 1-norm (largest absolute column sum) and infinity-norm
/// (largest absolute row sum).
pub fn op_norms(m: &Matrix) -> Result<(f64, f64)> {
    nonempty(m)?;
    let mut one = 0.0f64;
    let mut rowsum = vec![0.0; m.rows()];
    for j in 0..m.cols() {
        let mut s = 0.0;
        for (r, x) in rowsum.iter_mut().zip(m.col(j)) {
            s += x.abs();
            *r += x.abs();
        }
        one = one.max(s);
    }
    Ok((one, rowsum.into_iter().fold(0.0, f64::max)))
}
