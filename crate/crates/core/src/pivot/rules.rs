//! Pivot searches over a trailing block. Returned indices are relative to
//! the block. Ties go to the lowest index (for complete pivoting: smallest
//! column, then smallest row).

use super::PivotCounters;
use crate::dense::{nrm2, SubMatrix};
use crate::error::{LuError, Result};

/// Result of a partial pivot search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartialPivot {
    pub index: usize,
    /// The whole slice was zero.
    pub zero: bool,
}

#[inline]
fn argmax_abs(x: &[f64]) -> (usize, f64) {
    let mut best = 0;
    let mut val = x[0].abs();
    for (i, v) in x.iter().enumerate().skip(1) {
        if v.abs() > val {
            best = i;
            val = v.abs();
        }
    }
    (best, val)
}

/// Row of the largest-magnitude entry of a column slice.
pub fn pivot_partial(col: &[f64]) -> PartialPivot {
    pivot_partial_counted(col, &mut PivotCounters::default())
}

pub(crate) fn pivot_partial_counted(col: &[f64], c: &mut PivotCounters) -> PartialPivot {
    assert!(!col.is_empty(), "empty pivot column");
    c.comparisons += col.len() as u64 - 1;
    let (index, val) = argmax_abs(col);
    PartialPivot { index, zero: val == 0.0 }
}

/// `(row, col)` of the largest-magnitude entry of the block.
pub fn pivot_complete(s: SubMatrix<'_>) -> (usize, usize) {
    pivot_complete_counted(s, &mut PivotCounters::default())
}

pub(crate) fn pivot_complete_counted(s: SubMatrix<'_>, c: &mut PivotCounters) -> (usize, usize) {
    assert!(s.rows() > 0 && s.cols() > 0, "empty pivot block");
    c.comparisons += (s.rows() * s.cols()) as u64 - 1;
    let (mut bi, mut bj, mut best) = (0, 0, s.get(0, 0).abs());
    for j in 0..s.cols() {
        for (i, v) in s.col(j).iter().enumerate() {
            if v.abs() > best {
                best = v.abs();
                bi = i;
                bj = j;
            }
        }
    }
    (bi, bj)
}

/// Rook pivoting: alternate column and row scans from the leading entry
/// until the current entry is largest in both its row and its column.
///
/// A scan only moves the pivot when it finds a strictly larger magnitude,
/// so the walk terminates. `rook_alternations` counts the scans that moved.
pub fn pivot_rook(s: SubMatrix<'_>, c: &mut PivotCounters) -> Result<(usize, usize)> {
    let (m, n) = (s.rows(), s.cols());
    assert!(m > 0 && n > 0, "empty pivot block");
    let cap = 2 * m.max(n) + 2;
    let (mut beta, mut alpha) = (0usize, 0usize);
    let mut cur = s.get(0, 0).abs();
    let mut scans = 0usize;
    let mut scan_column = true;
    loop {
        scans += 1;
        if scans > cap {
            return Err(LuError::Invariant(format!("rook pivot search exceeded {cap} scans")));
        }
        let moved = if scan_column {
            c.comparisons += m as u64 - 1;
            let (i, v) = argmax_abs(s.col(alpha));
            if v > cur {
                beta = i;
                cur = v;
                true
            } else {
                false
            }
        } else {
            c.comparisons += n as u64 - 1;
            let mut best = (alpha, cur);
            for j in 0..n {
                let v = s.get(beta, j).abs();
                if v > best.1 {
                    best = (j, v);
                }
            }
            if best.0 != alpha {
                alpha = best.0;
                cur = best.1;
                true
            } else {
                false
            }
        };
        // Every scan leaves the current entry maximal in the scanned
        // direction, so a scan that does not move (after at least one scan
        // in the other direction) has found the fixed point.
        if moved {
            c.rook_alternations += 1;
        } else if scans >= 2 {
            return Ok((beta, alpha));
        }
        scan_column = !scan_column;
    }
}

/// Column with the largest Euclidean norm.
pub fn pivot_l2col(s: SubMatrix<'_>) -> usize {
    pivot_l2col_counted(s, &mut PivotCounters::default())
}

pub(crate) fn pivot_l2col_counted(s: SubMatrix<'_>, c: &mut PivotCounters) -> usize {
    assert!(s.rows() > 0 && s.cols() > 0, "empty pivot block");
    c.comparisons += s.cols() as u64 - 1;
    let mut best = 0;
    let mut val = nrm2(s.col(0));
    for j in 1..s.cols() {
        let v = nrm2(s.col(j));
        if v > val {
            best = j;
            val = v;
        }
    }
    best
}
