//! Level-3 helpers on column-major buffers. The matrix product is delegated
//! to `matrixmultiply`.

use super::Matrix;

/// Read-only column-major block of some buffer.
#[derive(Clone, Copy)]
pub(crate) struct View<'a> {
    data: &'a [f64],
    offset: usize,
    rows: usize,
    cols: usize,
    ld: usize,
}

impl<'a> View<'a> {
    pub(crate) fn whole(m: &'a Matrix) -> Self {
        View { data: m.data(), offset: 0, rows: m.rows(), cols: m.cols(), ld: m.rows() }
    }
}

/// `c = alpha * a * b + beta * c`.
pub(crate) fn gemm(alpha: f64, a: View<'_>, b: View<'_>, beta: f64, c: &mut Matrix) {
    assert!(a.cols == b.rows && c.rows() == a.rows && c.cols() == b.cols);
    if a.rows == 0 || b.cols == 0 {
        return;
    }
    if a.cols == 0 {
        c.data_mut().iter_mut().for_each(|x| *x *= beta);
        return;
    }
    let ldc = c.rows() as isize;
    // SAFETY: each view's extent was bounds-checked at construction and `c`
    // is a distinct, exclusively borrowed allocation.
    unsafe {
        matrixmultiply::dgemm(
            a.rows,
            a.cols,
            b.cols,
            alpha,
            a.data.as_ptr().add(a.offset),
            1,
            a.ld as isize,
            b.data.as_ptr().add(b.offset),
            1,
            b.ld as isize,
            beta,
            c.data_mut().as_mut_ptr(),
            1,
            ldc,
        );
    }
}

/// In-place Schur update `m[r0.., c0..] -= m[r0.., k0..k1] * m[k0..k1, c0..]`.
///
/// Requires `k1 <= r0` and `k1 <= c0`, so the target block overlaps neither
/// factor block.
pub(crate) fn schur_update(m: &mut Matrix, k0: usize, k1: usize, r0: usize, c0: usize) {
    let (rows, cols) = (m.rows(), m.cols());
    assert!(k0 <= k1 && k1 <= r0 && k1 <= c0 && r0 <= rows && c0 <= cols);
    let (mm, kk, nn) = (rows - r0, k1 - k0, cols - c0);
    if mm == 0 || kk == 0 || nn == 0 {
        return;
    }
    let ld = rows as isize;
    let base = m.data_mut().as_mut_ptr();
    // SAFETY: all three blocks lie inside the buffer. The destination block
    // (rows r0.., cols c0..) is disjoint from the left factor (cols k0..k1,
    // with k1 <= c0) and from the right factor (rows k0..k1, with k1 <= r0).
    unsafe {
        matrixmultiply::dgemm(
            mm,
            kk,
            nn,
            -1.0,
            base.add(r0 + k0 * rows),
            1,
            ld,
            base.add(k0 + c0 * rows),
            1,
            ld,
            1.0,
            base.add(r0 + c0 * rows),
            1,
            ld,
        );
    }
}

/// `m[k0..k1, c0..] = L^{-1} m[k0..k1, c0..]` with `L` the unit lower
/// triangle stored in `m[k0..k1, k0..k1]`.
pub(crate) fn trsm_unit_lower(m: &mut Matrix, k0: usize, k1: usize, c0: usize) {
    let n = m.rows();
    let cols = m.cols();
    assert!(k1 <= c0);
    let (left, right) = m.data_mut().split_at_mut(c0 * n);
    for j in 0..cols - c0 {
        let col = &mut right[j * n..(j + 1) * n];
        for p in k0..k1 {
            let x = col[p];
            if x != 0.0 {
                let lcol = &left[p * n..(p + 1) * n];
                for i in p + 1..k1 {
                    col[i] -= lcol[i] * x;
                }
            }
        }
    }
}

/// Applies the row interchanges `swaps` (in order) to columns `cols` of `m`.
pub(crate) fn laswp(m: &mut Matrix, swaps: &[(usize, usize)], cols: std::ops::Range<usize>) {
    if swaps.is_empty() {
        return;
    }
    for j in cols {
        let col = m.col_mut(j);
        for &(a, b) in swaps {
            col.swap(a, b);
        }
    }
}
