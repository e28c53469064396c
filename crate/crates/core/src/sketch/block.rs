//! Blocked randomized complete pivoting.
//!
//! Each panel is factored left-looking: a column is brought up to date only
//! when it becomes the pivot column, so every column not yet pivoted in the
//! panel is equally stale and a column chosen anywhere to the right can be
//! swapped in directly. Pivot rows of `U` are formed one at a time in a
//! row-major buffer, which is all the sketch update needs. Row interchanges
//! reach the not yet pivoted columns only at the end of the panel, so until
//! then their rows are addressed through `phys`. One matrix-matrix product
//! then updates the trailing matrix.
//!
//! Once the trailing matrix has at most `r` columns the sketch gains
//! nothing and elimination finishes with exact column norms.

use super::{init_sketch, SketchConfig, SketchState};
use crate::dense::kernels::{laswp, schur_update};
use crate::dense::{axpy, Factorization, Matrix};
use crate::error::{arg, Result};
use crate::pivot::engine::{run_unblocked_from, ClassicRule, LuState};
use crate::pivot::rules::pivot_partial_counted;

/// Randomized complete pivoting with panels of `config.block_size` columns.
pub fn block_gercp_factorize(a: &Matrix, config: &SketchConfig) -> Result<Factorization> {
    config.validate()?;
    if !a.is_square() || a.is_empty() {
        return arg(format!("gercp needs a nonempty square matrix, got {}x{}", a.rows(), a.cols()));
    }
    let n = a.rows();
    let r = config.effective_r(n);
    let mut st = LuState::new(a, false);
    let k_switch = n.saturating_sub(r);
    if k_switch > 0 {
        let mut sk = init_sketch(a, config)?;
        sketched_panels(&mut st, &mut sk, config, k_switch)?;
    }
    run_unblocked_from(&mut st, ClassicRule::L2, k_switch)?;
    Ok(st.finish(None))
}

fn sketched_panels(st: &mut LuState, sk: &mut SketchState, cfg: &SketchConfig, k_switch: usize) -> Result<()> {
    let n = st.n();
    let nb = cfg.block_size.min(k_switch);
    // urows[(p - kl) * n + j] = U(p, j) for pivot rows p of the panel.
    let mut urows = vec![0.0; nb * n];
    let mut phys: Vec<usize> = (0..n).collect();
    let mut kl = 0;
    while kl < k_switch {
        let ke = (kl + nb).min(k_switch);
        let mut swaps = Vec::new();
        for (i, p) in phys.iter_mut().enumerate().skip(kl) {
            *p = i;
        }
        for k in kl..ke {
            let alpha = sk.select_counted(k, cfg.g, &mut st.counters);
            if alpha != k {
                st.swap_cols(k, alpha);
                sk.swap_columns(k, alpha);
                for p in 0..k - kl {
                    urows.swap(p * n + k, p * n + alpha);
                }
            }

            // Bring column k to logical row order and up to date.
            laswp(&mut st.a, &swaps, k..k + 1);
            {
                let data = st.a.data_mut();
                let (left, right) = data.split_at_mut(k * n);
                let col = &mut right[..n];
                for p in kl..k {
                    let u = urows[(p - kl) * n + k];
                    col[p] = u;
                    if u != 0.0 {
                        axpy(&mut col[k..], u, &left[p * n + k..(p + 1) * n]);
                    }
                }
            }

            let beta = k + pivot_partial_counted(&st.a.col(k)[k..], &mut st.counters).index;
            if beta != k {
                let data = st.a.data_mut();
                for j in kl..=k {
                    data.swap(k + j * n, beta + j * n);
                }
                phys.swap(k, beta);
                st.perm_r.swap(k, beta);
                st.counters.row_entry_swaps += n as u64;
                swaps.push((k, beta));
                sk.swap_rows(k, beta);
            }

            let piv = st.a[(k, k)];
            if piv == 0.0 {
                st.singular = true;
                st.a.col_mut(k)[k + 1..].iter_mut().for_each(|x| *x = 0.0);
            } else {
                st.a.col_mut(k)[k + 1..].iter_mut().for_each(|x| *x /= piv);
            }

            // U(k, k+1:) = A(k, k+1:) - L(k, kl:k) U(kl:k, k+1:).
            let (done, rest) = urows.split_at_mut((k - kl) * n);
            let urow = &mut rest[k + 1..n];
            let pr = phys[k];
            let data = st.a.data();
            for (j, u) in (k + 1..n).zip(urow.iter_mut()) {
                *u = data[pr + j * n];
            }
            for p in kl..k {
                let l = data[k + p * n];
                if l != 0.0 {
                    axpy(urow, l, &done[(p - kl) * n + k + 1..(p - kl + 1) * n]);
                }
            }

            if k + 1 < n {
                sk.apply_parts(k, piv, &data[k * n + k + 1..(k + 1) * n], urow, cfg.force_stable_update)?;
            }
        }

        laswp(&mut st.a, &swaps, 0..kl);
        laswp(&mut st.a, &swaps, ke..n);
        let data = st.a.data_mut();
        for j in ke..n {
            for p in kl..ke {
                data[p + j * n] = urows[(p - kl) * n + j];
            }
        }
        schur_update(&mut st.a, kl, ke, ke, ke);
        kl = ke;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::backward_error;
    use crate::genmat::{gaussian, wilkinson};
    use crate::sketch::gercp_factorize;
    use proptest::prelude::*;

    fn cfg(r: usize, b: usize, seed: u64) -> SketchConfig {
        SketchConfig { r: Some(r), block_size: b, seed, ..SketchConfig::default() }
    }

    #[test]
    fn matches_scalar_pivots() {
        for &(n, r, b) in &[(60, 6, 8), (73, 10, 16), (40, 3, 1), (50, 49, 4), (30, 40, 8)] {
            let a = gaussian(n, n as u64);
            let c = cfg(r, b, 7);
            let blk = block_gercp_factorize(&a, &c).unwrap();
            let sc = gercp_factorize(&a, &c).unwrap();
            assert_eq!(blk.perm_c, sc.perm_c, "n={n} r={r} b={b}");
            assert_eq!(blk.perm_r, sc.perm_r, "n={n} r={r} b={b}");
            let diff = blk.lu.data().iter().zip(sc.lu.data()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(diff < 1e-10, "n={n} diff={diff}");
        }
    }

    #[test]
    fn small_backward_error() {
        let a = gaussian(200, 3);
        let f = block_gercp_factorize(&a, &cfg(16, 32, 1)).unwrap();
        assert!(backward_error(&a, &f).unwrap() < 1e-12);
        let w = wilkinson(150);
        let f = block_gercp_factorize(&w, &cfg(8, 32, 1)).unwrap();
        assert!(backward_error(&w, &f).unwrap() < 1e-12);
    }

    #[test]
    fn rank_deficient_input() {
        let u = gaussian(40, 1);
        let mut a = Matrix::zeros(40, 40);
        for j in 0..40 {
            for i in 0..40 {
                a[(i, j)] = u[(i, 0)] * u[(j, 1)] + u[(i, 2)] * u[(j, 3)];
            }
        }
        let f = block_gercp_factorize(&a, &cfg(4, 8, 2)).unwrap();
        assert!(backward_error(&a, &f).unwrap() < 1e-13);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn blocked_equals_scalar(n in 2usize..48, r in 1usize..12, b in 1usize..20, seed in 0u64..1000) {
            let a = gaussian(n, seed);
            let c = cfg(r, b, seed);
            let blk = block_gercp_factorize(&a, &c).unwrap();
            let sc = gercp_factorize(&a, &c).unwrap();
            prop_assert_eq!(&blk.perm_c, &sc.perm_c);
            prop_assert_eq!(&blk.perm_r, &sc.perm_r);
        }
    }
}
