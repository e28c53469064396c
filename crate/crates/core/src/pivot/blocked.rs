//! Blocked right-looking LU with partial or no pivoting.
//!
//! Each panel of `nb` columns is factored with rank-1 updates confined to the
//! panel; its row interchanges are then applied to the other columns, the
//! block row of `U` is obtained with a triangular solve, and the trailing
//! matrix gets a single matrix-matrix update.

use super::engine::{rank1_update, LuState};
use super::rules::pivot_partial_counted;
use crate::dense::kernels::{laswp, schur_update, trsm_unit_lower};
use crate::error::{LuError, Result};

pub(crate) fn run_blocked(st: &mut LuState, partial: bool, nb: usize) -> Result<()> {
    let n = st.n();
    let nb = nb.max(1);
    let mut kl = 0;
    while kl < n {
        let ke = (kl + nb).min(n);
        let mut swaps = Vec::new();
        for k in kl..ke {
            if partial {
                let beta = k + pivot_partial_counted(&st.a.col(k)[k..], &mut st.counters).index;
                if beta != k {
                    let data = st.a.data_mut();
                    for j in kl..ke {
                        data.swap(k + j * n, beta + j * n);
                    }
                    st.perm_r.swap(k, beta);
                    st.counters.row_entry_swaps += n as u64;
                    swaps.push((k, beta));
                }
            }
            let piv = st.a[(k, k)];
            if piv == 0.0 {
                if !partial {
                    return Err(LuError::ZeroPivot { step: k });
                }
                st.singular = true;
                st.a.col_mut(k)[k + 1..].iter_mut().for_each(|x| *x = 0.0);
                continue;
            }
            st.a.col_mut(k)[k + 1..].iter_mut().for_each(|x| *x /= piv);
            rank1_update(&mut st.a, k, ke);
        }
        laswp(&mut st.a, &swaps, 0..kl);
        laswp(&mut st.a, &swaps, ke..n);
        trsm_unit_lower(&mut st.a, kl, ke, ke);
        schur_update(&mut st.a, kl, ke, ke, ke);
        kl = ke;
    }
    Ok(())
}
