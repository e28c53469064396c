//! Working state shared by the unblocked and blocked elimination loops.

use super::rules::{pivot_complete_counted, pivot_l2col_counted, pivot_partial_counted, pivot_rook};
use super::PivotCounters;
use crate::dense::{axpy, nrm2, Factorization, Matrix, Permutation};
use crate::diagnostics::GrowthStats;
use crate::error::{LuError, Result};
use crate::sketch::SketchAudit;

pub(crate) struct LuState {
    pub(crate) a: Matrix,
    pub(crate) perm_r: Permutation,
    pub(crate) perm_c: Permutation,
    pub(crate) counters: PivotCounters,
    pub(crate) singular: bool,
    pub(crate) stats: Option<GrowthStats>,
}

/// Largest absolute entry and Euclidean column norms of `a[k.., k..]`.
pub(crate) fn schur_norms(a: &Matrix, k: usize) -> (f64, Vec<f64>) {
    let mut max_entry = 0.0f64;
    let norms = (k..a.cols())
        .map(|j| {
            let c = &a.col(j)[k..];
            max_entry = c.iter().fold(max_entry, |m, x| m.max(x.abs()));
            nrm2(c)
        })
        .collect();
    (max_entry, norms)
}

impl LuState {
    pub(crate) fn new(a: &Matrix, track: bool) -> Self {
        let n = a.rows();
        let stats = track.then(|| {
            let (e, c) = schur_norms(a, 0);
            GrowthStats {
                per_step_max_entry: Vec::with_capacity(n),
                per_step_max_colnorm: Vec::with_capacity(n),
                input_max_entry: e,
                input_max_colnorm: c.into_iter().fold(0.0, f64::max),
            }
        });
        LuState {
            a: a.clone(),
            perm_r: Permutation::identity(n),
            perm_c: Permutation::identity(n),
            counters: PivotCounters::default(),
            singular: false,
            stats,
        }
    }

    pub(crate) fn n(&self) -> usize {
        self.a.rows()
    }

    /// Records the norms of `S_k` when tracking; returns its column norms.
    pub(crate) fn record_growth(&mut self, k: usize) -> Option<Vec<f64>> {
        let stats = self.stats.as_mut()?;
        let (e, c) = schur_norms(&self.a, k);
        stats.per_step_max_entry.push(e);
        stats.per_step_max_colnorm.push(c.iter().copied().fold(0.0, f64::max));
        Some(c)
    }

    pub(crate) fn swap_rows(&mut self, k: usize, b: usize) {
        if k != b {
            self.a.swap_rows(k, b);
            self.perm_r.swap(k, b);
            self.counters.row_entry_swaps += self.n() as u64;
        }
    }

    pub(crate) fn swap_cols(&mut self, k: usize, b: usize) {
        if k != b {
            self.a.swap_cols(k, b);
            self.perm_c.swap(k, b);
            self.counters.col_entry_swaps += self.n() as u64;
        }
    }

    /// Row partial pivot over `a[k.., k]`; returns an absolute row index.
    pub(crate) fn partial_row(&mut self, k: usize) -> usize {
        k + pivot_partial_counted(&self.a.col(k)[k..], &mut self.counters).index
    }

    /// Scales column `k` below the pivot and applies the rank-1 update to
    /// columns `k+1..col_end`. A zero pivot is an error when `strict`,
    /// otherwise it marks the factorization singular and leaves zero
    /// multipliers.
    pub(crate) fn eliminate(&mut self, k: usize, col_end: usize, strict: bool) -> Result<()> {
        let piv = self.a[(k, k)];
        if piv == 0.0 {
            if strict {
                return Err(LuError::ZeroPivot { step: k });
            }
            self.singular = true;
            self.a.col_mut(k)[k + 1..].iter_mut().for_each(|x| *x = 0.0);
            return Ok(());
        }
        self.a.col_mut(k)[k + 1..].iter_mut().for_each(|x| *x /= piv);
        rank1_update(&mut self.a, k, col_end);
        Ok(())
    }

    pub(crate) fn finish(self, sketch_audit: Option<SketchAudit>) -> Factorization {
        Factorization {
            lu: self.a,
            perm_r: self.perm_r,
            perm_c: self.perm_c,
            singular: self.singular,
            stats: self.stats,
            counters: self.counters,
            sketch_audit,
        }
    }
}

/// `a[k+1.., k+1..col_end] -= a[k+1.., k] * a[k, k+1..col_end]`.
pub(crate) fn rank1_update(a: &mut Matrix, k: usize, col_end: usize) {
    let n = a.rows();
    let (head, tail) = a.data_mut().split_at_mut((k + 1) * n);
    let l = &head[k * n + k + 1..(k + 1) * n];
    for col in tail.chunks_exact_mut(n).take(col_end - k - 1) {
        let u = col[k];
        if u != 0.0 {
            axpy(&mut col[k + 1..], u, l);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ClassicRule {
    None,
    Partial,
    Complete,
    Rook,
    L2,
}

/// Right-looking elimination with a rank-1 update per step.
pub(crate) fn run_unblocked(st: &mut LuState, rule: ClassicRule) -> Result<()> {
    run_unblocked_from(st, rule, 0)
}

/// Continues elimination at step `from` on an already updated trailing block.
pub(crate) fn run_unblocked_from(st: &mut LuState, rule: ClassicRule, from: usize) -> Result<()> {
    let n = st.n();
    for k in from..n {
        st.record_growth(k);
        let (beta, alpha) = match rule {
            ClassicRule::None | ClassicRule::Partial => (None, k),
            ClassicRule::Complete => {
                let (b, a) = pivot_complete_counted(st.a.trailing(k), &mut st.counters);
                (Some(k + b), k + a)
            }
            ClassicRule::Rook => {
                let (b, a) = pivot_rook(st.a.trailing(k), &mut st.counters)?;
                (Some(k + b), k + a)
            }
            ClassicRule::L2 => (None, k + pivot_l2col_counted(st.a.trailing(k), &mut st.counters)),
        };
        st.swap_cols(k, alpha);
        let beta = match (rule, beta) {
            (ClassicRule::None, _) => k,
            (_, Some(b)) => b,
            (_, None) => st.partial_row(k),
        };
        st.swap_rows(k, beta);
        st.eliminate(k, n, rule == ClassicRule::None)?;
    }
    Ok(())
}
