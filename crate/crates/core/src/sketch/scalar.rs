//! Unblocked randomized complete pivoting with one sketch update per step.

use super::{init_sketch, SketchAudit, SketchConfig, SketchState, SketchStepAudit, UpdatePath};
use crate::dense::{nrm2, Factorization, Matrix};
use crate::error::{arg, Result};
use crate::pivot::engine::LuState;
use crate::pivot::rules::pivot_l2col_counted;

/// When an observer is called within an elimination step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepPhase {
    /// Pivots applied and `L(:,k)`, `U(k,:)` formed; `Ψ` still sketches `S_k`.
    BeforeUpdate,
    /// `Ψ` now sketches `S_{k+1}`.
    AfterUpdate(UpdatePath),
}

/// Snapshot handed to the observer of [`gercp_factorize_observed`].
pub struct StepEvent<'a> {
    pub step: usize,
    pub phase: StepPhase,
    /// Packed working matrix (rows and columns already permuted).
    pub work: &'a Matrix,
    pub sketch: &'a SketchState,
}

/// Randomized complete pivoting, one column at a time.
pub fn gercp_factorize(a: &Matrix, config: &SketchConfig) -> Result<Factorization> {
    run(a, config, false, None)
}

/// [`gercp_factorize`] calling `observer` around every sketch update.
pub fn gercp_factorize_observed(
    a: &Matrix,
    config: &SketchConfig,
    observer: &mut dyn FnMut(&StepEvent<'_>),
) -> Result<Factorization> {
    run(a, config, false, Some(observer))
}

pub(crate) fn gercp_factorize_tracked(a: &Matrix, config: &SketchConfig, track: bool) -> Result<Factorization> {
    run(a, config, track, None)
}

fn run(
    a: &Matrix,
    config: &SketchConfig,
    track: bool,
    mut observer: Option<&mut dyn FnMut(&StepEvent<'_>)>,
) -> Result<Factorization> {
    config.validate()?;
    if !a.is_square() || a.is_empty() {
        return arg(format!("gercp needs a nonempty square matrix, got {}x{}", a.rows(), a.cols()));
    }
    let n = a.rows();
    let mut sk = init_sketch(a, config)?;
    let r = sk.r();
    let mut st = LuState::new(a, track);
    let tiny = st.stats.as_ref().map_or(0.0, |s| s.input_max_colnorm) * 64.0 * n as f64 * crate::EPS_MACH;
    let mut audit = track.then(|| SketchAudit { r, steps: Vec::with_capacity(n) });

    for k in 0..n {
        let exact = st.record_growth(k);
        let sketched = n - k > r;
        let alpha = if sketched {
            sk.select_counted(k, config.g, &mut st.counters)
        } else {
            k + pivot_l2col_counted(st.a.trailing(k), &mut st.counters)
        };
        if let (Some(audit), Some(norms)) = (audit.as_mut(), exact) {
            audit.steps.push(step_audit(&sk, k, alpha, sketched, &norms, tiny));
        }
        st.swap_cols(k, alpha);
        sk.swap_columns(k, alpha);
        let beta = st.partial_row(k);
        st.swap_rows(k, beta);
        sk.swap_rows(k, beta);
        st.eliminate(k, n, false)?;
        if k + 1 < n {
            if let Some(obs) = observer.as_mut() {
                obs(&StepEvent { step: k, phase: StepPhase::BeforeUpdate, work: &st.a, sketch: &sk });
            }
            let path = sk.apply_update(&st.a, k, config.force_stable_update)?;
            if let Some(obs) = observer.as_mut() {
                obs(&StepEvent { step: k, phase: StepPhase::AfterUpdate(path), work: &st.a, sketch: &sk });
            }
        }
    }
    Ok(st.finish(audit))
}

fn step_audit(sk: &SketchState, k: usize, alpha: usize, sketched: bool, exact: &[f64], tiny: f64) -> SketchStepAudit {
    let r = sk.r() as f64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (j, &s) in exact.iter().enumerate() {
        // Columns that vanish in exact arithmetic carry only rounding noise.
        if s > tiny {
            let ratio = (nrm2(sk.psi().col(k + j)) / s).powi(2) / r;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }
    if lo > hi {
        lo = 1.0;
        hi = 1.0;
    }
    SketchStepAudit {
        step: k,
        sketched,
        jl_min_ratio: lo,
        jl_max_ratio: hi,
        pivot_colnorm: exact[alpha - k],
        max_colnorm: exact.iter().copied().fold(0.0, f64::max),
    }
}
