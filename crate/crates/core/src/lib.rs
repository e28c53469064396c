//! Dense LU factorization with pluggable pivoting.
//!
//! The crate covers the classical strategies (none, partial, complete, rook,
//! largest column norm) and randomized complete pivoting, where column norms
//! of the Schur complement are estimated from a Gaussian sketch that is
//! updated step by step instead of recomputed.
//!
//! Indices are zero-based throughout the API. A [`Factorization`] stores `L`
//! and `U` packed in one matrix together with row and column permutations
//! satisfying `A[perm_r(i), perm_c(j)] = (L U)[i, j]`.
//!
//! ```
//! use gercp::{factorize, genmat, PivotStrategy};
//!
//! let a = genmat::wilkinson(20);
//! let f = factorize(&a, &PivotStrategy::gercp_default(), true, 7).unwrap();
//! let growth = gercp::diagnostics::element_growth(f.stats.as_ref().unwrap()).unwrap();
//! assert!(growth < 4.0);
//! ```

pub mod dense;
pub mod diagnostics;
mod error;
pub mod genmat;
pub mod pivot;
mod rng;
pub mod sketch;

pub use dense::{Factorization, Matrix, Permutation, SubMatrix};
pub use diagnostics::GrowthStats;
pub use error::{LuError, Result};
pub use pivot::{factorize, PivotCounters, PivotStrategy, StrategyKind};
pub use sketch::{block_gercp_factorize, gercp_factorize, SketchConfig, SketchState};

/// Unit roundoff used for every threshold in the crate.
pub const EPS_MACH: f64 = 2.220446049250313e-16;
