//! Vector kernels for the hot loops of elimination and sketch updates.
//!
//! The bodies are plain Rust written with independent lanes so they
//! vectorize; on x86-64 a copy compiled for AVX2 and FMA is picked at run
//! time when the CPU has them.

const LANES: usize = 8;

#[inline(always)]
fn dot_body(x: &[f64], y: &[f64]) -> f64 {
    let mut acc = [0.0f64; LANES];
    let (xc, yc) = (x.chunks_exact(LANES), y.chunks_exact(LANES));
    let tail: f64 = xc.remainder().iter().zip(yc.remainder()).map(|(a, b)| a * b).sum();
    for (a, b) in xc.zip(yc) {
        for l in 0..LANES {
            acc[l] += a[l] * b[l];
        }
    }
    acc.iter().sum::<f64>() + tail
}

#[inline(always)]
fn axpy_body(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi -= a * xi;
    }
}

#[inline(always)]
fn axpy_sumsq_body(y: &mut [f64], a: f64, x: &[f64]) -> f64 {
    let mut acc = [0.0f64; LANES];
    let mut yc = y.chunks_exact_mut(LANES);
    let mut xc = x.chunks_exact(LANES);
    for (yb, xb) in (&mut yc).zip(&mut xc) {
        for l in 0..LANES {
            yb[l] -= a * xb[l];
            acc[l] += yb[l] * yb[l];
        }
    }
    let mut tail = 0.0;
    for (yi, &xi) in yc.into_remainder().iter_mut().zip(xc.remainder()) {
        *yi -= a * xi;
        tail += *yi * *yi;
    }
    acc.iter().sum::<f64>() + tail
}

/// `Y(:,j) -= (a u_j) x` over the columns of `Y` (stored with `x.len()`
/// rows), writing each updated column's squared norm to `sumsq[j]`.
/// Columns with `u_j = 0` are left alone.
#[inline(always)]
fn rank1_sumsq_body(y: &mut [f64], a: f64, x: &[f64], u: &[f64], sumsq: &mut [f64]) {
    for ((col, &uj), s) in y.chunks_exact_mut(x.len()).zip(u).zip(sumsq) {
        if uj != 0.0 {
            *s = axpy_sumsq_body(col, a * uj, x);
        }
    }
}

macro_rules! dispatch {
    ($name:ident, $fast:ident, $body:ident, ($($arg:ident: $ty:ty),*) $(-> $ret:ty)?) => {
        #[cfg(target_arch = "x86_64")]
        #[target_feature(enable = "avx2,fma")]
        unsafe fn $fast($($arg: $ty),*) $(-> $ret)? {
            $body($($arg),*)
        }

        #[inline]
        pub(crate) fn $name($($arg: $ty),*) $(-> $ret)? {
            #[cfg(target_arch = "x86_64")]
            {
                if std::arch::is_x86_feature_detected!("avx2") && std::arch::is_x86_feature_detected!("fma") {
                    // SAFETY: the required CPU features were just detected.
                    return unsafe { $fast($($arg),*) };
                }
            }
            $body($($arg),*)
        }
    };
}

dispatch!(dot, dot_avx2, dot_body, (x: &[f64], y: &[f64]) -> f64);
dispatch!(axpy, axpy_avx2, axpy_body, (y: &mut [f64], a: f64, x: &[f64]));
dispatch!(rank1_sumsq, rank1_sumsq_avx2, rank1_sumsq_body, (y: &mut [f64], a: f64, x: &[f64], u: &[f64], sumsq: &mut [f64]));

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn kernels_match_naive(v in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 0..70), a in -10.0f64..10.0) {
            let (x, y): (Vec<f64>, Vec<f64>) = v.into_iter().unzip();
            let naive: f64 = x.iter().zip(&y).map(|(p, q)| p * q).sum();
            let scale: f64 = x.iter().zip(&y).map(|(p, q)| (p * q).abs()).sum::<f64>() + 1.0;
            prop_assert!((dot(&x, &y) - naive).abs() <= 1e-13 * scale);
            let mut z = y.clone();
            axpy(&mut z, a, &x);
            for i in 0..x.len() {
                prop_assert_eq!(z[i], y[i] - a * x[i]);
            }
            // Two columns: the second is scaled by 2 and the third is skipped.
            let mut m: Vec<f64> = y.iter().chain(&y).chain(&y).copied().collect();
            let mut s = [0.0, 0.0, -1.0];
            if !x.is_empty() {
                rank1_sumsq(&mut m, a, &x, &[1.0, 2.0, 0.0], &mut s);
                prop_assert_eq!(&m[..x.len()], &z[..]);
                for i in 0..x.len() {
                    prop_assert_eq!(m[x.len() + i], y[i] - (2.0 * a) * x[i]);
                }
                prop_assert_eq!(&m[2 * x.len()..], &y[..]);
                prop_assert_eq!(s[2], -1.0);
                let want: f64 = z.iter().map(|t| t * t).sum();
                prop_assert!((s[0] - want).abs() <= 1e-13 * (want + 1.0));
            }
        }
    }
}
