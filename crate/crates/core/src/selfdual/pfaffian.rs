//! Pfaffians of complex skew-symmetric matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Relative tolerance on `‖X + Xᵀ‖` accepted as skew-symmetric.
pub const SKEW_TOL: f64 = 1e-8;

fn check_skew(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    crate::linalg::validate(x)?;
    let d = x.nrows();
    if d % 2 == 1 {
        return Err(Error::OddDimension(d));
    }
    let defect = (x + x.transpose()).norm();
    if defect > SKEW_TOL * x.norm().max(1.0) {
        return Err(Error::NotSkewSymmetric { defect });
    }
    Ok((x - x.transpose()).scale(0.5))
}

/// Pfaffian by unitary Householder congruences `A ← H A Hᵀ`.
///
/// At each even step `k` a reflector maps `A[k+1.., k]` onto a multiple of
/// its first unit vector, leaving row and column `k` with a single nonzero
/// entry `A[k, k+1]`. Expanding along that row, `Pf(A)` is `A[k, k+1]` times
/// the Pfaffian of the trailing block, and each reflector has determinant −1.
pub fn pfaffian(x: &ComplexMatrix) -> Result<Complex64> {
    let mut a = check_skew(x)?;
    Ok(pfaffian_householder_in_place(&mut a))
}

pub(crate) fn pfaffian_householder_in_place(a: &mut ComplexMatrix) -> Complex64 {
    let n = a.nrows();
    let zero = Complex64::new(0.0, 0.0);
    let mut pf = Complex64::new(1.0, 0.0);
    let mut k = 0;
    while k + 1 < n {
        let m = n - k - 1;
        let x: Vec<Complex64> = (0..m).map(|i| a[(k + 1 + i, k)]).collect();
        let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail > 0.0 {
            let norm = (x[0].norm_sqr() + tail).sqrt();
            let phase = if x[0] == zero { Complex64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
            let alpha = -phase * norm;
            let mut v = x.clone();
            v[0] -= alpha;
            let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            let tau = 2.0 / vnorm2;
            // H = I − τ v v*, applied as A ← H A H̄ on rows/cols k+1.., and
            // on column k (row k follows by skew symmetry).
            let lo = k + 1;
            // left: A[lo.., j] -= τ v (v* A[lo.., j]) for j in k..n
            for j in k..n {
                let mut s = zero;
                for i in 0..m {
                    s += v[i].conj() * a[(lo + i, j)];
                }
                s *= tau;
                if s != zero {
                    for i in 0..m {
                        a[(lo + i, j)] -= v[i] * s;
                    }
                }
            }
            // right: A[i, lo..] -= τ (A[i, lo..] v̄) vᵀ for i in k..n
            for i in k..n {
                let mut s = zero;
                for j in 0..m {
                    s += a[(i, lo + j)] * v[j].conj();
                }
                s *= tau;
                if s != zero {
                    for j in 0..m {
                        a[(i, lo + j)] -= s * v[j];
                    }
                }
            }
            pf = -pf;
        }
        pf *= a[(k, k + 1)];
        if pf == zero {
            return zero;
        }
        k += 2;
    }
    pf
}

/// Pfaffian by the Parlett–Reid `L T Lᵀ` elimination with partial
/// pivoting; used to cross-check [`pfaffian`].
pub fn pfaffian_parlett_reid(x: &ComplexMatrix) -> Result<Complex64> {
    let mut a = check_skew(x)?;
    let n = a.nrows();
    let zero = Complex64::new(0.0, 0.0);
    let mut pf = Complex64::new(1.0, 0.0);
    let mut k = 0;
    while k + 1 < n {
        let (p, _) = (k + 1..n)
            .map(|i| (i, a[(i, k)].norm()))
            .fold((k + 1, -1.0), |best, c| if c.1 > best.1 { c } else { best });
        if p != k + 1 {
            a.swap_rows(p, k + 1);
            a.swap_columns(p, k + 1);
            pf = -pf;
        }
        let pivot = a[(k + 1, k)];
        if pivot == zero {
            return Ok(zero);
        }
        pf *= a[(k, k + 1)];
        // eliminate A[i, k] for i ≥ k+2 using row/col k+1 (unit-determinant congruence)
        for i in k + 2..n {
            let l = a[(i, k)] / pivot;
            if l == zero {
                continue;
            }
            for j in k..n {
                let t = a[(k + 1, j)];
                a[(i, j)] -= l * t;
            }
            for j in k..n {
                let t = a[(j, k + 1)];
                a[(j, i)] -= l * t;
            }
        }
        k += 2;
    }
    Ok(pf)
}
