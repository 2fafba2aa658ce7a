//! Fourier coefficients `c_n` of `h`.
//!
//! On its support `h = √(407/512) cos³x √(1 + w(x))` with
//! `w = 96/407 cos 2x + 9/407 cos 4x`, `|w| ≤ 105/407`. Expanding the square
//! root as a binomial series gives `c_n = Σ_k I_{n,k}` with
//!
//! ```text
//! I_{n,k} = (1/2π) √(407/512) C(1/2, k) ∫_{−π/2}^{π/2} cos³x w(x)^k cos(nx) dx
//! ```
//!
//! and each integral is evaluated by adaptive Gauss–Kronrod quadrature.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::integrate;

pub const DEFAULT_SERIES_K: usize = 7;
pub const MAX_FOURIER_N: usize = 16;

/// Per-term absolute quadrature tolerance.
const TERM_TOL: f64 = 1e-9;

/// Target absolute accuracy of each `c_n`.
pub const COEFF_ACCURACY: f64 = 1e-6;

const RATIO: f64 = 105.0 / 407.0;

/// Reference values of `c_0..c_5`, rounded to six digits.
pub const C_TABLE: [f64; 6] = [0.202047, 0.179940, 0.125655, 0.066010, 0.023445, 0.003886];

#[derive(Debug, Clone, PartialEq)]
pub struct FourierTable {
    /// `c_0..c_N`; `c_{−n} = c_n`.
    pub c: Vec<f64>,
    pub series_k: usize,
    /// Bound on the discarded binomial terms.
    pub tail_bound: f64,
    /// Accumulated quadrature error estimate.
    pub quadrature_error: f64,
}

impl FourierTable {
    /// Coefficients of `g`: `b_n = (−1)^n c_n`, since `g(x) = h(x + π)`.
    pub fn b(&self) -> Vec<f64> {
        self.c
            .iter()
            .enumerate()
            .map(|(n, &c)| if n % 2 == 0 { c } else { -c })
            .collect()
    }

    /// Imaginary part of `a_n`, the coefficients of `f`.
    pub fn a_imag(n: usize) -> f64 {
        match n {
            1 => -150.0 / 256.0,
            3 => -25.0 / 256.0,
            5 => -3.0 / 256.0,
            _ => 0.0,
        }
    }

    /// `Σ_{|n|≤N} |n c_n|`
    pub fn derivative_l1(&self, n: usize) -> f64 {
        2.0 * self.c.iter().take(n + 1).enumerate().map(|(k, c)| k as f64 * c.abs()).sum::<f64>()
    }
}

fn binomial_half(k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (0.5 - j as f64) / (j as f64 + 1.0))
}

/// Degree-`k` Taylor polynomial of `√(1 + x)` at 0.
pub fn taylor_sqrt(k: usize, x: f64) -> f64 {
    (0..=k).map(|j| binomial_half(j) * x.powi(j as i32)).sum()
}

/// `½ √(407/512) |√(1 − r) − T_K(−r)|` with `r = 105/407`: each discarded
/// term is at most `(1/2π) √(407/512) |C(1/2,k)| r^k · π`.
pub fn series_tail_bound(series_k: usize) -> f64 {
    0.5 * (407.0f64 / 512.0).sqrt() * ((1.0 - RATIO).sqrt() - taylor_sqrt(series_k, -RATIO)).abs()
}

fn weight(x: f64) -> f64 {
    96.0 / 407.0 * (2.0 * x).cos() + 9.0 / 407.0 * (4.0 * x).cos()
}

/// `I_{n,k}` and its quadrature error estimate.
pub fn series_term(n: usize, k: usize) -> (f64, f64) {
    let scale = (407.0f64 / 512.0).sqrt() * binomial_half(k) / (2.0 * PI);
    // even integrand: twice the integral over [0, π/2]
    let (v, e) = integrate(
        |x| x.cos().powi(3) * weight(x).powi(k as i32) * (n as f64 * x).cos(),
        0.0,
        PI / 2.0,
        TERM_TOL / (2.0 * scale.abs()).max(1e-300),
    );
    (2.0 * scale * v, 2.0 * scale.abs() * e)
}

/// `c_0..c_max_n` from `series_k + 1` binomial terms.
pub fn fourier_coefficients_h(max_n: usize, series_k: usize) -> Result<FourierTable> {
    if max_n > MAX_FOURIER_N {
        return Err(Error::InvalidPolynomial(format!(
            "max_n = {max_n} exceeds {MAX_FOURIER_N}"
        )));
    }
    let tail_bound = series_tail_bound(series_k);
    let mut c = Vec::with_capacity(max_n + 1);
    let mut quadrature_error = 0.0f64;
    for n in 0..=max_n {
        let mut sum = 0.0;
        let mut err = 0.0;
        for k in 0..=series_k {
            let (v, e) = series_term(n, k);
            sum += v;
            err += e;
        }
        quadrature_error = quadrature_error.max(err);
        c.push(sum);
    }
    if series_k < DEFAULT_SERIES_K || tail_bound + quadrature_error > COEFF_ACCURACY {
        return Err(Error::AccuracyNotCertified { series_k, tail_bound });
    }
    Ok(FourierTable {
        c,
        series_k,
        tail_bound,
        quadrature_error,
    })
}

/// Same series without the accuracy gate, for exploring short expansions.
pub fn fourier_coefficients_h_uncertified(max_n: usize, series_k: usize) -> FourierTable {
    let c = (0..=max_n)
        .map(|n| (0..=series_k).map(|k| series_term(n, k).0).sum())
        .collect();
    FourierTable {
        c,
        series_k,
        tail_bound: series_tail_bound(series_k),
        quadrature_error: f64::NAN,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bott::triple::eval_h;

    #[test]
    fn reproduces_reference_table() {
        let t = fourier_coefficients_h(5, DEFAULT_SERIES_K).unwrap();
        for (n, (&got, &want)) in t.c.iter().zip(C_TABLE.iter()).enumerate() {
            assert!((got - want).abs() <= 1e-6, "c_{n}: {got} vs {want}");
        }
        let b = t.b();
        for n in 0..=5 {
            assert_eq!(b[n], if n % 2 == 0 { t.c[n] } else { -t.c[n] });
        }
        assert!(t.tail_bound < 1e-6);
    }

    #[test]
    fn short_series_is_not_certified() {
        assert!(matches!(
            fourier_coefficients_h(5, 6),
            Err(Error::AccuracyNotCertified { series_k: 6, .. })
        ));
    }

    #[test]
    fn agrees_with_direct_quadrature() {
        // independent evaluation straight from the closed form of h
        let t = fourier_coefficients_h(8, 10).unwrap();
        for n in 0..=8 {
            let (direct, _) = integrate(|x| eval_h(x) * (n as f64 * x).cos(), 0.0, PI / 2.0, 1e-13);
            let direct = direct / PI;
            assert!((direct - t.c[n]).abs() < 1e-6, "n={n}");
        }
    }

    #[test]
    fn taylor_polynomial() {
        assert!((taylor_sqrt(30, 0.2) - 1.2f64.sqrt()).abs() < 1e-15);
        assert_eq!(taylor_sqrt(0, 0.7), 1.0);
        assert!((taylor_sqrt(1, 0.5) - 1.25).abs() < 1e-15);
    }
}
