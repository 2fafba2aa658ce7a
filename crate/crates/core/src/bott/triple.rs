use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::fourier::{fourier_coefficients_h, FourierTable, DEFAULT_SERIES_K};
use crate::linalg::TrigPoly;

/// `(k, a)` pairs with `f(x) = Σ a sin(kx)`.
pub const F_SINE: [(usize, f64); 3] = [(1, 150.0 / 128.0), (3, 25.0 / 128.0), (5, 3.0 / 128.0)];

pub fn eval_f(x: f64) -> f64 {
    F_SINE.iter().map(|&(k, a)| a * (k as f64 * x).sin()).sum()
}

/// `√(407/512) |cos x|³ √(1 + 96/407 cos 2x + 9/407 cos 4x)`, which equals
/// `√(1 − f(x)²)`.
fn envelope(x: f64) -> f64 {
    let c = x.cos();
    let inner = 1.0 + 96.0 / 407.0 * (2.0 * x).cos() + 9.0 / 407.0 * (4.0 * x).cos();
    (407.0f64 / 512.0).sqrt() * c.abs().powi(3) * inner.sqrt()
}

/// Nonzero only where `cos x > 0`, i.e. on (−π/2, π/2) mod 2π.
pub fn eval_h(x: f64) -> f64 {
    if x.cos() > 0.0 {
        envelope(x)
    } else {
        0.0
    }
}

/// Nonzero only where `cos x < 0`.
pub fn eval_g(x: f64) -> f64 {
    if x.cos() < 0.0 {
        envelope(x)
    } else {
        0.0
    }
}

/// `f` with its values outside [−π/2, π/2] replaced by ±1.
pub fn eval_f_clamped(x: f64) -> f64 {
    let x = crate::linalg::wrap_angle(x);
    if x >= PI / 2.0 {
        1.0
    } else if x <= -PI / 2.0 {
        -1.0
    } else {
        eval_f(x)
    }
}

/// The functions `f`, `g`, `h` that define the Bott matrix, with their
/// degree-5 Fourier approximants.
#[derive(Debug, Clone)]
pub struct StandardTriple {
    pub f5: TrigPoly,
    pub g5: TrigPoly,
    pub h5: TrigPoly,
    pub fourier: FourierTable,
}

impl StandardTriple {
    pub fn new() -> Self {
        let fourier = fourier_coefficients_h(5, DEFAULT_SERIES_K)
            .expect("default series length is certified");
        let mut sine = [0.0; 5];
        for &(k, a) in &F_SINE {
            sine[k - 1] = a;
        }
        let f5 = TrigPoly::from_sine(&sine);
        let h5 = symmetric_poly(&fourier.c);
        let b: Vec<f64> = fourier.b();
        let g5 = symmetric_poly(&b);
        Self { f5, g5, h5, fourier }
    }

    /// Shared instance; the coefficients are computed once per process.
    pub fn shared() -> &'static StandardTriple {
        static TRIPLE: OnceLock<StandardTriple> = OnceLock::new();
        TRIPLE.get_or_init(StandardTriple::new)
    }

    pub fn f(&self, x: f64) -> f64 {
        eval_f(x)
    }

    pub fn g(&self, x: f64) -> f64 {
        eval_g(x)
    }

    pub fn h(&self, x: f64) -> f64 {
        eval_h(x)
    }
}

impl Default for StandardTriple {
    fn default() -> Self {
        Self::new()
    }
}

/// `Σ_{|n|≤N} c_{|n|} e^{inx}` from `c_0..c_N`.
pub(crate) fn symmetric_poly(c: &[f64]) -> TrigPoly {
    let n = c.len() - 1;
    let coeffs = (0..=2 * n)
        .map(|j| Complex64::new(c[(j as i64 - n as i64).unsigned_abs() as usize], 0.0))
        .collect();
    TrigPoly::new(coeffs).expect("odd length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn point_values() {
        assert_abs_diff_eq!(eval_f(0.0), 0.0);
        assert_abs_diff_eq!(eval_g(0.0), 0.0);
        assert_abs_diff_eq!(eval_h(0.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eval_f(PI / 2.0), 1.0, epsilon = 1e-15);
        assert!(eval_g(PI / 2.0).abs() < 1e-15 && eval_h(PI / 2.0).abs() < 1e-15);
        assert_abs_diff_eq!(eval_f(PI), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eval_h(PI), 0.0);
        assert_abs_diff_eq!(eval_g(PI), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn pythagorean_identity_and_disjoint_support() {
        let n = 100_000;
        for j in 0..=n {
            let x = -PI + 2.0 * PI * j as f64 / n as f64;
            let (f, g, h) = (eval_f(x), eval_g(x), eval_h(x));
            assert!((f * f + g * g + h * h - 1.0).abs() < 1e-12, "x={x}");
            assert_eq!(g * h, 0.0);
            let c = x.cos();
            let closed = 407.0 / 512.0 * c.powi(6) * (1.0 + 96.0 / 407.0 * (2.0 * x).cos() + 9.0 / 407.0 * (4.0 * x).cos());
            assert!((f * f + closed - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn degree_five_approximants() {
        let t = StandardTriple::shared();
        assert_abs_diff_eq!(t.f5.eval_real(PI / 2.0), 1.0, epsilon = 1e-15);
        let mut sup_h = 0.0f64;
        let mut sup_g = 0.0f64;
        let (mut lo_h, mut hi_h) = (0.0f64, 0.0f64);
        let n = 1 << 18;
        for j in 0..n {
            let x = -PI + 2.0 * PI * j as f64 / n as f64;
            let e = eval_h(x) - t.h5.eval_real(x);
            sup_h = sup_h.max(e.abs());
            lo_h = lo_h.min(e);
            hi_h = hi_h.max(e);
            sup_g = sup_g.max((eval_g(x) - t.g5.eval_real(x)).abs());
            assert!((eval_f(x) - t.f5.eval_real(x)).abs() < 1e-14);
        }
        // h − h₅ is not centred: its range is about [−0.001722, 0.002388]
        assert!(sup_h <= 0.0023885, "{sup_h}");
        assert!(sup_g <= 0.0023885, "{sup_g}");
        assert!(lo_h >= -0.001722 - 1e-6 && hi_h <= 0.0023885, "{lo_h} {hi_h}");
        assert!(hi_h - lo_h <= 0.004110);
        assert!(t.g5.is_real_valued(0.0) && t.h5.is_real_valued(0.0));
    }
}
