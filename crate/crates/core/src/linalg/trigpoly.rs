use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Trigonometric polynomial `p(x) = Σ_{k=-n}^{n} a_k e^{ikx}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    /// `coeffs[k + n] = a_k`
    coeffs: Vec<Complex64>,
}

impl TrigPoly {
    /// Builds from `a_{-n}, …, a_n`; the list must have odd length.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::InvalidPolynomial(format!(
                "coefficient list has even length {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidPolynomial("non-finite coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn zero() -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0)],
        }
    }

    /// `Σ b_k sin(kx)` with `b[0]` multiplying `sin(x)`.
    pub fn from_sine(b: &[f64]) -> Self {
        let n = b.len();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        for (j, &bk) in b.iter().enumerate() {
            let k = j + 1;
            coeffs[n + k] = Complex64::new(0.0, -bk / 2.0);
            coeffs[n - k] = Complex64::new(0.0, bk / 2.0);
        }
        Self { coeffs }
    }

    /// `b_0 + Σ b_k cos(kx)`.
    pub fn from_cosine(b: &[f64]) -> Self {
        let n = b.len().saturating_sub(1);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        if let Some(&b0) = b.first() {
            coeffs[n] = Complex64::new(b0, 0.0);
        }
        for (k, &bk) in b.iter().enumerate().skip(1) {
            coeffs[n + k] = Complex64::new(bk / 2.0, 0.0);
            coeffs[n - k] = Complex64::new(bk / 2.0, 0.0);
        }
        Self { coeffs }
    }

    /// Degree-`n` Fourier coefficients of a 2π-periodic function from the
    /// trapezoid rule on `samples` equispaced nodes.
    pub fn from_samples<F: Fn(f64) -> f64>(f: F, n: usize, samples: usize) -> Self {
        let h = 2.0 * PI / samples as f64;
        let vals: Vec<f64> = (0..samples).map(|j| f(-PI + j as f64 * h)).collect();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        for k in 0..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &v) in vals.iter().enumerate() {
                let x = -PI + j as f64 * h;
                acc += Complex64::from_polar(v, -(k as f64) * x);
            }
            let ak = acc / samples as f64;
            coeffs[n + k] = ak;
            coeffs[n - k] = ak.conj();
        }
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() / 2
    }

    /// `a_k`, zero outside the stored range.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let n = self.degree() as i64;
        if k.abs() > n {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + n) as usize]
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Horner's rule in `z = e^{ix}`, then a shift by `z^{−n}`.
    pub fn eval(&self, x: f64) -> Complex64 {
        let n = self.degree();
        let z = Complex64::from_polar(1.0, x);
        let acc = self
            .coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
        acc * Complex64::from_polar(1.0, -(n as f64) * x)
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.eval(x).re
    }

    /// `Σ |k a_k|`, an upper bound for `sup |p'|`.
    pub fn derivative_l1(&self) -> f64 {
        let n = self.degree() as i64;
        (-n..=n).map(|k| (k as f64 * self.coeff(k)).norm()).sum()
    }

    /// Keeps the terms with `|k| ≤ m`.
    pub fn truncate(&self, m: usize) -> Self {
        let m = m.min(self.degree()) as i64;
        Self {
            coeffs: (-m..=m).map(|k| self.coeff(k)).collect(),
        }
    }

    pub fn is_real_valued(&self, tol: f64) -> bool {
        let n = self.degree() as i64;
        (0..=n).all(|k| (self.coeff(-k) - self.coeff(k).conj()).norm() <= tol)
    }
}
