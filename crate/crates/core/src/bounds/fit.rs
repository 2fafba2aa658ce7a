//! Cosine/sine series and the linear program that trades slope for offset.

use std::f64::consts::PI;

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, NonnegativeConeT, SolverStatus,
};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::TrigPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// `Σ c_k cos(kx)`
    Even,
    /// `Σ c_k sin(kx)`
    Odd,
}

impl Parity {
    fn basis(self, k: usize, x: f64) -> f64 {
        match self {
            Parity::Even => (k as f64 * x).cos(),
            Parity::Odd => (k as f64 * x).sin(),
        }
    }
}

/// Real series `c_0 + Σ_{k≥1} c_k cos(kx)` or `Σ_{k≥1} c_k sin(kx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParitySeries {
    pub parity: Parity,
    /// `coeffs[k] = c_k`; `c_0` is unused for odd series.
    pub coeffs: Vec<f64>,
}

impl ParitySeries {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Trapezoid-rule coefficients of a function of the given parity.
    pub fn from_samples<F: Fn(f64) -> f64>(f: F, parity: Parity, degree: usize, samples: usize) -> Self {
        let h = 2.0 * PI / samples as f64;
        let mut coeffs = vec![0.0; degree + 1];
        let mut terms = vec![0.0; degree + 1];
        for j in 0..samples {
            let x = -PI + j as f64 * h;
            let v = f(x);
            basis_values(parity, x, &mut terms);
            for (c, t) in coeffs.iter_mut().zip(&terms) {
                *c += v * t;
            }
        }
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c *= if k == 0 { 1.0 } else { 2.0 } / samples as f64;
        }
        if parity == Parity::Odd {
            coeffs[0] = 0.0;
        }
        Self { parity, coeffs }
    }

    pub fn truncate(&self, degree: usize) -> Self {
        Self {
            parity: self.parity,
            coeffs: self.coeffs[..=degree.min(self.degree())].to_vec(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (0..=self.degree())
            .filter(|&k| k > 0 || self.parity == Parity::Even)
            .map(|k| self.coeffs[k] * self.parity.basis(k, x))
            .sum()
    }

    /// `Σ |k c_k|`, the `Σ_{|k|≤n} |k a_k|` of the exponential form.
    pub fn derivative_l1(&self) -> f64 {
        self.coeffs.iter().enumerate().map(|(k, c)| k as f64 * c.abs()).sum()
    }

    pub fn to_trigpoly(&self) -> TrigPoly {
        let n = self.degree();
        let mut a = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        match self.parity {
            Parity::Even => {
                a[n] = Complex64::new(self.coeffs[0], 0.0);
                for k in 1..=n {
                    a[n + k] = Complex64::new(self.coeffs[k] / 2.0, 0.0);
                    a[n - k] = a[n + k];
                }
            }
            Parity::Odd => {
                for k in 1..=n {
                    a[n + k] = Complex64::new(0.0, -self.coeffs[k] / 2.0);
                    a[n - k] = Complex64::new(0.0, self.coeffs[k] / 2.0);
                }
            }
        }
        TrigPoly::new(a).expect("odd length")
    }
}

/// `cos(kx)` or `sin(kx)` for `k = 0..len` by the Chebyshev recurrence.
pub(crate) fn basis_values(parity: Parity, x: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    let two_cos = 2.0 * x.cos();
    let (mut prev, mut cur) = match parity {
        Parity::Even => (x.cos(), 1.0),
        Parity::Odd => (-x.sin(), 0.0),
    };
    for slot in out.iter_mut() {
        *slot = cur;
        let next = two_cos * cur - prev;
        prev = cur;
        cur = next;
    }
}

/// Series of degree `degree` (no constant term) minimising
/// `δ Σ k|c_k| + diam(F − p)` over the samples `values[j] = F(π j / (M−1))`.
///
/// For an even `F` the diameter over the circle is `max − min` on `[0, π]`;
/// for an odd one it is `2 max |F − p|`.
pub fn fit_parity_series(values: &[f64], parity: Parity, degree: usize, delta: f64) -> Result<ParitySeries> {
    let m = values.len();
    if m < 2 || degree == 0 {
        return Err(Error::Solver("need at least two samples and degree 1".into()));
    }
    let n = degree;
    let even = parity == Parity::Even;
    // variables: c_1..c_n, t_1..t_n, u, (l)
    let nv = 2 * n + if even { 2 } else { 1 };
    let u = 2 * n;
    let l = 2 * n + 1;
    let rows = 2 * m + 2 * n;
    let xs: Vec<f64> = (0..m).map(|j| PI * j as f64 / (m - 1) as f64).collect();
    let mut phi = vec![vec![0.0; n + 1]; m];
    for (x, row) in xs.iter().zip(phi.iter_mut()) {
        basis_values(parity, *x, row);
    }

    // rows 0..m:      −p(x_j) − u ≤ −F_j
    // rows m..2m:     p(x_j) + l ≤ F_j   (even)   or   p(x_j) − u ≤ F_j (odd)
    // rows 2m + 2k:   c_k − t_k ≤ 0,   2m + 2k + 1:  −c_k − t_k ≤ 0
    let mut colptr = Vec::with_capacity(nv + 1);
    let mut rowval = Vec::new();
    let mut nzval = Vec::new();
    colptr.push(0);
    for k in 1..=n {
        for j in 0..m {
            rowval.push(j);
            nzval.push(-phi[j][k]);
        }
        for j in 0..m {
            rowval.push(m + j);
            nzval.push(phi[j][k]);
        }
        rowval.push(2 * m + 2 * (k - 1));
        nzval.push(1.0);
        rowval.push(2 * m + 2 * (k - 1) + 1);
        nzval.push(-1.0);
        colptr.push(rowval.len());
    }
    for k in 1..=n {
        rowval.push(2 * m + 2 * (k - 1));
        nzval.push(-1.0);
        rowval.push(2 * m + 2 * (k - 1) + 1);
        nzval.push(-1.0);
        colptr.push(rowval.len());
    }
    for j in 0..m {
        rowval.push(j);
        nzval.push(-1.0);
    }
    if !even {
        for j in 0..m {
            rowval.push(m + j);
            nzval.push(-1.0);
        }
    }
    colptr.push(rowval.len());
    if even {
        for j in 0..m {
            rowval.push(m + j);
            nzval.push(1.0);
        }
        colptr.push(rowval.len());
    }
    let a = CscMatrix::new(rows, nv, colptr, rowval, nzval);
    let mut b = Vec::with_capacity(rows);
    b.extend(values.iter().map(|v| -v));
    b.extend(values.iter().copied());
    b.extend(std::iter::repeat(0.0).take(2 * n));

    let mut q = vec![0.0; nv];
    for k in 1..=n {
        q[n + k - 1] = delta * k as f64;
    }
    if even {
        q[u] = 1.0;
        q[l] = -1.0;
    } else {
        q[u] = 2.0;
    }
    let p = CscMatrix::<f64>::zeros((nv, nv));
    let cones = [NonnegativeConeT(rows)];
    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .max_iter(200)
        .build()
        .map_err(|e| Error::Solver(format!("{e:?}")))?;
    let mut solver =
        DefaultSolver::new(&p, &q, &a, &b, &cones, settings).map_err(|e| Error::Solver(format!("{e:?}")))?;
    solver.solve();
    match solver.solution.status {
        SolverStatus::Solved | SolverStatus::AlmostSolved => {}
        other => return Err(Error::Solver(format!("status {other:?}"))),
    }
    let mut coeffs = vec![0.0; n + 1];
    coeffs[1..].copy_from_slice(&solver.solution.x[..n]);
    Ok(ParitySeries { parity, coeffs })
}
