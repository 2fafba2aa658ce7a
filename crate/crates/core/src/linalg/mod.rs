//! Dense complex matrix kernel.
//!
//! Everything downstream works with [`ComplexMatrix`], a plain
//! `nalgebra::DMatrix<Complex64>`. Validation (square, finite, unitary,
//! hermitian) happens at the API boundary of each operation rather than in a
//! wrapper type, so callers can use the full nalgebra arithmetic freely.

mod io;
mod trigpoly;

pub use io::{parse_matrix, read_matrix, write_matrix, format_matrix};
pub use trigpoly::TrigPoly;

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Tolerance used by every "is unitary / is hermitian" gate.
pub const UNITARY_TOL: f64 = 1e-8;

/// Eigenangles closer than this to -π are moved to +π.
const BRANCH_SNAP: f64 = 1e-9;

/// Above this dimension the operator norm switches from a full SVD to power
/// iteration on X*X.
const SVD_DIM_LIMIT: usize = 512;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

pub fn diagonal(entries: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&DVector::from_row_slice(entries))
}

/// Block matrix `[[a, b], [c, d]]` with square blocks of equal size.
pub fn block2(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    d: &ComplexMatrix,
) -> ComplexMatrix {
    let n = a.nrows();
    let mut out = ComplexMatrix::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((0, n), (n, n)).copy_from(b);
    out.view_mut((n, 0), (n, n)).copy_from(c);
    out.view_mut((n, n), (n, n)).copy_from(d);
    out
}

pub fn direct_sum(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (m, n) = (a.nrows(), b.nrows());
    let mut out = ComplexMatrix::zeros(m + n, m + n);
    out.view_mut((0, 0), (m, m)).copy_from(a);
    out.view_mut((m, m), (n, n)).copy_from(b);
    out
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

/// `½(a b + b a)`
pub fn half_anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    (a * b + b * a).scale(0.5)
}

pub fn hermitian_part(x: &ComplexMatrix) -> ComplexMatrix {
    (x + x.adjoint()).scale(0.5)
}

pub fn validate(x: &ComplexMatrix) -> Result<()> {
    if x.nrows() != x.ncols() {
        return Err(Error::InvalidMatrix(format!(
            "not square ({}x{})",
            x.nrows(),
            x.ncols()
        )));
    }
    if x.nrows() == 0 {
        return Err(Error::InvalidMatrix("empty matrix".into()));
    }
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    Ok(())
}

fn same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(())
}

/// Largest singular value, without input validation.
pub(crate) fn norm2(x: &ComplexMatrix) -> f64 {
    if x.nrows() == 0 {
        return 0.0;
    }
    if x.nrows() <= SVD_DIM_LIMIT && x.ncols() <= SVD_DIM_LIMIT {
        x.singular_values().max()
    } else {
        power_norm(x)
    }
}

fn power_norm(x: &ComplexMatrix) -> f64 {
    let gram = x.adjoint() * x;
    let n = gram.ncols();
    // deterministic, non-degenerate start vector
    let mut v = DVector::from_fn(n, |i, _| c(1.0 + (i as f64 * 0.618_033_988_75).fract(), 0.0));
    let mut last = 0.0;
    for _ in 0..10_000 {
        let w = &gram * &v;
        let lambda = w.norm();
        if lambda == 0.0 {
            return 0.0;
        }
        v = w.unscale(lambda);
        if (lambda - last).abs() <= 1e-12 * lambda {
            return lambda.sqrt();
        }
        last = lambda;
    }
    last.sqrt()
}

/// Operator (spectral) norm: the largest singular value.
pub fn operator_norm(x: &ComplexMatrix) -> Result<f64> {
    validate(x)?;
    Ok(norm2(x))
}

/// `‖UV − VU‖`.
pub fn commutator_norm(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    validate(u)?;
    validate(v)?;
    same_dim(u, v)?;
    Ok(norm2(&commutator(u, v)))
}

/// `‖X*X − I‖` measured in the Frobenius norm, which dominates the operator
/// norm, so passing the gate implies the operator-norm contract.
pub fn unitarity_defect(x: &ComplexMatrix) -> f64 {
    (x.adjoint() * x - identity(x.nrows())).norm()
}

pub fn hermiticity_defect(x: &ComplexMatrix) -> f64 {
    (x - x.adjoint()).norm()
}

pub fn check_unitary(x: &ComplexMatrix, tol: f64) -> Result<()> {
    validate(x)?;
    let defect = unitarity_defect(x);
    if defect > tol {
        return Err(Error::NotUnitary { defect, tol });
    }
    Ok(())
}

pub fn check_hermitian(x: &ComplexMatrix, tol: f64) -> Result<()> {
    validate(x)?;
    let defect = hermiticity_defect(x);
    if defect > tol * x.norm().max(1.0) {
        return Err(Error::NotHermitian { defect, tol });
    }
    Ok(())
}

pub fn determinant(x: &ComplexMatrix) -> Complex64 {
    x.clone().lu().determinant()
}

/// Spectral decomposition `V = Q diag(e^{iθ_j}) Q*` of a unitary matrix.
#[derive(Debug, Clone)]
pub struct UnitaryEig {
    /// Eigenangles in (−π, π].
    pub angles: Vec<f64>,
    /// Unitary matrix of eigenvectors (columns).
    pub vectors: ComplexMatrix,
}

impl UnitaryEig {
    pub fn dim(&self) -> usize {
        self.angles.len()
    }

    /// `Q diag(f(θ_j)) Q*` for a real-valued `f`; the result is hermitian.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> ComplexMatrix {
        let vals: Vec<f64> = self.angles.iter().map(|&t| f(t)).collect();
        self.apply_values(&vals)
    }

    /// Same as [`apply`](Self::apply) with precomputed values per eigenangle.
    pub fn apply_values(&self, vals: &[f64]) -> ComplexMatrix {
        let mut scaled = self.vectors.clone();
        for (j, &fj) in vals.iter().enumerate() {
            scaled.column_mut(j).scale_mut(fj);
        }
        hermitian_part(&(scaled * self.vectors.adjoint()))
    }

    pub fn apply_complex<F: Fn(f64) -> Complex64>(&self, f: F) -> ComplexMatrix {
        let mut scaled = self.vectors.clone();
        for (j, &t) in self.angles.iter().enumerate() {
            let fj = f(t);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= fj);
        }
        scaled * self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_complex(|t| Complex64::from_polar(1.0, t))
    }

    /// Smallest distance `|e^{iθ_j} + 1|` from the spectrum to −1.
    pub fn distance_to_minus_one(&self) -> f64 {
        self.angles
            .iter()
            .map(|&t| 2.0 * (t / 2.0).cos().abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Wraps an angle into (−π, π], sending values within `BRANCH_SNAP` of −π to +π.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta - 2.0 * PI * (theta / (2.0 * PI)).round();
    if t <= -PI + BRANCH_SNAP {
        t = PI;
    }
    t.min(PI)
}

/// Diagonalizes a unitary matrix.
///
/// The Cayley transform `i(I − wV)(I + wV)^{-1}` is hermitian, has the same
/// eigenvectors as `V`, and maps distinct eigenvalues to distinct reals, so a
/// hermitian eigensolver yields a full orthonormal eigenbasis of `V`. Its
/// pole `−w̄` is first placed at a fixed generic angle; if that lands close to
/// the spectrum, the pass is repeated with the pole in the middle of the
/// widest spectral gap found by the first pass.
pub fn unitary_eig(v: &ComplexMatrix) -> Result<UnitaryEig> {
    unitary_eig_tol(v, UNITARY_TOL)
}

const GENERIC_POLES: [f64; 3] = [2.718_281_828_459_045 - PI, 0.577_215_664_901_532_9, -1.414_213_562_373_095];

pub fn unitary_eig_tol(v: &ComplexMatrix, tol: f64) -> Result<UnitaryEig> {
    check_unitary(v, tol)?;
    let d = v.nrows();
    let min_sep = PI / (2.0 * d as f64);
    for &pole in &GENERIC_POLES {
        let Some(first) = cayley_eig(v, pole) else {
            continue;
        };
        if arc_distance(&first.angles, pole) >= min_sep {
            return Ok(first);
        }
        let mid = widest_gap_midpoint(&first.angles);
        if let Some(second) = cayley_eig(v, mid) {
            return Ok(second);
        }
    }
    Err(Error::NumericalInconsistency(
        "could not place the Cayley pole away from the spectrum".into(),
    ))
}

fn cayley_eig(v: &ComplexMatrix, pole: f64) -> Option<UnitaryEig> {
    let d = v.nrows();
    // eigenvalue e^{iθ} maps to tan((θ − pole + π)/2), singular at θ = pole
    let w = Complex64::from_polar(1.0, PI - pole);
    let id = identity(d);
    let wv = v * w;
    let cayley = (&id + &wv).lu().solve(&(&id - &wv))? * Complex64::new(0.0, 1.0);
    if cayley.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return None;
    }
    let eig = SymmetricEigen::new(hermitian_part(&cayley));
    let q = eig.eigenvectors;
    let vq = v * &q;
    let angles = (0..d)
        .map(|j| wrap_angle(q.column(j).dotc(&vq.column(j)).arg()))
        .collect();
    Some(UnitaryEig { angles, vectors: q })
}

fn arc_distance(angles: &[f64], at: f64) -> f64 {
    angles
        .iter()
        .map(|&t| wrap_angle(t - at).abs())
        .fold(f64::INFINITY, f64::min)
}

fn widest_gap_midpoint(angles: &[f64]) -> f64 {
    let mut sorted = angles.to_vec();
    sorted.sort_by(f64::total_cmp);
    let d = sorted.len();
    let mut best = (sorted[0] + 2.0 * PI - sorted[d - 1], sorted[d - 1]);
    for k in 1..d {
        let gap = sorted[k] - sorted[k - 1];
        if gap > best.0 {
            best = (gap, sorted[k - 1]);
        }
    }
    best.1 + best.0 / 2.0
}

/// `f[V]`: applies a 2π-periodic real function to the eigenangles of `V`.
pub fn apply_periodic<F: Fn(f64) -> f64>(f: F, v: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(unitary_eig(v)?.apply(f))
}

/// `Σ a_k V^k`, accumulated Horner-style in `V` for k > 0 and in `V*` for k < 0.
pub fn apply_trigpoly(p: &TrigPoly, v: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_unitary(v, UNITARY_TOL)?;
    let d = v.nrows();
    let n = p.degree() as i64;
    let id = identity(d);
    let vs = v.adjoint();
    let mut out = id.scale(1.0) * p.coeff(0);
    if n > 0 {
        let mut pos = id.clone() * p.coeff(n);
        let mut neg = id.clone() * p.coeff(-n);
        for k in (1..n).rev() {
            pos = v * pos + &id * p.coeff(k);
            neg = &vs * neg + &id * p.coeff(-k);
        }
        out += v * pos + &vs * neg;
    }
    Ok(out)
}

/// Unitary part `A (A*A)^{-1/2}` of an invertible matrix, computed from the
/// SVD `A = W Σ X*` as `W X*`.
pub fn unitary_part(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    validate(a)?;
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-12 * smax.max(1e-300)) {
        return Err(Error::SingularMatrix { sigma_min: smin });
    }
    let w = svd.u.expect("requested U");
    let xh = svd.v_t.expect("requested V^T");
    Ok(w * xh)
}

/// Real spectrum of a hermitian matrix, ascending.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(h, UNITARY_TOL)?;
    Ok(hermitian_eigenvalues(h))
}

pub(crate) fn hermitian_eigenvalues(h: &ComplexMatrix) -> Vec<f64> {
    let eig = SymmetricEigen::new(hermitian_part(h));
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

/// `e^{iH}` for hermitian `H`.
pub fn expi_hermitian(h: &ComplexMatrix) -> ComplexMatrix {
    let eig = SymmetricEigen::new(hermitian_part(h));
    let q = &eig.eigenvectors;
    let mut scaled = q.clone();
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, lambda);
        scaled.column_mut(j).iter_mut().for_each(|z| *z *= phase);
    }
    scaled * q.adjoint()
}

/// A validated pair of unitary matrices with its commutator norm.
#[derive(Debug, Clone)]
pub struct UnitaryPair {
    u: ComplexMatrix,
    v: ComplexMatrix,
    delta: f64,
    unitary_tol: f64,
}

impl UnitaryPair {
    pub fn new(u: ComplexMatrix, v: ComplexMatrix) -> Result<Self> {
        Self::with_tol(u, v, UNITARY_TOL)
    }

    pub fn with_tol(u: ComplexMatrix, v: ComplexMatrix, unitary_tol: f64) -> Result<Self> {
        check_unitary(&u, unitary_tol)?;
        check_unitary(&v, unitary_tol)?;
        same_dim(&u, &v)?;
        let delta = norm2(&commutator(&u, &v));
        Ok(Self {
            u,
            v,
            delta,
            unitary_tol,
        })
    }

    /// Applies the unitary part to both inputs first.
    pub fn from_polar(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        Self::new(unitary_part(a)?, unitary_part(b)?)
    }

    pub fn u(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn v(&self) -> &ComplexMatrix {
        &self.v
    }

    /// `‖[U, V]‖`
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn unitary_tol(&self) -> f64 {
        self.unitary_tol
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    pub fn into_parts(self) -> (ComplexMatrix, ComplexMatrix) {
        (self.u, self.v)
    }

    /// The pair `(V, U)`.
    pub fn swapped(&self) -> Self {
        Self {
            u: self.v.clone(),
            v: self.u.clone(),
            delta: self.delta,
            unitary_tol: self.unitary_tol,
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        Self::with_tol(
            direct_sum(&self.u, &other.u),
            direct_sum(&self.v, &other.v),
            self.unitary_tol.max(other.unitary_tol),
        )
    }

    /// `(W U W*, W V W*)`
    pub fn conjugated(&self, w: &ComplexMatrix) -> Result<Self> {
        check_unitary(w, self.unitary_tol)?;
        same_dim(w, &self.u)?;
        let wh = w.adjoint();
        Self::with_tol(w * &self.u * &wh, w * &self.v * &wh, self.unitary_tol)
    }

    /// `‖U − U₁‖ + ‖V − V₁‖`
    pub fn distance(&self, other: &Self) -> Result<f64> {
        same_dim(&self.u, &other.u)?;
        Ok(norm2(&(&self.u - &other.u)) + norm2(&(&self.v - &other.v)))
    }

    /// `V U V* U*`
    pub fn group_commutator(&self) -> ComplexMatrix {
        &self.v * &self.u * self.v.adjoint() * self.u.adjoint()
    }
}
