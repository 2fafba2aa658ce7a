//! The Bott matrix `B(U,V)` and the integer Bott index κ.

mod fourier;
mod triple;

pub use fourier::{
    fourier_coefficients_h, fourier_coefficients_h_uncertified, series_tail_bound, series_term,
    taylor_sqrt, FourierTable, COEFF_ACCURACY, C_TABLE, DEFAULT_SERIES_K, MAX_FOURIER_N,
};
pub use triple::{eval_f, eval_f_clamped, eval_g, eval_h, StandardTriple, F_SINE};
pub(crate) use triple::symmetric_poly;

use crate::error::{Error, Result};
use crate::linalg::{
    apply_trigpoly, block2, half_anticommutator, hermitian_eigenvalues, hermitian_part, norm2,
    unitary_eig, ComplexMatrix, UnitaryPair,
};

/// Largest commutator norm for which the index is certified.
pub const KAPPA_THRESHOLD: f64 = 0.206007;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Trig,
    Log,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Trig => "trig",
            Method::Log => "log",
        })
    }
}

#[derive(Debug, Clone)]
pub struct BottMatrix {
    pub matrix: ComplexMatrix,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub delta: f64,
    /// `min |λ|`
    pub gap: f64,
    pub method: Method,
}

impl BottMatrix {
    pub(crate) fn from_matrix(matrix: ComplexMatrix, delta: f64, method: Method) -> Self {
        let matrix = hermitian_part(&matrix);
        let eigenvalues = hermitian_eigenvalues(&matrix);
        let gap = eigenvalues.iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min);
        Self {
            matrix,
            eigenvalues,
            delta,
            gap,
            method,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `‖B² − I‖`, read off the spectrum.
    pub fn square_defect(&self) -> f64 {
        self.eigenvalues.iter().map(|l| (l * l - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// `[[f, g + ½{h,U}], [g + ½{h,U*}, −f]]`
pub fn assemble(u: &ComplexMatrix, f: &ComplexMatrix, g: &ComplexMatrix, h: &ComplexMatrix) -> ComplexMatrix {
    let us = u.adjoint();
    let top = g + half_anticommutator(h, u);
    let bottom = g + half_anticommutator(h, &us);
    block2(f, &top, &bottom, &(-f))
}

/// `(f[V], g[V], h[V])` for the standard triple.
pub fn functional_calculus(
    v: &ComplexMatrix,
    triple: &StandardTriple,
    use_trigpoly: bool,
) -> Result<(ComplexMatrix, ComplexMatrix, ComplexMatrix)> {
    if use_trigpoly {
        let f = hermitian_part(&apply_trigpoly(&triple.f5, v)?);
        let g = hermitian_part(&apply_trigpoly(&triple.g5, v)?);
        let h = hermitian_part(&apply_trigpoly(&triple.h5, v)?);
        Ok((f, g, h))
    } else {
        let eig = unitary_eig(v)?;
        Ok((eig.apply(eval_f), eig.apply(eval_g), eig.apply(eval_h)))
    }
}

/// Builds `B(U,V)` from the closed-form triple or, with `use_trigpoly`, from
/// the degree-5 approximants.
pub fn build_b(pair: &UnitaryPair, triple: &StandardTriple, use_trigpoly: bool) -> Result<BottMatrix> {
    let (f, g, h) = functional_calculus(pair.v(), triple, use_trigpoly)?;
    Ok(BottMatrix::from_matrix(
        assemble(pair.u(), &f, &g, &h),
        pair.delta(),
        Method::Trig,
    ))
}

/// Default tolerance for [`signature`] on a matrix of dimension `dim`.
pub fn default_gap_tol(dim: usize) -> f64 {
    1e-8 * dim as f64
}

fn signature_of(eigenvalues: &[f64], gap_tol: f64) -> Result<i64> {
    let mut sig = 0i64;
    for &l in eigenvalues {
        if l.abs() < gap_tol {
            return Err(Error::GapClosed { eigenvalue: l, gap_tol });
        }
        sig += if l > 0.0 { 1 } else { -1 };
    }
    Ok(sig)
}

/// Number of positive minus number of negative eigenvalues.
pub fn signature(h: &ComplexMatrix, gap_tol: f64) -> Result<i64> {
    crate::linalg::check_hermitian(h, crate::linalg::UNITARY_TOL)?;
    signature_of(&hermitian_eigenvalues(h), gap_tol)
}

pub fn measured_gap(b: &BottMatrix) -> f64 {
    b.gap
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BottOptions {
    pub use_trigpoly: bool,
    /// Compute past the threshold, marking the result uncertified.
    pub allow_uncertified: bool,
    /// Defaults to [`default_gap_tol`].
    pub gap_tol: Option<f64>,
}

impl Default for BottOptions {
    fn default() -> Self {
        Self {
            use_trigpoly: false,
            allow_uncertified: false,
            gap_tol: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BottIndex {
    /// Oriented so that κ agrees with the winding number ω.
    pub kappa: i64,
    /// `½ Sig B(U,V)` of the matrix as assembled; equals `−κ`.
    pub half_signature: i64,
    pub certified: bool,
    pub gap: f64,
    pub delta: f64,
}

pub fn bott_index(pair: &UnitaryPair) -> Result<BottIndex> {
    bott_index_with(pair, &BottOptions::default())
}

pub fn bott_index_with(pair: &UnitaryPair, opts: &BottOptions) -> Result<BottIndex> {
    let certified = pair.delta() <= KAPPA_THRESHOLD;
    if !certified && !opts.allow_uncertified {
        return Err(Error::ThresholdExceeded {
            delta: pair.delta(),
            threshold: KAPPA_THRESHOLD,
        });
    }
    let b = build_b(pair, StandardTriple::shared(), opts.use_trigpoly)?;
    bott_index_of(&b, opts.gap_tol, certified)
}

pub(crate) fn bott_index_of(b: &BottMatrix, gap_tol: Option<f64>, certified: bool) -> Result<BottIndex> {
    let tol = gap_tol.unwrap_or_else(|| default_gap_tol(b.dim()));
    let sig = signature_of(&b.eigenvalues, tol)?;
    if sig % 2 != 0 {
        return Err(Error::NumericalInconsistency(format!("odd signature {sig}")));
    }
    Ok(BottIndex {
        kappa: -sig / 2,
        half_signature: sig / 2,
        certified,
        gap: b.gap,
        delta: b.delta,
    })
}

/// Both sides of `‖B² − I‖ ≤ 2‖[h[V],U]‖ + ‖[f[V],U]‖`.
pub fn square_defect_bound(pair: &UnitaryPair) -> Result<(f64, f64)> {
    let (f, g, h) = functional_calculus(pair.v(), StandardTriple::shared(), false)?;
    let u = pair.u();
    let b = assemble(u, &f, &g, &h);
    let lhs = norm2(&(&b * &b - crate::linalg::identity(b.nrows())));
    let rhs = 2.0 * norm2(&(&h * u - u * &h)) + norm2(&(&f * u - u * &f));
    Ok((lhs, rhs))
}

/// `(1/5)√(1 − 5δ²) + (1/5)√(1 − 5δ₁²)`: pairs with different κ are at
/// least this far apart.
pub fn kappa_distance_formula(delta_a: f64, delta_b: f64) -> f64 {
    0.2 * (1.0 - 5.0 * delta_a * delta_a).max(0.0).sqrt() + 0.2 * (1.0 - 5.0 * delta_b * delta_b).max(0.0).sqrt()
}
