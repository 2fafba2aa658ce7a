//! The log-method Bott matrix `B_L(U,V)`.
//!
//! With `V = e^{iK}` and `−π ≤ K ≤ π`, the triple `(x/π, 0, √(1 − x²/π²))`
//! applied to `K` replaces `(f, g, h)` applied to `V`.

use std::f64::consts::PI;

use crate::bott::{assemble, BottMatrix, Method};
use crate::error::{Error, Result};
use crate::linalg::{unitary_eig, ComplexMatrix, UnitaryEig, UnitaryPair};
use crate::selfdual::{anti_symmetrize, sign_of_bott, DualStructure, Kappa2, Kappa2Options, SelfDualPair};

/// Largest commutator norm for which the log method provably agrees with
/// the trig method.
pub const LOG_THRESHOLD: f64 = 0.125;

/// Eigenangles within this distance of the cut are all placed at +π, so a
/// Kramers pair split across −1 by roundoff lands on one side.
pub const CUT_CLUSTER: f64 = 1e-8;

/// Self-duality drift of `K` beyond which the logarithm is rejected.
pub const MAX_LOG_DRIFT: f64 = 1e-6;

pub fn f1(x: f64) -> f64 {
    x / PI
}

pub fn h1(x: f64) -> f64 {
    (1.0 - (x / PI).powi(2)).max(0.0).sqrt()
}

#[derive(Debug, Clone)]
pub struct PrincipalLog {
    /// Hermitian with `e^{iK} = V`.
    pub k: ComplexMatrix,
    /// Eigenangles of `K` in the eigenbasis of `V`.
    pub angles: Vec<f64>,
    /// `min_j |e^{iθ_j} + 1|`.
    pub branch_margin: f64,
    /// Self-duality drift removed from `K` (0 without a structure).
    pub drift: f64,
    eig: UnitaryEig,
}

impl PrincipalLog {
    /// `φ(K)` for a function on `[−π, π]`, symmetrized like `K`.
    pub fn apply<F: Fn(f64) -> f64>(&self, phi: F, ds: Option<&DualStructure>) -> Result<ComplexMatrix> {
        let vals: Vec<f64> = self.angles.iter().map(|&t| phi(t)).collect();
        let m = self.eig.apply_values(&vals);
        match ds {
            Some(ds) => Ok(ds.symmetrize(&m)?.0),
            None => Ok(m),
        }
    }
}

fn snap_cut(angles: &[f64]) -> Vec<f64> {
    angles
        .iter()
        .map(|&t| if PI - t.abs() < CUT_CLUSTER { PI } else { t })
        .collect()
}

/// `K` with `V = e^{iK}`, eigenvalue −1 mapped to `K = π`. With a dual
/// structure, `K` is symmetrized to `K^♯ = K`.
pub fn principal_log(v: &ComplexMatrix, ds: Option<&DualStructure>) -> Result<PrincipalLog> {
    let eig = unitary_eig(v)?;
    let branch_margin = eig.distance_to_minus_one();
    let raw = eig.apply(|t| t);
    let Some(ds) = ds else {
        return Ok(PrincipalLog {
            k: raw,
            angles: eig.angles.clone(),
            branch_margin,
            drift: 0.0,
            eig,
        });
    };
    let (k, drift) = ds.symmetrize(&raw)?;
    if drift <= MAX_LOG_DRIFT {
        return Ok(PrincipalLog {
            k,
            angles: eig.angles.clone(),
            branch_margin,
            drift,
            eig,
        });
    }
    // a Kramers pair straddles the cut: put the whole cluster at +π
    let angles = snap_cut(&eig.angles);
    let (k, drift) = ds.symmetrize(&eig.apply_values(&angles))?;
    if drift > MAX_LOG_DRIFT {
        return Err(Error::SelfDualityLost { drift });
    }
    Ok(PrincipalLog {
        k,
        angles,
        branch_margin,
        drift,
        eig,
    })
}

/// `B_L(U,V) = [[K/π, ½{h₁(K),U}], [½{h₁(K),U*}, −K/π]]`.
pub fn build_bl(pair: &UnitaryPair, ds: Option<&DualStructure>) -> Result<BottMatrix> {
    Ok(build_bl_with_drift(pair, ds)?.0)
}

fn build_bl_with_drift(pair: &UnitaryPair, ds: Option<&DualStructure>) -> Result<(BottMatrix, f64)> {
    let log = principal_log(pair.v(), ds)?;
    let f = log.k.unscale(PI);
    let h = log.apply(h1, ds)?;
    let g = ComplexMatrix::zeros(pair.dim(), pair.dim());
    let b = assemble(pair.u(), &f, &g, &h);
    let (b, drift) = match ds {
        Some(ds) => {
            let (b, d) = anti_symmetrize(&b, ds)?;
            (b, d.max(log.drift))
        }
        None => (b, 0.0),
    };
    Ok((BottMatrix::from_matrix(b, pair.delta(), Method::Log), drift))
}

pub fn kappa2_log(sd: &SelfDualPair) -> Result<Kappa2> {
    kappa2_log_with(sd, &Kappa2Options::default())
}

/// Sign of the modified Pfaffian of `B_L`. Above 1/8 the result is only
/// produced with `allow_uncertified`.
pub fn kappa2_log_with(sd: &SelfDualPair, opts: &Kappa2Options) -> Result<Kappa2> {
    let certified = sd.delta() <= LOG_THRESHOLD;
    if !certified && !opts.allow_uncertified {
        return Err(Error::LogMethodUncertified { delta: sd.delta() });
    }
    let (b, drift) = build_bl_with_drift(sd.pair(), Some(sd.structure()))?;
    sign_of_bott(&b, sd.structure(), b.gap, certified, drift)
}

/// Both sides of
/// `‖S² − I‖ ≤ (‖g‖+1)‖[h,U]‖ + ¼‖[h,U]‖² + ½‖[h²,U]‖ + ‖[q,U]‖`, `q = fh`,
/// for the log triple (`g = 0`).
pub fn square_defect_bound_log(pair: &UnitaryPair) -> Result<(f64, f64)> {
    let log = principal_log(pair.v(), None)?;
    let u = pair.u();
    let comm = |m: &ComplexMatrix| crate::linalg::norm2(&(m * u - u * m));
    let h = log.apply(h1, None)?;
    let h2 = log.apply(|x| h1(x).powi(2), None)?;
    let q = log.apply(|x| f1(x) * h1(x), None)?;
    let b = build_bl(pair, None)?;
    let ch = comm(&h);
    let rhs = ch + 0.25 * ch * ch + 0.5 * comm(&h2) + comm(&q);
    Ok((b.square_defect(), rhs))
}
