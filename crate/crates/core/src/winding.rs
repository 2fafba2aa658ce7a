//! The winding-number invariant ω(U, V) of an almost-commuting unitary pair.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{determinant, identity, unitary_eig, UnitaryPair};

/// Pairs with `δ` above this are treated as having −1 in the spectrum of
/// `VUV*U*`.
pub const DELTA_LIMIT: f64 = 2.0 - 1e-9;

/// Residue from an integer above which the eigenangle sum is rejected.
const ROUND_TOL: f64 = 0.01;

/// Default starting mesh for [`winding_via_path`].
pub const DEFAULT_PATH_STEPS: usize = 1024;

const MAX_PATH_STEPS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq)]
pub struct WindingResult {
    pub omega: i64,
    pub delta: f64,
    pub valid: bool,
    /// `min_j |e^{iθ_j} + 1|` over the spectrum of `VUV*U*`.
    pub min_angle_gap_at_pi: f64,
    /// `(1/2π) Σ θ_j` before rounding.
    pub raw: f64,
}

fn check_delta(pair: &UnitaryPair) -> Result<()> {
    if pair.delta() > DELTA_LIMIT {
        return Err(Error::InvariantUndefined { delta: pair.delta() });
    }
    Ok(())
}

fn round_checked(raw: f64) -> Result<i64> {
    let omega = raw.round();
    if (raw - omega).abs() > ROUND_TOL {
        return Err(Error::NumericalInconsistency(format!(
            "winding sum {raw} is not close to an integer"
        )));
    }
    Ok(omega as i64)
}

/// `ω(U,V) = (1/2π) Σ θ_j` over the eigenangles of `VUV*U*`.
pub fn winding_number(pair: &UnitaryPair) -> Result<WindingResult> {
    check_delta(pair)?;
    let w = pair.group_commutator();
    let eig = unitary_eig(&w)?;
    let raw = eig.angles.iter().sum::<f64>() / (2.0 * PI);
    let omega = round_checked(raw)?;
    Ok(WindingResult {
        omega,
        delta: pair.delta(),
        valid: true,
        min_angle_gap_at_pi: eig.distance_to_minus_one(),
        raw,
    })
}

/// Independent evaluation of ω without an eigensolver: the phase of
/// `det((1−t)I + tW)` for `W = VUV*U*`, unwrapped along `t ∈ [0, 1]`.
///
/// Each eigenvalue factor `(1−t) + tλ` runs along the chord from 1 to `λ`,
/// which avoids the origin for `λ ≠ −1` and accumulates exactly the
/// principal angle of `λ`, so the total phase change is `Σ θ_j`. The mesh
/// starts at `steps` and doubles until every step changes the phase by less
/// than π/2.
pub fn winding_via_path(pair: &UnitaryPair, steps: usize) -> Result<i64> {
    check_delta(pair)?;
    let w = pair.group_commutator();
    let id = identity(pair.dim());
    let phase_at = |t: f64| -> Complex64 {
        let det = determinant(&(&id * Complex64::new(1.0 - t, 0.0) + &w * Complex64::new(t, 0.0)));
        det / det.norm()
    };
    let mut n = steps.max(64);
    let mut prev: Vec<Complex64> = Vec::new();
    while n <= MAX_PATH_STEPS {
        // reuse the coarse samples: the even nodes of the refined mesh
        let phases: Vec<Complex64> = if prev.len() == n / 2 + 1 {
            let odd: Vec<Complex64> = (0..n / 2)
                .into_par_iter()
                .map(|k| phase_at((2 * k + 1) as f64 / n as f64))
                .collect();
            let mut all = Vec::with_capacity(n + 1);
            for k in 0..n / 2 {
                all.push(prev[k]);
                all.push(odd[k]);
            }
            all.push(prev[n / 2]);
            all
        } else {
            (0..=n).into_par_iter().map(|k| phase_at(k as f64 / n as f64)).collect()
        };
        if phases.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NumericalInconsistency(
                "determinant vanished along the path".into(),
            ));
        }
        let mut total = 0.0;
        let mut max_step = 0.0f64;
        for pair in phases.windows(2) {
            let step = (pair[1] * pair[0].conj()).arg();
            max_step = max_step.max(step.abs());
            total += step;
        }
        if max_step < PI / 2.0 {
            return round_checked(total / (2.0 * PI));
        }
        prev = phases;
        n *= 2;
    }
    Err(Error::MeshTooCoarse { steps: n / 2 })
}

/// `1 + √(1 − δ²/4)`
pub fn commuting_distance_formula(delta: f64) -> f64 {
    1.0 + (1.0 - delta * delta / 4.0).max(0.0).sqrt()
}

/// `√(1 − δ_A²/4) + √(1 − δ_B²/4)`
pub fn index_change_distance_formula(delta_a: f64, delta_b: f64) -> f64 {
    (1.0 - delta_a * delta_a / 4.0).max(0.0).sqrt() + (1.0 - delta_b * delta_b / 4.0).max(0.0).sqrt()
}

/// Lower bound on `‖U − U₁‖ + ‖V − V₁‖` over commuting unitary pairs
/// `(U₁, V₁)`; only available when ω ≠ 0.
pub fn distance_bound_commuting(pair: &UnitaryPair) -> Result<f64> {
    if winding_number(pair)?.omega == 0 {
        return Err(Error::NoObstruction);
    }
    Ok(commuting_distance_formula(pair.delta()))
}

/// Lower bound on the distance between two pairs with different ω.
pub fn distance_bound_index_change(a: &UnitaryPair, b: &UnitaryPair) -> Result<f64> {
    if winding_number(a)?.omega == winding_number(b)?.omega {
        return Err(Error::NoObstruction);
    }
    Ok(index_change_distance_formula(a.delta(), b.delta()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cyclic_shift_pair, random_commuting_pair};
    use approx::assert_abs_diff_eq;

    #[test]
    fn cyclic_shift_winds_once_negatively() {
        for n in [3usize, 8, 20, 31, 64] {
            let pair = cyclic_shift_pair(n).unwrap();
            let w = winding_number(&pair).unwrap();
            assert_eq!(w.omega, -1, "n={n}");
            assert!((w.raw + 1.0).abs() < 1e-6);
            assert_eq!(winding_number(&pair.swapped()).unwrap().omega, 1);
        }
    }

    #[test]
    fn path_oracle_examples() {
        let pair = cyclic_shift_pair(8).unwrap();
        assert_eq!(winding_via_path(&pair, 64).unwrap(), -1);
        let double = pair.direct_sum(&pair).unwrap();
        assert_eq!(winding_via_path(&double, 64).unwrap(), -2);
        assert_eq!(winding_number(&double).unwrap().omega, -2);
        let commuting = random_commuting_pair(12, 4).unwrap();
        assert_eq!(winding_via_path(&commuting, 64).unwrap(), 0);
        assert_eq!(winding_number(&commuting).unwrap().omega, 0);
    }

    #[test]
    fn undefined_at_delta_two() {
        // UV = −VU for these Pauli matrices, so ‖[U,V]‖ = 2
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let x = crate::linalg::ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let z = crate::linalg::diagonal(&[c(1., 0.), c(-1., 0.)]);
        let pair = UnitaryPair::new(x, z).unwrap();
        assert!(matches!(winding_number(&pair), Err(Error::InvariantUndefined { .. })));
        assert!(matches!(winding_via_path(&pair, 64), Err(Error::InvariantUndefined { .. })));
    }

    #[test]
    fn distance_formulas() {
        assert_abs_diff_eq!(commuting_distance_formula(0.0), 2.0);
        let d8 = 2.0 * (PI / 8.0).sin();
        assert_abs_diff_eq!(commuting_distance_formula(d8), 1.0 + (PI / 8.0).cos(), epsilon = 1e-12);
        assert_abs_diff_eq!(commuting_distance_formula(d8), 1.9239, epsilon = 1e-4);
        assert_abs_diff_eq!(commuting_distance_formula(2.0), 1.0);
        assert_abs_diff_eq!(index_change_distance_formula(0.0, 0.0), 2.0);
        assert_abs_diff_eq!(index_change_distance_formula(d8, 0.0), (PI / 8.0).cos() + 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(index_change_distance_formula(2.0, 2.0), 0.0);
    }

    #[test]
    fn distance_bounds_need_obstruction() {
        let shift = cyclic_shift_pair(8).unwrap();
        let commuting = random_commuting_pair(8, 1).unwrap();
        let b = distance_bound_commuting(&shift).unwrap();
        assert_abs_diff_eq!(b, 1.0 + (PI / 8.0).cos(), epsilon = 1e-9);
        assert!(matches!(distance_bound_commuting(&commuting), Err(Error::NoObstruction)));
        let b = distance_bound_index_change(&shift, &commuting).unwrap();
        assert_abs_diff_eq!(b, (PI / 8.0).cos() + 1.0, epsilon = 1e-9);
        assert!(matches!(
            distance_bound_index_change(&shift, &shift),
            Err(Error::NoObstruction)
        ));
    }
}
