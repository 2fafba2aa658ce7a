//! Self-dual (time-reversal symmetric) pairs and the ℤ/2 Pfaffian-Bott index.
//!
//! The dual of a `2N × 2N` matrix is `X^♯ = −Z Xᵀ Z` with
//! `Z = [[0, I], [−I, 0]]`. On `4N × 4N` matrices the doubled dual acts
//! blockwise, `[[A, B], [C, D]] ↦ [[D^♯, −B^♯], [−C^♯, A^♯]]`, and the unitary
//! `Q = (1/√2)[[I, −iZ], [iZ, I]]` turns anti-self-duality into
//! skew-symmetry: `Q* X^{♯⊗♯} Q = (Q* X Q)ᵀ`.

mod pfaffian;

pub use pfaffian::{pfaffian, pfaffian_parlett_reid, SKEW_TOL};

use num_complex::Complex64;

use crate::bott::{assemble, functional_calculus, BottMatrix, Method, StandardTriple, KAPPA_THRESHOLD};
use crate::error::{Error, Result};
use crate::linalg::{block2, hermitian_eigenvalues, identity, ComplexMatrix, UnitaryPair};

/// Relative tolerance (Frobenius) for self-duality of inputs.
pub const SELF_DUAL_TOL: f64 = 1e-9;

/// Drift above which a computed matrix is re-symmetrized.
pub const SYMMETRIZE_DRIFT: f64 = 1e-12;

/// Kramers partners must agree to this (relative to `max(1, ‖H‖)`).
pub const KRAMERS_TOL: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct DualStructure {
    n: usize,
    z: ComplexMatrix,
    q: ComplexMatrix,
}

impl DualStructure {
    pub fn new(n: usize) -> Self {
        let zero = ComplexMatrix::zeros(n, n);
        let id = identity(n);
        let z = block2(&zero, &id, &(-&id), &zero);
        let i = Complex64::new(0.0, 1.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let id2 = identity(2 * n);
        let q = block2(&id2, &(&z * -i), &(&z * i), &id2) * Complex64::new(s, 0.0);
        Self { n, z, q }
    }

    /// Half the dimension of `Z`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn z(&self) -> &ComplexMatrix {
        &self.z
    }

    pub fn q(&self) -> &ComplexMatrix {
        &self.q
    }

    fn expect_dim(&self, x: &ComplexMatrix, d: usize) -> Result<()> {
        if x.nrows() != d || x.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "expected {d}x{d} for N = {}, got {}x{}",
                self.n,
                x.nrows(),
                x.ncols()
            )));
        }
        Ok(())
    }

    /// `X^♯ = −Z Xᵀ Z`, via the block form `[[Dᵀ, −Bᵀ], [−Cᵀ, Aᵀ]]`.
    pub fn dual(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.expect_dim(x, 2 * self.n)?;
        Ok(dual_blocks(x))
    }

    /// `[[A, B], [C, D]] ↦ [[D^♯, −B^♯], [−C^♯, A^♯]]` on `4N × 4N` matrices.
    pub fn dual_tensor(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.expect_dim(x, 4 * self.n)?;
        Ok(dual_tensor_blocks(x))
    }

    /// `‖X − X^♯‖_F`
    pub fn self_dual_defect(&self, x: &ComplexMatrix) -> Result<f64> {
        Ok((x - self.dual(x)?).norm())
    }

    /// `‖X + X^{♯⊗♯}‖_F`
    pub fn anti_self_dual_defect(&self, x: &ComplexMatrix) -> Result<f64> {
        Ok((x + self.dual_tensor(x)?).norm())
    }

    pub fn check_self_dual(&self, x: &ComplexMatrix) -> Result<()> {
        let defect = self.self_dual_defect(x)?;
        if defect > SELF_DUAL_TOL * x.norm().max(1.0) {
            return Err(Error::NotSelfDual { defect });
        }
        Ok(())
    }

    /// `(X + X^♯)/2` and the drift `‖X − X^♯‖_F` that was removed.
    pub fn symmetrize(&self, x: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
        let d = self.dual(x)?;
        let drift = (x - &d).norm();
        if drift > SYMMETRIZE_DRIFT {
            Ok(((x + d).scale(0.5), drift))
        } else {
            Ok((x.clone(), drift))
        }
    }

    /// `Q* X Q`
    pub fn q_conjugate(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.expect_dim(x, 4 * self.n)?;
        Ok(self.q.adjoint() * x * &self.q)
    }
}

fn dual_blocks(x: &ComplexMatrix) -> ComplexMatrix {
    let n = x.nrows() / 2;
    let a = x.view((0, 0), (n, n));
    let b = x.view((0, n), (n, n));
    let c = x.view((n, 0), (n, n));
    let d = x.view((n, n), (n, n));
    block2(
        &d.transpose(),
        &(-b.transpose()),
        &(-c.transpose()),
        &a.transpose(),
    )
}

fn dual_tensor_blocks(x: &ComplexMatrix) -> ComplexMatrix {
    let m = x.nrows() / 2;
    let blk = |r: usize, c: usize| dual_blocks(&x.view((r * m, c * m), (m, m)).into_owned());
    block2(&blk(1, 1), &(-blk(0, 1)), &(-blk(1, 0)), &blk(0, 0))
}

/// `Pf(Q* X Q)` for `X` anti-self-dual under the doubled dual.
pub fn modified_pfaffian(x: &ComplexMatrix, ds: &DualStructure) -> Result<Complex64> {
    let defect = ds.anti_self_dual_defect(x)?;
    if defect > SKEW_TOL * x.norm().max(1.0) {
        return Err(Error::NotAntiSelfDual { defect });
    }
    let y = ds.q_conjugate(x)?;
    pfaffian(&(&y - y.transpose()).scale(0.5))
}

/// A unitary pair with `U^♯ = U` and `V^♯ = V`.
#[derive(Debug, Clone)]
pub struct SelfDualPair {
    pair: UnitaryPair,
    structure: DualStructure,
}

impl SelfDualPair {
    pub fn new(pair: UnitaryPair, structure: DualStructure) -> Result<Self> {
        structure.check_self_dual(pair.u())?;
        structure.check_self_dual(pair.v())?;
        Ok(Self { pair, structure })
    }

    /// Infers `N` from the dimension.
    pub fn from_pair(pair: UnitaryPair) -> Result<Self> {
        let d = pair.dim();
        if d % 2 == 1 {
            return Err(Error::OddDimension(d));
        }
        Self::new(pair, DualStructure::new(d / 2))
    }

    pub fn pair(&self) -> &UnitaryPair {
        &self.pair
    }

    pub fn structure(&self) -> &DualStructure {
        &self.structure
    }

    pub fn delta(&self) -> f64 {
        self.pair.delta()
    }

    pub fn into_pair(self) -> UnitaryPair {
        self.pair
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Kappa2 {
    /// +1 or −1.
    pub sign: i8,
    /// Real part of the modified Pfaffian.
    pub pfaffian: f64,
    /// Commutator norm inside the certified range of the method.
    pub certified: bool,
    /// `|Pf|` fell below the floor implied by the spectral gap.
    pub ill_conditioned: bool,
    pub gap: f64,
    pub delta: f64,
    pub method: Method,
    /// Self-duality drift removed from the Bott matrix.
    pub drift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Kappa2Options {
    pub use_trigpoly: bool,
    pub allow_uncertified: bool,
}

/// `B(U,V)` for a self-dual pair, re-symmetrized so that `B^{♯⊗♯} = −B`.
pub fn build_b_self_dual(sd: &SelfDualPair, use_trigpoly: bool) -> Result<(BottMatrix, f64)> {
    let ds = sd.structure();
    let (f, g, h) = functional_calculus(sd.pair().v(), StandardTriple::shared(), use_trigpoly)?;
    let (f, d1) = ds.symmetrize(&f)?;
    let (g, d2) = ds.symmetrize(&g)?;
    let (h, d3) = ds.symmetrize(&h)?;
    let b = assemble(sd.pair().u(), &f, &g, &h);
    let (b, d4) = anti_symmetrize(&b, ds)?;
    Ok((BottMatrix::from_matrix(b, sd.delta(), Method::Trig), d1.max(d2).max(d3).max(d4)))
}

/// `(B − B^{♯⊗♯})/2` when the drift exceeds roundoff.
pub(crate) fn anti_symmetrize(b: &ComplexMatrix, ds: &DualStructure) -> Result<(ComplexMatrix, f64)> {
    let t = ds.dual_tensor(b)?;
    let drift = (b + &t).norm();
    if drift > SYMMETRIZE_DRIFT {
        Ok(((b - t).scale(0.5), drift))
    } else {
        Ok((b.clone(), drift))
    }
}

pub fn pfaffian_bott_index(sd: &SelfDualPair) -> Result<Kappa2> {
    pfaffian_bott_index_with(sd, &Kappa2Options::default())
}

pub fn pfaffian_bott_index_with(sd: &SelfDualPair, opts: &Kappa2Options) -> Result<Kappa2> {
    let certified = sd.delta() <= KAPPA_THRESHOLD;
    if !certified && !opts.allow_uncertified {
        return Err(Error::ThresholdExceeded {
            delta: sd.delta(),
            threshold: KAPPA_THRESHOLD,
        });
    }
    let (b, drift) = build_b_self_dual(sd, opts.use_trigpoly)?;
    let floor_gap = crate::bounds::guaranteed_gap(sd.delta())
        .map(|g| g.gap)
        .unwrap_or(b.gap)
        .min(b.gap);
    sign_of_bott(&b, sd.structure(), floor_gap, certified, drift)
}

/// Sign of the modified Pfaffian of a Bott matrix, with the gap-derived floor
/// `|Pf| ≥ gap^{2N}`.
pub(crate) fn sign_of_bott(
    b: &BottMatrix,
    ds: &DualStructure,
    floor_gap: f64,
    certified: bool,
    drift: f64,
) -> Result<Kappa2> {
    let pf = modified_pfaffian(&b.matrix, ds)?;
    if pf.im.abs() > 1e-6 * pf.norm() {
        return Err(Error::NumericalInconsistency(format!(
            "modified Pfaffian of a hermitian anti-self-dual matrix is not real: {pf}"
        )));
    }
    if pf.re == 0.0 {
        return Err(Error::GapClosed {
            eigenvalue: b.gap,
            gap_tol: 0.0,
        });
    }
    let half = b.dim() as f64 / 2.0;
    let log_floor = half * floor_gap.max(f64::MIN_POSITIVE).ln();
    let ill_conditioned = pf.re.abs().ln() < log_floor - 1e-8 * half.max(1.0);
    Ok(Kappa2 {
        sign: if pf.re > 0.0 { 1 } else { -1 },
        pfaffian: pf.re,
        certified,
        ill_conditioned,
        gap: b.gap,
        delta: b.delta,
        method: b.method,
        drift,
    })
}

/// `(1/5)√(1 − 5δ_A²) + (1/5)√(1 − 5δ_B²)`
pub fn kappa2_distance_formula(delta_a: f64, delta_b: f64) -> f64 {
    crate::bott::kappa_distance_formula(delta_a, delta_b)
}

/// `1/5 + (1/5)√(1 − 5δ²)`
pub fn kappa2_commuting_distance_formula(delta: f64) -> f64 {
    0.2 + 0.2 * (1.0 - 5.0 * delta * delta).max(0.0).sqrt()
}

/// Lower bound on `‖U − U₁‖ + ‖V − V₁‖` between self-dual pairs with
/// different κ₂. When `b` commutes, the sharper commuting form is used.
pub fn selfdual_distance_bounds(a: &SelfDualPair, b: &SelfDualPair) -> Result<f64> {
    let ka = pfaffian_bott_index(a)?;
    let kb = pfaffian_bott_index(b)?;
    if ka.sign == kb.sign {
        return Err(Error::NoObstruction);
    }
    if b.delta() <= 1e-12 && ka.sign == -1 {
        return Ok(kappa2_commuting_distance_formula(a.delta()));
    }
    if a.delta() <= 1e-12 && kb.sign == -1 {
        return Ok(kappa2_commuting_distance_formula(b.delta()));
    }
    Ok(kappa2_distance_formula(a.delta(), b.delta()))
}

/// Whether the spectrum of a self-dual hermitian matrix is doubly degenerate.
pub fn check_kramers(h: &ComplexMatrix, ds: &DualStructure) -> Result<bool> {
    crate::linalg::check_hermitian(h, crate::linalg::UNITARY_TOL)?;
    ds.check_self_dual(h)?;
    Ok(spectrum_doubly_degenerate(h))
}

/// Whether the sorted spectrum of a hermitian matrix pairs up,
/// `λ_{2k−1} ≈ λ_{2k}`, with no symmetry assumption.
pub fn spectrum_doubly_degenerate(h: &ComplexMatrix) -> bool {
    let ev = hermitian_eigenvalues(h);
    let scale = ev.iter().fold(1.0f64, |m, l| m.max(l.abs()));
    ev.len() % 2 == 0 && ev.chunks(2).all(|p| (p[1] - p[0]).abs() <= KRAMERS_TOL * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{
        cyclic_shift_pair, random_self_dual_hermitian, selfdual_commuting, selfdual_doubling, Rng,
    };
    use crate::linalg::{c, determinant};

    fn random_matrix(d: usize, seed: u64) -> ComplexMatrix {
        let mut rng = Rng::new(seed);
        rng.gaussian_matrix(d)
    }

    #[test]
    fn structure_invariants() {
        for n in 1..4 {
            let ds = DualStructure::new(n);
            let z = ds.z();
            assert!((z * z + identity(2 * n)).norm() < 1e-15);
            assert!((z.transpose() + z).norm() < 1e-15);
            assert!(crate::linalg::unitarity_defect(ds.q()) < 1e-12);
        }
    }

    #[test]
    fn dual_examples() {
        let ds = DualStructure::new(3);
        let i6 = identity(6);
        assert!((ds.dual(&i6).unwrap() - &i6).norm() < 1e-15);
        assert!((ds.dual(ds.z()).unwrap() + ds.z()).norm() < 1e-15);
        let x = random_matrix(6, 1);
        let y = random_matrix(6, 2);
        let direct = -(ds.z() * x.transpose() * ds.z());
        assert!((ds.dual(&x).unwrap() - &direct).norm() < 1e-12);
        assert!((ds.dual(&ds.dual(&x).unwrap()).unwrap() - &x).norm() < 1e-12);
        let xy = ds.dual(&(&x * &y)).unwrap();
        assert!((xy - ds.dual(&y).unwrap() * ds.dual(&x).unwrap()).norm() < 1e-10);
        let adj = ds.dual(&x.adjoint()).unwrap();
        assert!((adj - ds.dual(&x).unwrap().adjoint()).norm() < 1e-12);
        assert!(matches!(ds.dual(&identity(5)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn q_intertwines_doubled_dual() {
        for n in 1..4 {
            let ds = DualStructure::new(n);
            let x = random_matrix(4 * n, 10 + n as u64);
            let lhs = ds.q_conjugate(&ds.dual_tensor(&x).unwrap()).unwrap();
            let rhs = ds.q_conjugate(&x).unwrap().transpose();
            assert!((lhs - rhs).norm() < 1e-9);
        }
    }

    #[test]
    fn dual_tensor_examples() {
        let ds = DualStructure::new(2);
        assert!((ds.dual_tensor(&identity(8)).unwrap() - identity(8)).norm() < 1e-15);
        let a = random_matrix(4, 3);
        let d = random_matrix(4, 4);
        let zero = ComplexMatrix::zeros(4, 4);
        let x = block2(&a, &zero, &zero, &d);
        let want = block2(&ds.dual(&d).unwrap(), &zero, &zero, &ds.dual(&a).unwrap());
        assert!((ds.dual_tensor(&x).unwrap() - want).norm() < 1e-14);
    }

    #[test]
    fn modified_pfaffian_of_flip_is_one() {
        for n in 1..5 {
            let ds = DualStructure::new(n);
            let z = ComplexMatrix::zeros(2 * n, 2 * n);
            let flip = block2(&z, &identity(2 * n), &identity(2 * n), &z);
            let pf = modified_pfaffian(&flip, &ds).unwrap();
            assert!((pf - c(1.0, 0.0)).norm() < 1e-12, "n={n}: {pf}");
            // Q* B(I,I) Q = diag(iZ, −iZ)
            let i = c(0.0, 1.0);
            let want = block2(&(ds.z() * i), &z, &z, &(ds.z() * -i));
            assert!((ds.q_conjugate(&flip).unwrap() - want).norm() < 1e-12);
            // the block matrix [[0, I], [−I, 0]] itself has Pf~ = (−1)^N
            let skew = block2(&z, &identity(2 * n), &(-identity(2 * n)), &z);
            let pf = modified_pfaffian(&skew, &ds).unwrap();
            let expect = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((pf - c(expect, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn modified_pfaffian_squares_to_det() {
        let ds = DualStructure::new(2);
        let x = random_matrix(8, 5);
        let anti = (&x - ds.dual_tensor(&x).unwrap()).scale(0.5);
        let pf = modified_pfaffian(&anti, &ds).unwrap();
        let det = determinant(&anti);
        assert!((pf * pf - det).norm() <= 1e-8 * det.norm());
        let neg = modified_pfaffian(&(-&anti), &ds).unwrap();
        assert!((neg - pf).norm() <= 1e-10 * pf.norm());
        assert!(matches!(modified_pfaffian(&x, &ds), Err(Error::NotAntiSelfDual { .. })));
    }

    #[test]
    fn commuting_self_dual_pairs_have_trivial_index() {
        for seed in 0..5 {
            let sd = selfdual_commuting(3, seed).unwrap();
            let k = pfaffian_bott_index(&sd).unwrap();
            assert_eq!(k.sign, 1);
            assert!(!k.ill_conditioned);
        }
        let ds = DualStructure::new(2);
        let pair = UnitaryPair::new(identity(4), identity(4)).unwrap();
        let sd = SelfDualPair::new(pair, ds.clone()).unwrap();
        assert_eq!(pfaffian_bott_index(&sd).unwrap().sign, 1);
        let pair = UnitaryPair::new(identity(4), -identity(4)).unwrap();
        let sd = SelfDualPair::new(pair, ds).unwrap();
        assert_eq!(pfaffian_bott_index(&sd).unwrap().sign, 1);
    }

    #[test]
    fn doubled_cyclic_shift() {
        let sd = selfdual_doubling(&cyclic_shift_pair(31).unwrap()).unwrap();
        let (b, _) = build_b_self_dual(&sd, false).unwrap();
        assert!(sd.structure().anti_self_dual_defect(&b.matrix).unwrap() < 1e-9);
        let k = crate::bott::bott_index(sd.pair()).unwrap();
        assert_eq!(k.kappa, 0);
        let k2 = pfaffian_bott_index(&sd).unwrap();
        assert_eq!(k2.sign, -1);
        assert!(!k2.ill_conditioned);
        let det = determinant(&b.matrix);
        assert!(det.re > 0.0);
    }

    #[test]
    fn distance_formulas() {
        assert!((kappa2_distance_formula(0.0, 0.0) - 0.4).abs() < 1e-15);
        assert!((kappa2_distance_formula(0.2, 0.0) - (0.2 * 0.8f64.sqrt() + 0.2)).abs() < 1e-15);
        assert!((kappa2_commuting_distance_formula(0.1) - (0.2 + 0.2 * 0.95f64.sqrt())).abs() < 1e-15);
        let shifted = selfdual_doubling(&cyclic_shift_pair(31).unwrap()).unwrap();
        let d = shifted.pair().dim();
        let trivial = SelfDualPair::new(
            UnitaryPair::new(identity(d), identity(d)).unwrap(),
            shifted.structure().clone(),
        )
        .unwrap();
        let bound = selfdual_distance_bounds(&shifted, &trivial).unwrap();
        assert!((bound - kappa2_commuting_distance_formula(shifted.delta())).abs() < 1e-15);
        assert!(matches!(
            selfdual_distance_bounds(&trivial, &trivial),
            Err(Error::NoObstruction)
        ));
    }

    #[test]
    fn kramers_pairs() {
        let ds = DualStructure::new(3);
        assert!(check_kramers(&identity(6), &ds).unwrap());
        for seed in 0..5 {
            let h = random_self_dual_hermitian(&ds, seed);
            assert!(check_kramers(&h, &ds).unwrap());
        }
        let x = random_matrix(6, 99);
        let h = crate::linalg::hermitian_part(&x);
        assert!(matches!(check_kramers(&h, &ds), Err(Error::NotSelfDual { .. })));
        assert!(!spectrum_doubly_degenerate(&h));
    }
}
