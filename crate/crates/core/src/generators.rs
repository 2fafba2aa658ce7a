//! Example pairs and seeded random families.
//!
//! Randomness comes from SplitMix64 (64-bit state, `seed_from_u64`) with
//! Box–Muller normals, so a given seed gives bitwise-identical matrices.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::linalg::{
    diagonal, direct_sum, expi_hermitian, hermitian_part, norm2, ComplexMatrix, UnitaryPair,
};
use crate::selfdual::{DualStructure, SelfDualPair};

/// Deterministic source of uniforms and complex normals.
#[derive(Debug, Clone)]
pub struct Rng(SplitMix64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self(SplitMix64::seed_from_u64(seed))
    }

    /// Uniform on (0, 1].
    pub fn uniform(&mut self) -> f64 {
        ((self.0.next_u64() >> 11) as f64 + 1.0) / (1u64 << 53) as f64
    }

    /// Standard complex normal: real and imaginary parts `N(0, 1/2)`.
    pub fn complex_normal(&mut self) -> Complex64 {
        let r = (-2.0 * self.uniform().ln()).sqrt();
        let t = 2.0 * PI * self.uniform();
        Complex64::new(r * t.cos(), r * t.sin()) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn gaussian_matrix(&mut self, d: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(d, d, |_, _| self.complex_normal())
    }

    /// Haar-distributed unitary: QR of a Gaussian matrix with the phases of
    /// `R`'s diagonal moved into `Q`.
    pub fn haar_unitary(&mut self, d: usize) -> ComplexMatrix {
        let qr = self.gaussian_matrix(d).qr();
        let (mut q, r) = (qr.q(), qr.r());
        for j in 0..d {
            let rjj = r[(j, j)];
            let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
            q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
        }
        q
    }

    /// Random hermitian matrix with operator norm 1.
    pub fn unit_hermitian(&mut self, d: usize) -> ComplexMatrix {
        let h = hermitian_part(&self.gaussian_matrix(d));
        let n = norm2(&h);
        if n > 0.0 {
            h.unscale(n)
        } else {
            h
        }
    }

    pub fn phases(&mut self, d: usize) -> Vec<Complex64> {
        (0..d).map(|_| Complex64::from_polar(1.0, PI * (2.0 * self.uniform() - 1.0))).collect()
    }
}

/// `U e_j = e_{j+1}` (indices mod n) and `V = diag(e^{−2πij/n})`, j = 1..n,
/// so that `VUV*U* = e^{−2πi/n} I`.
pub fn cyclic_shift_pair(n: usize) -> Result<UnitaryPair> {
    if n < 2 {
        return Err(Error::InvalidMatrix(format!("cyclic shift needs n >= 2, got {n}")));
    }
    let one = Complex64::new(1.0, 0.0);
    let u = ComplexMatrix::from_fn(n, n, |i, j| if i == (j + 1) % n { one } else { Complex64::new(0.0, 0.0) });
    let v: Vec<Complex64> = (1..=n)
        .map(|j| Complex64::from_polar(1.0, -2.0 * PI * j as f64 / n as f64))
        .collect();
    UnitaryPair::new(u, diagonal(&v))
}

/// `|k|` copies of the cyclic-shift pair, swapped to `(V, U)` when `k > 0`,
/// giving winding number `k` at `δ = 2 sin(π/n)`.
pub fn powered_pair(n: usize, k: i64) -> Result<UnitaryPair> {
    if k == 0 {
        return Err(Error::InvalidMatrix("powered_pair needs k != 0".into()));
    }
    let base = cyclic_shift_pair(n)?;
    let base = if k > 0 { base.swapped() } else { base };
    let mut out = base.clone();
    for _ in 1..k.unsigned_abs() {
        out = out.direct_sum(&base)?;
    }
    Ok(out)
}

/// Simultaneously diagonal unitaries in a shared Haar-random basis.
pub fn random_commuting_pair(d: usize, seed: u64) -> Result<UnitaryPair> {
    let mut rng = Rng::new(seed);
    let w = rng.haar_unitary(d);
    let wh = w.adjoint();
    let u = &w * diagonal(&rng.phases(d)) * &wh;
    let v = &w * diagonal(&rng.phases(d)) * &wh;
    UnitaryPair::new(u, v)
}

/// Two independent Haar unitaries.
pub fn random_unitary_pair(d: usize, seed: u64) -> Result<UnitaryPair> {
    let mut rng = Rng::new(seed);
    let u = rng.haar_unitary(d);
    let v = rng.haar_unitary(d);
    UnitaryPair::new(u, v)
}

/// `‖I − e^{iH}‖ = 2 sin(‖H‖/2)`, so this norm of `H` moves a unitary by `r`.
fn exp_norm_for_distance(r: f64) -> f64 {
    2.0 * (r.min(2.0) / 2.0).asin()
}

/// `(U e^{iH₁}, V e^{iH₂})` with `‖U − U₁‖ = ‖V − V₁‖ = r/2`.
pub fn perturb(pair: &UnitaryPair, r: f64, seed: u64) -> Result<UnitaryPair> {
    if r == 0.0 {
        return Ok(pair.clone());
    }
    let mut rng = Rng::new(seed);
    let d = pair.dim();
    let s = exp_norm_for_distance(r / 2.0);
    let h1 = rng.unit_hermitian(d).scale(s);
    let h2 = rng.unit_hermitian(d).scale(s);
    UnitaryPair::with_tol(
        pair.u() * expi_hermitian(&h1),
        pair.v() * expi_hermitian(&h2),
        pair.unitary_tol(),
    )
}

/// `(diag(U, Uᵀ), diag(V, Vᵀ))`, self-dual for `N = d`.
pub fn selfdual_doubling(pair: &UnitaryPair) -> Result<SelfDualPair> {
    let u = direct_sum(pair.u(), &pair.u().transpose());
    let v = direct_sum(pair.v(), &pair.v().transpose());
    SelfDualPair::new(UnitaryPair::new(u, v)?, DualStructure::new(pair.dim()))
}

/// Random hermitian `H` with `H^♯ = H`, operator norm 1.
pub fn random_self_dual_hermitian(ds: &DualStructure, seed: u64) -> ComplexMatrix {
    let mut rng = Rng::new(seed);
    let x = rng.gaussian_matrix(2 * ds.n());
    let h = hermitian_part(&x);
    let h = (&h + ds.dual(&h).expect("dimension 2N")).scale(0.5);
    let n = norm2(&h);
    h.unscale(n)
}

/// Commuting self-dual pair: two functions of one self-dual hermitian matrix.
pub fn selfdual_commuting(n: usize, seed: u64) -> Result<SelfDualPair> {
    let ds = DualStructure::new(n);
    let h = random_self_dual_hermitian(&ds, seed);
    let mut rng = Rng::new(seed ^ 0x9e37_79b9_7f4a_7c15);
    let a = PI * (2.0 * rng.uniform() - 1.0);
    let b = PI * (2.0 * rng.uniform() - 1.0);
    let c = PI * (2.0 * rng.uniform() - 1.0);
    let u = expi_hermitian(&h.scale(a));
    let v = expi_hermitian(&(h.scale(b) + (&h * &h).scale(c)));
    SelfDualPair::new(UnitaryPair::new(u, v)?, ds)
}

/// `e^{iH/2} X e^{iH/2}` with `H^♯ = H` keeps `X` self-dual.
fn sandwich(x: &ComplexMatrix, h: &ComplexMatrix, s: f64) -> ComplexMatrix {
    let e = expi_hermitian(&h.scale(s / 2.0));
    &e * x * &e
}

/// Scale `s` with `‖X − e^{isH/2} X e^{isH/2}‖` within 1% of `target`.
fn sandwich_scale(x: &ComplexMatrix, h: &ComplexMatrix, target: f64) -> f64 {
    let dist = |s: f64| norm2(&(x - sandwich(x, h, s)));
    let (mut lo, mut hi) = (0.0, exp_norm_for_distance(target).max(1e-12));
    while dist(hi) < target && hi < 4.0 * PI {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let d = dist(mid);
        if (d - target).abs() <= 0.005 * target {
            return mid;
        }
        if d < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Self-dual perturbation at total distance `r` (split evenly between `U`
/// and `V`), within 1%.
pub fn perturb_self_dual(sd: &SelfDualPair, r: f64, seed: u64) -> Result<SelfDualPair> {
    if r == 0.0 {
        return Ok(sd.clone());
    }
    let ds = sd.structure();
    let h1 = random_self_dual_hermitian(ds, seed);
    let h2 = random_self_dual_hermitian(ds, seed.wrapping_add(0x5851_f42d_4c95_7f2d));
    let (u, v) = (sd.pair().u(), sd.pair().v());
    let s1 = sandwich_scale(u, &h1, r / 2.0);
    let s2 = sandwich_scale(v, &h2, r / 2.0);
    let u1 = ds.symmetrize(&sandwich(u, &h1, s1))?.0;
    let v1 = ds.symmetrize(&sandwich(v, &h2, s2))?.0;
    SelfDualPair::new(UnitaryPair::with_tol(u1, v1, sd.pair().unitary_tol())?, ds.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    CyclicShift,
    Powered,
    CommutingRandom,
    Perturbed,
    DirectSum,
    SelfDualDoubling,
    SelfDualCommuting,
}

impl std::str::FromStr for PairKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cyclic_shift" | "cyclic-shift" => PairKind::CyclicShift,
            "powered" => PairKind::Powered,
            "commuting_random" | "commuting-random" => PairKind::CommutingRandom,
            "perturbed" => PairKind::Perturbed,
            "direct_sum" | "direct-sum" => PairKind::DirectSum,
            "selfdual_doubling" | "selfdual-doubling" => PairKind::SelfDualDoubling,
            "selfdual_commuting" | "selfdual-commuting" => PairKind::SelfDualCommuting,
            other => return Err(Error::InvalidMatrix(format!("unknown pair kind `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairSpec {
    pub kind: PairKind,
    /// Dimension parameter: cyclic-shift size, or `d` / `N` for random kinds.
    pub n: usize,
    pub seed: u64,
    /// Perturbation distance for `Perturbed` and self-dual kinds.
    pub noise: f64,
    /// Winding number for `Powered`.
    pub k: i64,
}

impl PairSpec {
    pub fn new(kind: PairKind, n: usize) -> Self {
        Self {
            kind,
            n,
            seed: 0,
            noise: 0.0,
            k: -1,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Generated {
    Plain(UnitaryPair),
    SelfDual(SelfDualPair),
}

impl Generated {
    pub fn pair(&self) -> &UnitaryPair {
        match self {
            Generated::Plain(p) => p,
            Generated::SelfDual(sd) => sd.pair(),
        }
    }

    pub fn structure(&self) -> Option<&DualStructure> {
        match self {
            Generated::Plain(_) => None,
            Generated::SelfDual(sd) => Some(sd.structure()),
        }
    }
}

/// Builds the pair described by `spec`.
///
/// * `cyclic_shift`: the n×n shift/clock pair.
/// * `powered`: winding number `k` from `|k|` shift blocks of size `n`.
/// * `commuting_random`: `d = n`.
/// * `perturbed`: the cyclic-shift pair moved by distance `noise`.
/// * `direct_sum`: cyclic shift of size `n` ⊕ a random commuting pair of size `n`.
/// * `selfdual_doubling`: doubled cyclic shift (`N = n`), then a self-dual
///   perturbation of size `noise`.
/// * `selfdual_commuting`: `N = n`, perturbed by `noise`.
pub fn generate(spec: &PairSpec) -> Result<Generated> {
    let plain = |p: UnitaryPair| Ok(Generated::Plain(p));
    match spec.kind {
        PairKind::CyclicShift => plain(cyclic_shift_pair(spec.n)?),
        PairKind::Powered => plain(powered_pair(spec.n, spec.k)?),
        PairKind::CommutingRandom => plain(random_commuting_pair(spec.n, spec.seed)?),
        PairKind::Perturbed => plain(perturb(&cyclic_shift_pair(spec.n)?, spec.noise, spec.seed)?),
        PairKind::DirectSum => {
            let a = cyclic_shift_pair(spec.n)?;
            let b = random_commuting_pair(spec.n, spec.seed)?;
            plain(a.direct_sum(&b)?)
        }
        PairKind::SelfDualDoubling => {
            let sd = selfdual_doubling(&cyclic_shift_pair(spec.n)?)?;
            Ok(Generated::SelfDual(perturb_self_dual(&sd, spec.noise, spec.seed)?))
        }
        PairKind::SelfDualCommuting => {
            let sd = selfdual_commuting(spec.n, spec.seed)?;
            Ok(Generated::SelfDual(perturb_self_dual(&sd, spec.noise, spec.seed)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator_norm, identity, unitarity_defect};
    use crate::winding::winding_number;

    #[test]
    fn cyclic_shift_examples() {
        let p = cyclic_shift_pair(4).unwrap();
        assert!((p.delta() - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(winding_number(&p).unwrap().omega, -1);
        let p = cyclic_shift_pair(31).unwrap();
        assert!((p.delta() - 2.0 * (PI / 31.0).sin()).abs() < 1e-12);
        assert!(p.delta() <= crate::bott::KAPPA_THRESHOLD);
        let p = cyclic_shift_pair(64).unwrap();
        assert!((p.delta() - 2.0 * (PI / 64.0).sin()).abs() < 1e-12);
        assert!(p.delta() <= crate::logmethod::LOG_THRESHOLD);
        let w = p.group_commutator();
        let expect = identity(64) * Complex64::from_polar(1.0, -2.0 * PI / 64.0);
        assert!((w - expect).norm() < 1e-12);
    }

    #[test]
    fn powered_examples() {
        let base = cyclic_shift_pair(31).unwrap();
        let p = powered_pair(31, -1).unwrap();
        assert_eq!(p.u(), base.u());
        assert_eq!(winding_number(&powered_pair(31, 2).unwrap()).unwrap().omega, 2);
        assert_eq!(winding_number(&powered_pair(31, -3).unwrap()).unwrap().omega, -3);
    }

    #[test]
    fn commuting_examples() {
        let p = random_commuting_pair(16, 5).unwrap();
        assert!(p.delta() <= 1e-12);
        let mut rng = Rng::new(1);
        let u = rng.haar_unitary(5);
        assert!(unitarity_defect(&u) < 1e-12);
        let p = UnitaryPair::new(u.clone(), u).unwrap();
        assert_eq!(p.delta(), 0.0);
    }

    #[test]
    fn perturbation_distance_is_exact() {
        let p = cyclic_shift_pair(12).unwrap();
        assert_eq!(perturb(&p, 0.0, 3).unwrap().u(), p.u());
        for r in [0.01, 0.3, 1.0] {
            let q = perturb(&p, r, 3).unwrap();
            let d = p.distance(&q).unwrap();
            assert!((d - r).abs() <= 0.01 * r, "{d} vs {r}");
        }
    }

    #[test]
    fn self_dual_perturbation() {
        let sd = selfdual_doubling(&cyclic_shift_pair(8).unwrap()).unwrap();
        for r in [0.02, 0.2] {
            let q = perturb_self_dual(&sd, r, 9).unwrap();
            let d = sd.pair().distance(q.pair()).unwrap();
            assert!((d - r).abs() <= 0.01 * r, "{d} vs {r}");
        }
    }

    #[test]
    fn specs_are_deterministic() {
        for kind in [
            PairKind::CyclicShift,
            PairKind::CommutingRandom,
            PairKind::Perturbed,
            PairKind::DirectSum,
            PairKind::SelfDualDoubling,
            PairKind::SelfDualCommuting,
        ] {
            let spec = PairSpec { kind, n: 6, seed: 42, noise: 0.05, k: -1 };
            let a = generate(&spec).unwrap();
            let b = generate(&spec).unwrap();
            assert_eq!(a.pair().u(), b.pair().u());
            assert_eq!(a.pair().v(), b.pair().v());
            let delta = commutator_norm(a.pair().u(), a.pair().v()).unwrap();
            assert!((delta - a.pair().delta()).abs() <= 1e-12);
        }
    }
}
