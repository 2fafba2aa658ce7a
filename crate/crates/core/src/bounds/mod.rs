//! Slope/offset bounds on `η_f`, `η_h`, the resulting `β(δ)`, gap radii,
//! and the homotopy check behind the log method.
//!
//! A line `(m, b)` bounds `η_φ(δ)` when `m = Σ|k a_k|` for a trigonometric
//! polynomial `p` and `b` is the diameter of the range of `φ − p`.

mod fit;
mod homotopy;

pub use fit::{fit_parity_series, Parity, ParitySeries};
pub use homotopy::{
    certify_log_path, default_mesh, path_envelope, evaluate_log_path, path_functions, CertificationReport, MeshPoint,
    PathFunctions, LOG_PATH_BOUND, MESH_STEP_LIMIT,
};

use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::bott::{eval_h, fourier_coefficients_h, symmetric_poly, DEFAULT_SERIES_K, F_SINE};
use crate::error::{Error, Result};
use crate::linalg::TrigPoly;

/// Allowed excess of a recomputed table entry over its stored value.
pub const TABLE_DRIFT_TOL: f64 = 1e-3;

/// Stored `‖h′‖_F`, the ℓ¹ norm of the Fourier coefficients of `h′`.
pub const HPRIME_F_NORM: f64 = 2.99208;

/// Grid size for table offsets.
pub const TABLE_GRID: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    TableF,
    TableH,
    Computed,
}

/// `η(δ) ≤ m δ + b` for all `δ ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundLine {
    pub m: f64,
    pub b: f64,
    pub provenance: Provenance,
    pub label: String,
}

impl BoundLine {
    pub fn new(m: f64, b: f64, provenance: Provenance, label: impl Into<String>) -> Self {
        Self {
            m,
            b,
            provenance,
            label: label.into(),
        }
    }

    pub fn eval(&self, delta: f64) -> f64 {
        self.m * delta + self.b
    }
}

/// Pointwise minimum of a set of lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundEnvelope {
    pub lines: Vec<BoundLine>,
}

impl BoundEnvelope {
    pub fn new(lines: Vec<BoundLine>) -> Self {
        Self { lines }
    }

    pub fn push(&mut self, line: BoundLine) {
        self.lines.push(line);
    }

    /// `+∞` for an empty envelope.
    pub fn eval(&self, delta: f64) -> f64 {
        self.lines.iter().map(|l| l.eval(delta)).fold(f64::INFINITY, f64::min)
    }

    /// The line attaining the minimum at `delta`.
    pub fn best(&self, delta: f64) -> Option<&BoundLine> {
        self.lines
            .iter()
            .min_by(|a, b| a.eval(delta).total_cmp(&b.eval(delta)))
    }
}

/// Upper bound on `max e` over `[−π, π]` for an `L`-Lipschitz `e`: the grid
/// maximum, with each cell `[a, b]` bounded by `(e(a) + e(b))/2 + L(b − a)/2`
/// and bisected until that bound is within `slack` of the best sample.
fn certified_max<E: Fn(f64) -> f64 + Sync>(e: &E, lipschitz: f64, cells: usize, slack: f64) -> f64 {
    let h = 2.0 * PI / cells as f64;
    let vals: Vec<f64> = (0..=cells).into_par_iter().map(|i| e(-PI + i as f64 * h)).collect();
    let mut best = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut upper = best;
    for i in 0..cells {
        let a = -PI + i as f64 * h;
        upper = upper.max(refine_cell(e, lipschitz, a, a + h, vals[i], vals[i + 1], &mut best, slack, 48));
    }
    upper
}

#[allow(clippy::too_many_arguments)]
fn refine_cell<E: Fn(f64) -> f64>(
    e: &E,
    lipschitz: f64,
    a: f64,
    b: f64,
    va: f64,
    vb: f64,
    best: &mut f64,
    slack: f64,
    depth: u32,
) -> f64 {
    let ub = 0.5 * (va + vb) + 0.5 * lipschitz * (b - a);
    if ub <= *best + slack || depth == 0 {
        return ub;
    }
    let mid = 0.5 * (a + b);
    let vm = e(mid);
    *best = best.max(vm);
    let left = refine_cell(e, lipschitz, a, mid, va, vm, best, slack, depth - 1);
    let right = refine_cell(e, lipschitz, mid, b, vm, vb, best, slack, depth - 1);
    left.max(right)
}

/// Certified diameter of the range of an `L`-Lipschitz periodic function.
pub fn certified_diameter<E: Fn(f64) -> f64 + Sync>(e: E, lipschitz: f64, cells: usize) -> f64 {
    let slack = 1e-7;
    let hi = certified_max(&e, lipschitz, cells, slack);
    let lo = -certified_max(&|x| -e(x), lipschitz, cells, slack);
    (hi - lo).max(0.0)
}

/// Line for `η_φ` from an approximant `p`: `m = Σ|k a_k|` and `b` the
/// certified diameter of `φ − p`, given a Lipschitz constant of `φ`.
pub fn eta_line<F: Fn(f64) -> f64 + Sync>(
    phi: F,
    phi_lipschitz: f64,
    approx: &TrigPoly,
    label: impl Into<String>,
) -> Result<BoundLine> {
    if !approx.is_real_valued(1e-12) {
        return Err(Error::InvalidPolynomial("approximant is not real-valued".into()));
    }
    let m = approx.derivative_l1();
    let b = certified_diameter(|x| phi(x) - approx.eval_real(x), phi_lipschitz + m, TABLE_GRID);
    Ok(BoundLine::new(m, b, Provenance::Computed, label))
}

/// A recomputed table row alongside its stored values.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub label: &'static str,
    /// Truncation degree of the approximant; `None` for the `‖h′‖_F` row.
    pub degree: Option<usize>,
    pub stored_m: f64,
    pub stored_b: f64,
    pub line: BoundLine,
}

impl TableRow {
    pub fn check(&self) -> Result<()> {
        for (name, stored, computed) in [("m", self.stored_m, self.line.m), ("b", self.stored_b, self.line.b)] {
            if computed > stored + TABLE_DRIFT_TOL {
                return Err(Error::TableDrift {
                    row: format!("{} ({name})", self.label),
                    stored,
                    computed,
                });
            }
        }
        Ok(())
    }
}

/// `(label, degree, m, b)` for `η_f`.
const F_ROWS: [(&str, usize, f64, f64); 4] = [
    ("0", 0, 0.0, 2.0),
    ("1", 1, 1.171875, 0.4375),
    ("2", 3, 1.7578125, 0.04687),
    ("inf", 5, 1.875, 0.0),
];

/// `(label, degree, m, b)` for `η_h`.
const H_ROWS: [(&str, usize, f64, f64); 6] = [
    ("0", 0, 0.0, 1.0),
    ("1", 1, 0.359880, 0.732237),
    ("2", 2, 0.862500, 0.350141),
    ("3", 3, 1.258560, 0.106619),
    ("4", 4, 1.446120, 0.017509),
    ("5", 5, 1.48498, 0.004110),
];

fn sine_poly(terms: &[(usize, f64)], keep: impl Fn(usize) -> bool) -> TrigPoly {
    let mut sine = [0.0; 5];
    for &(k, a) in terms {
        if keep(k) {
            sine[k - 1] = a;
        }
    }
    TrigPoly::from_sine(&sine)
}

fn f_rows() -> Result<Vec<TableRow>> {
    F_ROWS
        .par_iter()
        .map(|&(label, degree, stored_m, stored_b)| {
            let approx = sine_poly(&F_SINE, |k| k <= degree);
            // f − p is the tail polynomial, Lipschitz with its own derivative bound
            let tail = sine_poly(&F_SINE, |k| k > degree);
            let b = certified_diameter(|x| tail.eval_real(x), tail.derivative_l1(), TABLE_GRID);
            Ok(TableRow {
                label,
                degree: Some(degree),
                stored_m,
                stored_b,
                line: BoundLine::new(approx.derivative_l1(), b, Provenance::TableF, label),
            })
        })
        .collect()
}

fn h_rows() -> Result<Vec<TableRow>> {
    let table = fourier_coefficients_h(5, DEFAULT_SERIES_K)?;
    let mut rows: Vec<TableRow> = H_ROWS
        .par_iter()
        .map(|&(label, degree, stored_m, stored_b)| {
            let approx = symmetric_poly(&table.c[..=degree]);
            let mut line = eta_line(eval_h, HPRIME_F_NORM, &approx, label)?;
            line.provenance = Provenance::TableH;
            Ok(TableRow {
                label,
                degree: Some(degree),
                stored_m,
                stored_b,
                line,
            })
        })
        .collect::<Result<_>>()?;
    rows.push(TableRow {
        label: "inf",
        degree: None,
        stored_m: HPRIME_F_NORM,
        stored_b: 0.0,
        line: BoundLine::new(HPRIME_F_NORM, 0.0, Provenance::TableH, "inf"),
    });
    Ok(rows)
}

/// Closed-form upper bound on `‖h′‖_F`:
/// `225/√3256 · √(407/302) · (1/4 + 16/15π + 18/105π + 4/315π + 16/3465π + ln(81/77)/4π)`.
pub fn hprime_norm_closed_form() -> f64 {
    let series = 0.25
        + 16.0 / (15.0 * PI)
        + 18.0 / (105.0 * PI)
        + 4.0 / (315.0 * PI)
        + 16.0 / (3465.0 * PI)
        + (81.0f64 / 77.0).ln() / (4.0 * PI);
    225.0 / 3256f64.sqrt() * (407.0f64 / 302.0).sqrt() * series
}

/// `Σ_{|k|≤n} |k c_k|` for the computed coefficients of `h`.
pub fn hprime_partial_norm(n: usize) -> Result<f64> {
    Ok(fourier_coefficients_h(n, DEFAULT_SERIES_K)?.derivative_l1(n))
}

/// Recomputed `η_f` and `η_h` tables.
#[derive(Debug, Clone)]
pub struct BoundTables {
    pub f_rows: Vec<TableRow>,
    pub h_rows: Vec<TableRow>,
    pub eta_f: BoundEnvelope,
    pub eta_h: BoundEnvelope,
}

impl BoundTables {
    pub fn compute() -> Result<Self> {
        let f_rows = f_rows()?;
        let h_rows = h_rows()?;
        for row in f_rows.iter().chain(&h_rows) {
            row.check()?;
        }
        let eta_f = BoundEnvelope::new(f_rows.iter().map(|r| r.line.clone()).collect());
        let eta_h = BoundEnvelope::new(h_rows.iter().map(|r| r.line.clone()).collect());
        Ok(Self {
            f_rows,
            h_rows,
            eta_f,
            eta_h,
        })
    }

    /// Computed once per process.
    pub fn shared() -> Result<&'static Self> {
        static TABLES: OnceLock<BoundTables> = OnceLock::new();
        if let Some(t) = TABLES.get() {
            return Ok(t);
        }
        let t = Self::compute()?;
        Ok(TABLES.get_or_init(|| t))
    }

    /// `2η_h(δ) + η_f(δ)`
    pub fn beta(&self, delta: f64) -> f64 {
        2.0 * self.eta_h.eval(delta) + self.eta_f.eval(delta)
    }
}

pub fn eta_envelope_f() -> Result<BoundEnvelope> {
    Ok(BoundTables::shared()?.eta_f.clone())
}

pub fn eta_envelope_h() -> Result<BoundEnvelope> {
    Ok(BoundTables::shared()?.eta_h.clone())
}

/// `β(δ) = 2η_h(δ) + η_f(δ)`, a bound on `‖B(U,V)² − I‖`.
pub fn beta(delta: f64) -> Result<f64> {
    Ok(BoundTables::shared()?.beta(delta))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapBound {
    pub beta: f64,
    /// `√(1 − β(δ))`
    pub gap: f64,
    /// `(19/20)√(1 − 5δ)` where `5δ ≤ 1`.
    pub coarse: Option<f64>,
}

pub fn coarse_gap_bound(delta: f64) -> Option<f64> {
    (5.0 * delta <= 1.0).then(|| 0.95 * (1.0 - 5.0 * delta).sqrt())
}

/// Guaranteed radius of the gap at 0 in the spectrum of `B(U,V)`.
pub fn guaranteed_gap(delta: f64) -> Result<GapBound> {
    let beta = beta(delta)?;
    if beta >= 1.0 {
        return Err(Error::NoGuarantee { delta, beta });
    }
    Ok(GapBound {
        beta,
        gap: (1.0 - beta).sqrt(),
        coarse: coarse_gap_bound(delta),
    })
}

/// Bound on `‖B(U₀,V₀) − B(U₁,V₁)‖` from `d_U = ‖U₀ − U₁‖`, `d_V = ‖V₀ − V₁‖`.
pub fn variation_bound(d_u: f64, d_v: f64) -> Result<f64> {
    let t = BoundTables::shared()?;
    Ok((t.beta(d_v) + d_u).min(t.beta(d_v + d_u)))
}

/// Smallest `δ` with `β(δ) = 1`, by bisection.
pub fn threshold_root() -> Result<f64> {
    let t = BoundTables::shared()?;
    let (mut lo, mut hi) = (0.0, 1.0);
    while t.beta(hi) < 1.0 {
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if t.beta(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One row of the `β` curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaPoint {
    pub delta: f64,
    pub beta: f64,
    /// `√(1 − β)` where `β < 1`.
    pub gap: Option<f64>,
    pub coarse: Option<f64>,
}

pub fn beta_curve(deltas: &[f64]) -> Result<Vec<BetaPoint>> {
    let t = BoundTables::shared()?;
    Ok(deltas
        .iter()
        .map(|&delta| {
            let beta = t.beta(delta);
            BetaPoint {
                delta,
                beta,
                gap: (beta < 1.0).then(|| (1.0 - beta).sqrt()),
                coarse: coarse_gap_bound(delta),
            }
        })
        .collect())
}

/// `n + 1` evenly spaced points on `[0, max]`.
pub fn linspace(max: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| max * i as f64 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use crate::bott::{build_b, eval_f, StandardTriple};
    use crate::generators::{perturb, random_unitary_pair, Rng};
    use crate::linalg::{expi_hermitian, norm2, unitary_eig, UnitaryPair};

    #[test]
    fn table_f_slopes_are_exact() {
        let t = BoundTables::shared().unwrap();
        let m: Vec<f64> = t.f_rows.iter().map(|r| r.line.m).collect();
        assert_eq!(m, vec![0.0, 300.0 / 256.0, 450.0 / 256.0, 480.0 / 256.0]);
        assert_eq!(t.f_rows[3].line.b, 0.0);
        assert!(t.f_rows[1].line.b <= 0.4375 + 1e-6);
        assert!((t.f_rows[2].line.b - 6.0 / 128.0).abs() < 1e-6);
        assert!((t.f_rows[0].line.b - 2.0).abs() < 1e-6);
    }

    #[test]
    fn table_h_rows() {
        let t = BoundTables::shared().unwrap();
        for row in &t.h_rows {
            assert!((row.line.m - row.stored_m).abs() < 1e-4, "{}: {}", row.label, row.line.m);
            assert!(row.line.b <= row.stored_b + 1e-5, "{}: {}", row.label, row.line.b);
        }
        assert!((t.h_rows[5].line.m - 1.48498).abs() < 1e-4);
        assert!(t.h_rows[5].line.b <= 0.004110);
    }

    #[test]
    fn hprime_chain() {
        assert!(hprime_norm_closed_form() < 2.992076);
        assert!(hprime_norm_closed_form() <= HPRIME_F_NORM);
        assert!(hprime_partial_norm(16).unwrap() <= 2.992076);
    }

    #[test]
    fn envelope_values() {
        assert_eq!(eta_envelope_f().unwrap().eval(0.0), 0.0);
        assert_eq!(eta_envelope_h().unwrap().eval(0.0), 0.0);
        assert!(eta_envelope_h().unwrap().eval(1.0) <= 1.092117 + 1e-5);
        assert_eq!(beta(0.0).unwrap(), 0.0);
        assert!(beta(0.125).unwrap() < 1.0);
        assert!(matches!(guaranteed_gap(0.21), Err(Error::NoGuarantee { .. })));
        assert_eq!(guaranteed_gap(0.0).unwrap().gap, 1.0);
        assert_eq!(variation_bound(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(variation_bound(0.05, 0.0).unwrap(), 0.05);
    }

    #[test]
    fn envelope_is_monotone_in_lines() {
        let t = BoundTables::shared().unwrap();
        let mut env = BoundEnvelope::default();
        let mut prev = vec![f64::INFINITY; 11];
        for row in &t.h_rows {
            env.push(row.line.clone());
            for (i, d) in linspace(1.0, 10).into_iter().enumerate() {
                let v = env.eval(d);
                assert!(v <= prev[i]);
                prev[i] = v;
            }
        }
    }

    #[test]
    fn eta_line_rejects_complex() {
        let p = TrigPoly::new(vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)]).unwrap();
        assert!(matches!(eta_line(eval_f, 2.0, &p, "x"), Err(Error::InvalidPolynomial(_))));
    }

    #[test]
    fn certified_diameter_of_sine() {
        let d = certified_diameter(f64::sin, 1.0, 1 << 12);
        assert!(d >= 2.0 && d < 2.0 + 1e-6);
    }

    #[test]
    fn empirical_domination() {
        let t = BoundTables::shared().unwrap();
        let triple = StandardTriple::shared();
        for i in 0..40 {
            let d = 6;
            let base = crate::generators::random_commuting_pair(d, 500 + i).unwrap();
            let pair = perturb(&base, 0.02 + 0.005 * i as f64, 900 + i).unwrap();
            let delta = pair.delta();
            let b = build_b(&pair, triple, false).unwrap();
            assert!(b.square_defect() <= t.beta(delta) + 1e-9);
            let h = unitary_eig(pair.v()).unwrap().apply(eval_h);
            let comm = norm2(&(&h * pair.u() - pair.u() * &h));
            assert!(comm <= t.eta_h.eval(delta) + 1e-9);
        }
        let pair = random_unitary_pair(4, 1).unwrap();
        let w = expi_hermitian(&Rng::new(3).unit_hermitian(4).scale(0.01));
        let moved = UnitaryPair::new(pair.u().clone(), pair.v() * w).unwrap();
        let b0 = build_b(&pair, triple, false).unwrap();
        let b1 = build_b(&moved, triple, false).unwrap();
        let dv = norm2(&(pair.v() - moved.v()));
        assert!(norm2(&(b0.matrix - b1.matrix)) <= variation_bound(0.0, dv).unwrap() + 1e-9);
    }
}
