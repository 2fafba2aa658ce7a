//! The two-stage path from the standard triple to the log-method triple,
//! and the invertibility bound along it.
//!
//! The path parameter is `s ∈ [0, 2]`.
//!
//! * Stage 1 (`s = t`): `g_t = (1 − t) g` with `f_t = sign(x)√(1 − g_t²)` off
//!   `[−π/2, π/2]`; `h` and `q = f h` do not move. At `t = 1` the triple is
//!   the clamped `f`, `g = 0`, `h`.
//! * Stage 2 (`s = 1 + t`): `f_t = (1 − t) f_clamped + t x/π`, `g_t = 0`,
//!   `h_t = √(1 − f_t²)`.
//!
//! At each mesh point the bound
//! `(‖g_t‖ + 1) η_{h_t}(δ) + ¼ η_{h_t}(δ)² + ½ η_{h_t²}(δ) + η_{q_t}(δ)`
//! is evaluated, with every `η` taken from lines fitted to that point's
//! functions.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::fit::{basis_values, fit_parity_series, Parity, ParitySeries};
use super::{BoundEnvelope, BoundLine, Provenance};
use crate::bott::{eval_f, eval_f_clamped, eval_g, eval_h};
use crate::error::{Error, Result};

/// Every mesh value must stay below this.
pub const LOG_PATH_BOUND: f64 = 0.95;

/// Largest allowed `‖Δf‖∞ + ‖Δg‖∞ + ‖Δh‖∞` between neighbouring mesh points.
pub const MESH_STEP_LIMIT: f64 = 0.2236;

/// Degree of the fitted approximants.
pub const PATH_DEGREE: usize = 24;

/// Samples for the trapezoid coefficients.
const COEFF_SAMPLES: usize = 1 << 16;

/// Cells of the grid on `[0, π]` used for offsets (spacing `π/2^17`).
const HALF_CELLS: usize = 1 << 17;

/// Every `LP_STRIDE`-th grid point enters the linear program.
const LP_STRIDE: usize = 128;

/// Cells on `[0, π]` for the sup norms in the step rule.
const STEP_CELLS: usize = 1 << 14;

/// Clamped `f` on `[−π, π]` without wrapping, so that `x = −π` gives −1.
fn clamped_f(x: f64) -> f64 {
    if x.abs() < PI / 2.0 {
        eval_f_clamped(x)
    } else {
        x.signum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathFunctions {
    pub stage: u8,
    pub t: f64,
}

/// The triple at path parameter `s ∈ [0, 2]`.
pub fn path_functions(s: f64) -> PathFunctions {
    if s <= 1.0 {
        PathFunctions { stage: 1, t: s.max(0.0) }
    } else {
        PathFunctions {
            stage: 2,
            t: (s - 1.0).min(1.0),
        }
    }
}

impl PathFunctions {
    pub fn f(&self, x: f64) -> f64 {
        match self.stage {
            1 => {
                if x.abs() <= PI / 2.0 {
                    eval_f(x)
                } else {
                    let g = self.g(x);
                    x.signum() * (1.0 - g * g).max(0.0).sqrt()
                }
            }
            _ => (1.0 - self.t) * clamped_f(x) + self.t * x / PI,
        }
    }

    pub fn g(&self, x: f64) -> f64 {
        match self.stage {
            1 => (1.0 - self.t) * eval_g(x),
            _ => 0.0,
        }
    }

    pub fn h(&self, x: f64) -> f64 {
        match self.stage {
            1 => eval_h(x),
            _ => {
                let f = self.f(x);
                (1.0 - f * f).max(0.0).sqrt()
            }
        }
    }

    pub fn q(&self, x: f64) -> f64 {
        self.f(x) * self.h(x)
    }

    pub fn h2(&self, x: f64) -> f64 {
        self.h(x).powi(2)
    }

    /// `‖g_t‖∞` on the step grid.
    pub fn g_norm(&self) -> f64 {
        (0..=STEP_CELLS)
            .map(|j| self.g(PI * j as f64 / STEP_CELLS as f64).abs())
            .fold(0.0, f64::max)
    }
}

/// `‖Δf‖∞ + ‖Δg‖∞ + ‖Δh‖∞` between two path points; all three functions
/// are even or odd, so `[0, π]` suffices.
pub fn path_step(a: &PathFunctions, b: &PathFunctions) -> f64 {
    let (mut df, mut dg, mut dh) = (0.0f64, 0.0f64, 0.0f64);
    for j in 0..=STEP_CELLS {
        let x = PI * j as f64 / STEP_CELLS as f64;
        df = df.max((a.f(x) - b.f(x)).abs());
        dg = dg.max((a.g(x) - b.g(x)).abs());
        dh = dh.max((a.h(x) - b.h(x)).abs());
    }
    df + dg + dh
}

/// Bounds on the range of `F − p` over `[0, π]` from grid samples.
///
/// On a cell where `F` is monotone, `F − p` exceeds its larger endpoint
/// value by at most `‖p′‖∞ · spacing`. On the few cells around a turning
/// point of `F` the jump `|ΔE|` between the endpoints is added instead.
#[derive(Debug, Clone, Copy)]
struct Range {
    upper: f64,
    lower: f64,
}

impl Range {
    fn new() -> Self {
        Self {
            upper: f64::NEG_INFINITY,
            lower: f64::INFINITY,
        }
    }

    fn push_cell(&mut self, ea: f64, eb: f64, monotone: bool, slope_budget: f64) {
        let pad = if monotone { slope_budget } else { slope_budget + (ea - eb).abs() };
        self.upper = self.upper.max(ea.max(eb) + pad);
        self.lower = self.lower.min(ea.min(eb) - pad);
    }

    /// Diameter over the whole circle.
    fn offset(&self, parity: Parity) -> f64 {
        match parity {
            Parity::Even => self.upper - self.lower,
            Parity::Odd => 2.0 * self.upper.max(-self.lower),
        }
    }
}

/// Whether the samples of `F` are monotone over cell `i` and its neighbours.
fn monotone_cells(values: &[f64]) -> Vec<bool> {
    let n = values.len() - 1;
    let sign = |i: usize| (values[i + 1] - values[i]).signum() as i8 * ((values[i + 1] != values[i]) as i8);
    let diffs: Vec<i8> = (0..n).map(sign).collect();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(1);
            let hi = (i + 1).min(n - 1);
            let window = &diffs[lo..=hi];
            window.iter().all(|&d| d >= 0) || window.iter().all(|&d| d <= 0)
        })
        .collect()
}

/// Lines for `η_φ` from the truncations of a degree-24 trapezoid series and
/// from a slope/offset fit at `delta`.
pub fn path_envelope<F: Fn(f64) -> f64>(phi: F, parity: Parity, delta: f64, name: &str) -> Result<BoundEnvelope> {
    let h = PI / HALF_CELLS as f64;
    let grid: Vec<f64> = (0..=HALF_CELLS).map(|j| j as f64 * h).collect();
    let values: Vec<f64> = grid.iter().map(|&x| phi(x)).collect();
    let monotone = monotone_cells(&values);
    let series = ParitySeries::from_samples(&phi, parity, PATH_DEGREE, COEFF_SAMPLES);
    let slopes: Vec<f64> = (0..=PATH_DEGREE).map(|k| series.truncate(k).derivative_l1()).collect();

    let mut ranges = vec![Range::new(); PATH_DEGREE + 1];
    let mut prev = vec![0.0; PATH_DEGREE + 1];
    let mut cur = vec![0.0; PATH_DEGREE + 1];
    let mut basis = vec![0.0; PATH_DEGREE + 1];
    for (j, (&x, &v)) in grid.iter().zip(&values).enumerate() {
        basis_values(parity, x, &mut basis);
        let mut partial = 0.0;
        for k in 0..=PATH_DEGREE {
            if k > 0 || parity == Parity::Even {
                partial += series.coeffs[k] * basis[k];
            }
            cur[k] = v - partial;
        }
        if j > 0 {
            for k in 0..=PATH_DEGREE {
                ranges[k].push_cell(prev[k], cur[k], monotone[j - 1], slopes[k] * h);
            }
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let mut lines: Vec<BoundLine> = ranges
        .iter()
        .enumerate()
        .map(|(k, r)| BoundLine::new(slopes[k], r.offset(parity), Provenance::Computed, format!("{name}_trunc{k}")))
        .collect();

    if delta > 0.0 {
        let sub: Vec<f64> = values.iter().step_by(LP_STRIDE).copied().collect();
        let fit = fit_parity_series(&sub, parity, PATH_DEGREE, delta)?;
        let m = fit.derivative_l1();
        let mut range = Range::new();
        let mut prev = 0.0;
        for (j, (&x, &v)) in grid.iter().zip(&values).enumerate() {
            basis_values(parity, x, &mut basis);
            let p: f64 = (1..=PATH_DEGREE).map(|k| fit.coeffs[k] * basis[k]).sum();
            let e = v - p;
            if j > 0 {
                range.push_cell(prev, e, monotone[j - 1], m * h);
            }
            prev = e;
        }
        lines.push(BoundLine::new(m, range.offset(parity), Provenance::Computed, format!("{name}_fit")));
    }
    Ok(BoundEnvelope::new(lines))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshPoint {
    /// Path parameter in `[0, 2]`.
    pub s: f64,
    pub stage: u8,
    pub t: f64,
    pub g_norm: f64,
    pub eta_h: f64,
    pub eta_h2: f64,
    pub eta_q: f64,
    pub bound: f64,
    /// Step to the next mesh point (0 at the end).
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificationReport {
    pub delta: f64,
    pub points: Vec<MeshPoint>,
    pub max_bound: f64,
    pub max_step: f64,
}

impl CertificationReport {
    pub fn passed(&self) -> bool {
        self.max_bound < LOG_PATH_BOUND && self.max_step <= MESH_STEP_LIMIT
    }

    pub fn worst(&self) -> Option<&MeshPoint> {
        self.points.iter().max_by(|a, b| a.bound.total_cmp(&b.bound))
    }

    /// `CertificationFailed` at the failing point furthest along the path.
    pub fn check(&self) -> Result<()> {
        match self.points.iter().rev().find(|p| p.bound >= LOG_PATH_BOUND) {
            Some(w) => Err(Error::CertificationFailed {
                stage: w.stage,
                t: w.t,
                value: w.bound,
            }),
            None => Ok(()),
        }
    }
}

/// `per_stage` evenly spaced points in each stage, bisected until the step
/// rule holds.
pub fn default_mesh(per_stage: usize) -> Vec<f64> {
    let per_stage = per_stage.max(2);
    let mut mesh: Vec<f64> = (0..per_stage)
        .map(|j| j as f64 / (per_stage - 1) as f64)
        .chain((1..per_stage).map(|j| 1.0 + j as f64 / (per_stage - 1) as f64))
        .collect();
    for _ in 0..20 {
        let steps: Vec<f64> = mesh
            .par_windows(2)
            .map(|w| path_step(&path_functions(w[0]), &path_functions(w[1])))
            .collect();
        if steps.iter().all(|&d| d <= MESH_STEP_LIMIT) {
            break;
        }
        let mut next = Vec::with_capacity(2 * mesh.len());
        for (i, w) in mesh.windows(2).enumerate() {
            next.push(w[0]);
            if steps[i] > MESH_STEP_LIMIT {
                next.push(0.5 * (w[0] + w[1]));
            }
        }
        next.push(*mesh.last().expect("nonempty"));
        mesh = next;
    }
    mesh
}

struct Etas {
    h: f64,
    h2: f64,
    q: f64,
}

fn etas(p: &PathFunctions, delta: f64) -> Result<Etas> {
    Ok(Etas {
        h: path_envelope(|x| p.h(x), Parity::Even, delta, "h")?.eval(delta),
        h2: path_envelope(|x| p.h2(x), Parity::Even, delta, "h2")?.eval(delta),
        q: path_envelope(|x| p.q(x), Parity::Odd, delta, "q")?.eval(delta),
    })
}

/// Bound values at every mesh point. The mesh (values of `s`) must be
/// increasing within `[0, 2]`; the endpoints are added when missing.
pub fn evaluate_log_path(delta: f64, mesh: &[f64]) -> Result<CertificationReport> {
    let mut s: Vec<f64> = mesh.to_vec();
    if s.iter().any(|v| !(0.0..=2.0).contains(v)) || s.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidMatrix("mesh must be increasing within [0, 2]".into()));
    }
    if s.first() != Some(&0.0) {
        s.insert(0, 0.0);
    }
    if s.last() != Some(&2.0) {
        s.push(2.0);
    }
    let funcs: Vec<PathFunctions> = s.iter().map(|&v| path_functions(v)).collect();
    let steps: Vec<f64> = funcs.par_windows(2).map(|w| path_step(&w[0], &w[1])).collect();
    if let Some(i) = steps.iter().position(|&d| d > MESH_STEP_LIMIT) {
        return Err(Error::MeshViolation {
            t0: s[i],
            t1: s[i + 1],
            step: steps[i],
        });
    }
    // h, h² and q do not move during stage 1
    let stage1 = etas(&path_functions(0.0), delta)?;
    let points = funcs
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let e = if p.stage == 1 { None } else { Some(etas(p, delta)?) };
            let e = e.as_ref().unwrap_or(&stage1);
            let g_norm = p.g_norm();
            let bound = (g_norm + 1.0) * e.h + 0.25 * e.h * e.h + 0.5 * e.h2 + e.q;
            Ok(MeshPoint {
                s: s[i],
                stage: p.stage,
                t: p.t,
                g_norm,
                eta_h: e.h,
                eta_h2: e.h2,
                eta_q: e.q,
                bound,
                step: steps.get(i).copied().unwrap_or(0.0),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_bound = points.iter().map(|p| p.bound).fold(0.0, f64::max);
    let max_step = steps.iter().copied().fold(0.0, f64::max);
    Ok(CertificationReport {
        delta,
        points,
        max_bound,
        max_step,
    })
}

/// As [`evaluate_log_path`], failing when some bound reaches 0.95; the
/// error names the failing point furthest along the path.
pub fn certify_log_path(delta: f64, mesh: &[f64]) -> Result<CertificationReport> {
    let report = evaluate_log_path(delta, mesh)?;
    report.check()?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logmethod::{f1, h1};

    #[test]
    fn endpoints_match_the_two_triples() {
        let start = path_functions(0.0);
        let end = path_functions(2.0);
        for j in 0..=200 {
            let x = -PI + 2.0 * PI * j as f64 / 200.0;
            assert!((start.f(x) - eval_f(x)).abs() < 1e-12);
            assert!((start.g(x) - eval_g(x)).abs() < 1e-12);
            assert!((start.h(x) - eval_h(x)).abs() < 1e-12);
            assert!((end.f(x) - f1(x)).abs() < 1e-12);
            assert_eq!(end.g(x), 0.0);
            assert!((end.h(x) - h1(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn constraints_hold_along_the_path() {
        for s in [0.0, 0.3, 0.7, 1.0, 1.2, 1.5, 1.9, 2.0] {
            let p = path_functions(s);
            for j in 0..=300 {
                let x = -PI + 2.0 * PI * j as f64 / 300.0;
                let (f, g, h) = (p.f(x), p.g(x), p.h(x));
                assert!((f * f + g * g + h * h - 1.0).abs() < 1e-12, "s={s} x={x}");
                assert!((g * h).abs() < 1e-12);
            }
            // h, q, h² are continuous at ±π
            assert!((p.h(PI) - p.h(-PI)).abs() < 1e-12);
            assert!((p.q(PI) - p.q(-PI)).abs() < 1e-12);
        }
        assert!((path_functions(1.0).f(0.3) - path_functions(1.0 + 1e-15).f(0.3)).abs() < 1e-12);
    }

    #[test]
    fn default_mesh_obeys_step_rule() {
        let mesh = default_mesh(16);
        assert_eq!(mesh[0], 0.0);
        assert_eq!(*mesh.last().unwrap(), 2.0);
        for w in mesh.windows(2) {
            assert!(path_step(&path_functions(w[0]), &path_functions(w[1])) <= MESH_STEP_LIMIT);
        }
    }

    #[test]
    fn coarse_mesh_is_rejected() {
        let err = evaluate_log_path(0.125, &[0.0, 1.0, 2.0]).unwrap_err();
        assert!(matches!(err, Error::MeshViolation { .. }));
    }

    #[test]
    fn envelope_lines_dominate_the_truth_on_polynomials() {
        // a trig polynomial of degree 3 has a line with its own slope whose
        // offset is only the grid padding
        let phi = |x: f64| 0.3 * x.cos() + 0.1 * (3.0 * x).cos();
        let env = path_envelope(phi, Parity::Even, 0.1, "p").unwrap();
        let pad = 2.0 * 0.6 * PI / HALF_CELLS as f64;
        assert!(env.eval(0.0) <= pad + 1e-12);
        assert!(env.eval(0.1) <= 0.1 * 0.6 + pad + 1e-12);
    }
}
