//! Schwarz-type and Schwarz–Pick-type bounds for solutions of the Dirichlet
//! problem, and the classical harmonic bounds they extend.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use super::{ReportBuilder, TheoremId, VerificationReport};
use crate::solver::{solve_with, BoundaryData, QuadratureConfig, SolutionField, SourceField};
use crate::{Alpha, Error, Executor, Grid, Result};

/// Relative size of `𝒫_α[f*](0)` treated as zero.
const CENTER_TOL: f64 = 1e-12;
/// Allowance on `‖f*‖_∞ ≤ 1` for self-map hypotheses.
const SELF_MAP_TOL: f64 = 1e-12;
/// Safety factor on the coarse/fine quadrature discrepancy.
const QUAD_SAFETY: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundOptions {
    /// Subtract `𝒫_α[f*](0)` from `f*` instead of failing the precondition.
    pub auto_center: bool,
    pub quadrature: QuadratureConfig,
    /// Slack added to the estimated quadrature error.
    pub tolerance_floor: f64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions { auto_center: false, quadrature: QuadratureConfig::default(), tolerance_floor: 1e-9 }
    }
}

/// `2^α [(4/π) ‖f*‖ arctan|z| + ‖g‖ (1 − |z|²)^{α+1}]`.
pub fn schwarz_bound(alpha: Alpha, fstar_sup: f64, g_sup: f64, r: f64) -> f64 {
    let a = alpha.get();
    2f64.powf(a) * (4.0 / PI * fstar_sup * r.atan() + g_sup * (1.0 - r * r).powf(a + 1.0))
}

/// `(α+1) 2^{α+1} ‖f*‖ / (1 − |z|²) + (α + 4/3) 2^{α+1} ‖g‖`.
pub fn schwarz_pick_bound(alpha: Alpha, fstar_sup: f64, g_sup: f64, r: f64) -> f64 {
    let a = alpha.get();
    let p = 2f64.powf(a + 1.0);
    (a + 1.0) * p * fstar_sup / (1.0 - r * r) + (a + 4.0 / 3.0) * p * g_sup
}

/// `(4/π) arctan|z|`.
pub fn heinz_bound(r: f64) -> f64 {
    4.0 / PI * r.atan()
}

/// `(4/π) / (1 − |z|²)`.
pub fn colonna_bound(r: f64) -> f64 {
    4.0 / PI / (1.0 - r * r)
}

fn refined(cfg: &QuadratureConfig) -> QuadratureConfig {
    QuadratureConfig {
        circle_nodes: 2 * cfg.circle_nodes,
        radial_order: cfg.radial_order + cfg.radial_order / 2,
        angular_order: 2 * cfg.angular_order,
    }
}

fn probes(r_max: f64) -> Vec<Complex64> {
    let mut p = Vec::with_capacity(9);
    p.push(Complex64::new(0.0, 0.0));
    for j in 0..8 {
        p.push(Complex64::from_polar(r_max, 0.3 + PI * j as f64 / 4.0));
    }
    p
}

/// Discrepancy between the configured and a refined quadrature at a few
/// probe points, inflated by a safety factor.
fn quadrature_error<Q>(
    fstar: &BoundaryData,
    g: &SourceField,
    alpha: Alpha,
    cfg: &QuadratureConfig,
    r_max: f64,
    quantity: Q,
) -> Result<f64>
where
    Q: Fn(&SolutionField, Complex64) -> Result<f64>,
{
    let coarse = solve_with(fstar, g, alpha, *cfg)?;
    let fine = solve_with(fstar, g, alpha, refined(cfg))?;
    let mut err: f64 = 0.0;
    for z in probes(r_max) {
        err = err.max((quantity(&coarse, z)? - quantity(&fine, z)?).abs());
    }
    Ok(QUAD_SAFETY * err)
}

fn value_norm(f: &SolutionField, z: Complex64) -> Result<f64> {
    f.value(z).map(|v| v.norm())
}

fn jacobian_norm(f: &SolutionField, z: Complex64) -> Result<f64> {
    f.jacobian(z).map(|j| j.op_norm)
}

fn evaluate<E, T>(exec: &E, points: &[Complex64], f: impl Fn(Complex64) -> Result<T> + Sync + Send) -> Result<Vec<T>>
where
    E: Executor,
    T: Send,
{
    exec.map_points(points, f).into_iter().collect()
}

/// Checks `|f(z)| ≤ 2^α[(4/π)‖f*‖ arctan|z| + ‖g‖(1 − |z|²)^{α+1}]` on the
/// grid, where `f` solves `Δ_α f = g`, `f|_𝕋 = f*`. Requires α ≥ 0 and
/// `𝒫_α[f*](0) = 0`; with `auto_center` the mean of `f*` is removed first.
pub fn verify_schwarz<E: Executor>(
    fstar: &BoundaryData,
    g: &SourceField,
    alpha: Alpha,
    grid: &Grid,
    opts: &BoundOptions,
    exec: &E,
) -> Result<VerificationReport> {
    alpha.require_nonnegative()?;
    grid.validate()?;
    let center = crate::solver::poisson_integral(fstar, Complex64::new(0.0, 0.0), alpha, opts.quadrature.circle_nodes)?;
    let centered;
    let fstar = if center.norm() <= CENTER_TOL * fstar.sup_norm().max(1.0) {
        fstar
    } else if opts.auto_center {
        centered = fstar.shifted(center);
        &centered
    } else {
        return Err(Error::Precondition("Poisson integral of the boundary data must vanish at 0"));
    };
    let field = solve_with(fstar, g, alpha, opts.quadrature)?;
    let quad = quadrature_error(fstar, g, alpha, &opts.quadrature, grid.r_max(), value_norm)?;
    let tol = opts.tolerance_floor + quad;
    let (fs, gs) = (fstar.sup_norm(), g.sup_norm());

    let points = grid.points();
    let lhs = evaluate(exec, &points, |z| value_norm(&field, z))?;
    let mut b = ReportBuilder::new(TheoremId::Schwarz, grid.describe(), tol);
    let mut gap: f64 = 0.0;
    for (z, l) in points.iter().zip(lhs) {
        let rhs = schwarz_bound(alpha, fs, gs, z.norm());
        b.check(*z, l, rhs);
        gap = gap.max((rhs - l).abs());
    }
    b.metric("max_gap", gap);
    b.metric("center_shift", center.norm());
    b.metric("fstar_sup", fs);
    b.metric("g_sup", gs);
    b.metric("quadrature_error", quad);
    Ok(b.finish())
}

/// Checks `‖D_f(z)‖ ≤ (α+1)2^{α+1}‖f*‖/(1 − |z|²) + (α + 4/3)2^{α+1}‖g‖` on
/// the grid. For `g ≡ 0` and `‖f*‖ ≤ 1` the self-map form
/// `(α+1)2^{α+1}/(1 − |z|²)` is checked too, and for α = 0 also
/// `(4/π)/(1 − |z|²)`.
pub fn verify_schwarz_pick<E: Executor>(
    fstar: &BoundaryData,
    g: &SourceField,
    alpha: Alpha,
    grid: &Grid,
    opts: &BoundOptions,
    exec: &E,
) -> Result<VerificationReport> {
    alpha.require_nonnegative()?;
    grid.validate()?;
    let field = solve_with(fstar, g, alpha, opts.quadrature)?;
    let quad = quadrature_error(fstar, g, alpha, &opts.quadrature, grid.r_max(), jacobian_norm)?;
    let tol = opts.tolerance_floor + quad;
    let (fs, gs) = (fstar.sup_norm(), g.sup_norm());
    let self_map = g.is_zero() && fs <= 1.0 + SELF_MAP_TOL;
    let harmonic_self_map = self_map && alpha.get() == 0.0;
    let a = alpha.get();

    let points = grid.points();
    let lhs = evaluate(exec, &points, |z| jacobian_norm(&field, z))?;
    let mut b = ReportBuilder::new(TheoremId::SchwarzPick, grid.describe(), tol);
    let (mut slack_main, mut slack_self, mut slack_colonna) = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
    let mut max_norm: f64 = 0.0;
    for (z, l) in points.iter().zip(lhs) {
        let r = z.norm();
        max_norm = max_norm.max(l);
        slack_main = slack_main.min(b.check(*z, l, schwarz_pick_bound(alpha, fs, gs, r)));
        if self_map {
            let rhs = (a + 1.0) * 2f64.powf(a + 1.0) / (1.0 - r * r);
            slack_self = slack_self.min(b.check(*z, l, rhs));
        }
        if harmonic_self_map {
            slack_colonna = slack_colonna.min(b.check(*z, l, colonna_bound(r)));
        }
    }
    b.metric("slack_main", slack_main);
    if self_map {
        b.metric("slack_self_map", slack_self);
    }
    if harmonic_self_map {
        b.metric("slack_colonna", slack_colonna);
    }
    b.metric("max_jacobian_norm", max_norm);
    b.metric("fstar_sup", fs);
    b.metric("g_sup", gs);
    b.metric("quadrature_error", quad);
    Ok(b.finish())
}

fn harmonic_self_map(fstar: &BoundaryData, require_center: bool, circle_nodes: usize) -> Result<()> {
    if fstar.sup_norm() > 1.0 + SELF_MAP_TOL {
        return Err(Error::Precondition("boundary data must satisfy |f*| <= 1"));
    }
    if require_center {
        let alpha = Alpha::new(0.0)?;
        let c = crate::solver::poisson_integral(fstar, Complex64::new(0.0, 0.0), alpha, circle_nodes)?;
        if c.norm() > CENTER_TOL {
            return Err(Error::Precondition("harmonic extension must vanish at 0"));
        }
    }
    Ok(())
}

/// Checks `|f(z)| ≤ (4/π) arctan|z|` for `f = 𝒫₀[f*]` with `|f*| ≤ 1` and
/// `f(0) = 0`.
pub fn verify_heinz<E: Executor>(
    fstar: &BoundaryData,
    grid: &Grid,
    opts: &BoundOptions,
    exec: &E,
) -> Result<VerificationReport> {
    grid.validate()?;
    harmonic_self_map(fstar, true, opts.quadrature.circle_nodes)?;
    let alpha = Alpha::new(0.0)?;
    let g = SourceField::zero();
    let field = solve_with(fstar, &g, alpha, opts.quadrature)?;
    let quad = quadrature_error(fstar, &g, alpha, &opts.quadrature, grid.r_max(), value_norm)?;
    let points = grid.points();
    let lhs = evaluate(exec, &points, |z| value_norm(&field, z))?;
    let mut b = ReportBuilder::new(TheoremId::Heinz, grid.describe(), opts.tolerance_floor + quad);
    for (z, l) in points.iter().zip(lhs) {
        b.check(*z, l, heinz_bound(z.norm()));
    }
    b.metric("fstar_sup", fstar.sup_norm());
    b.metric("quadrature_error", quad);
    Ok(b.finish())
}

/// Checks `‖D_f(z)‖ ≤ (4/π)/(1 − |z|²)` for `f = 𝒫₀[f*]` with `|f*| ≤ 1`.
pub fn verify_colonna<E: Executor>(
    fstar: &BoundaryData,
    grid: &Grid,
    opts: &BoundOptions,
    exec: &E,
) -> Result<VerificationReport> {
    grid.validate()?;
    harmonic_self_map(fstar, false, opts.quadrature.circle_nodes)?;
    let alpha = Alpha::new(0.0)?;
    let g = SourceField::zero();
    let field = solve_with(fstar, &g, alpha, opts.quadrature)?;
    let quad = quadrature_error(fstar, &g, alpha, &opts.quadrature, grid.r_max(), jacobian_norm)?;
    let points = grid.points();
    let lhs = evaluate(exec, &points, |z| jacobian_norm(&field, z))?;
    let mut b = ReportBuilder::new(TheoremId::Colonna, grid.describe(), opts.tolerance_floor + quad);
    for (z, l) in points.iter().zip(lhs) {
        b.check(*z, l, colonna_bound(z.norm()));
    }
    b.metric("fstar_sup", fstar.sup_norm());
    b.metric("quadrature_error", quad);
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Sequential;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid() -> Grid {
        Grid::polar(6, 12, 0.95).unwrap()
    }

    #[test]
    fn sharp_case_is_equality() {
        let r = verify_schwarz(
            &BoundaryData::zero(),
            &SourceField::constant(c(-1.0, 0.0)),
            Alpha::new(0.0).unwrap(),
            &grid(),
            &BoundOptions::default(),
            &Sequential,
        )
        .unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.metric("max_gap").unwrap() < 1e-9);
    }

    #[test]
    fn schwarz_precondition_and_centering() {
        let b = BoundaryData::fourier([(0, c(0.5, 0.0)), (1, c(0.5, 0.0))]);
        let g = SourceField::zero();
        let a = Alpha::new(1.0).unwrap();
        let err = verify_schwarz(&b, &g, a, &grid(), &BoundOptions::default(), &Sequential);
        assert!(matches!(err, Err(Error::Precondition(_))));
        let opts = BoundOptions { auto_center: true, ..BoundOptions::default() };
        let r = verify_schwarz(&b, &g, a, &grid(), &opts, &Sequential).unwrap();
        assert!(r.passed);
        assert!((r.metric("center_shift").unwrap() - 0.5).abs() < 1e-14);
        let neg = Alpha::new(-0.5).unwrap();
        assert!(verify_schwarz(&b, &g, neg, &grid(), &opts, &Sequential).is_err());
    }

    #[test]
    fn identity_map_bounds() {
        let id = BoundaryData::fourier([(1, c(1.0, 0.0))]);
        let a0 = Alpha::new(0.0).unwrap();
        let opts = BoundOptions::default();
        let r = verify_schwarz(&id, &SourceField::zero(), a0, &grid(), &opts, &Sequential).unwrap();
        assert!(r.passed);
        assert!(r.worst_slack.abs() < 1e-12);
        let r = verify_schwarz_pick(&id, &SourceField::zero(), a0, &grid(), &opts, &Sequential).unwrap();
        assert!(r.passed);
        assert!((r.metric("max_jacobian_norm").unwrap() - 1.0).abs() < 1e-12);
        assert!(r.metric("slack_colonna").is_some());
        assert!(verify_heinz(&id, &grid(), &opts, &Sequential).unwrap().passed);
        assert!(verify_colonna(&id, &grid(), &opts, &Sequential).unwrap().passed);
    }

    #[test]
    fn heinz_zero_map_slack_is_bound() {
        let r = verify_heinz(&BoundaryData::zero(), &grid(), &BoundOptions::default(), &Sequential).unwrap();
        assert!(r.passed);
        assert_eq!(r.worst_slack, 0.0);
    }

    #[test]
    fn heinz_preconditions() {
        let opts = BoundOptions::default();
        let big = BoundaryData::fourier([(1, c(1.5, 0.0))]);
        assert!(matches!(verify_heinz(&big, &grid(), &opts, &Sequential), Err(Error::Precondition(_))));
        let off = BoundaryData::fourier([(0, c(0.1, 0.0)), (1, c(0.5, 0.0))]);
        assert!(matches!(verify_heinz(&off, &grid(), &opts, &Sequential), Err(Error::Precondition(_))));
        assert!(verify_colonna(&off, &grid(), &opts, &Sequential).unwrap().passed);
    }

    #[test]
    fn constant_boundary_has_zero_jacobian() {
        let r = verify_schwarz_pick(
            &BoundaryData::constant(c(0.3, 0.0)),
            &SourceField::zero(),
            Alpha::new(1.0).unwrap(),
            &grid(),
            &BoundOptions::default(),
            &Sequential,
        )
        .unwrap();
        assert!(r.passed);
        assert!(r.metric("max_jacobian_norm").unwrap() < 1e-12);
    }
}
