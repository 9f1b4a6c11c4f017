//! Residual evidence for or against α-harmonicity of `f∘ψ`.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::{delta_alpha_residual, max_residual, ReportBuilder, ResidualConfig, TheoremId, VerificationReport};
use crate::series::{AlphaHarmonicSeries, Composed, Polynomial};
use crate::{Alpha, Executor, Field, Grid, Result};

/// Rotation detection tolerance on the coefficients of `ψ`.
const ROTATION_TOL: f64 = 1e-12;
/// A non-α-harmonic composition must show a residual this many times the
/// tolerance.
const SEPARATION: f64 = 10.0;

/// Verifies the expected behaviour of `f∘ψ` for an α-harmonic series `f`.
pub fn verify_composition<E: Executor>(
    s: &AlphaHarmonicSeries,
    psi: &Polynomial,
    grid: &Grid,
    cfg: &ResidualConfig,
    exec: &E,
) -> Result<VerificationReport> {
    verify_composition_field(s, s.alpha(), s.coefficients().has_antianalytic(), psi, grid, cfg, exec)
}

/// `f∘ψ` is expected to be α-harmonic when ψ is a rotation, when α = 0, or
/// when `f` has no antianalytic part. Otherwise the residual must exceed ten
/// times the tolerance somewhere on the grid. `passed` means the observed
/// residuals match the expectation.
pub fn verify_composition_field<F, E>(
    f: &F,
    alpha: Alpha,
    has_antianalytic: bool,
    psi: &Polynomial,
    grid: &Grid,
    cfg: &ResidualConfig,
    exec: &E,
) -> Result<VerificationReport>
where
    F: Field + Clone,
    E: Executor,
{
    grid.validate()?;
    let composed = Composed::new(f.clone(), psi.clone());
    let expect_harmonic = psi.is_rotation(ROTATION_TOL) || alpha.get() == 0.0 || !has_antianalytic;
    let points = grid.points();
    let tol = cfg.tolerance;
    let mut b = ReportBuilder::new(TheoremId::Composition, grid.describe(), tol);

    let (base, _) = max_residual(f, &points, alpha, cfg, exec)?;
    let (worst, at) = if expect_harmonic {
        let puncture = composed.puncture();
        let pts: Vec<Complex64> = points.iter().copied().filter(|&z| Some(z) != puncture).collect();
        let res: Result<Vec<f64>> = exec
            .map_points(&pts, |z| delta_alpha_residual(&composed, z, alpha, cfg).map(|r| r.norm()))
            .into_iter()
            .collect();
        let mut worst = (0.0, Complex64::new(0.0, 0.0));
        for (z, r) in pts.iter().zip(res?) {
            b.check_exact(*z, r, tol);
            if r > worst.0 {
                worst = (r, *z);
            }
        }
        worst
    } else {
        let (worst, at) = max_residual(&composed, &points, alpha, cfg, exec)?;
        b.check_exact(at, SEPARATION * tol, worst);
        (worst, at)
    };
    b.metric("max_residual", worst);
    b.metric("max_residual_x", at.re);
    b.metric("max_residual_y", at.im);
    b.metric("base_residual", base);
    b.metric("expected_alpha_harmonic", if expect_harmonic { 1.0 } else { 0.0 });
    Ok(b.finish())
}
