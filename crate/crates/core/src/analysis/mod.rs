//! Certification: the finite-difference `Δ_α` residual, verification
//! reports, and checks of the Schwarz, Schwarz–Pick, composition and
//! Bergman-type statements.

mod bergman;
mod bounds;
mod composition;

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::field::{fd_step, Field};
use crate::{Alpha, Error, Executor, Result};

pub use bergman::{
    bergman_membership_check, dirichlet_energy, laplacian_abs_power, BergmanParams, EnergyParams,
    REGULARIZATION,
};
pub use bounds::{
    colonna_bound, heinz_bound, schwarz_bound, schwarz_pick_bound, verify_colonna, verify_heinz,
    verify_schwarz, verify_schwarz_pick, BoundOptions,
};
pub use composition::{verify_composition, verify_composition_field};

/// Finite-difference stencil for [`delta_alpha_residual`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    /// Fourth order: points at `±h, ±2h` along each axis.
    FivePoint,
    /// Second order: points at `±h` along each axis.
    ThreePoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualConfig {
    pub step_base: f64,
    pub stencil: Stencil,
    pub tolerance: f64,
}

impl Default for ResidualConfig {
    fn default() -> Self {
        ResidualConfig { step_base: 2e-3, stencil: Stencil::FivePoint, tolerance: 1e-5 }
    }
}

impl ResidualConfig {
    /// Step at `z`: `step_base`, shrunk so the stencil stays in the disk and
    /// away from `puncture`.
    pub fn step_at(&self, z: Complex64, puncture: Option<Complex64>) -> Result<f64> {
        let mut h = fd_step(z, self.step_base)?;
        if let Some(p) = puncture {
            let d = (z - p).norm();
            if d == 0.0 {
                return Err(Error::SingularPoint { modulus: p.norm() });
            }
            h = h.min(d / 4.0);
        }
        Ok(h)
    }
}

/// `(f_z̄, Δf)` at `z` by finite differences.
pub fn fd_dzbar_laplacian<F: Field + ?Sized>(
    f: &F,
    z: Complex64,
    cfg: &ResidualConfig,
) -> Result<(Complex64, Complex64)> {
    let h = cfg.step_at(z, f.puncture())?;
    let c = f.value(z)?;
    let mut d = [Complex64::new(0.0, 0.0); 2];
    let mut lap = Complex64::new(0.0, 0.0);
    for (i, dir) in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)].iter().enumerate() {
        let p1 = f.value(z + dir * h)?;
        let m1 = f.value(z - dir * h)?;
        match cfg.stencil {
            Stencil::FivePoint => {
                let p2 = f.value(z + dir * (2.0 * h))?;
                let m2 = f.value(z - dir * (2.0 * h))?;
                d[i] = (m2 - p2 + (p1 - m1) * 8.0) / (12.0 * h);
                lap += (-p2 + p1 * 16.0 - c * 30.0 + m1 * 16.0 - m2) / (12.0 * h * h);
            }
            Stencil::ThreePoint => {
                d[i] = (p1 - m1) / (2.0 * h);
                lap += (p1 - c * 2.0 + m1) / (h * h);
            }
        }
    }
    let dzbar = (d[0] + Complex64::i() * d[1]) * 0.5;
    Ok((dzbar, lap))
}

/// `Δ_α f(z) = (1 − |z|²)^{−α} [f_{zz̄} + α z̄ f_z̄ / (1 − |z|²)]`, with the
/// derivatives taken by finite differences of `f`.
pub fn delta_alpha_residual<F: Field + ?Sized>(
    f: &F,
    z: Complex64,
    alpha: Alpha,
    cfg: &ResidualConfig,
) -> Result<Complex64> {
    let (fzb, lap) = fd_dzbar_laplacian(f, z, cfg)?;
    let q = 1.0 - z.norm_sqr();
    let a = alpha.get();
    Ok((lap * 0.25 + z.conj() * fzb * (a / q)) * q.powf(-a))
}

/// Largest `|Δ_α f|` over `points` and where it occurs. Points equal to the
/// puncture of `f` are skipped.
pub fn max_residual<F, E>(
    f: &F,
    points: &[Complex64],
    alpha: Alpha,
    cfg: &ResidualConfig,
    exec: &E,
) -> Result<(f64, Complex64)>
where
    F: Field + ?Sized,
    E: Executor,
{
    let puncture = f.puncture();
    let pts: Vec<Complex64> = points.iter().copied().filter(|&z| Some(z) != puncture).collect();
    let values = exec.map_points(&pts, |z| delta_alpha_residual(f, z, alpha, cfg).map(|r| r.norm()));
    let mut best = (0.0, Complex64::new(0.0, 0.0));
    for (z, v) in pts.iter().zip(values) {
        let v = v?;
        if !(v <= best.0) {
            best = (v, *z);
        }
    }
    Ok(best)
}

/// Which statement a report certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    Schwarz,
    SchwarzPick,
    Heinz,
    Colonna,
    Composition,
    Bergman,
}

impl TheoremId {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Schwarz => "schwarz",
            TheoremId::SchwarzPick => "schwarz-pick",
            TheoremId::Heinz => "heinz",
            TheoremId::Colonna => "colonna",
            TheoremId::Composition => "composition",
            TheoremId::Bergman => "bergman",
        }
    }
}

/// A grid point where `lhs ≤ rhs` failed by more than the tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub point: Complex64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub theorem_id: TheoremId,
    pub grid: String,
    pub tolerance: f64,
    /// Minimum of `rhs − lhs` over the checked points.
    pub worst_slack: f64,
    pub violations: Vec<Violation>,
    pub passed: bool,
    /// Named auxiliary quantities, in insertion order.
    pub metrics: Vec<(String, f64)>,
}

impl VerificationReport {
    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|(n, _)| n == name).map(|m| m.1)
    }
}

/// Accumulates `lhs ≤ rhs` checks into a [`VerificationReport`].
#[derive(Debug, Clone)]
pub struct ReportBuilder {
    report: VerificationReport,
}

impl ReportBuilder {
    pub fn new(theorem_id: TheoremId, grid: String, tolerance: f64) -> Self {
        ReportBuilder {
            report: VerificationReport {
                theorem_id,
                grid,
                tolerance,
                worst_slack: f64::INFINITY,
                violations: Vec::new(),
                passed: true,
                metrics: Vec::new(),
            },
        }
    }

    pub fn tolerance(&self) -> f64 {
        self.report.tolerance
    }

    /// Records `lhs ≤ rhs` at `point`; returns the slack.
    pub fn check(&mut self, point: Complex64, lhs: f64, rhs: f64) -> f64 {
        let slack = rhs - lhs;
        if !(slack >= self.report.worst_slack) {
            self.report.worst_slack = slack;
        }
        if !(slack >= -self.report.tolerance) {
            self.report.violations.push(Violation { point, lhs, rhs });
        }
        slack
    }

    /// Records a failure that is not tied to a pointwise inequality.
    pub fn fail(&mut self, point: Complex64, lhs: f64, rhs: f64) {
        self.report.violations.push(Violation { point, lhs, rhs });
    }

    /// Records `lhs ≤ rhs` without the tolerance allowance.
    pub fn check_exact(&mut self, point: Complex64, lhs: f64, rhs: f64) -> f64 {
        let slack = rhs - lhs;
        if !(slack >= self.report.worst_slack) {
            self.report.worst_slack = slack;
        }
        if !(slack > 0.0) {
            self.report.violations.push(Violation { point, lhs, rhs });
        }
        slack
    }

    pub fn metric(&mut self, name: &str, value: f64) {
        self.report.metrics.push((String::from(name), value));
    }

    pub fn finish(mut self) -> VerificationReport {
        self.report.passed = self.report.violations.is_empty();
        self.report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn residual_of_analytic_is_zero() {
        let f = |z: Complex64| z * z * z;
        let cfg = ResidualConfig::default();
        for a in [0.0, 1.5] {
            let r = delta_alpha_residual(&f, c(0.3, -0.2), Alpha::new(a).unwrap(), &cfg).unwrap();
            assert!(r.norm() < 1e-9, "{r}");
        }
    }

    #[test]
    fn residual_of_quadratic_bump() {
        let f = |z: Complex64| Complex64::new(1.0 - z.norm_sqr(), 0.0);
        let r = delta_alpha_residual(&f, c(0.4, 0.1), Alpha::new(0.0).unwrap(), &ResidualConfig::default())
            .unwrap();
        assert!((r + 1.0).norm() < 1e-8, "{r}");
    }

    #[test]
    fn stencil_rejects_boundary_and_puncture() {
        let cfg = ResidualConfig::default();
        assert!(cfg.step_at(c(1.0, 0.0), None).is_err());
        assert!(cfg.step_at(c(0.0, 0.0), Some(c(0.0, 0.0))).is_err());
        let h = cfg.step_at(c(0.001, 0.0), Some(c(0.0, 0.0))).unwrap();
        assert!(h <= 0.00025);
        assert_eq!(cfg.step_at(c(0.99, 0.0), None).unwrap(), 0.002);
        assert!((cfg.step_at(c(0.996, 0.0), None).unwrap() - 0.001).abs() < 1e-15);
    }

    #[test]
    fn report_builder_semantics() {
        let mut b = ReportBuilder::new(TheoremId::Heinz, String::from("g"), 1e-9);
        b.check(c(0.1, 0.0), 0.5, 1.0);
        b.check(c(0.2, 0.0), 1.0 + 1e-10, 1.0);
        let r = b.clone().finish();
        assert!(r.passed);
        assert!((r.worst_slack + 1e-10).abs() < 1e-15);
        b.check(c(0.3, 0.0), 2.0, 1.0);
        let r = b.finish();
        assert!(!r.passed);
        assert_eq!(r.violations.len(), 1);
    }
}
