//! Dirichlet-type energies and the Bergman-type membership check for
//! bounded α-harmonic functions.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use super::{ReportBuilder, TheoremId, VerificationReport};
use crate::field::{fd_step, Differentiable, Field};
use crate::quadrature::{DiskRule, GaussLegendre};
use crate::{Alpha, Error, Executor, Grid, Result};

/// `1/n` in the regularization `(|f|² + 1/n)^{p/2}` used near zeros of `f`.
pub const REGULARIZATION: f64 = 1e-6;
/// Below this modulus, `2 < p < 4` switches to the regularized Laplacian.
const SMALL_MODULUS: f64 = 1e-6;

/// Exponents of `∫ d^ν |f|^μ ‖D_f‖^t dA` with `d(z) = 1 − |z|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParams {
    pub nu: f64,
    pub mu: f64,
    pub t: f64,
}

impl EnergyParams {
    pub fn new(nu: f64, mu: f64, t: f64) -> Result<Self> {
        if !(nu > -1.0) {
            return Err(Error::InvalidParameter { name: "nu", value: nu });
        }
        if !(mu > 0.0) {
            return Err(Error::InvalidParameter { name: "mu", value: mu });
        }
        if !(t >= 0.0) {
            return Err(Error::InvalidParameter { name: "t", value: t });
        }
        Ok(EnergyParams { nu, mu, t })
    }
}

/// `Δ(|f|^p)` from `f`, its Wirtinger derivatives and `Δf`:
///
/// ```text
/// p(p−2)|f|^{p−4}|f f̄_z + f_z̄ f̄|² + 2p|f|^{p−2}(|f_z|² + |f_z̄|²) + p|f|^{p−2} Re(f̄ Δf)
/// ```
///
/// For `p = 2` the first term is absent.
pub fn laplacian_abs_power<F: Differentiable + ?Sized>(f: &F, p: f64, z: Complex64) -> Result<f64> {
    if !(p >= 2.0) {
        return Err(Error::InvalidParameter { name: "p", value: p });
    }
    let v = f.value(z)?;
    let m = v.norm();
    if p > 2.0 && p < 4.0 && m < 1e-12 {
        return Err(Error::SingularPoint { modulus: z.norm() });
    }
    let (fz, fzb) = f.wirtinger(z)?;
    let lap = f.laplacian(z)?;
    Ok(abs_power_identity(p, v, fz, fzb, lap))
}

fn abs_power_identity(p: f64, v: Complex64, fz: Complex64, fzb: Complex64, lap: Complex64) -> f64 {
    let m = v.norm();
    let mp2 = m.powf(p - 2.0);
    let first = if p == 2.0 {
        0.0
    } else {
        p * (p - 2.0) * m.powf(p - 4.0) * (v * fz.conj() + fzb * v.conj()).norm_sqr()
    };
    first + 2.0 * p * mp2 * (fz.norm_sqr() + fzb.norm_sqr()) + p * mp2 * (v.conj() * lap).re
}

/// `Δ(|f|^p)`, switching to a finite-difference Laplacian of
/// `(|f|² + 1/n)^{p/2}` where `2 < p < 4` and `|f|` is tiny.
fn laplacian_abs_power_regularized<F: Differentiable + ?Sized>(
    f: &F,
    p: f64,
    z: Complex64,
) -> Result<f64> {
    let v = f.value(z)?;
    if p > 2.0 && p < 4.0 && v.norm() <= SMALL_MODULUS {
        let h = fd_step(z, 1e-3)?;
        let g = |d: Complex64| -> Result<f64> {
            Ok((f.value(z + d)?.norm_sqr() + REGULARIZATION).powf(0.5 * p))
        };
        let c = g(Complex64::new(0.0, 0.0))?;
        let mut lap = 0.0;
        for dir in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
            let (p1, m1) = (g(dir * h)?, g(-dir * h)?);
            let (p2, m2) = (g(dir * (2.0 * h))?, g(-dir * (2.0 * h))?);
            lap += (-p2 + 16.0 * p1 - 30.0 * c + 16.0 * m1 - m2) / (12.0 * h * h);
        }
        return Ok(lap);
    }
    let (fz, fzb) = f.wirtinger(z)?;
    let lap = f.laplacian(z)?;
    Ok(abs_power_identity(p, v, fz, fzb, lap))
}

/// `∫_𝔻 (1 − |z|)^ν |f|^μ ‖D_f‖^t dA` on the plain table of `rule`.
pub fn dirichlet_energy<F: Differentiable + ?Sized>(
    f: &F,
    params: EnergyParams,
    rule: &DiskRule,
) -> Result<f64> {
    let mut acc = 0.0;
    for (w, wt) in rule.nodes() {
        let d = 1.0 - w.norm();
        let mut v = d.powf(params.nu) * f.value(w)?.norm().powf(params.mu);
        if params.t != 0.0 {
            let (fz, fzb) = f.wirtinger(w)?;
            v *= (fz.norm() + fzb.norm()).powf(params.t);
        }
        acc += wt * v;
    }
    Ok(acc)
}

/// Inputs of [`bergman_membership_check`].
#[derive(Debug, Clone)]
pub struct BergmanParams {
    pub p: f64,
    /// Increasing radii in `(0, 1)` for the truncated integrals.
    pub radii: Vec<f64>,
    /// Points for the pointwise bound and the hypothesis check.
    pub grid: Grid,
    /// `sup |f|` on the closed disk; estimated on a grid when absent.
    pub sup_norm: Option<f64>,
    /// Gauss–Legendre order per annulus.
    pub annulus_order: usize,
    pub angular_order: usize,
    /// Rule for the norm integral.
    pub norm_rule: DiskRule,
    /// Allowed decrease between successive truncated integrals.
    pub tolerance: f64,
    /// Required size of the last successive difference, if any.
    pub convergence_tol: Option<f64>,
}

impl BergmanParams {
    pub fn new(p: f64) -> Result<Self> {
        Ok(BergmanParams {
            p,
            radii: alloc::vec![0.5, 0.9, 0.99, 0.999],
            grid: Grid::polar(20, 64, 0.999)?,
            sup_norm: None,
            annulus_order: 32,
            angular_order: 128,
            norm_rule: DiskRule::new(64, 128)?,
            tolerance: 1e-9,
            convergence_tol: Some(1e-4),
        })
    }
}

/// Annulus `r_0 < |z| < r_1` integral of `f` with `dA = dx dy/π`.
fn annulus<G: Fn(Complex64) -> Result<f64> + Sync + Send, E: Executor>(
    r0: f64,
    r1: f64,
    radial: &GaussLegendre,
    angular: usize,
    f: G,
    exec: &E,
) -> Result<f64> {
    let (x, w) = crate::quadrature::gauss_legendre(radial.order());
    let half = 0.5 * (r1 - r0);
    let mid = 0.5 * (r1 + r0);
    let mut pts = Vec::with_capacity(x.len() * angular);
    let mut wts = Vec::with_capacity(x.len() * angular);
    for (xi, wi) in x.iter().zip(&w) {
        let r = mid + half * xi;
        for j in 0..angular {
            let t = 2.0 * core::f64::consts::PI * j as f64 / angular as f64;
            pts.push(Complex64::from_polar(r, t));
            wts.push(2.0 * r * wi * half / angular as f64);
        }
    }
    let vals = exec.map_points(&pts, f);
    let mut acc = 0.0;
    for (v, wt) in vals.into_iter().zip(wts) {
        acc += v? * wt;
    }
    Ok(acc)
}

/// Numerical evidence that a bounded α-harmonic `f` lies in `b_{p−1,p}`:
///
/// * truncated integrals `I(r) = ∫_{𝔻_r} (1 − |z|²)^{p+1} Δ(|f|^p) dA` for
///   each radius, required nondecreasing when `Re(f̄ Δf) ≥ 0` holds on the
///   grid, bounded by the integrated pointwise bound, and, if requested,
///   with a small last increment;
/// * the pointwise bound
///   `(1 − |z|²)^{p+1} Δ(|f|^p) ≤ M^p [p² 2^{p−2}(m^{p−2} + C₁^{p−2}) C₁² (1 − |z|²)
///   + p 2^{p−2}(m^{p−1} + C₁^{p−1}) C₂]` with `m = |f(0)|/M`,
///   `C₁ = (|α|+1) 2^{|α|+1}`, `C₂ = |α|(|α|+1) 2^{|α|+3}`;
/// * finiteness of `|f(0)| + (∫ (1 − |z|)^{p−1} |f|^p dA)^{1/p}`.
pub fn bergman_membership_check<F, E>(
    f: &F,
    alpha: Alpha,
    params: &BergmanParams,
    exec: &E,
) -> Result<VerificationReport>
where
    F: Differentiable + ?Sized,
    E: Executor,
{
    let p = params.p;
    if !(p >= 2.0) {
        return Err(Error::InvalidParameter { name: "p", value: p });
    }
    params.grid.validate()?;
    if params.radii.is_empty()
        || params.radii.windows(2).any(|w| !(w[0] < w[1]))
        || !(params.radii[0] > 0.0 && params.radii[params.radii.len() - 1] < 1.0)
    {
        return Err(Error::InvalidParameter { name: "radii", value: params.radii.len() as f64 });
    }
    let a = alpha.get().abs();
    let c1 = (a + 1.0) * 2f64.powf(a + 1.0);
    let c2 = a * (a + 1.0) * 2f64.powf(a + 3.0);
    let points = params.grid.points();

    let sup = match params.sup_norm {
        Some(m) => m,
        None => {
            let mods: Result<Vec<f64>> =
                exec.map_points(&points, |z| f.value(z).map(|v| v.norm())).into_iter().collect();
            mods?.into_iter().fold(0.0, f64::max) * 1.05
        }
    };
    let f0 = f.value(Complex64::new(0.0, 0.0))?.norm();
    let m = if sup > 0.0 { f0 / sup } else { 0.0 };
    let k2 = p * p * 2f64.powf(p - 2.0) * (m.powf(p - 2.0) + c1.powf(p - 2.0)) * c1 * c1;
    let k1 = p * 2f64.powf(p - 2.0) * (m.powf(p - 1.0) + c1.powf(p - 1.0)) * c2;
    let scale = sup.powf(p);
    let bound = |q: f64| scale * (k2 * q + k1);

    let mut b = ReportBuilder::new(TheoremId::Bergman, params.grid.describe(), params.tolerance);

    // hypothesis Re(f̄ Δf) ≥ 0
    let hyp: Result<Vec<f64>> = exec
        .map_points(&points, |z| Ok((f.value(z)?.conj() * f.laplacian(z)?).re))
        .into_iter()
        .collect();
    let hyp_min = hyp?.into_iter().fold(f64::INFINITY, f64::min);
    let hypothesis = hyp_min >= -params.tolerance;

    // (b) pointwise bound
    let lhs: Result<Vec<f64>> = exec
        .map_points(&points, |z| {
            let q = 1.0 - z.norm_sqr();
            Ok(q.powf(p + 1.0) * laplacian_abs_power_regularized(f, p, z)?)
        })
        .into_iter()
        .collect();
    for (z, l) in points.iter().zip(lhs?) {
        b.check(*z, l, bound(1.0 - z.norm_sqr()));
    }

    // (a) truncated integrals
    let gl = GaussLegendre::new(params.annulus_order);
    let mut total = 0.0;
    let mut prev_r = 0.0;
    let mut last_increment = f64::NAN;
    let mut monotone = true;
    for &r in &params.radii {
        let inc = annulus(
            prev_r,
            r,
            &gl,
            params.angular_order,
            |z| Ok((1.0 - z.norm_sqr()).powf(p + 1.0) * laplacian_abs_power_regularized(f, p, z)?),
            exec,
        )?;
        total += inc;
        last_increment = inc;
        let r2 = r * r;
        // ∫_{𝔻_r} bound dA = scale (k2 (r² − r⁴/2) + k1 r²)
        let integrated = scale * (k2 * (r2 - 0.5 * r2 * r2) + k1 * r2);
        let at = Complex64::new(r, 0.0);
        b.check(at, total, integrated);
        if inc < -params.tolerance {
            monotone = false;
            if hypothesis {
                b.fail(at, -inc, 0.0);
            }
        }
        b.metric("truncated_integral", total);
        prev_r = r;
    }
    if let Some(ct) = params.convergence_tol {
        let at = Complex64::new(prev_r, 0.0);
        if !(last_increment.abs() < ct) {
            b.fail(at, last_increment.abs(), ct);
        }
    }

    // (c) norm
    let energy = dirichlet_energy(f, EnergyParams::new(p - 1.0, p, 0.0)?, &params.norm_rule)?;
    let norm = f0 + energy.powf(1.0 / p);
    if !norm.is_finite() {
        b.fail(Complex64::new(0.0, 0.0), norm, f64::MAX);
    }

    b.metric("last_difference", last_increment.abs());
    b.metric("monotone", if monotone { 1.0 } else { 0.0 });
    b.metric("hypothesis_min", hyp_min);
    b.metric("hypothesis_holds", if hypothesis { 1.0 } else { 0.0 });
    b.metric("sup_norm", sup);
    b.metric("norm", norm);
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{AlphaHarmonicSeries, CoefficientSequence};
    use crate::Sequential;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn constant(v: Complex64, a: f64) -> AlphaHarmonicSeries {
        AlphaHarmonicSeries::new(Alpha::new(a).unwrap(), CoefficientSequence::new([(0, v)]))
    }

    #[test]
    fn abs_power_of_analytic_square() {
        let s = AlphaHarmonicSeries::new(Alpha::new(1.0).unwrap(), CoefficientSequence::new([(2, c(1.0, 0.5))]));
        let z = c(0.3, 0.4);
        let fp = c(1.0, 0.5) * 2.0 * z;
        assert!((laplacian_abs_power(&s, 2.0, z).unwrap() - 4.0 * fp.norm_sqr()).abs() < 1e-13);
        assert_eq!(laplacian_abs_power(&constant(c(2.0, 0.0), 0.5), 3.0, z).unwrap(), 0.0);
        assert!(laplacian_abs_power(&s, 1.5, z).is_err());
        assert!(laplacian_abs_power(&s, 3.0, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn energy_closed_forms() {
        let rule = DiskRule::new(32, 64).unwrap();
        let k = constant(c(0.0, 2.0), 1.0);
        let e = dirichlet_energy(&k, EnergyParams::new(0.5, 1.0, 1.0).unwrap(), &rule).unwrap();
        assert_eq!(e, 0.0);
        let e = dirichlet_energy(&k, EnergyParams::new(2.0, 3.0, 0.0).unwrap(), &rule).unwrap();
        assert!((e - 8.0 * 2.0 / 12.0).abs() < 1e-13);
        let id = AlphaHarmonicSeries::new(Alpha::new(0.0).unwrap(), CoefficientSequence::new([(1, c(1.0, 0.0))]));
        let e = dirichlet_energy(&id, EnergyParams::new(1.0, 2.0, 0.0).unwrap(), &rule).unwrap();
        assert!((e - 0.1).abs() < 1e-13);
        assert!(EnergyParams::new(-1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn constant_membership() {
        let v = c(0.6, -0.8);
        for p in [2.0, 3.0, 6.0] {
            let params = BergmanParams { grid: Grid::polar(4, 16, 0.99).unwrap(), ..BergmanParams::new(p).unwrap() };
            let r = bergman_membership_check(&constant(v, 1.0), Alpha::new(1.0).unwrap(), &params, &Sequential)
                .unwrap();
            assert!(r.passed, "{r:?}");
            let expect = 1.0 + (2.0 / (p * (p + 1.0))).powf(1.0 / p);
            assert!((r.metric("norm").unwrap() - expect).abs() < 1e-10);
            assert_eq!(r.metric("last_difference").unwrap(), 0.0);
        }
    }

    #[test]
    fn rejects_small_p_and_bad_radii() {
        let k = constant(c(1.0, 0.0), 1.0);
        let a = Alpha::new(1.0).unwrap();
        assert!(bergman_membership_check(&k, a, &BergmanParams::new(1.0).unwrap(), &Sequential).is_err());
        let params = BergmanParams { radii: alloc::vec![0.9, 0.5], ..BergmanParams::new(2.0).unwrap() };
        assert!(bergman_membership_check(&k, a, &params, &Sequential).is_err());
    }
}
