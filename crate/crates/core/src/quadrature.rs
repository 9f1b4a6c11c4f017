//! Quadrature rules on the circle and the disk.
//!
//! Area integrals use the normalized measure `dA = dx dy / π`, so the disk
//! has unit mass. Integrands with a logarithmic or `1/|z − w|` singularity
//! at an interior point are handled by [`integrate_disk_mobius`], which moves
//! the singular point to the origin with the disk automorphism
//! `w ↦ (c − w)/(1 − c̄ w)` and integrates in polar coordinates there.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre order must be positive");
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, d)
}

/// A fixed Gauss–Legendre rule mapped to an arbitrary interval.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Recursive bisection until, on every panel, the two halves agree with
    /// the whole to `tol`. The tolerance is per panel; it is not split
    /// between children, so endpoint singularities like `ln x` terminate.
    pub fn integrate_adaptive<F: Fn(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        tol: f64,
        f: &F,
    ) -> Result<f64> {
        let whole = self.integrate(a, b, f);
        self.adapt(a, b, whole, tol, f, 0)
    }

    fn adapt<F: Fn(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        f: &F,
        depth: usize,
    ) -> Result<f64> {
        let mid = 0.5 * (a + b);
        let left = self.integrate(a, mid, f);
        let right = self.integrate(mid, b, f);
        let floor = 8.0 * f64::EPSILON * (left.abs() + right.abs());
        if (left + right - whole).abs() <= tol.max(floor) {
            return Ok(left + right);
        }
        if depth >= 40 {
            return Err(Error::NonConvergence { what: "adaptive Gauss-Legendre", iterations: depth });
        }
        Ok(self.adapt(a, mid, left, tol, f, depth + 1)?
            + self.adapt(mid, b, right, tol, f, depth + 1)?)
    }
}

/// Uniform rule on the circle, `θ_j = 2πj/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircleRule {
    n: usize,
}

impl CircleRule {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter { name: "circle nodes", value: 0.0 });
        }
        Ok(CircleRule { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn angle(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n as f64
    }

    pub fn angles(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.angle(j))
    }

    /// Weight of each node under the normalized measure `dθ/2π`.
    pub fn normalized_weight(&self) -> f64 {
        1.0 / self.n as f64
    }
}

/// `(1/2π) ∫₀^{2π} f(θ) dθ` with the trapezoid rule.
pub fn integrate_circle<F>(f: F, rule: &CircleRule) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for theta in rule.angles() {
        acc += f(theta)?;
    }
    Ok(acc * rule.normalized_weight())
}

/// Tensor rule on the disk: Gauss–Legendre in the radius, trapezoid in the
/// angle, weights normalized so that `Σ w = 1`.
///
/// Two radial tables are kept: plain Gauss–Legendre in `r` (exact for
/// `|w|^{2m}`, `m < radial_order`) and a graded table in `u` with `r = u²`,
/// which makes `r log r` and `1/r` type behaviour at the origin smooth. The
/// graded table backs [`integrate_disk_mobius`].
#[derive(Debug, Clone)]
pub struct DiskRule {
    radial_order: usize,
    angular_order: usize,
    plain: Vec<(f64, f64)>,
    graded: Vec<(f64, f64)>,
}

impl DiskRule {
    pub const DEFAULT_RADIAL: usize = 64;
    pub const DEFAULT_ANGULAR: usize = 256;

    pub fn new(radial_order: usize, angular_order: usize) -> Result<Self> {
        if radial_order == 0 {
            return Err(Error::InvalidParameter { name: "radial order", value: 0.0 });
        }
        if angular_order == 0 {
            return Err(Error::InvalidParameter { name: "angular order", value: 0.0 });
        }
        let (x, w) = gauss_legendre(radial_order);
        let mut plain = Vec::with_capacity(radial_order);
        let mut graded = Vec::with_capacity(radial_order);
        for (&xi, &wi) in x.iter().zip(&w) {
            let u = 0.5 * (xi + 1.0);
            let du = 0.5 * wi;
            // dA = 2 r dr dθ/2π
            plain.push((u, 2.0 * u * du));
            // r = u², dr = 2u du
            graded.push((u * u, 4.0 * u * u * u * du));
        }
        Ok(DiskRule { radial_order, angular_order, plain, graded })
    }

    /// Angular order defaults to four times the radial order.
    pub fn with_radial(radial_order: usize) -> Result<Self> {
        DiskRule::new(radial_order, 4 * radial_order)
    }

    pub fn radial_order(&self) -> usize {
        self.radial_order
    }

    pub fn angular_order(&self) -> usize {
        self.angular_order
    }

    /// `(radius, radial weight)` pairs of the plain table.
    pub fn radial(&self) -> &[(f64, f64)] {
        &self.plain
    }

    /// `(radius, radial weight)` pairs of the graded table.
    pub fn radial_graded(&self) -> &[(f64, f64)] {
        &self.graded
    }

    /// Unit vectors `e^{iϑ_j}` of the angular nodes.
    pub fn directions(&self) -> Vec<Complex64> {
        (0..self.angular_order)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / self.angular_order as f64))
            .collect()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        let dirs = self.directions();
        let inv = 1.0 / self.angular_order as f64;
        self.plain
            .iter()
            .flat_map(move |&(r, wr)| {
                dirs.clone().into_iter().map(move |d| (d * r, wr * inv))
            })
    }
}

/// An integrand on the disk, optionally flagged as singular at a point.
pub trait DiskIntegrand {
    fn eval(&self, w: Complex64) -> Result<Complex64>;

    fn singular_at(&self) -> Option<Complex64> {
        None
    }
}

impl<F> DiskIntegrand for F
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    fn eval(&self, w: Complex64) -> Result<Complex64> {
        self(w)
    }
}

/// Marks an integrand as singular at `at`.
pub struct Singular<F> {
    pub f: F,
    pub at: Complex64,
}

impl<F> DiskIntegrand for Singular<F>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    fn eval(&self, w: Complex64) -> Result<Complex64> {
        (self.f)(w)
    }

    fn singular_at(&self) -> Option<Complex64> {
        Some(self.at)
    }
}

/// `∫_𝔻 f dA` with the plain tensor rule. Refuses singular integrands.
pub fn integrate_disk<I: DiskIntegrand + ?Sized>(f: &I, rule: &DiskRule) -> Result<Complex64> {
    integrate_subdisk(f, 1.0, rule)
}

/// `∫_{|w|<radius} f dA` (still normalized by the unit disk's `π`).
pub fn integrate_subdisk<I: DiskIntegrand + ?Sized>(
    f: &I,
    radius: f64,
    rule: &DiskRule,
) -> Result<Complex64> {
    if f.singular_at().is_some() {
        return Err(Error::SingularIntegrand);
    }
    if !(radius > 0.0 && radius <= 1.0) {
        return Err(Error::InvalidParameter { name: "radius", value: radius });
    }
    let dirs = rule.directions();
    let inv = 1.0 / rule.angular_order as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for &(r, wr) in &rule.plain {
        let mut ring = Complex64::new(0.0, 0.0);
        for d in &dirs {
            ring += f.eval(d * (r * radius))?;
        }
        acc += ring * (wr * inv);
    }
    Ok(acc * (radius * radius))
}

/// The disk automorphism `w ↦ (c − w)/(1 − c̄ w)`; an involution swapping
/// `c` and `0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    center: Complex64,
}

impl MobiusMap {
    pub fn new(center: Complex64) -> Result<Self> {
        crate::open_disk(center, "Mobius center must lie in the open disk")?;
        Ok(MobiusMap { center })
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    #[inline]
    pub fn map(&self, w: Complex64) -> Complex64 {
        (self.center - w) / (1.0 - self.center.conj() * w)
    }

    /// `|(φ⁻¹)'(ζ)|² = (1 − |c|²)² / |1 − ζ c̄|⁴`, the area Jacobian.
    #[inline]
    pub fn jacobian(&self, zeta: Complex64) -> f64 {
        let c2 = self.center.norm_sqr();
        let d = (1.0 - zeta * self.center.conj()).norm_sqr();
        (1.0 - c2) * (1.0 - c2) / (d * d)
    }
}

/// `∫_𝔻 f dA` after the substitution `w = (c − ζ)/(1 − ζ c̄)`, integrating in
/// polar coordinates around `ζ = 0` with the graded radial table. Use this
/// for integrands singular at `c`.
pub fn integrate_disk_mobius<F>(f: F, center: Complex64, rule: &DiskRule) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let map = MobiusMap::new(center)?;
    let dirs = rule.directions();
    let inv = 1.0 / rule.angular_order as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for &(r, wr) in &rule.graded {
        let mut ring = Complex64::new(0.0, 0.0);
        for d in &dirs {
            let zeta = d * r;
            ring += f(map.map(zeta))? * map.jacobian(zeta);
        }
        acc += ring * (wr * inv);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_weights_and_exactness() {
        for n in [1usize, 2, 5, 16, 64, 200] {
            let (x, w) = gauss_legendre(n);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n} total={total}");
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            // x^{2n-2} integrates to 2/(2n-1)
            let deg = 2 * n - 2;
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((s - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn adaptive_resolves_log_endpoint() {
        let gl = GaussLegendre::new(10);
        let v = gl.integrate_adaptive(0.0, 1.0, 1e-12, &|x: f64| x.ln()).unwrap();
        assert!((v + 1.0).abs() < 1e-10);
    }

    #[test]
    fn circle_rule_cases() {
        let rule = CircleRule::new(16).unwrap();
        let one = integrate_circle(|_| Ok(Complex64::new(1.0, 0.0)), &rule).unwrap();
        assert!((one - 1.0).norm() < 1e-15);
        let e1 = integrate_circle(|t| Ok(Complex64::from_polar(1.0, t)), &rule).unwrap();
        assert!(e1.norm() < 1e-15);
        let rule = CircleRule::new(64).unwrap();
        let p = integrate_circle(
            |t| Ok(Complex64::new(1.0 / (1.0 - Complex64::from_polar(0.5, t)).norm_sqr(), 0.0)),
            &rule,
        )
        .unwrap();
        assert!((p.re - 4.0 / 3.0).abs() < 1e-14);
        assert!(CircleRule::new(0).is_err());
    }

    #[test]
    fn disk_rule_mass_and_moments() {
        let rule = DiskRule::new(16, 64).unwrap();
        let mass: f64 = rule.nodes().map(|(_, w)| w).sum();
        assert!((mass - 1.0).abs() < 1e-12);
        for m in 0..16 {
            let v = integrate_disk(&|w: Complex64| Ok(Complex64::new(w.norm_sqr().powi(m), 0.0)), &rule)
                .unwrap();
            assert!((v.re - 1.0 / (m as f64 + 1.0)).abs() < 1e-10, "m={m}");
        }
    }

    #[test]
    fn plain_rule_refuses_flagged_singularity() {
        let rule = DiskRule::new(8, 32).unwrap();
        let s = Singular { f: |_w: Complex64| Ok(Complex64::new(1.0, 0.0)), at: Complex64::new(0.1, 0.0) };
        assert_eq!(integrate_disk(&s, &rule), Err(Error::SingularIntegrand));
    }

    #[test]
    fn mobius_map_is_involution() {
        let c = Complex64::new(0.3, -0.6);
        let m = MobiusMap::new(c).unwrap();
        assert!(m.map(c).norm() < 1e-15);
        assert!((m.map(Complex64::new(0.0, 0.0)) - c).norm() < 1e-15);
        let w = Complex64::new(-0.2, 0.45);
        assert!((m.map(m.map(w)) - w).norm() < 1e-15);
        assert!(MobiusMap::new(Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn mobius_rule_mass_is_one() {
        let rule = DiskRule::new(32, 128).unwrap();
        let v = integrate_disk_mobius(|_| Ok(Complex64::new(1.0, 0.0)), Complex64::new(0.7, 0.2), &rule)
            .unwrap();
        assert!((v.re - 1.0).abs() < 1e-12, "{v}");
    }
}
