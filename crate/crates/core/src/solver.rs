//! The Dirichlet problem `Δ_α f = g` in 𝔻, `f = f*` on 𝕋, solved through its
//! integral representation `f = 𝒫_α[f*] + 𝒢[g]`.
//!
//! `𝒫_α[f*](z) = (1/2π) ∫ P_α(z e^{−iθ}) f*(e^{iθ}) dθ` is evaluated with a
//! uniform circle rule. `𝒢[g](z) = ∫_𝔻 G_α(z, w) g(w) dA(w)` is evaluated
//! after the substitution `w = (z − ζ)/(1 − ζ z̄)`, in which
//!
//! ```text
//! G_α(z, w)  = −(1 − |z|²)^α (1 − ζ̄ z)^{−α} h(1 − |ζ|²)
//! ∂_z̄ G_α    = (1 − |z|²)^{α−1} (1 − |ζ|²)^{α+1} (1 − ζ̄ z)^{−α} / ζ̄
//! ∂_z G_α    = α w̄ (1 − |z|²)^{α−1} (1 − ζ̄ z)^{1−α} h(1 − |ζ|²)
//!              + (1 − |z|²)^{α−1} (1 − |ζ|²)^{α+1} (1 − ζ̄ z)^{−α} / ζ
//! ```
//!
//! so `h` only ever sees the fixed radial nodes of the rule and is tabulated
//! once per α.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
use num_traits::Float;

use crate::field::{Differentiable, Field};
use crate::kernels::{
    cpow, h_alpha_complement, poisson_alpha_dz_unchecked, poisson_alpha_dzbar_unchecked,
    poisson_alpha_unchecked, H_TOL,
};
use crate::quadrature::{gauss_legendre, CircleRule, DiskRule, MobiusMap};
use crate::{open_disk, Alpha, Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Quadrature orders used by the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureConfig {
    pub circle_nodes: usize,
    pub radial_order: usize,
    pub angular_order: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            circle_nodes: 1024,
            radial_order: DiskRule::DEFAULT_RADIAL,
            angular_order: DiskRule::DEFAULT_ANGULAR,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("circle nodes", self.circle_nodes),
            ("radial order", self.radial_order),
            ("angular order", self.angular_order),
        ] {
            if v < 8 {
                return Err(Error::InvalidParameter { name, value: v as f64 });
            }
        }
        Ok(())
    }
}

/// Angular points used to certify the boundary sup-norm.
pub const SUP_NORM_SAMPLES: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
enum BoundaryRepr {
    Fourier(BTreeMap<i64, Complex64>),
    Samples { values: Vec<Complex64>, order: usize },
}

/// Continuous boundary data `f*` on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    repr: BoundaryRepr,
    sup_norm: f64,
}

impl BoundaryData {
    /// `f*(e^{iθ}) = Σ c_k e^{ikθ}`. Zero coefficients are dropped.
    pub fn fourier<I>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let map: BTreeMap<i64, Complex64> =
            coeffs.into_iter().filter(|(_, c)| *c != ZERO).collect();
        let mut b = BoundaryData { repr: BoundaryRepr::Fourier(map), sup_norm: 0.0 };
        b.sup_norm = b.estimate_sup();
        b
    }

    pub fn zero() -> Self {
        BoundaryData::fourier(core::iter::empty())
    }

    pub fn constant(c: Complex64) -> Self {
        BoundaryData::fourier([(0, c)])
    }

    /// Uniform samples `f*(e^{2πij/n})`, interpolated by periodic Lagrange
    /// polynomials through `order + 1` neighbouring samples.
    pub fn samples(values: Vec<Complex64>, order: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter { name: "sample count", value: 0.0 });
        }
        if order + 1 > values.len() {
            return Err(Error::InvalidParameter { name: "interpolation order", value: order as f64 });
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidParameter { name: "sample value", value: f64::NAN });
        }
        let mut b = BoundaryData { repr: BoundaryRepr::Samples { values, order }, sup_norm: 0.0 };
        b.sup_norm = b.estimate_sup();
        Ok(b)
    }

    pub fn fourier_coefficients(&self) -> Option<&BTreeMap<i64, Complex64>> {
        match &self.repr {
            BoundaryRepr::Fourier(m) => Some(m),
            BoundaryRepr::Samples { .. } => None,
        }
    }

    pub fn sample_values(&self) -> Option<(&[Complex64], usize)> {
        match &self.repr {
            BoundaryRepr::Samples { values, order } => Some((values, *order)),
            BoundaryRepr::Fourier(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            BoundaryRepr::Fourier(m) => m.is_empty(),
            BoundaryRepr::Samples { values, .. } => values.iter().all(|v| *v == ZERO),
        }
    }

    /// `‖f*‖_∞`, at least the maximum over [`SUP_NORM_SAMPLES`] angles.
    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn evaluate(&self, theta: f64) -> Complex64 {
        match &self.repr {
            BoundaryRepr::Fourier(m) => m
                .iter()
                .map(|(&k, &c)| c * Complex64::from_polar(1.0, k as f64 * theta))
                .sum(),
            BoundaryRepr::Samples { values, order } => lagrange_periodic(values, *order, theta),
        }
    }

    /// `f* − c`.
    pub fn shifted(&self, c: Complex64) -> Self {
        match &self.repr {
            BoundaryRepr::Fourier(m) => {
                let mut m = m.clone();
                *m.entry(0).or_insert(ZERO) -= c;
                BoundaryData::fourier(m)
            }
            BoundaryRepr::Samples { values, order } => {
                let v = values.iter().map(|v| v - c).collect();
                // order was valid for the same length
                BoundaryData::samples(v, *order).expect("shifted samples keep their shape")
            }
        }
    }

    /// `f*` scaled by a real factor.
    pub fn scaled(&self, s: f64) -> Self {
        match &self.repr {
            BoundaryRepr::Fourier(m) => BoundaryData::fourier(m.iter().map(|(&k, &c)| (k, c * s))),
            BoundaryRepr::Samples { values, order } => {
                BoundaryData::samples(values.iter().map(|v| v * s).collect(), *order)
                    .expect("scaled samples keep their shape")
            }
        }
    }

    fn estimate_sup(&self) -> f64 {
        let n = SUP_NORM_SAMPLES;
        let step = 2.0 * PI / n as f64;
        let mut best = (0.0, 0.0);
        for j in 0..n {
            let t = j as f64 * step;
            let v = self.evaluate(t).norm();
            if v > best.0 {
                best = (v, t);
            }
        }
        // golden-section refinement around the best sample
        let (mut a, mut b) = (best.1 - step, best.1 + step);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (self.evaluate(c).norm(), self.evaluate(d).norm());
        for _ in 0..60 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = self.evaluate(c).norm();
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = self.evaluate(d).norm();
            }
        }
        best.0.max(fc).max(fd)
    }
}

fn lagrange_periodic(values: &[Complex64], order: usize, theta: f64) -> Complex64 {
    let n = values.len();
    let u = theta / (2.0 * PI);
    let t = (u - u.floor()) * n as f64;
    let base = t.floor();
    let start = base as i64 - (order as i64) / 2;
    let mut acc = ZERO;
    for i in 0..=order as i64 {
        let xi = (start + i) as f64;
        let mut l = 1.0;
        for j in 0..=order as i64 {
            if j != i {
                let xj = (start + j) as f64;
                l *= (t - xj) / (xi - xj);
            }
        }
        acc += values[(start + i).rem_euclid(n as i64) as usize] * l;
    }
    acc
}

/// Closed-form evaluator for a source `g`.
pub type SourceFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum SourceKind {
    Zero,
    Constant(Complex64),
    /// Terms `c · z^m z̄^n`.
    Monomials(Vec<(u32, u32, Complex64)>),
    Custom(SourceFn),
}

/// A continuous source term `g` on the closed disk.
#[derive(Clone)]
pub struct SourceField {
    kind: SourceKind,
    sup_norm: f64,
    singular_at: Option<Complex64>,
}

impl fmt::Debug for SourceField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            SourceKind::Zero => "zero",
            SourceKind::Constant(_) => "constant",
            SourceKind::Monomials(_) => "monomials",
            SourceKind::Custom(_) => "custom",
        };
        f.debug_struct("SourceField")
            .field("kind", &kind)
            .field("sup_norm", &self.sup_norm)
            .field("singular_at", &self.singular_at)
            .finish()
    }
}

/// Polar grid used to estimate `‖g‖_∞` when it is not declared.
pub const SOURCE_SUP_GRID: (usize, usize) = (64, 256);
/// Inflation applied to the grid estimate of `‖g‖_∞`.
pub const SOURCE_SUP_INFLATION: f64 = 1.05;

impl SourceField {
    pub fn zero() -> Self {
        SourceField { kind: SourceKind::Zero, sup_norm: 0.0, singular_at: None }
    }

    pub fn constant(c: Complex64) -> Self {
        if c == ZERO {
            return SourceField::zero();
        }
        SourceField { kind: SourceKind::Constant(c), sup_norm: c.norm(), singular_at: None }
    }

    /// `g(w) = Σ c · w^m w̄^n`.
    pub fn monomials(terms: Vec<(u32, u32, Complex64)>) -> Self {
        let terms: Vec<_> = terms.into_iter().filter(|t| t.2 != ZERO).collect();
        if terms.is_empty() {
            return SourceField::zero();
        }
        let triangle: f64 = terms.iter().map(|t| t.2.norm()).sum();
        let mut s = SourceField { kind: SourceKind::Monomials(terms), sup_norm: 0.0, singular_at: None };
        s.sup_norm = s.grid_sup().min(triangle);
        s
    }

    /// A user evaluator. Without a declared bound, `‖g‖_∞` is estimated on a
    /// polar grid and inflated by 5%.
    pub fn custom(f: SourceFn, declared_sup: Option<f64>) -> Self {
        let mut s = SourceField { kind: SourceKind::Custom(f), sup_norm: 0.0, singular_at: None };
        s.sup_norm = declared_sup.unwrap_or_else(|| s.grid_sup());
        s
    }

    /// Flags a point where `g` is not continuous; such sources are rejected
    /// by the Green potential.
    pub fn with_singularity(mut self, at: Complex64) -> Self {
        self.singular_at = Some(at);
        self
    }

    pub fn singular_at(&self) -> Option<Complex64> {
        self.singular_at
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind, SourceKind::Zero)
    }

    pub fn constant_value(&self) -> Option<Complex64> {
        match self.kind {
            SourceKind::Constant(c) => Some(c),
            SourceKind::Zero => Some(ZERO),
            _ => None,
        }
    }

    pub fn monomial_terms(&self) -> Option<&[(u32, u32, Complex64)]> {
        match &self.kind {
            SourceKind::Monomials(t) => Some(t),
            _ => None,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    #[inline]
    pub fn eval(&self, w: Complex64) -> Complex64 {
        match &self.kind {
            SourceKind::Zero => ZERO,
            SourceKind::Constant(c) => *c,
            SourceKind::Monomials(terms) => terms
                .iter()
                .map(|&(m, n, c)| c * w.powu(m) * w.conj().powu(n))
                .sum(),
            SourceKind::Custom(f) => f(w),
        }
    }

    fn grid_sup(&self) -> f64 {
        let (nr, na) = SOURCE_SUP_GRID;
        let mut best = self.eval(ZERO).norm();
        for i in 1..=nr {
            let r = i as f64 / nr as f64;
            for j in 0..na {
                let w = Complex64::from_polar(r, 2.0 * PI * j as f64 / na as f64);
                best = best.max(self.eval(w).norm());
            }
        }
        best * SOURCE_SUP_INFLATION
    }
}

/// The Poisson-type integral `𝒫_α[f*]` with boundary samples cached on the
/// circle rule.
#[derive(Debug, Clone)]
pub struct PoissonOperator {
    alpha: Alpha,
    boundary: BoundaryData,
    rule: CircleRule,
    // (e^{−iθ_j}, f*(e^{iθ_j}))
    nodes: Vec<(Complex64, Complex64)>,
}

impl PoissonOperator {
    pub fn new(boundary: &BoundaryData, alpha: Alpha, rule: CircleRule) -> Self {
        let nodes = if boundary.is_zero() { Vec::new() } else { circle_nodes(boundary, &rule) };
        PoissonOperator { alpha, boundary: boundary.clone(), rule, nodes }
    }

    /// The cached rule resolves the kernel when `|z|^n` is negligible; closer
    /// to the circle a finer rule is built on the fly.
    fn nodes_for(&self, r: f64) -> Option<Vec<(Complex64, Complex64)>> {
        let needed = (36.0 / (1.0 - r)).ceil() as usize;
        if needed <= self.rule.len() {
            None
        } else {
            let rule = CircleRule::new(needed.next_power_of_two()).expect("positive node count");
            Some(circle_nodes(&self.boundary, &rule))
        }
    }

    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        let z2 = open_disk(z, "Poisson integral requires |z| < 1")?;
        if self.boundary.is_zero() {
            return Ok(ZERO);
        }
        let fine = self.nodes_for(z2.sqrt());
        let nodes = fine.as_deref().unwrap_or(&self.nodes);
        let a = self.alpha.get();
        let mut acc = ZERO;
        for &(e, f) in nodes {
            acc += poisson_alpha_unchecked(z * e, z2, a) * f;
        }
        Ok(acc / nodes.len() as f64)
    }

    /// `(∂_z, ∂_z̄) 𝒫_α[f*](z)` by differentiating under the integral.
    pub fn wirtinger(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let z2 = open_disk(z, "Poisson integral requires |z| < 1")?;
        if self.boundary.is_zero() {
            return Ok((ZERO, ZERO));
        }
        let fine = self.nodes_for(z2.sqrt());
        let nodes = fine.as_deref().unwrap_or(&self.nodes);
        let a = self.alpha.get();
        let (mut dz, mut dzb) = (ZERO, ZERO);
        for &(e, f) in nodes {
            dz += poisson_alpha_dz_unchecked(z, z2, e, a) * f;
            dzb += poisson_alpha_dzbar_unchecked(z, z2, e, a) * f;
        }
        let n = nodes.len() as f64;
        Ok((dz / n, dzb / n))
    }
}

fn circle_nodes(boundary: &BoundaryData, rule: &CircleRule) -> Vec<(Complex64, Complex64)> {
    rule.angles()
        .map(|t| (Complex64::from_polar(1.0, -t), boundary.evaluate(t)))
        .collect()
}

/// `𝒫_α[f*](z)` with a fresh circle rule of `nodes` points.
pub fn poisson_integral(
    fstar: &BoundaryData,
    z: Complex64,
    alpha: Alpha,
    nodes: usize,
) -> Result<Complex64> {
    PoissonOperator::new(fstar, alpha, CircleRule::new(nodes)?).value(z)
}

/// The Green potential `𝒢[g]` on a Möbius-centered disk rule.
///
/// In the `ζ` variable the radius runs over dyadic panels
/// `[0, ½], [½, ¾], …` closing with `[1 − 2^{−L}, 1]`, where `2^{−L}` is
/// about `1 − |z|`; the first panel is graded as `r = u⁴/2` and the last as
/// `1 − r ∝ u⁶`. Each panel gets
/// enough angular nodes to resolve `|1 − ζ z̄|^{−4}` on its outer circle.
#[derive(Debug, Clone)]
pub struct GreenOperator {
    alpha: Alpha,
    rule: DiskRule,
    // panels[j] covers [1 − 2^{−j}, 1 − 2^{−j−1}] (panel 0 is [0, ½])
    panels: Vec<Panel>,
    // tails[L − 1] covers [1 − 2^{−L}, 1]
    tails: Vec<Panel>,
}

#[derive(Debug, Clone)]
struct Panel {
    outer: f64,
    // (r, weight, h(1 − r²), (1 − r²)^{α+1})
    nodes: Vec<(f64, f64, f64, f64)>,
}

/// Deepest dyadic level used to resolve points near the circle.
const GREEN_LEVELS: usize = 24;
const GREEN_MAX_ANGULAR: usize = 1 << 20;

/// Integrals `∫|∂_z G_α g| dA` and `∫|∂_z̄ G_α g| dA`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenDerivativeBounds {
    pub dz_abs: f64,
    pub dzbar_abs: f64,
}

impl GreenOperator {
    /// Each radial panel uses `radial_order / 2` (at least 8) Gauss–Legendre
    /// points; `angular_order` is the minimum per panel.
    pub fn new(alpha: Alpha, rule: DiskRule) -> Result<Self> {
        let order = (rule.radial_order() / 2).max(8);
        let (x, w) = gauss_legendre(order);
        let panel = |lo: f64, hi: f64, graded: bool| -> Result<Panel> {
            let mut nodes = Vec::with_capacity(order);
            for (&xi, &wi) in x.iter().zip(&w) {
                let u = 0.5 * (xi + 1.0);
                let (r, wr, one_minus_r) = if graded {
                    // r = u⁴/2 on u ∈ [0, 1] tames the logarithm of h(1 − r²) at r = 0
                    let r = 0.5 * u.powi(4);
                    (r, wi * u.powi(3), 1.0 - r)
                } else if hi == 1.0 {
                    // 1 − r = d u⁶ smooths (1 − r²)^{α+1} at r = 1
                    let d = 1.0 - lo;
                    let one_minus_r = d * u.powi(6);
                    (1.0 - one_minus_r, 3.0 * d * u.powi(5) * wi, one_minus_r)
                } else {
                    let half = 0.5 * (hi - lo);
                    let r = 0.5 * (hi + lo) + half * xi;
                    // 1 − r measured from the upper end keeps the digits
                    let one_minus_r = (1.0 - hi) + half * (1.0 - xi);
                    (r, wi * half, one_minus_r)
                };
                // dA = 2 r dr (angular mean taken separately)
                let r2 = r * r;
                let one_minus_r2 = one_minus_r * (1.0 + r);
                let h = h_alpha_complement(one_minus_r2, r2, alpha, H_TOL)?;
                nodes.push((r, 2.0 * r * wr, h, one_minus_r2.powf(alpha.get() + 1.0)));
            }
            Ok(Panel { outer: hi, nodes })
        };
        let mut panels = Vec::with_capacity(GREEN_LEVELS);
        let mut tails = Vec::with_capacity(GREEN_LEVELS);
        for j in 0..GREEN_LEVELS {
            let lo = 1.0 - 0.5f64.powi(j as i32);
            let hi = 1.0 - 0.5f64.powi(j as i32 + 1);
            panels.push(panel(lo, hi, j == 0)?);
            tails.push(panel(hi, 1.0, false)?);
        }
        Ok(GreenOperator { alpha, rule, panels, tails })
    }

    pub fn with_config(alpha: Alpha, cfg: &QuadratureConfig) -> Result<Self> {
        GreenOperator::new(alpha, DiskRule::new(cfg.radial_order, cfg.angular_order)?)
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn rule(&self) -> &DiskRule {
        &self.rule
    }

    fn check(&self, g: &SourceField, z: Complex64) -> Result<f64> {
        if g.singular_at().is_some() {
            return Err(Error::SingularIntegrand);
        }
        open_disk(z, "Green potential requires |z| < 1")
    }

    /// Walks the rule: `visit(w, ζ, weight·Jacobian, (r, h, (1−r²)^{α+1}), c)`
    /// with `c = 1 − ζ̄ z`.
    #[inline]
    fn walk<F>(&self, z: Complex64, mut visit: F)
    where
        F: FnMut(Complex64, Complex64, f64, (f64, f64, f64), Complex64),
    {
        let map = MobiusMap::new(z).expect("checked by caller");
        let rz = z.norm();
        // smallest L ≥ 1 with 2^{−L} ≤ 1 − |z|
        let mut level = 1;
        while level < GREEN_LEVELS && 0.5f64.powi(level as i32) > 1.0 - rz {
            level += 1;
        }
        let chosen = self.panels[1..level].iter().chain(core::iter::once(&self.tails[level - 1]));
        for panel in core::iter::once(&self.panels[0]).chain(chosen) {
            let need = (36.0 / (1.0 - panel.outer * rz)).ceil() as usize;
            let n = need.next_power_of_two().clamp(self.rule.angular_order(), GREEN_MAX_ANGULAR);
            let inv = 1.0 / n as f64;
            let step = 2.0 * PI * inv;
            for j in 0..n {
                let d = Complex64::from_polar(1.0, step * j as f64);
                for &(r, wr, h, pw) in &panel.nodes {
                    let zeta = d * r;
                    let w = map.map(zeta);
                    let c = 1.0 - zeta.conj() * z;
                    visit(w, zeta, wr * inv * map.jacobian(zeta), (r, h, pw), c);
                }
            }
        }
    }

    /// `𝒢[g](z) = ∫ G_α(z, w) g(w) dA(w)`.
    pub fn potential(&self, g: &SourceField, z: Complex64) -> Result<Complex64> {
        let z2 = self.check(g, z)?;
        if g.is_zero() {
            return Ok(ZERO);
        }
        let a = self.alpha.get();
        let q = 1.0 - z2;
        let qa = q.powf(a);
        let mut acc = ZERO;
        self.walk(z, |w, _zeta, wt, (_, h, _), c| {
            acc += g.eval(w) * (h * wt) / cpow(c, a);
        });
        Ok(-acc * qa)
    }

    /// `(∂_z 𝒢[g], ∂_z̄ 𝒢[g])` by differentiating under the integral.
    pub fn wirtinger(&self, g: &SourceField, z: Complex64) -> Result<(Complex64, Complex64)> {
        let z2 = self.check(g, z)?;
        if g.is_zero() {
            return Ok((ZERO, ZERO));
        }
        let (mut dz, mut dzb) = (ZERO, ZERO);
        self.walk_derivatives(z, z2, |w, kz, kzb, wt| {
            let gw = g.eval(w) * wt;
            dz += kz * gw;
            dzb += kzb * gw;
        });
        Ok((dz, dzb))
    }

    /// `∫|∂_z G_α(z,w) g(w)| dA(w)` and `∫|∂_z̄ G_α(z,w) g(w)| dA(w)`.
    pub fn derivative_abs_integrals(
        &self,
        g: &SourceField,
        z: Complex64,
    ) -> Result<GreenDerivativeBounds> {
        let z2 = self.check(g, z)?;
        let (mut dz, mut dzb) = (0.0, 0.0);
        self.walk_derivatives(z, z2, |w, kz, kzb, wt| {
            let gw = g.eval(w).norm() * wt;
            dz += kz.norm() * gw;
            dzb += kzb.norm() * gw;
        });
        Ok(GreenDerivativeBounds { dz_abs: dz, dzbar_abs: dzb })
    }

    fn walk_derivatives<F>(&self, z: Complex64, z2: f64, mut visit: F)
    where
        F: FnMut(Complex64, Complex64, Complex64, f64),
    {
        let a = self.alpha.get();
        let q = 1.0 - z2;
        let qa1 = q.powf(a - 1.0);
        self.walk(z, |w, zeta, wt, (_, h, pw), c| {
            let c_neg_a = if a == 0.0 { Complex64::new(1.0, 0.0) } else { cpow(c, -a) };
            let common = c_neg_a * (qa1 * pw);
            let kzb = common / zeta.conj();
            let mut kz = common / zeta;
            if a != 0.0 {
                kz += w.conj() * c * c_neg_a * (a * qa1 * h);
            }
            visit(w, kz, kzb, wt);
        });
    }
}

/// `𝒢[g](z)` with the default disk rule.
pub fn green_potential(g: &SourceField, z: Complex64, alpha: Alpha) -> Result<Complex64> {
    GreenOperator::with_config(alpha, &QuadratureConfig::default())?.potential(g, z)
}

/// `f_z`, `f_z̄` and the induced stretch bounds of the real Jacobian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianData {
    pub fz: Complex64,
    pub fzbar: Complex64,
    /// `‖D_f‖ = |f_z| + |f_z̄|`
    pub op_norm: f64,
    /// `l(D_f) = ||f_z| − |f_z̄||`
    pub min_stretch: f64,
}

impl JacobianData {
    pub fn new(fz: Complex64, fzbar: Complex64) -> Self {
        let (a, b) = (fz.norm(), fzbar.norm());
        JacobianData { fz, fzbar, op_norm: a + b, min_stretch: (a - b).abs() }
    }
}

/// The solution `z ↦ 𝒫_α[f*](z) + 𝒢[g](z)`.
#[derive(Debug, Clone)]
pub struct SolutionField {
    alpha: Alpha,
    boundary: BoundaryData,
    source: SourceField,
    config: QuadratureConfig,
    poisson: PoissonOperator,
    green: Option<GreenOperator>,
}

/// Solves `Δ_α f = g`, `f|_𝕋 = f*` with the default quadrature orders.
pub fn solve(fstar: &BoundaryData, g: &SourceField, alpha: Alpha) -> Result<SolutionField> {
    solve_with(fstar, g, alpha, QuadratureConfig::default())
}

pub fn solve_with(
    fstar: &BoundaryData,
    g: &SourceField,
    alpha: Alpha,
    config: QuadratureConfig,
) -> Result<SolutionField> {
    config.validate()?;
    if g.singular_at().is_some() {
        return Err(Error::SingularIntegrand);
    }
    let poisson = PoissonOperator::new(fstar, alpha, CircleRule::new(config.circle_nodes)?);
    let green = if g.is_zero() { None } else { Some(GreenOperator::with_config(alpha, &config)?) };
    Ok(SolutionField {
        alpha,
        boundary: fstar.clone(),
        source: g.clone(),
        config,
        poisson,
        green,
    })
}

impl SolutionField {
    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn boundary(&self) -> &BoundaryData {
        &self.boundary
    }

    pub fn source(&self) -> &SourceField {
        &self.source
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.config
    }

    pub fn poisson_part(&self, z: Complex64) -> Result<Complex64> {
        self.poisson.value(z)
    }

    pub fn green_part(&self, z: Complex64) -> Result<Complex64> {
        match &self.green {
            Some(g) => g.potential(&self.source, z),
            None => open_disk(z, "Green potential requires |z| < 1").map(|_| ZERO),
        }
    }

    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.poisson_part(z)? + self.green_part(z)?)
    }

    pub fn jacobian(&self, z: Complex64) -> Result<JacobianData> {
        let (pz, pzb) = self.poisson.wirtinger(z)?;
        let (gz, gzb) = match &self.green {
            Some(g) => g.wirtinger(&self.source, z)?,
            None => (ZERO, ZERO),
        };
        Ok(JacobianData::new(pz + gz, pzb + gzb))
    }

    /// Radial boundary limit at angle `theta`: values at
    /// `r ∈ {0.9, 0.99, 0.999}` extrapolated linearly in `1 − r` to `r = 1`.
    pub fn radial_limit(&self, theta: f64) -> Result<Complex64> {
        let radii = [0.9, 0.99, 0.999];
        let mut xs = [0.0; 3];
        let mut ys = [ZERO; 3];
        for (i, r) in radii.iter().enumerate() {
            xs[i] = 1.0 - r;
            ys[i] = self.value(Complex64::from_polar(*r, theta))?;
        }
        let xm = xs.iter().sum::<f64>() / 3.0;
        let ym = ys.iter().sum::<Complex64>() / 3.0;
        let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
        let sxy: Complex64 = xs.iter().zip(&ys).map(|(x, y)| (y - ym) * (x - xm)).sum();
        let slope = sxy / sxx;
        Ok(ym - slope * xm)
    }
}

/// `(f_z, f_z̄)` of the solution at `z`.
pub fn solution_jacobian(field: &SolutionField, z: Complex64) -> Result<JacobianData> {
    field.jacobian(z)
}

impl Field for SolutionField {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        SolutionField::value(self, z)
    }
}

impl Differentiable for SolutionField {
    fn wirtinger(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let j = self.jacobian(z)?;
        Ok((j.fz, j.fzbar))
    }

    /// From `Δ_α f = g`: `f_{zz̄} = (1 − |z|²)^α g − α z̄ f_z̄ / (1 − |z|²)`.
    fn laplacian(&self, z: Complex64) -> Result<Complex64> {
        let j = self.jacobian(z)?;
        let q = 1.0 - z.norm_sqr();
        let a = self.alpha.get();
        let fzz = self.source.eval(z) * q.powf(a) - z.conj() * j.fzbar * (a / q);
        Ok(fzz * 4.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn al(a: f64) -> Alpha {
        Alpha::new(a).unwrap()
    }

    #[test]
    fn fourier_boundary_evaluates_and_bounds() {
        let b = BoundaryData::fourier([(1, c(0.5, 0.0)), (-2, c(0.0, 0.25))]);
        let t = 0.3;
        let expect = Complex64::from_polar(0.5, t) + c(0.0, 0.25) * Complex64::from_polar(1.0, -2.0 * t);
        assert!((b.evaluate(t) - expect).norm() < 1e-15);
        assert!(b.sup_norm() <= 0.75 + 1e-12);
        assert!(b.sup_norm() >= 0.75 - 1e-9);
    }

    #[test]
    fn sampled_boundary_interpolates_nodes_and_trig() {
        let n = 64;
        let vals: Vec<_> = (0..n)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
            .collect();
        let b = BoundaryData::samples(vals.clone(), 3).unwrap();
        assert!((b.evaluate(2.0 * PI * 5.0 / 64.0) - vals[5]).norm() < 1e-14);
        let t = 1.234;
        assert!((b.evaluate(t) - Complex64::from_polar(1.0, t)).norm() < 1e-5);
        assert!(BoundaryData::samples(vec![], 1).is_err());
        assert!(BoundaryData::samples(vec![c(1.0, 0.0)], 3).is_err());
    }

    #[test]
    fn shifted_removes_mean() {
        let b = BoundaryData::fourier([(0, c(0.2, 0.1)), (1, c(1.0, 0.0))]).shifted(c(0.2, 0.1));
        assert!(b.fourier_coefficients().unwrap().get(&0).is_none());
    }

    #[test]
    fn source_sup_norms() {
        assert_eq!(SourceField::constant(c(-2.0, 0.0)).sup_norm(), 2.0);
        assert!(SourceField::constant(c(0.0, 0.0)).is_zero());
        let m = SourceField::monomials(vec![(1, 0, c(1.0, 0.0)), (0, 1, c(1.0, 0.0))]);
        // 2 Re z has sup 2 on the closed disk
        assert!(m.sup_norm() >= 2.0 - 1e-12 && m.sup_norm() <= 2.0 + 1e-12);
        let f: SourceFn = Arc::new(|w: Complex64| w * w);
        let s = SourceField::custom(f, None);
        assert!((s.sup_norm() - 1.05).abs() < 1e-12);
    }

    #[test]
    fn poisson_integral_constants_and_monomial() {
        let one = BoundaryData::constant(c(1.0, 0.0));
        for a in [0.0, 0.5, 2.5] {
            let v = poisson_integral(&one, c(0.5, 0.0), al(a), 512).unwrap();
            assert!((v - 1.0).norm() < 1e-13, "a={a} v={v}");
        }
        let e1 = BoundaryData::fourier([(1, c(1.0, 0.0))]);
        let v = poisson_integral(&e1, c(0.0, 0.0), al(0.5), 256).unwrap();
        assert!(v.norm() < 1e-15);
        let v = poisson_integral(&e1, c(0.3, 0.0), al(0.5), 256).unwrap();
        assert!((v - 0.3).norm() < 1e-13, "{v}");
        assert!(poisson_integral(&e1, c(1.0, 0.0), al(0.5), 256).is_err());
    }

    #[test]
    fn green_potential_zero_and_sharp_case() {
        let a0 = al(0.0);
        assert_eq!(green_potential(&SourceField::zero(), c(0.3, 0.2), a0).unwrap(), ZERO);
        let g = SourceField::constant(c(-1.0, 0.0));
        for z in [c(0.0, 0.0), c(0.5, 0.0), c(-0.3, 0.6), c(0.0, 0.9)] {
            let v = green_potential(&g, z, a0).unwrap();
            assert!((v - (1.0 - z.norm_sqr())).norm() < 1e-12, "z={z} v={v}");
        }
    }

    #[test]
    fn green_potential_bound() {
        let g = SourceField::constant(c(1.0, 0.0));
        let z = c(0.7, 0.0);
        let v = green_potential(&g, z, al(1.0)).unwrap();
        assert!(v.norm() <= 2.0 * 0.51f64.powi(2));
    }

    #[test]
    fn singular_source_rejected() {
        let g = SourceField::constant(c(1.0, 0.0)).with_singularity(c(0.2, 0.0));
        assert_eq!(green_potential(&g, c(0.0, 0.0), al(0.0)), Err(Error::SingularIntegrand));
        assert!(solve(&BoundaryData::zero(), &g, al(0.0)).is_err());
    }

    #[test]
    fn solve_examples() {
        let f = solve(&BoundaryData::zero(), &SourceField::constant(c(-3.0, 0.0)), al(0.0)).unwrap();
        let z = c(0.2, -0.4);
        assert!((f.value(z).unwrap() - 3.0 * (1.0 - z.norm_sqr())).norm() < 1e-11);

        let f = solve(&BoundaryData::constant(c(1.0, 0.0)), &SourceField::zero(), al(1.3)).unwrap();
        assert!((f.value(z).unwrap() - 1.0).norm() < 1e-12);
        let j = f.jacobian(z).unwrap();
        assert!(j.op_norm < 1e-12);

        let cos = BoundaryData::fourier([(1, c(0.5, 0.0)), (-1, c(0.5, 0.0))]);
        let f = solve(&cos, &SourceField::zero(), al(0.0)).unwrap();
        assert!((f.value(z).unwrap() - z.re).norm() < 1e-13);
    }

    #[test]
    fn jacobian_of_identity_field() {
        let e1 = BoundaryData::fourier([(1, c(1.0, 0.0))]);
        let f = solve(&e1, &SourceField::zero(), al(0.0)).unwrap();
        let j = solution_jacobian(&f, c(0.4, 0.3)).unwrap();
        assert!((j.fz - 1.0).norm() < 1e-12);
        assert!(j.fzbar.norm() < 1e-12);
        assert!(j.op_norm >= j.min_stretch);
    }

    #[test]
    fn radial_limit_recovers_boundary() {
        let b = BoundaryData::fourier([(0, c(0.1, 0.0)), (2, c(0.0, 0.5))]);
        let f = solve(&b, &SourceField::zero(), al(0.5)).unwrap();
        for t in [0.0, 1.0, 4.0] {
            let lim = f.radial_limit(t).unwrap();
            assert!((lim - b.evaluate(t)).norm() < 1e-3, "t={t} lim={lim}");
        }
    }
}
