//! Homogeneous expansion of α-harmonic functions,
//!
//! ```text
//! f(z) = Σ_{k≥0} c_k z^k + Σ_{k≥1} c_{−k} P_{α,k}(|z|²) z̄^k,
//! P_{α,k}(x) = ∫₀¹ t^{k−1} (1 − t x)^α dt,
//! ```
//!
//! the Example 1 family on the punctured disk, and precomposition with
//! polynomial maps.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::field::{Differentiable, Field};
use crate::quadrature::GaussLegendre;
use crate::{open_disk, Alpha, Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Where `P_{α,k}` switches from the binomial series to quadrature.
pub const P_SERIES_LIMIT: f64 = 0.9;
const P_MAX_TERMS: usize = 100_000;
const P_PANEL_ORDER: usize = 32;
const EXAMPLE1_TOL: f64 = 1e-14;
const EXAMPLE1_MAX_TERMS: usize = 10_000_000;
/// Below this `|w|²` Example 1 is summed in powers of `|w|²` instead of `1 − |w|²`.
const EXAMPLE1_SWITCH: f64 = 0.5;

fn check_p_args(x: f64, k: u32) -> Result<()> {
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::Domain { what: "P_alpha_k requires -1 < x < 1", value: x });
    }
    if k < 1 {
        return Err(Error::InvalidParameter { name: "k", value: k as f64 });
    }
    Ok(())
}

/// `(P_{α,k}(x), P'_{α,k}(x))` from the binomial series
/// `Σ_j binom(α, j) (−x)^j / (k + j)` and its termwise derivative.
fn p_series(x: f64, k: u32, a: f64) -> Result<(f64, f64)> {
    let k = k as f64;
    let mut binom = 1.0;
    let mut pow = 1.0; // (−x)^j
    let mut p = 1.0 / k;
    let mut dp = 0.0;
    let ratio = x.abs() / (1.0 - x.abs());
    for j in 0..P_MAX_TERMS {
        let jf = j as f64;
        // advance to index j + 1
        binom *= (a - jf) / (jf + 1.0);
        let dpow = -pow * (jf + 1.0); // d/dx (−x)^{j+1}
        pow *= -x;
        if binom == 0.0 {
            return Ok((p, dp));
        }
        let t = binom * pow / (k + jf + 1.0);
        let dt = binom * dpow / (k + jf + 1.0);
        p += t;
        dp += dt;
        // past j ≈ α the term ratios are bounded by |x|, so the tails are
        // geometric
        if jf + 1.0 > a + 1.0
            && t.abs() * ratio <= f64::EPSILON * 0.01 * p.abs()
            && dt.abs() * ratio * (jf + 2.0) / (jf + 1.0) <= f64::EPSILON * 0.01 * dp.abs().max(p.abs())
        {
            return Ok((p, dp));
        }
    }
    Err(Error::NonConvergence { what: "P_alpha_k series", iterations: P_MAX_TERMS })
}

/// Panels of `[0, 1]` that stay a panel-width away from the singular point
/// `t = 1/x` of `(1 − t x)^α`.
fn p_panels(x: f64) -> Vec<(f64, f64)> {
    if x <= 0.0 {
        return vec![(0.0, 0.5), (0.5, 1.0)];
    }
    let d = (1.0 - x) / x;
    let mut panels = Vec::new();
    let mut a = 0.0;
    let mut width = 0.5;
    while width > d && width > 1e-12 {
        panels.push((a, a + width));
        a += width;
        width *= 0.5;
    }
    panels.push((a, 1.0));
    panels
}

fn p_quadrature(x: f64, k: u32, a: f64) -> (f64, f64) {
    let gl = GaussLegendre::new(P_PANEL_ORDER);
    let km1 = (k - 1) as i32;
    let (mut p, mut dp) = (0.0, 0.0);
    for (lo, hi) in p_panels(x) {
        p += gl.integrate(lo, hi, |t| t.powi(km1) * (1.0 - t * x).powf(a));
        if a != 0.0 {
            dp += gl.integrate(lo, hi, |t| t.powi(km1 + 1) * (1.0 - t * x).powf(a - 1.0));
        }
    }
    (p, -a * dp)
}

/// `P_{α,k}(x) = ∫₀¹ t^{k−1}(1 − t x)^α dt` for `−1 < x < 1`, `k ≥ 1`.
pub fn p_alpha_k(x: f64, k: u32, alpha: Alpha) -> Result<f64> {
    p_alpha_k_with_derivative(x, k, alpha).map(|v| v.0)
}

/// `P'_{α,k}(x) = −α ∫₀¹ t^k (1 − t x)^{α−1} dt`.
pub fn p_alpha_k_derivative(x: f64, k: u32, alpha: Alpha) -> Result<f64> {
    p_alpha_k_with_derivative(x, k, alpha).map(|v| v.1)
}

/// `(P_{α,k}(x), P'_{α,k}(x))`.
pub fn p_alpha_k_with_derivative(x: f64, k: u32, alpha: Alpha) -> Result<(f64, f64)> {
    check_p_args(x, k)?;
    let a = alpha.get();
    if a == 0.0 {
        return Ok((1.0 / k as f64, 0.0));
    }
    if x.abs() <= P_SERIES_LIMIT {
        p_series(x, k, a)
    } else {
        Ok(p_quadrature(x, k, a))
    }
}

/// `|x P'_{α,k}(x) + k P_{α,k}(x) − (1 − x)^α|`.
pub fn p_alpha_k_recurrence_residual(x: f64, k: u32, alpha: Alpha) -> Result<f64> {
    let (p, dp) = p_alpha_k_with_derivative(x, k, alpha)?;
    Ok((x * dp + k as f64 * p - (1.0 - x).powf(alpha.get())).abs())
}

/// Finitely supported coefficients `{c_k}`, `k ∈ ℤ`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoefficientSequence {
    coeffs: BTreeMap<i64, Complex64>,
}

impl CoefficientSequence {
    /// Zero coefficients are dropped.
    pub fn new<I>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (k, c) in coeffs {
            *map.entry(k).or_insert(ZERO) += c;
        }
        map.retain(|_, c| *c != ZERO);
        CoefficientSequence { coeffs: map }
    }

    pub fn get(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_index(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_index(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Whether some `c_{−k}`, `k ≥ 1`, is nonzero.
    pub fn has_antianalytic(&self) -> bool {
        self.min_index().map_or(false, |k| k < 0)
    }

    /// `Σ |c_k|`.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }
}

/// An α-harmonic function given by its homogeneous expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaHarmonicSeries {
    alpha: Alpha,
    coeffs: CoefficientSequence,
}

impl AlphaHarmonicSeries {
    pub fn new(alpha: Alpha, coeffs: CoefficientSequence) -> Self {
        AlphaHarmonicSeries { alpha, coeffs }
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn coefficients(&self) -> &CoefficientSequence {
        &self.coeffs
    }

    /// `sup_𝔻 |f| ≤ Σ_{k≥0} |c_k| + Σ_{k≥1} |c_{−k}| max(P_{α,k}(0), P_{α,k}(1⁻))`.
    pub fn sup_bound(&self) -> f64 {
        let a = self.alpha.get();
        self.coeffs
            .iter()
            .map(|(k, c)| {
                if k >= 0 {
                    c.norm()
                } else {
                    let kk = (-k) as f64;
                    // P is monotone in x; at x → 1 it equals B(k, α + 1)
                    let top = beta_int(kk, a + 1.0);
                    c.norm() * top.max(1.0 / kk)
                }
            })
            .sum()
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let x = open_disk(z, "series requires |z| < 1")?;
        let mut acc = ZERO;
        for (k, c) in self.coeffs.iter() {
            if k >= 0 {
                acc += c * z.powi(k as i32);
            } else {
                let kk = (-k) as u32;
                acc += c * p_alpha_k(x, kk, self.alpha)? * z.conj().powu(kk);
            }
        }
        Ok(acc)
    }

    /// `f_z = Σ k c_k z^{k−1} + Σ c_{−k} P'_{α,k}(|z|²) z̄^{k+1}`.
    pub fn dz(&self, z: Complex64) -> Result<Complex64> {
        let x = open_disk(z, "series requires |z| < 1")?;
        let mut acc = ZERO;
        for (k, c) in self.coeffs.iter() {
            if k > 0 {
                acc += c * k as f64 * z.powi(k as i32 - 1);
            } else if k < 0 {
                let kk = (-k) as u32;
                acc += c * p_alpha_k_derivative(x, kk, self.alpha)? * z.conj().powu(kk + 1);
            }
        }
        Ok(acc)
    }

    /// `f_z̄ = (1 − |z|²)^α Σ c_{−k} z̄^{k−1}`.
    pub fn dzbar(&self, z: Complex64) -> Result<Complex64> {
        let x = open_disk(z, "series requires |z| < 1")?;
        let zb = z.conj();
        let s: Complex64 = self
            .coeffs
            .iter()
            .filter(|(k, _)| *k < 0)
            .map(|(k, c)| c * zb.powu((-k - 1) as u32))
            .sum();
        Ok(s * (1.0 - x).powf(self.alpha.get()))
    }
}

/// `B(a, b) = ∫₀¹ t^{a−1}(1 − t)^{b−1} dt` for integer `a ≥ 1`, by the
/// product `(a−1)! / (b (b+1) ⋯ (b+a−1))`.
fn beta_int(a: f64, b: f64) -> f64 {
    let mut v = 1.0 / b;
    let mut j = 1.0;
    while j < a {
        v *= j / (b + j);
        j += 1.0;
    }
    v
}

pub fn series_eval(s: &AlphaHarmonicSeries, z: Complex64) -> Result<Complex64> {
    s.eval(z)
}

pub fn series_dzbar(s: &AlphaHarmonicSeries, z: Complex64) -> Result<Complex64> {
    s.dzbar(z)
}

impl Field for AlphaHarmonicSeries {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        self.eval(z)
    }
}

impl Differentiable for AlphaHarmonicSeries {
    fn wirtinger(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        Ok((self.dz(z)?, self.dzbar(z)?))
    }

    /// `Δf = −4α z̄ f_z̄ / (1 − |z|²)`.
    fn laplacian(&self, z: Complex64) -> Result<Complex64> {
        let fzb = self.dzbar(z)?;
        let a = self.alpha.get();
        Ok(-z.conj() * fzb * (4.0 * a / (1.0 - z.norm_sqr())))
    }
}

/// The Example 1 function
///
/// ```text
/// f(z) = (Σ a_n x^n − x^{α+1} Σ b_n x^n) z̄^k,   x = 1 − |z|²,
/// a_n = Γ(n+k)/(Γ(n+1)Γ(k)),   b_n = Γ(n+α+k+1)/(Γ(n+α+2)Γ(k)),
/// ```
///
/// α-harmonic on `𝔻 ∖ {0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example1Function {
    k: u32,
    alpha: Alpha,
    b0: f64,
}

/// `u = A − F` and `du/dx`, where `A = Σ a_n x^n`, `F = x^{α+1} Σ b_n x^n`.
struct Example1Sums {
    u: f64,
    du: f64,
}

impl Example1Function {
    pub fn new(k: u32, alpha: Alpha) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter { name: "k", value: k as f64 });
        }
        let a = alpha.get();
        if a == 0.0 {
            return Err(Error::InvalidParameter { name: "alpha", value: a });
        }
        // b_0 = Γ(α+k+1)/(Γ(α+2)Γ(k)) = Π_{j=1}^{k−1} (α+1+j)/j
        let mut b0 = 1.0;
        for j in 1..k {
            b0 *= (a + 1.0 + j as f64) / j as f64;
        }
        Ok(Example1Function { k, alpha, b0 })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    /// `Γ(α+k+1)/(Γ(α+1)(k−1)!) = Π_{j=1}^{k} (α+j) / (k−1)!`.
    pub fn leading_constant(&self) -> f64 {
        let a = self.alpha.get();
        let mut c = a + 1.0;
        for j in 2..=self.k {
            c *= (a + j as f64) / (j - 1) as f64;
        }
        c
    }

    fn check(&self, z: Complex64) -> Result<f64> {
        let r2 = open_disk(z, "Example 1 requires |z| < 1")?;
        if r2 == 0.0 {
            return Err(Error::SingularPoint { modulus: 0.0 });
        }
        Ok(r2)
    }

    fn sums(&self, x: f64) -> Result<Example1Sums> {
        if 1.0 - x < EXAMPLE1_SWITCH {
            self.near_puncture(1.0 - x)
        } else {
            self.two_series(x)
        }
    }

    fn two_series(&self, x: f64) -> Result<Example1Sums> {
        let a = self.alpha.get();
        let k = self.k as f64;
        let xa = x.powf(a + 1.0);
        let xa_d = if x == 0.0 { 0.0 } else { xa / x };
        let (mut an, mut bn) = (1.0, self.b0);
        let mut xn = 1.0; // x^n
        let mut xn1 = 0.0; // x^{n−1}, zero at n = 0
        let (mut sa, mut sda, mut sf, mut sdf) = (0.0, 0.0, 0.0, 0.0);
        let tail = 1.0 - x;
        for n in 0..EXAMPLE1_MAX_TERMS {
            let nf = n as f64;
            let ta = an * xn;
            let tb = bn * xn;
            sa += ta;
            sda += nf * an * xn1;
            sf += tb * xa;
            sdf += bn * (nf + a + 1.0) * xn * xa_d;
            // coefficients grow polynomially, so once the ratio x (n+k)/(n+1)
            // is below one the remaining sum is at most term · n^k/(1 − x)
            let combined = ta + tb * xa.max(1.0);
            if nf >= k + a.abs() && combined * (nf + 1.0) <= EXAMPLE1_TOL * tail {
                return Ok(Example1Sums { u: sa - sf, du: sda - sdf });
            }
            an *= (nf + k) / (nf + 1.0);
            bn *= (nf + a + k + 1.0) / (nf + a + 2.0);
            xn1 = xn;
            xn *= x;
        }
        Err(Error::NonConvergence { what: "Example 1 series", iterations: EXAMPLE1_MAX_TERMS })
    }

    /// Near the puncture `A` and `F` both grow like `t^{−k}`, `t = |w|²`, and
    /// their difference cancels. There `u = C Σ_j (−1)^j binom(α, j) t^j/(k+j)`
    /// with `C` the leading constant, which solves `k u − t du/dx = C (1 − t)^α`
    /// with the same value at `t = 1`.
    fn near_puncture(&self, t: f64) -> Result<Example1Sums> {
        let a = self.alpha.get();
        let k = self.k as f64;
        let c = self.leading_constant();
        let mut cj = 1.0; // (−1)^j binom(α, j)
        let mut tj = 1.0; // t^j
        let mut tj1 = 0.0; // t^{j−1}, zero at j = 0
        let (mut u, mut du) = (0.0, 0.0);
        for j in 0..EXAMPLE1_MAX_TERMS {
            let jf = j as f64;
            let term = cj * tj / (k + jf);
            u += term;
            du += cj * jf * tj1 / (k + jf);
            if jf > a && (term.abs() * (jf + 1.0) <= EXAMPLE1_TOL * u.abs() || cj == 0.0) {
                return Ok(Example1Sums { u: c * u, du: -c * du });
            }
            cj *= (jf - a) / (jf + 1.0);
            tj1 = tj;
            tj *= t;
        }
        Err(Error::NonConvergence { what: "Example 1 series", iterations: EXAMPLE1_MAX_TERMS })
    }

    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        let r2 = self.check(z)?;
        let s = self.sums(1.0 - r2)?;
        Ok(z.conj().powu(self.k) * s.u)
    }

    /// `(f_z, f_z̄)` from the termwise differentiated series.
    pub fn wirtinger(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let r2 = self.check(z)?;
        let s = self.sums(1.0 - r2)?;
        let zb = z.conj();
        let k = self.k;
        // ∂x/∂z = −z̄, ∂x/∂z̄ = −z
        let fz = -zb.powu(k + 1) * s.du;
        let fzb = zb.powu(k - 1) * (k as f64 * s.u - r2 * s.du);
        Ok((fz, fzb))
    }

    pub fn dzbar(&self, z: Complex64) -> Result<Complex64> {
        self.wirtinger(z).map(|w| w.1)
    }

    /// `∂_z̄ (f∘ψ)` for `ψ(z) = z²` by the chain rule.
    pub fn squared_dzbar(&self, z: Complex64) -> Result<Complex64> {
        let (_, fzb) = self.wirtinger(z * z)?;
        Ok(fzb * (2.0 * z).conj())
    }

    /// The closed form `2 Γ(α+k+1)/(Γ(α+1)(k−1)!) (1 − |z|⁴)^α z̄^{2k−1}` of
    /// `∂_z̄ (f∘ψ)` for `ψ(z) = z²`.
    pub fn squared_dzbar_closed_form(&self, z: Complex64) -> Result<Complex64> {
        let r2 = self.check(z)?;
        let w = 1.0 - r2 * r2;
        Ok(z.conj().powu(2 * self.k - 1) * (2.0 * self.leading_constant() * w.powf(self.alpha.get())))
    }
}

pub fn example1_build(k: u32, alpha: Alpha) -> Result<Example1Function> {
    Example1Function::new(k, alpha)
}

impl Field for Example1Function {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        Example1Function::value(self, z)
    }

    fn puncture(&self) -> Option<Complex64> {
        Some(ZERO)
    }
}

impl Differentiable for Example1Function {
    fn wirtinger(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        Example1Function::wirtinger(self, z)
    }
}

/// A polynomial `ψ(z) = Σ a_j z^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Coefficients in increasing degree; trailing zeros are trimmed.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn identity() -> Self {
        Polynomial::monomial(Complex64::new(1.0, 0.0), 1)
    }

    /// `e^{it} z`.
    pub fn rotation(t: f64) -> Self {
        Polynomial::monomial(Complex64::from_polar(1.0, t), 1)
    }

    /// `a z`.
    pub fn dilation(a: Complex64) -> Self {
        Polynomial::monomial(a, 1)
    }

    /// `z^n`.
    pub fn power(n: usize) -> Self {
        Polynomial::monomial(Complex64::new(1.0, 0.0), n)
    }

    fn monomial(a: Complex64, n: usize) -> Self {
        let mut c = vec![ZERO; n + 1];
        c[n] = a;
        Polynomial::new(c)
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(ZERO, |acc, (j, &c)| acc * z + c * j as f64)
    }

    /// `ψ(z) = e^{it} z` up to `tol` in the coefficients.
    pub fn is_rotation(&self, tol: f64) -> bool {
        self.coeffs.len() == 2
            && self.coeffs[0].norm() <= tol
            && (self.coeffs[1].norm() - 1.0).abs() <= tol
    }

    /// `Σ |a_j|`, a bound for `|ψ|` on the closed disk.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }
}

/// `z ↦ f(ψ(z))`.
#[derive(Debug, Clone)]
pub struct Composed<F> {
    inner: F,
    psi: Polynomial,
}

impl<F: Field> Composed<F> {
    pub fn new(inner: F, psi: Polynomial) -> Self {
        Composed { inner, psi }
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }

    pub fn psi(&self) -> &Polynomial {
        &self.psi
    }

    fn image(&self, z: Complex64) -> Result<Complex64> {
        open_disk(z, "composition requires |z| < 1")?;
        let w = self.psi.eval(z);
        let m = w.norm();
        if !(m < 1.0) {
            return Err(Error::Range { modulus: m });
        }
        Ok(w)
    }
}

/// `f∘ψ` for a series `f`; no α-harmonicity is implied.
pub fn compose(s: &AlphaHarmonicSeries, psi: Polynomial) -> Composed<AlphaHarmonicSeries> {
    Composed::new(s.clone(), psi)
}

impl<F: Field> Field for Composed<F> {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        self.inner.value(self.image(z)?)
    }

    fn puncture(&self) -> Option<Complex64> {
        // only punctures that pull back to the origin are tracked
        match self.inner.puncture() {
            Some(p) if p == self.psi.eval(ZERO) => Some(ZERO),
            _ => None,
        }
    }
}

impl<F: Differentiable> Differentiable for Composed<F> {
    fn wirtinger(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let (fw, fwb) = self.inner.wirtinger(self.image(z)?)?;
        let d = self.psi.derivative(z);
        Ok((fw * d, fwb * d.conj()))
    }

    /// `Δ(f∘ψ) = |ψ'|² (Δf)∘ψ`.
    fn laplacian(&self, z: Complex64) -> Result<Complex64> {
        let lap = self.inner.laplacian(self.image(z)?)?;
        Ok(lap * self.psi.derivative(z).norm_sqr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn al(a: f64) -> Alpha {
        Alpha::new(a).unwrap()
    }

    #[test]
    fn p_alpha_k_trivial_values() {
        for k in [1, 2, 7] {
            assert!((p_alpha_k(0.0, k, al(1.7)).unwrap() - 1.0 / k as f64).abs() < 1e-15);
            assert!((p_alpha_k(0.6, k, al(0.0)).unwrap() - 1.0 / k as f64).abs() < 1e-15);
        }
        assert!(p_alpha_k(1.0, 1, al(1.0)).is_err());
        assert!(p_alpha_k(-1.0, 1, al(1.0)).is_err());
        assert!(p_alpha_k(0.5, 0, al(1.0)).is_err());
    }

    #[test]
    fn p_alpha_1_closed_form_both_methods() {
        for a in [-0.7, 0.5, 1.0, 3.3] {
            for x in [-0.97, -0.5, 0.3, 0.89, 0.91, 0.95, 0.999] {
                let expect = (1.0 - (1.0 - x).powf(a + 1.0)) / ((a + 1.0) * x);
                let got = p_alpha_k(x, 1, al(a)).unwrap();
                assert!((got - expect).abs() < 1e-13, "a={a} x={x} got={got} expect={expect}");
            }
        }
    }

    #[test]
    fn p_alpha_2_polynomial_case() {
        // α = 1: ∫ t (1 − x t) dt = 1/2 − x/3
        assert!((p_alpha_k(0.25, 2, al(1.0)).unwrap() - (0.5 - 0.25 / 3.0)).abs() < 1e-15);
        assert!((p_alpha_k(0.95, 2, al(1.0)).unwrap() - (0.5 - 0.95 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn recurrence_residual_examples() {
        assert!(p_alpha_k_recurrence_residual(0.0, 4, al(2.0)).unwrap() < 1e-15);
        assert!(p_alpha_k_recurrence_residual(0.5, 3, al(1.25)).unwrap() < 1e-10);
        assert!(p_alpha_k_recurrence_residual(-0.8, 7, al(0.5)).unwrap() < 1e-10);
        assert!(p_alpha_k_recurrence_residual(0.94, 50, al(-0.85)).unwrap() < 1e-10);
    }

    #[test]
    fn panels_cover_unit_interval() {
        for x in [-0.95, 0.91, 0.999999] {
            let p = p_panels(x);
            assert_eq!(p[0].0, 0.0);
            assert_eq!(p.last().unwrap().1, 1.0);
            assert!(p.windows(2).all(|w| w[0].1 == w[1].0));
        }
    }

    #[test]
    fn coefficient_sequence_bookkeeping() {
        let s = CoefficientSequence::new([(2, c(1.0, 0.0)), (-3, c(0.0, 1.0)), (5, ZERO)]);
        assert_eq!(s.len(), 2);
        assert_eq!(s.max_index(), Some(2));
        assert_eq!(s.min_index(), Some(-3));
        assert!(s.has_antianalytic());
        assert_eq!(s.get(5), ZERO);
    }

    #[test]
    fn series_examples() {
        let five = AlphaHarmonicSeries::new(al(2.0), CoefficientSequence::new([(0, c(5.0, 0.0))]));
        assert_eq!(five.eval(c(0.3, 0.4)).unwrap(), c(5.0, 0.0));
        let zbar = AlphaHarmonicSeries::new(al(0.0), CoefficientSequence::new([(-1, c(1.0, 0.0))]));
        let z = c(0.3, -0.6);
        assert!((zbar.eval(z).unwrap() - z.conj()).norm() < 1e-15);
        let s = AlphaHarmonicSeries::new(al(1.0), CoefficientSequence::new([(-2, c(1.0, 0.0))]));
        let v = s.eval(c(0.5, 0.0)).unwrap();
        assert!((v.re - (0.5 - 0.25 / 3.0) * 0.25).abs() < 1e-15 && v.im == 0.0);
        assert!(s.eval(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn series_dzbar_examples() {
        let an = AlphaHarmonicSeries::new(al(1.5), CoefficientSequence::new([(1, c(1.0, 0.0))]));
        assert_eq!(an.dzbar(c(0.2, 0.1)).unwrap(), ZERO);
        let s = AlphaHarmonicSeries::new(al(1.5), CoefficientSequence::new([(-1, c(1.0, 0.0))]));
        let v = s.dzbar(c(0.0, 0.3)).unwrap();
        assert!((v - 0.91f64.powf(1.5)).norm() < 1e-15);
    }

    #[test]
    fn example1_rejections_and_puncture() {
        assert!(Example1Function::new(0, al(1.0)).is_err());
        assert!(Example1Function::new(1, al(0.0)).is_err());
        let f = Example1Function::new(1, al(1.0)).unwrap();
        assert_eq!(f.value(ZERO), Err(Error::SingularPoint { modulus: 0.0 }));
        assert!(f.value(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn example1_k1_closed_form() {
        // k = 1 sums to (1 − (1 − |z|²)^{α+1}) / z
        for a in [-0.5, 1.0, 2.5] {
            let f = Example1Function::new(1, al(a)).unwrap();
            for z in [c(0.5, 0.0), c(0.1, -0.2), c(-0.7, 0.6)] {
                let x: f64 = 1.0 - z.norm_sqr();
                let expect = (1.0 - x.powf(a + 1.0)) / z;
                let got = f.value(z).unwrap();
                assert!((got - expect).norm() < 1e-12 * expect.norm().max(1.0), "a={a} z={z}");
                let dzb = f.dzbar(z).unwrap();
                assert!((dzb - (a + 1.0) * x.powf(a)).norm() < 1e-11, "a={a} z={z} {dzb}");
            }
        }
    }

    #[test]
    fn example1_dzbar_near_and_far_from_puncture() {
        // f_z̄ = C (1 − |z|²)^α z̄^{k−1}
        for k in 1..=5u32 {
            for a in [-0.5, 0.5, 1.0, 2.5] {
                let f = Example1Function::new(k, al(a)).unwrap();
                for z in [c(0.01, 0.0), c(0.06, -0.08), c(0.3, 0.4), c(-0.6, 0.5), c(0.0, 0.95)] {
                    let expect = z.conj().powu(k - 1) * (f.leading_constant() * (1.0 - z.norm_sqr()).powf(a));
                    let got = f.dzbar(z).unwrap();
                    assert!((got - expect).norm() <= 1e-11 * expect.norm().max(1e-300), "k={k} a={a} z={z}");
                }
                for x in [0.45, 0.5, 0.55] {
                    let near = f.near_puncture(1.0 - x).unwrap();
                    let far = f.two_series(x).unwrap();
                    assert!((near.u - far.u).abs() <= 1e-12 * near.u.abs(), "k={k} a={a} x={x}");
                    assert!((near.du - far.du).abs() <= 1e-10 * near.du.abs().max(1.0), "k={k} a={a} x={x}");
                }
            }
        }
    }

    #[test]
    fn example1_leading_constant() {
        let f = Example1Function::new(3, al(0.5)).unwrap();
        // Γ(4.5)/(Γ(1.5)·2!) = 3.5·2.5·1.5/2
        assert!((f.leading_constant() - 3.5 * 2.5 * 1.5 / 2.0).abs() < 1e-14);
    }

    #[test]
    fn polynomial_maps() {
        let p = Polynomial::new(vec![c(1.0, 0.0), c(0.0, 2.0), c(3.0, 0.0), ZERO]);
        assert_eq!(p.degree(), Some(2));
        let z = c(0.2, -0.1);
        assert!((p.eval(z) - (1.0 + c(0.0, 2.0) * z + 3.0 * z * z)).norm() < 1e-15);
        assert!((p.derivative(z) - (c(0.0, 2.0) + 6.0 * z)).norm() < 1e-15);
        assert!(Polynomial::rotation(1.1).is_rotation(1e-12));
        assert!(!Polynomial::dilation(c(0.5, 0.0)).is_rotation(1e-12));
        assert!(!Polynomial::power(2).is_rotation(1e-12));
    }

    #[test]
    fn compose_identity_and_range() {
        let s = AlphaHarmonicSeries::new(
            al(1.0),
            CoefficientSequence::new([(1, c(0.3, 0.0)), (-1, c(0.2, 0.1))]),
        );
        let id = compose(&s, Polynomial::identity());
        let z = c(0.3, 0.2);
        assert_eq!(id.value(z).unwrap(), s.eval(z).unwrap());
        let big = compose(&s, Polynomial::dilation(c(2.0, 0.0)));
        assert!(matches!(big.value(c(0.6, 0.0)), Err(Error::Range { .. })));
    }
}
