//! Pointwise kernels of the α-harmonic Dirichlet problem on the unit disk.
//!
//! * `h(s) = ∫₀^s t^α/(1 − t) dt`
//! * `φ(z, w) = (1 − |z|²)(1 − |w|²)/|1 − z w̄|²`
//! * `P(z) = (1 − |z|²)/|1 − z|²`
//! * `P_α(z) = (1 − |z|²)^{α+1} / ((1 − z)(1 − z̄)^{α+1})`
//! * `G_α(z, w) = −(1 − z w̄)^α h(φ(z, w))`
//!
//! Complex powers use the principal branch; every base raised to a
//! non-integer power here has positive real part on the disk.

use num_complex::Complex64;
use num_traits::Float;

use crate::quadrature::GaussLegendre;
use crate::{open_disk, Alpha, Error, Result};

/// Default absolute accuracy for [`h_alpha`].
pub const H_TOL: f64 = 1e-15;

/// Where `h` switches from its power series to quadrature.
const H_SERIES_LIMIT: f64 = 0.95;
/// Split point of the quadrature path; the series is used on `[0, H_SPLIT]`.
const H_SPLIT: f64 = 0.5;
const H_MAX_TERMS: usize = 1_000_000;

/// A kernel value together with a certified modulus bound, when one is known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    pub abs_bound: Option<f64>,
}

impl KernelValue {
    pub fn within_bound(&self, tol: f64) -> bool {
        self.abs_bound.map_or(true, |b| self.value.norm() <= b + tol)
    }
}

/// `h(s) = Σ_{n≥0} s^{α+1+n}/(α+1+n)` for `0 ≤ s < 1`, to absolute accuracy `tol`.
pub fn h_alpha(s: f64, alpha: Alpha, tol: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&s) {
        return Err(Error::Domain { what: "h requires 0 <= s < 1", value: s });
    }
    h_alpha_complement(s, 1.0 - s, alpha, tol)
}

/// Same as [`h_alpha`] with `1 − s` supplied separately, so that callers who
/// know `1 − s` exactly (e.g. `|ζ|²` for `s = φ`) do not lose it to
/// cancellation near `s = 1`.
pub fn h_alpha_complement(s: f64, one_minus_s: f64, alpha: Alpha, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter { name: "tol", value: tol });
    }
    if !(one_minus_s > 0.0) || s < 0.0 {
        return Err(Error::Domain { what: "h requires 0 <= s < 1", value: s });
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    if s <= H_SERIES_LIMIT {
        return h_series(s, one_minus_s, alpha.get(), tol);
    }
    // h(s) = h(½) + log(½/(1 − s)) + ∫_{1−s}^{½} expm1(α log(1 − u))/u du,
    // the last integrand being analytic on [0, ½].
    let a = alpha.get();
    let head = h_series(H_SPLIT, 1.0 - H_SPLIT, a, 0.25 * tol)?;
    let log_part = H_SPLIT.ln() - one_minus_s.ln();
    let smooth = if a == 0.0 {
        0.0
    } else {
        let g = |u: f64| {
            if u == 0.0 {
                -a
            } else {
                (a * (-u).ln_1p()).exp_m1() / u
            }
        };
        GaussLegendre::new(16).integrate_adaptive(one_minus_s, H_SPLIT, 0.25 * tol, &g)?
    };
    Ok(head + log_part + smooth)
}

fn h_series(s: f64, one_minus_s: f64, a: f64, tol: f64) -> Result<f64> {
    // term_n = s^{a+1+n}/(a+1+n); tail after term_n is below term_n·s/(1 − s).
    let mut pow = s.powf(a + 1.0);
    let mut sum = 0.0;
    for n in 0..H_MAX_TERMS {
        let term = pow / (a + 1.0 + n as f64);
        sum += term;
        if term < tol * one_minus_s {
            return Ok(sum);
        }
        pow *= s;
    }
    Err(Error::NonConvergence { what: "h series", iterations: H_MAX_TERMS })
}

/// Lemma-type bound `h(s) ≤ s^α log(1/(1 − s))`, valid for α ≥ 0.
pub fn h_alpha_bound(s: f64, alpha: Alpha) -> f64 {
    s.powf(alpha.get()) * -(-s).ln_1p()
}

/// `φ(z, w) = (1 − |z|²)(1 − |w|²)/|1 − z w̄|²`, in `(0, 1]` on the open disk.
pub fn phi(z: Complex64, w: Complex64) -> Result<f64> {
    let z2 = open_disk(z, "phi requires |z| < 1")?;
    let w2 = open_disk(w, "phi requires |w| < 1")?;
    Ok((1.0 - z2) * (1.0 - w2) / (1.0 - z * w.conj()).norm_sqr())
}

/// `1 − φ(z, w) = |z − w|²/|1 − z̄ w|²`, computed without cancellation.
pub fn phi_complement(z: Complex64, w: Complex64) -> Result<f64> {
    open_disk(z, "phi requires |z| < 1")?;
    open_disk(w, "phi requires |w| < 1")?;
    Ok((z - w).norm_sqr() / (1.0 - z.conj() * w).norm_sqr())
}

/// Classical Poisson kernel `(1 − |z|²)/|1 − z|²`.
pub fn poisson_kernel(z: Complex64) -> Result<f64> {
    let z2 = open_disk(z, "Poisson kernel requires |z| < 1")?;
    Ok((1.0 - z2) / (1.0 - z).norm_sqr())
}

/// The α-harmonic Poisson kernel.
pub fn poisson_kernel_alpha(z: Complex64, alpha: Alpha) -> Result<Complex64> {
    let z2 = open_disk(z, "P_alpha requires |z| < 1")?;
    Ok(poisson_alpha_unchecked(z, z2, alpha.get()))
}

#[inline]
pub(crate) fn poisson_alpha_unchecked(z: Complex64, z2: f64, a: f64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let w = 1.0 - z2;
    let b = one - z.conj();
    // (1-|z|²)^{a+1} / ((1-z)(1-z̄)^{a+1}) = P(z) · ((1-|z|²)/(1-z̄))^a
    let p = w / (one - z).norm_sqr();
    let ratio = if a == 0.0 { one } else { (Complex64::new(w, 0.0) / b).powf(a) };
    ratio * p
}

/// `∂/∂z P_α(z e^{−iθ})`.
pub fn poisson_kernel_alpha_dz(z: Complex64, theta: f64, alpha: Alpha) -> Result<Complex64> {
    let z2 = open_disk(z, "P_alpha requires |z| < 1")?;
    let e = Complex64::from_polar(1.0, -theta);
    Ok(poisson_alpha_dz_unchecked(z, z2, e, alpha.get()))
}

/// `∂/∂z̄ P_α(z e^{−iθ})`.
pub fn poisson_kernel_alpha_dzbar(z: Complex64, theta: f64, alpha: Alpha) -> Result<Complex64> {
    let z2 = open_disk(z, "P_alpha requires |z| < 1")?;
    let e = Complex64::from_polar(1.0, -theta);
    Ok(poisson_alpha_dzbar_unchecked(z, z2, e, alpha.get()))
}

/// `e = e^{−iθ}`.
#[inline]
pub(crate) fn poisson_alpha_dz_unchecked(z: Complex64, z2: f64, e: Complex64, a: f64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let w = 1.0 - z2;
    let left = one - z * e;
    let right = one - z.conj() * e.conj();
    let num = (e * w - z.conj() * left * (a + 1.0)) * w.powf(a);
    num / (left * left * cpow(right, a + 1.0))
}

#[inline]
pub(crate) fn poisson_alpha_dzbar_unchecked(
    z: Complex64,
    z2: f64,
    e: Complex64,
    a: f64,
) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let w = 1.0 - z2;
    let right = one - z.conj() * e.conj();
    e.conj() * ((a + 1.0) * w.powf(a)) / cpow(right, a + 2.0)
}

#[inline]
pub(crate) fn cpow(b: Complex64, p: f64) -> Complex64 {
    if p == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if p == 1.0 {
        b
    } else if p == 2.0 {
        b * b
    } else {
        b.powf(p)
    }
}

fn distinct_points(z: Complex64, w: Complex64) -> Result<()> {
    open_disk(z, "Green function requires |z| < 1")?;
    open_disk(w, "Green function requires |w| < 1")?;
    if z == w {
        return Err(Error::Coincidence);
    }
    Ok(())
}

/// The α-harmonic Green function `G_α(z, w) = −(1 − z w̄)^α h(φ(z, w))`.
pub fn green_alpha(z: Complex64, w: Complex64, alpha: Alpha) -> Result<Complex64> {
    distinct_points(z, w)?;
    let s = phi(z, w)?;
    let hs = h_alpha_complement(s, phi_complement(z, w)?, alpha, H_TOL)?;
    Ok(-cpow(1.0 - z * w.conj(), alpha.get()) * hs)
}

/// `G_α(z, w)` with the bound `2^α (1 − |z|²)^α log|(1 − z̄w)/(z − w)|²`
/// attached when α ≥ 0.
pub fn green_alpha_certified(z: Complex64, w: Complex64, alpha: Alpha) -> Result<KernelValue> {
    let value = green_alpha(z, w, alpha)?;
    let abs_bound = (alpha.get() >= 0.0).then(|| green_alpha_bound(z, w, alpha));
    Ok(KernelValue { value, abs_bound })
}

/// `2^α (1 − |z|²)^α log|(1 − z̄ w)/(z − w)|²`.
pub fn green_alpha_bound(z: Complex64, w: Complex64, alpha: Alpha) -> f64 {
    let a = alpha.get();
    let log = ((1.0 - z.conj() * w).norm_sqr() / (z - w).norm_sqr()).ln();
    2.0.powf(a) * (1.0 - z.norm_sqr()).powf(a) * log
}

/// `∂G_α/∂z` away from the diagonal:
/// `α w̄ (1 − z w̄)^{α−1} h(φ) + (1 − |z|²)^α (1 − |w|²)^{α+1} / ((1 − z̄ w)^α (1 − z w̄)(z − w))`.
pub fn green_alpha_dz(z: Complex64, w: Complex64, alpha: Alpha) -> Result<Complex64> {
    distinct_points(z, w)?;
    let a = alpha.get();
    let one = Complex64::new(1.0, 0.0);
    let zw = one - z * w.conj();
    let zbw = zw.conj();
    let first = if a == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        let s = phi(z, w)?;
        let hs = h_alpha_complement(s, phi_complement(z, w)?, alpha, H_TOL)?;
        w.conj() * a * cpow(zw, a - 1.0) * hs
    };
    let wz = (1.0 - z.norm_sqr()).powf(a) * (1.0 - w.norm_sqr()).powf(a + 1.0);
    let second = wz / (cpow(zbw, a) * zw * (z - w));
    Ok(first + second)
}

/// `∂G_α/∂z̄ = (1 − |z|²)^α (1 − |w|²)^{α+1} / ((1 − z̄ w)^{α+1} (z̄ − w̄))`.
pub fn green_alpha_dzbar(z: Complex64, w: Complex64, alpha: Alpha) -> Result<Complex64> {
    distinct_points(z, w)?;
    let a = alpha.get();
    let zbw = 1.0 - z.conj() * w;
    let wz = (1.0 - z.norm_sqr()).powf(a) * (1.0 - w.norm_sqr()).powf(a + 1.0);
    Ok(wz / (cpow(zbw, a + 1.0) * (z - w).conj()))
}
