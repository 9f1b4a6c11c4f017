//! Seeded random inputs for the randomized verification suites.

use std::f64::consts::{PI, TAU};

use alphakit_core::series::{AlphaHarmonicSeries, CoefficientSequence};
use alphakit_core::solver::{BoundaryData, SourceField};
use alphakit_core::{Alpha, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Weight exponents covered by the randomized Schwarz-type suites.
pub const SUITE_ALPHAS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
/// Degree of the random boundary trigonometric polynomials.
pub const BOUNDARY_DEGREE: i64 = 3;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of modulus at most `r_max`.
pub fn point_in_disk<R: Rng>(rng: &mut R, r_max: f64) -> Complex64 {
    let r = r_max * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..TAU))
}

/// Coefficients on `lo..=hi` drawn from the unit square and scaled to
/// `Σ|c_k| = 1`.
pub fn unit_l1_coefficients<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> Vec<(i64, Complex64)> {
    let mut v: Vec<(i64, Complex64)> = (lo..=hi)
        .map(|k| (k, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        .collect();
    let l1: f64 = v.iter().map(|t| t.1.norm()).sum();
    for t in &mut v {
        t.1 /= l1;
    }
    v
}

/// Random trigonometric polynomial of degree [`BOUNDARY_DEGREE`] with
/// `Σ|c_k| = 1`, hence `‖f*‖_∞ ≤ 1`.
pub fn random_boundary<R: Rng>(rng: &mut R) -> BoundaryData {
    BoundaryData::fourier(unit_l1_coefficients(rng, -BOUNDARY_DEGREE, BOUNDARY_DEGREE))
}

/// Like [`random_boundary`] without the constant mode, so that the harmonic
/// extension vanishes at the origin.
pub fn random_centered_self_map<R: Rng>(rng: &mut R) -> BoundaryData {
    let mut c = unit_l1_coefficients(rng, -BOUNDARY_DEGREE, BOUNDARY_DEGREE);
    c.retain(|t| t.0 != 0);
    let l1: f64 = c.iter().map(|t| t.1.norm()).sum();
    BoundaryData::fourier(c.into_iter().map(|(k, v)| (k, v / l1)))
}

/// The three sources of the randomized suites: zero, a constant and a
/// non-harmonic polynomial.
pub fn suite_sources() -> [SourceField; 3] {
    [
        SourceField::zero(),
        SourceField::constant(Complex64::new(0.7, -0.2)),
        SourceField::monomials(vec![(1, 1, Complex64::new(1.0, 0.0)), (0, 1, Complex64::new(0.0, 0.5))]),
    ]
}

/// One case of a randomized Schwarz-type suite.
#[derive(Debug, Clone)]
pub struct BoundCase {
    pub alpha: Alpha,
    pub boundary: BoundaryData,
    pub source: SourceField,
    pub source_index: usize,
}

/// `n × 4 × 3` cases: for each draw, every α in [`SUITE_ALPHAS`] and every
/// source in [`suite_sources`], each with a fresh boundary polynomial.
pub fn bound_cases(n: usize, seed: u64) -> Vec<BoundCase> {
    let mut r = rng(seed);
    let sources = suite_sources();
    let mut out = Vec::with_capacity(n * 12);
    for _ in 0..n {
        for a in SUITE_ALPHAS {
            for (i, g) in sources.iter().enumerate() {
                out.push(BoundCase {
                    alpha: Alpha::new(a).expect("suite alphas are valid"),
                    boundary: random_boundary(&mut r),
                    source: g.clone(),
                    source_index: i,
                });
            }
        }
    }
    out
}

/// Random α-harmonic series with indices `−terms..=terms` and `Σ|c_k| = 1`.
pub fn random_series<R: Rng>(rng: &mut R, alpha: Alpha, terms: i64) -> AlphaHarmonicSeries {
    AlphaHarmonicSeries::new(alpha, CoefficientSequence::new(unit_l1_coefficients(rng, -terms, terms)))
}

/// Fejér mean of order `n` of the square wave `sign(cos θ)`: real, with
/// values in `[−1, 1]` and mean zero.
pub fn square_wave(n: i64) -> BoundaryData {
    let mut coeffs = Vec::new();
    for k in (1..=n).step_by(2) {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let ck = 2.0 / (PI * k as f64) * sign * (1.0 - k as f64 / (n + 1) as f64);
        coeffs.push((k, Complex64::new(ck, 0.0)));
        coeffs.push((-k, Complex64::new(ck, 0.0)));
    }
    BoundaryData::fourier(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_a_seed() {
        let a = bound_cases(2, 7);
        let b = bound_cases(2, 7);
        assert_eq!(a.len(), 24);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.boundary, y.boundary);
            assert_eq!(x.alpha, y.alpha);
        }
        assert_ne!(bound_cases(1, 8)[0].boundary, a[0].boundary);
    }

    #[test]
    fn random_data_is_bounded_by_one() {
        let mut r = rng(3);
        for _ in 0..20 {
            assert!(random_boundary(&mut r).sup_norm() <= 1.0 + 1e-12);
            let c = random_centered_self_map(&mut r);
            assert!(c.sup_norm() <= 1.0 + 1e-12);
            assert!(c.fourier_coefficients().unwrap().get(&0).is_none());
        }
        let s = square_wave(31);
        assert!(s.sup_norm() <= 1.0);
    }
}
