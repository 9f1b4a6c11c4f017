//! Numerics for the weighted Laplacian
//! `Δ_α f = ∂_z[(1 − |z|²)^{−α} ∂_z̄ f]` on the unit disk.
//!
//! The crate evaluates the α-harmonic Poisson kernel and Green function,
//! solves the Dirichlet problem `Δ_α f = g`, `f = f*` on the circle through
//! its integral representation, evaluates the homogeneous series expansion of
//! α-harmonic functions, and numerically certifies Schwarz, Schwarz–Pick,
//! composition and Bergman-type statements about the solutions.
//!
//! Everything here is `no_std` (with `alloc`). File formats, the CLI and the
//! thread pool live in the `alphakit` crate.
#![no_std]
// `num_traits::Float` supplies float math without std; when another crate in
// the build links std the inherent methods win and the import goes unused.
#![allow(unused_imports)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
mod error;
pub mod field;
pub mod kernels;
pub mod quadrature;
pub mod series;
pub mod solver;

pub use error::{Error, Result};
pub use field::{Differentiable, Executor, Field, Grid, Sequential};
pub use num_complex::Complex64;

/// The weight exponent α of `Δ_α`; always `> −1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > -1.0 {
            Ok(Alpha(alpha))
        } else {
            Err(Error::InvalidParameter { name: "alpha", value: alpha })
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// Rejects α < 0, the range where the disk estimates are stated.
    pub fn require_nonnegative(self) -> Result<Self> {
        if self.0 >= 0.0 {
            Ok(self)
        } else {
            Err(Error::Precondition("alpha must be nonnegative"))
        }
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Alpha::new(value)
    }
}

/// Checks `|z| < 1` and returns `|z|²`.
#[inline]
pub(crate) fn open_disk(z: Complex64, what: &'static str) -> Result<f64> {
    let r2 = z.norm_sqr();
    if r2.is_finite() && r2 < 1.0 {
        Ok(r2)
    } else {
        Err(Error::Domain { what, value: num_traits::Float::sqrt(r2) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_rejects_minus_one_and_below() {
        assert!(Alpha::new(-1.0).is_err());
        assert!(Alpha::new(-3.0).is_err());
        assert!(Alpha::new(f64::NAN).is_err());
        assert_eq!(Alpha::new(-0.5).unwrap().get(), -0.5);
        assert!(Alpha::new(-0.5).unwrap().require_nonnegative().is_err());
    }

    #[test]
    fn open_disk_check() {
        assert!(open_disk(Complex64::new(0.6, 0.79), "z").is_ok());
        assert!(open_disk(Complex64::new(1.0, 0.0), "z").is_err());
    }
}
