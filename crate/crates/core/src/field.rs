//! Point-evaluable fields, evaluation grids, and the executor abstraction
//! that lets callers parallelize grid work without this crate depending on
//! a thread pool.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::{Error, Result};

/// A complex-valued function on (a subset of) the unit disk.
pub trait Field: Sync {
    fn value(&self, z: Complex64) -> Result<Complex64>;

    /// A point excluded from the domain, e.g. the origin for fields defined
    /// on the punctured disk.
    fn puncture(&self) -> Option<Complex64> {
        None
    }
}

impl<F> Field for F
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(self(z))
    }
}

/// A field with first Wirtinger derivatives and a Laplacian.
pub trait Differentiable: Field {
    /// Returns `(f_z, f_z̄)`.
    fn wirtinger(&self, z: Complex64) -> Result<(Complex64, Complex64)>;

    /// The Euclidean Laplacian `Δf = 4 f_{z z̄}`. The default uses a
    /// fourth-order finite-difference stencil on [`Field::value`].
    fn laplacian(&self, z: Complex64) -> Result<Complex64> {
        let h = fd_step(z, 1e-3)?;
        let f = |d: Complex64| self.value(z + d);
        let c = f(Complex64::new(0.0, 0.0))?;
        let mut lap = Complex64::new(0.0, 0.0);
        for dir in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
            let p1 = f(dir * h)?;
            let m1 = f(-dir * h)?;
            let p2 = f(dir * (2.0 * h))?;
            let m2 = f(-dir * (2.0 * h))?;
            lap += (-p2 + p1 * 16.0 - c * 30.0 + m1 * 16.0 - m2) / (12.0 * h * h);
        }
        Ok(lap)
    }
}

/// Step for a stencil of half-width `2h` centered at `z` that stays inside
/// the disk.
pub(crate) fn fd_step(z: Complex64, base: f64) -> Result<f64> {
    let r = z.norm();
    if r >= 1.0 {
        return Err(Error::Stencil { radius: r });
    }
    Ok(base.min((1.0 - r) / 4.0))
}

/// Evaluates closures over point sets. Implementations must return results
/// in input order so that reductions are deterministic.
pub trait Executor: Sync {
    fn map_points<T, F>(&self, points: &[Complex64], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Complex64) -> T + Sync + Send;
}

/// Runs everything on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_points<T, F>(&self, points: &[Complex64], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Complex64) -> T + Sync + Send,
    {
        points.iter().map(|&z| f(z)).collect()
    }
}

/// A set of evaluation points confined to `|z| <= r_max < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grid {
    /// The origin plus `radial × angular` points on circles of radius
    /// `r_max·i/radial`, `i = 1..=radial`.
    Polar { radial: usize, angular: usize, r_max: f64 },
    /// Lattice points `(i·step, j·step)` with modulus at most `r_max`.
    Cartesian { step: f64, r_max: f64 },
}

impl Grid {
    pub fn polar(radial: usize, angular: usize, r_max: f64) -> Result<Self> {
        let g = Grid::Polar { radial, angular, r_max };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let r_max = match *self {
            Grid::Polar { radial, angular, r_max } => {
                if radial == 0 || angular == 0 {
                    return Err(Error::InvalidParameter {
                        name: "grid size",
                        value: (radial.min(angular)) as f64,
                    });
                }
                r_max
            }
            Grid::Cartesian { step, r_max } => {
                if !(step > 0.0) {
                    return Err(Error::InvalidParameter { name: "grid step", value: step });
                }
                r_max
            }
        };
        if !(r_max > 0.0 && r_max < 1.0) {
            return Err(Error::InvalidParameter { name: "r_max", value: r_max });
        }
        Ok(())
    }

    pub fn r_max(&self) -> f64 {
        match *self {
            Grid::Polar { r_max, .. } | Grid::Cartesian { r_max, .. } => r_max,
        }
    }

    pub fn points(&self) -> Vec<Complex64> {
        match *self {
            Grid::Polar { radial, angular, r_max } => {
                let mut pts = Vec::with_capacity(1 + radial * angular);
                pts.push(Complex64::new(0.0, 0.0));
                for i in 1..=radial {
                    let r = r_max * i as f64 / radial as f64;
                    for j in 0..angular {
                        pts.push(Complex64::from_polar(r, 2.0 * PI * j as f64 / angular as f64));
                    }
                }
                pts
            }
            Grid::Cartesian { step, r_max } => {
                let n = (r_max / step).floor() as i64;
                let mut pts = Vec::new();
                for j in -n..=n {
                    for i in -n..=n {
                        let z = Complex64::new(i as f64 * step, j as f64 * step);
                        if z.norm() <= r_max {
                            pts.push(z);
                        }
                    }
                }
                pts
            }
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            Grid::Polar { radial, angular, r_max } => {
                format!("polar {radial}x{angular} r_max={r_max}")
            }
            Grid::Cartesian { step, r_max } => format!("cartesian step={step} r_max={r_max}"),
        }
    }
}
