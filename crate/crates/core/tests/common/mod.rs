#![allow(dead_code)]

use alphakit_core::{Alpha, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn al(a: f64) -> Alpha {
    Alpha::new(a).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of modulus at most `r_max`.
pub fn point_in_disk<R: Rng>(rng: &mut R, r_max: f64) -> Complex64 {
    let r = r_max * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Fourth-order central Wirtinger derivatives `(f_z, f_z̄)` with step `h`.
pub fn fd_wirtinger<F: Fn(Complex64) -> Complex64>(f: F, z: Complex64, h: f64) -> (Complex64, Complex64) {
    let d = |dir: Complex64| {
        (f(z - dir * (2.0 * h)) - f(z + dir * (2.0 * h)) + (f(z + dir * h) - f(z - dir * h)) * 8.0) / (12.0 * h)
    };
    let dx = d(c(1.0, 0.0));
    let dy = d(c(0.0, 1.0));
    ((dx - Complex64::i() * dy) * 0.5, (dx + Complex64::i() * dy) * 0.5)
}

/// `|a − b| / max(|b|, 1e−3)`.
pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-3)
}

/// Random trigonometric polynomial of degree at most `deg` with `Σ|c_k| ≤ 1`.
pub fn trig_poly<R: Rng>(rng: &mut R, deg: i64) -> Vec<(i64, Complex64)> {
    let mut v: Vec<(i64, Complex64)> = (-deg..=deg)
        .map(|k| (k, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        .collect();
    let l1: f64 = v.iter().map(|t| t.1.norm()).sum();
    for t in &mut v {
        t.1 /= l1;
    }
    v
}
