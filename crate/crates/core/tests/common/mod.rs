#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use twoloop::loops::{Loop, MoebiusMap, TwoLoopConfig};

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// γ₁ = e^{−π}S¹ and γ₂(θ) = e^{iθ}(1 + 0.05 cos 3θ).
pub fn perturbed_pair() -> TwoLoopConfig {
    let g1 = Loop::circle(c(0.0, 0.0), (-PI).exp());
    let g2 = Loop::from_terms(&[(1, c(1.0, 0.0)), (4, c(0.025, 0.0)), (-2, c(0.025, 0.0))]).unwrap();
    TwoLoopConfig::new(g1, g2).unwrap()
}

/// Smooth configurations with both loops non-circular or off-center.
pub fn perturbed_configs() -> Vec<TwoLoopConfig> {
    let specs: Vec<(Loop, Loop)> = vec![
        (
            Loop::from_terms(&[(1, c(0.3, 0.0)), (-1, c(0.02, 0.01))]).unwrap(),
            Loop::circle(c(0.1, 0.0), 1.0),
        ),
        (
            Loop::from_terms(&[(1, c(0.4, 0.0)), (3, c(0.01, 0.0))]).unwrap(),
            Loop::from_terms(&[(1, c(1.0, 0.0)), (-1, c(0.1, 0.05))]).unwrap(),
        ),
        (
            Loop::circle(c(0.05, 0.02), 0.2),
            Loop::from_terms(&[(1, c(1.2, 0.0)), (2, c(0.05, 0.0)), (-3, c(0.0, 0.02))]).unwrap(),
        ),
        (
            Loop::from_terms(&[(1, c(0.5, 0.0)), (-2, c(0.03, 0.0)), (2, c(0.0, 0.02))]).unwrap(),
            Loop::from_terms(&[(1, c(1.0, 0.0)), (3, c(0.04, 0.0))]).unwrap(),
        ),
    ];
    let mut out = vec![perturbed_pair()];
    out.extend(specs.into_iter().map(|(a, b)| TwoLoopConfig::new(a, b).unwrap()));
    out
}

fn disk_point(rng: &mut ChaCha8Rng, rmax: f64) -> C {
    C::from_polar(rmax * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))
}

/// s·e^{iα}(z + a)/(1 + āz) then z/(1 + cz), with |a|, |c| ≤ 0.3.
pub fn random_moebius(rng: &mut ChaCha8Rng) -> MoebiusMap {
    let a = disk_point(rng, 0.3);
    let cc = disk_point(rng, 0.3);
    MoebiusMap::normalized(a, rng.gen_range(0.5..2.0), rng.gen_range(0.0..TAU), cc).unwrap()
}

/// Center and radius of the circle through three points.
pub fn circumcircle(p: C, q: C, r: C) -> (C, f64) {
    let (b, cc) = (q - p, r - p);
    let d = 2.0 * (b.re * cc.im - b.im * cc.re);
    let ux = (cc.im * b.norm_sqr() - b.im * cc.norm_sqr()) / d;
    let uy = (b.re * cc.norm_sqr() - cc.re * b.norm_sqr()) / d;
    let center = p + c(ux, uy);
    (center, (p - center).norm())
}

/// Modulus of the annulus between nested circles:
/// cosh 2πτ = (R₁² + R₂² − d²)/(2R₁R₂).
pub fn two_circle_modulus(c1: C, r1: f64, c2: C, r2: f64) -> f64 {
    let d2 = (c1 - c2).norm_sqr();
    ((r1 * r1 + r2 * r2 - d2) / (2.0 * r1 * r2)).acosh() / TAU
}

/// The image circle of `center + r e^{iθ}` under `m`.
pub fn image_circle(m: &MoebiusMap, center: C, r: f64) -> (C, f64) {
    let pts: Vec<C> = [0.3, 2.4, 4.4].iter().map(|&t| m.apply(center + C::from_polar(r, t))).collect();
    circumcircle(pts[0], pts[1], pts[2])
}
