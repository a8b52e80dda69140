//! Polar description of a curve that is starlike about the origin: the
//! continuous argument θ ↦ arg γ(θ) and its inverse.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

type C = Complex64;

pub(crate) struct PolarCurve<'a> {
    curve: Box<dyn Fn(f64) -> (C, C) + Sync + 'a>,
    thetas: Vec<f64>,
    /// Unwrapped argument at `thetas`; one extra entry at θ = 2π.
    args: Vec<f64>,
}

impl<'a> PolarCurve<'a> {
    /// `curve(θ)` returns (γ(θ), γ′(θ)) for a 2π-periodic counterclockwise curve.
    pub fn new<F: Fn(f64) -> (C, C) + Sync + 'a>(curve: F, table: usize) -> Result<Self> {
        let mut thetas = Vec::with_capacity(table + 1);
        let mut args = Vec::with_capacity(table + 1);
        let mut prev: Option<(C, f64)> = None;
        for j in 0..=table {
            let t = 2.0 * PI * j as f64 / table as f64;
            let (z, dz) = curve(t);
            if z.norm() == 0.0 {
                return Err(Error::validation("curve passes through the origin"));
            }
            let a = match prev {
                None => z.arg(),
                Some((pz, pa)) => pa + (z / pz).arg(),
            };
            let speed = (dz / z).im;
            if let Some((_, pa)) = prev {
                if a <= pa || speed <= 0.0 {
                    return Err(Error::validation(
                        "curve is not starlike about the origin; the polar boundary correspondence is unavailable",
                    ));
                }
            }
            thetas.push(t);
            args.push(a);
            prev = Some((z, a));
        }
        if ((args[table] - args[0]) - 2.0 * PI).abs() > 1e-6 {
            return Err(Error::validation("curve does not wind once around the origin"));
        }
        Ok(PolarCurve { curve: Box::new(curve), thetas, args })
    }

    pub fn point(&self, theta: f64) -> C {
        (self.curve)(theta).0
    }

    pub fn base_arg(&self) -> f64 {
        self.args[0]
    }

    /// θ with arg γ(θ) = target on the quasi-periodic continuous branch.
    pub fn inverse_arg(&self, target: f64) -> f64 {
        let a0 = self.args[0];
        let turns = ((target - a0) / (2.0 * PI)).floor();
        let t = target - 2.0 * PI * turns;
        let n = self.args.len() - 1;
        let j = match self.args.binary_search_by(|a| a.partial_cmp(&t).unwrap()) {
            Ok(j) => return self.thetas[j] + 2.0 * PI * turns,
            Err(j) => (j.max(1) - 1).min(n - 1),
        };
        let (mut lo, mut hi) = (self.thetas[j], self.thetas[j + 1]);
        let (zj, _) = (self.curve)(lo);
        let base = self.args[j];
        let frac = (t - self.args[j]) / (self.args[j + 1] - self.args[j]);
        let mut theta = lo + frac * (hi - lo);
        for _ in 0..60 {
            let (z, dz) = (self.curve)(theta);
            let f = base + (z / zj).arg() - t;
            if f > 0.0 {
                hi = theta;
            } else {
                lo = theta;
            }
            let step = f / (dz / z).im;
            let mut next = theta - step;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - theta).abs() < 1e-15 || hi - lo < 1e-15 {
                theta = next;
                break;
            }
            theta = next;
        }
        theta + 2.0 * PI * turns
    }

    /// Radial mismatch |w| − |γ| along the ray through `w`.
    pub fn radial_mismatch(&self, w: C, branch_hint: f64) -> f64 {
        // choose the representative of arg w closest to the hint
        let a = w.arg();
        let k = ((branch_hint - a) / (2.0 * PI)).round();
        let theta = self.inverse_arg(a + 2.0 * PI * k);
        w.norm() - self.point(theta).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn off_center_circle_inverse() {
        let c = C::new(0.3, 0.1);
        let curve = PolarCurve::new(move |t| (c + C::from_polar(1.0, t), C::new(0.0, 1.0) * C::from_polar(1.0, t)), 64).unwrap();
        for &target in &[-3.0, 0.0, 0.5, 2.0, 7.5, 20.0] {
            let th = curve.inverse_arg(target);
            let z = curve.point(th);
            let diff = z.arg() - target;
            let wrapped = diff - 2.0 * PI * (diff / (2.0 * PI)).round();
            assert!(wrapped.abs() < 1e-13, "target {target}");
        }
        // monotone in the target
        assert!(curve.inverse_arg(1.0) < curve.inverse_arg(1.1));
        assert!((curve.inverse_arg(1.0 + 2.0 * PI) - curve.inverse_arg(1.0) - 2.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn rejects_non_starlike() {
        // a circle not enclosing 0
        let c = C::new(2.0, 0.0);
        let r = PolarCurve::new(move |t| (c + C::from_polar(1.0, t), C::new(0.0, 1.0) * C::from_polar(1.0, t)), 64);
        assert!(r.is_err());
    }
}
