//! Conformal map of a standard annulus onto a doubly connected domain by a
//! Garrick-type simultaneous boundary-correspondence iteration.
//!
//! With f_A(z) = z·exp(H(z)) and H Laurent on r < |z| < 1, the boundary
//! conditions are
//!   Re H(e^{it})  = log|γ₂(S₂(t))|,         arg γ₂(S₂) = t + Im H(e^{it}),
//!   Re H(re^{it}) = log|γ₁(S₁(t))| − log r, arg γ₁(S₁) = t + Im H(re^{it}).
//! Given both real parts, each Fourier mode of H solves a 2×2 system and the
//! mean values fix log r.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::disk::eval_on_circle;
use super::polar::PolarCurve;
use crate::error::{Error, Result};
use crate::quadrature::real_fourier_coefficients;

type C = Complex64;

/// H in scaled form: H(z) = Σ_{k≥0} pos[k] z^k + Σ_{m≥1} neg[m−1] (r/z)^m.
#[derive(Debug, Clone)]
pub(crate) struct AnnulusLog {
    pub r: f64,
    pub pos: Vec<C>,
    pub neg: Vec<C>,
}

impl AnnulusLog {
    /// Values of H on |z| = 1 (outer) or |z| = r (inner) at t_j + shift.
    pub fn on_circle(&self, outer: bool, n: usize, shift: f64) -> Vec<C> {
        let (p, q): (Vec<C>, Vec<C>) = if outer {
            (self.pos.clone(), self.neg.iter().enumerate().map(|(i, c)| c * self.r.powi(i as i32 + 1)).collect())
        } else {
            (self.pos.iter().enumerate().map(|(k, c)| c * self.r.powi(k as i32)).collect(), self.neg.clone())
        };
        let a = eval_on_circle(&p, n, shift);
        let qc: Vec<C> = std::iter::once(C::new(0.0, 0.0)).chain(q.iter().map(|c| c.conj())).collect();
        // Σ q_m e^{−imt} = conj(Σ conj(q_m) e^{imt})
        let b = eval_on_circle(&qc, n, shift);
        a.iter().zip(&b).map(|(x, y)| x + y.conj()).collect()
    }
}

pub(crate) struct GarrickSolver<'c, 'a> {
    pub inner: &'c PolarCurve<'a>,
    pub outer: &'c PolarCurve<'a>,
    pub tol: f64,
    pub min_n: usize,
    pub max_n: usize,
    pub max_iter: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct AnnulusSolution {
    pub log: AnnulusLog,
    pub n: usize,
}

fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |j| 2.0 * PI * j as f64 / n as f64)
}

impl GarrickSolver<'_, '_> {
    fn correspondences(&self, h: &AnnulusLog, n: usize) -> (Vec<f64>, Vec<f64>) {
        let vo = h.on_circle(true, n, 0.0);
        let vi = h.on_circle(false, n, 0.0);
        let s2 = grid(n).zip(&vo).map(|(t, v)| self.outer.inverse_arg(t + v.im)).collect();
        let s1 = grid(n).zip(&vi).map(|(t, v)| self.inner.inverse_arg(t + v.im)).collect();
        (s1, s2)
    }

    fn solve_modes(&self, s1: &[f64], s2: &[f64]) -> AnnulusLog {
        let n = s1.len();
        let lo: Vec<f64> = s2.iter().map(|&t| self.outer.point(t).norm().ln()).collect();
        let li: Vec<f64> = s1.iter().map(|&t| self.inner.point(t).norm().ln()).collect();
        let u = real_fourier_coefficients(&lo);
        let w = real_fourier_coefficients(&li);
        let log_r = w[0].re - u[0].re;
        let r = log_r.exp();
        let mut pos = vec![C::new(u[0].re, 0.0)];
        let mut neg = Vec::with_capacity(n / 2);
        for k in 1..n / 2 {
            let rk = r.powi(k as i32);
            let den = 1.0 - rk * rk;
            pos.push((u[k] - w[k] * rk) * (2.0 / den));
            neg.push(((w[k] - u[k] * rk) * (2.0 / den)).conj());
        }
        AnnulusLog { r, pos, neg }
    }

    fn iterate(&self, n: usize, start: AnnulusLog) -> Result<AnnulusLog> {
        let (mut s1, mut s2) = self.correspondences(&start, n);
        let mut last = f64::INFINITY;
        // Under-relaxation, halved whenever the fixed-point residual grows;
        // strongly eccentric boundaries make the plain iteration oscillate.
        let mut omega: f64 = 1.0;
        let mut streak = 0;
        for _ in 0..self.max_iter {
            let h = self.solve_modes(&s1, &s2);
            if !h.r.is_finite() || h.r <= 0.0 || h.r >= 1.0 {
                return Err(Error::NonConvergence { what: "annulus iteration", iterations: 0, residual: f64::NAN });
            }
            let (n1, n2) = self.correspondences(&h, n);
            let change = s1
                .iter()
                .zip(&n1)
                .chain(s2.iter().zip(&n2))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if !change.is_finite() {
                return Err(Error::NonFinite("annulus iteration".into()));
            }
            if change < 1e-14 || (change < 1e-12 && change >= 0.5 * last.min(1e-12)) {
                return Ok(self.solve_modes(&n1, &n2));
            }
            if change > last {
                omega = (0.5 * omega).max(1.0 / 64.0);
                streak = 0;
            } else {
                streak += 1;
                // recover once the iteration has settled
                if streak >= 5 {
                    omega = (1.5 * omega).min(1.0);
                    streak = 0;
                }
            }
            for (a, b) in s1.iter_mut().zip(&n1).chain(s2.iter_mut().zip(&n2)) {
                *a += omega * (b - *a);
            }
            last = change;
        }
        Err(Error::NonConvergence { what: "annulus iteration", iterations: self.max_iter, residual: last })
    }

    fn residual(&self, h: &AnnulusLog, n: usize) -> f64 {
        let shift = PI / n as f64;
        let mut worst: f64 = 0.0;
        for (outer, curve, scale) in [(true, self.outer, 1.0), (false, self.inner, h.r)] {
            let vals = h.on_circle(outer, n, shift);
            for (t, v) in grid(n).zip(&vals) {
                let w = C::from_polar(scale, t + shift) * v.exp();
                worst = worst.max(curve.radial_mismatch(w, t + shift + v.im).abs());
            }
        }
        worst
    }

    pub fn solve(&self) -> Result<AnnulusSolution> {
        let mut n = self.min_n;
        let mut h = AnnulusLog { r: 0.5, pos: vec![C::new(0.0, 0.0)], neg: vec![] };
        loop {
            let hn = self.iterate(n, h)?;
            let residual = self.residual(&hn, 4 * n);
            if residual < self.tol {
                return Ok(AnnulusSolution { log: hn, n });
            }
            if n >= self.max_n {
                return Err(Error::NonConvergence { what: "annulus map resolution", iterations: n, residual });
            }
            h = hn;
            n *= 2;
        }
    }
}
