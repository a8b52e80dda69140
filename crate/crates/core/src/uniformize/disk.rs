//! Riemann maps of starlike domains by Theodorsen's boundary-correspondence
//! iteration.
//!
//! For F(w) = w·exp(h(w)) the boundary condition F(e^{it}) = γ(S(t)) splits
//! into Re h(e^{it}) = log|γ(S(t))| and arg γ(S(t)) = t + Im h(e^{it}); the
//! imaginary part is the harmonic conjugate of the real part, computed by FFT.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::polar::PolarCurve;
use crate::error::{Error, Result};
use crate::quadrature::{fourier_coefficients, synthesize};

type C = Complex64;

#[derive(Debug, Clone)]
pub(crate) struct DiskSolution {
    /// h_0 (real), h_1, ..., h_{N/2−1}.
    pub h: Vec<C>,
    pub n: usize,
    pub residual: f64,
}

/// Harmonic extension of real boundary data: returns h_k with
/// Re h(e^{it}) = u(t), h_0 real.
pub(crate) fn analytic_completion(u: &[f64]) -> Vec<C> {
    let n = u.len();
    let c = fourier_coefficients(&u.iter().map(|&x| C::new(x, 0.0)).collect::<Vec<_>>());
    let mut h = Vec::with_capacity(n / 2);
    h.push(C::new(c[0].re, 0.0));
    for ck in c.iter().take(n / 2).skip(1) {
        h.push(ck * 2.0);
    }
    h
}

/// Values of Σ_{k≥0} a_k e^{ik(t_j + shift)} on the n-point grid t_j = 2πj/n.
pub(crate) fn eval_on_circle(a: &[C], n: usize, shift: f64) -> Vec<C> {
    let mut bins = vec![C::new(0.0, 0.0); n];
    for (k, &c) in a.iter().enumerate() {
        bins[k % n] += c * C::from_polar(1.0, k as f64 * shift);
    }
    synthesize(&bins)
}

fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |j| 2.0 * PI * j as f64 / n as f64)
}

pub(crate) struct TheodorsenSolver<'c, 'a> {
    pub curve: &'c PolarCurve<'a>,
    pub tol: f64,
    pub min_n: usize,
    pub max_n: usize,
    pub max_iter: usize,
}

impl TheodorsenSolver<'_, '_> {
    /// Branch offset so that targets near t = 0 sit next to the curve's base argument.
    fn offset(&self) -> f64 {
        let a0 = self.curve.base_arg();
        2.0 * PI * (a0 / (2.0 * PI)).round()
    }

    fn correspondence(&self, h: &[C], n: usize) -> Vec<f64> {
        let vals = eval_on_circle(h, n, 0.0);
        let off = self.offset();
        grid(n).zip(&vals).map(|(t, v)| self.curve.inverse_arg(t + v.im - h[0].im + off)).collect()
    }

    fn iterate(&self, n: usize, mut h: Vec<C>) -> Result<(Vec<C>, usize)> {
        let mut s = self.correspondence(&h, n);
        let mut last = f64::INFINITY;
        // under-relaxed when the residual grows (curves far from circular about 0)
        let mut omega: f64 = 1.0;
        let mut streak = 0;
        for it in 0..self.max_iter {
            let u: Vec<f64> = s.iter().map(|&th| self.curve.point(th).norm().ln()).collect();
            h = analytic_completion(&u);
            let next = self.correspondence(&h, n);
            let change = s.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if !change.is_finite() {
                return Err(Error::NonFinite("Theodorsen iteration".into()));
            }
            if change < 1e-14 || (change < 1e-12 && change >= 0.5 * last.min(1e-12)) {
                let u: Vec<f64> = next.iter().map(|&th| self.curve.point(th).norm().ln()).collect();
                return Ok((analytic_completion(&u), it + 1));
            }
            if change > last {
                omega = (0.5 * omega).max(1.0 / 64.0);
                streak = 0;
            } else {
                streak += 1;
                if streak >= 5 {
                    omega = (1.5 * omega).min(1.0);
                    streak = 0;
                }
            }
            for (a, b) in s.iter_mut().zip(&next) {
                *a += omega * (b - *a);
            }
            last = change;
        }
        Err(Error::NonConvergence { what: "Theodorsen iteration", iterations: self.max_iter, residual: last })
    }

    /// Maximum radial mismatch at the midpoints of the n-point grid.
    fn residual(&self, h: &[C], n: usize) -> f64 {
        let shift = PI / n as f64;
        let vals = eval_on_circle(h, n, shift);
        let off = self.offset();
        grid(n)
            .zip(&vals)
            .map(|(t, v)| {
                let w = C::from_polar(1.0, t + shift) * v.exp();
                self.curve.radial_mismatch(w, t + shift + v.im + off).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn solve(&self) -> Result<DiskSolution> {
        let mut n = self.min_n;
        let mut h = vec![C::new(0.0, 0.0)];
        loop {
            let (hn, _) = self.iterate(n, h)?;
            // judge on a finer grid than the one used for solving
            let residual = self.residual(&hn, 4 * n);
            if residual < self.tol {
                return Ok(DiskSolution { h: hn, n, residual });
            }
            if n >= self.max_n {
                return Err(Error::NonConvergence { what: "disk map resolution", iterations: n, residual });
            }
            h = hn;
            n *= 2;
        }
    }
}
