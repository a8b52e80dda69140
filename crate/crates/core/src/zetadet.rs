//! Zeta-regularized determinants of flat disks and annuli, and the
//! Polyakov–Alvarez and conformal-anomaly functionals for flat metrics.
//!
//! Determinants are returned as logarithms throughout.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{
    barycentric_eval, barycentric_weights, differentiation_matrix, gauss_legendre_interval,
    real_fourier_coefficients, frequency,
};
use crate::specfun::{log_euler_phi, zeta_prime_minus_one};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatDisk {
    r: f64,
}

impl FlatDisk {
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::domain(format!("disk radius must be positive, got {r}")));
        }
        Ok(FlatDisk { r })
    }

    pub fn radius(&self) -> f64 {
        self.r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatAnnulus {
    r1: f64,
    r2: f64,
}

impl FlatAnnulus {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        if !(r1 > 0.0 && r1 < r2 && r2.is_finite()) {
            return Err(Error::domain(format!("annulus radii must satisfy 0 < r1 < r2, got ({r1}, {r2})")));
        }
        Ok(FlatAnnulus { r1, r2 })
    }

    /// The standard annulus e^{−2πτ} < |z| < 1.
    pub fn standard(tau: f64) -> Result<Self> {
        if !(tau > 0.0) {
            return Err(Error::domain(format!("modulus must be positive, got {tau}")));
        }
        FlatAnnulus::new((-2.0 * PI * tau).exp(), 1.0)
    }

    pub fn radii(&self) -> (f64, f64) {
        (self.r1, self.r2)
    }

    pub fn modulus(&self) -> f64 {
        (self.r2.ln() - self.r1.ln()) / (2.0 * PI)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FlatDomain {
    Disk(FlatDisk),
    Annulus(FlatAnnulus),
}

impl FlatDomain {
    fn radial_range(&self) -> (f64, f64) {
        match *self {
            FlatDomain::Disk(d) => (0.0, d.r),
            FlatDomain::Annulus(a) => (a.r1, a.r2),
        }
    }
}

/// log det_ζ Δ of the flat disk of radius r.
pub fn det_disk(d: FlatDisk) -> f64 {
    -(2f64.ln()) / 6.0 - 0.5 * PI.ln() - d.r.ln() / 3.0 - 2.0 * zeta_prime_minus_one() - 5.0 / 12.0
}

/// log det_ζ Δ of the flat annulus r1 < |z| < r2 (Dirichlet conditions).
pub fn det_annulus(a: FlatAnnulus) -> f64 {
    let log_ratio = a.r2.ln() - a.r1.ln();
    let x = (a.r1 / a.r2).powi(2);
    // x < 1 is guaranteed by construction
    let lphi = log_euler_phi(x).unwrap_or(f64::NAN);
    -PI.ln() - log_ratio / 3.0 + log_ratio.ln() + 2.0 * lphi
}

/// Values and normal derivative of σ on one boundary circle.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTrace {
    pub radius: f64,
    /// Geodesic curvature of the circle as a boundary of the domain.
    pub curvature: f64,
    pub sigma: Vec<f64>,
    /// Derivative along the outward unit normal.
    pub normal_derivative: Vec<f64>,
}

/// Samples of a conformal factor σ on a polar grid: Gauss–Legendre nodes in
/// radius, uniform nodes in angle.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalFactorField {
    domain: FlatDomain,
    radii: Vec<f64>,
    radial_weights: Vec<f64>,
    n_angular: usize,
    /// Row-major: `values[i * n_angular + j]` at radius i, angle j.
    values: Vec<f64>,
    boundaries: Vec<BoundaryTrace>,
}

/// The grid is coarser than this in either direction → validation error.
pub const MIN_GRID: usize = 8;

impl ConformalFactorField {
    /// Sample `sigma(x, y)` on an `n_radial × n_angular` grid.
    ///
    /// Boundary values and normal derivatives are obtained from the radial
    /// interpolant through the grid samples.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(
        domain: FlatDomain,
        n_radial: usize,
        n_angular: usize,
        sigma: F,
    ) -> Result<Self> {
        if n_radial < MIN_GRID || n_angular < MIN_GRID {
            return Err(Error::validation(format!(
                "conformal factor grid {n_radial}x{n_angular} is below the minimum {MIN_GRID}x{MIN_GRID}"
            )));
        }
        let (a, b) = domain.radial_range();
        let (radii, radial_weights) = gauss_legendre_interval(n_radial, a, b);
        let mut values = Vec::with_capacity(n_radial * n_angular);
        for &r in &radii {
            for j in 0..n_angular {
                let t = 2.0 * PI * j as f64 / n_angular as f64;
                values.push(sigma(r * t.cos(), r * t.sin()));
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("conformal factor samples".into()));
        }
        let mut field = ConformalFactorField {
            domain,
            radii,
            radial_weights,
            n_angular,
            values,
            boundaries: Vec::new(),
        };
        field.boundaries = match domain {
            FlatDomain::Disk(d) => vec![field.trace(d.r, 1.0 / d.r, 1.0)],
            FlatDomain::Annulus(an) => vec![
                field.trace(an.r2, 1.0 / an.r2, 1.0),
                field.trace(an.r1, -1.0 / an.r1, -1.0),
            ],
        };
        Ok(field)
    }

    fn trace(&self, radius: f64, curvature: f64, normal_sign: f64) -> BoundaryTrace {
        let w = barycentric_weights(&self.radii);
        let mut sigma = Vec::with_capacity(self.n_angular);
        let mut normal_derivative = Vec::with_capacity(self.n_angular);
        for j in 0..self.n_angular {
            let column = self.column(j);
            let (v, d) = barycentric_eval(&self.radii, &w, &column, radius);
            sigma.push(v);
            normal_derivative.push(normal_sign * d);
        }
        BoundaryTrace { radius, curvature, sigma, normal_derivative }
    }

    fn column(&self, j: usize) -> Vec<f64> {
        (0..self.radii.len()).map(|i| self.values[i * self.n_angular + j]).collect()
    }

    pub fn domain(&self) -> FlatDomain {
        self.domain
    }

    pub fn grid(&self) -> (usize, usize) {
        (self.radii.len(), self.n_angular)
    }

    pub fn boundaries(&self) -> &[BoundaryTrace] {
        &self.boundaries
    }

    /// ∬ ½|∇σ|² dA.
    pub fn dirichlet_half(&self) -> f64 {
        let n_r = self.radii.len();
        let n_t = self.n_angular;
        let dmat = differentiation_matrix(&self.radii);
        let dtheta = 2.0 * PI / n_t as f64;
        let mut total = 0.0;
        for i in 0..n_r {
            let r = self.radii[i];
            let ring = &self.values[i * n_t..(i + 1) * n_t];
            let sigma_t = angular_derivative(ring);
            let mut ring_sum = 0.0;
            for j in 0..n_t {
                let sigma_r: f64 = (0..n_r).map(|k| dmat[i * n_r + k] * self.values[k * n_t + j]).sum();
                let st = sigma_t[j] / r;
                ring_sum += 0.5 * (sigma_r * sigma_r + st * st);
            }
            total += self.radial_weights[i] * r * ring_sum * dtheta;
        }
        total
    }

    /// ∮ k σ ds over all boundary circles.
    pub fn boundary_curvature_term(&self) -> f64 {
        self.boundary_sum(|b, j| b.curvature * b.sigma[j])
    }

    /// ∮ ∂_N σ ds over all boundary circles.
    pub fn boundary_flux(&self) -> f64 {
        self.boundary_sum(|b, j| b.normal_derivative[j])
    }

    fn boundary_sum<F: Fn(&BoundaryTrace, usize) -> f64>(&self, f: F) -> f64 {
        let dtheta = 2.0 * PI / self.n_angular as f64;
        self.boundaries
            .iter()
            .map(|b| (0..self.n_angular).map(|j| f(b, j)).sum::<f64>() * b.radius * dtheta)
            .sum()
    }

    /// Relative size of the unresolved spectral content: the top quarter of
    /// the angular band on every ring plus the last two Legendre
    /// coefficients of every radial column.
    pub fn resolution_residual(&self) -> f64 {
        let n_r = self.radii.len();
        let n_t = self.n_angular;
        let scale = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        let mut worst: f64 = 0.0;
        for i in 0..n_r {
            let c = real_fourier_coefficients(&self.values[i * n_t..(i + 1) * n_t]);
            let band = (n_t / 2) as i64;
            for (j, cj) in c.iter().enumerate() {
                if frequency(j, n_t).abs() * 4 >= band * 3 {
                    worst = worst.max(cj.norm());
                }
            }
        }
        let (a, b) = self.domain.radial_range();
        let xs: Vec<f64> = self.radii.iter().map(|r| (2.0 * r - a - b) / (b - a)).collect();
        let ws: Vec<f64> = self.radial_weights.iter().map(|w| 2.0 * w / (b - a)).collect();
        for j in 0..n_t {
            let col = self.column(j);
            for deg in [n_r - 2, n_r - 1] {
                let p: Vec<f64> = xs.iter().map(|&x| legendre(deg, x)).collect();
                let coef: f64 = (0..n_r).map(|k| ws[k] * p[k] * col[k]).sum::<f64>() * (2 * deg + 1) as f64 / 2.0;
                worst = worst.max(coef.abs());
            }
        }
        worst / scale
    }
}

fn legendre(n: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return 1.0;
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p1
}

fn angular_derivative(ring: &[f64]) -> Vec<f64> {
    let n = ring.len();
    let mut c = real_fourier_coefficients(ring);
    for (j, cj) in c.iter_mut().enumerate() {
        let k = frequency(j, n);
        // the Nyquist mode has no well-defined real derivative
        let k = if 2 * k.unsigned_abs() as usize == n { 0 } else { k };
        *cj *= num_complex::Complex64::new(0.0, k as f64);
    }
    crate::quadrature::synthesize(&c).iter().map(|z| z.re).collect()
}

/// Default tolerance for [`ConformalFactorField::resolution_residual`].
pub const RESOLUTION_TOL: f64 = 1e-10;

fn check_resolution(sigma: &ConformalFactorField) -> Result<()> {
    let residual = sigma.resolution_residual();
    if residual > RESOLUTION_TOL {
        return Err(Error::Quadrature { residual, tolerance: RESOLUTION_TOL });
    }
    Ok(())
}

/// ψ(σ) = −(1/6π)∬½|∇σ|² − (1/6π)∮(kσ + (3/2)∂_Nσ) for a flat background.
pub fn polyakov_alvarez(sigma: &ConformalFactorField) -> Result<f64> {
    check_resolution(sigma)?;
    Ok(-(sigma.dirichlet_half() + sigma.boundary_curvature_term() + 1.5 * sigma.boundary_flux()) / (6.0 * PI))
}

/// A(σ) = (1/12π)∬½|∇σ|² + (1/12π)∮kσ for a flat background.
pub fn conformal_anomaly(sigma: &ConformalFactorField) -> Result<f64> {
    check_resolution(sigma)?;
    Ok((sigma.dirichlet_half() + sigma.boundary_curvature_term()) / (12.0 * PI))
}
