//! The two-loop Loewner potential by the pre-Schwarzian and winding-function
//! routes, the multiple Grunsky equality, and the concentric-circle closed
//! form.
//!
//! The additive constant of the potential is fixed so that the
//! concentric circle pair of modulus τ has potential `lpot_circles(τ)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loops::TwoLoopConfig;
use crate::quadrature::{composite_gauss_legendre, gauss_legendre_interval};
use crate::specfun::log_euler_phi;
use crate::uniformize::{ConformalMapSeries, MapKind, RingValues, Uniformization};

type C = Complex64;

/// lpot of the circle pair e^{−2πτ}S¹, S¹: −log τ − 2 log φ(e^{−4πτ}).
pub fn lpot_circles(tau: f64) -> Result<f64> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::domain(format!("modulus must be positive, got {tau}")));
    }
    Ok(-tau.ln() - 2.0 * log_euler_phi((-4.0 * PI * tau).exp())?)
}

/// Brownian-loop interaction of concentric circles relative to τ = 1.
///
/// The one-loop potentials of circles do not depend on τ, so this is
/// `lpot_circles(τ) − lpot_circles(1)`.
pub fn blm_interaction_circles(tau: f64) -> Result<f64> {
    Ok(lpot_circles(tau)? - lpot_circles(1.0)?)
}

/// Quadrature controls for area integrals over the map domains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyQuadrature {
    pub n_radial: usize,
    pub n_angular: usize,
    /// Accept when refining both grids changes the value by less than
    /// `tol · max(1, |value|)`.
    pub tol: f64,
    pub max_radial: usize,
    pub max_angular: usize,
}

impl Default for EnergyQuadrature {
    fn default() -> Self {
        EnergyQuadrature { n_radial: 24, n_angular: 64, tol: 1e-12, max_radial: 384, max_angular: 16384 }
    }
}

/// ∬ over the domain of `map` of `integrand(ring, i)`, with Gauss–Legendre
/// nodes in radius and the trapezoidal rule in angle.
fn area_integral<F>(map: &ConformalMapSeries, n_r: usize, n_t: usize, integrand: &F) -> f64
where
    F: Fn(&RingValues, usize) -> f64,
{
    let ring_sum = |rho: f64| {
        let ring = map.ring(rho, n_t);
        (0..n_t).map(|i| integrand(&ring, i)).sum::<f64>() * (2.0 * PI / n_t as f64)
    };
    match map.kind {
        MapKind::InteriorDisk => {
            let (x, w) = gauss_legendre_interval(n_r, 0.0, map.radius);
            x.iter().zip(&w).map(|(&rho, &wt)| wt * rho * ring_sum(rho)).sum()
        }
        MapKind::Annulus => {
            // s = log ρ spreads the nodes evenly over the scales of a thin ring
            let (x, w) = composite_gauss_legendre(n_r, map.radius.ln(), 0.0, 1.0);
            x.iter()
                .zip(&w)
                .map(|(&s, &wt)| {
                    let rho = s.exp();
                    wt * rho * rho * ring_sum(rho)
                })
                .sum()
        }
        MapKind::ExteriorDisk => {
            // z = 1/w over the unit disk: dA(z) = |w|^{−4} dA(w)
            let (x, w) = gauss_legendre_interval(n_r, 0.0, 1.0);
            x.iter().zip(&w).map(|(&sig, &wt)| wt * ring_sum(1.0 / sig) / sig.powi(3)).sum()
        }
    }
}

fn initial_angular(map: &ConformalMapSeries, q: &EnergyQuadrature) -> usize {
    let (p, n) = map.len();
    (2 * (p + n)).next_power_of_two().max(q.n_angular)
}

fn converged_integral<F>(map: &ConformalMapSeries, q: &EnergyQuadrature, integrand: F) -> Result<f64>
where
    F: Fn(&RingValues, usize) -> f64,
{
    let mut n_r = q.n_radial;
    let mut n_t = initial_angular(map, q);
    let mut prev = area_integral(map, n_r, n_t, &integrand);
    loop {
        if n_r * 2 > q.max_radial || n_t * 2 > q.max_angular {
            return Err(Error::Quadrature { residual: f64::NAN, tolerance: q.tol });
        }
        n_r *= 2;
        n_t *= 2;
        let cur = area_integral(map, n_r, n_t, &integrand);
        if !cur.is_finite() {
            return Err(Error::NonFinite("area quadrature".into()));
        }
        let residual = (cur - prev).abs();
        if residual <= q.tol * cur.abs().max(1.0) {
            return Ok(cur);
        }
        if n_r * 2 > q.max_radial || n_t * 2 > q.max_angular {
            return Err(Error::Quadrature { residual, tolerance: q.tol });
        }
        prev = cur;
    }
}

fn check_nonvanishing(map: &ConformalMapSeries) -> Result<()> {
    let rho = match map.kind {
        MapKind::InteriorDisk => map.radius * 0.5,
        MapKind::Annulus => map.radius.sqrt(),
        MapKind::ExteriorDisk => 2.0,
    };
    let ring = map.ring(rho, 64);
    if ring.d1.iter().any(|d| d.norm() == 0.0 || !d.re.is_finite()) {
        return Err(Error::domain("derivative of the map vanishes on its domain"));
    }
    Ok(())
}

/// ∬ |f″/f′|² over the domain of f.
pub fn preschwarzian_energy(f: &ConformalMapSeries) -> Result<f64> {
    preschwarzian_energy_with(f, &EnergyQuadrature::default())
}

pub fn preschwarzian_energy_with(f: &ConformalMapSeries, q: &EnergyQuadrature) -> Result<f64> {
    if f.pos.len() <= 2 && f.neg.is_empty() {
        // affine maps
        return Ok(0.0);
    }
    check_nonvanishing(f)?;
    converged_integral(f, q, |r, i| (r.d2[i] / r.d1[i]).norm_sqr())
}

/// ∬ |f″/f′ − f′/f + 1/z|² over the domain of f.
pub fn winding_dirichlet(f: &ConformalMapSeries, q: &EnergyQuadrature) -> Result<f64> {
    if f.pos.len() <= 2 && f.neg.is_empty() && f.log_pos.len() <= 1 && f.log_neg.is_empty() {
        return Ok(0.0);
    }
    check_nonvanishing(f)?;
    converged_integral(f, q, |r, i| (r.d2[i] / r.d1[i] - r.dlog[i]).norm_sqr())
}

/// ∬ |f′/f − 1/z|² over the domain of f.
pub fn log_dirichlet(f: &ConformalMapSeries, q: &EnergyQuadrature) -> Result<f64> {
    if f.log_pos.len() <= 1 && f.log_neg.is_empty() {
        return Ok(0.0);
    }
    converged_integral(f, q, |r, i| r.dlog[i].norm_sqr())
}

/// Additive pieces of the two-loop potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialBreakdown {
    pub tau: f64,
    pub circle_term: f64,
    #[serde(rename = "I1")]
    pub i1: f64,
    #[serde(rename = "IA")]
    pub ia: f64,
    #[serde(rename = "I2")]
    pub i2: f64,
    /// log|f₂′(∞)| − log|f₁′(0)|.
    pub log_ratio_term: f64,
    pub total: f64,
}

/// Pre-Schwarzian formula for a given uniformization.
pub fn lpot_two_from(u: &Uniformization, q: &EnergyQuadrature) -> Result<PotentialBreakdown> {
    let circle_term = lpot_circles(u.tau)?;
    let i1 = preschwarzian_energy_with(&u.f1, q)?;
    let ia = preschwarzian_energy_with(&u.fa, q)?;
    let i2 = preschwarzian_energy_with(&u.f2, q)?;
    let log_ratio_term = u.log_deriv_ratio();
    let total = circle_term + (i1 + ia + i2) / (12.0 * PI) - log_ratio_term / 3.0;
    if !total.is_finite() {
        return Err(Error::NonFinite("two-loop potential".into()));
    }
    Ok(PotentialBreakdown { tau: u.tau, circle_term, i1, ia, i2, log_ratio_term, total })
}

/// Two-loop Loewner potential by the pre-Schwarzian formula.
pub fn lpot_two(cfg: &TwoLoopConfig) -> Result<PotentialBreakdown> {
    lpot_two_from(cfg.uniformization()?, &EnergyQuadrature::default())
}

/// Winding number of z f′/f around the ring |z| = ρ.
fn ring_winding(map: &ConformalMapSeries, rho: f64) -> f64 {
    let n = 512;
    let ring = map.ring(rho, n);
    let v: Vec<C> = (0..n).map(|i| 1.0 + ring.z[i] * ring.dlog[i]).collect();
    (0..n).map(|i| (v[(i + 1) % n] / v[i]).arg()).sum::<f64>() / (2.0 * PI)
}

/// Check that arg(z f′/f) has a single-valued continuous branch on each
/// domain (zero winding on sample rings); returns the largest winding found.
pub fn winding_branch_check(u: &Uniformization) -> Result<f64> {
    let r = u.inner_radius();
    let mut worst: f64 = 0.0;
    for frac in [0.25, 0.5, 0.75, 1.0] {
        worst = worst.max(ring_winding(&u.f1, r * frac).abs());
        worst = worst.max(ring_winding(&u.fa, r.powf(1.0 - frac * 0.999)).abs());
        worst = worst.max(ring_winding(&u.f2, 1.0 / frac).abs());
    }
    if worst > 1e-6 {
        return Err(Error::BranchDiscontinuity { mismatch: 2.0 * PI * worst });
    }
    Ok(worst)
}

/// Largest jump of φ = arg(z f′/f) across |z| = e^{−2πτ} and |z| = 1, with
/// each piece on the branch vanishing at 0 or ∞ as appropriate. Reported
/// for information: the pieces meet the loops at different boundary
/// parameters, so φ is only piecewise continuous in general.
pub fn winding_interface_jump(u: &Uniformization) -> f64 {
    let n = 256;
    let r = u.inner_radius();
    let phi = |m: &ConformalMapSeries, rho: f64| -> Vec<f64> {
        let ring = m.ring(rho, n);
        (0..n).map(|i| (1.0 + ring.z[i] * ring.dlog[i]).arg()).collect()
    };
    let pairs = [(phi(&u.f1, r), phi(&u.fa, r)), (phi(&u.fa, 1.0), phi(&u.f2, 1.0))];
    pairs
        .iter()
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max)
}

/// Loewner–Kufarev energy S = (1/16π) ∬_ℂ |∇φ|² of the equipotential foliation.
pub fn winding_energy(u: &Uniformization) -> Result<f64> {
    winding_energy_with(u, &EnergyQuadrature::default())
}

pub fn winding_energy_with(u: &Uniformization, q: &EnergyQuadrature) -> Result<f64> {
    winding_branch_check(u)?;
    let total = winding_dirichlet(&u.f1, q)? + winding_dirichlet(&u.fa, q)? + winding_dirichlet(&u.f2, q)?;
    Ok(total / (16.0 * PI))
}

/// Potential by the winding-function route:
/// lpot_circles(τ) + (4/3)S − (1/6) log|f₂′(∞)/f₁′(0)|.
pub fn lpot_two_via_lk_from(u: &Uniformization, q: &EnergyQuadrature) -> Result<f64> {
    Ok(lpot_circles(u.tau)? + 4.0 / 3.0 * winding_energy_with(u, q)? - u.log_deriv_ratio() / 6.0)
}

pub fn lpot_two_via_lk(cfg: &TwoLoopConfig) -> Result<f64> {
    lpot_two_via_lk_from(cfg.uniformization()?, &EnergyQuadrature::default())
}

/// Grunsky coefficients and the two sides of the multiple Grunsky inequality.
///
/// To keep every stored number finite, coefficients living on the small
/// circle are stored scaled: `b_minus[k−1] = b_{−k,0}·e^{−2πkτ}` and
/// `beta_minus[m−1] = β_{−m}·e^{2πmτ}`; `beta_plus[k−1] = β_k` and
/// `b_plus[k−1] = b_{k,0}` are unscaled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrunskyData {
    pub b_minus: Vec<C>,
    pub beta_plus: Vec<C>,
    pub beta_minus: Vec<C>,
    pub b_plus: Vec<C>,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

/// Weighted coefficient sums of the multiple Grunsky inequality from the
/// first `n` coefficients of each log series.
pub fn grunsky(u: &Uniformization, n: usize) -> Result<GrunskyData> {
    for (name, m) in [("f1", &u.f1), ("fA", &u.fa), ("f2", &u.f2)] {
        if m.log_pos.is_empty() {
            return Err(Error::validation(format!("{name} has no logarithmic series")));
        }
        let coeffs = m.log_pos.iter().chain(&m.log_neg);
        if coeffs.clone().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite(format!("log series of {name}")));
        }
    }
    let r = u.inner_radius();
    let take = |v: &[C]| -> Vec<C> { v.iter().skip(1).take(n).copied().collect() };
    // interior: H₁ stored in powers of z/r, so h_k = b_{−k,0} r^k
    let b_minus = take(&u.f1.log_pos);
    let beta_plus = take(&u.fa.log_pos);
    let beta_minus: Vec<C> = u.fa.log_neg.iter().take(n).copied().collect();
    let b_plus: Vec<C> = u.f2.log_neg.iter().take(n).copied().collect();
    let weighted = |v: &[C], w: &dyn Fn(usize) -> f64| -> f64 {
        v.iter().enumerate().map(|(i, c)| (i + 1) as f64 * c.norm_sqr() * w(i + 1)).sum()
    };
    let one = |_: usize| 1.0;
    let ring = |k: usize| 1.0 - r.powi(2 * k as i32);
    let lhs = PI * (weighted(&b_minus, &one) + weighted(&beta_plus, &ring) + weighted(&beta_minus, &ring) + weighted(&b_plus, &one));
    let rhs = 2.0 * PI * u.log_deriv_ratio();
    Ok(GrunskyData { b_minus, beta_plus, beta_minus, b_plus, lhs, rhs, gap: rhs - lhs })
}
