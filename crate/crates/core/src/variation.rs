//! Finite-difference check of the Schwarzian variational formula for
//! deformations by a Beltrami differential supported inside one loop.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loops::{Loop, TwoLoopConfig};
use crate::potentials::lpot_two;
use crate::quadrature::gauss_legendre_interval;
use crate::uniformize::{ConformalMapSeries, MapKind};

type C = Complex64;

const RADIAL_NODES: usize = 16;
const ANGULAR_NODES: usize = 64;

/// ν(w) = amplitude · (1 − |w − center|²/radius²)³ on the disk of the given
/// radius, zero outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeltramiBump {
    pub center: C,
    pub radius: f64,
    pub amplitude: C,
}

impl BeltramiBump {
    pub fn new(center: C, radius: f64, amplitude: C) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::validation(format!("bump radius must be positive, got {radius}")));
        }
        if amplitude.norm() > 0.1 {
            return Err(Error::validation(format!("bump amplitude {} exceeds 0.1", amplitude.norm())));
        }
        Ok(BeltramiBump { center, radius, amplitude })
    }

    pub fn value(&self, w: C) -> C {
        let t2 = (w - self.center).norm_sqr() / (self.radius * self.radius);
        if t2 >= 1.0 {
            return C::new(0.0, 0.0);
        }
        self.amplitude * (1.0 - t2).powi(3)
    }

    /// ∬ ν dA.
    pub fn mass(&self) -> C {
        self.amplitude * (PI * self.radius * self.radius / 4.0)
    }

    /// Quadrature nodes (w, weight·ν(w)) over the support.
    pub fn nodes(&self) -> Vec<(C, C)> {
        let (t, wt) = gauss_legendre_interval(RADIAL_NODES, 0.0, self.radius);
        let dphi = 2.0 * PI / ANGULAR_NODES as f64;
        let mut out = Vec::with_capacity(RADIAL_NODES * ANGULAR_NODES);
        for (&rho, &w) in t.iter().zip(&wt) {
            for j in 0..ANGULAR_NODES {
                let z = self.center + C::from_polar(rho, (j as f64 + 0.5) * dphi);
                out.push((z, self.value(z) * (w * rho * dphi)));
            }
        }
        out
    }

    fn distance_to(&self, l: &Loop) -> f64 {
        l.samples(1024).iter().map(|p| (p - self.center).norm()).fold(f64::INFINITY, f64::min) - self.radius
    }
}

/// First-order solution ω = id + εV of the Beltrami equation, with
/// V(z) = −(1/π) ∬ ν(w)/(w − z) dA(w) evaluated by quadrature.
#[derive(Debug, Clone)]
pub struct Deformation {
    pub nu: BeltramiBump,
    pub eps: f64,
    nodes: Vec<(C, C)>,
}

impl Deformation {
    pub fn apply(&self, z: C) -> C {
        if self.eps == 0.0 {
            return z;
        }
        let v: C = self.nodes.iter().map(|&(w, m)| m / (w - z)).sum();
        z - v * (self.eps / PI)
    }

    /// Off the support the radial profile gives V(z) = ∬ν / (π(z − center)).
    pub fn apply_closed_form(&self, z: C) -> C {
        z + self.nu.mass() * self.eps / (PI * (z - self.nu.center))
    }

    pub fn apply_to_loop(&self, l: &Loop) -> Result<Loop> {
        if self.nu.distance_to(l) <= 0.0 {
            return Err(Error::validation("Beltrami support meets a loop"));
        }
        l.map(|z| self.apply(z))
    }
}

pub fn first_order_deformation(nu: &BeltramiBump, eps: f64) -> Deformation {
    Deformation { nu: *nu, eps, nodes: nu.nodes() }
}

/// Finite difference, right-hand side and relative error of the variational formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationCheck {
    pub fd: f64,
    /// Real part of −(1/3π)∬ ν S[f⁻¹]; the derivative along the real
    /// deformation parameter.
    pub rhs: f64,
    pub rhs_imag: f64,
    /// The same pairing by the mean-value property of the holomorphic S[f⁻¹].
    pub rhs_mean_value: f64,
    /// |fd − rhs| / |rhs|, or the absolute difference when rhs = 0.
    pub rel_err: f64,
}

/// Which complementary disk of `cfg` holds the support of ν.
fn supporting_map<'u>(cfg: &'u TwoLoopConfig, nu: &BeltramiBump) -> Result<&'u ConformalMapSeries> {
    let d1 = nu.distance_to(cfg.gamma1());
    let d2 = nu.distance_to(cfg.gamma2());
    if d1 <= 0.0 || d2 <= 0.0 {
        return Err(Error::validation("Beltrami support meets a loop"));
    }
    let u = cfg.uniformization()?;
    if cfg.gamma1().winding_number(nu.center) != 0 {
        Ok(&u.f1)
    } else if cfg.gamma2().winding_number(nu.center) == 0 {
        Ok(&u.f2)
    } else {
        Err(Error::validation("Beltrami support lies in the annulus; the modulus would change"))
    }
}

fn in_domain(f: &ConformalMapSeries, z: C) -> bool {
    match f.kind {
        MapKind::InteriorDisk => z.norm() < f.radius,
        MapKind::ExteriorDisk => z.norm() > 1.0,
        MapKind::Annulus => z.norm() > f.radius && z.norm() < 1.0,
    }
}

fn newton(f: &ConformalMapSeries, w: C, mut z: C) -> Option<C> {
    let scale = w.norm().max(1.0);
    for _ in 0..60 {
        let step = (f.eval(z) - w) / f.derivative(z, 1);
        let mut next = z - step;
        let mut damp = 1.0;
        while !in_domain(f, next) && damp > 1e-6 {
            damp *= 0.5;
            next = z - step * damp;
        }
        if !in_domain(f, next) || !next.re.is_finite() {
            return None;
        }
        z = next;
        if step.norm() * damp < 1e-15 * z.norm().max(1.0) && (f.eval(z) - w).norm() < 1e-12 * scale {
            return Some(z);
        }
    }
    ((f.eval(z) - w).norm() < 1e-11 * scale).then_some(z)
}

/// Preimage of `w` under `f`, by continuation from the leading-order guess.
pub fn invert(f: &ConformalMapSeries, w: C) -> Result<C> {
    let lead = f.derivative(C::new(0.0, 0.0), 1);
    let guess = match f.kind {
        MapKind::ExteriorDisk => (w - f.pos[0]) / f.pos[1],
        _ => w / lead,
    };
    if let Some(z) = in_domain(f, guess).then(|| newton(f, w, guess)).flatten() {
        return Ok(z);
    }
    let start = match f.kind {
        MapKind::ExteriorDisk => guess / guess.norm() * guess.norm().max(4.0),
        _ => C::new(0.0, 0.0),
    };
    let w0 = f.eval(start);
    let mut z = start;
    let steps = 64;
    for s in 1..=steps {
        let target = w0 + (w - w0) * (s as f64 / steps as f64);
        z = newton(f, target, z).ok_or(Error::NonConvergence { what: "map inversion", iterations: s, residual: f64::NAN })?;
    }
    Ok(z)
}

/// S[f⁻¹](w) = −S[f](ζ)/f′(ζ)² with ζ = f⁻¹(w).
pub fn inverse_schwarzian(f: &ConformalMapSeries, w: C) -> Result<C> {
    let z = invert(f, w)?;
    let d = f.derivative(z, 1);
    Ok(-f.schwarzian(z) / (d * d))
}

/// −(1/3π) ∬ ν S[f⁻¹] dA over the support of ν.
pub fn schwarzian_pairing(f: &ConformalMapSeries, nu: &BeltramiBump) -> Result<C> {
    let mut acc = C::new(0.0, 0.0);
    for (w, m) in nu.nodes() {
        acc += m * inverse_schwarzian(f, w)?;
    }
    Ok(-acc / (3.0 * PI))
}

/// The bump is placed in the coordinates of `cfg.gamma1()` and `cfg.gamma2()`,
/// which differ from the input ones by `cfg.origin()`.
pub fn variation_check(cfg: &TwoLoopConfig, nu: &BeltramiBump, eps: f64) -> Result<VariationCheck> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::validation(format!("step must be positive, got {eps}")));
    }
    let f = supporting_map(cfg, nu)?;
    let pairing = schwarzian_pairing(f, nu)?;
    let mean = -nu.mass() * inverse_schwarzian(f, nu.center)? / (3.0 * PI);

    let lpot_at = |e: f64| -> Result<f64> {
        let d = first_order_deformation(nu, e);
        let g1 = d.apply_to_loop(cfg.gamma1())?;
        let g2 = d.apply_to_loop(cfg.gamma2())?;
        Ok(lpot_two(&TwoLoopConfig::new(g1, g2)?)?.total)
    };
    let fd = (lpot_at(eps)? - lpot_at(-eps)?) / (2.0 * eps);
    if !fd.is_finite() {
        return Err(Error::NonFinite("finite difference".into()));
    }
    let rhs = pairing.re;
    let rel_err = if rhs == 0.0 { (fd - rhs).abs() } else { (fd - rhs).abs() / rhs.abs() };
    Ok(VariationCheck { fd, rhs, rhs_imag: pairing.im, rhs_mean_value: mean.re, rel_err })
}
