//! Loops as trigonometric polynomials and validated two-loop configurations
//! in standard position: 0 inside the first loop, ∞ outside the second.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{evaluate_on_grid, fourier_coefficients, frequency};
use crate::uniformize::{self, UniformizeOptions, Uniformization};

type C = Complex64;

/// Largest admissible trigonometric degree.
pub const MAX_DEGREE: usize = 256;

/// Relative size below which refitted Fourier coefficients are dropped.
pub const FIT_TOL: f64 = 1e-15;

/// A closed curve θ ↦ Σ_{|k|≤M} c_k e^{ikθ}, counterclockwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LoopJson", into = "LoopJson")]
pub struct Loop {
    coeffs: Vec<C>,
}

#[derive(Serialize, Deserialize)]
struct LoopJson {
    coeffs: Vec<[f64; 2]>,
    degree: usize,
}

impl TryFrom<LoopJson> for Loop {
    type Error = Error;

    fn try_from(j: LoopJson) -> Result<Self> {
        if j.coeffs.len() != 2 * j.degree + 1 {
            return Err(Error::validation(format!(
                "loop of degree {} needs {} coefficients, got {}",
                j.degree,
                2 * j.degree + 1,
                j.coeffs.len()
            )));
        }
        Loop::new(j.coeffs.iter().map(|c| C::new(c[0], c[1])).collect())
    }
}

impl From<Loop> for LoopJson {
    fn from(l: Loop) -> Self {
        LoopJson { degree: l.degree(), coeffs: l.coeffs.iter().map(|c| [c.re, c.im]).collect() }
    }
}

impl Loop {
    /// Coefficients ordered c_{−M}, ..., c_M.
    pub fn new(coeffs: Vec<C>) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::validation("loop coefficient vector must have odd length 2M+1"));
        }
        if coeffs.len() > 2 * MAX_DEGREE + 1 {
            return Err(Error::validation(format!("loop degree exceeds {MAX_DEGREE}")));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::validation("loop coefficients must be finite"));
        }
        Ok(Loop { coeffs })
    }

    pub fn circle(center: C, radius: f64) -> Self {
        Loop { coeffs: vec![C::new(0.0, 0.0), center, C::new(radius, 0.0)] }
    }

    /// Build from (k, c_k) pairs.
    pub fn from_terms(terms: &[(i64, C)]) -> Result<Self> {
        let m = terms.iter().map(|t| t.0.unsigned_abs() as usize).max().unwrap_or(0).max(1);
        let mut coeffs = vec![C::new(0.0, 0.0); 2 * m + 1];
        for &(k, c) in terms {
            coeffs[(k + m as i64) as usize] += c;
        }
        Loop::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() / 2
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> C {
        let idx = k + self.degree() as i64;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            C::new(0.0, 0.0)
        } else {
            self.coeffs[idx as usize]
        }
    }

    fn terms(&self) -> impl Iterator<Item = (i64, C)> + '_ {
        let m = self.degree() as i64;
        self.coeffs.iter().enumerate().map(move |(j, &c)| (j as i64 - m, c))
    }

    pub fn eval(&self, theta: f64) -> C {
        self.eval_with_derivative(theta).0
    }

    /// γ(θ) and γ′(θ).
    pub fn eval_with_derivative(&self, theta: f64) -> (C, C) {
        let mut v = C::new(0.0, 0.0);
        let mut d = C::new(0.0, 0.0);
        for (k, c) in self.terms() {
            let e = C::from_polar(1.0, k as f64 * theta) * c;
            v += e;
            d += e * C::new(0.0, k as f64);
        }
        (v, d)
    }

    /// γ at θ_j = 2πj/n.
    pub fn samples(&self, n: usize) -> Vec<C> {
        evaluate_on_grid(self.terms(), n)
    }

    /// γ′ at θ_j = 2πj/n.
    pub fn derivative_samples(&self, n: usize) -> Vec<C> {
        evaluate_on_grid(self.terms().map(|(k, c)| (k, c * C::new(0.0, k as f64))), n)
    }

    /// Least-squares trigonometric fit of uniform samples (the discrete
    /// Fourier transform), truncated where coefficients drop below
    /// `FIT_TOL` relative to the largest.
    pub fn from_samples(samples: &[C]) -> Result<Self> {
        let n = samples.len();
        let c = fourier_coefficients(samples);
        let scale = c.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        let band = (n / 2).saturating_sub(1).min(MAX_DEGREE);
        let mut degree = 1;
        let mut edge: f64 = 0.0;
        for (j, cj) in c.iter().enumerate() {
            let k = frequency(j, n).unsigned_abs() as usize;
            if k > band {
                edge = edge.max(cj.norm());
            } else if cj.norm() > FIT_TOL * scale {
                degree = degree.max(k);
            }
        }
        if edge > 1e3 * FIT_TOL * scale || degree + 8 > band {
            return Err(Error::validation(format!(
                "trigonometric fit did not resolve the curve with {n} samples (tail {:.2e})",
                edge / scale
            )));
        }
        let mut coeffs = vec![C::new(0.0, 0.0); 2 * degree + 1];
        for (j, &cj) in c.iter().enumerate() {
            let k = frequency(j, n);
            if k.unsigned_abs() as usize <= degree {
                coeffs[(k + degree as i64) as usize] = cj;
            }
        }
        Loop::new(coeffs)
    }

    /// Image under a smooth map, refitted on progressively finer samples.
    pub fn map<F: Fn(C) -> C>(&self, f: F) -> Result<Self> {
        let mut n = (8 * (2 * self.degree() + 1)).next_power_of_two().max(256);
        loop {
            let samples: Vec<C> = self.samples(n).into_iter().map(&f).collect();
            if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite("mapped loop samples".into()));
            }
            match Loop::from_samples(&samples) {
                Ok(l) => return Ok(l),
                Err(e) if n >= 4 * MAX_DEGREE => return Err(e),
                Err(_) => n *= 2,
            }
        }
    }

    /// Same curve traversed in the opposite direction.
    pub fn reversed(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Loop { coeffs }
    }

    pub fn translated(&self, shift: C) -> Self {
        let mut l = self.clone();
        let m = l.degree();
        l.coeffs[m] += shift;
        l
    }

    pub fn scaled(&self, s: C) -> Self {
        Loop { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    fn sample_count(&self) -> usize {
        (8 * self.degree()).max(256)
    }

    /// Winding number of the curve around `p`.
    pub fn winding_number(&self, p: C) -> i64 {
        let n = self.sample_count().max(1024);
        let s = self.samples(n);
        let mut total = 0.0;
        for j in 0..n {
            let a = s[j] - p;
            let b = s[(j + 1) % n] - p;
            total += (b / a).arg();
        }
        (total / (2.0 * PI)).round() as i64
    }

    /// Signed enclosed area, exact for trigonometric polynomials: π Σ k|c_k|².
    pub fn signed_area(&self) -> f64 {
        PI * self.terms().map(|(k, c)| k as f64 * c.norm_sqr()).sum::<f64>()
    }

    /// Area centroid of the enclosed region, from ∬ z dA = (1/2i) ∮ |z|² dz.
    pub fn centroid(&self) -> C {
        let n = (4 * (2 * self.degree() + 1)).max(64);
        let z = self.samples(n);
        let dz = self.derivative_samples(n);
        let integral: C = z.iter().zip(&dz).map(|(z, d)| d * z.norm_sqr()).sum::<C>() * (2.0 * PI / n as f64);
        integral / C::new(0.0, 2.0) / self.signed_area()
    }

    /// If the loop is a circle |z − c| = R traversed once, return (c, R).
    pub fn as_circle(&self) -> Option<(C, f64)> {
        let r = self.coeff(1).norm();
        let scale = r.max(self.coeff(0).norm());
        let others = self.terms().filter(|&(k, _)| k != 0 && k != 1).map(|(_, c)| c.norm()).fold(0.0, f64::max);
        (r > 0.0 && others <= 1e-14 * scale).then_some((self.coeff(0), r))
    }

    /// Geometric decay rate ρ of |c_k| ≲ Cρ^{|k|} from a log-linear fit;
    /// 0 when fewer than two nonzero harmonics beyond k = 0 are present.
    pub fn decay_rate(&self) -> f64 {
        let scale = self.coeffs.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        let mut best = std::collections::BTreeMap::<u64, f64>::new();
        for (k, c) in self.terms() {
            if k != 0 && c.norm() > 1e-15 * scale {
                let e = best.entry(k.unsigned_abs()).or_insert(0.0);
                *e = e.max(c.norm());
            }
        }
        if best.len() < 2 {
            return 0.0;
        }
        let pts: Vec<(f64, f64)> = best.iter().map(|(&k, &v)| (k as f64, v.ln())).collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        (sxy / sxx).exp()
    }
}

/// Diagnostics for one loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopDiagnostics {
    pub simple: bool,
    pub tangent_winding: i64,
    pub min_speed: f64,
    pub decay_rate: f64,
}

/// Validation report for a configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub gamma1: LoopDiagnostics,
    pub gamma2: LoopDiagnostics,
    /// Minimum sampled distance between the loops.
    pub disjointness_margin: f64,
    /// Bound on how far the curves may come between samples.
    pub tube_bound: f64,
    pub contains_origin: bool,
    pub encloses_infinity: bool,
    pub nested: bool,
}

impl Diagnostics {
    pub fn passed(&self) -> bool {
        let ok = |d: &LoopDiagnostics| d.simple && d.tangent_winding == 1 && d.min_speed > 0.0;
        ok(&self.gamma1)
            && ok(&self.gamma2)
            && self.disjointness_margin > self.tube_bound
            && self.contains_origin
            && self.encloses_infinity
            && self.nested
    }

    /// First failed check, phrased for an error message.
    pub fn failure(&self) -> Option<String> {
        let loops = [("gamma1", &self.gamma1), ("gamma2", &self.gamma2)];
        for (name, d) in loops {
            if !d.simple {
                return Some(format!("{name} self-intersects"));
            }
            if d.tangent_winding != 1 {
                return Some(format!("{name} has tangent winding {} (expected 1)", d.tangent_winding));
            }
            if !(d.min_speed > 0.0) {
                return Some(format!("{name} has a vanishing derivative"));
            }
        }
        if !(self.disjointness_margin > self.tube_bound) {
            return Some(format!(
                "loops are not certified disjoint (margin {:.3e}, tube bound {:.3e})",
                self.disjointness_margin, self.tube_bound
            ));
        }
        if !self.contains_origin {
            return Some("0 is not enclosed by gamma1".into());
        }
        if !self.encloses_infinity {
            return Some("gamma2 does not separate gamma1 from infinity".into());
        }
        if !self.nested {
            return Some("gamma1 does not lie inside gamma2".into());
        }
        None
    }
}

fn segments_cross(a: C, b: C, c: C, d: C) -> bool {
    let cross = |u: C, v: C| u.re * v.im - u.im * v.re;
    let d1 = cross(b - a, c - a);
    let d2 = cross(b - a, d - a);
    let d3 = cross(d - c, a - c);
    let d4 = cross(d - c, b - c);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

fn loop_diagnostics(l: &Loop) -> LoopDiagnostics {
    let n = l.sample_count();
    let s = l.samples(n);
    let ds = l.derivative_samples(n);
    let mut simple = true;
    'outer: for i in 0..n {
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_cross(s[i], s[(i + 1) % n], s[j], s[(j + 1) % n]) {
                simple = false;
                break 'outer;
            }
        }
    }
    let mut turn = 0.0;
    for j in 0..n {
        turn += (ds[(j + 1) % n] / ds[j]).arg();
    }
    LoopDiagnostics {
        simple,
        tangent_winding: (turn / (2.0 * PI)).round() as i64,
        min_speed: ds.iter().map(|d| d.norm()).fold(f64::INFINITY, f64::min),
        decay_rate: l.decay_rate(),
    }
}

/// Check simplicity, disjointness, containment and smoothness.
pub fn validate_loops(gamma1: &Loop, gamma2: &Loop) -> Diagnostics {
    let n1 = gamma1.sample_count();
    let n2 = gamma2.sample_count();
    let s1 = gamma1.samples(n1);
    let s2 = gamma2.samples(n2);
    let mut margin = f64::INFINITY;
    for a in &s1 {
        for b in &s2 {
            margin = margin.min((a - b).norm());
        }
    }
    let speed = |l: &Loop, n: usize| l.derivative_samples(n).iter().map(|d| d.norm()).fold(0.0, f64::max);
    // a point of each curve lies within (h/2)·max|γ′| of a sample
    let tube = PI / n1 as f64 * speed(gamma1, n1) + PI / n2 as f64 * speed(gamma2, n2);
    Diagnostics {
        gamma1: loop_diagnostics(gamma1),
        gamma2: loop_diagnostics(gamma2),
        disjointness_margin: margin,
        tube_bound: tube,
        contains_origin: gamma1.winding_number(C::new(0.0, 0.0)) == 1,
        encloses_infinity: gamma2.winding_number(C::new(0.0, 0.0)) == 1,
        nested: gamma2.winding_number(s1[0]) == 1 && gamma1.winding_number(s2[0]) == 0,
    }
}

/// Two disjoint loops in standard position with an optional cached
/// uniformization.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ConfigJson")]
pub struct TwoLoopConfig {
    gamma1: Loop,
    gamma2: Loop,
    #[serde(skip)]
    origin: C,
    #[serde(skip)]
    cache: OnceLock<Uniformization>,
}

#[derive(Deserialize)]
struct ConfigJson {
    gamma1: Loop,
    gamma2: Loop,
}

impl TryFrom<ConfigJson> for TwoLoopConfig {
    type Error = Error;

    fn try_from(j: ConfigJson) -> Result<Self> {
        TwoLoopConfig::new(j.gamma1, j.gamma2)
    }
}

impl PartialEq for TwoLoopConfig {
    fn eq(&self, other: &Self) -> bool {
        self.gamma1 == other.gamma1 && self.gamma2 == other.gamma2
    }
}

impl TwoLoopConfig {
    /// Validate and, if 0 is outside `gamma1` or much closer to it than the
    /// area centroid of the inner domain is, translate both loops so that the
    /// centroid sits at 0. The conformal maps converge slowly when the origin
    /// is near the inner loop.
    pub fn new(gamma1: Loop, gamma2: Loop) -> Result<Self> {
        let zero = C::new(0.0, 0.0);
        let origin = if gamma1.winding_number(zero) == 1 {
            let c = gamma1.centroid();
            let clearance = |p: C| gamma1.samples(256).iter().map(|z| (z - p).norm()).fold(f64::INFINITY, f64::min);
            if gamma1.winding_number(c) == 1 && clearance(zero) < 0.5 * clearance(c) {
                c
            } else {
                zero
            }
        } else {
            gamma1.centroid()
        };
        let (gamma1, gamma2) = if origin == zero {
            (gamma1, gamma2)
        } else {
            (gamma1.translated(-origin), gamma2.translated(-origin))
        };
        let diag = validate_loops(&gamma1, &gamma2);
        if let Some(msg) = diag.failure() {
            return Err(Error::Validation(msg));
        }
        Ok(TwoLoopConfig { gamma1, gamma2, origin, cache: OnceLock::new() })
    }

    /// The point of the input coordinates that was moved to 0; the loops and
    /// maps of this configuration live in coordinates shifted by it.
    pub fn origin(&self) -> C {
        self.origin
    }

    pub fn gamma1(&self) -> &Loop {
        &self.gamma1
    }

    pub fn gamma2(&self) -> &Loop {
        &self.gamma2
    }

    pub fn validate(&self) -> Diagnostics {
        validate_loops(&self.gamma1, &self.gamma2)
    }

    /// Uniformization with default options, computed once.
    pub fn uniformization(&self) -> Result<&Uniformization> {
        self.uniformization_with(&UniformizeOptions::default())
    }

    /// Uniformization computed once; later calls return the cached value
    /// whatever options they pass.
    pub fn uniformization_with(&self, opts: &UniformizeOptions) -> Result<&Uniformization> {
        if let Some(u) = self.cache.get() {
            return Ok(u);
        }
        let u = uniformize::annulus_uniformize(self, opts)?;
        Ok(self.cache.get_or_init(|| u))
    }

    pub fn is_cached(&self) -> bool {
        self.cache.get().is_some()
    }

    /// Modulus of the annulus between the loops.
    pub fn modulus(&self) -> Result<f64> {
        Ok(self.uniformization()?.tau)
    }
}

/// Concentric circles e^{−2πτ}S¹ and S¹ with their exact uniformization.
pub fn make_circle_pair(tau: f64) -> Result<TwoLoopConfig> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::domain(format!("modulus must be positive, got {tau}")));
    }
    let cfg = TwoLoopConfig::new(
        Loop::circle(C::new(0.0, 0.0), (-2.0 * PI * tau).exp()),
        Loop::circle(C::new(0.0, 0.0), 1.0),
    )?;
    let _ = cfg.cache.set(uniformize::concentric_uniformization(tau, 1.0));
    Ok(cfg)
}

/// z ↦ (az + b)/(cz + d) with ad − bc = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    pub a: C,
    pub b: C,
    pub c: C,
    pub d: C,
}

impl MoebiusMap {
    /// Normalize to unit determinant.
    pub fn new(a: C, b: C, c: C, d: C) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm() < 1e-300 || !det.re.is_finite() || !det.im.is_finite() {
            return Err(Error::domain("Möbius map has zero determinant"));
        }
        let s = det.sqrt();
        Ok(MoebiusMap { a: a / s, b: b / s, c: c / s, d: d / s })
    }

    pub fn identity() -> Self {
        let one = C::new(1.0, 0.0);
        let zero = C::new(0.0, 0.0);
        MoebiusMap { a: one, b: zero, c: zero, d: one }
    }

    pub fn apply(&self, z: C) -> C {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    pub fn inverse(&self) -> Self {
        MoebiusMap { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// self ∘ other.
    pub fn compose(&self, other: &MoebiusMap) -> Self {
        MoebiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// z ↦ s·e^{iα}(z + a)/(1 + āz), followed by z ↦ z/(1 + cz). With |a|
    /// and |c| below 1 this keeps configurations near the unit circle
    /// well conditioned.
    pub fn normalized(a: C, scale: f64, angle: f64, c: C) -> Result<Self> {
        let one = C::new(1.0, 0.0);
        let zero = C::new(0.0, 0.0);
        let rot = C::from_polar(scale, angle);
        let disk = MoebiusMap::new(rot, rot * a, a.conj(), one)?;
        let tilt = MoebiusMap::new(one, zero, c, one)?;
        Ok(tilt.compose(&disk))
    }

    /// Preimage of ∞, if finite.
    pub fn pole(&self) -> Option<C> {
        (self.c.norm() > 0.0).then(|| -self.d / self.c)
    }
}

/// Transform both loops and restore standard position.
///
/// If the pole of `m` lies inside the first loop the image loops swap roles
/// and are re-oriented; a pole in the annulus is rejected.
pub fn apply_moebius(m: &MoebiusMap, cfg: &TwoLoopConfig) -> Result<TwoLoopConfig> {
    let pole_in_d1 = match m.pole() {
        Some(p) => {
            if cfg.gamma1.winding_number(p) != 0 {
                true
            } else if cfg.gamma2.winding_number(p) != 0 {
                return Err(Error::validation("Möbius pole lies in the annulus between the loops"));
            } else {
                false
            }
        }
        None => false,
    };
    let g1 = cfg.gamma1.map(|z| m.apply(z))?;
    let g2 = cfg.gamma2.map(|z| m.apply(z))?;
    let (g1, g2) = if pole_in_d1 { (g2.reversed(), g1.reversed()) } else { (g1, g2) };
    TwoLoopConfig::new(g1, g2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perturbed(eps: f64) -> Loop {
        // e^{iθ}(1 + ε cos 3θ)
        Loop::from_terms(&[(1, C::new(1.0, 0.0)), (4, C::new(eps / 2.0, 0.0)), (-2, C::new(eps / 2.0, 0.0))]).unwrap()
    }

    #[test]
    fn circle_pair_construction() {
        let cfg = make_circle_pair(1.0).unwrap();
        assert!((cfg.gamma1().coeff(1).re - (-2.0 * PI).exp()).abs() < 1e-16);
        assert_eq!(cfg.gamma2().coeff(1).re, 1.0);
        assert!(cfg.is_cached());
        assert_eq!(cfg.modulus().unwrap(), 1.0);
        let cfg = make_circle_pair(0.5).unwrap();
        assert!((cfg.gamma1().coeff(1).re - (-PI).exp()).abs() < 1e-16);
        assert!(make_circle_pair(0.0).is_err());
    }

    #[test]
    fn circle_pair_diagnostics() {
        let cfg = make_circle_pair(1.0).unwrap();
        let d = cfg.validate();
        assert!(d.passed());
        assert!((d.disjointness_margin - (1.0 - (-2.0 * PI).exp())).abs() < 1e-14);
    }

    #[test]
    fn overlapping_circles_fail() {
        let g1 = Loop::circle(C::new(0.0, 0.0), 1.0);
        let g2 = Loop::circle(C::new(0.5, 0.0), 1.0);
        let d = validate_loops(&g1, &g2);
        assert!(!d.passed());
        assert!(d.disjointness_margin < d.tube_bound);
        assert!(TwoLoopConfig::new(g1, g2).is_err());
    }

    #[test]
    fn perturbed_circle_passes() {
        let g1 = Loop::circle(C::new(0.0, 0.0), (-2.0 * PI).exp());
        let d = validate_loops(&g1, &perturbed(0.05));
        assert!(d.passed());
        assert!(d.disjointness_margin > 0.9);
    }

    #[test]
    fn figure_eight_is_not_simple() {
        // e^{iθ} + 1.5 e^{2iθ}... winds twice around parts of itself
        let l = Loop::from_terms(&[(1, C::new(1.0, 0.0)), (2, C::new(1.5, 0.0))]).unwrap();
        assert!(!loop_diagnostics(&l).simple);
    }

    #[test]
    fn area_and_centroid() {
        let l = Loop::circle(C::new(0.3, -0.2), 2.0);
        assert!((l.signed_area() - 4.0 * PI).abs() < 1e-12);
        assert!((l.centroid() - C::new(0.3, -0.2)).norm() < 1e-12);
        assert!((l.reversed().signed_area() + 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn translation_into_standard_position() {
        let g1 = Loop::circle(C::new(5.0, 0.0), 0.5);
        let g2 = Loop::circle(C::new(5.0, 0.0), 2.0);
        let cfg = TwoLoopConfig::new(g1, g2).unwrap();
        assert!(cfg.gamma1().coeff(0).norm() < 1e-12);
        assert!((cfg.origin() - C::new(5.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn origin_near_inner_loop_is_recentred() {
        let near = TwoLoopConfig::new(Loop::circle(C::new(0.28, 0.0), 0.3), Loop::circle(C::new(0.0, 0.0), 2.0)).unwrap();
        assert!((near.origin() - C::new(0.28, 0.0)).norm() < 1e-12);
        let fine = TwoLoopConfig::new(Loop::circle(C::new(0.1, 0.0), 0.3), Loop::circle(C::new(0.0, 0.0), 2.0)).unwrap();
        assert_eq!(fine.origin(), C::new(0.0, 0.0));
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let l = perturbed(0.05);
        let s = serde_json::to_string(&l).unwrap();
        assert!(s.contains("\"degree\":4"));
        let back: Loop = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
        let bad = r#"{"coeffs": [[0,0],[1,0]], "degree": 1}"#;
        assert!(serde_json::from_str::<Loop>(bad).is_err());
    }

    #[test]
    fn identity_moebius_is_exact() {
        let cfg = make_circle_pair(1.0).unwrap();
        let out = apply_moebius(&MoebiusMap::identity(), &cfg).unwrap();
        for k in -1..=1 {
            assert!((out.gamma1().coeff(k) - cfg.gamma1().coeff(k)).norm() < 1e-14);
            assert!((out.gamma2().coeff(k) - cfg.gamma2().coeff(k)).norm() < 1e-14);
        }
    }

    #[test]
    fn moebius_roundtrip() {
        let g1 = Loop::circle(C::new(0.0, 0.0), 0.2);
        let cfg = TwoLoopConfig::new(g1, perturbed(0.05)).unwrap();
        let one = C::new(1.0, 0.0);
        let m = MoebiusMap::new(one, C::new(0.05, 0.02), C::new(0.1, -0.05), one).unwrap();
        let there = apply_moebius(&m, &cfg).unwrap();
        let back = apply_moebius(&m.inverse(), &there).unwrap();
        for (a, b) in [(cfg.gamma1(), back.gamma1()), (cfg.gamma2(), back.gamma2())] {
            let deg = a.degree().max(b.degree()) as i64;
            for k in -deg..=deg {
                assert!((a.coeff(k) - b.coeff(k)).norm() < 1e-10, "k={k}");
            }
        }
    }

    #[test]
    fn pole_inside_first_loop_swaps() {
        let cfg = make_circle_pair(0.3).unwrap();
        // z ↦ 1/z sends D1 to a neighbourhood of ∞
        let zero = C::new(0.0, 0.0);
        let one = C::new(1.0, 0.0);
        let m = MoebiusMap::new(zero, one, one, zero).unwrap();
        let out = apply_moebius(&m, &cfg).unwrap();
        assert!((out.gamma1().coeff(1).norm() - 1.0).abs() < 1e-12);
        assert!((out.gamma2().coeff(1).norm() - (0.6 * PI).exp()).abs() < 1e-9);
        // pole in the annulus
        let m = MoebiusMap::new(one, zero, one, C::new(-0.5, 0.0)).unwrap();
        assert!(apply_moebius(&m, &cfg).is_err());
    }

    #[test]
    fn decay_rate_of_analytic_curve() {
        let l = Loop::circle(C::new(0.0, 0.0), 1.0).map(|z| z + 0.1 * z * z / (1.0 - 0.5 * z)).unwrap();
        let rho = l.decay_rate();
        assert!(rho > 0.4 && rho < 0.6, "rho={rho}");
    }
}
