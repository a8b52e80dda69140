//! Truncated Laurent series for the uniformizing maps.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quadrature::evaluate_on_grid;
use crate::series;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    /// Defined on |z| < radius, f(0) = 0, f′(0) > 0.
    InteriorDisk,
    /// Defined on |z| > 1, f(∞) = ∞, f′(∞) > 0.
    ExteriorDisk,
    /// Defined on radius < |z| < 1.
    Annulus,
}

/// A conformal map stored as a scaled Laurent series
///
/// f(z) = Σ_{k≥0} pos[k] (z/s₊)^k + Σ_{m≥1} neg[m−1] (s₋/z)^m,
///
/// together with H = log(f(z)/z) in the same layout. The scales are
/// s₊ = radius for interior maps and 1 otherwise, s₋ = radius for annulus
/// maps and 1 otherwise, so every scaled power is bounded by 1 on the
/// closed domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformalMapSeries {
    pub kind: MapKind,
    /// Interior: disk radius. Annulus: inner radius e^{−2πτ}. Exterior: 1.
    pub radius: f64,
    pub pos: Vec<C>,
    pub neg: Vec<C>,
    pub log_pos: Vec<C>,
    pub log_neg: Vec<C>,
}

/// Values of a map and its derivatives on one ring of uniformly spaced angles.
#[derive(Debug, Clone)]
pub struct RingValues {
    pub z: Vec<C>,
    pub f: Vec<C>,
    pub d1: Vec<C>,
    pub d2: Vec<C>,
    pub d3: Vec<C>,
    /// H′ = f′/f − 1/z.
    pub dlog: Vec<C>,
}

fn falling(k: usize, j: usize) -> f64 {
    (0..j).map(|i| k as f64 - i as f64).product()
}

fn rising(m: usize, j: usize) -> f64 {
    (0..j).map(|i| m as f64 + i as f64).product()
}

impl ConformalMapSeries {
    pub fn pos_scale(&self) -> f64 {
        match self.kind {
            MapKind::InteriorDisk => self.radius,
            _ => 1.0,
        }
    }

    pub fn neg_scale(&self) -> f64 {
        match self.kind {
            MapKind::Annulus => self.radius,
            _ => 1.0,
        }
    }

    /// Interior map z ↦ F(z/R) from F(w) = w·exp(h(w)) on the unit disk.
    pub fn interior(radius: f64, h: &[C]) -> Self {
        let e = series::exp(h, h.len());
        let mut pos = vec![C::new(0.0, 0.0)];
        pos.extend_from_slice(&e);
        let mut log_pos = h.to_vec();
        log_pos[0] -= radius.ln();
        ConformalMapSeries { kind: MapKind::InteriorDisk, radius, pos, neg: vec![], log_pos, log_neg: vec![] }
    }

    /// Exterior map z ↦ z·exp(−g(1/z)) from the interior map u·exp(g(u))
    /// of the inverted domain.
    pub fn exterior_from_inverted(g: &[C]) -> Self {
        let minus_g: Vec<C> = g.iter().map(|c| -c).collect();
        let e = series::exp(&minus_g, g.len() + 1);
        let pos = vec![e[1], e[0]];
        let neg = e[2..].to_vec();
        ConformalMapSeries {
            kind: MapKind::ExteriorDisk,
            radius: 1.0,
            pos,
            neg,
            log_pos: vec![minus_g[0]],
            log_neg: minus_g[1..].to_vec(),
        }
    }

    /// Same map on a rescaled interior domain: z ↦ F(z/R) with the stored
    /// scaled coefficients unchanged.
    pub fn with_interior_radius(&self, radius: f64) -> Self {
        assert_eq!(self.kind, MapKind::InteriorDisk);
        let mut out = self.clone();
        out.log_pos[0] += self.radius.ln() - radius.ln();
        out.radius = radius;
        out
    }

    /// log f′(0) for interior maps, log f′(∞) for exterior maps.
    pub fn log_leading(&self) -> C {
        self.log_pos[0]
    }

    fn eval_parts(pos: &[C], neg: &[C], s: f64, t: f64, z: C, j: usize) -> C {
        let u = z / s;
        let mut acc = C::new(0.0, 0.0);
        for k in (j..pos.len()).rev() {
            acc = acc * u + pos[k] * falling(k, j);
        }
        let mut val = acc / s.powi(j as i32);
        if !neg.is_empty() {
            let v = t / z;
            let mut acc = C::new(0.0, 0.0);
            for m in (1..=neg.len()).rev() {
                acc = acc * v + neg[m - 1] * rising(m, j);
            }
            // acc currently holds Σ c_m v^{m−1}
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            val += acc * v.powi(j as i32 + 1) * (sign / t.powi(j as i32));
        }
        val
    }

    /// The j-th derivative f^{(j)}(z).
    pub fn derivative(&self, z: C, j: usize) -> C {
        Self::eval_parts(&self.pos, &self.neg, self.pos_scale(), self.neg_scale(), z, j)
    }

    pub fn eval(&self, z: C) -> C {
        self.derivative(z, 0)
    }

    /// H(z) = log(f(z)/z).
    pub fn log_eval(&self, z: C) -> C {
        Self::eval_parts(&self.log_pos, &self.log_neg, self.pos_scale(), self.neg_scale(), z, 0)
    }

    /// H′(z).
    pub fn log_derivative(&self, z: C) -> C {
        Self::eval_parts(&self.log_pos, &self.log_neg, self.pos_scale(), self.neg_scale(), z, 1)
    }

    /// Pre-Schwarzian f″/f′.
    pub fn preschwarzian(&self, z: C) -> C {
        self.derivative(z, 2) / self.derivative(z, 1)
    }

    /// Schwarzian f‴/f′ − (3/2)(f″/f′)².
    pub fn schwarzian(&self, z: C) -> C {
        let d1 = self.derivative(z, 1);
        let p = self.derivative(z, 2) / d1;
        self.derivative(z, 3) / d1 - 1.5 * p * p
    }

    fn ring_terms<'a>(
        pos: &'a [C],
        neg: &'a [C],
        s: f64,
        t: f64,
        rho: f64,
        j: usize,
    ) -> impl Iterator<Item = (i64, C)> + 'a {
        let a = rho / s;
        let b = t / rho;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let p = pos
            .iter()
            .enumerate()
            .skip(j)
            .map(move |(k, &c)| (k as i64, c * falling(k, j) * a.powi(k as i32)));
        let q = neg
            .iter()
            .enumerate()
            .map(move |(i, &c)| (-(i as i64 + 1), c * (sign * rising(i + 1, j)) * b.powi(i as i32 + 1)));
        p.chain(q)
    }

    /// All derivatives needed by the energy functionals on the ring |z| = ρ
    /// sampled at `n` angles 2πk/n. Uses FFT synthesis, exact at the nodes.
    pub fn ring(&self, rho: f64, n: usize) -> RingValues {
        let s = self.pos_scale();
        let t = self.neg_scale();
        let z: Vec<C> = (0..n).map(|k| C::from_polar(rho, 2.0 * PI * k as f64 / n as f64)).collect();
        let mut parts: Vec<Vec<C>> = (0..4)
            .map(|j| evaluate_on_grid(Self::ring_terms(&self.pos, &self.neg, s, t, rho, j), n))
            .collect();
        let mut dlog = evaluate_on_grid(Self::ring_terms(&self.log_pos, &self.log_neg, s, t, rho, 1), n);
        for (i, zi) in z.iter().enumerate() {
            let inv = 1.0 / zi;
            parts[1][i] *= inv;
            parts[2][i] *= inv * inv;
            parts[3][i] *= inv * inv * inv;
            dlog[i] *= inv;
        }
        let d3 = parts.pop().unwrap();
        let d2 = parts.pop().unwrap();
        let d1 = parts.pop().unwrap();
        let f = parts.pop().unwrap();
        RingValues { z, f, d1, d2, d3, dlog }
    }

    /// Number of stored coefficients on the positive and negative sides.
    pub fn len(&self) -> (usize, usize) {
        (self.pos.len(), self.neg.len())
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }

    /// The linear map z ↦ a·z on the given domain.
    pub fn linear(kind: MapKind, radius: f64, a: f64) -> Self {
        let zero = C::new(0.0, 0.0);
        let (pos, log_pos) = match kind {
            MapKind::InteriorDisk => (vec![zero, C::new(a * radius, 0.0)], vec![C::new(a.ln(), 0.0)]),
            _ => (vec![zero, C::new(a, 0.0)], vec![C::new(a.ln(), 0.0)]),
        };
        ConformalMapSeries { kind, radius, pos, neg: vec![], log_pos, log_neg: vec![] }
    }
}
