//! Annulus partition functions ("trivializations"), the modulus criterion
//! log g(τ) = −(π/3)cτ + log Z(𝔸_τ), and the classification of its infimum
//! over τ ∈ (0, ∞). Circle-pair minimizers exist exactly when log g has a
//! global minimum.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minimize::{golden_section, least_squares, newton_polish};
use crate::specfun::{virasoro_character, CharacterParams};
use crate::zetadet::{det_annulus, FlatAnnulus};

/// A choice of annulus partition function of central charge c.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "TrivializationJson")]
pub enum Trivialization {
    /// Z = (det_ζ Δ)^{−c/2}.
    Zeta { c: f64 },
    /// Z = Σ n_h χ_{c,h}(e^{−π/τ}) over Verma-module characters.
    Characters { c: f64, weights: Vec<(f64, u64)> },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum TrivializationJson {
    Zeta { c: f64 },
    Characters { c: f64, weights: Vec<(f64, u64)> },
}

impl TryFrom<TrivializationJson> for Trivialization {
    type Error = Error;

    fn try_from(j: TrivializationJson) -> Result<Self> {
        match j {
            TrivializationJson::Zeta { c } => make_zeta_trivialization(c),
            TrivializationJson::Characters { c, weights } => make_character_trivialization(c, weights),
        }
    }
}

fn check_charge(c: f64) -> Result<()> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::validation(format!("central charge must be finite and nonzero, got {c}")));
    }
    Ok(())
}

pub fn make_zeta_trivialization(c: f64) -> Result<Trivialization> {
    check_charge(c)?;
    Ok(Trivialization::Zeta { c })
}

pub fn make_character_trivialization(c: f64, weights: Vec<(f64, u64)>) -> Result<Trivialization> {
    check_charge(c)?;
    if weights.is_empty() {
        return Err(Error::validation("character trivialization needs at least one weight"));
    }
    if let Some(&(h, n)) = weights.iter().find(|&&(h, n)| n == 0 || !h.is_finite()) {
        return Err(Error::validation(format!("invalid weight (h = {h}, n = {n})")));
    }
    Ok(Trivialization::Characters { c, weights })
}

impl Trivialization {
    pub fn name(&self) -> String {
        match self {
            Trivialization::Zeta { c } => format!("zeta(c={c})"),
            Trivialization::Characters { c, weights } => {
                let w: Vec<String> = weights.iter().map(|(h, n)| format!("{n}x{h}")).collect();
                format!("characters(c={c}; {})", w.join(", "))
            }
        }
    }

    pub fn central_charge(&self) -> f64 {
        match self {
            Trivialization::Zeta { c } | Trivialization::Characters { c, .. } => *c,
        }
    }

    /// log Z(𝔸_τ) for the flat annulus of modulus τ.
    pub fn log_z_annulus(&self, tau: f64) -> Result<f64> {
        check_tau(tau)?;
        match self {
            Trivialization::Zeta { c } => {
                let ann = FlatAnnulus::standard(tau)?;
                Ok(-0.5 * c * det_annulus(ann))
            }
            Trivialization::Characters { c, weights } => {
                let q = (-PI / tau).exp();
                if q <= 0.0 {
                    // e^{−π/τ} underflows: take the q → 0 asymptotics exactly
                    return Ok(log_sum_exp(weights.iter().map(|&(h, n)| (n as f64).ln() - (h - c / 24.0) * PI / tau)));
                }
                let terms: Result<Vec<f64>> = weights
                    .iter()
                    .map(|&(h, n)| Ok((n as f64).ln() + virasoro_character(CharacterParams { c: *c, h, q })?))
                    .collect();
                Ok(log_sum_exp(terms?.into_iter()))
            }
        }
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::domain(format!("modulus must be positive, got {tau}")));
    }
    Ok(())
}

fn log_sum_exp<I: Iterator<Item = f64>>(it: I) -> f64 {
    let v: Vec<f64> = it.collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// log g(τ) = −(π/3)cτ + log Z(𝔸_τ).
pub fn criterion(t: &Trivialization, tau: f64) -> Result<f64> {
    Ok(-PI / 3.0 * t.central_charge() * tau + t.log_z_annulus(tau)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    InteriorMinimum,
    InfimumAtZero,
    InfimumAtInfinity,
    /// Monotone with a finite limit at one end that is never attained.
    MonotoneNoMin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub classification: Classification,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_star: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_at_star: Option<f64>,
    pub scan: Vec<(f64, f64)>,
}

/// Least-squares tail model a·x + b + c·log x + d/x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub slope: f64,
    pub constant: f64,
    pub log_coeff: f64,
    pub inverse_coeff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EndBehavior {
    Up,
    Down,
    Finite,
}

const SLOPE_TOL: f64 = 1e-6;
const TAIL_SAMPLES: usize = 24;

impl TailFit {
    fn behavior(&self) -> EndBehavior {
        let lead = if self.slope.abs() > SLOPE_TOL { self.slope } else { self.log_coeff };
        if lead > SLOPE_TOL {
            EndBehavior::Up
        } else if lead < -SLOPE_TOL {
            EndBehavior::Down
        } else {
            EndBehavior::Finite
        }
    }
}

fn fit_tail<F: Fn(f64) -> Result<f64>>(g: F, lo: f64, hi: f64) -> Result<TailFit> {
    let mut rows = Vec::with_capacity(TAIL_SAMPLES);
    let mut ys = Vec::with_capacity(TAIL_SAMPLES);
    for i in 0..TAIL_SAMPLES {
        let x = lo * (hi / lo).powf(i as f64 / (TAIL_SAMPLES - 1) as f64);
        let y = g(x)?;
        if !y.is_finite() {
            return Err(Error::NonFinite(format!("criterion tail at {x}")));
        }
        rows.push(vec![x, 1.0, x.ln(), 1.0 / x]);
        ys.push(y);
    }
    let c = least_squares(&rows, &ys);
    Ok(TailFit { slope: c[0], constant: c[1], log_coeff: c[2], inverse_coeff: c[3] })
}

/// Tail fit of log g in τ on `[lo, hi]` (large-τ behavior).
pub fn fit_large_tau(t: &Trivialization, lo: f64, hi: f64) -> Result<TailFit> {
    fit_tail(|x| criterion(t, x), lo, hi)
}

/// Tail fit of log g in u = 1/τ for τ in `[lo, hi]` (small-τ behavior).
pub fn fit_small_tau(t: &Trivialization, lo: f64, hi: f64) -> Result<TailFit> {
    fit_tail(|u| criterion(t, 1.0 / u), 1.0 / hi, 1.0 / lo)
}

fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64)).collect()
}

fn scan(t: &Trivialization, a: f64, b: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    log_grid(a, b, n)
        .into_iter()
        .map(|tau| {
            let v = criterion(t, tau)?;
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("criterion at τ = {tau}")));
            }
            Ok((tau, v))
        })
        .collect()
}

/// Decide whether log g has a global minimum on (0, ∞).
///
/// The ends are classified from tail fits (the basis matches the exact
/// asymptotics of log φ); the ∞ end is examined first. An interior grid
/// minimum is refined by golden section and Newton steps. When the
/// minimum sits at a range end while the function grows past it, the range
/// is widened geometrically.
pub fn classify_minimizer(t: &Trivialization, tau_range: (f64, f64), grid: usize) -> Result<CriterionResult> {
    let (mut a, mut b) = tau_range;
    if !(a > 0.0 && b > a && b.is_finite()) {
        return Err(Error::validation(format!("invalid τ range ({a}, {b})")));
    }
    if grid < 16 {
        return Err(Error::validation(format!("grid must have at least 16 points, got {grid}")));
    }
    let scan0 = scan(t, a, b, grid)?;
    let large = fit_large_tau(t, b, 2.0 * b)?.behavior();
    let small = fit_small_tau(t, 0.5 * a, a)?.behavior();
    let done = |classification| CriterionResult { classification, tau_star: None, value_at_star: None, scan: scan0.clone() };
    if large == EndBehavior::Down {
        return Ok(done(Classification::InfimumAtInfinity));
    }
    if small == EndBehavior::Down {
        return Ok(done(Classification::InfimumAtZero));
    }

    let mut pts = scan0.clone();
    for _ in 0..64 {
        let i = argmin(&pts);
        if i == pts.len() - 1 && large == EndBehavior::Up {
            b *= 4.0;
        } else if i == 0 && small == EndBehavior::Up {
            a /= 4.0;
        } else {
            break;
        }
        pts = scan(t, a, b, grid)?;
    }
    let i = argmin(&pts);
    if i == 0 || i == pts.len() - 1 {
        let cls = if i == 0 {
            if monotone(&pts) { Classification::MonotoneNoMin } else { Classification::InfimumAtZero }
        } else if monotone(&pts) {
            Classification::MonotoneNoMin
        } else {
            Classification::InfimumAtInfinity
        };
        return Ok(done(cls));
    }

    let g = |x: f64| criterion(t, x).unwrap_or(f64::INFINITY);
    let (lo, hi) = (pts[i - 1].0, pts[i + 1].0);
    let (x0, _) = golden_section(&g, lo, hi, 1e-10);
    let tau_star = newton_polish(&g, x0, lo, hi);
    let value = criterion(t, tau_star)?;

    // a finite end limit below the interior value wins
    let end_limit = |fit: TailFit| fit.constant;
    if large == EndBehavior::Finite && end_limit(fit_large_tau(t, b, 2.0 * b)?) < value {
        return Ok(done(Classification::InfimumAtInfinity));
    }
    if small == EndBehavior::Finite && end_limit(fit_small_tau(t, 0.5 * a, a)?) < value {
        return Ok(done(Classification::InfimumAtZero));
    }
    Ok(CriterionResult {
        classification: Classification::InteriorMinimum,
        tau_star: Some(tau_star),
        value_at_star: Some(value),
        scan: scan0,
    })
}

fn argmin(pts: &[(f64, f64)]) -> usize {
    pts.iter().enumerate().min_by(|x, y| x.1 .1.total_cmp(&y.1 .1)).map(|(i, _)| i).unwrap_or(0)
}

fn monotone(pts: &[(f64, f64)]) -> bool {
    let inc = pts.windows(2).all(|w| w[1].1 >= w[0].1);
    let dec = pts.windows(2).all(|w| w[1].1 <= w[0].1);
    inc || dec
}
