//! Scalar special functions: the Euler function φ(x) = ∏(1 − x^k), the
//! constant ζ′(−1), and logarithms of Virasoro Verma-module characters.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Above this nome the product is replaced by the Dedekind-eta transformation.
pub const MODULAR_SWITCH: f64 = 0.98;

/// Truncation threshold for x^k in the direct product.
const PRODUCT_CUTOFF: f64 = 1e-18;

/// A validated nome `0 <= x < 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct QArgument(f64);

impl QArgument {
    pub fn new(x: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::domain(format!("q-product argument must lie in [0, 1), got {x}")));
        }
        Ok(QArgument(x))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// φ(x) = ∏_{k≥1} (1 − x^k).
///
/// Underflows to `0.0` once log φ(x) drops below about −745 (x ≳ 0.9986);
/// use [`log_euler_phi`] there.
pub fn euler_phi(x: f64) -> Result<f64> {
    let q = QArgument::new(x)?;
    if q.0 > MODULAR_SWITCH {
        return Ok(log_phi_modular(q.0).exp());
    }
    Ok(phi_product(q.0))
}

/// log φ(x) = Σ_{k≥1} log(1 − x^k).
pub fn log_euler_phi(x: f64) -> Result<f64> {
    let q = QArgument::new(x)?;
    if q.0 > MODULAR_SWITCH {
        Ok(log_phi_modular(q.0))
    } else {
        Ok(log_phi_sum(q.0))
    }
}

/// The raw truncated product, without the modular switch. Exposed for
/// cross-checks; loses accuracy as x → 1.
pub fn euler_phi_product(x: f64) -> Result<f64> {
    Ok(phi_product(QArgument::new(x)?.0))
}

/// The raw truncated log-sum, without the modular switch.
pub fn log_euler_phi_sum(x: f64) -> Result<f64> {
    Ok(log_phi_sum(QArgument::new(x)?.0))
}

/// log φ evaluated through the eta transformation for any `0 < x < 1`.
pub fn log_euler_phi_modular(x: f64) -> Result<f64> {
    let q = QArgument::new(x)?;
    if q.0 == 0.0 {
        return Ok(0.0);
    }
    Ok(log_phi_modular(q.0))
}

fn phi_product(x: f64) -> f64 {
    let mut prod = 1.0;
    let mut xk = x;
    while xk >= PRODUCT_CUTOFF {
        prod *= 1.0 - xk;
        xk *= x;
    }
    prod
}

fn log_phi_sum(x: f64) -> f64 {
    // Kahan summation; near the switch point the sum has ~2000 terms.
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut xk = x;
    while xk >= PRODUCT_CUTOFF {
        let term = (-xk).ln_1p() - comp;
        let t = sum + term;
        comp = (t - sum) - term;
        sum = t;
        xk *= x;
    }
    sum
}

// With x = e^{-2πt}: η(i/t) = √t η(it) and η(it) = e^{-πt/12} φ(e^{-2πt}) give
// log φ(e^{-2πt}) = πt/12 − ½ log t − π/(12t) + log φ(e^{-2π/t}).
fn log_phi_modular(x: f64) -> f64 {
    let t = -x.ln() / (2.0 * PI);
    let dual = (-2.0 * PI / t).exp();
    PI * t / 12.0 - 0.5 * t.ln() - PI / (12.0 * t) + log_phi_sum(dual)
}

/// Integer coefficients of ∏_{k=1}^{degree} (1 − x^k) up to x^degree.
pub fn euler_phi_coefficients(degree: usize) -> Vec<i64> {
    let mut c = vec![0i64; degree + 1];
    c[0] = 1;
    for k in 1..=degree {
        for j in (k..=degree).rev() {
            c[j] -= c[j - k];
        }
    }
    c
}

// B_{2j} for j = 1..=10.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// ζ′(−1), evaluated once on first use.
///
/// Differentiates the Euler–Maclaurin representation
/// ζ(s) = Σ_{k<n} k^{−s} + n^{1−s}/(s−1) + n^{−s}/2 + Σ_j B_{2j}/(2j)! (s)_{2j−1} n^{1−s−2j}
/// in s and sets s = −1.
pub fn zeta_prime_minus_one() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| {
        let n: f64 = 12.0;
        let ln_n = n.ln();
        let head: f64 = (1..12).map(|k| (k as f64) * (k as f64).ln()).sum();
        let mut value = -head + 0.5 * n * n * ln_n - 0.25 * n * n - 0.5 * n * ln_n;
        value += BERNOULLI_EVEN[0] / 2.0 * (1.0 + ln_n);
        for (idx, b) in BERNOULLI_EVEN.iter().enumerate().skip(1) {
            let two_j = 2.0 * (idx as f64 + 1.0);
            // d/ds of the Pochhammer symbol at s = −1 is −(2j−3)!.
            value -= b / (two_j * (two_j - 1.0) * (two_j - 2.0)) * n.powf(2.0 - two_j);
        }
        value
    })
}

/// Parameters of a Verma-module character χ_{c,h}(q).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacterParams {
    pub c: f64,
    pub h: f64,
    pub q: f64,
}

/// log χ_{c,h}(q) = (h − c/24) log q − log φ(q).
pub fn virasoro_character(p: CharacterParams) -> Result<f64> {
    if !(p.q > 0.0 && p.q < 1.0) {
        return Err(Error::domain(format!("character nome must lie in (0, 1), got {}", p.q)));
    }
    Ok((p.h - p.c / 24.0) * p.q.ln() - log_euler_phi(p.q)?)
}
