//! Truncated power-series arithmetic on complex coefficient vectors.
//!
//! A series is a slice `a` with `a[k]` the coefficient of `x^k`.

use num_complex::Complex64;

use crate::error::{Error, Result};

type C = Complex64;

/// Product truncated to `n` terms.
pub fn mul(a: &[C], b: &[C], n: usize) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); n];
    for (i, &ai) in a.iter().enumerate().take(n) {
        if ai == C::new(0.0, 0.0) {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Formal derivative.
pub fn derivative(a: &[C]) -> Vec<C> {
    a.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect()
}

/// exp(h) to `n` terms via e_m = (1/m) Σ_{k=1}^{m} k h_k e_{m−k}.
pub fn exp(h: &[C], n: usize) -> Vec<C> {
    let mut e = vec![C::new(0.0, 0.0); n];
    if n == 0 {
        return e;
    }
    e[0] = h.first().copied().unwrap_or_default().exp();
    for m in 1..n {
        let mut acc = C::new(0.0, 0.0);
        for k in 1..=m.min(h.len().saturating_sub(1)) {
            acc += h[k] * e[m - k] * k as f64;
        }
        e[m] = acc / m as f64;
    }
    e
}

/// Result of a formal logarithm.
#[derive(Debug, Clone)]
pub struct LogSeries {
    pub coeffs: Vec<C>,
    /// Estimated modulus of the discarded tail at |x| = 1.
    pub tail_bound: f64,
}

/// log(a) to `n` terms, principal branch for the constant term.
///
/// Uses l_m = (a_m − (1/m) Σ_{k=1}^{m−1} k l_k a_{m−k}) / a_0.
pub fn log(a: &[C], n: usize) -> Result<LogSeries> {
    let a0 = a.first().copied().unwrap_or_default();
    if a0.norm() == 0.0 {
        return Err(Error::domain("formal logarithm of a series with zero constant term"));
    }
    let get = |k: usize| a.get(k).copied().unwrap_or_default();
    let mut l = vec![C::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(LogSeries { coeffs: l, tail_bound: 0.0 });
    }
    l[0] = a0.ln();
    for m in 1..n {
        let mut acc = C::new(0.0, 0.0);
        for k in 1..m {
            acc += l[k] * get(m - k) * k as f64;
        }
        l[m] = (get(m) - acc / m as f64) / a0;
    }
    if l.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonFinite("formal logarithm".into()));
    }
    let tail_bound = geometric_tail(&l);
    Ok(LogSeries { coeffs: l, tail_bound })
}

/// Geometric bound on Σ_{k≥n} |c_k| extrapolated from the last few coefficients.
pub fn geometric_tail(c: &[C]) -> f64 {
    let n = c.len();
    if n < 4 {
        return c.last().map(|x| x.norm()).unwrap_or(0.0);
    }
    let window = &c[n - n.min(8)..];
    let last = window.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let first = window[0].norm().max(window[1].norm());
    let ratio = if first > 0.0 {
        (last / first).powf(1.0 / (window.len() - 1) as f64).min(0.99)
    } else {
        0.0
    };
    last * ratio / (1.0 - ratio) + last
}

/// Evaluate Σ a_k x^k by Horner's rule.
pub fn eval(a: &[C], x: C) -> C {
    a.iter().rev().fold(C::new(0.0, 0.0), |acc, &c| acc * x + c)
}
