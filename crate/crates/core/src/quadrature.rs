//! Gauss–Legendre rules and FFT helpers for periodic samples.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

type C = Complex64;

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, z);
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to [a, b].
pub fn gauss_legendre_interval(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (x.iter().map(|t| mid + half * t).collect(), w.iter().map(|t| half * t).collect())
}

/// Composite Gauss–Legendre rule on [a, b] with panels no wider than `max_width`.
pub fn composite_gauss_legendre(n: usize, a: f64, b: f64, max_width: f64) -> (Vec<f64>, Vec<f64>) {
    let panels = (((b - a) / max_width).ceil() as usize).max(1);
    let h = (b - a) / panels as f64;
    let mut xs = Vec::with_capacity(panels * n);
    let mut ws = Vec::with_capacity(panels * n);
    for p in 0..panels {
        let (x, w) = gauss_legendre_interval(n, a + p as f64 * h, a + (p + 1) as f64 * h);
        xs.extend(x);
        ws.extend(w);
    }
    (xs, ws)
}

/// Barycentric weights for polynomial interpolation through `nodes`.
pub fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let mut w: Vec<f64> = nodes
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            1.0 / nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &xj)| xi - xj)
                .product::<f64>()
        })
        .collect();
    let scale = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    w.iter_mut().for_each(|v| *v /= scale);
    w
}

/// Interpolant value and derivative at `x` (which must not be a node).
pub fn barycentric_eval(nodes: &[f64], weights: &[f64], values: &[f64], x: f64) -> (f64, f64) {
    let (mut num, mut den, mut dnum, mut dden) = (0.0, 0.0, 0.0, 0.0);
    for ((&xj, &wj), &fj) in nodes.iter().zip(weights).zip(values) {
        let a = wj / (x - xj);
        let da = -a / (x - xj);
        num += a * fj;
        den += a;
        dnum += da * fj;
        dden += da;
    }
    (num / den, (dnum * den - num * dden) / (den * den))
}

/// Spectral differentiation matrix on arbitrary distinct nodes, row-major.
pub fn differentiation_matrix(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let w = barycentric_weights(nodes);
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                let v = (w[j] / w[i]) / (nodes[i] - nodes[j]);
                d[i * n + j] = v;
                diag -= v;
            }
        }
        d[i * n + i] = diag;
    }
    d
}

/// Fourier coefficients of uniform samples on [0, 2π): `out[j]` is the
/// coefficient of e^{ikθ} with k = j for j < n/2 and k = j − n otherwise.
pub fn fourier_coefficients(samples: &[C]) -> Vec<C> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// Inverse of [`fourier_coefficients`]: values Σ_j out[j] e^{i k_j θ_m} at θ_m = 2πm/n.
pub fn synthesize(coeffs: &[C]) -> Vec<C> {
    let mut buf = coeffs.to_vec();
    FftPlanner::new().plan_fft_inverse(buf.len()).process(&mut buf);
    buf
}

/// Signed frequency of FFT bin `j` of an `n`-point transform.
pub fn frequency(j: usize, n: usize) -> i64 {
    if j < n.div_ceil(2) {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// Fourier coefficients of a real periodic function from uniform samples.
pub fn real_fourier_coefficients(samples: &[f64]) -> Vec<C> {
    let c: Vec<C> = samples.iter().map(|&x| C::new(x, 0.0)).collect();
    fourier_coefficients(&c)
}

/// Values of Σ_k c_k e^{ikθ} on `n` uniform angles, folding each frequency mod n.
///
/// Exact at the grid points for any finite trigonometric sum.
pub fn evaluate_on_grid<I: IntoIterator<Item = (i64, C)>>(terms: I, n: usize) -> Vec<C> {
    let mut bins = vec![C::new(0.0, 0.0); n];
    for (k, c) in terms {
        bins[k.rem_euclid(n as i64) as usize] += c;
    }
    synthesize(&bins)
}
