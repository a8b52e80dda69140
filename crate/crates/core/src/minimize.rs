//! One-dimensional minimization helpers.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimum of `f` on `[a, b]`, stopping when the
/// bracket is shorter than `tol`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if c >= d {
            break;
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Five-point central differences for f′ and f″ with step h.
pub fn derivatives<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> (f64, f64) {
    let (m2, m1, z, p1, p2) = (f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h));
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let d2 = (-m2 + 16.0 * m1 - 30.0 * z + 16.0 * p1 - p2) / (12.0 * h * h);
    (d1, d2)
}

/// Newton steps on f′ = 0 from `x`, confined to `[lo, hi]`.
pub fn newton_polish<F: Fn(f64) -> f64>(f: &F, mut x: f64, lo: f64, hi: f64) -> f64 {
    let h = 1e-3 * x.abs().max(1e-3);
    for _ in 0..8 {
        let (d1, d2) = derivatives(f, x, h);
        if !(d2 > 0.0) {
            break;
        }
        let next = (x - d1 / d2).clamp(lo, hi);
        let step = (next - x).abs();
        x = next;
        if step < 1e-14 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// Least-squares solution of the overdetermined system `rows · x ≈ rhs`
/// through the normal equations, for small well-scaled bases.
pub fn least_squares(rows: &[Vec<f64>], rhs: &[f64]) -> Vec<f64> {
    let m = rows[0].len();
    let mut a = vec![vec![0.0; m + 1]; m];
    for (row, &y) in rows.iter().zip(rhs) {
        for i in 0..m {
            for j in 0..m {
                a[i][j] += row[i] * row[j];
            }
            a[i][m] += row[i] * y;
        }
    }
    // Gaussian elimination with partial pivoting
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap_or(col);
        a.swap(col, piv);
        for r in 0..m {
            if r != col && a[col][col] != 0.0 {
                let factor = a[r][col] / a[col][col];
                for k in col..=m {
                    a[r][k] -= factor * a[col][k];
                }
            }
        }
    }
    (0..m).map(|i| a[i][m] / a[i][i]).collect()
}
