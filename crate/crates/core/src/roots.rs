//! Shared root-finding machinery: sign-change scanning, bisection, integer
//! polynomials, and complex roots via the companion matrix.
//!
//! The companion-matrix path is used for screening and property checks only,
//! never inside a certification pipeline.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Brackets `[x_i, x_{i+1}]` where `f` changes sign on the grid of step
/// `step` over `[a, b]`. Exact zeros at grid points yield degenerate
/// brackets centered on the point.
pub fn scan_sign_changes(f: &dyn Fn(f64) -> f64, a: f64, b: f64, step: f64) -> Vec<(f64, f64)> {
    let n = ((b - a) / step).ceil().max(1.0) as usize;
    let mut out = Vec::new();
    let mut x_prev = a;
    let mut f_prev = f(a);
    for i in 1..=n {
        let x = if i == n { b } else { a + step * i as f64 };
        let fx = f(x);
        if f_prev == 0.0 {
            out.push((x_prev, x_prev));
        } else if fx != 0.0 && f_prev.signum() != fx.signum() {
            out.push((x_prev, x));
        }
        x_prev = x;
        f_prev = fx;
    }
    if f_prev == 0.0 {
        out.push((x_prev, x_prev));
    }
    out
}

/// Bisect a sign-change bracket down to width `tol`; returns the midpoint.
pub fn bisect_to(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    if lo == hi {
        return lo;
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid == 0.0 {
            return mid;
        }
        if flo.signum() == fmid.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Evaluate an integer polynomial (coefficient `i` multiplies `x^i`).
pub fn eval_int_poly(coeffs: &[i8], x: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * x + c as f64;
    }
    acc
}

/// Evaluate the `k`-th derivative of an integer polynomial.
pub fn eval_int_poly_derivative(coeffs: &[i8], x: f64, k: usize) -> f64 {
    let mut acc = 0.0;
    for i in (0..coeffs.len()).rev() {
        let mut ff = 1.0;
        if i < k {
            continue;
        }
        for j in 0..k {
            ff *= (i - j) as f64;
        }
        acc = acc * x + coeffs[i] as f64 * ff;
    }
    acc
}

/// All complex roots of a real polynomial via the companion matrix of its
/// monic normalization. Leading zero coefficients are trimmed.
pub fn companion_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|&v| v == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    m.complex_eigenvalues().iter().copied().collect()
}

/// Real zeros of an integer polynomial inside `(a, b)`, located by grid
/// bracketing plus a derivative pass for even-order zeros. Returns
/// `(location, order_estimate, is_sign_change)`.
pub fn int_poly_real_zeros(
    coeffs: &[i8],
    a: f64,
    b: f64,
    grid: f64,
    tol: f64,
) -> Vec<(f64, usize, bool)> {
    let g = |x: f64| eval_int_poly(coeffs, x);
    let dg = |x: f64| eval_int_poly_derivative(coeffs, x, 1);
    let scale: f64 = coeffs.iter().map(|&c| (c as f64).abs()).sum::<f64>().max(1.0);
    // An exact zero on a grid point can masquerade as a sign change;
    // classify from the signs just outside the located zero instead.
    let h = (grid / 4.0).max(16.0 * tol);
    let crosses = |z: f64| g(z - h) * g(z + h) < 0.0;
    let mut out: Vec<(f64, usize, bool)> = Vec::new();
    for (lo, hi) in scan_sign_changes(&g, a, b, grid) {
        let loc = bisect_to(&g, lo, hi, tol);
        let sc = crosses(loc);
        out.push((loc, int_poly_order(coeffs, loc, sc), sc));
    }
    for (lo, hi) in scan_sign_changes(&dg, a, b, grid) {
        let c = bisect_to(&dg, lo, hi, tol);
        if g(c).abs() < 1e-9 * scale && !out.iter().any(|(z, _, _)| (z - c).abs() < 4.0 * tol.max(h)) {
            let sc = crosses(c);
            out.push((c, int_poly_order(coeffs, c, sc), sc));
        }
    }
    out.sort_by(|p, q| p.0.total_cmp(&q.0));
    out.dedup_by(|p, q| (p.0 - q.0).abs() < 4.0 * tol.max(h) && p.2 == q.2);
    out
}

fn int_poly_order(coeffs: &[i8], x0: f64, sign_change: bool) -> usize {
    let scale: f64 = coeffs.iter().map(|&c| (c as f64).abs()).sum::<f64>().max(1.0);
    let start = if sign_change { 1 } else { 2 };
    let max_order = coeffs.len().saturating_sub(1).max(start);
    let mut j = start;
    while j <= max_order {
        let d = eval_int_poly_derivative(coeffs, x0, j).abs();
        let mut fact = 1.0;
        for i in 1..=j {
            fact *= i as f64;
        }
        if d > 1e-5 * scale * fact {
            return j;
        }
        j += 2;
    }
    max_order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_and_bisect_quadratic() {
        let f = |x: f64| x * x - 2.0;
        let brackets = scan_sign_changes(&f, 0.0, 2.0, 0.1);
        assert_eq!(brackets.len(), 1);
        let r = bisect_to(&f, brackets[0].0, brackets[0].1, 1e-13);
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn companion_quadratic_roots() {
        // x^2 - x - 1: roots are the golden ratio pair.
        let roots = companion_roots(&[-1.0, -1.0, 1.0]);
        let mut mags: Vec<f64> = roots.iter().map(|z| z.re).collect();
        mags.sort_by(f64::total_cmp);
        assert!((mags[0] + 0.618_033_988_749_895).abs() < 1e-10);
        assert!((mags[1] - 1.618_033_988_749_895).abs() < 1e-10);
    }

    #[test]
    fn int_poly_derivative_values() {
        // q = 1 - 2x + 2x^2: q'(x) = -2 + 4x, q''(x) = 4.
        let q = [1i8, -2, 2];
        assert_eq!(eval_int_poly_derivative(&q, 0.5, 1), 0.0);
        assert_eq!(eval_int_poly_derivative(&q, 0.25, 2), 4.0);
    }

    #[test]
    fn int_poly_double_zero_detected() {
        // (1 - 2x)^2 = 1 - 4x + 4x^2 has an order-two zero at 1/2 (not a
        // member polynomial; used to exercise the even-order path).
        let q = [1i8, -4, 4];
        let zs = int_poly_real_zeros(&q, 0.0, 0.99, 1e-3, 1e-12);
        assert_eq!(zs.len(), 1);
        let (loc, order, sc) = zs[0];
        assert!((loc - 0.5).abs() < 1e-6);
        assert_eq!(order, 2);
        assert!(!sc);
    }
}
