//! Gauss quadrature rules.

use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = t;
            }
            dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let dt = p1 / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Integral of `f` over [a, b] with an n-point Gauss-Legendre rule.
pub fn legendre_integral(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (x, w) = gauss_legendre(n);
    let (m, h) = ((a + b) / 2.0, (b - a) / 2.0);
    h * x.iter().zip(&w).map(|(t, wt)| wt * f(m + h * t)).sum::<f64>()
}

/// `int_{-1}^{1} f(t) / sqrt(1 - t^2) dt` with the n-point Gauss-Chebyshev rule.
pub fn chebyshev_integral(f: &dyn Fn(f64) -> f64, n: usize) -> f64 {
    let s: f64 = (1..=n)
        .map(|k| f(((2 * k - 1) as f64 * PI / (2 * n) as f64).cos()))
        .sum();
    PI / n as f64 * s
}

/// Repeats `rule(n)` with doubling n until two successive values agree to `rel`.
/// Returns the last value and the last change.
pub fn doubling(rule: &dyn Fn(usize) -> f64, start: usize, max: usize, rel: f64) -> (f64, f64) {
    let mut n = start;
    let mut prev = rule(n);
    loop {
        n *= 2;
        let cur = rule(n);
        let delta = (cur - prev).abs();
        if delta <= rel * cur.abs().max(1e-300) || n >= max {
            return (cur, delta);
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_exact_for_polynomials() {
        let v = legendre_integral(&|x| x.powi(7) - 3.0 * x.powi(4) + 1.0, 0.0, 2.0, 5);
        let exact = 2f64.powi(8) / 8.0 - 3.0 * 2f64.powi(5) / 5.0 + 2.0;
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn chebyshev_weight() {
        let v = chebyshev_integral(&|t| t * t, 8);
        assert!((v - PI / 2.0).abs() < 1e-14);
    }
}
