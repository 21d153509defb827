//! Dense real polynomials (ascending coefficients) and their roots.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Real polynomial with coefficients in ascending order.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn new(mut c: Vec<f64>) -> Self {
        while c.len() > 1 && *c.last().unwrap() == 0.0 {
            c.pop();
        }
        if c.is_empty() {
            c.push(0.0);
        }
        Poly(c)
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn lead(&self) -> f64 {
        *self.0.last().unwrap()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_c(&self, x: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() == 1 {
            return Poly(vec![0.0]);
        }
        Poly::new(self.0.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect())
    }

    /// k-th derivative evaluated at x.
    pub fn deriv_at(&self, k: usize, x: f64) -> f64 {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.derivative();
        }
        p.eval(x)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut c = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let get = |p: &Poly, k: usize| p.0.get(k).copied().unwrap_or(0.0);
        Poly::new((0..n).map(|k| get(self, k) - get(other, k)).collect())
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.0.iter().map(|c| c * s).collect())
    }

    /// Quotient of division by `(x - r)`, remainder discarded.
    pub fn deflate(&self, r: f64) -> Poly {
        let n = self.degree();
        if n == 0 {
            return Poly(vec![0.0]);
        }
        let mut q = vec![0.0; n];
        let mut acc = 0.0;
        for k in (1..=n).rev() {
            acc = acc * r + self.0[k];
            q[k - 1] = acc;
        }
        Poly::new(q)
    }

    /// `t^deg * p(1/t)` for the given nominal degree.
    pub fn reversed(&self, deg: usize) -> Poly {
        let mut c = vec![0.0; deg + 1];
        for (k, &a) in self.0.iter().enumerate() {
            c[deg - k] = a;
        }
        Poly::new(c)
    }

    /// All complex roots via companion-matrix eigenvalues, Newton-polished.
    pub fn roots(&self) -> Vec<Complex64> {
        let n = self.degree();
        if n == 0 {
            return vec![];
        }
        let lead = self.lead();
        let mut m = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            m[(0, k)] = -self.0[n - 1 - k] / lead;
        }
        for k in 1..n {
            m[(k, k - 1)] = 1.0;
        }
        let eig = m.complex_eigenvalues();
        let dp = self.derivative();
        eig.iter()
            .map(|&r0| {
                let mut r = r0;
                for _ in 0..8 {
                    let f = self.eval_c(r);
                    let d = dp.eval_c(r);
                    if d.norm() == 0.0 {
                        break;
                    }
                    let step = f / d;
                    if !step.is_finite() {
                        break;
                    }
                    r -= step;
                    if step.norm() <= 1e-17 * (1.0 + r.norm()) {
                        break;
                    }
                }
                if self.eval_c(r).norm() <= self.eval_c(r0).norm() {
                    r
                } else {
                    r0
                }
            })
            .collect()
    }
}
