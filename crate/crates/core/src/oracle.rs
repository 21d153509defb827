//! Exact walk counts by dynamic programming and truncated generating functions.
//!
//! `q(i,j;n)` is the number of n-step walks from the origin to `(i,j)` that
//! stay in the quarter plane. The counts are exact big integers; the
//! generating-function evaluators convert to floating point afterwards and
//! report a rigorous bound on the neglected tail.

use std::io::Write;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::stepset::StepSet;

/// Dense table of `q(i,j;n)` for `0 <= i, j, n <= depth`.
#[derive(Clone, Debug)]
pub struct CountTable {
    steps: StepSet,
    depth: usize,
    data: Vec<BigUint>,
}

impl CountTable {
    /// Counts all walks up to length `depth`.
    pub fn new(steps: &StepSet, depth: usize) -> Self {
        let m = depth + 1;
        let mut data = vec![BigUint::zero(); m * m * m];
        data[0] = BigUint::from(1u32);
        let moves = steps.steps();
        for n in 1..=depth {
            let (prev, cur) = data.split_at_mut(n * m * m);
            let prev = &prev[(n - 1) * m * m..];
            let cur = &mut cur[..m * m];
            for i in 0..n {
                for j in 0..n {
                    let v = &prev[i * m + j];
                    if v.is_zero() {
                        continue;
                    }
                    for &(di, dj) in &moves {
                        let (ni, nj) = (i as i64 + di as i64, j as i64 + dj as i64);
                        if ni >= 0 && nj >= 0 {
                            cur[ni as usize * m + nj as usize] += v;
                        }
                    }
                }
            }
        }
        CountTable { steps: *steps, depth, data }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn steps(&self) -> &StepSet {
        &self.steps
    }

    /// Exact count; zero outside the table.
    pub fn q(&self, i: usize, j: usize, n: usize) -> BigUint {
        let m = self.depth + 1;
        if i > self.depth || j > self.depth || n > self.depth {
            return BigUint::zero();
        }
        self.data[n * m * m + i * m + j].clone()
    }

    /// Total number of quarter-plane walks of length n.
    pub fn total(&self, n: usize) -> BigUint {
        let m = self.depth + 1;
        self.data[n * m * m..(n + 1) * m * m].iter().sum()
    }

    /// Writes nonzero counts as `n,i,j,count` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n,i,j,count")?;
        let m = self.depth + 1;
        for n in 0..m {
            for i in 0..=n.min(self.depth) {
                for j in 0..=n.min(self.depth) {
                    let v = &self.data[n * m * m + i * m + j];
                    if !v.is_zero() {
                        writeln!(w, "{n},{i},{j},{v}")?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Floating-point evaluator built from this table.
    pub fn evaluator(&self) -> GfEvaluator {
        let m = self.depth + 1;
        let f = |v: &BigUint| v.to_f64().unwrap_or(f64::INFINITY);
        GfEvaluator {
            size: self.steps.size(),
            depth: self.depth,
            full: self.data.iter().map(f).collect(),
            m,
        }
    }
}

/// A truncated sum together with a bound on the neglected tail.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Truncated {
    pub value: Complex64,
    pub tail: f64,
    pub terms: usize,
}

/// Which boundary section of `Q(x,y)` to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// `Q(x,0)`
    X,
    /// `Q(0,y)`
    Y,
    /// `Q(0,0)`
    Origin,
}

/// Evaluates truncated generating functions from a count table.
#[derive(Clone, Debug)]
pub struct GfEvaluator {
    size: usize,
    depth: usize,
    m: usize,
    full: Vec<f64>,
}

impl GfEvaluator {
    fn at(&self, i: usize, j: usize, n: usize) -> f64 {
        self.full[n * self.m * self.m + i * self.m + j]
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn tail(&self, z: f64, x: f64, y: f64) -> f64 {
        let rho = self.size as f64 * z * x.max(1.0) * y.max(1.0);
        if rho >= 1.0 {
            f64::INFINITY
        } else {
            rho.powi(self.depth as i32 + 1) / (1.0 - rho)
        }
    }

    /// `sum_{n <= N} z^n sum q(i,j;n) x^i y^j`.
    pub fn q_truncated(&self, x: Complex64, y: Complex64, z: f64) -> Truncated {
        let mut total = Complex64::new(0.0, 0.0);
        let mut zn = 1.0;
        for n in 0..=self.depth {
            let mut layer = Complex64::new(0.0, 0.0);
            let mut xi = Complex64::new(1.0, 0.0);
            for i in 0..=n {
                let mut row = Complex64::new(0.0, 0.0);
                let mut yj = Complex64::new(1.0, 0.0);
                for j in 0..=n {
                    row += yj * self.at(i, j, n);
                    yj *= y;
                }
                layer += xi * row;
                xi *= x;
            }
            total += layer * zn;
            zn *= z;
        }
        Truncated { value: total, tail: self.tail(z, x.norm(), y.norm()), terms: self.depth + 1 }
    }

    /// Truncated `Q(t,0)`, `Q(0,t)` or `Q(0,0)`.
    pub fn boundary_gf(&self, axis: Axis, t: Complex64, z: f64) -> Truncated {
        let mut total = Complex64::new(0.0, 0.0);
        let mut zn = 1.0;
        for n in 0..=self.depth {
            let mut layer = Complex64::new(0.0, 0.0);
            match axis {
                Axis::Origin => layer += self.at(0, 0, n),
                Axis::X | Axis::Y => {
                    let mut tk = Complex64::new(1.0, 0.0);
                    for k in 0..=n {
                        let v = if axis == Axis::X { self.at(k, 0, n) } else { self.at(0, k, n) };
                        layer += tk * v;
                        tk *= t;
                    }
                }
            }
            total += layer * zn;
            zn *= z;
        }
        let r = if axis == Axis::Origin { 0.0 } else { t.norm() };
        Truncated { value: total, tail: self.tail(z, r, 0.0), terms: self.depth + 1 }
    }

    /// Residual of the kernel functional equation, with both sides truncated
    /// consistently at order `z^N`.
    pub fn functional_equation_residual(
        &self,
        steps: &StepSet,
        x: Complex64,
        y: Complex64,
        z: f64,
    ) -> f64 {
        let zero = Complex64::new(0.0, 0.0);
        let poly = |x: Complex64, y: Complex64| {
            steps
                .steps()
                .into_iter()
                .map(|(i, j)| x.powi(i as i32 + 1) * y.powi(j as i32 + 1))
                .sum::<Complex64>()
        };
        let layer = |n: usize, x: Complex64, y: Complex64| {
            let mut s = zero;
            for i in 0..=n {
                for j in 0..=n {
                    let v = self.at(i, j, n);
                    if v != 0.0 {
                        s += x.powu(i as u32) * y.powu(j as u32) * v;
                    }
                }
            }
            s
        };
        let (pxy, px0, p0y) = (poly(x, y), poly(x, zero), poly(zero, y));
        let d11 = steps.delta(-1, -1);
        let mut total = zero;
        let mut zn = 1.0;
        for n in 0..=self.depth {
            let mut lhs = -x * y * layer(n, x, y);
            let mut rhs = zero;
            if n == 0 {
                rhs -= x * y;
            } else {
                lhs += pxy * layer(n - 1, x, y);
                rhs += px0 * layer(n - 1, x, zero) + p0y * layer(n - 1, zero, y)
                    - d11 * layer(n - 1, zero, zero);
            }
            total += (lhs - rhs) * zn;
            zn *= z;
        }
        total.norm()
    }
}

/// Checks that `z` lies in the convergence range `(0, 1/|S|)`.
pub fn check_weight(steps: &StepSet, z: f64) -> Result<()> {
    let max = 1.0 / steps.size() as f64;
    if !(z > 0.0 && z < max) {
        return Err(Error::WeightOutOfRange { z, max });
    }
    Ok(())
}

/// Smallest depth whose tail bound `rho^{N+1}/(1-rho)` is below `tol`, with
/// `rho = |S| z`.
pub fn depth_for(steps: &StepSet, z: f64, tol: f64) -> usize {
    let rho = steps.size() as f64 * z;
    if rho >= 1.0 {
        return usize::MAX;
    }
    let n = ((tol * (1.0 - rho)).ln() / rho.ln()).ceil() as i64 - 1;
    n.max(1) as usize
}

/// Number of Kreweras excursions of length `3n`: `4^n C(3n,n) / ((n+1)(2n+1))`.
pub fn kreweras_excursions(n: u32) -> BigUint {
    let mut binom = BigUint::from(1u32);
    for k in 0..n {
        binom = binom * BigUint::from(3 * n - k) / BigUint::from(k + 1);
    }
    (BigUint::from(4u32).pow(n) * binom) / BigUint::from((n + 1) * (2 * n + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let t = CountTable::new(&StepSet::simple(), 4);
        assert_eq!(t.q(0, 0, 2), BigUint::from(2u32));
        assert_eq!(t.q(1, 0, 1), BigUint::from(1u32));
        let k = CountTable::new(&StepSet::kreweras(), 9);
        assert_eq!(k.q(0, 0, 3), BigUint::from(2u32));
        assert_eq!(k.q(0, 0, 6), BigUint::from(16u32));
        assert_eq!(k.q(0, 0, 9), BigUint::from(192u32));
    }

    #[test]
    fn kreweras_excursions_match_closed_form() {
        let k = CountTable::new(&StepSet::kreweras(), 30);
        for n in 0..=10 {
            assert_eq!(k.q(0, 0, 3 * n as usize), kreweras_excursions(n));
        }
        assert_eq!(k.q(0, 0, 4), BigUint::zero());
    }

    #[test]
    fn kreweras_origin_value() {
        let e = CountTable::new(&StepSet::kreweras(), 9).evaluator();
        let v = e.boundary_gf(Axis::Origin, Complex64::new(0.0, 0.0), 0.1).value.re;
        assert!((v - 1.002016).abs() < 1e-6);
    }

    #[test]
    fn functional_equation_holds_truncated() {
        let s = StepSet::gessel();
        let e = CountTable::new(&s, 12).evaluator();
        let r = e.functional_equation_residual(
            &s,
            Complex64::new(0.3, 0.4),
            Complex64::new(-0.5, 0.2),
            0.2,
        );
        assert!(r < 1e-13, "{r}");
    }

    #[test]
    fn csv_export() {
        let mut buf = Vec::new();
        CountTable::new(&StepSet::simple(), 2).write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().any(|l| l == "2,0,0,2"));
    }

    #[test]
    fn depth_meets_tolerance() {
        let s = StepSet::kreweras();
        let n = depth_for(&s, 0.2, 1e-12);
        let rho: f64 = 0.6;
        assert!(rho.powi(n as i32 + 1) / (1.0 - rho) <= 1e-12);
    }

    mod props {
        use super::*;
        use crate::stepset::STEPS;
        use proptest::prelude::*;

        fn any_set() -> impl Strategy<Value = StepSet> {
            (1u8..=255).prop_map(|m| {
                let steps: Vec<_> = (0..8).filter(|k| m >> k & 1 == 1).map(|k| STEPS[k]).collect();
                StepSet::from_steps(&steps).unwrap()
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(40))]

            #[test]
            fn counts_bounded_by_unconstrained(s in any_set()) {
                let t = CountTable::new(&s, 7);
                for n in 0..=7usize {
                    prop_assert!(t.total(n) <= BigUint::from(s.size()).pow(n as u32));
                }
            }

            #[test]
            fn functional_equation(s in any_set(), xr in -0.9f64..0.9, yi in -0.9f64..0.9) {
                let e = CountTable::new(&s, 8).evaluator();
                let r = e.functional_equation_residual(&s, Complex64::new(xr, 0.3), Complex64::new(0.2, yi), 0.1);
                prop_assert!(r < 1e-12);
            }

            #[test]
            fn transposed_counts(s in any_set(), i in 0usize..5, j in 0usize..5, n in 0usize..6) {
                let a = CountTable::new(&s, 6);
                let b = CountTable::new(&s.transpose(), 6);
                prop_assert_eq!(a.q(i, j, n), b.q(j, i, n));
            }
        }
    }
}
