//! Poles of the continuation increments and meromorphic continuation of
//! `r_x = K(x,0) Q(x,0)` and `r_y = K(0,y) Q(0,y)` to the whole plane.
//!
//! On the strips where `|x(w)| < 1` (resp. `|y(w)| < 1`) the functions are
//! evaluated from the truncated count series. Elsewhere they follow from
//! `r_y(w + w3) = r_y(w) + f_y(w)` and `r_x(w - w3) = r_x(w) + f_x(w)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{Axis, CountTable, GfEvaluator};
use crate::poly::Poly;
use crate::unif::Uniformization;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Highest pole order allowed for the increments.
pub const MAX_POLE_ORDER: usize = 3;

/// Principal part `sum_m coeffs[m-1] / (w - at)^m`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Pole {
    pub at: Complex64,
    pub coeffs: Vec<Complex64>,
}

impl Pole {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn residue(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Value of the principal part at `at + v`.
    pub fn shape(&self, v: Complex64) -> Complex64 {
        let inv = v.inv();
        let mut p = inv;
        let mut s = c(0.0);
        for cm in &self.coeffs {
            s += cm * p;
            p *= inv;
        }
        s
    }

    /// Value of the principal part at `w`.
    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.shape(w - self.at)
    }

    pub fn translated(&self, by: Complex64) -> Pole {
        Pole { at: self.at + by, coeffs: self.coeffs.clone() }
    }
}

/// Which increment function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `f_y`, increment of `r_y`
    Y,
    /// `f_x`, increment of `r_x`
    X,
}

/// Laurent coefficients `c_{-1..-mmax}` of `f` at `at` from an N-point
/// trapezoidal rule on a circle of radius `r`.
pub fn laurent_coefficients(
    f: &dyn Fn(Complex64) -> Complex64,
    at: Complex64,
    r: f64,
    mmax: usize,
    n: usize,
) -> (Vec<Complex64>, f64) {
    let mut coeffs = vec![c(0.0); mmax];
    let mut fmax: f64 = 0.0;
    for j in 0..n {
        let e = Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / n as f64);
        let v = f(at + e);
        fmax = fmax.max(v.norm());
        let mut p = e;
        for cm in coeffs.iter_mut() {
            *cm += v * p;
            p *= e;
        }
    }
    for cm in coeffs.iter_mut() {
        *cm /= n as f64;
    }
    (coeffs, fmax)
}

impl Uniformization {
    fn increment(&self, side: Side, w: Complex64) -> Complex64 {
        match side {
            Side::Y => self.f_y_deriv(w),
            Side::X => self.f_x_deriv(w),
        }
    }

    /// Poles of `f_y` (in `[0, w2) x [0, |w1|)`) or `f_x` (in the same cell
    /// shifted by `w3/2`), with their principal parts.
    pub fn increment_poles(&self, side: Side) -> Result<Vec<Pole>> {
        let z = self.z();
        let coef = match side {
            Side::Y => self.steps().x_quadratic(z)[0],
            Side::X => self.steps().y_quadratic(z)[0],
        };
        let a = Poly::new(coef.to_vec());
        let mut targets = vec![Complex64::new(f64::INFINITY, 0.0)];
        if a.degree() > 0 {
            targets.extend(a.roots());
        }
        let lat = self.wf.lattice();
        let shift = match side {
            Side::Y => c(0.0),
            Side::X => c(self.w3() / 2.0),
        };
        let mut cand: Vec<Complex64> = Vec::new();
        for t in targets {
            let (p, q) = match side {
                Side::Y => self.solve_x(t)?,
                Side::X => self.solve_y(t)?,
            };
            for w in [p, q] {
                let w = lat.reduce(w - shift) + shift;
                if !cand.iter().any(|&o| lat.dist_to_lattice(o - w) < 1e-8 * self.w2()) {
                    cand.push(w);
                }
            }
        }
        let cell = self.w2().min(self.w1().im);
        let mut poles = Vec::new();
        let mut total_scale: f64 = 0.0;
        let mut raw = Vec::new();
        for (k, &w) in cand.iter().enumerate() {
            let mut sep = cell;
            for (j, &o) in cand.iter().enumerate() {
                if j != k {
                    sep = sep.min(lat.dist_to_lattice(o - w));
                }
            }
            let r = 0.2 * sep;
            let f = |u: Complex64| self.increment(side, u);
            let (coeffs, fmax) = laurent_coefficients(&f, w, r, MAX_POLE_ORDER + 2, 64);
            total_scale = total_scale.max(fmax);
            raw.push((w, r, coeffs, fmax));
        }
        for (w, r, coeffs, fmax) in raw {
            let size = |m: usize| coeffs[m].norm() / r.powi(m as i32 + 1);
            let tol = 1e-8 * fmax.max(1e-300);
            let order = (0..coeffs.len()).rev().find(|&m| size(m) > tol).map(|m| m + 1).unwrap_or(0);
            if order == 0 {
                continue;
            }
            if order > MAX_POLE_ORDER {
                return Err(Error::PoleOrder { order, at: format!("{w}") });
            }
            let _ = total_scale;
            poles.push(Pole { at: w, coeffs: coeffs[..order].to_vec() });
        }
        poles.sort_by(|p, q| p.at.re.partial_cmp(&q.at.re).unwrap().then(p.at.im.partial_cmp(&q.at.im).unwrap()));
        Ok(poles)
    }

    /// Sum of the residues of the increment over one period cell.
    pub fn residue_sum(&self, side: Side) -> Result<f64> {
        let p = self.increment_poles(side)?;
        let s: Complex64 = p.iter().map(|p| p.residue()).sum();
        // double poles may carry no residue at all, so scale by every coefficient
        let scale: f64 = p.iter().flat_map(|p| p.coeffs.iter().map(|c| c.norm())).fold(1e-300, f64::max);
        Ok(s.norm() / scale)
    }

    /// Orbit sum `O(w) = sum_{t < l} f_y(w + t w3)`.
    pub fn orbit_sum(&self, w: Complex64, l: u32) -> Complex64 {
        (0..l).map(|t| self.f_y_deriv(w + t as f64 * self.w3())).sum()
    }

    /// Algebraic (with `2k` branches) iff the orbit sum vanishes
    /// identically; sampled at `n` seeded points of the period cell.
    pub fn algebraicity(&self, l: u32, n: usize, seed: u64) -> Algebraicity {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (w1, w2) = (self.w1(), self.w2());
        let (mut orbit_max, mut scale) = (0.0f64, 0.0f64);
        let mut used = 0;
        while used < n {
            let w = w2 * rng.gen::<f64>() + w1 * rng.gen::<f64>();
            let terms: Vec<Complex64> = (0..l).map(|t| self.f_y_deriv(w + t as f64 * self.w3())).collect();
            let big = terms.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if !big.is_finite() || big > 1e6 {
                continue;
            }
            used += 1;
            scale = scale.max(big);
            orbit_max = orbit_max.max(terms.iter().sum::<Complex64>().norm());
        }
        let verdict = if orbit_max < ALGEBRAIC_TOL * scale.max(1.0) {
            Verdict::Algebraic
        } else {
            Verdict::HolonomicTranscendental
        };
        Algebraicity { verdict, orbit_max, scale, samples: n, seed }
    }
}

/// Relative size below which the orbit sum counts as zero.
pub const ALGEBRAIC_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Algebraic,
    HolonomicTranscendental,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Algebraicity {
    pub verdict: Verdict,
    pub orbit_max: f64,
    /// largest single term `|f_y|` met while sampling
    pub scale: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Principal parts of `r_y` inside a rectangle, from the poles of `f_y`.
///
/// `region` is `(re_min, re_max, im_min, im_max)`. The rotation number is
/// `w3/w2 = k/l`.
pub fn pole_ledger_y(u: &Uniformization, k: u32, l: u32, region: (f64, f64, f64, f64)) -> Result<Vec<Pole>> {
    let base = u.increment_poles(Side::Y)?;
    let (w2, w3, t) = (u.w2(), u.w3(), u.w1().im);
    let lo = w2 / 2.0 - k as f64 * w2;
    let hi = w2 / 2.0;
    let wy1 = u.named.wy1.re;
    let (rmin, rmax, imin, imax) = region;
    let mut contrib: Vec<Pole> = Vec::new();
    let pmin = ((imin - t) / t).floor() as i64 - 1;
    let pmax = (imax / t).ceil() as i64 + 1;
    let inside = |d: Complex64| d.re >= rmin && d.re < rmax && d.im >= imin && d.im < imax;
    for b in &base {
        for p in pmin..=pmax {
            let jmin = ((lo - b.at.re) / w2).floor() as i64 - 1;
            let jmax = ((hi + k as f64 * w2 - b.at.re) / w2).ceil() as i64 + 1;
            for j in jmin..=jmax {
                let f = b.at + j as f64 * w2 + Complex64::new(0.0, p as f64 * t);
                if f.re > lo && f.re < hi {
                    // d = f - n w3 with Re d < Re w_{y1}
                    let mut n = 0i64;
                    loop {
                        let d = f - n as f64 * w3;
                        if d.re < rmin {
                            break;
                        }
                        if d.re < wy1 && inside(d) {
                            let wgt = -((n / l as i64) as f64 + 1.0);
                            contrib.push(Pole { at: d, coeffs: b.coeffs.iter().map(|c| c * wgt).collect() });
                        }
                        n += 1;
                    }
                } else if f.re > hi && f.re < hi + k as f64 * w2 {
                    let mut n = 1i64;
                    loop {
                        let d = f + n as f64 * w3;
                        if d.re >= rmax {
                            break;
                        }
                        if d.re > wy1 && inside(d) {
                            let wgt = ((n - 1) / l as i64) as f64 + 1.0;
                            contrib.push(Pole { at: d, coeffs: b.coeffs.iter().map(|c| c * wgt).collect() });
                        }
                        n += 1;
                    }
                }
            }
        }
    }
    Ok(merge_poles(contrib, 1e-8 * w2))
}

/// Adds up principal parts located at the same point and drops those that
/// cancel.
pub fn merge_poles(list: Vec<Pole>, tol: f64) -> Vec<Pole> {
    let scale = list.iter().flat_map(|p| p.coeffs.iter()).map(|c| c.norm()).fold(0.0, f64::max);
    let mut out: Vec<Pole> = Vec::new();
    for p in list {
        if let Some(q) = out.iter_mut().find(|q| (q.at - p.at).norm() < tol) {
            let n = q.coeffs.len().max(p.coeffs.len());
            q.coeffs.resize(n, c(0.0));
            for (m, cm) in p.coeffs.iter().enumerate() {
                q.coeffs[m] += cm;
            }
        } else {
            out.push(p);
        }
    }
    for q in out.iter_mut() {
        while q.coeffs.last().is_some_and(|c| c.norm() <= 1e-9 * scale) {
            q.coeffs.pop();
        }
    }
    out.retain(|q| !q.coeffs.is_empty());
    out.sort_by(|p, q| p.at.re.partial_cmp(&q.at.re).unwrap().then(p.at.im.partial_cmp(&q.at.im).unwrap()));
    out
}

/// A value obtained by continuation, with the oracle tail bound and the
/// number of `w3` shifts used.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Continued {
    pub value: Complex64,
    pub tail: f64,
    pub shifts: i64,
}

/// Boundary generating functions on the unit-disc strips, from exact counts.
#[derive(Clone, Debug)]
pub struct Continuation<'a> {
    pub u: &'a Uniformization,
    pub gf: GfEvaluator,
    /// `K(0,0) Q(0,0)`
    pub kappa: Complex64,
}

impl<'a> Continuation<'a> {
    /// Builds the count table to the given depth.
    pub fn new(u: &'a Uniformization, depth: usize) -> Self {
        let gf = CountTable::new(u.steps(), depth).evaluator();
        let z = u.z();
        let q00 = gf.boundary_gf(Axis::Origin, c(0.0), z).value;
        let kappa = q00 * (z * u.steps().delta(-1, -1));
        Continuation { u, gf, kappa }
    }

    /// `r_x(w)` for `w` in the x-strip, from the count series.
    pub fn r_x_base(&self, w: Complex64) -> Continued {
        let x = self.u.x(w);
        let (_, _, cx) = self.u.curve.abc_x(x);
        let t = self.gf.boundary_gf(Axis::X, x, self.u.z());
        Continued { value: cx * t.value, tail: cx.norm() * t.tail, shifts: 0 }
    }

    /// `r_y(w)` for `w` in the y-strip, from the count series.
    pub fn r_y_base(&self, w: Complex64) -> Continued {
        let y = self.u.y(w);
        let (_, _, cy) = self.u.curve.abc_y(y);
        let t = self.gf.boundary_gf(Axis::Y, y, self.u.z());
        Continued { value: cy * t.value, tail: cy.norm() * t.tail, shifts: 0 }
    }

    fn xy(&self, w: Complex64) -> Complex64 {
        self.u.x(w) * self.u.y(w)
    }

    /// `r_y` on either strip.
    fn r_y_strip(&self, w: Complex64) -> Option<Continued> {
        if self.u.in_delta_y(w) {
            Some(self.r_y_base(w))
        } else if self.u.in_delta_x(w) {
            let rx = self.r_x_base(w);
            Some(Continued { value: self.kappa - rx.value + self.xy(w), tail: 2.0 * rx.tail, shifts: 0 })
        } else {
            None
        }
    }

    fn r_x_strip(&self, w: Complex64) -> Option<Continued> {
        if self.u.in_delta_x(w) {
            Some(self.r_x_base(w))
        } else if self.u.in_delta_y(w) {
            let ry = self.r_y_base(w);
            Some(Continued { value: self.kappa - ry.value + self.xy(w), tail: 2.0 * ry.tail, shifts: 0 })
        } else {
            None
        }
    }

    /// Shifts `n` (smallest first) such that `w - n w3` lies on a strip.
    fn routes(&self, w: Complex64) -> Vec<i64> {
        let (w2, w3) = (self.u.w2(), self.u.w3());
        let centre = (self.u.named.wx2.re + self.u.named.wy2.re) / 2.0;
        let n0 = ((w.re - centre) / w3).round() as i64;
        let span = (w2 / w3).ceil() as i64 + 2;
        let mut v: Vec<i64> = (n0 - span..=n0 + span).collect();
        v.sort_by_key(|n| (n - n0).abs());
        v
    }

    fn reduce(&self, w: Complex64) -> Complex64 {
        let t = self.u.w1().im;
        Complex64::new(w.re, w.im - (w.im / t).floor() * t)
    }

    /// Meromorphic continuation of `r_y` to `w`.
    pub fn continue_r_y(&self, w: Complex64) -> Result<Continued> {
        let w = self.reduce(w);
        let w3 = self.u.w3();
        for n in self.routes(w) {
            let base = match self.r_y_strip(w - n as f64 * w3) {
                Some(b) => b,
                None => continue,
            };
            let mut s = base.value;
            if n >= 0 {
                for t in 1..=n {
                    s += self.u.f_y_deriv(w - t as f64 * w3);
                }
            } else {
                for t in 0..-n {
                    s -= self.u.f_y_deriv(w + t as f64 * w3);
                }
            }
            if s.is_finite() {
                return Ok(Continued { value: s, tail: base.tail, shifts: n });
            }
        }
        Err(Error::NoRoute(format!("continuation cannot reach {w}")))
    }

    /// Meromorphic continuation of `r_x` to `w`.
    pub fn continue_r_x(&self, w: Complex64) -> Result<Continued> {
        let w = self.reduce(w);
        let w3 = self.u.w3();
        for n in self.routes(w) {
            let base = match self.r_x_strip(w - n as f64 * w3) {
                Some(b) => b,
                None => continue,
            };
            let mut s = base.value;
            if n > 0 {
                // r_x(w) = r_x(w - n w3) - sum_{t<n} f_x(w - t w3)
                for t in 0..n {
                    s -= self.u.f_x_deriv(w - t as f64 * w3);
                }
            } else {
                for t in 1..=-n {
                    s += self.u.f_x_deriv(w + t as f64 * w3);
                }
            }
            if s.is_finite() {
                return Ok(Continued { value: s, tail: base.tail, shifts: n });
            }
        }
        Err(Error::NoRoute(format!("continuation cannot reach {w}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stepset::StepSet;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn kreweras_poles_of_f_y() {
        let z = 0.1;
        let u = Uniformization::new(&StepSet::kreweras(), z).unwrap();
        let p = u.increment_poles(Side::Y).unwrap();
        let w2 = u.w2();
        assert_eq!(p.len(), 3);
        let want = [(0.0, -1.0 / z), (w2 / 3.0, 0.5 / z), (2.0 * w2 / 3.0, 0.5 / z)];
        for (pole, (at, res)) in p.iter().zip(want) {
            assert_eq!(pole.order(), 1);
            assert!((pole.at - at).norm() < 1e-9 * w2, "{:?}", pole.at);
            assert!(close(pole.residue(), c(res), 1e-9));
        }
        assert!(u.residue_sum(Side::Y).unwrap() < 1e-10);
        assert!(u.f_y_deriv(c(w2 / 2.0)).norm() < 1e-10);
    }

    #[test]
    fn simple_walk_double_poles() {
        let z = 0.15;
        let u = Uniformization::new(&StepSet::simple(), z).unwrap();
        let p = u.increment_poles(Side::Y).unwrap();
        let w2 = u.w2();
        assert_eq!(p.len(), 2);
        let k = 1.0 / (4.0 * z * z);
        assert!((p[0].at - w2 / 8.0).norm() < 1e-9 * w2);
        assert!((p[1].at - 7.0 * w2 / 8.0).norm() < 1e-9 * w2);
        assert_eq!(p[0].order(), 2);
        assert!(close(p[0].coeffs[1], c(k), 1e-9));
        assert!(close(p[1].coeffs[1], c(-k), 1e-9));
        assert!(p[0].coeffs[0].norm() < 1e-8 * k);
        // residue of x at w2/8
        let (cx, _) = laurent_coefficients(&|w| u.x(w), c(w2 / 8.0), 0.01 * w2, 2, 64);
        assert!(close(cx[0], c(-0.5 / z), 1e-9));
    }

    #[test]
    fn infinite_model_poles() {
        let z = 0.12;
        let u = Uniformization::new(&StepSet::infinite_example(), z).unwrap();
        let (w2, w3) = (u.w2(), u.w3());
        let p = u.increment_poles(Side::Y).unwrap();
        let want = [(0.0, -1.0 / z), (w3 / 2.0, 0.5 / z), (w2 - w3 / 2.0, 0.5 / z)];
        assert_eq!(p.len(), 3);
        for (pole, (at, res)) in p.iter().zip(want) {
            assert!((pole.at - at).norm() < 1e-9 * w2);
            assert!(close(pole.residue(), c(res), 1e-9));
        }
        let p = u.increment_poles(Side::X).unwrap();
        // f_x = y(w) [x(eta_hat w) - x(w)]: residues -1/(2z), 1/z, -1/(2z) at 0, w3/2, w3
        let want = [(w3 / 2.0, 1.0 / z), (w3, -0.5 / z), (w2, -0.5 / z)];
        assert_eq!(p.len(), 3, "{p:?}");
        for (pole, (at, res)) in p.iter().zip(want) {
            let d = u.wf.lattice().dist_to_lattice(pole.at - at);
            assert!(d < 1e-9 * w2, "{:?} vs {at}", pole.at);
            assert!(close(pole.residue(), c(res), 1e-9));
        }
    }

    #[test]
    fn kreweras_ledger() {
        let z = 0.1;
        let u = Uniformization::new(&StepSet::kreweras(), z).unwrap();
        let (w2, t) = (u.w2(), u.w1().im);
        let led = pole_ledger_y(&u, 2, 3, (-1.5 * w2, 0.5 * w2, -0.5 * t, 0.5 * t)).unwrap();
        let want = [
            (-2.0 * w2 / 3.0, 0.5 / z),
            (-w2 / 3.0, -1.0 / z),
            (0.0, 1.0 / z),
            (w2 / 3.0, -0.5 / z),
        ];
        assert_eq!(led.len(), 4, "{led:?}");
        for (p, (at, res)) in led.iter().zip(want) {
            assert!((p.at - at).norm() < 1e-9 * w2);
            assert_eq!(p.order(), 1);
            assert!(close(p.residue(), c(res), 1e-9));
        }
    }

    #[test]
    fn continuation_matches_series_on_strips() {
        let z = 0.1;
        let u = Uniformization::new(&StepSet::kreweras(), z).unwrap();
        let cont = Continuation::new(&u, 40);
        let n = u.named;
        // sqs2 on the overlap of the strips
        for w in [n.wx2, n.wy2, (n.wx2 + n.wy2) / 2.0] {
            if u.in_delta_x(w) && u.in_delta_y(w) {
                let r = cont.r_x_base(w).value + cont.r_y_base(w).value - cont.kappa - u.x(w) * u.y(w);
                assert!(r.norm() < 1e-12);
            }
        }
        // r_y is invariant under eta_hat, r_x under xi_hat
        let w = n.wy2 + Complex64::new(0.05 * u.w2(), 0.1);
        let a = cont.continue_r_y(w).unwrap().value;
        let b = cont.continue_r_y(u.eta_hat(w)).unwrap().value;
        assert!(close(a, b, 1e-10));
        let w = Complex64::new(-0.7 * u.w2(), 0.3);
        let a = cont.continue_r_x(w).unwrap().value;
        let b = cont.continue_r_x(u.xi_hat(w)).unwrap().value;
        assert!(close(a, b, 1e-9), "{a} {b}");
        // the two continuations agree through sqs2 everywhere
        for w in [Complex64::new(-1.3 * u.w2(), 0.2), Complex64::new(2.2 * u.w2(), 0.7)] {
            let rx = cont.continue_r_x(w).unwrap().value;
            let ry = cont.continue_r_y(w).unwrap().value;
            let r = rx + ry - cont.kappa - u.x(w) * u.y(w);
            assert!(r.norm() < 1e-9 * (1.0 + rx.norm()), "{r}");
        }
    }

    #[test]
    fn algebraicity_verdicts() {
        for z in [0.08, 0.15, 0.22] {
            let u = Uniformization::new(&StepSet::kreweras(), z).unwrap();
            let a = u.algebraicity(3, 20, 7);
            assert_eq!(a.verdict, Verdict::Algebraic, "{a:?}");
            let u = Uniformization::new(&StepSet::simple(), z).unwrap();
            let a = u.algebraicity(2, 20, 7);
            assert_eq!(a.verdict, Verdict::HolonomicTranscendental);
            assert!(a.orbit_max > 1e-2 * a.scale);
        }
    }

    #[test]
    fn infinite_model_orbit_sum_depends_on_parity_of_k() {
        // the half-shifted poles fold onto the orbit exactly when k is even
        let s = StepSet::infinite_example();
        for (k, l, want) in [(28, 37, Verdict::Algebraic), (31, 41, Verdict::HolonomicTranscendental)] {
            let p = crate::rat::pin_z(&s, crate::rat::Ratio::new(k, l).unwrap()).unwrap();
            let u = Uniformization::new(&s, p.z).unwrap();
            assert_eq!(u.algebraicity(l, 20, 7).verdict, want, "{k}/{l}");
        }
    }

    #[test]
    fn kreweras_orbit_sum_vanishes() {
        let u = Uniformization::new(&StepSet::kreweras(), 0.1).unwrap();
        let w = Complex64::new(0.123, 0.456);
        assert!(u.orbit_sum(w, 3).norm() < 1e-9);
        let s = Uniformization::new(&StepSet::simple(), 0.1).unwrap();
        assert!(s.orbit_sum(w, 2).norm() > 1e-2);
    }
}
