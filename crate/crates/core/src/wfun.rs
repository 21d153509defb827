//! Weierstrass elliptic functions on rectangular lattices.
//!
//! The lattice is spanned by a purely imaginary period `w1` (positive
//! imaginary part) and a positive real period `w2`. Functions are evaluated
//! with the trigonometric (q-)series, which converge geometrically once the
//! argument is reduced to the period cell centred at the origin. The lattice
//! is internally rotated by `-i` when that makes the nome smaller.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice {
    pub w1: Complex64,
    pub w2: f64,
}

impl Lattice {
    pub fn new(w1: Complex64, w2: f64) -> Result<Self> {
        if !(w1.im > 0.0 && w1.re.abs() <= 1e-12 * w1.im && w2 > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "lattice periods must be (i*a, b) with a, b > 0, got ({w1}, {w2})"
            )));
        }
        Ok(Lattice { w1: Complex64::new(0.0, w1.im), w2 })
    }

    /// Representative of `u` in `[0, w2) x [0, |w1|)`.
    pub fn reduce(&self, u: Complex64) -> Complex64 {
        let t = self.w1.im;
        let re = u.re - (u.re / self.w2).floor() * self.w2;
        let im = u.im - (u.im / t).floor() * t;
        Complex64::new(re, im)
    }

    /// Distance from `u` to the nearest lattice point.
    pub fn dist_to_lattice(&self, u: Complex64) -> f64 {
        let t = self.w1.im;
        let re = u.re - (u.re / self.w2).round() * self.w2;
        let im = u.im - (u.im / t).round() * t;
        Complex64::new(re, im).norm()
    }
}

/// Evaluator for `wp`, `wp'` and `zeta` on a fixed lattice.
#[derive(Clone, Debug)]
pub struct Weierstrass {
    lattice: Lattice,
    rotated: bool,
    /// real period of the canonical lattice
    pr: f64,
    /// imaginary period (magnitude) of the canonical lattice
    pt: f64,
    a: Vec<f64>,
    b: Vec<f64>,
    eta1: f64,
    eta3: Complex64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub g2: f64,
    pub g3: f64,
}

impl Weierstrass {
    pub fn new(lattice: Lattice) -> Self {
        let (rotated, pr, pt) = if lattice.w1.im >= lattice.w2 {
            (false, lattice.w2, lattice.w1.im)
        } else {
            (true, lattice.w1.im, lattice.w2)
        };
        let h = pr / 2.0;
        let q2 = (-2.0 * PI * pt / pr).exp();
        let nterms = (48.0 / (PI * pt / pr)).ceil() as usize + 2;
        let mut a = Vec::with_capacity(nterms);
        let mut b = Vec::with_capacity(nterms);
        let mut q2n = 1.0;
        for n in 1..=nterms {
            q2n *= q2;
            let r = q2n / (1.0 - q2n);
            a.push(n as f64 * r);
            b.push(r);
        }
        let sa: f64 = a.iter().sum();
        let eta1 = PI * PI / (12.0 * h) * (1.0 - 24.0 * sa);
        // Legendre relation for the canonical half-periods h and i*pt/2.
        let w3 = Complex64::new(0.0, pt / 2.0);
        let eta3 = (eta1 * w3 - I * (PI / 2.0)) / h;
        let mut wf = Weierstrass {
            lattice,
            rotated,
            pr,
            pt,
            a,
            b,
            eta1,
            eta3,
            e1: 0.0,
            e2: 0.0,
            e3: 0.0,
            g2: 0.0,
            g3: 0.0,
        };
        let w1 = lattice.w1;
        let w2 = c(lattice.w2);
        wf.e1 = wf.wp(w2 / 2.0).re;
        wf.e2 = wf.wp((w1 + w2) / 2.0).re;
        wf.e3 = wf.wp(w1 / 2.0).re;
        wf.g2 = 2.0 * (wf.e1 * wf.e1 + wf.e2 * wf.e2 + wf.e3 * wf.e3);
        wf.g3 = 4.0 * wf.e1 * wf.e2 * wf.e3;
        wf
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    /// Splits a canonical argument into a reduced part and lattice multiples.
    fn split(&self, u: Complex64) -> (Complex64, f64, f64) {
        let m = if u.re.abs() <= 0.5 * self.pr * (1.0 + 1e-12) { 0.0 } else { (u.re / self.pr).round() };
        let k = if u.im.abs() <= 0.5 * self.pt * (1.0 + 1e-12) { 0.0 } else { (u.im / self.pt).round() };
        (u - m * self.pr - I * (k * self.pt), m, k)
    }

    fn to_canonical(&self, u: Complex64) -> Complex64 {
        if self.rotated {
            -I * u
        } else {
            u
        }
    }

    fn wp_c(&self, u: Complex64) -> Complex64 {
        let (u, _, _) = self.split(u);
        let h = self.pr / 2.0;
        let w = u * (PI / (2.0 * h));
        let s = w.sin();
        let mut sum = c(0.0);
        for (n, an) in self.a.iter().enumerate() {
            sum += (u * ((n + 1) as f64 * PI / h)).cos() * *an;
        }
        -self.eta1 / h + (PI * PI / (4.0 * h * h)) / (s * s) - sum * (2.0 * PI * PI / (h * h))
    }

    fn wpd_c(&self, u: Complex64) -> Complex64 {
        let (u, _, _) = self.split(u);
        let h = self.pr / 2.0;
        let w = u * (PI / (2.0 * h));
        let (s, co) = (w.sin(), w.cos());
        let mut sum = c(0.0);
        for (n, an) in self.a.iter().enumerate() {
            let k = (n + 1) as f64;
            sum += (u * (k * PI / h)).sin() * (k * an);
        }
        -(co / (s * s * s)) * (PI.powi(3) / (4.0 * h.powi(3))) + sum * (2.0 * PI.powi(3) / h.powi(3))
    }

    fn zeta_c(&self, u: Complex64) -> Complex64 {
        let (ur, m, k) = self.split(u);
        let h = self.pr / 2.0;
        let w = ur * (PI / (2.0 * h));
        let mut sum = c(0.0);
        for (n, bn) in self.b.iter().enumerate() {
            sum += (ur * ((n + 1) as f64 * PI / h)).sin() * *bn;
        }
        ur * (self.eta1 / h) + w.cos() / w.sin() * (PI / (2.0 * h)) + sum * (2.0 * PI / h)
            + 2.0 * m * self.eta1
            + self.eta3 * (2.0 * k)
    }

    /// Weierstrass `wp(u)`.
    pub fn wp(&self, u: Complex64) -> Complex64 {
        let v = self.wp_c(self.to_canonical(u));
        if self.rotated {
            -v
        } else {
            v
        }
    }

    /// Derivative `wp'(u)`.
    pub fn wpd(&self, u: Complex64) -> Complex64 {
        let v = self.wpd_c(self.to_canonical(u));
        if self.rotated {
            I * v
        } else {
            v
        }
    }

    /// Second derivative from the differential equation.
    pub fn wpdd(&self, u: Complex64) -> Complex64 {
        let p = self.wp(u);
        6.0 * p * p - self.g2 / 2.0
    }

    /// Weierstrass `zeta(u)`.
    pub fn zeta(&self, u: Complex64) -> Complex64 {
        let v = self.zeta_c(self.to_canonical(u));
        if self.rotated {
            -I * v
        } else {
            v
        }
    }

    /// Quasi-periodicity constant `zeta(w2/2)`.
    pub fn zeta_half_real(&self) -> Complex64 {
        self.zeta(c(self.lattice.w2 / 2.0))
    }

    /// Quasi-periodicity constant `zeta(w1/2)`.
    pub fn zeta_half_imag(&self) -> Complex64 {
        self.zeta(self.lattice.w1 / 2.0)
    }

    /// Residual of `4 wp^3 - g2 wp - g3 - wp'^2`, relative to `|wp'|^2`.
    pub fn ode_residual(&self, u: Complex64) -> f64 {
        let p = self.wp(u);
        let d = self.wpd(u);
        let r = 4.0 * p * p * p - self.g2 * p - self.g3 - d * d;
        r.norm() / (1.0 + d.norm_sqr() + p.norm().powi(3))
    }

    /// Solves `wp(u) = t`; the result lies in `[0, w2) x [0, |w1|)`. The other
    /// solutions are `-u` and lattice translates.
    pub fn wp_invert(&self, t: Complex64) -> Result<Complex64> {
        let lat = self.lattice;
        let (w1, w2) = (lat.w1, c(lat.w2));
        let mut seeds: Vec<Complex64> = Vec::new();
        let halves = [(w2 / 2.0, self.e1), ((w1 + w2) / 2.0, self.e2), (w1 / 2.0, self.e3)];
        for (hp, e) in halves {
            let pp = 6.0 * e * e - self.g2 / 2.0;
            let d = t - e;
            if d.norm() <= 1e-300 {
                return Ok(lat.reduce(hp));
            }
            if pp.abs() > 0.0 {
                let s = (2.0 * d / pp).sqrt();
                seeds.push(hp + s);
                seeds.push(hp - s);
            }
        }
        if t.norm() > 1.0 {
            let s = t.sqrt().inv();
            seeds.push(s);
            seeds.push(-s);
        }
        seeds.extend(self.grid_seeds(t, 12, 6));
        if let Some(u) = self.polish_best(t, &seeds) {
            return Ok(lat.reduce(u));
        }
        let dense = self.grid_seeds(t, 64, 16);
        self.polish_best(t, &dense)
            .map(|u| lat.reduce(u))
            .ok_or_else(|| Error::Inversion(format!("wp(u) = {t}")))
    }

    fn grid_seeds(&self, t: Complex64, n: usize, keep: usize) -> Vec<Complex64> {
        let lat = self.lattice;
        let mut pts = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let u = Complex64::new(
                    (a as f64 + 0.5) / n as f64 * lat.w2,
                    (b as f64 + 0.5) / n as f64 * lat.w1.im,
                );
                pts.push((chordal(self.wp(u), t), u));
            }
        }
        pts.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
        pts.into_iter().take(keep).map(|p| p.1).collect()
    }

    fn polish_best(&self, t: Complex64, seeds: &[Complex64]) -> Option<Complex64> {
        let cell = self.lattice.w1.im.min(self.lattice.w2);
        let big = t.norm() > 1e3;
        let mut best: Option<(f64, Complex64)> = None;
        for &s in seeds {
            let mut u = s;
            for _ in 0..80 {
                let p = self.wp(u);
                let d = self.wpd(u);
                let mut step = if big { (p.inv() - t.inv()) / (-d / (p * p)) } else { (p - t) / d };
                if !step.is_finite() {
                    break;
                }
                if step.norm() > cell / 4.0 {
                    step *= cell / 4.0 / step.norm();
                }
                u -= step;
                if step.norm() < 1e-16 * cell {
                    break;
                }
            }
            let err = chordal(self.wp(u), t);
            if err.is_finite() && best.map_or(true, |(e, _)| err < e) {
                best = Some((err, u));
            }
            if err < 1e-15 {
                break;
            }
        }
        match best {
            Some((e, u)) if e < 1e-11 => Some(u),
            _ => None,
        }
    }

    /// `|zeta(w+v) - zeta(w) - zeta(v) - (wp'(w) - wp'(v)) / (2 (wp(w) - wp(v)))|`.
    pub fn zeta_addition_residual(&self, w: Complex64, v: Complex64) -> f64 {
        let lhs = self.zeta(w + v);
        let rhs = self.zeta(w) + self.zeta(v)
            + 0.5 * (self.wpd(w) - self.wpd(v)) / (self.wp(w) - self.wp(v));
        (lhs - rhs).norm() / (1.0 + lhs.norm())
    }

    /// Residual of the addition theorem for `wp`.
    pub fn wp_addition_residual(&self, w: Complex64, v: Complex64) -> f64 {
        let lhs = self.wp(w + v);
        let q = (self.wpd(w) - self.wpd(v)) / (self.wp(w) - self.wp(v));
        let rhs = -self.wp(w) - self.wp(v) + 0.25 * q * q;
        (lhs - rhs).norm() / (1.0 + lhs.norm())
    }

    /// `|zeta(w2/2) w1 - zeta(w1/2) w2 - i pi|`, both constants evaluated
    /// directly from the series.
    pub fn legendre_residual(&self) -> f64 {
        let r = self.zeta_half_real() * self.lattice.w1 - self.zeta_half_imag() * self.lattice.w2;
        (r - I * PI).norm()
    }

    /// Compares `wp` on the lattice `(w1, w2/p)` with the sum of shifted copies
    /// of `wp` on `(w1, w2)`.
    pub fn landen_residual(&self, u: Complex64, p: usize) -> f64 {
        let lat = self.lattice;
        let fine = Weierstrass::new(Lattice { w1: lat.w1, w2: lat.w2 / p as f64 });
        let mut rhs = self.wp(u);
        for l in 1..p {
            let s = c(l as f64 * lat.w2 / p as f64);
            rhs += self.wp(u + s) - self.wp(s);
        }
        let lhs = fine.wp(u);
        (lhs - rhs).norm() / (1.0 + lhs.norm())
    }

    /// `phi(u) = w1/(2 pi i) zeta(u) - u/(i pi) zeta(w1/2)`: w1-periodic and
    /// increases by 1 under `u -> u + w2`. Its only pole in a cell is at the
    /// origin, simple, with residue `w1/(2 pi i)`.
    pub fn phi(&self, u: Complex64) -> Complex64 {
        let w1 = self.lattice.w1;
        w1 / (2.0 * PI * I) * self.zeta(u) - u / (I * PI) * self.zeta_half_imag()
    }

    pub fn phi_prime(&self, u: Complex64) -> Complex64 {
        let w1 = self.lattice.w1;
        -w1 / (2.0 * PI * I) * self.wp(u) - self.zeta_half_imag() / (I * PI)
    }
}

/// Invariants `(g2, g3)` from the three roots of `4t^3 - g2 t - g3`.
pub fn invariants_from_roots(e1: f64, e2: f64, e3: f64) -> (f64, f64) {
    (-4.0 * (e1 * e2 + e1 * e3 + e2 * e3), 4.0 * e1 * e2 * e3)
}

/// Chordal distance on the Riemann sphere.
pub fn chordal(a: Complex64, b: Complex64) -> f64 {
    if !a.is_finite() && !b.is_finite() {
        return 0.0;
    }
    if !a.is_finite() {
        return 1.0 / (1.0 + b.norm_sqr()).sqrt();
    }
    if !b.is_finite() {
        return 1.0 / (1.0 + a.norm_sqr()).sqrt();
    }
    (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
}
