//! Elliptic parametrization of the kernel curve.
//!
//! `x(w) = g_x^{-1}(wp(w))` and `y(w) = g_y^{-1}(wp(w - w3/2))` on the lattice
//! `(w1, w2)`, where `g_x` is the Moebius (or affine) map sending the branch
//! points `x_i` to the half-period values of `wp`.

use num_complex::Complex64;
use serde::Serialize;

use crate::curve::{Curve, Periods};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::stepset::StepSet;
use crate::wfun::{Lattice, Weierstrass};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `g(t) = c0 + c1/(t - p4)` when the fourth branch point is finite,
/// `g(t) = c0 + c1 t` otherwise.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GMap {
    pub p4: Option<f64>,
    pub c0: f64,
    pub c1: f64,
}

impl GMap {
    pub fn from_discriminant(d: &Poly, p4: Option<f64>) -> Self {
        match p4 {
            Some(p) => GMap { p4, c0: d.deriv_at(2, p) / 6.0, c1: d.deriv_at(1, p) },
            None => GMap { p4, c0: d.deriv_at(2, 0.0) / 6.0, c1: d.deriv_at(3, 0.0) / 6.0 },
        }
    }

    pub fn apply(&self, t: Complex64) -> Complex64 {
        match self.p4 {
            Some(p) => self.c0 + self.c1 / (t - p),
            None => self.c0 + self.c1 * t,
        }
    }

    /// Value of `g` at infinity.
    pub fn at_infinity(&self) -> Complex64 {
        match self.p4 {
            Some(_) => c(self.c0),
            None => Complex64::new(f64::INFINITY, 0.0),
        }
    }

    pub fn inverse(&self, w: Complex64) -> Complex64 {
        match self.p4 {
            Some(p) => p + self.c1 / (w - self.c0),
            None => (w - self.c0) / self.c1,
        }
    }

    /// Derivative of `g^{-1}(wp(u))` given `wp(u)` and `wp'(u)`.
    pub fn inverse_deriv(&self, w: Complex64, wd: Complex64) -> Complex64 {
        match self.p4 {
            Some(_) => -self.c1 * wd / ((w - self.c0) * (w - self.c0)),
            None => wd / self.c1,
        }
    }
}

/// Named points of the parametrization inside the fundamental cell.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct NamedPoints {
    pub wx1: Complex64,
    pub wx2: Complex64,
    pub wx3: Complex64,
    pub wx4: Complex64,
    pub wy1: Complex64,
    pub wy2: Complex64,
    pub wy3: Complex64,
    pub wy4: Complex64,
}

#[derive(Clone, Debug)]
pub struct Uniformization {
    pub curve: Curve,
    pub periods: Periods,
    pub wf: Weierstrass,
    pub gx: GMap,
    pub gy: GMap,
    pub named: NamedPoints,
}

impl Uniformization {
    pub fn new(steps: &StepSet, z: f64) -> Result<Self> {
        let curve = Curve::new(steps, z)?;
        let periods = curve.periods()?;
        Self::from_parts(curve, periods)
    }

    pub fn from_parts(curve: Curve, periods: Periods) -> Result<Self> {
        let wf = Weierstrass::new(Lattice::new(periods.w1, periods.w2)?);
        let gx = GMap::from_discriminant(&curve.dx, curve.xb.p4);
        let gy = GMap::from_discriminant(&curve.dy, curve.yb.p4);
        let (w1, w2, w3) = (periods.w1, c(periods.w2), c(periods.w3));
        let wx4 = c(0.0);
        let wx1 = w2 / 2.0;
        let wx3 = w1 / 2.0;
        let wx2 = (w1 + w2) / 2.0;
        let named = NamedPoints {
            wx1,
            wx2,
            wx3,
            wx4,
            wy1: wx1 + w3 / 2.0,
            wy2: wx2 + w3 / 2.0,
            wy3: wx3 + w3 / 2.0,
            wy4: wx4 + w3 / 2.0,
        };
        let u = Uniformization { curve, periods, wf, gx, gy, named };
        u.check_invariants()?;
        Ok(u)
    }

    /// The Moebius maps must send the branch points onto the half-period
    /// values of `wp`.
    fn check_invariants(&self) -> Result<()> {
        let wf = &self.wf;
        for (g, b) in [(&self.gx, &self.curve.xb), (&self.gy, &self.curve.yb)] {
            let e = [g.apply(c(b.p1)).re, g.apply(c(b.p2)).re, g.apply(c(b.p3)).re];
            let want = [wf.e1, wf.e2, wf.e3];
            let scale = 1.0 + wf.e1.abs().max(wf.e3.abs());
            for (a, w) in e.iter().zip(want) {
                if (a - w).abs() > 1e-8 * scale {
                    return Err(Error::BranchPoints(format!(
                        "Moebius images {e:?} do not match half-period values {want:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn steps(&self) -> &StepSet {
        &self.curve.steps
    }

    pub fn z(&self) -> f64 {
        self.curve.z
    }

    pub fn w1(&self) -> Complex64 {
        self.periods.w1
    }

    pub fn w2(&self) -> f64 {
        self.periods.w2
    }

    pub fn w3(&self) -> f64 {
        self.periods.w3
    }

    pub fn x(&self, w: Complex64) -> Complex64 {
        self.gx.inverse(self.wf.wp(w))
    }

    pub fn y(&self, w: Complex64) -> Complex64 {
        self.gy.inverse(self.wf.wp(w - self.w3() / 2.0))
    }

    pub fn xd(&self, w: Complex64) -> Complex64 {
        self.gx.inverse_deriv(self.wf.wp(w), self.wf.wpd(w))
    }

    pub fn yd(&self, w: Complex64) -> Complex64 {
        let u = w - self.w3() / 2.0;
        self.gy.inverse_deriv(self.wf.wp(u), self.wf.wpd(u))
    }

    /// Reflection fixing x: `w -> -w + 2 w_{x2}`.
    pub fn xi_hat(&self, w: Complex64) -> Complex64 {
        -w + 2.0 * self.named.wx2
    }

    /// Reflection fixing y: `w -> -w + 2 w_{y2}`.
    pub fn eta_hat(&self, w: Complex64) -> Complex64 {
        -w + 2.0 * self.named.wy2
    }

    /// `|K(x(w), y(w))|` scaled by the size of the monomials involved.
    pub fn kernel_residual(&self, w: Complex64) -> f64 {
        let (x, y) = (self.x(w), self.y(w));
        let k = self.steps().kernel(x, y, self.z());
        let scale = (1.0 + x.norm()).powi(2) * (1.0 + y.norm()).powi(2);
        k.norm() / scale
    }

    /// `f_y(w) = x(w) [y(xi_hat w) - y(w)]`.
    pub fn f_y(&self, w: Complex64) -> Complex64 {
        self.x(w) * (self.y(self.xi_hat(w)) - self.y(w))
    }

    /// `f_y` through `x'(w) x(w) / (2 a(x(w)))`.
    pub fn f_y_deriv(&self, w: Complex64) -> Complex64 {
        let x = self.x(w);
        let (a, _, _) = self.curve.abc_x(x);
        self.xd(w) * x / (2.0 * a)
    }

    /// `f_x(w) = y(w) [x(eta_hat w) - x(w)]`.
    pub fn f_x(&self, w: Complex64) -> Complex64 {
        self.y(w) * (self.x(self.eta_hat(w)) - self.x(w))
    }

    /// `f_x` through `-y'(w) y(w) / (2 a~(y(w)))`. The sign is opposite to
    /// the x-side formula because `y` is parametrized by `w - w3/2`, which
    /// reverses the orientation of the two sheets.
    pub fn f_x_deriv(&self, w: Complex64) -> Complex64 {
        let y = self.y(w);
        let (a, _, _) = self.curve.abc_y(y);
        -self.yd(w) * y / (2.0 * a)
    }

    /// The two solutions of `x(w) = t` in the period cell, as `(w, xi_hat w)`.
    pub fn solve_x(&self, t: Complex64) -> Result<(Complex64, Complex64)> {
        let target = if t.is_finite() { self.gx.apply(t) } else { self.gx.at_infinity() };
        let w = if target.is_finite() { self.wf.wp_invert(target)? } else { c(0.0) };
        let lat = self.wf.lattice();
        Ok((lat.reduce(w), lat.reduce(self.xi_hat(w))))
    }

    /// The two solutions of `y(w) = t`, reduced to the cell shifted by `w3/2`.
    pub fn solve_y(&self, t: Complex64) -> Result<(Complex64, Complex64)> {
        let target = if t.is_finite() { self.gy.apply(t) } else { self.gy.at_infinity() };
        let u = if target.is_finite() { self.wf.wp_invert(target)? } else { c(0.0) };
        let w = u + self.w3() / 2.0;
        Ok((w, self.eta_hat(w)))
    }

    /// Membership in the strip around `Re w = w2/2` where `|x(w)| < 1`.
    pub fn in_delta_x(&self, w: Complex64) -> bool {
        self.in_strip(w, self.named.wx2.re, &|u| self.x(u))
    }

    /// Membership in the strip around `Re w = Re w_{y2}` where `|y(w)| < 1`.
    pub fn in_delta_y(&self, w: Complex64) -> bool {
        self.in_strip(w, self.named.wy2.re, &|u| self.y(u))
    }

    fn in_strip(&self, w: Complex64, centre: f64, f: &dyn Fn(Complex64) -> Complex64) -> bool {
        const BAND: f64 = 1.0 - 1e-12;
        if (w.re - centre).abs() >= self.w2() / 2.0 {
            return false;
        }
        if !(f(w).norm() < BAND) {
            return false;
        }
        let n = 24;
        (1..n).all(|k| {
            let t = k as f64 / n as f64;
            let u = Complex64::new(centre + t * (w.re - centre), w.im);
            f(u).norm() < BAND
        })
    }

    /// Maximum of `|2 a(x) y + b(x) + x'/2|` over the given points.
    pub fn derivative_identity_residual(&self, w: Complex64) -> f64 {
        let x = self.x(w);
        let (a, b, _) = self.curve.abc_x(x);
        let r = 2.0 * a * self.y(w) + b + self.xd(w) / 2.0;
        r.norm() / (1.0 + self.xd(w).norm())
    }
}
