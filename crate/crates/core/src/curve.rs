//! The kernel curve: discriminants, branch points and periods.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::check_weight;
use crate::poly::Poly;
use crate::quad::{chebyshev_integral, doubling, legendre_integral};
use crate::stepset::StepSet;

/// Relative agreement required between two successive quadrature levels.
pub const QUAD_REL_TOL: f64 = 1e-14;

/// Real branch points ordered as `x1 < x2` in `(-1, 1)`, `x3 > 1` the next
/// root to the right, and `x4` the remaining root (`None` when it is at
/// infinity).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BranchPoints {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: Option<f64>,
}

impl BranchPoints {
    pub fn as_array(&self) -> [Option<f64>; 4] {
        [Some(self.p1), Some(self.p2), Some(self.p3), self.p4]
    }
}

fn quadratic_poly(q: [[f64; 3]; 3]) -> (Poly, Poly, Poly) {
    (Poly::new(q[0].to_vec()), Poly::new(q[1].to_vec()), Poly::new(q[2].to_vec()))
}

/// Discriminant of `K(x,y)` viewed as a quadratic in y, as a polynomial in x.
pub fn discriminant_x(steps: &StepSet, z: f64) -> Poly {
    let (a, b, c) = quadratic_poly(steps.x_quadratic(z));
    b.mul(&b).sub(&a.mul(&c).scale(4.0))
}

/// Discriminant of `K(x,y)` viewed as a quadratic in x, as a polynomial in y.
pub fn discriminant_y(steps: &StepSet, z: f64) -> Poly {
    discriminant_x(&steps.transpose(), z)
}

/// Orders the roots of a discriminant of degree 3 or 4.
pub fn branch_points(d: &Poly) -> Result<BranchPoints> {
    let deg = d.degree();
    if !(3..=4).contains(&deg) {
        return Err(Error::BranchPoints(format!("discriminant has degree {deg}")));
    }
    let roots = d.roots();
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    if roots.iter().any(|r| r.im.abs() > 1e-9 * scale) {
        return Err(Error::BranchPoints(format!("non-real branch points {roots:?}")));
    }
    let mut re: Vec<f64> = roots.iter().map(|r| r.re).collect();
    re.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let inside: Vec<usize> = (0..re.len()).filter(|&k| re[k].abs() < 1.0).collect();
    if inside.len() != 2 || inside[1] != inside[0] + 1 {
        return Err(Error::BranchPoints(format!("expected two roots in (-1,1), got {re:?}")));
    }
    let (k1, k2) = (inside[0], inside[1]);
    if k2 + 1 >= re.len() {
        return Err(Error::BranchPoints(format!("no branch point right of x2 in {re:?}")));
    }
    let (p1, p2, p3) = (re[k1], re[k2], re[k2 + 1]);
    let p4 = if deg == 3 {
        None
    } else {
        Some(re.iter().enumerate().find(|(k, _)| ![k1, k2, k2 + 1].contains(k)).unwrap().1.to_owned())
    };
    if let Some(p) = p4 {
        if p.abs() <= 1.0 {
            return Err(Error::BranchPoints(format!("fourth branch point {p} inside unit disc")));
        }
    }
    if d.eval((p1 + p2) / 2.0) >= 0.0 || d.eval((p2 + p3) / 2.0) <= 0.0 {
        return Err(Error::BranchPoints("discriminant has unexpected signs".into()));
    }
    Ok(BranchPoints { p1, p2, p3, p4 })
}

/// Integral of `1 / sqrt(sigma * p(x))` over `[a, b]`. Endpoints flagged as
/// singular must be roots of `p`; they are divided out before evaluation.
pub fn segment_integral(
    p: &Poly,
    a: f64,
    b: f64,
    sing_a: bool,
    sing_b: bool,
    sigma: f64,
    label: &str,
) -> Result<f64> {
    let bad = std::cell::Cell::new(false);
    let root = |v: f64| {
        if v <= 0.0 {
            bad.set(true);
            f64::NAN
        } else {
            v.sqrt()
        }
    };
    let (val, delta) = match (sing_a, sing_b) {
        (true, true) => {
            let r = p.deflate(a).deflate(b);
            let (m, h) = ((a + b) / 2.0, (b - a) / 2.0);
            doubling(
                &|n| chebyshev_integral(&|t| 1.0 / root(-sigma * r.eval(m + h * t)), n),
                32,
                1 << 18,
                QUAD_REL_TOL,
            )
        }
        (false, true) => {
            let q = p.deflate(b);
            let l = b - a;
            doubling(
                &|n| legendre_integral(&|u| 2.0 * l.sqrt() / root(-sigma * q.eval(b - l * u * u)), 0.0, 1.0, n),
                16,
                2048,
                QUAD_REL_TOL,
            )
        }
        (true, false) => {
            let q = p.deflate(a);
            let l = b - a;
            doubling(
                &|n| legendre_integral(&|u| 2.0 * l.sqrt() / root(sigma * q.eval(a + l * u * u)), 0.0, 1.0, n),
                16,
                2048,
                QUAD_REL_TOL,
            )
        }
        (false, false) => doubling(
            &|n| legendre_integral(&|x| 1.0 / root(sigma * p.eval(x)), a, b, n),
            16,
            2048,
            QUAD_REL_TOL,
        ),
    };
    if bad.get() || !val.is_finite() {
        return Err(Error::ComplexIntegrand(label.to_string()));
    }
    if delta > 1e-11 * val.abs() {
        return Err(Error::Quadrature { what: label.to_string(), delta });
    }
    Ok(val)
}

/// Branch-point data of the curve `K(x,y;z) = 0`.
#[derive(Clone, Debug)]
pub struct Curve {
    pub steps: StepSet,
    pub z: f64,
    pub dx: Poly,
    pub dy: Poly,
    pub xb: BranchPoints,
    pub yb: BranchPoints,
}

/// Periods of the elliptic curve.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Periods {
    /// purely imaginary period
    pub w1: Complex64,
    /// real period
    pub w2: f64,
    /// shift between the x and y parametrizations
    pub w3: f64,
}

impl Periods {
    pub fn ratio(&self) -> f64 {
        self.w3 / self.w2
    }
}

impl Curve {
    pub fn new(steps: &StepSet, z: f64) -> Result<Self> {
        check_weight(steps, z)?;
        let c = steps.classify()?;
        if c.kind != crate::stepset::ModelKind::NonSingular {
            return Err(Error::NotNonSingular(format!("{steps} is {:?}", c.kind)));
        }
        let dx = discriminant_x(steps, z);
        let dy = discriminant_y(steps, z);
        let xb = branch_points(&dx)?;
        let yb = branch_points(&dy)?;
        Ok(Curve { steps: *steps, z, dx, dy, xb, yb })
    }

    /// `a(x)`, `b(x)`, `c(x)` evaluated at x.
    pub fn abc_x(&self, x: Complex64) -> (Complex64, Complex64, Complex64) {
        let q = self.steps.x_quadratic(self.z);
        let ev = |p: [f64; 3]| p[0] + x * (p[1] + x * p[2]);
        (ev(q[0]), ev(q[1]), ev(q[2]))
    }

    pub fn abc_y(&self, y: Complex64) -> (Complex64, Complex64, Complex64) {
        let q = self.steps.y_quadratic(self.z);
        let ev = |p: [f64; 3]| p[0] + y * (p[1] + y * p[2]);
        (ev(q[0]), ev(q[1]), ev(q[2]))
    }

    /// The double root in x of `K(x, y1) = 0`, or `None` if it is at infinity.
    pub fn x_of_y1(&self) -> Option<f64> {
        let (a, b, _) = self.abc_y(Complex64::new(self.yb.p1, 0.0));
        if a.norm() < 1e-300 {
            None
        } else {
            Some((-b / (2.0 * a)).re)
        }
    }

    /// The double root in y of `K(x1, y) = 0`.
    pub fn y_of_x1(&self) -> Option<f64> {
        let (a, b, _) = self.abc_x(Complex64::new(self.xb.p1, 0.0));
        if a.norm() < 1e-300 {
            None
        } else {
            Some((-b / (2.0 * a)).re)
        }
    }

    pub fn periods(&self) -> Result<Periods> {
        let d = &self.dx;
        let b = self.xb;
        let w1 = segment_integral(d, b.p1, b.p2, true, true, -1.0, "w1")?;
        let w2 = segment_integral(d, b.p2, b.p3, true, true, 1.0, "w2")?;
        let w3 = self.third_period()?;
        if !(w3 > 0.0 && w3 < w2) {
            return Err(Error::BranchPoints(format!("w3 = {w3} outside (0, w2 = {w2})")));
        }
        Ok(Periods { w1: Complex64::new(0.0, w1), w2, w3 })
    }

    fn third_period(&self) -> Result<f64> {
        let d = &self.dx;
        let b = self.xb;
        let x1 = b.p1;
        let roots: Vec<f64> = b.as_array().iter().flatten().copied().collect();
        let rev = d.reversed(4);
        let tail = |start: Option<f64>| -> Result<f64> {
            // from `start` (or +infinity) through infinity down to -1, then to x1
            let mut s = 0.0;
            if let Some(xs) = start {
                s += segment_integral(&rev, 0.0, 1.0 / xs, false, false, 1.0, "w3")?;
            }
            s += segment_integral(&rev, -1.0, 0.0, false, false, 1.0, "w3")?;
            s += segment_integral(d, -1.0, x1, false, true, 1.0, "w3")?;
            Ok(s)
        };
        match self.x_of_y1() {
            None => {
                if d.degree() == 3 {
                    return Err(Error::BranchPoints("X(y1) coincides with the branch point at infinity".into()));
                }
                tail(None)
            }
            Some(xs) if xs < x1 => {
                if roots.iter().any(|&r| r > xs && r < x1) {
                    return Err(Error::BranchPoints(format!("branch point between X(y1) = {xs} and x1")));
                }
                let sing = d.eval(xs).abs() < 1e-13 * (1.0 + d.deriv_at(1, xs).abs());
                segment_integral(d, xs, x1, sing, true, 1.0, "w3")
            }
            Some(xs) => {
                if roots.iter().any(|&r| r > xs) || d.degree() == 3 || xs <= 0.0 {
                    return Err(Error::BranchPoints(format!("X(y1) = {xs} is not on the arc ending at x1")));
                }
                tail(Some(xs))
            }
        }
    }
}
