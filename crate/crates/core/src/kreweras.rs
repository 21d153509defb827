//! Closed forms for Kreweras' walks `{NE, W, S}`, and the quasi-periodic
//! decomposition of the simple walk.
//!
//! For Kreweras `w3/w2 = 2/3`, `r_y` is elliptic on the doubled lattice
//! `(w1, 2 w2)` and is a combination of four zeta functions there. The
//! algebraic expressions for `Q(0,0)` and `Q(x,0)` follow from the
//! transformation between `wp` and the doubled-lattice `wp_{1,2}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::stepset::StepSet;
use crate::unif::Uniformization;
use crate::wfun::{Lattice, Weierstrass};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Sign of `sqrt(x1)` in the half-period shift of `x`; fixed by
/// `tests::half_shift_matches_parametrization`.
pub const SQRT_X1_SIGN: f64 = 1.0;
/// Sign of `sqrt(A0)` relative to `(B0 + B1 x1) / sqrt(1 - x1 W^2)`; fixed by
/// `tests::special_values_on_doubled_lattice`.
pub const SQRT_A0_SIGN: f64 = -1.0;

/// The power series `W = z (2 + W^3)`.
pub fn solve_w(z: f64) -> Result<f64> {
    if !(z > 0.0 && z < 1.0 / 3.0) {
        return Err(Error::WeightOutOfRange { z, max: 1.0 / 3.0 });
    }
    let mut w = 2.0 * z;
    for _ in 0..200 {
        // Newton on W - z(2 + W^3)
        let f = w - z * (2.0 + w * w * w);
        let d = 1.0 - 3.0 * z * w * w;
        let next = w - f / d;
        if (next - w).abs() <= 1e-16 * next.abs() {
            return Ok(next);
        }
        w = next;
    }
    Err(Error::NoConvergence(format!("W at z = {z}")))
}

/// `Q(0,0) = (W - W^4/4) / (2z)`.
pub fn q00_closed(z: f64) -> Result<f64> {
    let w = solve_w(z)?;
    Ok((w - w.powi(4) / 4.0) / (2.0 * z))
}

/// `Q(x,0) = Q(0,x) = (1/(zx)) (1/(2z) - 1/x - (1/W - 1/x) sqrt(1 - x W^2))`
/// with the principal square root.
pub fn qx0_closed(z: f64, x: Complex64) -> Result<Complex64> {
    let w = solve_w(z)?;
    if x.norm() == 0.0 {
        return q00_closed(z).map(c);
    }
    let inv = x.inv();
    let s = (1.0 - x * w * w).sqrt();
    Ok(inv / z * (1.0 / (2.0 * z) - inv - (1.0 / w - inv) * s))
}

/// Real roots of `4X^3 - g2 X + g3 = 0`, ascending (trigonometric method).
pub fn cubic_roots(g2: f64, g3: f64) -> Result<[f64; 3]> {
    // X^3 + p X + q with p = -g2/4, q = g3/4
    let (p, q) = (-g2 / 4.0, g3 / 4.0);
    if p >= 0.0 {
        return Err(Error::InvalidArgument("cubic has a single real root".into()));
    }
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
    let th = arg.acos() / 3.0;
    let mut r = [0.0; 3];
    for (k, v) in r.iter_mut().enumerate() {
        *v = m * (th - 2.0 * PI * k as f64 / 3.0).cos();
    }
    r.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(r)
}

/// Data of the Kreweras chain at one weight.
#[derive(Clone, Debug, Serialize)]
pub struct KrewerasConstants {
    pub z: f64,
    pub w: f64,
    pub g2: f64,
    pub g3: f64,
    /// the root that is a power series in `z`, near 2/3
    pub r: f64,
    pub r_tilde: f64,
    pub r_hat: f64,
    pub e2_12: f64,
    pub g2_12: f64,
    pub g3_12: f64,
    pub x1: f64,
    pub sqrt_x1: f64,
    pub b0: f64,
    /// `3 (r - 2 r_tilde)`, the value forced by `wp12(w2/2) = B1/12`
    pub b1: f64,
    /// `3 (r - r_tilde)`, kept for comparison; it does not satisfy the
    /// identities above
    pub b1_alt: f64,
    pub a0: f64,
    pub sqrt_a0: f64,
    pub c1: f64,
    /// additive constant of the zeta expression
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

/// The Kreweras uniformization with the doubled-lattice evaluator.
#[derive(Clone, Debug)]
pub struct Kreweras {
    pub u: Uniformization,
    /// `wp`, `zeta` with periods `(w1, 2 w2)`
    pub wf12: Weierstrass,
    pub k: KrewerasConstants,
}

impl Kreweras {
    pub fn new(z: f64) -> Result<Self> {
        let u = Uniformization::new(&StepSet::kreweras(), z)?;
        let wf12 = Weierstrass::new(Lattice::new(u.w1(), 2.0 * u.w2())?);
        let w = solve_w(z)?;
        let z3 = z * z * z;
        let g2 = 4.0 / 3.0 - 32.0 * z3;
        let g3 = -8.0 / 27.0 + 32.0 * z3 / 3.0 - 64.0 * z3 * z3;
        let [r_tilde, r_hat, r] = cubic_roots(g2, g3)?;
        let e2_12 = r / 2.0;
        let g2_12 = 15.0 * r * r / 4.0 - g2 / 4.0;
        let g3_12 = 11.0 * g3 / 32.0 - 7.0 * r * g2 / 32.0;
        let x1 = u.curve.xb.p1;
        let sqrt_x1 = SQRT_X1_SIGN * x1.sqrt();
        let b0 = -(2.0 * x1 + 24.0 * z * z * sqrt_x1 + 3.0 * r * x1);
        let b1 = 3.0 * (r - 2.0 * r_tilde);
        let b1_alt = 3.0 * (r - r_tilde);
        let s1 = (1.0 - x1 * w * w).sqrt();
        let a0 = (b0 + b1 * x1).powi(2) / (1.0 - x1 * w * w);
        let sqrt_a0 = SQRT_A0_SIGN * (b0 + b1 * x1) / s1;
        let c1 = 2.0 * x1 * b1 * b0 - 2.0 * b1 * sqrt_a0 * x1 - 2.0 * sqrt_a0 * b0 + x1 * x1 * b1 * b1 + a0 + b0 * b0;
        let w2 = u.w2();
        let zt = |v: f64| wf12.zeta(c(v)).re;
        let cst = (zt(w2 / 3.0) - zt(4.0 * w2 / 3.0)) / (2.0 * z) + (zt(w2) - zt(2.0 * w2 / 3.0)) / z;
        let pd_half = wf12.wpd(c(w2 / 2.0)).re;
        let pd_sixth = wf12.wpd(c(w2 / 6.0)).re;
        let alpha = cst + zt(w2 / 2.0) / z - 2.0 * zt(w2 / 6.0) / z
            - 6.0 * pd_half * (b0 + b1 * x1) / (z * a0 * w * w)
            + 12.0 * x1 * pd_sixth * (b0 - sqrt_a0 + b1 * x1) / (c1 * z);
        let beta = 12.0 * x1 * x1 * sqrt_a0 * pd_sixth / (c1 * z);
        let gamma = 6.0 * pd_half / (z * sqrt_a0 * w * w);
        let delta = -12.0 * x1 * x1 * sqrt_a0 * pd_sixth / (c1 * z);
        let k = KrewerasConstants {
            z,
            w,
            g2,
            g3,
            r,
            r_tilde,
            r_hat,
            e2_12,
            g2_12,
            g3_12,
            x1,
            sqrt_x1,
            b0,
            b1,
            b1_alt,
            a0,
            sqrt_a0,
            c1,
            c: cst,
            alpha,
            beta,
            gamma,
            delta,
        };
        Ok(Kreweras { u, wf12, k })
    }

    /// `r_y(w) = c + (1/2z) zeta12(w + 2w2/3) - (1/z) zeta12(w + w2/3)
    ///   + (1/z) zeta12(w) - (1/2z) zeta12(w - w2/3)`.
    pub fn ry_zeta(&self, w: Complex64) -> Complex64 {
        let (z, w2) = (self.k.z, self.u.w2());
        let zt = |v: Complex64| self.wf12.zeta(v);
        self.k.c + zt(w + 2.0 * w2 / 3.0) / (2.0 * z) - zt(w + w2 / 3.0) / z + zt(w) / z
            - zt(w - w2 / 3.0) / (2.0 * z)
    }

    /// `Q(0,0)` from four values of `wp12`.
    pub fn q00_wp12(&self) -> f64 {
        let (z, w2) = (self.k.z, self.u.w2());
        let p = |v: f64| self.wf12.wp(c(v)).re;
        (p(w2 / 3.0) - p(4.0 * w2 / 3.0) + 2.0 * (p(w2) - p(2.0 * w2 / 3.0))) / (4.0 * z.powi(3))
    }

    /// `Q(0,0)` from the power-series root `r`.
    pub fn q00_from_r(&self) -> f64 {
        let (z, r) = (self.k.z, self.k.r);
        (-1.0 / 3.0 + r / 2.0 + 2.0 * self.disc_r().sqrt()) / (4.0 * z.powi(3))
    }

    fn disc_r(&self) -> f64 {
        let (z, r) = (self.k.z, self.k.r);
        -2.0 / 9.0 - r / 3.0 + r * r + 8.0 * z.powi(3)
    }

    /// `wp12(w2/3)` and `wp12(2 w2/3)` from `wp = 1/3` at both points.
    pub fn wp12_thirds(&self) -> (f64, f64) {
        let base = 1.0 / 3.0 + self.k.r / 2.0;
        let s = self.disc_r().sqrt();
        ((base + s) / 2.0, (base - s) / 2.0)
    }

    /// `wp12` from `wp` at the same point; `sign` picks the half cell.
    pub fn wp12_from_wp(&self, wp: Complex64, sign: f64) -> Complex64 {
        let e = self.k.e2_12;
        let d = (wp - e) * (wp - e) + self.k.g2_12 - 12.0 * e * e;
        (wp + e + sign * d.sqrt()) / 2.0
    }

    /// `x(w + w2/2)` from `x(w)`.
    pub fn x_half_shift(&self, x: Complex64) -> Complex64 {
        let s = self.k.sqrt_x1;
        s * (s * x + 1.0) / (x - self.k.x1)
    }

    /// `wp12(w + w2/2)` from `x(w)`.
    pub fn wp12_half_shift(&self, x: Complex64) -> Complex64 {
        let k = &self.k;
        (k.b0 + k.b1 * x + k.sqrt_a0 * self.root(x)) / (12.0 * (x - k.x1))
    }

    fn root(&self, x: Complex64) -> Complex64 {
        (1.0 - x * self.k.w * self.k.w).sqrt()
    }

    /// `(wp12(w2/2), wp12(w2/6))` from `B0`, `B1`, `A0`.
    pub fn special_values_12(&self) -> (f64, f64) {
        let k = &self.k;
        (k.b1 / 12.0, (k.sqrt_a0 - k.b0) / (12.0 * k.x1))
    }

    /// `1/(wp12(w + w2/2) - wp12(w2/2))` and `1/(wp12(w + w2/2) - wp12(w2/6))`
    /// from `x(w)`.
    pub fn reciprocals(&self, x: Complex64) -> (Complex64, Complex64) {
        let k = &self.k;
        let s = self.root(x);
        let w2 = k.w * k.w;
        let u1 = 12.0 / (k.a0 * w2) * (k.b0 + k.b1 * k.x1 - k.sqrt_a0 * s);
        let u2 = 12.0 * k.x1 / (k.c1 * x)
            * (k.sqrt_a0 * k.x1 + (k.b0 - k.sqrt_a0 + k.b1 * k.x1) * x - k.x1 * k.sqrt_a0 * s);
        (u1, u2)
    }

    /// `r_y(w + w3/2) = alpha + beta/x + (gamma + delta/x) sqrt(1 - x W^2)`
    /// with `x = x(w)` and the computed constants.
    pub fn ry_shifted_algebraic(&self, x: Complex64) -> Complex64 {
        let k = &self.k;
        k.alpha + k.beta / x + (k.gamma + k.delta / x) * self.root(x)
    }

    /// `|alpha - 1/(2z)|, |beta + 1|, |gamma + 1/W|, |delta - 1|`.
    pub fn constants_check(&self) -> [f64; 4] {
        let k = &self.k;
        [
            (k.alpha - 1.0 / (2.0 * k.z)).abs(),
            (k.beta + 1.0).abs(),
            (k.gamma + 1.0 / k.w).abs(),
            (k.delta - 1.0).abs(),
        ]
    }
}

/// The simple walk split as `r_y = phi (f_y(w) + f_y(w + w2/2)) + R + const`
/// with `R` elliptic.
#[derive(Clone, Debug)]
pub struct SrwDecomposition<'a> {
    pub u: &'a Uniformization,
    /// `(coefficient of wp, coefficient of zeta, centre)` for the four terms
    pub terms: Vec<(Complex64, Complex64, f64)>,
}

impl<'a> SrwDecomposition<'a> {
    pub fn new(u: &'a Uniformization) -> Result<Self> {
        if *u.steps() != StepSet::simple() {
            return Err(Error::InvalidArgument("decomposition is for the simple walk".into()));
        }
        let (z, w2) = (u.z(), u.w2());
        let k = 1.0 / (4.0 * z * z);
        let wf = &u.wf;
        let (phi, dphi) = (|v: f64| wf.phi(c(v)), |v: f64| wf.phi_prime(c(v)));
        let a = [w2 / 8.0, 3.0 * w2 / 8.0, 5.0 * w2 / 8.0, 7.0 * w2 / 8.0];
        let terms = vec![
            (-(1.0 + phi(a[0])) * k, -dphi(a[0]) * k, a[0]),
            (phi(a[1]) * k, dphi(a[1]) * k, a[1]),
            (-phi(a[2]) * k, -dphi(a[2]) * k, a[2]),
            (phi(a[3]) * k, dphi(a[3]) * k, a[3]),
        ];
        Ok(SrwDecomposition { u, terms })
    }

    /// The elliptic part `R(w)` built from the principal parts.
    pub fn r_elliptic(&self, w: Complex64) -> Complex64 {
        let wf = &self.u.wf;
        self.terms.iter().map(|&(p, q, a)| p * wf.wp(w - a) + q * wf.zeta(w - a)).sum()
    }

    /// `r_y(w) - phi(w) [f_y(w) + f_y(w + w2/2)]` for a given `r_y(w)`.
    pub fn quasi_removed(&self, w: Complex64, r_y: Complex64) -> Complex64 {
        let u = self.u;
        r_y - u.wf.phi(w) * (u.f_y_deriv(w) + u.f_y_deriv(w + u.w2() / 2.0))
    }

    /// `quasi_removed - R`, constant in `w` when the decomposition holds.
    pub fn discrepancy(&self, w: Complex64, r_y: Complex64) -> Complex64 {
        self.quasi_removed(w, r_y) - self.r_elliptic(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cont::Continuation;
    use crate::oracle::{Axis, CountTable};
    use crate::rat::Ratio;
    use crate::series::{SeriesConfig, SeriesModel};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    fn samples(u: &Uniformization) -> Vec<Complex64> {
        (0..6)
            .map(|j| Complex64::new((0.13 + 0.29 * j as f64) * u.w2(), (0.11 + 0.17 * j as f64) * u.w1().im))
            .collect()
    }

    #[test]
    fn w_and_closed_forms() {
        let w = solve_w(0.1).unwrap();
        assert!((w - 0.1 * (2.0 + w.powi(3))).abs() < 1e-15);
        assert!((w - 0.2008098).abs() < 1e-7);
        // series 2z + 8z^4 + 96z^7
        let z: f64 = 0.01;
        let s = 2.0 * z + 8.0 * z.powi(4) + 96.0 * z.powi(7);
        assert!((solve_w(z).unwrap() - s).abs() < 1e-14);
        // excursions 1 + 2z^3 + 16z^6 + 192z^9 + ...
        let q = q00_closed(0.1).unwrap();
        assert!((q - 1.0020162).abs() < 1e-7);
        let t = CountTable::new(&StepSet::kreweras(), 40).evaluator();
        for z in [0.05, 0.1, 0.2] {
            let o = t.boundary_gf(Axis::Origin, c(0.0), z);
            assert!((q00_closed(z).unwrap() - o.value.re).abs() < 1e-12 + o.tail);
        }
        let o = t.boundary_gf(Axis::X, c(0.3), 0.1);
        assert!((qx0_closed(0.1, c(0.3)).unwrap() - o.value).norm() < 1e-6 + o.tail);
        let near = qx0_closed(0.1, c(1e-5)).unwrap();
        assert!((near.re - q).abs() < 1e-4);
        let w = solve_w(0.1).unwrap();
        assert!(qx0_closed(0.1, c(1.0 / (w * w))).unwrap().is_finite());
    }

    #[test]
    fn cubic_roots_and_expansions() {
        let kr = Kreweras::new(0.1).unwrap();
        let k = &kr.k;
        let wf = &kr.u.wf;
        // roots are the negated half-period values
        assert!((k.r + wf.e3).abs() < 1e-10);
        assert!((k.r_hat + wf.e2).abs() < 1e-10);
        assert!((k.r_tilde + wf.e1).abs() < 1e-10);
        let z: f64 = 0.1;
        let want = 2.0 / 3.0 - 4.0 * z * z * (k.w + k.w.powi(4) / 4.0);
        assert!((k.r - want).abs() < 1e-12);
        let z3 = z.powi(3);
        // truncations are O(z^12) and O(z^(21/2)); coefficients grow fast
        assert!((k.r - (2.0 / 3.0 - 8.0 * z3 - 48.0 * z3 * z3 - 640.0 * z3.powi(3))).abs() < 1e-7);
        let h = z.powf(4.5);
        let base = -1.0 / 3.0 + 4.0 * z3 + 24.0 * z3 * z3;
        let base = base + 320.0 * z3.powi(3);
        assert!((k.r_tilde - (base - 8.0 * h - 84.0 * z.powf(7.5))).abs() < 1e-7);
        assert!((k.r_hat - (base + 8.0 * h + 84.0 * z.powf(7.5))).abs() < 1e-7);
    }

    #[test]
    fn doubled_lattice_data() {
        for z in [0.05, 0.1, 0.2] {
            let kr = Kreweras::new(z).unwrap();
            let k = &kr.k;
            let w2 = kr.u.w2();
            assert!((kr.wf12.wp(c(w2)).re - k.e2_12).abs() < 1e-9);
            assert!((kr.wf12.g2 - k.g2_12).abs() < 1e-9);
            assert!((kr.wf12.g3 - k.g3_12).abs() < 1e-9);
            let e = k.e2_12;
            assert!((4.0 * e.powi(3) - k.g2_12 * e - k.g3_12).abs() < 1e-12);
        }
        let kr = Kreweras::new(0.01).unwrap();
        assert!((kr.k.e2_12 - 1.0 / 3.0).abs() < 1e-5);
    }

    #[test]
    fn wp12_transformation() {
        let kr = Kreweras::new(0.1).unwrap();
        let (wf, wf12) = (&kr.u.wf, &kr.wf12);
        let w2 = kr.u.w2();
        for w in samples(&kr.u) {
            let direct = wf12.wp(w);
            let a = kr.wp12_from_wp(wf.wp(w), 1.0);
            let b = kr.wp12_from_wp(wf.wp(w), -1.0);
            assert!(close(a, direct, 1e-9) || close(b, direct, 1e-9), "{w}");
            let sum = wf12.wp(w) + wf12.wp(w + w2) - kr.k.e2_12;
            assert!(close(sum, wf.wp(w), 1e-9));
        }
        let e = kr.wp12_from_wp(wf.wp(c(w2)), 1.0);
        assert!(!e.is_finite() || e.norm() > 1e6 || close(e, c(kr.k.e2_12), 1e-6));
        let (p1, p2) = kr.wp12_thirds();
        assert!((wf12.wp(c(w2 / 3.0)).re - p1).abs() < 1e-9);
        assert!((wf12.wp(c(2.0 * w2 / 3.0)).re - p2).abs() < 1e-9);
        assert!((wf12.wp(c(4.0 * w2 / 3.0)).re - p2).abs() < 1e-9);
    }

    #[test]
    fn half_shift_matches_parametrization() {
        let kr = Kreweras::new(0.1).unwrap();
        let u = &kr.u;
        for w in samples(u) {
            let got = kr.x_half_shift(u.x(w));
            let want = u.x(w + u.w2() / 2.0);
            assert!(close(got, want, 1e-9), "{got} {want}");
            let back = kr.x_half_shift(got);
            assert!(close(back, u.x(w), 1e-8));
        }
    }

    #[test]
    fn special_values_on_doubled_lattice() {
        for z in [0.05, 0.1, 0.2] {
            let kr = Kreweras::new(z).unwrap();
            let w2 = kr.u.w2();
            let (h, s) = kr.special_values_12();
            assert!((kr.wf12.wp(c(w2 / 2.0)).re - h).abs() < 1e-8, "z={z}");
            assert!((kr.wf12.wp(c(w2 / 6.0)).re - s).abs() < 1e-8, "z={z}");
        }
    }

    #[test]
    fn wp12_in_terms_of_x_and_reciprocals() {
        let kr = Kreweras::new(0.1).unwrap();
        let u = &kr.u;
        let w2 = u.w2();
        let (h, s) = kr.special_values_12();
        // points where |x| < 1, so the principal root applies
        for w in [u.named.wx2, u.named.wx2 + Complex64::new(0.3, 0.2), u.named.wx1 + Complex64::new(-0.2, 0.1)] {
            let x = u.x(w);
            let direct = kr.wf12.wp(w + w2 / 2.0);
            assert!(close(kr.wp12_half_shift(x), direct, 1e-9), "{w}: {} vs {direct}", kr.wp12_half_shift(x));
            let (a, b) = kr.reciprocals(x);
            assert!(close(a, 1.0 / (direct - h), 1e-8));
            assert!(close(b, 1.0 / (direct - s), 1e-8));
        }
    }

    #[test]
    fn constants_alpha_to_delta() {
        for z in [0.05, 0.1, 0.2] {
            let kr = Kreweras::new(z).unwrap();
            for r in kr.constants_check() {
                assert!(r < 1e-7, "z={z}: {:?}", kr.constants_check());
            }
            let u = &kr.u;
            let w = u.named.wx2 + Complex64::new(0.1, 0.05);
            let got = kr.ry_shifted_algebraic(u.x(w));
            let want = kr.ry_zeta(w + u.w3() / 2.0);
            assert!(close(got, want, 1e-8));
            let x = u.x(w);
            assert!(close(z * x * qx0_closed(z, x).unwrap(), want, 1e-8));
        }
    }

    #[test]
    fn zeta_expression_matches_series_and_continuation() {
        let z = 0.1;
        let kr = Kreweras::new(z).unwrap();
        let u = &kr.u;
        let w2 = u.w2();
        assert!(kr.ry_zeta(c(2.0 * w2 / 3.0)).norm() < 1e-12);
        let m = SeriesModel::new(u, Ratio::new(2, 3).unwrap(), SeriesConfig::default()).unwrap();
        let cy = m.c_y().unwrap().value;
        let cont = Continuation::new(u, 40);
        for w in samples(u) {
            let zeta = kr.ry_zeta(w);
            assert!(close(m.r_y_series(w).unwrap().value + cy, zeta, 1e-9));
            assert!(close(cont.continue_r_y(w).unwrap().value, zeta, 1e-9));
            let step = kr.ry_zeta(w + u.w3()) - zeta - u.f_y_deriv(w);
            assert!(step.norm() < 1e-8 * (1.0 + zeta.norm()));
            // elliptic on the doubled lattice
            assert!(close(kr.ry_zeta(w + 2.0 * w2), zeta, 1e-9));
        }
        assert!((kr.q00_wp12() - q00_closed(z).unwrap()).abs() < 1e-10);
        let d = m.q00_derivative().unwrap();
        assert!((d.value.re - q00_closed(z).unwrap()).abs() < 1e-8, "{d:?}");
        assert!((kr.q00_from_r() - q00_closed(z).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn simple_walk_decomposition() {
        let u = Uniformization::new(&StepSet::simple(), 0.15).unwrap();
        let d = SrwDecomposition::new(&u).unwrap();
        let m = SeriesModel::new(&u, Ratio::new(1, 2).unwrap(), SeriesConfig::default()).unwrap();
        let cy = m.c_y().unwrap().value;
        let vals: Vec<Complex64> = samples(&u)
            .into_iter()
            .map(|w| d.discrepancy(w, m.r_y_series(w).unwrap().value + cy))
            .collect();
        for v in &vals {
            assert!((v - vals[0]).norm() < 1e-8, "{vals:?}");
        }
        let w = Complex64::new(0.37, 0.21);
        let q = |w: Complex64| d.quasi_removed(w, m.r_y_series(w).unwrap().value + cy);
        assert!(close(q(w + u.w2()), q(w), 1e-8));
        assert!(close(q(w + u.w1()), q(w), 1e-8));
    }
}
