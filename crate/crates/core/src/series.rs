//! Principal-part series for `r_y` and `r_x`, and recovery of the boundary
//! generating functions from them.
//!
//! `S_A(w) = r_y(w) - r_y(w_{y2})` is the sum over `p in Z`, `n >= 0`,
//! `0 <= s < k` and the poles `f` of `f_y` with real part in
//! `[-w2/2, w2/2)` of
//!
//! ```text
//! -(n/l + 1) [F(w + X) + F(-w + 2 w_{y2} + X) - 2 F(w_{y2} + X)],
//! X = s w2 + n w3 + p w1
//! ```
//!
//! where `F` is the principal part of `f_y` at `f` and `n/l` is integer
//! division. `S_B(w) = r_x(w) - r_x(w_{x2})` is the mirror image built on
//! the poles of `f_x` with real part in `[Re w_{y1}, Re w_{y1} + w2)`,
//! centred at `w_{x2}` and with `X` replaced by `-X`.
//!
//! Only the sum over all poles converges absolutely. Two orderings are
//! offered: summing `p` in closed form first (cotangent sums) and then `n`,
//! or direct rectangular blocks with Richardson extrapolation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cont::{Pole, Side};
use crate::error::{Error, Result};
use crate::rat::Ratio;
use crate::unif::Uniformization;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Order in which the double series is summed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ordering {
    /// `p` in closed form, then `n` until the terms are negligible
    Column,
    /// growing rectangles `|p| <= P`, `n < N`, extrapolated in `1/N`
    Blocks,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SeriesConfig {
    pub ordering: Ordering,
    pub target_tol: f64,
    /// cap on `n` for columns, on the largest `N` for blocks
    pub n_max: usize,
    /// cap on `P` for blocks
    pub p_max: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig { ordering: Ordering::Column, target_tol: 1e-12, n_max: 100_000, p_max: 4096 }
    }
}

impl SeriesConfig {
    pub fn blocks(target_tol: f64) -> Self {
        SeriesConfig { ordering: Ordering::Blocks, target_tol, n_max: 4096, p_max: 4096 }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SeriesResult {
    pub value: Complex64,
    pub est_tail: f64,
    pub terms_used: usize,
}

/// One of the two series, with its translated principal parts.
#[derive(Clone, Debug)]
pub struct PoleSeries {
    pub poles: Vec<Pole>,
    pub centre: Complex64,
    /// `+1` for the `r_y` series, `-1` for the `r_x` series
    pub sign: f64,
    pub ratio: Ratio,
    pub w1: Complex64,
    pub w2: f64,
    pub w3: f64,
}

fn weight(n: usize, l: u32) -> f64 {
    (n / l as usize) as f64 + 1.0
}

/// `sum_p 1/(v + p w1)^m` for `m = 1..=3`, with `w1 = i t`.
fn column_sums(v: Complex64, t: f64) -> [Complex64; 3] {
    // theta = pi v / w1, E = exp(2 i theta) = exp(2 pi v / t)
    let a = PI / Complex64::new(0.0, t);
    let x = 2.0 * PI * v / t;
    let (e, flip) = if x.re > 0.0 { ((-x).exp(), true) } else { (x.exp(), false) };
    let em1 = e - 1.0;
    let mut cot = Complex64::new(0.0, 1.0) * (e + 1.0) / em1;
    if flip {
        cot = -cot;
    }
    let csc2 = -4.0 * e / (em1 * em1);
    [a * cot, a * a * csc2, a * a * a * csc2 * cot]
}

impl PoleSeries {
    fn xshift(&self, s: usize, n: usize, p: i64) -> Complex64 {
        self.sign * (s as f64 * self.w2 + n as f64 * self.w3 + p as f64 * self.w1)
    }

    /// The three arguments of a term, before the shift.
    fn args(&self, w: Complex64) -> [Complex64; 3] {
        [w, -w + 2.0 * self.centre, self.centre]
    }

    /// Single term `A_{s,p,n}` (or `B`) for one principal part.
    pub fn term(&self, pole: &Pole, s: usize, p: i64, n: usize, w: Complex64) -> Complex64 {
        let x = self.xshift(s, n, p);
        let [a, b, m] = self.args(w);
        -weight(n, self.ratio.l) * (pole.eval(a + x) + pole.eval(b + x) - 2.0 * pole.eval(m + x))
    }

    /// Sum of the terms with given `(s, n)` over all `p`.
    fn column(&self, s: usize, n: usize, w: Complex64) -> Complex64 {
        let t = self.w1.im;
        let x = self.xshift(s, n, 0);
        let [a, b, m] = self.args(w);
        let mut tot = c(0.0);
        for pole in &self.poles {
            let mut acc = c(0.0);
            for (arg, f) in [(a, 1.0), (b, 1.0), (m, -2.0)] {
                let sums = column_sums(arg + x - pole.at, t);
                let v: Complex64 = pole.coeffs.iter().zip(sums).map(|(cm, sm)| cm * sm).sum();
                acc += f * v;
            }
            tot += acc;
        }
        -weight(n, self.ratio.l) * tot
    }

    /// Refuses `w` within `1e-6 w2` of a pole of the sum.
    pub fn check_pole_distance(&self, w: Complex64) -> Result<()> {
        let t = self.w1.im;
        let [a, b, _] = self.args(w);
        let lo = -(self.ratio.k as f64) * self.w2 - 2.0 * self.w2;
        for pole in &self.poles {
            for arg in [a, b] {
                // v + X = 0 for some X in the shift semigroup
                let v = arg - pole.at;
                let re = -self.sign * v.re;
                if re < lo {
                    continue;
                }
                let im = v.im - (v.im / t).round() * t;
                if im.abs() > 1e-6 * self.w2 {
                    continue;
                }
                for s in 0..self.ratio.k as usize {
                    let rest = re - s as f64 * self.w2;
                    if rest < -1e-6 * self.w2 {
                        continue;
                    }
                    let n = (rest / self.w3).round();
                    if (rest - n * self.w3).abs() < 1e-6 * self.w2 {
                        return Err(Error::PoleProximity(format!(
                            "w = {w} is within 1e-6 w2 of a pole; try w + {:e}",
                            1e-3 * self.w2
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Column ordering: exact `p`-sums, `n` until the contributions stay
    /// below `tol` relative to the running sum for a full `l`-period.
    fn sum_columns(&self, w: Complex64, cfg: &SeriesConfig) -> Result<SeriesResult> {
        let k = self.ratio.k as usize;
        let l = self.ratio.l as usize;
        // beyond this n every shifted pole lies on the far side of all arguments
        let reach = self.poles.iter().map(|p| (p.at - w).norm()).fold(0.0, f64::max)
            + (w - self.centre).norm()
            + (k as f64 + 1.0) * self.w2;
        let n_min = (reach / self.w3).ceil() as usize + 1;
        let tol = cfg.target_tol.max(1e-16);
        let mut sum = c(0.0);
        let mut quiet = 0usize;
        let mut last = 0.0;
        let mut n = 0;
        while n < cfg.n_max {
            let col: Complex64 = (0..k).map(|s| self.column(s, n, w)).sum();
            sum += col;
            last = col.norm();
            if n >= n_min && last <= tol * (1.0 + sum.norm()) * 1e-2 {
                quiet += 1;
                if quiet >= l {
                    return Ok(SeriesResult { value: sum, est_tail: last, terms_used: (n + 1) * k });
                }
            } else {
                quiet = 0;
            }
            n += 1;
        }
        Err(Error::NoConvergence(format!(
            "column sum not settled after {n} shifts (last column {last:e}, partial sum {sum})"
        )))
    }

    /// Direct sum over `|p| <= pp`, `n < nn`, all `s` and poles.
    pub fn block(&self, w: Complex64, nn: usize, pp: usize) -> Complex64 {
        let k = self.ratio.k as usize;
        let rows: Vec<Complex64> = (0..nn)
            .into_par_iter()
            .map(|n| {
                let mut row = c(0.0);
                for s in 0..k {
                    for p in -(pp as i64)..=(pp as i64) {
                        for pole in &self.poles {
                            row += self.term(pole, s, p, n, w);
                        }
                    }
                }
                row
            })
            .collect();
        rows.iter().sum()
    }

    /// Block ordering with Richardson extrapolation over doublings.
    fn sum_blocks(&self, w: Complex64, cfg: &SeriesConfig) -> Result<SeriesResult> {
        let l = self.ratio.l as usize;
        let t = self.w1.im;
        let mut nn = l * 16usize.div_ceil(l);
        // P and N double together so the truncation error scales with 1/N
        let mut pp = ((nn as f64 * self.w3 / t).round() as usize).max(1);
        let mut table: Vec<Vec<Complex64>> = Vec::new();
        let mut terms = 0usize;
        let mut best = (c(f64::NAN), f64::INFINITY);
        while nn <= cfg.n_max {
            if pp > cfg.p_max {
                break;
            }
            let s = self.block(w, nn, pp);
            terms = nn * (2 * pp + 1) * self.ratio.k as usize * self.poles.len();
            // Richardson in h = 1/N with error terms h, h^2, h^3, ...
            let mut row = vec![s];
            if let Some(prev) = table.last() {
                for (j, &pv) in prev.iter().enumerate() {
                    let f = 2f64.powi(j as i32 + 1);
                    let r = (f * row[j] - pv) / (f - 1.0);
                    row.push(r);
                }
            }
            if row.len() >= 3 {
                let m = row.len() - 1;
                let est = (row[m] - row[m - 1]).norm();
                if est < best.1 {
                    best = (row[m], est);
                }
                if est <= cfg.target_tol {
                    return Ok(SeriesResult { value: row[m], est_tail: est, terms_used: terms });
                }
            }
            table.push(row);
            nn *= 2;
            pp *= 2;
        }
        if best.0.is_finite() {
            // caps reached: report the best extrapolant and its spread
            return Ok(SeriesResult { value: best.0, est_tail: best.1, terms_used: terms });
        }
        Err(Error::NoConvergence("block sums hit the caps before three doublings".into()))
    }

    pub fn sum(&self, w: Complex64, cfg: &SeriesConfig) -> Result<SeriesResult> {
        self.check_pole_distance(w)?;
        match cfg.ordering {
            Ordering::Column => self.sum_columns(w, cfg),
            Ordering::Blocks => self.sum_blocks(w, cfg),
        }
    }
}

/// Both series of a model at a weight with `w3/w2 = k/l`.
#[derive(Clone, Debug)]
pub struct SeriesModel<'a> {
    pub u: &'a Uniformization,
    pub a: PoleSeries,
    pub b: PoleSeries,
    pub cfg: SeriesConfig,
    /// points of the x-strip where `x = 0`
    pub w0x: Vec<Complex64>,
    /// points of the y-strip where `y = 0`
    pub w0y: Vec<Complex64>,
}

/// `r_x`, `r_y` and `K(0,0) Q(0,0)` at one point.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Recovered {
    pub r_x: Complex64,
    pub r_y: Complex64,
    pub kappa: Complex64,
    pub est_tail: f64,
}

impl<'a> SeriesModel<'a> {
    /// Checks the ratio against the periods to `1e-9` before accepting it.
    pub fn new(u: &'a Uniformization, ratio: Ratio, cfg: SeriesConfig) -> Result<Self> {
        let got = u.w3() / u.w2();
        if (got - ratio.value()).abs() > crate::rat::PIN_TOL {
            return Err(Error::InvalidArgument(format!(
                "w3/w2 = {got} does not match the requested {ratio} to 1e-9"
            )));
        }
        let (w1, w2, w3) = (u.w1(), u.w2(), u.w3());
        let eps = 1e-9 * w2;
        let ay: Vec<Pole> = u
            .increment_poles(Side::Y)?
            .into_iter()
            .map(|p| if p.at.re >= w2 / 2.0 - eps { p.translated(c(-w2)) } else { p })
            .collect();
        let lo = u.named.wy1.re;
        let bx: Vec<Pole> = u
            .increment_poles(Side::X)?
            .into_iter()
            .map(|mut p| {
                while p.at.re < lo - eps {
                    p = p.translated(c(w2));
                }
                while p.at.re >= lo + w2 - eps {
                    p = p.translated(c(-w2));
                }
                p
            })
            .collect();
        let a = PoleSeries { poles: ay, centre: u.named.wy2, sign: 1.0, ratio, w1, w2, w3 };
        let b = PoleSeries { poles: bx, centre: u.named.wx2, sign: -1.0, ratio, w1, w2, w3 };
        // zeros of x (resp. y) on the strip where the other coordinate stays
        // finite, so the series are regular there
        let finite = |v: Complex64| v.norm() < 1e6;
        let (p, q) = u.solve_x(c(0.0))?;
        let mut w0x: Vec<Complex64> = Vec::new();
        for w in [p, q] {
            if u.in_delta_x(w) && finite(u.y(w)) && !w0x.iter().any(|o: &Complex64| (o - w).norm() < eps) {
                w0x.push(w);
            }
        }
        let (p, q) = u.solve_y(c(0.0))?;
        let mut w0y = Vec::new();
        for w in [p, q] {
            for m in -2..=2 {
                let v = w + m as f64 * w2;
                if u.in_delta_y(v) && finite(u.x(v)) && !w0y.iter().any(|o: &Complex64| (o - v).norm() < eps) {
                    w0y.push(v);
                }
            }
        }
        if w0x.is_empty() {
            return Err(Error::NoRoute("x does not vanish on the x-strip".into()));
        }
        if w0y.is_empty() {
            return Err(Error::NoRoute("y does not vanish on the y-strip".into()));
        }
        Ok(SeriesModel { u, a, b, cfg, w0x, w0y })
    }

    /// `r_y(w) - r_y(w_{y2})`.
    pub fn r_y_series(&self, w: Complex64) -> Result<SeriesResult> {
        self.a.sum(w, &self.cfg)
    }

    /// `r_x(w) - r_x(w_{x2})`.
    pub fn r_x_series(&self, w: Complex64) -> Result<SeriesResult> {
        self.b.sum(w, &self.cfg)
    }

    /// `K(0,0) Q(0,0)` from the `r_x` series at the first zero of `x`.
    pub fn kappa(&self) -> Result<SeriesResult> {
        let (w0x, w0y) = (self.w0x[0], self.w0y[0]);
        let s0 = self.r_x_series(w0x)?;
        let s1 = self.r_x_series(w0y)?;
        Ok(SeriesResult { value: s0.value - s1.value, est_tail: s0.est_tail + s1.est_tail, terms_used: s0.terms_used + s1.terms_used })
    }

    /// `r_x`, `r_y`, `K(0,0) Q(0,0)` at `w`. `r_y` comes from the `r_x`
    /// series and vice versa, so each uses only one of the two sums.
    pub fn recover(&self, w: Complex64) -> Result<Recovered> {
        let u = self.u;
        let xy = u.x(w) * u.y(w);
        let sb0 = self.r_x_series(self.w0x[0])?;
        let sb = self.r_x_series(w)?;
        let sa0 = self.r_y_series(self.w0y[0])?;
        let sa = self.r_y_series(w)?;
        let r_y = sb0.value - sb.value + xy;
        let r_x = sa0.value - sa.value + xy;
        let kappa = r_x + r_y - xy;
        let est_tail = sb0.est_tail + sb.est_tail + sa0.est_tail + sa.est_tail;
        Ok(Recovered { r_x, r_y, kappa, est_tail })
    }

    /// `r_y(w)` from the `r_x` series alone.
    pub fn r_y(&self, w: Complex64) -> Result<SeriesResult> {
        let sb0 = self.r_x_series(self.w0x[0])?;
        let sb = self.r_x_series(w)?;
        Ok(SeriesResult {
            value: sb0.value - sb.value + self.u.x(w) * self.u.y(w),
            est_tail: sb0.est_tail + sb.est_tail,
            terms_used: sb0.terms_used + sb.terms_used,
        })
    }

    /// `r_x(w)` from the `r_y` series alone.
    pub fn r_x(&self, w: Complex64) -> Result<SeriesResult> {
        let sa0 = self.r_y_series(self.w0y[0])?;
        let sa = self.r_y_series(w)?;
        Ok(SeriesResult {
            value: sa0.value - sa.value + self.u.x(w) * self.u.y(w),
            est_tail: sa0.est_tail + sa.est_tail,
            terms_used: sa0.terms_used + sa.terms_used,
        })
    }

    /// The constant `r_y(w_{y2})` linking the `r_y` series to `r_y`.
    pub fn c_y(&self) -> Result<SeriesResult> {
        self.r_y(self.u.named.wy2)
    }

    /// `Q(0,0)`. With a south-west step `K(0,0) = z`; otherwise the
    /// derivative route, and failing that the value of `r_x(w) / K(x(w), 0)`
    /// at the zero of `x` taken as the mean over a small circle, where that
    /// quotient is analytic.
    pub fn q00(&self) -> Result<SeriesResult> {
        let u = self.u;
        let z = u.z();
        if u.steps().has(-1, -1) {
            let k = self.kappa()?;
            return Ok(SeriesResult { value: k.value / z, est_tail: k.est_tail / z, terms_used: k.terms_used });
        }
        match self.q00_derivative() {
            Err(Error::NoRoute(_)) => self.q00_circle(),
            r => r,
        }
    }

    fn q00_circle(&self) -> Result<SeriesResult> {
        let u = self.u;
        let w0 = self.w0x[0];
        let sa0 = self.r_y_series(self.w0y[0])?;
        let r = 0.02 * u.w2();
        let m = 24;
        let mut acc = c(0.0);
        let mut tail = sa0.est_tail;
        let mut terms = sa0.terms_used;
        for j in 0..m {
            let w = w0 + Complex64::from_polar(r, 2.0 * PI * (j as f64 + 0.5) / m as f64);
            let sa = self.r_y_series(w)?;
            let x = u.x(w);
            let rx = sa0.value - sa.value + x * u.y(w);
            let (_, _, cx) = u.curve.abc_x(x);
            acc += rx / cx;
            tail = tail.max(sa.est_tail / cx.norm());
            terms += sa.terms_used;
        }
        Ok(SeriesResult { value: acc / m as f64, est_tail: tail, terms_used: terms })
    }

    /// `Q(0,0)` when `K(0,0) = 0`: at a point where `x = y = 0`,
    /// `z Q(0,0) = -r_y'(w) / x'(w)`. The derivative of the `r_y` series is
    /// a Cauchy integral over a small circle.
    pub fn q00_derivative(&self) -> Result<SeriesResult> {
        let u = self.u;
        let w0 = *self
            .w0y
            .iter()
            .find(|&&w| u.x(w).norm() < 1e-8)
            .ok_or_else(|| Error::NoRoute("x and y do not vanish together on the y-strip".into()))?;
        let r = 0.02 * u.w2();
        let m = 32;
        let mut acc = c(0.0);
        let mut tail: f64 = 0.0;
        let mut terms = 0;
        for j in 0..m {
            let e = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64);
            let s = self.r_y_series(w0 + r * e)?;
            acc += s.value / e;
            tail = tail.max(s.est_tail);
            terms += s.terms_used;
        }
        let dr = acc / (m as f64 * r);
        let z = u.z();
        let xd = u.xd(w0);
        Ok(SeriesResult { value: -dr / (xd * z), est_tail: tail / (r * xd.norm() * z), terms_used: terms })
    }

    /// The branch of `Q(x0, 0)` read on `M_k = w1 [0,1) + w2 [k/2, (k+1)/2)`.
    pub fn q_x0(&self, x0: Complex64, branch: i64) -> Result<SeriesResult> {
        let u = self.u;
        let (_, _, k0) = u.curve.abc_x(x0);
        if k0.norm() < 1e-14 {
            return Err(Error::InvalidArgument(format!("K({x0}, 0) = 0: pole of the branch")));
        }
        let w = self.omega_on_branch(x0, branch)?;
        let r = self.r_x(w)?;
        Ok(SeriesResult { value: r.value / k0, est_tail: r.est_tail / k0.norm(), terms_used: r.terms_used })
    }

    /// The solution of `x(w) = x0` in `M_k`.
    pub fn omega_on_branch(&self, x0: Complex64, branch: i64) -> Result<Complex64> {
        let u = self.u;
        let (w2, t) = (u.w2(), u.w1().im);
        let (p, q) = u.solve_x(x0)?;
        let lo = branch as f64 * w2 / 2.0;
        for w in [p, q] {
            let im = w.im - (w.im / t).floor() * t;
            let re = w.re + ((lo - w.re) / w2).ceil() * w2;
            if re < lo + w2 / 2.0 {
                return Ok(Complex64::new(re, im));
            }
        }
        Err(Error::Inversion(format!("no solution of x(w) = {x0} on branch {branch} (on a cut?)")))
    }
}
