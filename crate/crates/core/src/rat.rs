//! Rationality of the rotation number `w3/w2`.
//!
//! The series machinery needs `w3/w2 = k/l` exactly. Finite-group models
//! have a constant ratio; for the others it varies with `z` and can be
//! pinned by solving for `z`.

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{Curve, Periods};
use crate::error::{Error, Result};
use crate::stepset::StepSet;

pub const DEFAULT_LMAX: u32 = 64;
pub const DEFAULT_TOL: f64 = 1e-8;
/// Ten times the relative accuracy of the period quadrature.
pub const TOL_FLOOR: f64 = 1e-10;
/// Accuracy a pinned `z` has to reach before the series accepts it.
pub const PIN_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub k: u32,
    pub l: u32,
}

impl Ratio {
    pub fn new(k: u32, l: u32) -> Result<Self> {
        if k == 0 || l <= k {
            return Err(Error::InvalidArgument(format!("need 0 < k < l, got {k}/{l}")));
        }
        let g = gcd(k, l);
        Ok(Ratio { k: k / g, l: l / g })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("expected k/l, got {text:?}"));
        let (a, b) = text.split_once('/').ok_or_else(bad)?;
        let k = a.trim().parse().map_err(|_| bad())?;
        let l = b.trim().parse().map_err(|_| bad())?;
        Ratio::new(k, l)
    }

    pub fn value(&self) -> f64 {
        self.k as f64 / self.l as f64
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.k, self.l)
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RationalityResult {
    pub ratio: f64,
    /// `None` when no convergent within `lmax` fits
    pub detected: Option<Ratio>,
    /// `|ratio - k/l|`, or the tolerance used when nothing was detected
    pub certified_error: f64,
}

/// Continued-fraction convergents `p/q` of `x` with `q <= qmax`.
pub fn convergents(x: f64, qmax: u32) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e12 {
            break;
        }
        let a = a as u64;
        let (p, q) = (a * p1 + p0, a * q1 + q0);
        if q > qmax as u64 {
            break;
        }
        out.push((p, q));
        (p0, q0, p1, q1) = (p1, q1, p, q);
        let frac = r - a as f64;
        if frac < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    out
}

/// First convergent of `ratio` with denominator at most `lmax` that lies
/// within `tol`.
pub fn detect(ratio: f64, lmax: u32, tol: f64) -> Result<RationalityResult> {
    if tol < TOL_FLOOR {
        return Err(Error::ToleranceFloor { tol, floor: TOL_FLOOR });
    }
    for (p, q) in convergents(ratio, lmax) {
        let err = (ratio - p as f64 / q as f64).abs();
        if err < tol && p > 0 {
            let detected = Ratio::new(p as u32, q as u32).ok();
            return Ok(RationalityResult { ratio, detected, certified_error: err });
        }
    }
    Ok(RationalityResult { ratio, detected: None, certified_error: tol })
}

pub fn detect_ratio(periods: &Periods, lmax: u32, tol: f64) -> Result<RationalityResult> {
    detect(periods.ratio(), lmax, tol)
}

/// Rotation number at `z`.
pub fn ratio_at(steps: &StepSet, z: f64) -> Result<f64> {
    Ok(Curve::new(steps, z)?.periods()?.ratio())
}

/// `detect_ratio` over a grid of weights, in grid order.
pub fn scan_h(steps: &StepSet, grid: &[f64], lmax: u32, tol: f64) -> Vec<Result<RationalityResult>> {
    grid.par_iter()
        .map(|&z| {
            let p = Curve::new(steps, z)?.periods()?;
            detect_ratio(&p, lmax, tol)
        })
        .collect()
}

/// Outcome of solving `w3(z)/w2(z) = k/l`.
#[derive(Clone, Debug, Serialize)]
pub struct Pinned {
    pub z: f64,
    pub ratio: Ratio,
    pub residual: f64,
    /// sign changes seen on the sampling grid; more than one means the
    /// ratio is not monotone there
    pub brackets: usize,
}

/// Finds `z` with `w3/w2 = k/l` by sampling the admissible range and
/// bisecting the first sign change.
pub fn pin_z(steps: &StepSet, target: Ratio) -> Result<Pinned> {
    let zmax = 1.0 / steps.size() as f64;
    let grid: Vec<f64> = (1..64).map(|i| zmax * i as f64 / 64.0).collect();
    let vals: Vec<Option<f64>> = grid.par_iter().map(|&z| ratio_at(steps, z).ok()).collect();
    let t = target.value();
    let pts: Vec<(f64, f64)> = grid.iter().zip(&vals).filter_map(|(&z, v)| v.map(|r| (z, r - t))).collect();
    let mut brackets: Vec<(f64, f64, f64)> = Vec::new();
    for w in pts.windows(2) {
        if w[0].1 == 0.0 || w[0].1.signum() != w[1].1.signum() {
            brackets.push((w[0].0, w[1].0, w[0].1));
        }
    }
    let (lo_all, hi_all) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.1 + t), b.max(p.1 + t)));
    let Some(&(mut lo, mut hi, flo)) = brackets.first() else {
        return Err(Error::NoRoute(format!(
            "ratio {target} not attained: w3/w2 ranges over [{lo_all:.6}, {hi_all:.6}] on the sampled weights"
        )));
    };
    let s_lo = flo.signum();
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let f = ratio_at(steps, mid)? - t;
        if f == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if f.signum() == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    let z = 0.5 * (lo + hi);
    let residual = (ratio_at(steps, z)? - t).abs();
    if residual > PIN_TOL {
        return Err(Error::NoConvergence(format!("pinned z = {z} leaves |w3/w2 - {target}| = {residual:e}")));
    }
    Ok(Pinned { z, ratio: target, residual, brackets: brackets.len() })
}
