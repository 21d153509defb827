//! Cross-validation suite: identities of the parametrization, series
//! against continuation, and everything against exact counts.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cont::{Algebraicity, Continuation, Side};
use crate::kreweras::{self, Kreweras};
use crate::model::{Model, PRINCIPAL_BRANCH};
use crate::oracle::{depth_for, Axis, CountTable};
use crate::stepset::StepSet;

/// Seed of every sampled check.
pub const VERIFY_SEED: u64 = 0x5eed_0002;

/// Deepest count table the suite builds.
pub const MAX_ORACLE_DEPTH: usize = 400;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    /// measured discrepancy
    pub value: f64,
    /// allowed discrepancy
    pub bound: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn new(name: &str, value: f64, bound: f64) -> Self {
        Check { name: name.into(), value, bound, pass: value <= bound, note: None }
    }

    fn failed(name: &str, why: String) -> Self {
        Check { name: name.into(), value: f64::NAN, bound: 0.0, pass: false, note: Some(why) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub seed: u64,
    pub checks: Vec<Check>,
    pub algebraicity: Algebraicity,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Random points of the fundamental cell.
pub fn sample_cell(m: &Model, n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let (w1, w2) = (m.u.w1(), m.u.w2());
    (0..n).map(|_| w2 * rng.gen::<f64>() + w1 * rng.gen::<f64>()).collect()
}

fn worst(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, |a, b| if b.is_nan() { f64::NAN } else { a.max(b) })
}

/// Runs the suite with agreement bound `tol` for the series checks.
pub fn run(m: &Model, tol: f64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
    let u = &m.u;
    let mut checks = Vec::new();

    let pts = sample_cell(m, 200, &mut rng);
    checks.push(Check::new("kernel-on-curve", worst(pts.iter().map(|&w| u.kernel_residual(w))), 1e-8));

    let wf = &u.wf;
    let pts = sample_cell(m, 20, &mut rng);
    let small: Vec<Complex64> = pts.iter().map(|w| w * 0.37 + Complex64::new(0.11, 0.07)).collect();
    let ident = [
        ("wp-differential-equation", worst(pts.iter().map(|&w| wf.ode_residual(w)))),
        ("zeta-addition", worst(pts.iter().zip(&small).map(|(&a, &b)| wf.zeta_addition_residual(a, b)))),
        ("wp-addition", worst(pts.iter().zip(&small).map(|(&a, &b)| wf.wp_addition_residual(a, b)))),
        ("landen-2", worst(pts.iter().map(|&w| wf.landen_residual(w, 2)))),
        ("landen-3", worst(pts.iter().map(|&w| wf.landen_residual(w, 3)))),
        ("legendre", wf.legendre_residual()),
        ("derivative-identity", worst(pts.iter().map(|&w| u.derivative_identity_residual(w)))),
    ];
    for (name, v) in ident {
        checks.push(Check::new(name, v, 1e-8));
    }
    for (name, side) in [("residue-sum-f_y", Side::Y), ("residue-sum-f_x", Side::X)] {
        match u.residue_sum(side) {
            Ok(v) => checks.push(Check::new(name, v, 1e-8)),
            Err(e) => checks.push(Check::failed(name, e.to_string())),
        }
    }

    let series = match m.series() {
        Ok(s) => Some(s),
        Err(e) => {
            checks.push(Check::failed("series-setup", e.to_string()));
            None
        }
    };
    let z = m.z();
    let depth = depth_for(&m.steps, z, tol * 1e-2).min(MAX_ORACLE_DEPTH);
    let oracle = CountTable::new(&m.steps, depth).evaluator();
    if let Some(s) = &series {
        let cont = Continuation::new(u, 60);
        let pts = sample_cell(m, 10, &mut rng);
        let cy = s.c_y();
        let mut diff: f64 = 0.0;
        let mut note = None;
        for w in pts {
            let r = (|| -> crate::Result<f64> {
                let a = s.r_y_series(w)?.value + cy.clone()?.value;
                let b = cont.continue_r_y(w)?;
                Ok((a - b.value).norm() / (1.0 + b.value.norm()) - b.tail)
            })();
            match r {
                Ok(v) => diff = diff.max(v),
                Err(e) => note = Some(e.to_string()),
            }
        }
        let mut c = Check::new("series-vs-continuation", diff, tol);
        if note.is_some() {
            c.note = note;
        }
        checks.push(c);

        let o = oracle.boundary_gf(Axis::Origin, Complex64::new(0.0, 0.0), z);
        match s.q00() {
            Ok(q) => checks.push(Check::new("q00-series-vs-oracle", (q.value - o.value).norm(), tol + o.tail)),
            Err(e) => checks.push(Check::failed("q00-series-vs-oracle", e.to_string())),
        }
        let x0 = Complex64::new(0.3, 0.0);
        let o = oracle.boundary_gf(Axis::X, x0, z);
        match s.q_x0(x0, PRINCIPAL_BRANCH) {
            Ok(q) => checks.push(Check::new("qx0-series-vs-oracle", (q.value - o.value).norm(), tol + o.tail)),
            Err(e) => checks.push(Check::failed("qx0-series-vs-oracle", e.to_string())),
        }
    }

    if m.steps == StepSet::kreweras() {
        let o = oracle.boundary_gf(Axis::Origin, Complex64::new(0.0, 0.0), z);
        match kreweras::q00_closed(z) {
            Ok(q) => checks.push(Check::new("q00-closed-vs-oracle", (q - o.value.re).abs(), tol + o.tail)),
            Err(e) => checks.push(Check::failed("q00-closed-vs-oracle", e.to_string())),
        }
        match Kreweras::new(z) {
            Ok(k) => {
                let r = k.constants_check();
                checks.push(Check::new("constants-alpha-delta", worst(r.into_iter()), 1e-7));
            }
            Err(e) => checks.push(Check::failed("constants-alpha-delta", e.to_string())),
        }
    }

    let algebraicity = u.algebraicity(m.ratio.l, 20, VERIFY_SEED);
    Report { seed: VERIFY_SEED, checks, algebraicity }
}
