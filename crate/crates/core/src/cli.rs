//! Command-line front end. Every subcommand except `count` writes one JSON
//! document `{schema, command, inputs, results, diagnostics, versions}`.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cont::{Continuation, Side};
use crate::curve::Curve;
use crate::error::Error;
use crate::kreweras::{self, Kreweras, SrwDecomposition};
use crate::model::{Model, Weight, PRINCIPAL_BRANCH};
use crate::oracle::{check_weight, depth_for, Axis, CountTable};
use crate::rat::{self, Ratio};
use crate::series::{Ordering, SeriesConfig};
use crate::stepset::StepSet;
use crate::verify::{self, VERIFY_SEED};

pub const SCHEMA: u32 = 1;

/// Exit status when a verification bound is breached.
pub const EXIT_BREACH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "qwalk", version, about = "Generating functions of quarter-plane walks with small steps")]
pub struct Cli {
    /// write the report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Model class and group order
    Classify {
        #[arg(long)]
        steps: String,
    },
    /// Exact counts q(i,j;n) as CSV
    Count {
        #[arg(long)]
        steps: String,
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// Branch points and periods at a weight
    Periods {
        #[arg(long)]
        steps: String,
        #[arg(long)]
        z: f64,
    },
    /// Rotation number w3/w2 and its rational approximation
    Rationality {
        #[arg(long)]
        steps: String,
        #[arg(long, conflicts_with_all = ["pin", "scan"])]
        z: Option<f64>,
        /// solve w3/w2 = k/l for z
        #[arg(long, conflicts_with = "scan")]
        pin: Option<String>,
        /// grid `from:to:count`
        #[arg(long)]
        scan: Option<String>,
        #[arg(long, default_value_t = rat::DEFAULT_LMAX)]
        lmax: u32,
        #[arg(long, default_value_t = rat::DEFAULT_TOL)]
        tol: f64,
    },
    /// Q(0,0) and Q(x,0) from the principal-part series
    Evaluate {
        #[command(flatten)]
        run: RunArgs,
        /// point x for Q(x,0), e.g. `0.3` or `0.2+0.1i`
        #[arg(long)]
        at: Option<String>,
        #[arg(long, default_value_t = PRINCIPAL_BRANCH, allow_negative_numbers = true)]
        branch: i64,
        #[arg(long, value_enum, default_value_t = OrderingArg::Column)]
        ordering: OrderingArg,
    },
    /// Full cross-validation; exits nonzero on any breach
    Verify {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Reports for the worked examples
    Examples {
        #[arg(value_enum)]
        which: Example,
        #[arg(long)]
        z: Option<f64>,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    steps: String,
    #[arg(long, required_unless_present = "pin")]
    z: Option<f64>,
    /// pin w3/w2 = k/l and solve for z
    #[arg(long, conflicts_with = "z")]
    pin: Option<String>,
    /// agreement bound for series results
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = rat::DEFAULT_LMAX)]
    lmax: u32,
    /// tolerance of the rationality detection
    #[arg(long, default_value_t = rat::DEFAULT_TOL)]
    rat_tol: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrderingArg {
    Column,
    Blocks,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Example {
    Kreweras,
    Srw,
    Infinite,
}

/// Failure of a subcommand, mapped to an exit status.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Numeric(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Numeric(e)
        }
    }
}

type Out = std::result::Result<Outcome, Failure>;

/// A report plus whether it counts as success.
pub struct Outcome {
    body: Body,
    ok: bool,
}

enum Body {
    Json(Value),
    Text(String),
}

fn report(command: &str, inputs: Value, results: Value, diagnostics: Vec<String>) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "inputs": inputs,
        "results": results,
        "diagnostics": diagnostics,
        "versions": { "qwalk": env!("CARGO_PKG_VERSION") },
    })
}

fn ok(v: Value) -> Out {
    Ok(Outcome { body: Body::Json(v), ok: true })
}

fn cplx(v: Complex64) -> Value {
    json!([v.re, v.im])
}

fn parse_steps(s: &str) -> std::result::Result<StepSet, Failure> {
    StepSet::parse(s).map_err(Failure::from)
}

fn parse_ratio(s: &str) -> std::result::Result<Ratio, Failure> {
    Ratio::parse(s).map_err(Failure::from)
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, Failure> {
    Complex64::from_str(s.trim()).map_err(|_| Failure::Input(format!("expected a complex number, got {s:?}")))
}

fn check_tol(tol: f64) -> std::result::Result<(), Failure> {
    if !(tol >= 1e-12) {
        return Err(Failure::Input(format!("tolerance {tol:e} below 1e-12")));
    }
    Ok(())
}

impl RunArgs {
    fn model(&self, ordering: Ordering) -> std::result::Result<(StepSet, Model), Failure> {
        check_tol(self.tol)?;
        let steps = parse_steps(&self.steps)?;
        let weight = match (&self.pin, self.z) {
            (Some(p), _) => Weight::Pinned(parse_ratio(p)?),
            (None, Some(z)) => {
                check_weight(&steps, z)?;
                Weight::Fixed(z)
            }
            (None, None) => return Err(Failure::Input("need --z or --pin".into())),
        };
        let cfg = match ordering {
            Ordering::Column => SeriesConfig { target_tol: (self.tol * 1e-3).max(1e-15), ..SeriesConfig::default() },
            Ordering::Blocks => SeriesConfig::blocks(self.tol),
        };
        let m = Model::new(&steps, weight, self.lmax, self.rat_tol, cfg)?;
        Ok((steps, m))
    }

    fn inputs(&self) -> Value {
        json!({ "steps": self.steps, "z": self.z, "pin": self.pin, "tol": self.tol, "lmax": self.lmax, "rat_tol": self.rat_tol })
    }
}

fn model_summary(m: &Model) -> Value {
    json!({
        "z": m.z(),
        "ratio": m.ratio.to_string(),
        "rotation_number": m.rationality.ratio,
        "certified_error": m.rationality.certified_error,
        "pinned": m.pinned,
        "periods": { "w1": cplx(m.u.w1()), "w2": m.u.w2(), "w3": m.u.w3() },
    })
}

fn cmd_classify(steps: &str) -> Out {
    let s = parse_steps(steps)?;
    let c = s.classify()?;
    ok(report("classify", json!({ "steps": steps }), json!(c), vec![]))
}

fn cmd_count(steps: &str, depth: usize) -> Out {
    let s = parse_steps(steps)?;
    let t = CountTable::new(&s, depth);
    let mut buf = Vec::new();
    t.write_csv(&mut buf).map_err(|e| Failure::Input(e.to_string()))?;
    Ok(Outcome { body: Body::Text(String::from_utf8_lossy(&buf).into_owned()), ok: true })
}

fn cmd_periods(steps: &str, z: f64) -> Out {
    let s = parse_steps(steps)?;
    check_weight(&s, z)?;
    let c = Curve::new(&s, z)?;
    let p = c.periods()?;
    let results = json!({
        "branch_points_x": c.xb.as_array(),
        "branch_points_y": c.yb.as_array(),
        "w1": cplx(p.w1),
        "w2": p.w2,
        "w3": p.w3,
        "ratio": p.ratio(),
    });
    ok(report("periods", json!({ "steps": steps, "z": z }), results, vec![]))
}

fn parse_scan(s: &str) -> std::result::Result<Vec<f64>, Failure> {
    let bad = || Failure::Input(format!("expected from:to:count, got {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].parse().map_err(|_| bad())?;
    let b: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if n < 2 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
}

fn cmd_rationality(
    steps: &str,
    z: Option<f64>,
    pin: Option<&str>,
    scan: Option<&str>,
    lmax: u32,
    tol: f64,
) -> Out {
    let s = parse_steps(steps)?;
    let inputs = json!({ "steps": steps, "z": z, "pin": pin, "scan": scan, "lmax": lmax, "tol": tol });
    let mut diag = Vec::new();
    let results = if let Some(p) = pin {
        let p = rat::pin_z(&s, parse_ratio(p)?)?;
        if p.brackets > 1 {
            diag.push(format!("{} sign changes on the sampling grid; the first was used", p.brackets));
        }
        json!(p)
    } else if let Some(g) = scan {
        let grid = parse_scan(g)?;
        for &z in &grid {
            check_weight(&s, z)?;
        }
        let rows: Vec<Value> = grid
            .iter()
            .zip(rat::scan_h(&s, &grid, lmax, tol))
            .map(|(z, r)| match r {
                Ok(r) => json!({ "z": z, "result": r }),
                Err(e) => json!({ "z": z, "error": e.to_string() }),
            })
            .collect();
        json!(rows)
    } else {
        let z = z.ok_or_else(|| Failure::Input("need one of --z, --pin, --scan".into()))?;
        check_weight(&s, z)?;
        let p = Curve::new(&s, z)?.periods()?;
        json!(rat::detect_ratio(&p, lmax, tol)?)
    };
    ok(report("rationality", inputs, results, diag))
}

fn cmd_evaluate(run: &RunArgs, at: Option<&str>, branch: i64, ordering: OrderingArg) -> Out {
    let ord = match ordering {
        OrderingArg::Column => Ordering::Column,
        OrderingArg::Blocks => Ordering::Blocks,
    };
    let (steps, m) = run.model(ord)?;
    let mut inputs = run.inputs();
    inputs["at"] = json!(at);
    inputs["branch"] = json!(branch);
    inputs["ordering"] = json!(m.cfg.ordering);
    let mut diag = Vec::new();
    let q00 = m.q00()?;
    let z = m.z();
    let depth = depth_for(&steps, z, run.tol * 1e-2).min(verify::MAX_ORACLE_DEPTH);
    let oracle = CountTable::new(&steps, depth).evaluator();
    let o = oracle.boundary_gf(Axis::Origin, Complex64::new(0.0, 0.0), z);
    let mut results = json!({
        "model": model_summary(&m),
        "q00": { "value": q00.value.re, "imag": q00.value.im, "est_tail": q00.est_tail, "terms": q00.terms_used },
        "oracle_q00": { "value": o.value.re, "tail": o.tail, "depth": depth },
    });
    if (q00.value - o.value).norm() > run.tol + o.tail {
        diag.push(format!("Q(0,0) differs from the truncated count series by {:e}", (q00.value - o.value).norm()));
    }
    if let Some(a) = at {
        let x = parse_complex(a)?;
        let q = m.q_x0(x, branch)?;
        results["qx0"] = json!({ "x": cplx(x), "value": cplx(q.value), "est_tail": q.est_tail });
        if x.norm() < 1.0 && branch == PRINCIPAL_BRANCH {
            let o = oracle.boundary_gf(Axis::X, x, z);
            results["oracle_qx0"] = json!({ "value": cplx(o.value), "tail": o.tail });
        }
    }
    if m.pinned.is_some() {
        diag.push("z obtained by bisection on w3/w2".into());
    }
    ok(report("evaluate", inputs, results, diag))
}

fn cmd_verify(run: &RunArgs) -> Out {
    let (_, m) = run.model(Ordering::Column)?;
    let rep = verify::run(&m, run.tol);
    let pass = rep.all_pass();
    let diag: Vec<String> =
        rep.checks.iter().filter(|c| !c.pass).map(|c| format!("{} breached: {} > {}", c.name, c.value, c.bound)).collect();
    let results = json!({ "model": model_summary(&m), "pass": pass, "report": rep });
    let mut inputs = run.inputs();
    inputs["seed"] = json!(VERIFY_SEED);
    Ok(Outcome { body: Body::Json(report("verify", inputs, results, diag)), ok: pass })
}

fn std_dev(v: &[Complex64]) -> f64 {
    let n = v.len() as f64;
    let mean: Complex64 = v.iter().sum::<Complex64>() / n;
    (v.iter().map(|x| (x - mean).norm_sqr()).sum::<f64>() / n).sqrt()
}

fn example_kreweras(z: f64) -> std::result::Result<(Value, Vec<String>), Failure> {
    let kr = Kreweras::new(z)?;
    let u = &kr.u;
    let m = Model::new(&StepSet::kreweras(), Weight::Fixed(z), rat::DEFAULT_LMAX, rat::DEFAULT_TOL, SeriesConfig::default())?;
    let s = m.series()?;
    let w2 = u.w2();
    let (h, sx) = kr.special_values_12();
    let c = |v: f64| Complex64::new(v, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
    let pts = verify::sample_cell(&m, 10, &mut rng);
    let cy = s.c_y()?.value;
    let mut zeta_vs_series: f64 = 0.0;
    for &w in &pts {
        zeta_vs_series = zeta_vs_series.max((kr.ry_zeta(w) - s.r_y_series(w)?.value - cy).norm());
    }
    let t = CountTable::new(&StepSet::kreweras(), depth_for(&StepSet::kreweras(), z, 1e-12).min(400)).evaluator();
    let o = t.boundary_gf(Axis::Origin, c(0.0), z);
    let x0 = c(0.3);
    let ox = t.boundary_gf(Axis::X, x0, z);
    let results = json!({
        "constants": kr.k,
        "constants_residuals": kr.constants_check(),
        "q00": {
            "closed": kreweras::q00_closed(z)?,
            "from_r": kr.q00_from_r(),
            "wp12": kr.q00_wp12(),
            "series_derivative": s.q00_derivative()?.value.re,
            "oracle": o.value.re,
            "oracle_tail": o.tail,
        },
        "qx0_at_0.3": {
            "closed": cplx(kreweras::qx0_closed(z, x0)?),
            "series": cplx(s.q_x0(x0, PRINCIPAL_BRANCH)?.value),
            "oracle": cplx(ox.value),
            "oracle_tail": ox.tail,
        },
        "special_values": {
            "wp12_half": { "formula": h, "direct": kr.wf12.wp(c(w2 / 2.0)).re },
            "wp12_sixth": { "formula": sx, "direct": kr.wf12.wp(c(w2 / 6.0)).re },
            "e2_12": { "formula": kr.k.e2_12, "direct": kr.wf12.wp(c(w2)).re },
        },
        "zeta_expression_vs_series": zeta_vs_series,
        "r_y_at_2w2_3": cplx(kr.ry_zeta(c(2.0 * w2 / 3.0))),
    });
    let diag = vec![format!(
        "B1 = 3(r - 2 r~) = {}; 3(r - r~) = {} does not reproduce wp12(w2/2)",
        kr.k.b1, kr.k.b1_alt
    )];
    Ok((results, diag))
}

fn example_srw(z: f64) -> std::result::Result<(Value, Vec<String>), Failure> {
    let steps = StepSet::simple();
    let m = Model::new(&steps, Weight::Fixed(z), rat::DEFAULT_LMAX, rat::DEFAULT_TOL, SeriesConfig::default())?;
    let s = m.series()?;
    let d = SrwDecomposition::new(&m.u)?;
    let cy = s.c_y()?.value;
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
    let pts = verify::sample_cell(&m, 20, &mut rng);
    let mut disc = Vec::new();
    let mut per: f64 = 0.0;
    for &w in &pts {
        let ry = s.r_y_series(w)?.value + cy;
        disc.push(d.discrepancy(w, ry));
        let q = d.quasi_removed(w, ry);
        let q2 = d.quasi_removed(w + m.u.w2(), s.r_y_series(w + m.u.w2())?.value + cy);
        let q1 = d.quasi_removed(w + m.u.w1(), s.r_y_series(w + m.u.w1())?.value + cy);
        per = per.max((q2 - q).norm()).max((q1 - q).norm());
    }
    let t = CountTable::new(&steps, depth_for(&steps, z, 1e-12).min(400)).evaluator();
    let o = t.boundary_gf(Axis::Origin, Complex64::new(0.0, 0.0), z);
    let results = json!({
        "model": model_summary(&m),
        "f_y_poles": m.u.increment_poles(Side::Y)?,
        "decomposition": {
            "discrepancy_std_dev": std_dev(&disc),
            "discrepancy_mean": cplx(disc.iter().sum::<Complex64>() / disc.len() as f64),
            "periodicity_max": per,
        },
        "algebraicity": m.u.algebraicity(m.ratio.l, 20, VERIFY_SEED),
        "q00": { "series": s.q00()?.value.re, "oracle": o.value.re, "oracle_tail": o.tail },
    });
    Ok((results, vec![]))
}

fn example_infinite(z: Option<f64>) -> std::result::Result<(Value, Vec<String>), Failure> {
    let steps = StepSet::infinite_example();
    let mut diag = Vec::new();
    let third = match rat::pin_z(&steps, Ratio::new(1, 3).unwrap()) {
        Ok(p) => json!(p),
        Err(e) => {
            diag.push(format!("pin 1/3: {e}"));
            json!({ "error": e.to_string() })
        }
    };
    let weight = match z {
        Some(z) => Weight::Fixed(z),
        None => Weight::Pinned(Ratio::new(28, 37).unwrap()),
    };
    let m = Model::new(&steps, weight, rat::DEFAULT_LMAX, rat::DEFAULT_TOL, SeriesConfig::default())?;
    let s = m.series()?;
    let zz = m.z();
    let cont = Continuation::new(&m.u, 60);
    let kappa_series = s.kappa()?.value;
    let t = CountTable::new(&steps, depth_for(&steps, zz, 1e-10).min(400)).evaluator();
    let o = t.boundary_gf(Axis::Origin, Complex64::new(0.0, 0.0), zz);
    let results = json!({
        "pin_one_third": third,
        "model": model_summary(&m),
        "f_y_poles": m.u.increment_poles(Side::Y)?,
        "f_x_poles": m.u.increment_poles(Side::X)?,
        "kappa": { "series": cplx(kappa_series), "continuation": cplx(cont.kappa) },
        "q00": { "series": s.q00()?.value.re, "oracle": o.value.re, "oracle_tail": o.tail },
        "algebraicity": m.u.algebraicity(m.ratio.l, 20, VERIFY_SEED),
    });
    Ok((results, diag))
}

fn cmd_examples(which: Example, z: Option<f64>) -> Out {
    let name = format!("{which:?}").to_lowercase();
    let (results, diag) = match which {
        Example::Kreweras => example_kreweras(z.unwrap_or(0.1))?,
        Example::Srw => example_srw(z.unwrap_or(0.15))?,
        Example::Infinite => example_infinite(z)?,
    };
    ok(report("examples", json!({ "example": name, "z": z, "seed": VERIFY_SEED }), results, diag))
}

fn dispatch(cli: &Cli) -> Out {
    match &cli.cmd {
        Command::Classify { steps } => cmd_classify(steps),
        Command::Count { steps, depth } => cmd_count(steps, *depth),
        Command::Periods { steps, z } => cmd_periods(steps, *z),
        Command::Rationality { steps, z, pin, scan, lmax, tol } => {
            cmd_rationality(steps, *z, pin.as_deref(), scan.as_deref(), *lmax, *tol)
        }
        Command::Evaluate { run, at, branch, ordering } => cmd_evaluate(run, at.as_deref(), *branch, *ordering),
        Command::Verify { run } => cmd_verify(run),
        Command::Examples { which, z } => cmd_examples(*which, *z),
    }
}

/// Caps the worker pool at `QW_THREADS` when set.
fn configure_threads() {
    if let Some(n) = std::env::var("QW_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second call in the same process fails harmlessly
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Runs the CLI on `args` and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { 0 };
        }
    };
    configure_threads();
    let (text, code) = match dispatch(&cli) {
        Ok(o) => {
            let text = match o.body {
                Body::Json(v) => serde_json::to_string_pretty(&v).unwrap() + "\n",
                Body::Text(t) => t,
            };
            (text, if o.ok { 0 } else { EXIT_BREACH })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("qwalk: {msg}");
            return EXIT_INPUT;
        }
        Err(Failure::Numeric(e)) => {
            let v = report("error", json!(null), json!(null), vec![e.to_string()]);
            eprintln!("qwalk: {e}");
            (serde_json::to_string_pretty(&v).unwrap() + "\n", EXIT_NUMERIC)
        }
    };
    let res = match &cli.output {
        Some(p) => std::fs::write(p, text.as_bytes()),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = res {
        eprintln!("qwalk: cannot write output: {e}");
        return EXIT_INPUT;
    }
    code
}
