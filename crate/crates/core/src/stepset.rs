//! Small step sets, the kernel polynomial and the group of the walk.
//!
//! A step set is a subset of `{-1,0,1}^2 \ {(0,0)}`. It is stored as eight
//! flags in row-major order over `(i, j)` with `i` the outer index.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// The eight admissible steps in canonical order.
pub const STEPS: [(i8, i8); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];

const COMPASS: [(&str, (i8, i8)); 8] = [
    ("N", (0, 1)),
    ("NE", (1, 1)),
    ("E", (1, 0)),
    ("SE", (1, -1)),
    ("S", (0, -1)),
    ("SW", (-1, -1)),
    ("W", (-1, 0)),
    ("NW", (-1, 1)),
];

/// Default bound on the group order used by the classifier.
pub const DEFAULT_GROUP_BOUND: u32 = 60;

/// Seed for the random test points of the group-order computation.
pub const GROUP_SEED: u64 = 0x5eed_0001;

fn index_of(i: i8, j: i8) -> Option<usize> {
    STEPS.iter().position(|&s| s == (i, j))
}

/// Compass name of a step.
pub fn compass_name(step: (i8, i8)) -> &'static str {
    COMPASS.iter().find(|(_, s)| *s == step).map(|(n, _)| *n).unwrap_or("?")
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct StepSet {
    flags: [bool; 8],
}

impl StepSet {
    /// Builds a step set from explicit steps. Duplicates and `(0,0)` are rejected.
    pub fn from_steps(steps: &[(i8, i8)]) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::EmptyStepSet);
        }
        let mut flags = [false; 8];
        for &(i, j) in steps {
            let k = index_of(i, j).ok_or_else(|| Error::UnknownStep(format!("({i},{j})")))?;
            if flags[k] {
                return Err(Error::DuplicateStep(compass_name((i, j)).to_string()));
            }
            flags[k] = true;
        }
        Ok(StepSet { flags })
    }

    /// Parses compass tokens (`N`, `NE`, ...) or pairs `(i,j)`, separated by
    /// commas or whitespace. Surrounding braces are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut steps = Vec::new();
        for tok in tokenize(text) {
            steps.push(parse_token(&tok)?);
        }
        Self::from_steps(&steps)
    }

    pub fn has(&self, i: i8, j: i8) -> bool {
        index_of(i, j).map(|k| self.flags[k]).unwrap_or(false)
    }

    /// Step indicator as a float (the `delta_{i,j}` of the kernel).
    pub fn delta(&self, i: i8, j: i8) -> f64 {
        if self.has(i, j) {
            1.0
        } else {
            0.0
        }
    }

    pub fn size(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    pub fn flags(&self) -> [bool; 8] {
        self.flags
    }

    pub fn steps(&self) -> Vec<(i8, i8)> {
        STEPS.iter().zip(self.flags).filter(|(_, f)| *f).map(|(s, _)| *s).collect()
    }

    /// Mirror image across the diagonal.
    pub fn transpose(&self) -> StepSet {
        let steps: Vec<_> = self.steps().into_iter().map(|(i, j)| (j, i)).collect();
        StepSet::from_steps(&steps).expect("transpose of a valid set")
    }

    /// Kernel `K(x,y) = xyz (sum x^i y^j - 1/z)`.
    pub fn kernel(&self, x: Complex64, y: Complex64, z: f64) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (i, j) in self.steps() {
            s += x.powi(i as i32 + 1) * y.powi(j as i32 + 1);
        }
        s * z - x * y
    }

    /// Coefficients (ascending powers of x) of `a(x), b(x), c(x)` with
    /// `K(x,y) = a(x) y^2 + b(x) y + c(x)`.
    pub fn x_quadratic(&self, z: f64) -> [[f64; 3]; 3] {
        let d = |i, j| self.delta(i, j);
        [
            [z * d(-1, 1), z * d(0, 1), z * d(1, 1)],
            [z * d(-1, 0), -1.0, z * d(1, 0)],
            [z * d(-1, -1), z * d(0, -1), z * d(1, -1)],
        ]
    }

    /// Same as [`x_quadratic`](Self::x_quadratic) with the roles of x and y swapped.
    pub fn y_quadratic(&self, z: f64) -> [[f64; 3]; 3] {
        self.transpose().x_quadratic(z)
    }

    /// `sum_{(i,j) in S, j = row} x^i`, returned as coefficients of x^{-1}, x^0, x^1.
    fn row(&self, j: i8) -> [f64; 3] {
        [self.delta(-1, j), self.delta(0, j), self.delta(1, j)]
    }

    fn col(&self, i: i8) -> [f64; 3] {
        [self.delta(i, -1), self.delta(i, 0), self.delta(i, 1)]
    }

    /// Involution fixing x.
    pub fn xi(&self, x: Complex64, y: Complex64) -> Result<(Complex64, Complex64)> {
        let num = laurent(self.row(-1), x);
        let den = laurent(self.row(1), x);
        if self.row(1) == [0.0; 3] || self.row(-1) == [0.0; 3] {
            return Err(Error::DegenerateGenerator("xi".into()));
        }
        Ok((x, num / (den * y)))
    }

    /// Involution fixing y.
    pub fn eta(&self, x: Complex64, y: Complex64) -> Result<(Complex64, Complex64)> {
        if self.col(1) == [0.0; 3] || self.col(-1) == [0.0; 3] {
            return Err(Error::DegenerateGenerator("eta".into()));
        }
        let num = laurent(self.col(-1), y);
        let den = laurent(self.col(1), y);
        Ok((num / (den * x), y))
    }

    /// Order of the group generated by the two involutions, computed
    /// numerically on three random points. `Ok(None)` means the order exceeds `bound`.
    pub fn group_order(&self, bound: u32) -> Result<Option<u32>> {
        self.group_order_seeded(bound, GROUP_SEED)
    }

    pub fn group_order_seeded(&self, bound: u32, seed: u64) -> Result<Option<u32>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let max_m = bound / 2;
        let mut common: Option<Option<u32>> = None;
        let mut points = 0;
        let mut attempts = 0;
        while points < 3 {
            attempts += 1;
            if attempts > 50 {
                return Err(Error::DegenerateGenerator("orbit left the finite plane".into()));
            }
            let x0 = random_point(&mut rng);
            let y0 = random_point(&mut rng);
            let (mut x, mut y) = (x0, y0);
            let mut found = None;
            let mut bad = false;
            for m in 1..=max_m {
                let (x1, y1) = self.xi(x, y)?;
                let (x2, y2) = self.eta(x1, y1)?;
                if !(x2.is_finite() && y2.is_finite()) || x2.norm() < 1e-300 || y2.norm() < 1e-300 {
                    bad = true;
                    break;
                }
                x = x2;
                y = y2;
                if close(x, x0) && close(y, y0) {
                    found = Some(m);
                    break;
                }
            }
            if bad {
                continue;
            }
            points += 1;
            let order = found.map(|m| 2 * m);
            match common {
                None => common = Some(order),
                Some(prev) if prev != order => {
                    return Err(Error::NoConvergence(
                        "group order differs between test points".into(),
                    ))
                }
                _ => {}
            }
        }
        Ok(common.flatten())
    }

    pub fn classify(&self) -> Result<Classification> {
        self.classify_with_bound(DEFAULT_GROUP_BOUND)
    }

    pub fn classify_with_bound(&self, bound: u32) -> Result<Classification> {
        let any = |pred: &dyn Fn(i8, i8) -> bool| self.steps().into_iter().any(|(i, j)| pred(i, j));
        let kind = if !any(&|i, _| i == 1) || !any(&|_, j| j == 1) {
            ModelKind::Trivial
        } else if !any(&|i, _| i == -1) || !any(&|_, j| j == -1) {
            ModelKind::HalfPlaneReducible
        } else if !self.has(-1, 0) && !self.has(-1, -1) && !self.has(0, -1) {
            ModelKind::Singular
        } else {
            ModelKind::NonSingular
        };
        let group_order = match kind {
            ModelKind::Trivial | ModelKind::HalfPlaneReducible => GroupOrder::Undefined,
            _ => match self.group_order(bound)? {
                Some(n) => GroupOrder::Finite(n),
                None => GroupOrder::ExceedsBound,
            },
        };
        Ok(Classification { kind, group_order })
    }

    pub fn simple() -> Self {
        Self::parse("N,E,S,W").unwrap()
    }
    pub fn kreweras() -> Self {
        Self::parse("NE,W,S").unwrap()
    }
    pub fn gessel() -> Self {
        Self::parse("E,W,NE,SW").unwrap()
    }
    pub fn gouyou_beauchamps() -> Self {
        Self::parse("E,W,NW,SE").unwrap()
    }
    /// Infinite-group model `{W, SW, S, NE}` used as the running example.
    pub fn infinite_example() -> Self {
        Self::parse("W,SW,S,NE").unwrap()
    }
}

impl fmt::Display for StepSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.steps().into_iter().map(compass_name).collect();
        write!(f, "{}", names.join(","))
    }
}

impl Serialize for StepSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Trivial,
    HalfPlaneReducible,
    Singular,
    NonSingular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupOrder {
    Finite(u32),
    ExceedsBound,
    Undefined,
}

impl Serialize for GroupOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GroupOrder::Finite(n) => s.serialize_u32(*n),
            GroupOrder::ExceedsBound => s.serialize_str("exceeds-bound"),
            GroupOrder::Undefined => s.serialize_none(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub kind: ModelKind,
    pub group_order: GroupOrder,
}

fn laurent(c: [f64; 3], x: Complex64) -> Complex64 {
    c[0] / x + c[1] + c[2] * x
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-9 * (1.0 + b.norm())
}

fn random_point(rng: &mut ChaCha8Rng) -> Complex64 {
    let r: f64 = rng.gen_range(0.5..2.0);
    let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, t)
}

fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for ch in text.chars() {
        match ch {
            '{' | '}' | '[' | ']' if depth == 0 => {
                if !cur.trim().is_empty() {
                    out.push(cur.trim().to_string());
                }
                cur.clear();
            }
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' | ';' if depth == 0 => {
                if !cur.trim().is_empty() {
                    out.push(cur.trim().to_string());
                }
                cur.clear();
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.trim().is_empty() {
                    out.push(cur.trim().to_string());
                }
                cur.clear();
            }
            c => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

fn parse_token(tok: &str) -> Result<(i8, i8)> {
    if let Some(inner) = tok.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let parts: Vec<_> = inner.split(',').map(str::trim).collect();
        if parts.len() == 2 {
            if let (Ok(i), Ok(j)) = (parts[0].parse::<i8>(), parts[1].parse::<i8>()) {
                if index_of(i, j).is_some() {
                    return Ok((i, j));
                }
            }
        }
        return Err(Error::UnknownStep(tok.to_string()));
    }
    let up = tok.to_ascii_uppercase();
    COMPASS
        .iter()
        .find(|(n, _)| *n == up)
        .map(|(_, s)| *s)
        .ok_or_else(|| Error::UnknownStep(tok.to_string()))
}
