//! An owned model at a weight in `H`: uniformization, detected rotation
//! number and summation settings. Front ends (CLI, FFI) go through this.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rat::{self, Pinned, Ratio, RationalityResult};
use crate::series::{SeriesConfig, SeriesModel, SeriesResult};
use crate::stepset::{ModelKind, StepSet};
use crate::unif::Uniformization;

/// How the weight is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weight {
    Fixed(f64),
    /// solve `w3/w2 = k/l` for `z`
    Pinned(Ratio),
}

/// The branch of `Q(x,0)` that is the power series near `x = 0`.
pub const PRINCIPAL_BRANCH: i64 = 1;

#[derive(Clone, Debug)]
pub struct Model {
    pub steps: StepSet,
    pub u: Uniformization,
    pub ratio: Ratio,
    pub rationality: RationalityResult,
    pub pinned: Option<Pinned>,
    pub cfg: SeriesConfig,
}

impl Model {
    /// Builds the model and detects `w3/w2 = k/l` with `l <= lmax` to `tol`.
    pub fn new(steps: &StepSet, weight: Weight, lmax: u32, tol: f64, cfg: SeriesConfig) -> Result<Self> {
        let class = steps.classify()?;
        if class.kind != ModelKind::NonSingular {
            return Err(Error::NotNonSingular(format!("{:?}", class.kind)));
        }
        let (z, pinned) = match weight {
            Weight::Fixed(z) => (z, None),
            Weight::Pinned(r) => {
                let p = rat::pin_z(steps, r)?;
                (p.z, Some(p))
            }
        };
        let u = Uniformization::new(steps, z)?;
        let rationality = rat::detect_ratio(&u.periods, lmax, tol)?;
        let ratio = rationality.detected.ok_or(Error::NotRational { value: rationality.ratio, lmax, tol })?;
        Ok(Model { steps: steps.clone(), u, ratio, rationality, pinned, cfg })
    }

    pub fn z(&self) -> f64 {
        self.u.z()
    }

    pub fn series(&self) -> Result<SeriesModel<'_>> {
        SeriesModel::new(&self.u, self.ratio, self.cfg)
    }

    pub fn q00(&self) -> Result<SeriesResult> {
        self.series()?.q00()
    }

    pub fn q_x0(&self, x: Complex64, branch: i64) -> Result<SeriesResult> {
        self.series()?.q_x0(x, branch)
    }
}
