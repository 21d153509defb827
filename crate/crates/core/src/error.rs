use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown step token `{0}`")]
    UnknownStep(String),
    #[error("duplicate step `{0}`")]
    DuplicateStep(String),
    #[error("empty step set")]
    EmptyStepSet,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("weight z = {z} outside (0, {max})")]
    WeightOutOfRange { z: f64, max: f64 },
    #[error("degenerate generator: {0}")]
    DegenerateGenerator(String),
    #[error("model is not in the non-singular class: {0}")]
    NotNonSingular(String),
    #[error("branch points are not in the expected configuration: {0}")]
    BranchPoints(String),
    #[error("integrand left the real axis on {0}")]
    ComplexIntegrand(String),
    #[error("quadrature did not converge for {what} (last change {delta:e})")]
    Quadrature { what: String, delta: f64 },
    #[error("point {0} sits on a lattice pole")]
    LatticePole(String),
    #[error("inversion failed: {0}")]
    Inversion(String),
    #[error("unsupported pole order {order} at {at}")]
    PoleOrder { order: usize, at: String },
    #[error("no rational ratio k/l with l <= {lmax} within {tol:e} (value {value})")]
    NotRational { value: f64, lmax: u32, tol: f64 },
    #[error("tolerance {tol:e} below numeric floor {floor:e}")]
    ToleranceFloor { tol: f64, floor: f64 },
    #[error("point {0} is too close to a pole")]
    PoleProximity(String),
    #[error("no route: {0}")]
    NoRoute(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
}

impl Error {
    /// True for errors caused by malformed user input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::UnknownStep(_)
                | Error::DuplicateStep(_)
                | Error::EmptyStepSet
                | Error::InvalidArgument(_)
                | Error::WeightOutOfRange { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
