//! Counting quarter-plane lattice walks with small steps.
//!
//! The crate computes the generating functions `Q(x,0)`, `Q(0,y)` and
//! `Q(0,0)` of non-singular models through the elliptic parametrization of
//! the kernel curve, and cross-checks every step against exact counts.

pub mod cli;
pub mod cont;
pub mod curve;
pub mod error;
pub mod kreweras;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod quad;
pub mod rat;
pub mod series;
pub mod stepset;
pub mod unif;
pub mod verify;
pub mod wfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use stepset::StepSet;
