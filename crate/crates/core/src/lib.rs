//! Spinor and twistor tools for null solutions of the wave equation on
//! Minkowski space.
//!
//! A null solution is a complex function `f` with `det grad_{AA'} f = 0`
//! and `box f = 0`. The crate verifies such fields numerically, classifies
//! the null directions in `ker df`, and generates solutions from twistor
//! surfaces and from meromorphic Kerr data.
//!
//! Coordinates are `(t, x1, x2, x3)` with signature `-+++`; spinor indices
//! are raised with `eps = [[0, 1], [-1, 0]]` acting on the left.

pub mod builtins;
mod error;
pub mod fields;
pub mod grid;
pub mod kerr;
pub mod report;
pub mod sfr;
pub mod spinor;
mod tolerance;
pub mod twistor;

pub use error::{Error, Result};
pub use fields::{Domain, FnField, ScalarField, Scheme, SpinorFieldPair};
pub use grid::{AxisSpec, GridSpec};
pub use num_complex::Complex64;
pub use report::{PointRecord, ResidualReport, Verdict};
pub use sfr::{Branch, BranchClassification, DirectionRatio, RatioField, VerifyOptions};
pub use spinor::{MinkVec, Role, SpinMat, Spinor, Variance};
pub use tolerance::Tolerances;
pub use twistor::{DualTwistor, Twistor};
