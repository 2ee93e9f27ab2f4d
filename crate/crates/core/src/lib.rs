//! Numerical toolkit for univalence criteria on the unit disk: pointwise
//! inequality checks over polar grids, the associated Loewner chain and its
//! diagnostics, a piecewise quasiconformal extension with dilatation
//! estimation, and criterion-independent injectivity oracles.

pub mod chain;
pub mod config;
pub mod criteria;
pub mod error;
pub mod func;
pub mod grid;
pub mod oracle;
pub mod params;
pub mod qc;
pub mod render;
pub mod report;
pub mod run;

pub use error::{Error, ParamViolation, PointError, PointErrorKind, Result};
pub use func::{AnalyticFunction, ClassTag, Jet2};
pub use grid::{Clustering, DiskGrid};
pub use params::{rhs_bounds, CriterionParams, Mode, RhsBounds};
