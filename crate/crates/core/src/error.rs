use std::fmt;

use num_complex::Complex64;

/// A parameter constraint violated during validation. Each variant names
/// exactly one constraint so callers can report them individually.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamViolation {
    /// Re(alpha) <= 1/2
    AlphaHalfPlane,
    /// A + B = 0
    SumZero,
    /// |A - B| >= 2
    DiffTooLarge,
    /// |A| > 1
    ANormTooLarge,
    /// |B| > 1
    BNormTooLarge,
    /// k|A - B| >= 2
    KDiffTooLarge,
    /// k outside [0, 1)
    KOutOfRange,
    /// beta = 1 (the chain coefficient formulas divide by 1 - beta)
    BetaOne,
}

impl ParamViolation {
    pub fn name(&self) -> &'static str {
        match self {
            ParamViolation::AlphaHalfPlane => "re-alpha-not-above-half",
            ParamViolation::SumZero => "a-plus-b-zero",
            ParamViolation::DiffTooLarge => "a-minus-b-too-large",
            ParamViolation::ANormTooLarge => "a-norm-above-one",
            ParamViolation::BNormTooLarge => "b-norm-above-one",
            ParamViolation::KDiffTooLarge => "k-times-a-minus-b-too-large",
            ParamViolation::KOutOfRange => "k-out-of-range",
            ParamViolation::BetaOne => "beta-equals-one",
        }
    }
}

impl fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            ParamViolation::AlphaHalfPlane => "Re(alpha) must exceed 1/2",
            ParamViolation::SumZero => "A + B must be nonzero",
            ParamViolation::DiffTooLarge => "|A - B| must be below 2",
            ParamViolation::ANormTooLarge => "|A| must not exceed 1",
            ParamViolation::BNormTooLarge => "|B| must not exceed 1",
            ParamViolation::KDiffTooLarge => "k|A - B| must be below 2",
            ParamViolation::KOutOfRange => "k must lie in [0, 1)",
            ParamViolation::BetaOne => "beta must differ from 1",
        };
        write!(f, "{} ({})", self.name(), msg)
    }
}

/// Why a pointwise margin evaluation could not produce a finite number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointErrorKind {
    /// |g(z) - beta| fell below the division guard.
    GMinusBetaVanishes,
    /// f(z)/z fell below the division guard (f vanishes off the origin).
    RatioVanishes,
    /// The evaluated quantity was NaN or infinite.
    NonFinite,
}

impl PointErrorKind {
    pub fn name(&self) -> &'static str {
        match self {
            PointErrorKind::GMinusBetaVanishes => "g-minus-beta-vanishes",
            PointErrorKind::RatioVanishes => "f-over-z-vanishes",
            PointErrorKind::NonFinite => "non-finite-value",
        }
    }
}

/// A pointwise precondition failure, with the witness point that caused it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointError {
    pub kind: PointErrorKind,
    pub at: Complex64,
}

impl fmt::Display for PointError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at z = {}", self.kind.name(), self.at)
    }
}

/// Toolkit-wide error type.
#[derive(Debug)]
pub enum Error {
    /// Evaluation outside the representation's guaranteed radius.
    Domain {
        z: Complex64,
        radius: f64,
    },
    /// The coefficient list cannot represent an analytic function on the
    /// closed unit disk (class-tag violation, bad decay, empty, non-finite).
    Representation(String),
    /// Unknown catalog entry or criterion preset.
    Unknown(&'static str, String),
    /// Division guard hit during evaluation.
    Point(PointError),
    /// One or more parameter constraints violated.
    Params(Vec<ParamViolation>),
    /// Branch continuation of log(phi2) failed.
    Branch {
        at: Complex64,
        t: f64,
        reason: &'static str,
    },
    /// A Moebius denominator in the w/p transfer vanished.
    Pole {
        at: Complex64,
        t: f64,
    },
    /// |F_z| too small to form a dilatation quotient.
    DegenerateDerivative {
        at: Complex64,
    },
    /// Invalid run configuration (with flag/line provenance when known).
    Config {
        provenance: String,
        message: String,
    },
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { z, radius } => {
                write!(
                    f,
                    "point {} outside the representation radius {}",
                    z, radius
                )
            }
            Error::Representation(msg) => write!(f, "invalid representation: {}", msg),
            Error::Unknown(what, name) => write!(f, "unknown {}: {}", what, name),
            Error::Point(p) => write!(f, "{}", p),
            Error::Params(violations) => {
                write!(f, "parameter validation failed: ")?;
                for (i, v) in violations.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{}", v)?;
                }
                Ok(())
            }
            Error::Branch { at, t, reason } => {
                write!(
                    f,
                    "branch continuation failed at z = {}, t = {}: {}",
                    at, t, reason
                )
            }
            Error::Pole { at, t } => {
                write!(f, "transfer denominator vanished at z = {}, t = {}", at, t)
            }
            Error::DegenerateDerivative { at } => {
                write!(f, "degenerate derivative |F_z| at z = {}", at)
            }
            Error::Config {
                provenance,
                message,
            } => {
                write!(f, "config error ({}): {}", provenance, message)
            }
            Error::Io(e) => write!(f, "io error: {}", e),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

impl From<PointError> for Error {
    fn from(e: PointError) -> Self {
        Error::Point(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
