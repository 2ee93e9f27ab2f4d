//! Criterion parameters (alpha, beta, A, B, k) and the right-hand-side
//! bounds of the two inequalities.

use num_complex::Complex64;

use crate::error::{Error, ParamViolation, Result};

/// Whether the check certifies plain univalence or a k-quasiconformal
/// extension (which tightens every bound by powers of k).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Univalence,
    Quasiconformal,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Univalence => "univalence",
            Mode::Quasiconformal => "quasiconformal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionParams {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    pub k: f64,
    pub mode: Mode,
}

impl CriterionParams {
    pub fn univalence(alpha: Complex64, beta: Complex64, a: Complex64, b: Complex64) -> Self {
        CriterionParams {
            alpha,
            beta,
            a,
            b,
            k: 0.0,
            mode: Mode::Univalence,
        }
    }

    pub fn quasiconformal(
        alpha: Complex64,
        beta: Complex64,
        a: Complex64,
        b: Complex64,
        k: f64,
    ) -> Self {
        CriterionParams {
            alpha,
            beta,
            a,
            b,
            k,
            mode: Mode::Quasiconformal,
        }
    }

    /// Collect every violated constraint (empty means valid). Negated
    /// comparisons so NaN parameters count as violations.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn violations(&self) -> Vec<ParamViolation> {
        let mut out = Vec::new();
        if !(self.alpha.re > 0.5) {
            out.push(ParamViolation::AlphaHalfPlane);
        }
        if (self.a + self.b).norm() < 1e-12 {
            out.push(ParamViolation::SumZero);
        }
        if (self.a - self.b).norm() >= 2.0 {
            out.push(ParamViolation::DiffTooLarge);
        }
        if self.a.norm() > 1.0 {
            out.push(ParamViolation::ANormTooLarge);
        }
        if self.b.norm() > 1.0 {
            out.push(ParamViolation::BNormTooLarge);
        }
        if self.mode == Mode::Quasiconformal {
            if !(self.k >= 0.0 && self.k < 1.0) {
                out.push(ParamViolation::KOutOfRange);
            } else if self.k * (self.a - self.b).norm() >= 2.0 {
                out.push(ParamViolation::KDiffTooLarge);
            }
        }
        if (Complex64::new(1.0, 0.0) - self.beta).norm() <= 1e-12 {
            out.push(ParamViolation::BetaOne);
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Params(v))
        }
    }
}

/// RHS of condition 1 (r1), condition 2 (r2), and the center shift c
/// inside the condition-2 modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhsBounds {
    pub r1: f64,
    pub r2: f64,
    pub c: Complex64,
}

/// Bounds for the validated parameter set. In quasiconformal mode every
/// occurrence of A - B is scaled by k and A + B by k as well.
pub fn rhs_bounds(p: &CriterionParams) -> RhsBounds {
    let sum = (p.a + p.b).norm();
    let diff = (p.a - p.b).norm();
    let cross = (p.a.conj() - p.b.conj()) * (p.a + p.b);
    match p.mode {
        Mode::Univalence => RhsBounds {
            r1: sum / (2.0 - diff),
            r2: 2.0 * sum / (4.0 - diff * diff),
            c: cross / (4.0 - diff * diff),
        },
        Mode::Quasiconformal => {
            let k = p.k;
            RhsBounds {
                r1: k * sum / (2.0 - k * diff),
                r2: 2.0 * k * sum / (4.0 - k * k * diff * diff),
                c: k * k * cross / (4.0 - k * k * diff * diff),
            }
        }
    }
}
