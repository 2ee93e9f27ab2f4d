//! Pointwise and grid evaluation of the univalence / quasiconformal
//! inequalities, preset parameter substitutions, and verdicts.
//!
//! Margins follow the RHS - LHS convention: a positive margin means the
//! inequality holds at that point with room to spare. Condition 1 is a
//! strict bound (pass needs margin > tol), condition 2 is non-strict
//! (pass needs margin >= -tol). Grid sampling cannot certify a supremum
//! over the whole disk, so a clean pass is reported as
//! `no-violation-found`, never as "univalent".

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, PointError, PointErrorKind, Result};
use crate::func::{AnalyticFunction, ClassTag, DIV_GUARD};
use crate::grid::DiskGrid;
use crate::params::{rhs_bounds, CriterionParams, Mode, RhsBounds};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NoViolationFound,
    Violation,
    Inapplicable,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::NoViolationFound => "no-violation-found",
            Verdict::Violation => "violation",
            Verdict::Inapplicable => "inapplicable",
        }
    }
}

/// Per-point margins over a grid with worst-point tracking. The worst
/// index is the lexicographically first (i_r, i_theta) attaining the
/// minimum, independent of evaluation order.
#[derive(Debug, Clone)]
pub struct MarginField {
    pub grid: DiskGrid,
    pub margins: Vec<f64>,
    pub worst_margin: f64,
    pub worst_index: (usize, usize),
    pub worst_point: Complex64,
}

impl MarginField {
    fn from_margins(grid: DiskGrid, margins: Vec<f64>) -> Self {
        let mut worst = f64::INFINITY;
        let mut worst_flat = 0;
        for (idx, &m) in margins.iter().enumerate() {
            if m < worst {
                worst = m;
                worst_flat = idx;
            }
        }
        let worst_index = grid.unflat(worst_flat);
        let worst_point = grid.point(worst_index.0, worst_index.1);
        MarginField {
            grid,
            margins,
            worst_margin: worst,
            worst_index,
            worst_point,
        }
    }
}

/// Result of the local refinement passes around a field's worst point.
#[derive(Debug, Clone, Copy)]
pub struct RefinedWorst {
    pub margin: f64,
    pub point: Complex64,
    pub rounds: usize,
}

#[derive(Debug, Clone)]
pub struct NamedCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub criterion_id: String,
    pub params: CriterionParams,
    pub g_label: String,
    pub bounds: Option<RhsBounds>,
    pub tol: f64,
    pub verdict: Verdict,
    pub field1: Option<MarginField>,
    pub field2: Option<MarginField>,
    pub refined1: Option<RefinedWorst>,
    pub refined2: Option<RefinedWorst>,
    pub witness: Option<PointError>,
    pub diagnostics: Vec<NamedCheck>,
}

/// How a preset binds the comparison function g.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GRule {
    /// Caller-supplied g (constant 1 when none given).
    User,
    /// g = f'.
    FPrime,
    /// g = f/z.
    FOverZ,
}

/// A preset: fixed parameter substitutions plus the g binding.
#[derive(Debug, Clone, Copy)]
pub struct PresetSpec {
    pub id: &'static str,
    pub mode: Mode,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub g_rule: GRule,
    /// Re f'(z) > 0 check instead of the margin machinery.
    pub noshiro: bool,
}

impl PresetSpec {
    /// Overlay the fixed substitutions on the caller's parameters.
    pub fn resolve(&self, user: &CriterionParams) -> CriterionParams {
        let fix = |v: Option<f64>, d: Complex64| v.map(|x| Complex64::new(x, 0.0)).unwrap_or(d);
        CriterionParams {
            alpha: fix(self.alpha, user.alpha),
            beta: fix(self.beta, user.beta),
            a: fix(self.a, user.a),
            b: fix(self.b, user.b),
            k: user.k,
            mode: self.mode,
        }
    }

    pub fn resolve_g(
        &self,
        f: &AnalyticFunction,
        user_g: Option<&AnalyticFunction>,
    ) -> Result<AnalyticFunction> {
        match self.g_rule {
            GRule::User => match user_g {
                Some(g) => Ok(g.clone()),
                None => AnalyticFunction::preset("constant_one", &[]),
            },
            GRule::FPrime => f.derivative(),
            GRule::FOverZ => f.quotient_by_z(),
        }
    }
}

pub const PRESET_IDS: &[&str] = &[
    "general",
    "c1",
    "c2",
    "c3",
    "becker-general",
    "c4",
    "becker",
    "pascu",
    "starlike",
    "noshiro",
    "qc-general",
    "qc-c6",
    "qc-becker",
];

/// Look up a preset by id.
pub fn preset_criterion(id: &str) -> Result<PresetSpec> {
    let spec = |mode, alpha, beta, a, b, g_rule, noshiro, name| PresetSpec {
        id: name,
        mode,
        alpha,
        beta,
        a,
        b,
        g_rule,
        noshiro,
    };
    let u = Mode::Univalence;
    let q = Mode::Quasiconformal;
    Ok(match id {
        "general" => spec(u, None, None, None, None, GRule::User, false, "general"),
        "c1" => spec(u, Some(1.0), None, None, None, GRule::User, false, "c1"),
        "c2" => spec(
            u,
            Some(1.0),
            Some(0.0),
            None,
            None,
            GRule::User,
            false,
            "c2",
        ),
        "c3" | "becker-general" => spec(
            u,
            Some(1.0),
            Some(0.0),
            None,
            None,
            GRule::FPrime,
            false,
            "c3",
        ),
        "c4" => spec(u, Some(1.0), None, None, None, GRule::FPrime, false, "c4"),
        "becker" => spec(
            u,
            Some(1.0),
            Some(0.0),
            Some(1.0),
            Some(1.0),
            GRule::FPrime,
            false,
            "becker",
        ),
        "pascu" => spec(
            u,
            Some(1.0),
            None,
            Some(1.0),
            Some(1.0),
            GRule::FPrime,
            false,
            "pascu",
        ),
        "starlike" => spec(
            u,
            Some(1.0),
            Some(0.0),
            None,
            None,
            GRule::FOverZ,
            false,
            "starlike",
        ),
        "noshiro" => spec(
            u,
            Some(1.0),
            Some(0.0),
            Some(1.0),
            Some(1.0),
            GRule::FPrime,
            true,
            "noshiro",
        ),
        "qc-general" => spec(q, None, None, None, None, GRule::User, false, "qc-general"),
        "qc-c6" => spec(
            q,
            Some(1.0),
            Some(0.0),
            None,
            None,
            GRule::FPrime,
            false,
            "qc-c6",
        ),
        "qc-becker" => spec(
            q,
            Some(1.0),
            Some(0.0),
            Some(1.0),
            Some(1.0),
            GRule::FPrime,
            false,
            "qc-becker",
        ),
        other => return Err(Error::Unknown("criterion preset", other.into())),
    })
}

fn to_point_error(e: Error, z: Complex64) -> PointError {
    match e {
        Error::Point(p) => p,
        _ => PointError {
            kind: PointErrorKind::NonFinite,
            at: z,
        },
    }
}

fn finite(m: f64, z: Complex64) -> std::result::Result<f64, PointError> {
    if m.is_finite() {
        Ok(m)
    } else {
        Err(PointError {
            kind: PointErrorKind::NonFinite,
            at: z,
        })
    }
}

/// Condition-1 margin: r1 - |(1/alpha)(f'(z)/(g(z)-beta) - 1)|.
pub fn margin_condition1(
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    p: &CriterionParams,
    bounds: &RhsBounds,
    z: Complex64,
) -> std::result::Result<f64, PointError> {
    let fd1 = f.eval_jet(z).map_err(|e| to_point_error(e, z))?.d1;
    let gv = g.eval(z).map_err(|e| to_point_error(e, z))?;
    let denom = gv - p.beta;
    if denom.norm() < DIV_GUARD {
        return Err(PointError {
            kind: PointErrorKind::GMinusBetaVanishes,
            at: z,
        });
    }
    let q = (fd1 / denom - 1.0) / p.alpha;
    finite(bounds.r1 - q.norm(), z)
}

/// The condition-2 quantity E(z) whose modulus is bounded by r2:
/// (f'/(g-beta) - 1)|z|^2 + (1-|z|^2)[((1-alpha)/alpha) zf'/f + zg'/(g-beta)] - c.
pub fn condition2_quantity(
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    p: &CriterionParams,
    bounds: &RhsBounds,
    z: Complex64,
) -> std::result::Result<Complex64, PointError> {
    let fj = f.eval_jet(z).map_err(|e| to_point_error(e, z))?;
    let gj = g.eval_jet(z).map_err(|e| to_point_error(e, z))?;
    let denom = gj.value - p.beta;
    if denom.norm() < DIV_GUARD {
        return Err(PointError {
            kind: PointErrorKind::GMinusBetaVanishes,
            at: z,
        });
    }
    let zz = z.norm_sqr();
    let mut bracket = z * gj.d1 / denom;
    let one_minus_alpha = Complex64::new(1.0, 0.0) - p.alpha;
    if one_minus_alpha.norm() > 1e-15 {
        // zf'/f = f'/(f/z); the ratio form keeps z = 0 regular.
        let ratio = f.ratio_over_z(z).map_err(|e| to_point_error(e, z))?;
        bracket += (one_minus_alpha / p.alpha) * (fj.d1 / ratio);
    }
    let e = (fj.d1 / denom - 1.0) * zz + (1.0 - zz) * bracket - bounds.c;
    if e.re.is_finite() && e.im.is_finite() {
        Ok(e)
    } else {
        Err(PointError {
            kind: PointErrorKind::NonFinite,
            at: z,
        })
    }
}

/// Condition-2 margin: r2 - |E(z)|.
pub fn margin_condition2(
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    p: &CriterionParams,
    bounds: &RhsBounds,
    z: Complex64,
) -> std::result::Result<f64, PointError> {
    let e = condition2_quantity(f, g, p, bounds, z)?;
    finite(bounds.r2 - e.norm(), z)
}

/// Options for a grid check.
#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    pub tol: f64,
    pub refine_rounds: usize,
    /// Test hook: scales r1 and r2 (fault injection for the oracle
    /// cross-check). 1.0 in normal operation.
    pub rhs_scale: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            tol: 1e-9,
            refine_rounds: 0,
            rhs_scale: 1.0,
        }
    }
}

fn eval_grid(
    grid: &DiskGrid,
    eval: impl Fn(Complex64) -> std::result::Result<f64, PointError> + Sync,
) -> std::result::Result<Vec<f64>, PointError> {
    let results: Vec<std::result::Result<f64, PointError>> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (i, j) = grid.unflat(idx);
            eval(grid.point(i, j))
        })
        .collect();
    // Lowest flat index wins so the witness is deterministic.
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        out.push(r?);
    }
    Ok(out)
}

fn refine_worst(
    grid: &DiskGrid,
    field: &MarginField,
    rounds: usize,
    eval: impl Fn(Complex64) -> std::result::Result<f64, PointError>,
) -> std::result::Result<RefinedWorst, PointError> {
    let (i, j) = field.worst_index;
    let mut best = (field.worst_margin, field.worst_point);
    let mut r = grid.radius(i);
    let mut th = grid.theta(j);
    let mut dr = if i + 1 < grid.n_r {
        grid.radius(i + 1) - grid.radius(i)
    } else {
        grid.radius(i) - grid.radius(i - 1)
    };
    let mut dth = std::f64::consts::TAU / grid.n_theta as f64;
    for _ in 0..rounds {
        dr /= 4.0;
        dth /= 4.0;
        let (mut round_best, mut round_pt) = (best.0, (r, th));
        for a in -4..=4i32 {
            for b in -4..=4i32 {
                let rr = (r + a as f64 * dr).clamp(0.0, grid.r_max);
                let tt = th + b as f64 * dth;
                let m = eval(Complex64::from_polar(rr, tt))?;
                if m < round_best {
                    round_best = m;
                    round_pt = (rr, tt);
                }
            }
        }
        r = round_pt.0;
        th = round_pt.1;
        if round_best < best.0 {
            best = (round_best, Complex64::from_polar(r, th));
        }
    }
    Ok(RefinedWorst {
        margin: best.0,
        point: best.1,
        rounds,
    })
}

/// Run a preset criterion over a grid.
///
/// The verdict is `no-violation-found` iff every condition-1 margin is
/// above tol and every condition-2 margin is at least -tol (including the
/// refined worst values when refinement is enabled). Pointwise
/// precondition failures yield `inapplicable` with the first failing grid
/// point as witness.
pub fn check_criterion(
    f: &AnalyticFunction,
    user_g: Option<&AnalyticFunction>,
    preset_id: &str,
    user_params: &CriterionParams,
    grid: &DiskGrid,
    opts: &CheckOptions,
) -> Result<CriterionReport> {
    let preset = preset_criterion(preset_id)?;
    let params = preset.resolve(user_params);
    params.validate()?;
    if f.class_tag() != ClassTag::ClassA {
        return Err(Error::Representation(format!(
            "criterion checks need a class-A function, got {}",
            f.class_tag().name()
        )));
    }
    let g = preset.resolve_g(f, user_g)?;
    let g0 = g.eval(Complex64::new(0.0, 0.0))?;
    if (g0 - 1.0).norm() > 1e-12 {
        return Err(Error::Representation(format!(
            "g(0) must equal 1, got {}",
            g0
        )));
    }

    let mut diagnostics = Vec::new();
    let mut report = CriterionReport {
        criterion_id: preset.id.to_string(),
        params,
        g_label: g.label().to_string(),
        bounds: None,
        tol: opts.tol,
        verdict: Verdict::NoViolationFound,
        field1: None,
        field2: None,
        refined1: None,
        refined2: None,
        witness: None,
        diagnostics: Vec::new(),
    };

    if preset.noshiro {
        // Alexander-Noshiro-Warshawski limit case: Re f'(z) > 0.
        let margins = eval_grid(grid, |z| {
            let d1 = f.eval_jet(z).map_err(|e| to_point_error(e, z))?.d1;
            finite(d1.re, z)
        });
        match margins {
            Ok(m) => {
                let field = MarginField::from_margins(*grid, m);
                let mut worst = field.worst_margin;
                if opts.refine_rounds > 0 {
                    let refined = refine_worst(grid, &field, opts.refine_rounds, |z| {
                        let d1 = f.eval_jet(z).map_err(|e| to_point_error(e, z))?.d1;
                        finite(d1.re, z)
                    });
                    match refined {
                        Ok(rw) => {
                            worst = worst.min(rw.margin);
                            report.refined1 = Some(rw);
                        }
                        Err(p) => {
                            report.verdict = Verdict::Inapplicable;
                            report.witness = Some(p);
                            return Ok(report);
                        }
                    }
                }
                report.verdict = if worst > opts.tol {
                    Verdict::NoViolationFound
                } else {
                    Verdict::Violation
                };
                report.field1 = Some(field);
            }
            Err(p) => {
                report.verdict = Verdict::Inapplicable;
                report.witness = Some(p);
            }
        }
        return Ok(report);
    }

    let mut bounds = rhs_bounds(&params);
    bounds.r1 *= opts.rhs_scale;
    bounds.r2 *= opts.rhs_scale;
    report.bounds = Some(bounds);

    // The (1-alpha)/alpha zf'/f term divides by f(z)/z; scan the grid for
    // zeros of f off the origin before evaluating margins.
    let alpha_term_active = (Complex64::new(1.0, 0.0) - params.alpha).norm() > 1e-15;
    if alpha_term_active {
        let scan = eval_grid(grid, |z| {
            f.ratio_over_z(z)
                .map_err(|e| to_point_error(e, z))
                .map(|r| r.norm())
        });
        if let Err(p) = scan {
            report.verdict = Verdict::Inapplicable;
            report.witness = Some(p);
            return Ok(report);
        }
        diagnostics.push(NamedCheck {
            name: "f-nonvanishing-scan".into(),
            pass: true,
            detail: "f(z)/z bounded away from zero on the grid".into(),
        });
    }

    let m1 = eval_grid(grid, |z| margin_condition1(f, &g, &params, &bounds, z));
    let m2 = eval_grid(grid, |z| margin_condition2(f, &g, &params, &bounds, z));
    let (m1, m2) = match (m1, m2) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(p), _) | (_, Err(p)) => {
            report.verdict = Verdict::Inapplicable;
            report.witness = Some(p);
            report.diagnostics = diagnostics;
            return Ok(report);
        }
    };
    let field1 = MarginField::from_margins(*grid, m1);
    let field2 = MarginField::from_margins(*grid, m2);
    let mut worst1 = field1.worst_margin;
    let mut worst2 = field2.worst_margin;

    if opts.refine_rounds > 0 {
        let r1 = refine_worst(grid, &field1, opts.refine_rounds, |z| {
            margin_condition1(f, &g, &params, &bounds, z)
        });
        let r2 = refine_worst(grid, &field2, opts.refine_rounds, |z| {
            margin_condition2(f, &g, &params, &bounds, z)
        });
        match (r1, r2) {
            (Ok(a), Ok(b)) => {
                worst1 = worst1.min(a.margin);
                worst2 = worst2.min(b.margin);
                report.refined1 = Some(a);
                report.refined2 = Some(b);
            }
            (Err(p), _) | (_, Err(p)) => {
                report.verdict = Verdict::Inapplicable;
                report.witness = Some(p);
                report.diagnostics = diagnostics;
                return Ok(report);
            }
        }
    }

    report.verdict = if worst1 > opts.tol && worst2 >= -opts.tol {
        Verdict::NoViolationFound
    } else {
        Verdict::Violation
    };
    report.field1 = Some(field1);
    report.field2 = Some(field2);
    report.diagnostics = diagnostics;
    Ok(report)
}
