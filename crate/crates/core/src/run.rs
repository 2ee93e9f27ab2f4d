//! Pipeline orchestration: validate -> criterion check -> (chain
//! diagnostics) -> (quasiconformal estimates) -> oracle cross-checks ->
//! deterministic report + images.
//!
//! Exit status: 0 = no violation found and oracles consistent, 1 =
//! violation, 2 = inapplicable or configuration error, 3 = internal
//! inconsistency (criterion passed but an oracle refutes univalence).

use std::path::PathBuf;
use std::time::Instant;

use num_complex::Complex64;

use crate::chain::{chain_diagnostics, default_t_samples, ChainContext, ChainDiagnostics};
use crate::config::{EmitFlag, RunConfig};
use crate::criteria::{
    check_criterion, preset_criterion, CheckOptions, CriterionReport, MarginField, RefinedWorst,
    Verdict,
};
use crate::error::Result;
use crate::func::AnalyticFunction;
use crate::grid::{Clustering, DiskGrid};
use crate::oracle::{
    argument_principle_oracle, local_univalence, pairwise_injectivity, OracleReport, OracleVerdict,
    Witness,
};
use crate::params::CriterionParams;
use crate::qc::{dilatation_report, extend_point, seam_continuity, AnnulusSpec, BeltramiEstimate};
use crate::render::{
    render_beltrami_heatmap, render_domain_coloring, render_margin_heatmap, Window,
};
use crate::report::{
    BeltramiDoc, BoundsDoc, CheckDoc, ComplexDoc, ConfigDoc, CriterionDoc, DiagnosticsDoc,
    FieldDoc, OracleDoc, OracleWitnessDoc, ParamsDoc, QcDoc, RefinedDoc, ReportDoc, SeamDoc,
    WitnessPointDoc,
};

/// Wall-clock seconds per phase. Kept out of the report file so identical
/// configurations produce byte-identical reports.
#[derive(Debug, Clone, Copy, Default)]
pub struct PhaseTimings {
    pub check_s: f64,
    pub diagnostics_s: f64,
    pub qc_s: f64,
    pub oracles_s: f64,
    pub total_s: f64,
}

pub struct RunOutput {
    pub doc: ReportDoc,
    pub report_text: String,
    /// (file name, bytes) for every requested image.
    pub images: Vec<(String, Vec<u8>)>,
    pub criterion: CriterionReport,
    pub beltrami: Option<BeltramiEstimate>,
    pub exit_status: i32,
    pub timings: PhaseTimings,
}

fn field_doc(f: &MarginField) -> FieldDoc {
    FieldDoc {
        nr: f.grid.n_r as u64,
        ntheta: f.grid.n_theta as u64,
        rmax: f.grid.r_max,
        clustering: f.grid.clustering.name().into(),
        worst_margin: f.worst_margin,
        worst_i: f.worst_index.0 as u64,
        worst_j: f.worst_index.1 as u64,
        worst_point: f.worst_point.into(),
    }
}

fn refined_doc(r: &RefinedWorst) -> RefinedDoc {
    RefinedDoc {
        margin: r.margin,
        point: r.point.into(),
        rounds: r.rounds as u64,
    }
}

fn oracle_doc(r: &OracleReport) -> OracleDoc {
    let witness = r.witness.map(|w| match w {
        Witness::Collision(z1, z2) => OracleWitnessDoc {
            kind: "collision".into(),
            z1: Some(z1.into()),
            z2: Some(z2.into()),
            target: None,
            count: None,
            at: None,
        },
        Witness::PreimageCount { target, count } => OracleWitnessDoc {
            kind: "preimage-count".into(),
            z1: None,
            z2: None,
            target: Some(target.into()),
            count: Some(count),
            at: None,
        },
        Witness::CriticalPoint(z) => OracleWitnessDoc {
            kind: "critical-point".into(),
            z1: None,
            z2: None,
            target: None,
            count: None,
            at: Some(z.into()),
        },
    });
    OracleDoc {
        method: r.method.name().into(),
        verdict: r.verdict.name().into(),
        witness,
        samples_used: r.samples_used as u64,
    }
}

fn finite_opt(x: f64) -> Option<f64> {
    if x.is_finite() {
        Some(x)
    } else {
        None
    }
}

fn diagnostics_doc(d: &ChainDiagnostics) -> DiagnosticsDoc {
    DiagnosticsDoc {
        t_samples: d.t_samples.clone(),
        max_w_norm: finite_opt(d.max_w_norm),
        min_p_re: finite_opt(d.min_p_re),
        w_origin_max_dev: finite_opt(d.w_origin_max_dev),
        all_pass: d.all_pass,
        items: d
            .items
            .iter()
            .map(|c| CheckDoc {
                name: c.name.clone(),
                pass: c.pass,
                detail: c.detail.clone(),
            })
            .collect(),
    }
}

fn config_doc(cfg: &RunConfig) -> ConfigDoc {
    let cv = |v: &Option<Vec<Complex64>>| -> Option<Vec<ComplexDoc>> {
        v.as_ref()
            .map(|list| list.iter().map(|&c| c.into()).collect())
    };
    ConfigDoc {
        criterion: cfg.criterion.clone(),
        f: cfg.f.clone(),
        f_coeffs: cv(&cfg.f_coeffs),
        g: cfg.g.clone(),
        g_coeffs: cv(&cfg.g_coeffs),
        alpha: cfg.alpha.into(),
        beta: cfg.beta.into(),
        a: cfg.a.into(),
        b: cfg.b.into(),
        k: cfg.k,
        nr: cfg.nr as u64,
        ntheta: cfg.ntheta as u64,
        rmax: cfg.rmax,
        clustering: Clustering::ChebyshevTowardBoundary.name().into(),
        tol: cfg.tol,
        refine: cfg.refine as u64,
        out_dir: cfg.out_dir.to_string_lossy().into_owned(),
        emit: cfg.emit.iter().map(|e| e.name().to_string()).collect(),
        rhs_scale: cfg.rhs_scale,
    }
}

/// Default pairwise-oracle grid (capped at 10^4 points).
fn oracle_pairwise_grid() -> DiskGrid {
    DiskGrid::new(64, 128, 0.95, Clustering::Uniform).expect("static grid")
}

/// Default local-oracle grid.
fn oracle_local_grid() -> DiskGrid {
    DiskGrid::new(96, 96, 0.999, Clustering::ChebyshevTowardBoundary).expect("static grid")
}

fn run_oracles(f: &AnalyticFunction, notes: &mut Vec<String>) -> Vec<OracleReport> {
    let mut out = Vec::new();
    match pairwise_injectivity(f, &oracle_pairwise_grid(), 1e-9) {
        Ok(r) => out.push(r),
        Err(e) => notes.push(format!("pairwise oracle failed: {}", e)),
    }
    match argument_principle_oracle(f, 0.5, 16, 0.95, 1024) {
        Ok(r) => out.push(r),
        Err(e) => notes.push(format!("argument-principle oracle failed: {}", e)),
    }
    match local_univalence(f, &oracle_local_grid(), 0.1) {
        Ok(r) => out.push(r),
        Err(e) => notes.push(format!("local oracle failed: {}", e)),
    }
    out
}

/// Execute the full pipeline for one configuration.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    let t_start = Instant::now();
    let mut timings = PhaseTimings::default();
    let mut notes: Vec<String> = Vec::new();

    let f = config.build_f()?;
    let user_g = config.build_g(&f)?;
    let preset = preset_criterion(&config.criterion)?;
    let user_params = CriterionParams {
        alpha: config.alpha,
        beta: config.beta,
        a: config.a,
        b: config.b,
        k: config.k,
        mode: preset.mode,
    };
    let resolved = preset.resolve(&user_params);
    let grid = DiskGrid::new(
        config.nr,
        config.ntheta,
        config.rmax,
        Clustering::ChebyshevTowardBoundary,
    )?;
    let opts = CheckOptions {
        tol: config.tol,
        refine_rounds: config.refine,
        rhs_scale: config.rhs_scale,
    };

    let t0 = Instant::now();
    let criterion = check_criterion(
        &f,
        user_g.as_ref(),
        &config.criterion,
        &user_params,
        &grid,
        &opts,
    )?;
    timings.check_s = t0.elapsed().as_secs_f64();
    let pass = criterion.verdict == Verdict::NoViolationFound;

    // Chain context shared by the diagnostics and quasiconformal phases.
    let ctx = match preset.resolve_g(&f, user_g.as_ref()) {
        Ok(g) => match ChainContext::new(f.clone(), g, resolved, Some(&grid)) {
            Ok(ctx) => Some(ctx),
            Err(e) => {
                notes.push(format!("chain context unavailable: {}", e));
                None
            }
        },
        Err(e) => {
            notes.push(format!("g resolution failed: {}", e));
            None
        }
    };

    let t0 = Instant::now();
    let diagnostics = if pass && config.emit.contains(&EmitFlag::Diagnostics) {
        ctx.as_ref().map(|ctx| {
            let diag_grid = DiskGrid::new(8, 16, 0.999, Clustering::ChebyshevTowardBoundary)
                .expect("static grid");
            chain_diagnostics(ctx, &diag_grid, &default_t_samples(), 1e-10)
        })
    } else {
        None
    };
    timings.diagnostics_s = t0.elapsed().as_secs_f64();

    let t0 = Instant::now();
    let mut beltrami: Option<BeltramiEstimate> = None;
    let mut seam: Option<SeamDoc> = None;
    if resolved.mode == crate::params::Mode::Quasiconformal {
        if let Some(ctx) = &ctx {
            let annulus = AnnulusSpec::new(1.05, 3.0, 128, 256)?;
            match dilatation_report(ctx, &annulus, 1e-4, Some(pass)) {
                Ok(b) => beltrami = Some(b),
                Err(e) => notes.push(format!("dilatation estimate failed: {}", e)),
            }
            match seam_continuity(ctx, 512, 1e-6) {
                Ok((max_gap, _)) => {
                    seam = Some(SeamDoc {
                        eps: 1e-6,
                        n_theta: 512,
                        max_gap,
                    })
                }
                Err(e) => notes.push(format!("seam continuity failed: {}", e)),
            }
        }
    }
    timings.qc_s = t0.elapsed().as_secs_f64();

    let t0 = Instant::now();
    let oracles = run_oracles(&f, &mut notes);
    timings.oracles_s = t0.elapsed().as_secs_f64();

    let refuted = oracles
        .iter()
        .any(|o| o.verdict == OracleVerdict::NonUnivalent);
    let exit_status = match criterion.verdict {
        Verdict::Inapplicable => 2,
        Verdict::Violation => 1,
        Verdict::NoViolationFound => {
            if refuted {
                3
            } else {
                0
            }
        }
    };

    // Images (rendered before the report so error-pixel counts land in it).
    let mut images: Vec<(String, Vec<u8>)> = Vec::new();
    if config.emit.contains(&EmitFlag::Heatmap1) {
        if let Some(field) = &criterion.field1 {
            images.push(("margin1.ppm".into(), render_margin_heatmap(field)));
        }
    }
    if config.emit.contains(&EmitFlag::Heatmap2) {
        if let Some(field) = &criterion.field2 {
            images.push(("margin2.ppm".into(), render_margin_heatmap(field)));
        }
    }
    if config.emit.contains(&EmitFlag::Domain) {
        let (window, bytes, errors) = match (&ctx, resolved.mode) {
            (Some(ctx), crate::params::Mode::Quasiconformal) => {
                let w = Window {
                    center: Complex64::new(0.0, 0.0),
                    half_width: 3.0,
                    pixels: 256,
                };
                let (b, e) = render_domain_coloring(|z| extend_point(ctx, z).ok(), &w);
                (w, b, e)
            }
            _ => {
                let w = Window {
                    center: Complex64::new(0.0, 0.0),
                    half_width: 1.0,
                    pixels: 256,
                };
                let (b, e) = render_domain_coloring(|z| f.eval(z).ok(), &w);
                (w, b, e)
            }
        };
        notes.push(format!(
            "domain-coloring: {} error pixels over {}x{} window of half-width {}",
            errors, window.pixels, window.pixels, window.half_width
        ));
        images.push(("domain.ppm".into(), bytes));
    }
    if config.emit.contains(&EmitFlag::Beltrami) {
        if let Some(b) = &beltrami {
            images.push(("beltrami.ppm".into(), render_beltrami_heatmap(b)));
        }
    }

    let doc = ReportDoc {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        config: config_doc(config),
        criterion: CriterionDoc {
            id: criterion.criterion_id.clone(),
            g: criterion.g_label.clone(),
            params: ParamsDoc {
                alpha: criterion.params.alpha.into(),
                beta: criterion.params.beta.into(),
                a: criterion.params.a.into(),
                b: criterion.params.b.into(),
                k: criterion.params.k,
                mode: criterion.params.mode.name().into(),
            },
            bounds: criterion.bounds.map(|b| BoundsDoc {
                r1: b.r1,
                r2: b.r2,
                c: b.c.into(),
            }),
            tol: criterion.tol,
            verdict: criterion.verdict.name().into(),
            field1: criterion.field1.as_ref().map(field_doc),
            field2: criterion.field2.as_ref().map(field_doc),
            refined1: criterion.refined1.as_ref().map(refined_doc),
            refined2: criterion.refined2.as_ref().map(refined_doc),
            witness: criterion.witness.map(|w| WitnessPointDoc {
                kind: w.kind.name().into(),
                at: w.at.into(),
            }),
            diagnostics: criterion
                .diagnostics
                .iter()
                .map(|c| CheckDoc {
                    name: c.name.clone(),
                    pass: c.pass,
                    detail: c.detail.clone(),
                })
                .collect(),
        },
        chain_diagnostics: diagnostics.as_ref().map(diagnostics_doc),
        oracles: oracles.iter().map(oracle_doc).collect(),
        qc: beltrami.as_ref().map(|b| QcDoc {
            beltrami: BeltramiDoc {
                r_in: b.annulus.r_in,
                r_out: b.annulus.r_out,
                nr: b.annulus.n_r as u64,
                ntheta: b.annulus.n_theta as u64,
                h: b.h,
                sup_abs_mu: b.sup_abs_mu,
                worst_point: b.worst_point.into(),
                n_degenerate: b.n_degenerate as u64,
                unreliable: b.unreliable,
                theoretical_k: b.theoretical_k,
                criterion_satisfied: b.criterion_satisfied,
                max_abs_w_moebius: b.max_abs_w_moebius,
                max_abs_w_herglotz: b.max_abs_w_herglotz,
            },
            seam,
        }),
        notes,
        exit_status: exit_status as i64,
    };
    let report_text = crate::report::write_report_string(&doc);
    timings.total_s = t_start.elapsed().as_secs_f64();

    Ok(RunOutput {
        doc,
        report_text,
        images,
        criterion,
        beltrami,
        exit_status,
        timings,
    })
}

/// Write the requested artifacts under the configured output directory.
pub fn write_artifacts(config: &RunConfig, out: &RunOutput) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(&config.out_dir)?;
    let mut paths = Vec::new();
    if config.emit.contains(&EmitFlag::Report) {
        let p = config.out_dir.join("run.report");
        std::fs::write(&p, out.report_text.as_bytes())?;
        paths.push(p);
    }
    for (name, bytes) in &out.images {
        let p = config.out_dir.join(name);
        std::fs::write(&p, bytes)?;
        paths.push(p);
    }
    Ok(paths)
}
