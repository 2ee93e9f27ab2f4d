use std::process::ExitCode;

use clap::Parser;

use schlicht_core::config::RunConfig;
use schlicht_core::run::{run, write_artifacts};

/// Numerical univalence-criterion checks, Loewner-chain diagnostics and
/// quasiconformal extension estimates on the unit disk.
///
/// Exit status: 0 = no violation found and oracles consistent,
/// 1 = violation, 2 = inapplicable or configuration error,
/// 3 = internal inconsistency (criterion passed, oracle refutes).
#[derive(Parser, Debug)]
#[command(name = "schlicht", version, about)]
struct Cli {
    /// Criterion preset: general, c1, c2, c3 (alias becker-general), c4,
    /// becker, pascu, starlike, noshiro, qc-general, qc-c6, qc-becker.
    #[arg(long)]
    criterion: Option<String>,
    /// Catalog spec for f: identity | koebe | z_exp_cz:c |
    /// z_over_one_minus_cz:c | polynomial:c0;c1;...
    #[arg(long)]
    f: Option<String>,
    /// Explicit class-A coefficient list for f (semicolon-separated
    /// complex values "re" or "re,im"); wins over --f.
    #[arg(long = "f-coeffs")]
    f_coeffs: Option<String>,
    /// Comparison function g for user-g presets: constant_one |
    /// derivative_of | f_over_z | any catalog spec with g(0) = 1.
    #[arg(long)]
    g: Option<String>,
    /// Explicit coefficient list for g (c0 must be 1); wins over --g.
    #[arg(long = "g-coeffs")]
    g_coeffs: Option<String>,
    /// Complex parameter alpha ("re" or "re,im").
    #[arg(long)]
    alpha: Option<String>,
    /// Complex parameter beta.
    #[arg(long)]
    beta: Option<String>,
    /// Complex parameter A.
    #[arg(long = "A")]
    a: Option<String>,
    /// Complex parameter B.
    #[arg(long = "B")]
    b: Option<String>,
    /// Quasiconformal constant k in [0, 1).
    #[arg(long)]
    k: Option<String>,
    /// Radial sample count.
    #[arg(long)]
    nr: Option<String>,
    /// Angular sample count.
    #[arg(long)]
    ntheta: Option<String>,
    /// Outer sampling radius (< 1).
    #[arg(long)]
    rmax: Option<String>,
    /// Verdict tolerance.
    #[arg(long)]
    tol: Option<String>,
    /// Local refinement rounds around the worst point.
    #[arg(long)]
    refine: Option<String>,
    /// Output directory for reports and images.
    #[arg(long = "out-dir")]
    out_dir: Option<String>,
    /// Comma list of artifacts:
    /// report,heatmap1,heatmap2,domain,beltrami,diagnostics.
    #[arg(long)]
    emit: Option<String>,
    /// Flat key = value config file; flags override file entries.
    #[arg(long)]
    config: Option<String>,
    /// Worker threads (0 = automatic). Results are identical for any
    /// thread count.
    #[arg(long)]
    threads: Option<String>,
}

fn build_config(cli: &Cli) -> schlicht_core::Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)?;
        cfg.apply_file_text(&text, path)?;
    }
    let overrides: [(&str, &Option<String>); 18] = [
        ("criterion", &cli.criterion),
        ("f", &cli.f),
        ("f-coeffs", &cli.f_coeffs),
        ("g", &cli.g),
        ("g-coeffs", &cli.g_coeffs),
        ("alpha", &cli.alpha),
        ("beta", &cli.beta),
        ("A", &cli.a),
        ("B", &cli.b),
        ("k", &cli.k),
        ("nr", &cli.nr),
        ("ntheta", &cli.ntheta),
        ("rmax", &cli.rmax),
        ("tol", &cli.tol),
        ("refine", &cli.refine),
        ("out-dir", &cli.out_dir),
        ("emit", &cli.emit),
        ("threads", &cli.threads),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.apply(key, v, &format!("--{}", key))?;
        }
    }
    Ok(cfg)
}

fn execute(cli: &Cli) -> schlicht_core::Result<i32> {
    let cfg = build_config(cli)?;
    if cfg.threads > 0 {
        // Ignore failure: the global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global();
    }
    let out = run(&cfg)?;
    let paths = write_artifacts(&cfg, &out)?;

    let c = &out.doc.criterion;
    println!(
        "criterion {} on f = {}: {}",
        c.id, out.doc.config.f, c.verdict
    );
    if let Some(f1) = &c.field1 {
        println!(
            "  condition 1: worst margin {:+.6e} at z = {:+.6} {:+.6}i",
            f1.worst_margin, f1.worst_point.re, f1.worst_point.im
        );
    }
    if let Some(f2) = &c.field2 {
        println!(
            "  condition 2: worst margin {:+.6e} at z = {:+.6} {:+.6}i",
            f2.worst_margin, f2.worst_point.re, f2.worst_point.im
        );
    }
    if let Some(w) = &c.witness {
        println!(
            "  inapplicable: {} at z = {:+.6} {:+.6}i",
            w.kind, w.at.re, w.at.im
        );
    }
    if let Some(d) = &out.doc.chain_diagnostics {
        println!(
            "  chain diagnostics: {}",
            if d.all_pass { "all pass" } else { "FAILURES" }
        );
    }
    if let Some(qc) = &out.doc.qc {
        println!(
            "  dilatation: sup |mu| = {:.6e} (k = {:.3}), degenerate points: {}",
            qc.beltrami.sup_abs_mu, qc.beltrami.theoretical_k, qc.beltrami.n_degenerate
        );
        if let (Some(wm), Some(wh)) = (
            qc.beltrami.max_abs_w_moebius,
            qc.beltrami.max_abs_w_herglotz,
        ) {
            println!(
                "  matched transfer maxima: |w| = {:.6e} (A,B form), {:.6e} ((p-1)/(p+1))",
                wm, wh
            );
        }
        if let Some(s) = &qc.seam {
            println!("  seam: max gap {:.6e} at eps = {:.1e}", s.max_gap, s.eps);
        }
    }
    for o in &out.doc.oracles {
        println!("  oracle {}: {}", o.method, o.verdict);
    }
    for p in &paths {
        println!("wrote {}", p.display());
    }
    eprintln!(
        "timings: check {:.3}s, diagnostics {:.3}s, qc {:.3}s, oracles {:.3}s, total {:.3}s",
        out.timings.check_s,
        out.timings.diagnostics_s,
        out.timings.qc_s,
        out.timings.oracles_s,
        out.timings.total_s
    );
    if out.exit_status == 3 {
        eprintln!(
            "INTERNAL INCONSISTENCY: the criterion reported no violation but an \
             injectivity oracle refutes univalence; do not trust this verdict"
        );
    }
    Ok(out.exit_status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
