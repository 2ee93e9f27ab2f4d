//! Run report document: a fixed-schema, JSON-compatible structured text
//! with deterministic serialization (fixed key order, every float written
//! as 17-significant-digit scientific notation). docs/report-schema.md
//! describes the layout.

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};

/// Fixed float formatting: 17 significant digits, scientific notation.
/// Round-trips every finite f64 exactly.
pub fn fmt_float(x: f64) -> String {
    assert!(x.is_finite(), "reports must not contain non-finite values");
    format!("{:.16e}", x)
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct ComplexDoc {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexDoc {
    fn from(z: Complex64) -> Self {
        ComplexDoc { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ConfigDoc {
    pub criterion: String,
    pub f: String,
    pub f_coeffs: Option<Vec<ComplexDoc>>,
    pub g: Option<String>,
    pub g_coeffs: Option<Vec<ComplexDoc>>,
    pub alpha: ComplexDoc,
    pub beta: ComplexDoc,
    pub a: ComplexDoc,
    pub b: ComplexDoc,
    pub k: f64,
    pub nr: u64,
    pub ntheta: u64,
    pub rmax: f64,
    pub clustering: String,
    pub tol: f64,
    pub refine: u64,
    pub out_dir: String,
    pub emit: Vec<String>,
    pub rhs_scale: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ParamsDoc {
    pub alpha: ComplexDoc,
    pub beta: ComplexDoc,
    pub a: ComplexDoc,
    pub b: ComplexDoc,
    pub k: f64,
    pub mode: String,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct BoundsDoc {
    pub r1: f64,
    pub r2: f64,
    pub c: ComplexDoc,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct FieldDoc {
    pub nr: u64,
    pub ntheta: u64,
    pub rmax: f64,
    pub clustering: String,
    pub worst_margin: f64,
    pub worst_i: u64,
    pub worst_j: u64,
    pub worst_point: ComplexDoc,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct RefinedDoc {
    pub margin: f64,
    pub point: ComplexDoc,
    pub rounds: u64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CheckDoc {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct WitnessPointDoc {
    pub kind: String,
    pub at: ComplexDoc,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CriterionDoc {
    pub id: String,
    pub g: String,
    pub params: ParamsDoc,
    pub bounds: Option<BoundsDoc>,
    pub tol: f64,
    pub verdict: String,
    pub field1: Option<FieldDoc>,
    pub field2: Option<FieldDoc>,
    pub refined1: Option<RefinedDoc>,
    pub refined2: Option<RefinedDoc>,
    pub witness: Option<WitnessPointDoc>,
    pub diagnostics: Vec<CheckDoc>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct DiagnosticsDoc {
    pub t_samples: Vec<f64>,
    pub max_w_norm: Option<f64>,
    pub min_p_re: Option<f64>,
    pub w_origin_max_dev: Option<f64>,
    pub all_pass: bool,
    pub items: Vec<CheckDoc>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct OracleWitnessDoc {
    pub kind: String,
    pub z1: Option<ComplexDoc>,
    pub z2: Option<ComplexDoc>,
    pub target: Option<ComplexDoc>,
    pub count: Option<i64>,
    pub at: Option<ComplexDoc>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct OracleDoc {
    pub method: String,
    pub verdict: String,
    pub witness: Option<OracleWitnessDoc>,
    pub samples_used: u64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct BeltramiDoc {
    pub r_in: f64,
    pub r_out: f64,
    pub nr: u64,
    pub ntheta: u64,
    pub h: f64,
    pub sup_abs_mu: f64,
    pub worst_point: ComplexDoc,
    pub n_degenerate: u64,
    pub unreliable: bool,
    pub theoretical_k: f64,
    pub criterion_satisfied: Option<bool>,
    pub max_abs_w_moebius: Option<f64>,
    pub max_abs_w_herglotz: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct SeamDoc {
    pub eps: f64,
    pub n_theta: u64,
    pub max_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct QcDoc {
    pub beltrami: BeltramiDoc,
    pub seam: Option<SeamDoc>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ReportDoc {
    pub tool_version: String,
    pub config: ConfigDoc,
    pub criterion: CriterionDoc,
    pub chain_diagnostics: Option<DiagnosticsDoc>,
    pub oracles: Vec<OracleDoc>,
    pub qc: Option<QcDoc>,
    pub notes: Vec<String>,
    pub exit_status: i64,
}

// -- deterministic writer ---------------------------------------------------

enum J {
    Null,
    Bool(bool),
    Int(i64),
    UInt(u64),
    Num(f64),
    Str(String),
    Arr(Vec<J>),
    Obj(Vec<(&'static str, J)>),
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

impl J {
    fn write(&self, out: &mut String, indent: usize) {
        match self {
            J::Null => out.push_str("null"),
            J::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            J::Int(i) => out.push_str(&i.to_string()),
            J::UInt(u) => out.push_str(&u.to_string()),
            J::Num(x) => out.push_str(&fmt_float(*x)),
            J::Str(s) => {
                out.push('"');
                out.push_str(&escape(s));
                out.push('"');
            }
            J::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push_str("[\n");
                for (i, item) in items.iter().enumerate() {
                    out.push_str(&"  ".repeat(indent + 1));
                    item.write(out, indent + 1);
                    if i + 1 < items.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                out.push_str(&"  ".repeat(indent));
                out.push(']');
            }
            J::Obj(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push_str("{\n");
                for (i, (key, value)) in fields.iter().enumerate() {
                    out.push_str(&"  ".repeat(indent + 1));
                    out.push('"');
                    out.push_str(key);
                    out.push_str("\": ");
                    value.write(out, indent + 1);
                    if i + 1 < fields.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                out.push_str(&"  ".repeat(indent));
                out.push('}');
            }
        }
    }
}

fn opt<T, F: FnOnce(&T) -> J>(v: &Option<T>, f: F) -> J {
    match v {
        Some(x) => f(x),
        None => J::Null,
    }
}

fn complex(c: &ComplexDoc) -> J {
    J::Obj(vec![("re", J::Num(c.re)), ("im", J::Num(c.im))])
}

fn coeff_list(v: &[ComplexDoc]) -> J {
    J::Arr(v.iter().map(complex).collect())
}

fn checks(v: &[CheckDoc]) -> J {
    J::Arr(
        v.iter()
            .map(|c| {
                J::Obj(vec![
                    ("name", J::Str(c.name.clone())),
                    ("pass", J::Bool(c.pass)),
                    ("detail", J::Str(c.detail.clone())),
                ])
            })
            .collect(),
    )
}

fn field(f: &FieldDoc) -> J {
    J::Obj(vec![
        ("nr", J::UInt(f.nr)),
        ("ntheta", J::UInt(f.ntheta)),
        ("rmax", J::Num(f.rmax)),
        ("clustering", J::Str(f.clustering.clone())),
        ("worst_margin", J::Num(f.worst_margin)),
        ("worst_i", J::UInt(f.worst_i)),
        ("worst_j", J::UInt(f.worst_j)),
        ("worst_point", complex(&f.worst_point)),
    ])
}

fn refined(r: &RefinedDoc) -> J {
    J::Obj(vec![
        ("margin", J::Num(r.margin)),
        ("point", complex(&r.point)),
        ("rounds", J::UInt(r.rounds)),
    ])
}

fn to_tree(doc: &ReportDoc) -> J {
    let cfg = &doc.config;
    let config = J::Obj(vec![
        ("criterion", J::Str(cfg.criterion.clone())),
        ("f", J::Str(cfg.f.clone())),
        ("f_coeffs", opt(&cfg.f_coeffs, |v| coeff_list(v))),
        ("g", opt(&cfg.g, |s| J::Str(s.clone()))),
        ("g_coeffs", opt(&cfg.g_coeffs, |v| coeff_list(v))),
        ("alpha", complex(&cfg.alpha)),
        ("beta", complex(&cfg.beta)),
        ("a", complex(&cfg.a)),
        ("b", complex(&cfg.b)),
        ("k", J::Num(cfg.k)),
        ("nr", J::UInt(cfg.nr)),
        ("ntheta", J::UInt(cfg.ntheta)),
        ("rmax", J::Num(cfg.rmax)),
        ("clustering", J::Str(cfg.clustering.clone())),
        ("tol", J::Num(cfg.tol)),
        ("refine", J::UInt(cfg.refine)),
        ("out_dir", J::Str(cfg.out_dir.clone())),
        (
            "emit",
            J::Arr(cfg.emit.iter().map(|e| J::Str(e.clone())).collect()),
        ),
        ("rhs_scale", J::Num(cfg.rhs_scale)),
    ]);

    let cr = &doc.criterion;
    let criterion = J::Obj(vec![
        ("id", J::Str(cr.id.clone())),
        ("g", J::Str(cr.g.clone())),
        (
            "params",
            J::Obj(vec![
                ("alpha", complex(&cr.params.alpha)),
                ("beta", complex(&cr.params.beta)),
                ("a", complex(&cr.params.a)),
                ("b", complex(&cr.params.b)),
                ("k", J::Num(cr.params.k)),
                ("mode", J::Str(cr.params.mode.clone())),
            ]),
        ),
        (
            "bounds",
            opt(&cr.bounds, |b| {
                J::Obj(vec![
                    ("r1", J::Num(b.r1)),
                    ("r2", J::Num(b.r2)),
                    ("c", complex(&b.c)),
                ])
            }),
        ),
        ("tol", J::Num(cr.tol)),
        ("verdict", J::Str(cr.verdict.clone())),
        ("field1", opt(&cr.field1, field)),
        ("field2", opt(&cr.field2, field)),
        ("refined1", opt(&cr.refined1, refined)),
        ("refined2", opt(&cr.refined2, refined)),
        (
            "witness",
            opt(&cr.witness, |w| {
                J::Obj(vec![
                    ("kind", J::Str(w.kind.clone())),
                    ("at", complex(&w.at)),
                ])
            }),
        ),
        ("diagnostics", checks(&cr.diagnostics)),
    ]);

    let diag = opt(&doc.chain_diagnostics, |d| {
        J::Obj(vec![
            (
                "t_samples",
                J::Arr(d.t_samples.iter().map(|&t| J::Num(t)).collect()),
            ),
            ("max_w_norm", opt(&d.max_w_norm, |&x| J::Num(x))),
            ("min_p_re", opt(&d.min_p_re, |&x| J::Num(x))),
            ("w_origin_max_dev", opt(&d.w_origin_max_dev, |&x| J::Num(x))),
            ("all_pass", J::Bool(d.all_pass)),
            ("items", checks(&d.items)),
        ])
    });

    let oracles = J::Arr(
        doc.oracles
            .iter()
            .map(|o| {
                J::Obj(vec![
                    ("method", J::Str(o.method.clone())),
                    ("verdict", J::Str(o.verdict.clone())),
                    (
                        "witness",
                        opt(&o.witness, |w| {
                            J::Obj(vec![
                                ("kind", J::Str(w.kind.clone())),
                                ("z1", opt(&w.z1, complex)),
                                ("z2", opt(&w.z2, complex)),
                                ("target", opt(&w.target, complex)),
                                ("count", opt(&w.count, |&c| J::Int(c))),
                                ("at", opt(&w.at, complex)),
                            ])
                        }),
                    ),
                    ("samples_used", J::UInt(o.samples_used)),
                ])
            })
            .collect(),
    );

    let qc = opt(&doc.qc, |q| {
        let b = &q.beltrami;
        J::Obj(vec![
            (
                "beltrami",
                J::Obj(vec![
                    ("r_in", J::Num(b.r_in)),
                    ("r_out", J::Num(b.r_out)),
                    ("nr", J::UInt(b.nr)),
                    ("ntheta", J::UInt(b.ntheta)),
                    ("h", J::Num(b.h)),
                    ("sup_abs_mu", J::Num(b.sup_abs_mu)),
                    ("worst_point", complex(&b.worst_point)),
                    ("n_degenerate", J::UInt(b.n_degenerate)),
                    ("unreliable", J::Bool(b.unreliable)),
                    ("theoretical_k", J::Num(b.theoretical_k)),
                    (
                        "criterion_satisfied",
                        opt(&b.criterion_satisfied, |&x| J::Bool(x)),
                    ),
                    (
                        "max_abs_w_moebius",
                        opt(&b.max_abs_w_moebius, |&x| J::Num(x)),
                    ),
                    (
                        "max_abs_w_herglotz",
                        opt(&b.max_abs_w_herglotz, |&x| J::Num(x)),
                    ),
                ]),
            ),
            (
                "seam",
                opt(&q.seam, |s| {
                    J::Obj(vec![
                        ("eps", J::Num(s.eps)),
                        ("n_theta", J::UInt(s.n_theta)),
                        ("max_gap", J::Num(s.max_gap)),
                    ])
                }),
            ),
        ])
    });

    J::Obj(vec![
        ("tool_version", J::Str(doc.tool_version.clone())),
        ("config", config),
        ("criterion", criterion),
        ("chain_diagnostics", diag),
        ("oracles", oracles),
        ("qc", qc),
        (
            "notes",
            J::Arr(doc.notes.iter().map(|n| J::Str(n.clone())).collect()),
        ),
        ("exit_status", J::Int(doc.exit_status)),
    ])
}

/// Serialize the report deterministically.
pub fn write_report_string(doc: &ReportDoc) -> String {
    let mut out = String::new();
    to_tree(doc).write(&mut out, 0);
    out.push('\n');
    out
}

/// Parse a report written by [`write_report_string`].
pub fn parse_report(text: &str) -> Result<ReportDoc> {
    serde_json::from_str(text).map_err(|e| Error::Config {
        provenance: "report".into(),
        message: format!("cannot parse report: {}", e),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_doc() -> ReportDoc {
        ReportDoc {
            tool_version: "0.1.0".into(),
            config: ConfigDoc {
                criterion: "becker".into(),
                f: "koebe".into(),
                f_coeffs: None,
                g: None,
                g_coeffs: Some(vec![ComplexDoc { re: 1.0, im: 0.0 }]),
                alpha: ComplexDoc { re: 1.0, im: 0.0 },
                beta: ComplexDoc { re: 0.0, im: 0.0 },
                a: ComplexDoc { re: 1.0, im: 0.0 },
                b: ComplexDoc { re: 1.0, im: 0.0 },
                k: 0.25,
                nr: 128,
                ntheta: 256,
                rmax: 0.999,
                clustering: "chebyshev-toward-boundary".into(),
                tol: 1e-9,
                refine: 0,
                out_dir: "out".into(),
                emit: vec!["report".into()],
                rhs_scale: 1.0,
            },
            criterion: CriterionDoc {
                id: "becker".into(),
                g: "derivative_of(koebe)".into(),
                params: ParamsDoc {
                    alpha: ComplexDoc { re: 1.0, im: 0.0 },
                    beta: ComplexDoc { re: 0.0, im: 0.0 },
                    a: ComplexDoc { re: 1.0, im: 0.0 },
                    b: ComplexDoc { re: 1.0, im: 0.0 },
                    k: 0.0,
                    mode: "univalence".into(),
                },
                bounds: Some(BoundsDoc {
                    r1: 1.0,
                    r2: 1.0,
                    c: ComplexDoc { re: 0.0, im: 0.0 },
                }),
                tol: 1e-9,
                verdict: "violation".into(),
                field1: Some(FieldDoc {
                    nr: 128,
                    ntheta: 256,
                    rmax: 0.999,
                    clustering: "chebyshev-toward-boundary".into(),
                    worst_margin: 1.0,
                    worst_i: 0,
                    worst_j: 0,
                    worst_point: ComplexDoc { re: 0.0, im: 0.0 },
                }),
                field2: None,
                refined1: None,
                refined2: None,
                witness: None,
                diagnostics: vec![CheckDoc {
                    name: "f-nonvanishing-scan".into(),
                    pass: true,
                    detail: "ok".into(),
                }],
            },
            chain_diagnostics: None,
            oracles: vec![OracleDoc {
                method: "pairwise".into(),
                verdict: "consistent-with-univalent".into(),
                witness: None,
                samples_used: 8192,
            }],
            qc: None,
            notes: vec![],
            exit_status: 1,
        }
    }

    #[test]
    fn roundtrip() {
        let doc = sample_doc();
        let text = write_report_string(&doc);
        let parsed = parse_report(&text).unwrap();
        assert_eq!(parsed, doc);
    }

    #[test]
    fn deterministic_bytes() {
        let doc = sample_doc();
        assert_eq!(write_report_string(&doc), write_report_string(&doc));
    }

    #[test]
    fn float_format_is_17_digit_scientific() {
        assert_eq!(fmt_float(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_float(-0.25), "-2.5000000000000000e-1");
        let x = 0.1 + 0.2;
        let s = fmt_float(x);
        assert_eq!(s.parse::<f64>().unwrap(), x);
    }

    #[test]
    fn verdict_strings_are_fixed() {
        let text = write_report_string(&sample_doc());
        assert!(text.contains("\"verdict\": \"violation\""));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["criterion"]["verdict"], "violation");
    }
}
