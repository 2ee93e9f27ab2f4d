//! Run configuration: flat key = value config files, flag-equivalent keys,
//! complex/number parsing and function-spec resolution.

use std::path::PathBuf;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::func::{AnalyticFunction, ClassTag};

/// Artifacts the run may emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFlag {
    Report,
    Heatmap1,
    Heatmap2,
    Domain,
    Beltrami,
    Diagnostics,
}

impl EmitFlag {
    pub fn name(&self) -> &'static str {
        match self {
            EmitFlag::Report => "report",
            EmitFlag::Heatmap1 => "heatmap1",
            EmitFlag::Heatmap2 => "heatmap2",
            EmitFlag::Domain => "domain",
            EmitFlag::Beltrami => "beltrami",
            EmitFlag::Diagnostics => "diagnostics",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "report" => EmitFlag::Report,
            "heatmap1" => EmitFlag::Heatmap1,
            "heatmap2" => EmitFlag::Heatmap2,
            "domain" => EmitFlag::Domain,
            "beltrami" => EmitFlag::Beltrami,
            "diagnostics" => EmitFlag::Diagnostics,
            other => {
                return Err(Error::Config {
                    provenance: "emit".into(),
                    message: format!("unknown emit flag '{}'", other),
                })
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub criterion: String,
    pub f: String,
    pub f_coeffs: Option<Vec<Complex64>>,
    pub g: Option<String>,
    pub g_coeffs: Option<Vec<Complex64>>,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    pub k: f64,
    pub nr: usize,
    pub ntheta: usize,
    pub rmax: f64,
    pub tol: f64,
    pub refine: usize,
    pub out_dir: PathBuf,
    pub emit: Vec<EmitFlag>,
    pub threads: usize,
    /// Fault-injection hook (config key fault-rhs-scale): multiplies the
    /// criterion RHS. 1.0 in normal operation.
    pub rhs_scale: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            criterion: "becker".into(),
            f: "identity".into(),
            f_coeffs: None,
            g: None,
            g_coeffs: None,
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(0.0, 0.0),
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(1.0, 0.0),
            k: 0.25,
            nr: 128,
            ntheta: 256,
            rmax: 0.999,
            tol: 1e-9,
            refine: 0,
            out_dir: PathBuf::from("out"),
            emit: vec![EmitFlag::Report],
            threads: 0,
            rhs_scale: 1.0,
        }
    }
}

/// Complex literal: "re" or "re,im".
pub fn parse_complex(s: &str, provenance: &str) -> Result<Complex64> {
    let err = |msg: String| Error::Config {
        provenance: provenance.into(),
        message: msg,
    };
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re] => {
            let re: f64 = re
                .trim()
                .parse()
                .map_err(|_| err(format!("bad real part '{}'", s)))?;
            Ok(Complex64::new(re, 0.0))
        }
        [re, im] => {
            let re: f64 = re
                .trim()
                .parse()
                .map_err(|_| err(format!("bad real part in '{}'", s)))?;
            let im: f64 = im
                .trim()
                .parse()
                .map_err(|_| err(format!("bad imaginary part in '{}'", s)))?;
            Ok(Complex64::new(re, im))
        }
        _ => Err(err(format!("expected 're' or 're,im', got '{}'", s))),
    }
}

/// Semicolon-separated list of complex literals.
pub fn parse_coeffs(s: &str, provenance: &str) -> Result<Vec<Complex64>> {
    s.split(';').map(|p| parse_complex(p, provenance)).collect()
}

/// Function spec "name" or "name:param[;param...]".
fn parse_fn_spec(s: &str, provenance: &str) -> Result<(String, Vec<Complex64>)> {
    match s.split_once(':') {
        None => Ok((s.trim().to_string(), Vec::new())),
        Some((name, params)) => Ok((name.trim().to_string(), parse_coeffs(params, provenance)?)),
    }
}

impl RunConfig {
    /// Apply one key = value pair (flag names without the leading dashes).
    pub fn apply(&mut self, key: &str, value: &str, provenance: &str) -> Result<()> {
        let err = |msg: String| Error::Config {
            provenance: provenance.into(),
            message: msg,
        };
        match key {
            "criterion" => self.criterion = value.to_string(),
            "f" => self.f = value.to_string(),
            "f-coeffs" => self.f_coeffs = Some(parse_coeffs(value, provenance)?),
            "g" => self.g = Some(value.to_string()),
            "g-coeffs" => self.g_coeffs = Some(parse_coeffs(value, provenance)?),
            "alpha" => self.alpha = parse_complex(value, provenance)?,
            "beta" => self.beta = parse_complex(value, provenance)?,
            "A" => self.a = parse_complex(value, provenance)?,
            "B" => self.b = parse_complex(value, provenance)?,
            "k" => {
                self.k = value
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad k '{}'", value)))?
            }
            "nr" => {
                self.nr = value
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad nr '{}'", value)))?
            }
            "ntheta" => {
                self.ntheta = value
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad ntheta '{}'", value)))?
            }
            "rmax" => {
                self.rmax = value
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad rmax '{}'", value)))?
            }
            "tol" => {
                self.tol = value
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad tol '{}'", value)))?
            }
            "refine" => {
                self.refine = value
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad refine '{}'", value)))?
            }
            "out-dir" => self.out_dir = PathBuf::from(value.trim()),
            "emit" => {
                self.emit = value
                    .split(',')
                    .map(|s| EmitFlag::parse(s.trim()))
                    .collect::<Result<Vec<_>>>()?
            }
            "threads" => {
                self.threads = value
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad threads '{}'", value)))?
            }
            "fault-rhs-scale" => {
                self.rhs_scale = value
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad scale '{}'", value)))?
            }
            other => return Err(err(format!("unknown key '{}'", other))),
        }
        Ok(())
    }

    /// Parse a flat key = value config file ('#' starts a comment).
    pub fn apply_file_text(&mut self, text: &str, file_label: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let provenance = format!("{}:{}", file_label, lineno + 1);
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                provenance: provenance.clone(),
                message: format!("expected 'key = value', got '{}'", line),
            })?;
            self.apply(key.trim(), value.trim(), &provenance)?;
        }
        Ok(())
    }

    /// Build f from the config (coefficient list wins over the catalog
    /// name; coefficient input must be class A).
    pub fn build_f(&self) -> Result<AnalyticFunction> {
        if let Some(coeffs) = &self.f_coeffs {
            return AnalyticFunction::from_coefficients(coeffs.clone(), ClassTag::ClassA);
        }
        let (name, params) = parse_fn_spec(&self.f, "f")?;
        AnalyticFunction::preset(&name, &params)
    }

    /// Build the user-supplied g, when any. The names derivative_of and
    /// f_over_z derive g from f; anything else is a catalog spec.
    pub fn build_g(&self, f: &AnalyticFunction) -> Result<Option<AnalyticFunction>> {
        if let Some(coeffs) = &self.g_coeffs {
            return Ok(Some(AnalyticFunction::from_coefficients(
                coeffs.clone(),
                ClassTag::UnitConstantTerm,
            )?));
        }
        match &self.g {
            None => Ok(None),
            Some(spec) => {
                let (name, params) = parse_fn_spec(spec, "g")?;
                let g = match name.as_str() {
                    "derivative_of" => f.derivative()?,
                    "f_over_z" => f.quotient_by_z()?,
                    _ => AnalyticFunction::preset(&name, &params)?,
                };
                Ok(Some(g))
            }
        }
    }
}
