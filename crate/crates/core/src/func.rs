//! Analytic functions on a disk containing the closed unit disk, with exact
//! evaluation of the value and the first two derivatives.
//!
//! Two representations are supported: truncated power series (exact for
//! polynomials) and a small catalog of closed forms. Catalog entries are
//! always evaluated analytically, never through their series, so boundary
//! evaluation carries no truncation error. Derived functions (f', f/z) keep
//! closed forms when the parent is a catalog entry.

use num_complex::Complex64;

use crate::error::{Error, PointError, PointErrorKind, Result};

/// Guard below which a divisor is treated as zero.
pub const DIV_GUARD: f64 = 1e-14;

/// Radius stored for entire functions (finite so radius arithmetic stays
/// well-behaved).
pub const RADIUS_ENTIRE: f64 = 1e9;

/// Truncation rule for catalog-to-series conversion: stop at the first N
/// with |c_N| 1.05^N below this, or at [`MAX_SERIES_LEN`] terms.
const TAIL_TOL: f64 = 1e-15;
const MAX_SERIES_LEN: usize = 257;

/// Normalization class of a function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassTag {
    /// f(0) = 0, f'(0) = 1.
    ClassA,
    /// g(0) = 1.
    UnitConstantTerm,
    General,
}

impl ClassTag {
    pub fn name(&self) -> &'static str {
        match self {
            ClassTag::ClassA => "classA",
            ClassTag::UnitConstantTerm => "unitConstantTerm",
            ClassTag::General => "general",
        }
    }
}

/// Value and exact first/second derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Catalog {
    /// f(z) = z
    Identity,
    /// f(z) = z / (1 - z)^2
    Koebe,
    /// f(z) = z e^{cz}
    ZExpCz(Complex64),
    /// f(z) = z / (1 - cz)
    ZOverOneMinusCz(Complex64),
    /// g(z) = 1
    ConstantOne,
}

impl Catalog {
    fn radius(&self) -> f64 {
        match self {
            Catalog::Identity | Catalog::ZExpCz(_) | Catalog::ConstantOne => RADIUS_ENTIRE,
            Catalog::Koebe => 1.0,
            Catalog::ZOverOneMinusCz(c) => {
                if c.norm() < 1.0 / RADIUS_ENTIRE {
                    RADIUS_ENTIRE
                } else {
                    1.0 / c.norm()
                }
            }
        }
    }

    fn class_tag(&self) -> ClassTag {
        match self {
            Catalog::ConstantOne => ClassTag::UnitConstantTerm,
            _ => ClassTag::ClassA,
        }
    }

    /// Value and the first four derivatives (the closed forms below follow
    /// the pattern of repeated differentiation of each entry).
    fn jets4(&self, z: Complex64) -> Result<[Complex64; 5]> {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match self {
            Catalog::Identity => Ok([z, one, zero, zero, zero]),
            Catalog::ConstantOne => Ok([one, zero, zero, zero, zero]),
            Catalog::Koebe => {
                let d = one - z;
                if d.norm() < DIV_GUARD {
                    return Err(Error::Domain { z, radius: 1.0 });
                }
                // f^{(n)}(z) = n! (n + z) / (1 - z)^{n+2}
                let mut out = [zero; 5];
                let mut pw = d * d; // (1-z)^{n+2}
                let mut fact = 1.0;
                out[0] = z / pw;
                for (n, slot) in out.iter_mut().enumerate().skip(1) {
                    pw *= d;
                    fact *= n as f64;
                    *slot = fact * (Complex64::new(n as f64, 0.0) + z) / pw;
                }
                Ok(out)
            }
            Catalog::ZExpCz(c) => {
                // f^{(n)}(z) = c^{n-1} e^{cz} (n + cz)
                let e = (c * z).exp();
                let cz = c * z;
                let mut out = [zero; 5];
                out[0] = z * e;
                let mut cp = one; // c^{n-1}
                for (n, slot) in out.iter_mut().enumerate().skip(1) {
                    *slot = cp * e * (Complex64::new(n as f64, 0.0) + cz);
                    cp *= c;
                }
                Ok(out)
            }
            Catalog::ZOverOneMinusCz(c) => {
                let d = one - c * z;
                if d.norm() < DIV_GUARD {
                    return Err(Error::Domain {
                        z,
                        radius: self.radius(),
                    });
                }
                // f^{(n)}(z) = n! c^{n-1} / (1 - cz)^{n+1}
                let mut out = [zero; 5];
                out[0] = z / d;
                let mut pw = d; // (1-cz)^{n+1}
                let mut cp = one;
                let mut fact = 1.0;
                for (n, slot) in out.iter_mut().enumerate().skip(1) {
                    pw *= d;
                    fact *= n as f64;
                    *slot = fact * cp / pw;
                    cp *= c;
                }
                Ok(out)
            }
        }
    }

    /// Jets of q(z) = f(z)/z for the class-A entries; exact at z = 0.
    fn ratio_jets(&self, z: Complex64) -> Result<[Complex64; 4]> {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match self {
            Catalog::Identity => Ok([one, zero, zero, zero]),
            Catalog::Koebe => {
                let d = one - z;
                if d.norm() < DIV_GUARD {
                    return Err(Error::Domain { z, radius: 1.0 });
                }
                // q(z) = (1-z)^{-2}, q^{(n)} = (n+1)! / (1-z)^{n+2}
                let d2 = d * d;
                Ok([
                    one / d2,
                    2.0 * one / (d2 * d),
                    6.0 * one / (d2 * d2),
                    24.0 * one / (d2 * d2 * d),
                ])
            }
            Catalog::ZExpCz(c) => {
                let e = (c * z).exp();
                Ok([e, c * e, c * c * e, c * c * c * e])
            }
            Catalog::ZOverOneMinusCz(c) => {
                let d = one - c * z;
                if d.norm() < DIV_GUARD {
                    return Err(Error::Domain {
                        z,
                        radius: self.radius(),
                    });
                }
                // q(z) = (1-cz)^{-1}, q^{(n)} = n! c^n / (1-cz)^{n+1}
                let d2 = d * d;
                Ok([
                    one / d,
                    c / d2,
                    2.0 * c * c / (d2 * d),
                    6.0 * c * c * c / (d2 * d2),
                ])
            }
            Catalog::ConstantOne => Err(Error::Representation(
                "f/z requires a class-A function".into(),
            )),
        }
    }

    fn coefficient(&self, n: usize) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        match self {
            Catalog::Identity => {
                if n == 1 {
                    one
                } else {
                    zero
                }
            }
            Catalog::ConstantOne => {
                if n == 0 {
                    one
                } else {
                    zero
                }
            }
            Catalog::Koebe => Complex64::new(n as f64, 0.0),
            Catalog::ZExpCz(c) => {
                if n == 0 {
                    zero
                } else {
                    let mut v = one;
                    for m in 1..n {
                        v *= c / (m as f64);
                    }
                    v
                }
            }
            Catalog::ZOverOneMinusCz(c) => {
                if n == 0 {
                    zero
                } else {
                    c.powu((n - 1) as u32)
                }
            }
        }
    }

    fn label(&self) -> String {
        match self {
            Catalog::Identity => "identity".into(),
            Catalog::Koebe => "koebe".into(),
            Catalog::ZExpCz(c) => format!("z_exp_cz({})", c),
            Catalog::ZOverOneMinusCz(c) => format!("z_over_one_minus_cz({})", c),
            Catalog::ConstantOne => "constant_one".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Series(Vec<Complex64>),
    Catalog(Catalog),
    /// f' of a catalog entry (series derivatives are re-expanded instead).
    DerivativeOf(Catalog),
    /// f/z of a class-A catalog entry.
    QuotientByZ(Catalog),
}

/// An analytic function with exact jet evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticFunction {
    repr: Repr,
    radius: f64,
    class_tag: ClassTag,
    label: String,
}

/// Evaluate a series and its first three derivatives at z (Horner pass;
/// d2/d3 accumulate the divided forms and are rescaled at the end).
fn series_jet3(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64, Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let (mut v, mut d1, mut d2, mut d3) = (zero, zero, zero, zero);
    for &c in coeffs.iter().rev() {
        d3 = d3 * z + d2;
        d2 = d2 * z + d1;
        d1 = d1 * z + v;
        v = v * z + c;
    }
    (v, d1, 2.0 * d2, 6.0 * d3)
}

fn series_value(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut v = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        v = v * z + c;
    }
    v
}

impl AnalyticFunction {
    /// Build a function from an explicit coefficient list. The list is taken
    /// as the exact function (a polynomial); long lists must decay fast
    /// enough that evaluation on the closed unit disk is trustworthy.
    pub fn from_coefficients(coeffs: Vec<Complex64>, tag: ClassTag) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Representation("empty coefficient list".into()));
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::Representation("non-finite coefficient".into()));
        }
        match tag {
            ClassTag::ClassA => {
                if coeffs[0].norm() > 1e-15 {
                    return Err(Error::Representation("classA requires c0 = 0".into()));
                }
                if coeffs.len() < 2 || (coeffs[1] - 1.0).norm() > 1e-15 {
                    return Err(Error::Representation("classA requires c1 = 1".into()));
                }
            }
            ClassTag::UnitConstantTerm => {
                if (coeffs[0] - 1.0).norm() > 1e-15 {
                    return Err(Error::Representation(
                        "unitConstantTerm requires c0 = 1".into(),
                    ));
                }
            }
            ClassTag::General => {}
        }
        // Radius from tail coefficient decay; short lists are exact
        // polynomials of an entire function.
        let mut radius = RADIUS_ENTIRE;
        for (n, c) in coeffs.iter().enumerate().skip(8) {
            let norm = c.norm();
            if norm > 0.0 {
                radius = radius.min(norm.powf(-1.0 / n as f64));
            }
        }
        if radius < 1.05 {
            return Err(Error::Representation(format!(
                "coefficient decay only supports radius {:.3} (< 1.05)",
                radius
            )));
        }
        let label = format!("series[{}]", coeffs.len());
        Ok(AnalyticFunction {
            repr: Repr::Series(coeffs),
            radius,
            class_tag: tag,
            label,
        })
    }

    /// Catalog constructor. Known names: identity, koebe, polynomial,
    /// z_exp_cz, z_over_one_minus_cz, constant_one.
    pub fn preset(name: &str, params: &[Complex64]) -> Result<Self> {
        let expect = |n: usize| -> Result<()> {
            if params.len() != n {
                Err(Error::Representation(format!(
                    "preset {} expects {} parameter(s), got {}",
                    name,
                    n,
                    params.len()
                )))
            } else {
                Ok(())
            }
        };
        let cat = match name {
            "identity" => {
                expect(0)?;
                Catalog::Identity
            }
            "koebe" => {
                expect(0)?;
                Catalog::Koebe
            }
            "constant_one" => {
                expect(0)?;
                Catalog::ConstantOne
            }
            "z_exp_cz" => {
                expect(1)?;
                Catalog::ZExpCz(params[0])
            }
            "z_over_one_minus_cz" => {
                expect(1)?;
                let c = params[0];
                if c.norm() > 1.0 {
                    return Err(Error::Representation(format!(
                        "z/(1-cz) with |c| = {} has a pole inside the unit disk",
                        c.norm()
                    )));
                }
                Catalog::ZOverOneMinusCz(c)
            }
            "polynomial" => {
                if params.is_empty() {
                    return Err(Error::Representation(
                        "polynomial needs coefficients".into(),
                    ));
                }
                let coeffs = params.to_vec();
                let tag = infer_class_tag(&coeffs);
                return Self::from_coefficients(coeffs, tag);
            }
            other => return Err(Error::Unknown("catalog function", other.into())),
        };
        Ok(AnalyticFunction {
            repr: Repr::Catalog(cat),
            radius: cat.radius(),
            class_tag: cat.class_tag(),
            label: cat.label(),
        })
    }

    /// g = f'. Class A parents yield unit-constant-term derivatives.
    pub fn derivative(&self) -> Result<Self> {
        let tag = match self.class_tag {
            ClassTag::ClassA => ClassTag::UnitConstantTerm,
            _ => ClassTag::General,
        };
        let repr = match &self.repr {
            Repr::Series(c) => Repr::Series(differentiate(c)),
            Repr::Catalog(cat) => Repr::DerivativeOf(*cat),
            Repr::DerivativeOf(_) | Repr::QuotientByZ(_) => {
                let coeffs = self.coefficients(MAX_SERIES_LEN);
                let tail_ok = coeffs
                    .last()
                    .map(|c| c.norm() * 1.05f64.powi(coeffs.len() as i32 - 1) < TAIL_TOL)
                    .unwrap_or(false);
                if !tail_ok && coeffs.len() >= MAX_SERIES_LEN {
                    return Err(Error::Representation(
                        "cannot re-expand derived function as a series".into(),
                    ));
                }
                Repr::Series(differentiate(&coeffs))
            }
        };
        Ok(AnalyticFunction {
            repr,
            radius: self.radius,
            class_tag: tag,
            label: format!("derivative_of({})", self.label),
        })
    }

    /// g = f/z for class-A f (the removable singularity at 0 filled in).
    pub fn quotient_by_z(&self) -> Result<Self> {
        if self.class_tag != ClassTag::ClassA {
            return Err(Error::Representation(
                "f/z requires a class-A function".into(),
            ));
        }
        let repr = match &self.repr {
            Repr::Series(c) => Repr::Series(c[1..].to_vec()),
            Repr::Catalog(cat) => Repr::QuotientByZ(*cat),
            _ => unreachable!("derived reprs are never class A"),
        };
        Ok(AnalyticFunction {
            repr,
            radius: self.radius,
            class_tag: ClassTag::UnitConstantTerm,
            label: format!("quotient_by_z({})", self.label),
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn class_tag(&self) -> ClassTag {
        self.class_tag
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn check_series_domain(&self, z: Complex64) -> Result<()> {
        if let Repr::Series(_) = self.repr {
            if z.norm() >= self.radius {
                return Err(Error::Domain {
                    z,
                    radius: self.radius,
                });
            }
        }
        Ok(())
    }

    /// Value only (cheaper than the full jet).
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.check_series_domain(z)?;
        match &self.repr {
            Repr::Series(c) => Ok(series_value(c, z)),
            Repr::Catalog(cat) => Ok(cat.jets4(z)?[0]),
            Repr::DerivativeOf(cat) => Ok(cat.jets4(z)?[1]),
            Repr::QuotientByZ(cat) => Ok(cat.ratio_jets(z)?[0]),
        }
    }

    /// Value and exact first/second derivatives.
    pub fn eval_jet(&self, z: Complex64) -> Result<Jet2> {
        self.check_series_domain(z)?;
        match &self.repr {
            Repr::Series(c) => {
                let (v, d1, d2, _) = series_jet3(c, z);
                Ok(Jet2 { value: v, d1, d2 })
            }
            Repr::Catalog(cat) => {
                let j = cat.jets4(z)?;
                Ok(Jet2 {
                    value: j[0],
                    d1: j[1],
                    d2: j[2],
                })
            }
            Repr::DerivativeOf(cat) => {
                let j = cat.jets4(z)?;
                Ok(Jet2 {
                    value: j[1],
                    d1: j[2],
                    d2: j[3],
                })
            }
            Repr::QuotientByZ(cat) => {
                let j = cat.ratio_jets(z)?;
                Ok(Jet2 {
                    value: j[0],
                    d1: j[1],
                    d2: j[2],
                })
            }
        }
    }

    /// f(z)/z evaluated from the shifted representation; exact at z = 0
    /// where it equals c1 = 1.
    pub fn ratio_over_z(&self, z: Complex64) -> Result<Complex64> {
        if self.class_tag != ClassTag::ClassA {
            return Err(Error::Representation(
                "f/z requires a class-A function".into(),
            ));
        }
        self.check_series_domain(z)?;
        let v = match &self.repr {
            Repr::Series(c) => series_value(&c[1..], z),
            Repr::Catalog(cat) => cat.ratio_jets(z)?[0],
            _ => unreachable!("derived reprs are never class A"),
        };
        if v.norm() < DIV_GUARD {
            return Err(Error::Point(PointError {
                kind: PointErrorKind::RatioVanishes,
                at: z,
            }));
        }
        Ok(v)
    }

    /// Power-series coefficients of the representation, truncated by the
    /// tail rule (or at `cap` terms).
    pub fn coefficients(&self, cap: usize) -> Vec<Complex64> {
        let cap = cap.min(MAX_SERIES_LEN);
        match &self.repr {
            Repr::Series(c) => c.iter().copied().take(cap).collect(),
            Repr::Catalog(cat) => truncate_by_tail(|n| cat.coefficient(n), cap),
            Repr::DerivativeOf(cat) => {
                truncate_by_tail(|n| (n as f64 + 1.0) * cat.coefficient(n + 1), cap)
            }
            Repr::QuotientByZ(cat) => truncate_by_tail(|n| cat.coefficient(n + 1), cap),
        }
    }
}

fn truncate_by_tail(gen: impl Fn(usize) -> Complex64, cap: usize) -> Vec<Complex64> {
    let mut out = Vec::new();
    let mut scale = 1.0;
    for n in 0..cap {
        let c = gen(n);
        out.push(c);
        if n >= 2 && c.norm() * scale < TAIL_TOL {
            break;
        }
        scale *= 1.05;
    }
    out
}

fn differentiate(coeffs: &[Complex64]) -> Vec<Complex64> {
    if coeffs.len() <= 1 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    coeffs[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| (i as f64 + 1.0) * c)
        .collect()
}

fn infer_class_tag(coeffs: &[Complex64]) -> ClassTag {
    if coeffs[0].norm() <= 1e-15 && coeffs.len() >= 2 && (coeffs[1] - 1.0).norm() <= 1e-15 {
        ClassTag::ClassA
    } else if (coeffs[0] - 1.0).norm() <= 1e-15 {
        ClassTag::UnitConstantTerm
    } else {
        ClassTag::General
    }
}

/// Convenience constructor used throughout the tests.
pub fn poly(coeffs: &[f64]) -> AnalyticFunction {
    let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let tag = infer_class_tag(&c);
    AnalyticFunction::from_coefficients(c, tag).expect("valid polynomial")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_jet() {
        let f = AnalyticFunction::preset("identity", &[]).unwrap();
        let j = f.eval_jet(c(0.3, 0.4)).unwrap();
        assert_eq!(j.value, c(0.3, 0.4));
        assert_eq!(j.d1, c(1.0, 0.0));
        assert_eq!(j.d2, c(0.0, 0.0));
    }

    #[test]
    fn koebe_jet_at_half() {
        let f = AnalyticFunction::preset("koebe", &[]).unwrap();
        let j = f.eval_jet(c(0.5, 0.0)).unwrap();
        assert!((j.value - 2.0).norm() < 1e-14);
        assert!((j.d1 - 12.0).norm() < 1e-13); // (1+z)/(1-z)^3
        assert!((j.d2 - 80.0).norm() < 1e-12); // 2(2+z)/(1-z)^4
    }

    #[test]
    fn polynomial_jet() {
        let f = poly(&[0.0, 1.0, 0.1]);
        let j = f.eval_jet(c(1.0, 0.0)).unwrap();
        assert!((j.value - 1.1).norm() < 1e-15);
        assert!((j.d1 - 1.2).norm() < 1e-15);
        assert!((j.d2 - 0.2).norm() < 1e-15);
    }

    #[test]
    fn ratio_over_z_examples() {
        let id = AnalyticFunction::preset("identity", &[]).unwrap();
        assert_eq!(id.ratio_over_z(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));

        let k = AnalyticFunction::preset("koebe", &[]).unwrap();
        assert!((k.ratio_over_z(c(0.5, 0.0)).unwrap() - 4.0).norm() < 1e-14);

        let f = poly(&[0.0, 1.0, 0.1]);
        assert!((f.ratio_over_z(c(-1.0, 0.0)).unwrap() - 0.9).norm() < 1e-15);
    }

    #[test]
    fn exp_preset_value() {
        let f = AnalyticFunction::preset("z_exp_cz", &[c(0.5, 0.0)]).unwrap();
        let v = f.eval(c(1.0, 0.0)).unwrap();
        assert!((v - 0.5f64.exp()).norm() < 1e-14);
    }

    #[test]
    fn derivative_of_koebe_is_unit_constant() {
        let k = AnalyticFunction::preset("koebe", &[]).unwrap();
        let g = k.derivative().unwrap();
        assert_eq!(g.class_tag(), ClassTag::UnitConstantTerm);
        assert!((g.eval(c(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        // g' = f'' and g'' = f'''
        let j = g.eval_jet(c(0.3, 0.0)).unwrap();
        let d: f64 = 1.0 - 0.3;
        assert!((j.d1 - 2.0 * 2.3 / d.powi(4)).norm() < 1e-12);
        assert!((j.d2 - 6.0 * 3.3 / d.powi(5)).norm() < 1e-11);
    }

    #[test]
    fn class_tag_validation() {
        assert!(AnalyticFunction::from_coefficients(
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            ClassTag::ClassA
        )
        .is_ok());
        assert!(AnalyticFunction::from_coefficients(
            vec![c(1.0, 0.0), c(0.3, 0.0)],
            ClassTag::UnitConstantTerm
        )
        .is_ok());
        let err =
            AnalyticFunction::from_coefficients(vec![c(0.5, 0.0), c(1.0, 0.0)], ClassTag::ClassA);
        match err {
            Err(Error::Representation(msg)) => assert!(msg.contains("c0")),
            other => panic!("expected representation error, got {:?}", other),
        }
    }

    #[test]
    fn growing_coefficients_rejected() {
        // Truncated Koebe series: c_n = n does not decay, so the closed disk
        // is outside the trustworthy radius.
        let coeffs: Vec<Complex64> = (0..64).map(|n| c(n as f64, 0.0)).collect();
        let mut coeffs = coeffs;
        coeffs[1] = c(1.0, 0.0);
        assert!(AnalyticFunction::from_coefficients(coeffs, ClassTag::General).is_err());
    }

    #[test]
    fn singular_preset_rejected() {
        assert!(AnalyticFunction::preset("z_over_one_minus_cz", &[c(1.5, 0.0)]).is_err());
        // |c| = 1 keeps the pole on the boundary circle and stays usable on
        // the open disk.
        assert!(AnalyticFunction::preset("z_over_one_minus_cz", &[c(1.0, 0.0)]).is_ok());
        assert!(AnalyticFunction::preset("no_such_function", &[]).is_err());
    }

    #[test]
    fn koebe_series_matches_closed_form_inside() {
        let k = AnalyticFunction::preset("koebe", &[]).unwrap();
        let coeffs = k.coefficients(40);
        let z = c(0.2, 0.1);
        let direct = k.eval(z).unwrap();
        let via_series = series_value(&coeffs, z);
        assert!((direct - via_series).norm() < 1e-12);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};

        let funcs = vec![
            AnalyticFunction::preset("identity", &[]).unwrap(),
            AnalyticFunction::preset("koebe", &[]).unwrap(),
            AnalyticFunction::preset("z_exp_cz", &[c(0.5, 0.2)]).unwrap(),
            AnalyticFunction::preset("z_over_one_minus_cz", &[c(0.6, 0.0)]).unwrap(),
            AnalyticFunction::preset("constant_one", &[]).unwrap(),
            poly(&[0.0, 1.0, 0.2, 0.05]),
        ];
        let mut rng = StdRng::seed_from_u64(7);
        let h = 1e-6;
        for f in &funcs {
            for _ in 0..100 {
                let r = 0.9 * rng.gen::<f64>().sqrt();
                let th = rng.gen::<f64>() * std::f64::consts::TAU;
                let z = Complex64::from_polar(r, th);
                let j = f.eval_jet(z).unwrap();
                let fd1 = (f.eval(z + h).unwrap() - f.eval(z - h).unwrap()) / (2.0 * h);
                let fd2 =
                    (f.eval(z + h).unwrap() - 2.0 * j.value + f.eval(z - h).unwrap()) / (h * h);
                let s1 = j.d1.norm().max(1.0);
                let s2 = j.d2.norm().max(1.0);
                assert!(
                    (j.d1 - fd1).norm() / s1 < 1e-7,
                    "{}: d1 mismatch at {}",
                    f.label(),
                    z
                );
                assert!(
                    (j.d2 - fd2).norm() / s2 < 1e-3,
                    "{}: d2 mismatch at {}",
                    f.label(),
                    z
                );
            }
        }
    }

    #[test]
    fn ratio_times_z_is_value() {
        let funcs = vec![
            AnalyticFunction::preset("koebe", &[]).unwrap(),
            AnalyticFunction::preset("z_exp_cz", &[c(0.4, -0.1)]).unwrap(),
            poly(&[0.0, 1.0, 0.1]),
        ];
        for f in &funcs {
            for i in 0..40 {
                let r = 1e-3 + (0.999 - 1e-3) * (i as f64) / 39.0;
                let z = Complex64::from_polar(r, 2.4 * i as f64);
                let lhs = f.ratio_over_z(z).unwrap() * z;
                let rhs = f.eval(z).unwrap();
                assert!((lhs - rhs).norm() < 1e-14 * rhs.norm().max(1.0));
            }
        }
    }

    #[test]
    fn series_reexpansion_roundtrip() {
        let funcs = vec![
            AnalyticFunction::preset("identity", &[]).unwrap(),
            AnalyticFunction::preset("z_exp_cz", &[c(0.5, 0.0)]).unwrap(),
            AnalyticFunction::preset("z_over_one_minus_cz", &[c(0.5, 0.0)]).unwrap(),
            poly(&[0.0, 1.0, 0.1]),
        ];
        for f in &funcs {
            let coeffs = f.coefficients(MAX_SERIES_LEN);
            let g = AnalyticFunction::from_coefficients(coeffs, ClassTag::General).unwrap();
            for i in 0..20 {
                let z = Complex64::from_polar(0.95 * i as f64 / 19.0, 1.7 * i as f64);
                let a = f.eval_jet(z).unwrap();
                let b = g.eval_jet(z).unwrap();
                assert!((a.value - b.value).norm() < 1e-14 * a.value.norm().max(1.0));
                assert!((a.d1 - b.d1).norm() < 1e-13 * a.d1.norm().max(1.0));
            }
        }
    }
}
