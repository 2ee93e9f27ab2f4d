//! Piecewise extension F of the chain to the plane and numerical
//! estimation of its complex dilatation.
//!
//! F(z) = L(z, 0) inside the unit disk and L(z/|z|, log|z|) outside. F is
//! continuous across the seam |z| = 1 but not differentiable there, so
//! dilatation estimates exclude a band around it.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::chain::ChainContext;
use crate::error::{Error, Result};

/// Annulus sampling spec for the dilatation report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusSpec {
    pub r_in: f64,
    pub r_out: f64,
    pub n_r: usize,
    pub n_theta: usize,
}

impl AnnulusSpec {
    // Negated comparisons so NaN radii are rejected.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(r_in: f64, r_out: f64, n_r: usize, n_theta: usize) -> Result<Self> {
        if !(r_in > 1.0) || !(r_out > r_in) {
            return Err(Error::Config {
                provenance: "annulus".into(),
                message: format!("need 1 < r_in < r_out, got [{}, {}]", r_in, r_out),
            });
        }
        if n_r < 2 || n_theta < 8 {
            return Err(Error::Config {
                provenance: "annulus".into(),
                message: format!("annulus grid too small: {} x {}", n_r, n_theta),
            });
        }
        Ok(AnnulusSpec {
            r_in,
            r_out,
            n_r,
            n_theta,
        })
    }

    pub fn len(&self) -> usize {
        self.n_r * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        let r = self.r_in + (self.r_out - self.r_in) * i as f64 / (self.n_r - 1) as f64;
        Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / self.n_theta as f64)
    }
}

/// Estimated complex dilatation over an annulus grid. Degenerate points
/// (where |F_z| collapses or the chain cannot be evaluated) are excluded
/// from the supremum and counted; above 1% of them the estimate is marked
/// unreliable.
#[derive(Debug, Clone)]
pub struct BeltramiEstimate {
    pub annulus: AnnulusSpec,
    pub h: f64,
    pub mu_values: Vec<Option<Complex64>>,
    pub sup_abs_mu: f64,
    pub worst_point: Complex64,
    pub n_degenerate: usize,
    pub unreliable: bool,
    /// k claimed by the criterion parameters, for comparison.
    pub theoretical_k: f64,
    /// Whether the criterion check actually passed for this run (None when
    /// the estimate is computed standalone).
    pub criterion_satisfied: Option<bool>,
    /// Largest |w| over the matched (z/|z|, log|z|) set, w from the
    /// (A,B)-Moebius transform of phi. The two w definitions provably agree
    /// for A = B = 1 only, so both maxima are reported.
    pub max_abs_w_moebius: Option<f64>,
    /// Largest |(p-1)/(p+1)| over the same matched set.
    pub max_abs_w_herglotz: Option<f64>,
}

/// F(z): the chain value itself inside the disk, the boundary chain flowed
/// to time log|z| outside.
pub fn extend_point(ctx: &ChainContext, z: Complex64) -> Result<Complex64> {
    let r = z.norm();
    if !r.is_finite() {
        return Err(Error::Representation("non-finite extension point".into()));
    }
    if r < 1.0 {
        ctx.f().eval(z)
    } else {
        ctx.chain_value(z / r, r.ln())
    }
}

/// Central-difference Wirtinger quotient mu = F_zbar / F_z with step h.
/// The point must sit outside the seam band |z| in (1-2h, 1+2h).
pub fn beltrami_at(ctx: &ChainContext, z: Complex64, h: f64) -> Result<Complex64> {
    if !(1e-7..=1e-3).contains(&h) {
        return Err(Error::Config {
            provenance: "beltrami".into(),
            message: format!("step h must lie in [1e-7, 1e-3], got {}", h),
        });
    }
    let r = z.norm();
    if r >= 1.0 - 2.0 * h && r <= 1.0 + 2.0 * h {
        return Err(Error::Config {
            provenance: "beltrami".into(),
            message: format!("|z| = {} lies in the seam exclusion band", r),
        });
    }
    let i = Complex64::new(0.0, 1.0);
    let fx = (extend_point(ctx, z + h)? - extend_point(ctx, z - h)?) / (2.0 * h);
    let fy = (extend_point(ctx, z + i * h)? - extend_point(ctx, z - i * h)?) / (2.0 * h);
    let fz = (fx - i * fy) / 2.0;
    let fzb = (fx + i * fy) / 2.0;
    if fz.norm() < 1e-10 {
        return Err(Error::DegenerateDerivative { at: z });
    }
    Ok(fzb / fz)
}

/// Estimate mu over the annulus. The step scales as h * max(1, |z|) to
/// balance truncation against cancellation away from the seam.
pub fn dilatation_report(
    ctx: &ChainContext,
    annulus: &AnnulusSpec,
    h: f64,
    criterion_satisfied: Option<bool>,
) -> Result<BeltramiEstimate> {
    let base = *annulus;
    let mu: Vec<Option<Complex64>> = (0..base.len())
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / base.n_theta, idx % base.n_theta);
            let z = base.point(i, j);
            beltrami_at(ctx, z, h * z.norm().max(1.0)).ok()
        })
        .collect();
    let mut sup = 0.0f64;
    let mut worst = base.point(0, 0);
    let mut degenerate = 0usize;
    for (idx, m) in mu.iter().enumerate() {
        match m {
            Some(v) => {
                let n = v.norm();
                if n > sup {
                    sup = n;
                    worst = base.point(idx / base.n_theta, idx % base.n_theta);
                }
            }
            None => degenerate += 1,
        }
    }
    let unreliable = degenerate * 100 >= base.len();

    // Both transfer-function magnitudes over the matched boundary set.
    let mut max_w_m: Option<f64> = None;
    let mut max_w_h: Option<f64> = None;
    for idx in 0..base.len() {
        let (i, j) = (idx / base.n_theta, idx % base.n_theta);
        let z = base.point(i, j);
        let r = z.norm();
        if let Ok((w, p)) = ctx.transfer_w(z / r, r.ln()) {
            max_w_m = Some(max_w_m.unwrap_or(0.0).max(w.norm()));
            let den = p + 1.0;
            if den.norm() > 1e-14 {
                let wh = ((p - 1.0) / den).norm();
                max_w_h = Some(max_w_h.unwrap_or(0.0).max(wh));
            }
        }
    }

    Ok(BeltramiEstimate {
        annulus: base,
        h,
        mu_values: mu,
        sup_abs_mu: sup,
        worst_point: worst,
        n_degenerate: degenerate,
        unreliable,
        theoretical_k: ctx.params().k,
        criterion_satisfied,
        max_abs_w_moebius: max_w_m,
        max_abs_w_herglotz: max_w_h,
    })
}

/// Maximum (and per-angle) jump of F across the seam circle, measured
/// between radii 1 - eps and 1 + eps.
pub fn seam_continuity(ctx: &ChainContext, n_theta: usize, eps: f64) -> Result<(f64, Vec<f64>)> {
    if !(1e-8..=1e-3).contains(&eps) {
        return Err(Error::Config {
            provenance: "seam".into(),
            message: format!("eps must lie in [1e-8, 1e-3], got {}", eps),
        });
    }
    let gaps: Vec<f64> = (0..n_theta)
        .into_par_iter()
        .map(|j| {
            let th = std::f64::consts::TAU * j as f64 / n_theta as f64;
            let inner = extend_point(ctx, Complex64::from_polar(1.0 - eps, th))?;
            let outer = extend_point(ctx, Complex64::from_polar(1.0 + eps, th))?;
            Ok((outer - inner).norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    let max = gaps.iter().cloned().fold(0.0f64, f64::max);
    Ok((max, gaps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::{poly, AnalyticFunction};
    use crate::params::CriterionParams;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn identity_ctx() -> ChainContext {
        let f = AnalyticFunction::preset("identity", &[]).unwrap();
        let g = AnalyticFunction::preset("constant_one", &[]).unwrap();
        let p = CriterionParams::quasiconformal(
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(1.0, 0.0),
            0.25,
        );
        ChainContext::new(f, g, p, None).unwrap()
    }

    fn becker_ctx(f: AnalyticFunction, k: f64) -> ChainContext {
        let g = f.derivative().unwrap();
        let p =
            CriterionParams::quasiconformal(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), k);
        ChainContext::new(f, g, p, None).unwrap()
    }

    #[test]
    fn extension_of_identity_is_identity() {
        let ctx = identity_ctx();
        for z in [
            c(0.5, 0.2),
            c(2.0, 0.0),
            Complex64::from_polar(2.0, 1.3),
            c(0.0, 3.0),
        ] {
            let fz = extend_point(&ctx, z).unwrap();
            assert!((fz - z).norm() < 1e-12 * z.norm().max(1.0), "at {}", z);
        }
    }

    #[test]
    fn inner_branch_is_f() {
        let f = poly(&[0.0, 1.0, 0.1]);
        let ctx = becker_ctx(f.clone(), 0.25);
        let z = c(0.3, -0.6);
        assert_eq!(extend_point(&ctx, z).unwrap(), f.eval(z).unwrap());
    }

    #[test]
    fn seam_branches_agree_on_circle() {
        let f = poly(&[0.0, 1.0, 0.1]);
        let ctx = becker_ctx(f.clone(), 0.25);
        for j in 0..16 {
            let z = Complex64::from_polar(1.0, j as f64 * 0.4);
            // |z| = 1 takes the outer branch with t = 0, which is L(z, 0) = f(z).
            let outer = extend_point(&ctx, z).unwrap();
            assert!((outer - f.eval(z).unwrap()).norm() < 1e-13);
        }
    }

    #[test]
    fn identity_dilatation_vanishes() {
        let ctx = identity_ctx();
        let mu = beltrami_at(&ctx, c(2.0, 0.0), 1e-4).unwrap();
        assert!(mu.norm() < 1e-10);

        let annulus = AnnulusSpec::new(1.05, 3.0, 8, 16).unwrap();
        let rep = dilatation_report(&ctx, &annulus, 1e-4, Some(true)).unwrap();
        assert!(rep.sup_abs_mu <= 1e-6);
        assert_eq!(rep.n_degenerate, 0);
        assert!(!rep.unreliable);
    }

    #[test]
    fn conformal_inside_the_disk() {
        let f = poly(&[0.0, 1.0, 0.1]);
        let ctx = becker_ctx(f, 0.25);
        for z in [c(0.3, 0.1), c(-0.5, 0.4), c(0.0, 0.8)] {
            let mu = beltrami_at(&ctx, z, 1e-4).unwrap();
            assert!(mu.norm() < 1e-6, "mu = {} at {}", mu, z);
        }
    }

    #[test]
    fn dilatation_tracks_transfer_bound() {
        // |mu(z)| should not exceed the largest |w| on the matched circle
        // set by more than finite-difference noise (A = B = 1).
        let f = poly(&[0.0, 1.0, 0.1]);
        let ctx = becker_ctx(f, 0.25);
        let mut max_w = 0.0f64;
        for j in 0..64 {
            let th = std::f64::consts::TAU * j as f64 / 64.0;
            for r in [1.05, 1.5, 2.0, 3.0f64] {
                let (w, _) = ctx
                    .transfer_w(Complex64::from_polar(1.0, th), r.ln())
                    .unwrap();
                max_w = max_w.max(w.norm());
            }
        }
        let annulus = AnnulusSpec::new(1.05, 3.0, 12, 24).unwrap();
        let rep = dilatation_report(&ctx, &annulus, 1e-4, Some(true)).unwrap();
        assert!(
            rep.sup_abs_mu <= max_w + 0.02,
            "sup mu {} vs max w {}",
            rep.sup_abs_mu,
            max_w
        );
        assert!(rep.sup_abs_mu <= 0.27);
        // For A = B = 1 the two transfer definitions coincide up to sign,
        // so the reported maxima must agree.
        let wm = rep.max_abs_w_moebius.unwrap();
        let wh = rep.max_abs_w_herglotz.unwrap();
        assert!((wm - wh).abs() < 1e-12, "w maxima {} vs {}", wm, wh);
        assert!(rep.sup_abs_mu <= wm + 0.02);
    }

    #[test]
    fn koebe_report_is_still_computed() {
        let f = AnalyticFunction::preset("koebe", &[]).unwrap();
        let ctx = becker_ctx(f, 0.25);
        let annulus = AnnulusSpec::new(1.05, 3.0, 8, 16).unwrap();
        let rep = dilatation_report(&ctx, &annulus, 1e-4, Some(false)).unwrap();
        assert_eq!(rep.criterion_satisfied, Some(false));
        // The criterion fails for Koebe, so no dilatation bound is promised;
        // the grid max must simply be finite and reported.
        assert!(rep.sup_abs_mu.is_finite());
    }

    #[test]
    fn seam_gap_identity() {
        let ctx = identity_ctx();
        let (max, gaps) = seam_continuity(&ctx, 64, 1e-6).unwrap();
        assert_eq!(gaps.len(), 64);
        assert!(max <= 2.0 * 1e-6 + 1e-12);
    }

    #[test]
    fn seam_band_is_rejected() {
        let ctx = identity_ctx();
        assert!(beltrami_at(&ctx, c(1.00005, 0.0), 1e-4).is_err());
        assert!(beltrami_at(&ctx, c(0.5, 0.0), 1e-4).is_ok());
    }

    #[test]
    fn extension_injective_on_sample() {
        let f = poly(&[0.0, 1.0, 0.1]);
        let ctx = becker_ctx(f, 0.25);
        let mut pts = Vec::new();
        let mut vals = Vec::new();
        for i in 0..50 {
            let r = 0.5 + 2.5 * i as f64 / 49.0;
            if (r - 1.0).abs() < 3e-4 {
                continue;
            }
            for j in 0..80 {
                let z = Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / 80.0);
                pts.push(z);
                vals.push(extend_point(&ctx, z).unwrap());
            }
        }
        for i in 0..vals.len() {
            for j in (i + 1)..vals.len() {
                if (vals[i] - vals[j]).norm() < 1e-9 {
                    assert!(
                        (pts[i] - pts[j]).norm() < 1e-9,
                        "collision between {} and {}",
                        pts[i],
                        pts[j]
                    );
                }
            }
        }
    }
}
