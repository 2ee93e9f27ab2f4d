//! Criterion-independent injectivity oracles.
//!
//! These can refute univalence (with a concrete witness) but never certify
//! it, so the passing verdict is "consistent-with-univalent". All methods
//! are deterministic; the pairwise scan resolves ties by the lowest index
//! pair.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::func::AnalyticFunction;
use crate::grid::DiskGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    Pairwise,
    ArgumentPrinciple,
    Local,
}

impl OracleMethod {
    pub fn name(&self) -> &'static str {
        match self {
            OracleMethod::Pairwise => "pairwise",
            OracleMethod::ArgumentPrinciple => "argument-principle",
            OracleMethod::Local => "local",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleVerdict {
    ConsistentWithUnivalent,
    NonUnivalent,
    Inconclusive,
}

impl OracleVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            OracleVerdict::ConsistentWithUnivalent => "consistent-with-univalent",
            OracleVerdict::NonUnivalent => "non-univalent",
            OracleVerdict::Inconclusive => "inconclusive",
        }
    }
}

/// Evidence reproducing a refutation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Witness {
    /// Two distinct points with (numerically) equal images.
    Collision(Complex64, Complex64),
    /// A target value with more than one preimage inside the contour.
    PreimageCount { target: Complex64, count: i64 },
    /// A certified zero of f' strictly inside the disk, near this point.
    CriticalPoint(Complex64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub method: OracleMethod,
    pub verdict: OracleVerdict,
    pub witness: Option<Witness>,
    pub samples_used: usize,
}

/// Quadratic scan for image collisions among grid samples. Points closer
/// than 10*tol are treated as the same sample, not a collision.
pub fn pairwise_injectivity(
    f: &AnalyticFunction,
    grid: &DiskGrid,
    tol: f64,
) -> Result<OracleReport> {
    if grid.len() > 10_000 {
        return Err(Error::Config {
            provenance: "oracle".into(),
            message: format!("pairwise scan capped at 10000 points, got {}", grid.len()),
        });
    }
    let pts = grid.points();
    let vals: Vec<Complex64> = pts
        .par_iter()
        .map(|&z| f.eval(z))
        .collect::<Result<Vec<_>>>()?;
    let tol2 = tol * tol;
    let sep2 = 100.0 * tol * tol;
    let n = pts.len();
    let hit = (0..n)
        .into_par_iter()
        .filter_map(|i| {
            for j in (i + 1)..n {
                if (vals[i] - vals[j]).norm_sqr() < tol2 && (pts[i] - pts[j]).norm_sqr() > sep2 {
                    return Some((i, j));
                }
            }
            None
        })
        .min();
    Ok(match hit {
        Some((i, j)) => OracleReport {
            method: OracleMethod::Pairwise,
            verdict: OracleVerdict::NonUnivalent,
            witness: Some(Witness::Collision(pts[i], pts[j])),
            samples_used: n,
        },
        None => OracleReport {
            method: OracleMethod::Pairwise,
            verdict: OracleVerdict::ConsistentWithUnivalent,
            witness: None,
            samples_used: n,
        },
    })
}

/// Trapezoid value of (1/2 pi i) contour integral of f'/(f - target) over
/// the circle center + r e^{i theta} with n nodes.
fn contour_count_raw(
    f: &AnalyticFunction,
    target: Complex64,
    center: Complex64,
    r: f64,
    n: usize,
) -> Result<Complex64> {
    let terms: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|j| {
            let th = std::f64::consts::TAU * j as f64 / n as f64;
            let dz = Complex64::from_polar(r, th);
            let z = center + dz;
            let jet = f.eval_jet(z)?;
            Ok(jet.d1 * dz / (jet.value - target))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(terms.iter().sum::<Complex64>() / n as f64)
}

fn contour_min_distance(
    f: &AnalyticFunction,
    target: Complex64,
    center: Complex64,
    r: f64,
    n: usize,
) -> Result<f64> {
    let mut min = f64::INFINITY;
    for j in 0..n {
        let z = center + Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / n as f64);
        min = min.min((f.eval(z)? - target).norm());
    }
    Ok(min)
}

/// Count the preimages of `target` inside a circle around `center`,
/// doubling the node count until two consecutive counts agree. Returns
/// None (inconclusive) when the contour cannot be kept away from zeros of
/// f - target or the counts never stabilize on an integer.
pub fn preimage_count_around(
    f: &AnalyticFunction,
    target: Complex64,
    center: Complex64,
    r: f64,
    n: usize,
) -> Result<Option<i64>> {
    // Keep the contour off near-zeros of f - target; shrink up to 50 times.
    let mut radius = r;
    let mut ok = false;
    for _ in 0..50 {
        if contour_min_distance(f, target, center, radius, n.max(64))? > 1e-8 {
            ok = true;
            break;
        }
        radius *= 0.99;
    }
    if !ok {
        return Ok(None);
    }
    let to_int = |v: Complex64| -> Option<i64> {
        let r = v.re.round();
        if (v.re - r).abs() < 0.25 && v.im.abs() < 0.25 {
            Some(r as i64)
        } else {
            None
        }
    };
    let mut m = n.max(64);
    let mut prev = to_int(contour_count_raw(f, target, center, radius, m)?);
    while m <= (1 << 18) {
        m *= 2;
        let cur = to_int(contour_count_raw(f, target, center, radius, m)?);
        if let (Some(a), Some(b)) = (prev, cur) {
            if a == b {
                return Ok(Some(a));
            }
        }
        prev = cur;
    }
    Ok(None)
}

/// Number of preimages of `target` in |z| < r (origin-centered contour).
pub fn argument_principle_count(
    f: &AnalyticFunction,
    target: Complex64,
    r: f64,
    n: usize,
) -> Result<Option<i64>> {
    preimage_count_around(f, target, Complex64::new(0.0, 0.0), r, n)
}

/// Univalence check through preimage counting: targets f(z0) for z0 on a
/// small circle must each have exactly one preimage inside |z| < r.
pub fn argument_principle_oracle(
    f: &AnalyticFunction,
    sample_radius: f64,
    n_samples: usize,
    contour_r: f64,
    n: usize,
) -> Result<OracleReport> {
    let mut inconclusive = false;
    for j in 0..n_samples {
        let z0 = Complex64::from_polar(
            sample_radius,
            std::f64::consts::TAU * j as f64 / n_samples as f64,
        );
        let target = f.eval(z0)?;
        match argument_principle_count(f, target, contour_r, n)? {
            Some(c) if c >= 2 => {
                return Ok(OracleReport {
                    method: OracleMethod::ArgumentPrinciple,
                    verdict: OracleVerdict::NonUnivalent,
                    witness: Some(Witness::PreimageCount { target, count: c }),
                    samples_used: n_samples,
                });
            }
            Some(1) => {}
            _ => inconclusive = true,
        }
    }
    Ok(OracleReport {
        method: OracleMethod::ArgumentPrinciple,
        verdict: if inconclusive {
            OracleVerdict::Inconclusive
        } else {
            OracleVerdict::ConsistentWithUnivalent
        },
        witness: None,
        samples_used: n_samples,
    })
}

/// Necessary-condition scan: grid points where |f'| < screen_tol are
/// suspects; each is certified by counting zeros of f' on a small contour
/// kept strictly inside the unit disk (zeros of f' on or outside the
/// boundary do not refute univalence on the disk).
pub fn local_univalence(
    f: &AnalyticFunction,
    grid: &DiskGrid,
    screen_tol: f64,
) -> Result<OracleReport> {
    let fd = f.derivative()?;
    let mut suspects: Vec<(f64, usize)> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (i, j) = grid.unflat(idx);
            fd.eval(grid.point(i, j)).map(|v| (v.norm(), idx))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|(n, _)| *n < screen_tol)
        .collect();
    suspects.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));

    let mut accepted: Vec<Complex64> = Vec::new();
    let mut inconclusive = false;
    for (_, idx) in suspects {
        if accepted.len() >= 16 {
            break;
        }
        let (i, j) = grid.unflat(idx);
        let z = grid.point(i, j);
        if accepted.iter().any(|&a| (a - z).norm() < 0.05) {
            continue;
        }
        accepted.push(z);
        let rho = (2.0 * grid.local_spacing(i)).min(0.9 * (1.0 - z.norm()));
        if rho < 1e-12 {
            continue;
        }
        match preimage_count_around(&fd, Complex64::new(0.0, 0.0), z, rho, 256)? {
            Some(c) if c >= 1 => {
                return Ok(OracleReport {
                    method: OracleMethod::Local,
                    verdict: OracleVerdict::NonUnivalent,
                    witness: Some(Witness::CriticalPoint(z)),
                    samples_used: grid.len(),
                });
            }
            Some(_) => {}
            None => inconclusive = true,
        }
    }
    Ok(OracleReport {
        method: OracleMethod::Local,
        verdict: if inconclusive {
            OracleVerdict::Inconclusive
        } else {
            OracleVerdict::ConsistentWithUnivalent
        },
        witness: None,
        samples_used: grid.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::{poly, AnalyticFunction, ClassTag};
    use crate::grid::Clustering;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn local_grid() -> DiskGrid {
        DiskGrid::new(96, 96, 0.999, Clustering::ChebyshevTowardBoundary).unwrap()
    }

    #[test]
    fn pairwise_identity_consistent() {
        let f = AnalyticFunction::preset("identity", &[]).unwrap();
        let grid = DiskGrid::new(20, 40, 0.95, Clustering::Uniform).unwrap();
        let rep = pairwise_injectivity(&f, &grid, 1e-9).unwrap();
        assert_eq!(rep.verdict, OracleVerdict::ConsistentWithUnivalent);
    }

    #[test]
    fn pairwise_square_collides() {
        let f = AnalyticFunction::from_coefficients(
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            ClassTag::General,
        )
        .unwrap();
        let grid = DiskGrid::new(5, 8, 0.8, Clustering::Uniform).unwrap();
        let rep = pairwise_injectivity(&f, &grid, 1e-9).unwrap();
        assert_eq!(rep.verdict, OracleVerdict::NonUnivalent);
        match rep.witness.unwrap() {
            Witness::Collision(z1, z2) => assert!((z1 + z2).norm() < 1e-12),
            other => panic!("unexpected witness {:?}", other),
        }
    }

    #[test]
    fn pairwise_z_plus_z2_exact_collision() {
        // f(z) = (z + 1/2)^2 - 1/4 collides at points symmetric about -1/2;
        // the grid holds -0.4 and -0.6.
        let f = poly(&[0.0, 1.0, 1.0]);
        let grid = DiskGrid::new(4, 8, 0.6, Clustering::Uniform).unwrap();
        let rep = pairwise_injectivity(&f, &grid, 1e-9).unwrap();
        assert_eq!(rep.verdict, OracleVerdict::NonUnivalent);
        match rep.witness.unwrap() {
            Witness::Collision(z1, z2) => {
                assert!((z1 - c(-0.4, 0.0)).norm() < 1e-9);
                assert!((z2 - c(-0.6, 0.0)).norm() < 1e-9);
            }
            other => panic!("unexpected witness {:?}", other),
        }
    }

    #[test]
    fn argument_count_examples() {
        let id = AnalyticFunction::preset("identity", &[]).unwrap();
        assert_eq!(
            argument_principle_count(&id, c(0.3, 0.0), 0.9, 1024).unwrap(),
            Some(1)
        );

        let sq = AnalyticFunction::from_coefficients(
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            ClassTag::General,
        )
        .unwrap();
        assert_eq!(
            argument_principle_count(&sq, c(0.25, 0.0), 0.9, 1024).unwrap(),
            Some(2)
        );

        let f = poly(&[0.0, 1.0, 1.0]);
        // f(-0.4) = f(-0.6) = -0.24: two preimages inside |z| < 0.95.
        assert_eq!(
            argument_principle_count(&f, c(-0.24, 0.0), 0.95, 1024).unwrap(),
            Some(2)
        );
        // f(0.2) = 0.24 has its second preimage at -1.2, outside.
        assert_eq!(
            argument_principle_count(&f, c(0.24, 0.0), 0.95, 1024).unwrap(),
            Some(1)
        );
    }

    #[test]
    fn argument_count_independent_of_node_count() {
        let id = AnalyticFunction::preset("identity", &[]).unwrap();
        for t in [c(0.3, 0.0), c(-0.5, 0.4), c(0.0, 0.0)] {
            for n in [64, 256, 2048] {
                assert_eq!(argument_principle_count(&id, t, 0.9, n).unwrap(), Some(1));
            }
        }
    }

    #[test]
    fn argument_oracle_verdicts() {
        let id = AnalyticFunction::preset("identity", &[]).unwrap();
        let rep = argument_principle_oracle(&id, 0.5, 16, 0.95, 1024).unwrap();
        assert_eq!(rep.verdict, OracleVerdict::ConsistentWithUnivalent);

        let f = poly(&[0.0, 1.0, 1.0]);
        let rep = argument_principle_oracle(&f, 0.5, 16, 0.95, 1024).unwrap();
        assert_eq!(rep.verdict, OracleVerdict::NonUnivalent);
    }

    #[test]
    fn local_identity_consistent() {
        let f = AnalyticFunction::preset("identity", &[]).unwrap();
        let rep = local_univalence(&f, &local_grid(), 0.1).unwrap();
        assert_eq!(rep.verdict, OracleVerdict::ConsistentWithUnivalent);
    }

    #[test]
    fn local_detects_interior_critical_point() {
        let f = poly(&[0.0, 1.0, 1.0]);
        let rep = local_univalence(&f, &local_grid(), 0.1).unwrap();
        assert_eq!(rep.verdict, OracleVerdict::NonUnivalent);
        match rep.witness.unwrap() {
            Witness::CriticalPoint(z) => assert!((z - c(-0.5, 0.0)).norm() < 0.05),
            other => panic!("unexpected witness {:?}", other),
        }
    }

    #[test]
    fn local_detects_off_axis_critical_points() {
        // f' = 1 + 6z^2 vanishes at +/- i/sqrt(6), strictly inside.
        let f = poly(&[0.0, 1.0, 0.0, 2.0]);
        let rep = local_univalence(&f, &local_grid(), 0.1).unwrap();
        assert_eq!(rep.verdict, OracleVerdict::NonUnivalent);
        match rep.witness.unwrap() {
            Witness::CriticalPoint(z) => {
                assert!((z.norm() - 1.0 / 6.0f64.sqrt()).abs() < 0.05);
            }
            other => panic!("unexpected witness {:?}", other),
        }
    }

    #[test]
    fn local_koebe_consistent() {
        // Koebe's f' vanishes only at z = -1, on the boundary; certificates
        // must stay inside the disk and find nothing.
        let f = AnalyticFunction::preset("koebe", &[]).unwrap();
        let rep = local_univalence(&f, &local_grid(), 0.1).unwrap();
        assert_eq!(rep.verdict, OracleVerdict::ConsistentWithUnivalent);
    }

    #[test]
    fn univalent_corpus_consistent_across_all_methods() {
        let corpus = vec![
            AnalyticFunction::preset("identity", &[]).unwrap(),
            AnalyticFunction::preset("koebe", &[]).unwrap(),
            AnalyticFunction::preset("z_over_one_minus_cz", &[c(1.0, 0.0)]).unwrap(),
            AnalyticFunction::preset("z_exp_cz", &[c(0.5, 0.0)]).unwrap(),
            poly(&[0.0, 1.0, 0.25]),
        ];
        let pair_grid = DiskGrid::new(40, 80, 0.95, Clustering::Uniform).unwrap();
        for f in &corpus {
            let pw = pairwise_injectivity(f, &pair_grid, 1e-9).unwrap();
            assert_eq!(
                pw.verdict,
                OracleVerdict::ConsistentWithUnivalent,
                "{}",
                f.label()
            );
            let ap = argument_principle_oracle(f, 0.5, 16, 0.95, 1024).unwrap();
            assert_eq!(
                ap.verdict,
                OracleVerdict::ConsistentWithUnivalent,
                "{}",
                f.label()
            );
            let lo = local_univalence(f, &local_grid(), 0.1).unwrap();
            assert_eq!(
                lo.verdict,
                OracleVerdict::ConsistentWithUnivalent,
                "{}",
                f.label()
            );
        }
    }

    #[test]
    fn pairwise_grid_cap() {
        let f = AnalyticFunction::preset("identity", &[]).unwrap();
        let grid = DiskGrid::new(128, 256, 0.999, Clustering::Uniform).unwrap();
        assert!(pairwise_injectivity(&f, &grid, 1e-9).is_err());
    }
}
