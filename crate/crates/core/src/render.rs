//! Deterministic binary PPM (P6) renderers: margin heatmaps, dilatation
//! heatmaps and domain coloring. Identical inputs produce identical bytes.

use num_complex::Complex64;

use crate::criteria::MarginField;
use crate::qc::BeltramiEstimate;

fn ppm_header(width: usize, height: usize) -> Vec<u8> {
    format!("P6\n{} {}\n255\n", width, height).into_bytes()
}

fn lerp_channel(from: u8, to: u8, t: f64) -> u8 {
    (from as f64 + t.clamp(0.0, 1.0) * (to as f64 - from as f64)).round() as u8
}

/// White at zero margin, blue toward the largest positive margin, red
/// toward the most negative one.
fn margin_color(m: f64, max_pos: f64, min_neg: f64) -> [u8; 3] {
    const WHITE: [u8; 3] = [255, 255, 255];
    const BLUE: [u8; 3] = [0, 64, 192];
    const RED: [u8; 3] = [200, 16, 16];
    if m >= 0.0 {
        let t = if max_pos > 0.0 { m / max_pos } else { 0.0 };
        [
            lerp_channel(WHITE[0], BLUE[0], t),
            lerp_channel(WHITE[1], BLUE[1], t),
            lerp_channel(WHITE[2], BLUE[2], t),
        ]
    } else {
        let t = if min_neg < 0.0 { m / min_neg } else { 0.0 };
        [
            lerp_channel(WHITE[0], RED[0], t),
            lerp_channel(WHITE[1], RED[1], t),
            lerp_channel(WHITE[2], RED[2], t),
        ]
    }
}

/// Margin heatmap: width = n_theta, height = n_r (row 0 is the disk
/// center, bottom row the rim circle).
pub fn render_margin_heatmap(field: &MarginField) -> Vec<u8> {
    let (h, w) = (field.grid.n_r, field.grid.n_theta);
    let max_pos = field.margins.iter().cloned().fold(0.0f64, f64::max);
    let min_neg = field.margins.iter().cloned().fold(0.0f64, f64::min);
    let mut out = ppm_header(w, h);
    out.reserve(3 * w * h);
    for &m in &field.margins {
        out.extend_from_slice(&margin_color(m, max_pos, min_neg));
    }
    out
}

/// Dilatation heatmap over the annulus: colors k - |mu| with the margin
/// palette; degenerate points are black.
pub fn render_beltrami_heatmap(est: &BeltramiEstimate) -> Vec<u8> {
    let (h, w) = (est.annulus.n_r, est.annulus.n_theta);
    let margins: Vec<Option<f64>> = est
        .mu_values
        .iter()
        .map(|m| m.map(|v| est.theoretical_k - v.norm()))
        .collect();
    let max_pos = margins.iter().flatten().cloned().fold(0.0f64, f64::max);
    let min_neg = margins.iter().flatten().cloned().fold(0.0f64, f64::min);
    let mut out = ppm_header(w, h);
    out.reserve(3 * w * h);
    for m in &margins {
        match m {
            Some(v) => out.extend_from_slice(&margin_color(*v, max_pos, min_neg)),
            None => out.extend_from_slice(&[0, 0, 0]),
        }
    }
    out
}

/// Square window for domain coloring.
#[derive(Debug, Clone, Copy)]
pub struct Window {
    pub center: Complex64,
    pub half_width: f64,
    pub pixels: usize,
}

fn hsl_to_rgb(h: f64, s: f64, l: f64) -> [u8; 3] {
    let c = (1.0 - (2.0 * l - 1.0).abs()) * s;
    let hp = (h.rem_euclid(1.0)) * 6.0;
    let x = c * (1.0 - (hp.rem_euclid(2.0) - 1.0).abs());
    let (r, g, b) = match hp as usize {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - c / 2.0;
    [
        ((r + m) * 255.0).round().clamp(0.0, 255.0) as u8,
        ((g + m) * 255.0).round().clamp(0.0, 255.0) as u8,
        ((b + m) * 255.0).round().clamp(0.0, 255.0) as u8,
    ]
}

/// Standard domain coloring: hue follows arg f, lightness cycles with
/// log-modulus bands. Evaluation failures and non-finite values render
/// black; the count of such pixels is returned alongside the bytes.
pub fn render_domain_coloring(
    eval: impl Fn(Complex64) -> Option<Complex64>,
    window: &Window,
) -> (Vec<u8>, usize) {
    let px = window.pixels;
    let mut out = ppm_header(px, px);
    out.reserve(3 * px * px);
    let mut errors = 0usize;
    for row in 0..px {
        let im =
            window.center.im + (1.0 - (row as f64 + 0.5) / px as f64 * 2.0) * window.half_width;
        for col in 0..px {
            let re =
                window.center.re + ((col as f64 + 0.5) / px as f64 * 2.0 - 1.0) * window.half_width;
            let v = eval(Complex64::new(re, im));
            match v {
                Some(w) if w.re.is_finite() && w.im.is_finite() => {
                    let n = w.norm();
                    if n < 1e-300 {
                        out.extend_from_slice(&[0, 0, 0]);
                    } else {
                        let hue = w.arg() / std::f64::consts::TAU;
                        let band = n.log2().rem_euclid(1.0);
                        let rgb = hsl_to_rgb(hue, 0.85, 0.40 + 0.20 * band);
                        out.extend_from_slice(&rgb);
                    }
                }
                _ => {
                    errors += 1;
                    out.extend_from_slice(&[0, 0, 0]);
                }
            }
        }
    }
    (out, errors)
}

pub fn write_bytes(path: &std::path::Path, bytes: &[u8]) -> crate::error::Result<()> {
    std::fs::write(path, bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{check_criterion, CheckOptions};
    use crate::func::AnalyticFunction;
    use crate::grid::{Clustering, DiskGrid};
    use crate::params::CriterionParams;

    fn becker_params() -> CriterionParams {
        CriterionParams::univalence(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
        )
    }

    #[test]
    fn heatmap_shape_and_determinism() {
        let f = AnalyticFunction::preset("koebe", &[]).unwrap();
        let grid = DiskGrid::new(16, 24, 0.99, Clustering::Uniform).unwrap();
        let rep = check_criterion(
            &f,
            None,
            "becker",
            &becker_params(),
            &grid,
            &CheckOptions::default(),
        )
        .unwrap();
        let field = rep.field2.unwrap();
        let a = render_margin_heatmap(&field);
        let b = render_margin_heatmap(&field);
        assert_eq!(a, b);
        assert!(a.starts_with(b"P6\n24 16\n255\n"));
        assert_eq!(a.len(), b"P6\n24 16\n255\n".len() + 3 * 24 * 16);
    }

    #[test]
    fn all_positive_field_has_no_red() {
        let f = AnalyticFunction::preset("identity", &[]).unwrap();
        let grid = DiskGrid::new(8, 12, 0.9, Clustering::Uniform).unwrap();
        let rep = check_criterion(
            &f,
            None,
            "becker",
            &becker_params(),
            &grid,
            &CheckOptions::default(),
        )
        .unwrap();
        let bytes = render_margin_heatmap(&rep.field2.unwrap());
        let pix = &bytes[b"P6\n12 8\n255\n".len()..];
        for rgb in pix.chunks(3) {
            // Red-dominant pixels only appear for negative margins.
            assert!(rgb[0] <= rgb[2].max(64), "unexpected red pixel {:?}", rgb);
        }
    }

    #[test]
    fn koebe_heatmap_shows_violation_band() {
        let f = AnalyticFunction::preset("koebe", &[]).unwrap();
        let grid = DiskGrid::new(16, 24, 0.999, Clustering::ChebyshevTowardBoundary).unwrap();
        let rep = check_criterion(
            &f,
            None,
            "becker",
            &becker_params(),
            &grid,
            &CheckOptions::default(),
        )
        .unwrap();
        let bytes = render_margin_heatmap(&rep.field2.unwrap());
        let header = b"P6\n24 16\n255\n".len();
        // Bottom row (r = r_max), theta = 0: deep violation, red dominant.
        let idx = header + 3 * (15 * 24);
        assert!(bytes[idx] > bytes[idx + 2]);
    }

    #[test]
    fn domain_coloring_identity_hue_wheel() {
        let (bytes, errors) = render_domain_coloring(
            Some,
            &Window {
                center: Complex64::new(0.0, 0.0),
                half_width: 1.0,
                pixels: 32,
            },
        );
        assert_eq!(errors, 0);
        let header = b"P6\n32 32\n255\n".len();
        // Right-middle pixel (arg ~ 0) should be red-dominant, left-middle
        // (arg ~ pi) cyan-ish.
        let right = header + 3 * (16 * 32 + 31);
        let left = header + 3 * (16 * 32);
        assert!(bytes[right] > bytes[right + 2]);
        assert!(bytes[left] < bytes[left + 2].max(bytes[left + 1]));
    }

    #[test]
    fn domain_coloring_counts_error_pixels() {
        let (_, errors) = render_domain_coloring(
            |z| if z.re > 0.0 { None } else { Some(z) },
            &Window {
                center: Complex64::new(0.0, 0.0),
                half_width: 1.0,
                pixels: 16,
            },
        );
        assert_eq!(errors, 8 * 16);
    }
}
