//! Polar sampling grids on the unit disk.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Radial clustering of the sample radii.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clustering {
    Uniform,
    /// Radii follow sin(pi i / 2(n-1)), packing samples toward r_max where
    /// the boundary-weighted criteria are binding.
    ChebyshevTowardBoundary,
}

impl Clustering {
    pub fn name(&self) -> &'static str {
        match self {
            Clustering::Uniform => "uniform",
            Clustering::ChebyshevTowardBoundary => "chebyshev-toward-boundary",
        }
    }
}

/// Polar sampling spec. The sample set always contains z = 0 (row 0) and
/// the full circle r = r_max (last row).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskGrid {
    pub n_r: usize,
    pub n_theta: usize,
    pub r_max: f64,
    pub clustering: Clustering,
}

impl DiskGrid {
    pub fn new(n_r: usize, n_theta: usize, r_max: f64, clustering: Clustering) -> Result<Self> {
        if n_r < 2 {
            return Err(Error::Config {
                provenance: "grid".into(),
                message: format!("n_r must be at least 2, got {}", n_r),
            });
        }
        if n_theta < 8 {
            return Err(Error::Config {
                provenance: "grid".into(),
                message: format!("n_theta must be at least 8, got {}", n_theta),
            });
        }
        if !(r_max > 0.0 && r_max < 1.0) {
            return Err(Error::Config {
                provenance: "grid".into(),
                message: format!("r_max must lie in (0, 1), got {}", r_max),
            });
        }
        Ok(DiskGrid {
            n_r,
            n_theta,
            r_max,
            clustering,
        })
    }

    /// Default 128 x 256 boundary-clustered grid with r_max = 0.999.
    pub fn default_criterion() -> Self {
        DiskGrid {
            n_r: 128,
            n_theta: 256,
            r_max: 0.999,
            clustering: Clustering::ChebyshevTowardBoundary,
        }
    }

    pub fn len(&self) -> usize {
        self.n_r * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn radius(&self, i: usize) -> f64 {
        let s = i as f64 / (self.n_r - 1) as f64;
        match self.clustering {
            Clustering::Uniform => self.r_max * s,
            Clustering::ChebyshevTowardBoundary => {
                self.r_max * (std::f64::consts::FRAC_PI_2 * s).sin()
            }
        }
    }

    pub fn theta(&self, j: usize) -> f64 {
        std::f64::consts::TAU * j as f64 / self.n_theta as f64
    }

    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        Complex64::from_polar(self.radius(i), self.theta(j))
    }

    /// Flat (row-major, radius-major) index of (i_r, i_theta).
    pub fn flat(&self, i: usize, j: usize) -> usize {
        i * self.n_theta + j
    }

    pub fn unflat(&self, idx: usize) -> (usize, usize) {
        (idx / self.n_theta, idx % self.n_theta)
    }

    /// All sample points in lexicographic (i_r, i_theta) order.
    pub fn points(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.n_r {
            let r = self.radius(i);
            for j in 0..self.n_theta {
                out.push(Complex64::from_polar(r, self.theta(j)));
            }
        }
        out
    }

    /// Local sample spacing near row i (used to size certificate contours).
    pub fn local_spacing(&self, i: usize) -> f64 {
        let dr = if i + 1 < self.n_r {
            self.radius(i + 1) - self.radius(i)
        } else {
            self.radius(i) - self.radius(i - 1)
        };
        let dth = self.radius(i) * std::f64::consts::TAU / self.n_theta as f64;
        dr.max(dth)
    }
}
