//! Coordinate lines and how planar they are.

use nalgebra::{Dyn, OMatrix, RowVector3, U3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isotropic::IsoPoint3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineDirection {
    /// `v` fixed, `u` varies.
    ULine,
    /// `u` fixed, `v` varies.
    VLine,
}

/// Samples the coordinate line `{v = fixed}` (or `{u = fixed}`) at
/// `samples` equally spaced parameters in `range`, endpoints included.
pub fn extract_coordinate_polyline<S>(
    sampler: S,
    direction: LineDirection,
    fixed: f64,
    range: (f64, f64),
    samples: usize,
) -> Result<Vec<IsoPoint3>>
where
    S: Fn(f64, f64) -> Result<IsoPoint3>,
{
    if samples < 4 {
        return Err(Error::Domain(format!("need at least 4 samples per line, got {samples}")));
    }
    let (a, b) = range;
    let step = (b - a) / (samples - 1) as f64;
    (0..samples)
        .map(|k| {
            let t = if k + 1 == samples { b } else { a + step * k as f64 };
            match direction {
                LineDirection::ULine => sampler(t, fixed),
                LineDirection::VLine => sampler(fixed, t),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneFit {
    /// `σ_min / σ_max` of the centered point matrix.
    pub residual: f64,
    /// The points are collinear (the middle singular value vanishes too), so
    /// the fitted plane is not unique.
    pub rank_deficient: bool,
}

/// Scale-free planarity measure of a point cloud.
pub fn plane_fit_residual(points: &[IsoPoint3]) -> Result<PlaneFit> {
    if points.len() < 4 {
        return Err(Error::Domain(format!("need at least 4 points, got {}", points.len())));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite("plane fit input".into()));
    }
    let n = points.len() as f64;
    let mean = points.iter().fold(IsoPoint3::new(0.0, 0.0, 0.0), |acc, p| acc + *p);
    let mean = (1.0 / n) * mean;
    let rows: Vec<RowVector3<f64>> = points
        .iter()
        .map(|p| {
            let d = *p - mean;
            RowVector3::new(d.l, d.x, d.y)
        })
        .collect();
    let m = OMatrix::<f64, Dyn, U3>::from_rows(&rows);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let smax = sv[0];
    if !(smax > 0.0) {
        return Err(Error::Degenerate("all points coincide".into()));
    }
    let smin = sv.last().copied().unwrap_or(0.0);
    let mid = sv.get(1).copied().unwrap_or(0.0);
    Ok(PlaneFit {
        residual: smin / smax,
        rank_deficient: mid <= 1e-12 * smax,
    })
}
