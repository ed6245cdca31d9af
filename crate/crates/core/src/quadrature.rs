//! Composite Gauss-Legendre quadrature along straight segments in the complex plane.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Where contour integrals start and how finely each segment is resolved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub base_point: Complex64,
    pub panels: usize,
    pub order: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            base_point: Complex64::new(0.0, 0.0),
            panels: 8,
            order: 16,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.panels < 1 {
            return Err(Error::Domain("quadrature needs at least one panel".into()));
        }
        if self.order < 2 {
            return Err(Error::Domain("Gauss-Legendre order must be >= 2".into()));
        }
        if !(self.base_point.re.is_finite() && self.base_point.im.is_finite()) {
            return Err(Error::Domain("base point must be finite".into()));
        }
        Ok(())
    }

    pub fn with_base_point(mut self, z0: Complex64) -> Self {
        self.base_point = z0;
        self
    }

    pub fn with_panels(mut self, panels: usize) -> Self {
        self.panels = panels;
        self
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }
}

/// Nodes and weights on `[-1, 1]` plus a panel count.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    pairs: Vec<(f64, f64)>,
    panels: usize,
}

impl CompositeRule {
    pub fn new(cfg: &QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        let order = NonZeroUsize::new(cfg.order).expect("validated");
        let rule = GaussLegendre::new(order);
        Ok(Self {
            pairs: rule.as_node_weight_pairs().to_vec(),
            panels: cfg.panels,
        })
    }

    /// Integrates a vector-valued holomorphic integrand along the segment `a -> b`.
    pub fn segment<const N: usize, F>(&self, a: Complex64, b: Complex64, f: &F) -> [Complex64; N]
    where
        F: Fn(Complex64) -> [Complex64; N],
    {
        let mut acc = [Complex64::new(0.0, 0.0); N];
        if a == b {
            return acc;
        }
        let step = (b - a) / self.panels as f64;
        let half = 0.5 * step;
        for k in 0..self.panels {
            let mid = a + step * (k as f64 + 0.5);
            let mut panel = [Complex64::new(0.0, 0.0); N];
            for &(x, w) in &self.pairs {
                let vals = f(mid + half * x);
                for (p, v) in panel.iter_mut().zip(vals) {
                    *p += w * v;
                }
            }
            for (a, p) in acc.iter_mut().zip(panel) {
                *a += half * p;
            }
        }
        acc
    }

    /// Integrates along the polyline through `vertices` in order.
    pub fn polyline<const N: usize, F>(&self, vertices: &[Complex64], f: &F) -> [Complex64; N]
    where
        F: Fn(Complex64) -> [Complex64; N],
    {
        let mut acc = [Complex64::new(0.0, 0.0); N];
        for w in vertices.windows(2) {
            let part = self.segment(w[0], w[1], f);
            for (a, p) in acc.iter_mut().zip(part) {
                *a += p;
            }
        }
        acc
    }
}
