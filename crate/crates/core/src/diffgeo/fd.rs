//! Central finite-difference stencils on a square lattice.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FdScheme {
    /// Three-point stencils, error `O(h²)`.
    Central2,
    /// Five-point stencils, error `O(h⁴)`.
    #[default]
    Central4,
}

impl FdScheme {
    fn first(self) -> &'static [(i32, f64)] {
        match self {
            FdScheme::Central2 => &[(-1, -0.5), (1, 0.5)],
            FdScheme::Central4 => &[(-2, 1.0 / 12.0), (-1, -8.0 / 12.0), (1, 8.0 / 12.0), (2, -1.0 / 12.0)],
        }
    }

    fn second(self) -> &'static [(i32, f64)] {
        match self {
            FdScheme::Central2 => &[(-1, 1.0), (1, 1.0)],
            FdScheme::Central4 => &[(-2, -1.0 / 12.0), (-1, 16.0 / 12.0), (1, 16.0 / 12.0), (2, -1.0 / 12.0)],
        }
    }
}

/// `(value, ∂_u, ∂_v, ∂_uu, ∂_uv, ∂_vv)`.
pub type Derivs<T> = (T, T, T, T, T, T);

/// Differentiates `f(i, j) = F(u + i h, v + j h)` at the origin of the lattice.
///
/// All stencils are applied to `F - F(0, 0)`; their weights sum to zero.
pub fn lattice_derivatives<T, F>(f: F, h: f64, scheme: FdScheme) -> Result<Derivs<T>>
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
    f64: Mul<T, Output = T>,
    F: Fn(i32, i32) -> Result<T>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Domain(format!("finite-difference step must be positive, got {h}")));
    }
    let mut cache: BTreeMap<(i32, i32), T> = BTreeMap::new();
    let mut at = |i: i32, j: i32| -> Result<T> {
        if let Some(v) = cache.get(&(i, j)) {
            return Ok(*v);
        }
        let v = f(i, j)?;
        cache.insert((i, j), v);
        Ok(v)
    };
    let x0 = at(0, 0)?;
    let zero = 0.0 * x0;
    let mut du = zero;
    let mut dv = zero;
    for &(k, w) in scheme.first() {
        du = du + w * (at(k, 0)? - x0);
        dv = dv + w * (at(0, k)? - x0);
    }
    let mut duu = zero;
    let mut dvv = zero;
    for &(k, w) in scheme.second() {
        duu = duu + w * (at(k, 0)? - x0);
        dvv = dvv + w * (at(0, k)? - x0);
    }
    let mut duv = zero;
    for &(i, wi) in scheme.first() {
        for &(j, wj) in scheme.first() {
            duv = duv + weight_product(wi, wj) * (at(i, j)? - x0);
        }
    }
    let (h1, h2) = (h.recip(), h.powi(-2));
    Ok((x0, h1 * du, h1 * dv, h2 * duu, h2 * duv, h2 * dvv))
}

fn weight_product(a: f64, b: f64) -> f64 {
    a * b
}
