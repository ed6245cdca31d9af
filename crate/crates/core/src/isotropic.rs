//! Minkowski 4-space model of isotropic 3-space.
//!
//! Isotropic space is realised as the hyperplane `{X : <X, p> = 0}` of
//! `R^{3,1}` (signature `- + + +`) where `p = (1, 0, 0, 1)` is a fixed
//! lightlike vector. In coordinates such a point is `(l, x, y, l)`, so the
//! coordinate model `(l, x, y)` carries the degenerate metric `dx^2 + dy^2`
//! and the `l` axis is the vertical (null) direction.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when checking that a matrix preserves the Minkowski form.
pub const ISOMETRY_TOL: f64 = 1e-10;

/// A vector of `R^{3,1}` with components `(t, x, y, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec4(pub [f64; 4]);

/// A point (or tangent vector) of isotropic 3-space in `(l, x, y)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct IsoPoint3 {
    pub l: f64,
    pub x: f64,
    pub y: f64,
}

/// The vertical lightlike vector `p = (1, 0, 0, 1)`.
pub const P: Vec4 = Vec4([1.0, 0.0, 0.0, 1.0]);

/// The complementary lightlike vector `p~ = (-1, 0, 0, 1) / 2` with `<p, p~> = 1`.
pub const P_TILDE: Vec4 = Vec4([-0.5, 0.0, 0.0, 0.5]);

/// The origin of isotropic space.
pub const ORIGIN: IsoPoint3 = IsoPoint3 {
    l: 0.0,
    x: 0.0,
    y: 0.0,
};

/// `p` as a vector of the coordinate model.
pub const VERTICAL: IsoPoint3 = IsoPoint3 {
    l: 1.0,
    x: 0.0,
    y: 0.0,
};

/// Minkowski bilinear form of signature `(- + + +)`.
pub fn minkowski_form(a: &Vec4, b: &Vec4) -> f64 {
    -a.0[0] * b.0[0] + a.0[1] * b.0[1] + a.0[2] * b.0[2] + a.0[3] * b.0[3]
}

/// Induced (degenerate) inner product on isotropic tangent vectors.
pub fn iso_inner(a: &IsoPoint3, b: &IsoPoint3) -> f64 {
    a.x * b.x + a.y * b.y
}

impl Vec4 {
    pub const fn new(t: f64, x: f64, y: f64, w: f64) -> Self {
        Self([t, x, y, w])
    }

    pub fn dot(&self, other: &Vec4) -> f64 {
        minkowski_form(self, other)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn max_abs_diff(&self, other: &Vec4) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Projects back to the coordinate model.
    ///
    /// Fails if the vector does not lie in isotropic space, i.e. if
    /// `<self, p>` is not zero up to `tol`.
    pub fn to_iso(&self, tol: f64) -> Result<IsoPoint3> {
        let off = minkowski_form(self, &P);
        if off.abs() > tol * (1.0 + self.0[0].abs().max(self.0[3].abs())) {
            return Err(Error::NotIsotropic(off));
        }
        Ok(IsoPoint3 {
            l: 0.5 * (self.0[0] + self.0[3]),
            x: self.0[1],
            y: self.0[2],
        })
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Mul<Vec4> for f64 {
    type Output = Vec4;
    fn mul(self, v: Vec4) -> Vec4 {
        Vec4(v.0.map(|c| self * c))
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    fn neg(self) -> Vec4 {
        Vec4(self.0.map(|c| -c))
    }
}

impl IsoPoint3 {
    pub const fn new(l: f64, x: f64, y: f64) -> Self {
        Self { l, x, y }
    }

    /// Embeds into `R^{3,1}` as `(l, x, y, l)`.
    pub fn embed(&self) -> Vec4 {
        Vec4([self.l, self.x, self.y, self.l])
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.l, self.x, self.y]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn is_finite(&self) -> bool {
        self.l.is_finite() && self.x.is_finite() && self.y.is_finite()
    }

    /// Largest absolute coordinate difference.
    pub fn max_abs_diff(&self, other: &IsoPoint3) -> f64 {
        (self.l - other.l)
            .abs()
            .max((self.x - other.x).abs())
            .max((self.y - other.y).abs())
    }

    pub fn max_abs(&self) -> f64 {
        self.l.abs().max(self.x.abs()).max(self.y.abs())
    }

    /// Euclidean norm of the coordinate triple. Not an isotropic quantity;
    /// used for error measurement only.
    pub fn coord_norm(&self) -> f64 {
        (self.l * self.l + self.x * self.x + self.y * self.y).sqrt()
    }
}

impl Add for IsoPoint3 {
    type Output = IsoPoint3;
    fn add(self, o: IsoPoint3) -> IsoPoint3 {
        IsoPoint3::new(self.l + o.l, self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for IsoPoint3 {
    fn add_assign(&mut self, o: IsoPoint3) {
        self.l += o.l;
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for IsoPoint3 {
    type Output = IsoPoint3;
    fn sub(self, o: IsoPoint3) -> IsoPoint3 {
        IsoPoint3::new(self.l - o.l, self.x - o.x, self.y - o.y)
    }
}

impl Mul<IsoPoint3> for f64 {
    type Output = IsoPoint3;
    fn mul(self, v: IsoPoint3) -> IsoPoint3 {
        IsoPoint3::new(self * v.l, self * v.x, self * v.y)
    }
}

impl Neg for IsoPoint3 {
    type Output = IsoPoint3;
    fn neg(self) -> IsoPoint3 {
        IsoPoint3::new(-self.l, -self.x, -self.y)
    }
}

/// A plane `P_{m,q} = {x in I^3 : <x, m> = q}` with lightlike `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneCarrier {
    pub m: Vec4,
    pub q: f64,
}

impl PlaneCarrier {
    /// Normalises an (unnormalised) lightlike normal so that `<m, p> = 1`.
    pub fn normalized(m: Vec4, q: f64) -> Result<Self> {
        let s = minkowski_form(&m, &P);
        if s.abs() < 1e-14 {
            return Err(Error::Degenerate("plane normal is orthogonal to p".into()));
        }
        Ok(Self {
            m: (1.0 / s) * m,
            q: q / s,
        })
    }

    /// The plane through `point` with the given (unnormalised) lightlike normal.
    pub fn through(m: Vec4, point: &IsoPoint3) -> Result<Self> {
        let mut c = Self::normalized(m, 0.0)?;
        c.q = minkowski_form(&point.embed(), &c.m);
        Ok(c)
    }

    /// Signed offset `<x, m> - q`; zero exactly on the plane.
    pub fn offset(&self, point: &IsoPoint3) -> f64 {
        minkowski_form(&point.embed(), &self.m) - self.q
    }

    pub fn contains(&self, point: &IsoPoint3, tol: f64) -> bool {
        self.offset(point).abs() <= tol
    }
}

/// A linear map of `R^{3,1}`, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Isometry4 {
    pub m: [f64; 16],
}

impl Isometry4 {
    pub fn identity() -> Self {
        let mut m = [0.0; 16];
        for i in 0..4 {
            m[5 * i] = 1.0;
        }
        Self { m }
    }

    pub fn from_rows(rows: [[f64; 4]; 4]) -> Self {
        let mut m = [0.0; 16];
        for (i, row) in rows.iter().enumerate() {
            m[4 * i..4 * i + 4].copy_from_slice(row);
        }
        Self { m }
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.m[4 * row + col]
    }

    pub fn apply(&self, v: &Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| {
            (0..4).map(|j| self.entry(i, j) * v.0[j]).sum()
        }))
    }

    pub fn compose(&self, other: &Isometry4) -> Isometry4 {
        let mut m = [0.0; 16];
        for i in 0..4 {
            for j in 0..4 {
                m[4 * i + j] = (0..4).map(|k| self.entry(i, k) * other.entry(k, j)).sum();
            }
        }
        Isometry4 { m }
    }

    /// `||A^T G A - G||_inf` with `G = diag(-1, 1, 1, 1)`.
    pub fn form_defect(&self) -> f64 {
        const G: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let s: f64 = (0..4)
                    .map(|k| self.entry(k, i) * G[k] * self.entry(k, j))
                    .sum();
                let target = if i == j { G[i] } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }

    pub fn preserves_form(&self) -> bool {
        self.form_defect() <= ISOMETRY_TOL
    }

    /// `||A p - p||_inf`.
    pub fn p_defect(&self) -> f64 {
        self.apply(&P).max_abs_diff(&P)
    }

    pub fn fixes_p(&self) -> bool {
        self.p_defect() <= ISOMETRY_TOL
    }
}

/// Parabolic rotation fixing `e1 = (0, 1, 0, 0)`.
pub fn parabolic_rotation_e1(v: f64) -> Isometry4 {
    let h = 0.5 * v * v;
    Isometry4::from_rows([
        [1.0 + h, 0.0, v, -h],
        [0.0, 1.0, 0.0, 0.0],
        [-v, 0.0, -1.0, v],
        [h, 0.0, v, 1.0 - h],
    ])
}

/// Parabolic rotation fixing `e2 = (0, 0, 1, 0)`.
pub fn parabolic_rotation_e2(u: f64) -> Isometry4 {
    let h = 0.5 * u * u;
    Isometry4::from_rows([
        [1.0 + h, -u, 0.0, -h],
        [u, -1.0, 0.0, -u],
        [0.0, 0.0, 1.0, 0.0],
        [h, -u, 0.0, 1.0 - h],
    ])
}

/// The isotropic isometry `X -> A (X + r p~) - r p~` induced by `A` fixing `p`.
pub fn parabolic_action(a: &Isometry4, r: f64, point: &IsoPoint3) -> Result<IsoPoint3> {
    if !a.fixes_p() {
        return Err(Error::NotParabolic(a.p_defect()));
    }
    let shifted = point.embed() + r * P_TILDE;
    let image = a.apply(&shifted) - r * P_TILDE;
    image.to_iso(1e-9)
}
