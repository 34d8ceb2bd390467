//! Final-state loci of binary electron-electron collisions.
//!
//! With the Dirac point at the origin, momentum and energy conservation put
//! the outgoing `k1'` on a conic whose foci are `F1 = 0` and `F2 = k1 + k2`;
//! the partner follows as `k2' = F2 − k1'`.
//!
//! * intra-band: `|k1'| + |k2'| = |k1| + |k2|`, an ellipse;
//! * inter-band (`k1` conduction, `k2` valence):
//!   `|k1'| − |k2'| = |k1| − |k2|`, one branch of a hyperbola.

use crate::error::{Error, Result};
use crate::vec2::Vec2;

/// Relative threshold under which the total momentum is treated as zero.
const ZERO_MOMENTUM: f64 = 1e-12;

/// Relative minor axis below which an ellipse is treated as a segment.
pub const DEGENERATE_MINOR_AXIS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseGeom {
    /// Semi-major axis (1/nm).
    pub a: f64,
    /// Semi-minor axis (1/nm).
    pub b: f64,
    /// Focal half-distance (1/nm).
    pub c: f64,
    /// Angle of the major axis (direction of `k1 + k2`) against k_x.
    pub theta: f64,
    cos_theta: f64,
    sin_theta: f64,
    pub center: Vec2,
    pub k1: Vec2,
    pub k2: Vec2,
}

impl EllipseGeom {
    pub fn from_pair(k1: Vec2, k2: Vec2) -> Result<Self> {
        ellipse_from_pair(k1, k2)
    }

    #[inline]
    pub fn total_momentum(&self) -> Vec2 {
        self.k1 + self.k2
    }

    #[inline]
    pub fn cos_theta(&self) -> f64 {
        self.cos_theta
    }

    #[inline]
    pub fn sin_theta(&self) -> f64 {
        self.sin_theta
    }

    /// `true` when the minor axis is negligible, i.e. the incoming pair is
    /// collinear and co-directed.
    #[inline]
    pub fn is_degenerate(&self) -> bool {
        self.b < DEGENERATE_MINOR_AXIS * self.a
    }

    /// Point of the ellipse at parameter `beta`, measured from the major axis
    /// around the center.
    #[inline]
    pub fn point(&self, beta: f64) -> Vec2 {
        let (s, c) = beta.sin_cos();
        self.point_cs(c, s)
    }

    /// As [`point`](Self::point) with `cos β`, `sin β` supplied.
    #[inline]
    pub fn point_cs(&self, cos_beta: f64, sin_beta: f64) -> Vec2 {
        self.center + Vec2::new(self.a * cos_beta, self.b * sin_beta).rotate_cs(self.cos_theta, self.sin_theta)
    }

    /// Outgoing pair `(k1', k2')` at parameter `beta`.
    #[inline]
    pub fn final_pair(&self, beta: f64) -> (Vec2, Vec2) {
        let p = self.point(beta);
        (p, self.total_momentum() - p)
    }

    /// Arc-length density `dΓ/dβ`.
    #[inline]
    pub fn line_element(&self, sin_beta: f64, cos_beta: f64) -> f64 {
        (self.a * self.a * sin_beta * sin_beta + self.b * self.b * cos_beta * cos_beta).sqrt()
    }

    /// Parameter of an arbitrary point of the ellipse, e.g. the incoming `k1`.
    pub fn parameter_of(&self, p: Vec2) -> f64 {
        let local = (p - self.center).rotate_cs(self.cos_theta, -self.sin_theta);
        let y = if self.b > 0.0 { local.y / self.b } else { 0.0 };
        let beta = y.atan2(local.x / self.a);
        beta.rem_euclid(2.0 * std::f64::consts::PI)
    }
}

/// Ellipse of final states for the intra-band pair `(k1, k2)`.
pub fn ellipse_from_pair(k1: Vec2, k2: Vec2) -> Result<EllipseGeom> {
    let (n1, n2) = (k1.norm(), k2.norm());
    let a = 0.5 * (n1 + n2);
    if !(a > 0.0) {
        return Err(Error::DegenerateGeometry("both wave-vectors vanish"));
    }
    let sum = k1 + k2;
    let c = 0.5 * sum.norm();
    let b = ((a - c).max(0.0) * (a + c)).sqrt();
    let (theta, cos_theta, sin_theta) = if sum.norm() < ZERO_MOMENTUM * (n1 + n2) {
        (0.0, 1.0, 0.0)
    } else {
        (sum.angle(), sum.x / (2.0 * c), sum.y / (2.0 * c))
    };
    Ok(EllipseGeom {
        a,
        b,
        c,
        theta,
        cos_theta,
        sin_theta,
        center: sum * 0.5,
        k1,
        k2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolaGeom {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub theta: f64,
    cos_theta: f64,
    sin_theta: f64,
    pub center: Vec2,
    /// Conduction-band wave-vector.
    pub k1: Vec2,
    /// Valence-band wave-vector.
    pub k2: Vec2,
    /// `+1` if the branch nearer `F2` carries the incoming pair
    /// (`|k1| ≥ |k2|`), `−1` otherwise.
    pub branch: f64,
}

impl HyperbolaGeom {
    pub fn from_pair(k1: Vec2, k2: Vec2) -> Result<Self> {
        hyperbola_from_pair(k1, k2)
    }

    #[inline]
    pub fn total_momentum(&self) -> Vec2 {
        self.k1 + self.k2
    }

    /// Point on branch `side` (`±1`) at parameter `beta ∈ ℝ`.
    #[inline]
    pub fn point(&self, side: f64, beta: f64) -> Vec2 {
        let local = Vec2::new(side * self.a * beta.cosh(), self.b * beta.sinh());
        self.center + local.rotate_cs(self.cos_theta, self.sin_theta)
    }

    /// Outgoing pair on the sign-consistent branch.
    #[inline]
    pub fn final_pair(&self, beta: f64) -> (Vec2, Vec2) {
        self.final_pair_on(self.branch, beta)
    }

    #[inline]
    pub fn final_pair_on(&self, side: f64, beta: f64) -> (Vec2, Vec2) {
        let p = self.point(side, beta);
        (p, self.total_momentum() - p)
    }

    #[inline]
    pub fn line_element(&self, beta: f64) -> f64 {
        let (sh, ch) = (beta.sinh(), beta.cosh());
        (self.a * self.a * sh * sh + self.b * self.b * ch * ch).sqrt()
    }
}

/// Hyperbola of final states for a conduction-band `k1` and valence-band
/// `k2`. Fails when `k1 + k2 = 0`, where the conservation laws admit no
/// curve of solutions.
pub fn hyperbola_from_pair(k1: Vec2, k2: Vec2) -> Result<HyperbolaGeom> {
    let (n1, n2) = (k1.norm(), k2.norm());
    let sum = k1 + k2;
    let c = 0.5 * sum.norm();
    if !(c > ZERO_MOMENTUM * (n1 + n2)) {
        return Err(Error::DegenerateGeometry("zero total momentum: no inter-band final states"));
    }
    let a = 0.5 * (n1 - n2).abs();
    let b = ((c - a).max(0.0) * (c + a)).sqrt();
    Ok(HyperbolaGeom {
        a,
        b,
        c,
        theta: sum.angle(),
        cos_theta: sum.x / (2.0 * c),
        sin_theta: sum.y / (2.0 * c),
        center: sum * 0.5,
        k1,
        k2,
        branch: if n1 >= n2 { 1.0 } else { -1.0 },
    })
}
