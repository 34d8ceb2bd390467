use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// A 2D wave-vector (or velocity) in Cartesian components.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    #[inline]
    pub fn from_polar(r: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Vec2::new(r * c, r * s)
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Polar angle in (-π, π].
    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Rotate counter-clockwise by the angle whose cosine and sine are given.
    #[inline]
    pub fn rotate_cs(self, cos: f64, sin: f64) -> Self {
        Vec2::new(self.x * cos - self.y * sin, self.x * sin + self.y * cos)
    }

    /// Cosine of the unsigned angle between `self` and `other`.
    ///
    /// Returns 1 when either vector vanishes; the angle is undefined there and
    /// the only callers evaluate chirality factors on measure-zero sets.
    #[inline]
    pub fn cos_angle(self, other: Vec2) -> f64 {
        let den = (self.norm_sq() * other.norm_sq()).sqrt();
        if den == 0.0 {
            1.0
        } else {
            (self.dot(other) / den).clamp(-1.0, 1.0)
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl SubAssign for Vec2 {
    #[inline]
    fn sub_assign(&mut self, rhs: Vec2) {
        self.x -= rhs.x;
        self.y -= rhs.y;
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, rhs: Vec2) -> Vec2 {
        rhs * self
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cos_angle_of_orthogonal_and_opposite() {
        assert_eq!(Vec2::new(1.0, 0.0).cos_angle(Vec2::new(0.0, 3.0)), 0.0);
        assert_eq!(Vec2::new(2.0, 0.0).cos_angle(Vec2::new(-1.0, 0.0)), -1.0);
        assert_eq!(Vec2::ZERO.cos_angle(Vec2::new(1.0, 1.0)), 1.0);
    }

    #[test]
    fn rotation_preserves_norm() {
        let v = Vec2::new(3.0, 4.0);
        let (s, c) = 0.7f64.sin_cos();
        assert!((v.rotate_cs(c, s).norm() - 5.0).abs() < 1e-14);
    }
}
