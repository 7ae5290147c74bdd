//! Planar vectors, rotations and oriented cut lines.

use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product `self × other`.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn unit(self) -> Result<Vec2> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Vec2::new(self.x / n, self.y / n))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl SubAssign for Vec2 {
    fn sub_assign(&mut self, rhs: Vec2) {
        self.x -= rhs.x;
        self.y -= rhs.y;
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Signed angle that rotates `v` counter-clockwise onto the +Y axis, in `(-π, π]`.
pub fn angle_to_y(v: Vec2) -> Result<f64> {
    if v.norm_sq() == 0.0 {
        return Err(Error::ZeroVector);
    }
    // atan2 of (0,1) relative to v: the angle from v to +Y.
    let alpha = v.x.atan2(v.y);
    // atan2 returns -π for (-0, -y); fold onto the closed end of the range.
    Ok(if alpha <= -PI { PI } else { alpha })
}

/// Counter-clockwise rotation about the origin.
pub fn rotate(p: Vec2, alpha: f64) -> Vec2 {
    let (s, c) = alpha.sin_cos();
    Vec2::new(c * p.x - s * p.y, s * p.x + c * p.y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    LowerOrEqual,
    Greater,
}

/// A directed line through `origin`. Points to the left of `direction`
/// (and on the line) are on the lower-or-equal side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub origin: Vec2,
    pub direction: Vec2,
}

impl Cut {
    pub fn new(origin: Vec2, direction: Vec2) -> Result<Self> {
        Ok(Cut {
            origin,
            direction: direction.unit()?,
        })
    }

    /// Coordinate of `p` across the cut line: the X coordinate of `p` in the
    /// frame rotated so that `direction` points along +Y.
    pub fn offset_key(&self, p: Vec2) -> f64 {
        across(self.direction, p)
    }

    pub fn side_of(&self, p: Vec2) -> Side {
        side_of(self, p)
    }
}

/// X coordinate of `p` after rotating `direction` onto +Y, i.e. `-cross(direction, p)`.
///
/// Partitioners sort by this key and [`side_of`] compares with it, so the
/// build-time split and later point location agree bit for bit.
pub fn across(direction: Vec2, p: Vec2) -> f64 {
    direction.y * p.x - direction.x * p.y
}

/// `LowerOrEqual` iff `cross(direction, p - origin) >= 0`.
pub fn side_of(cut: &Cut, p: Vec2) -> Side {
    if across(cut.direction, p) <= across(cut.direction, cut.origin) {
        Side::LowerOrEqual
    } else {
        Side::Greater
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Vec2,
    pub max: Vec2,
}

impl Rect {
    pub fn new(min: Vec2, max: Vec2) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min.x > max.x || min.y > max.y {
            return Err(Error::InvalidParameter(format!(
                "rect min {min:?} must not exceed max {max:?}"
            )));
        }
        Ok(Rect { min, max })
    }

    pub fn unit() -> Self {
        Rect {
            min: Vec2::ZERO,
            max: Vec2::new(1.0, 1.0),
        }
    }

    /// Smallest rectangle holding every point; `None` for an empty iterator.
    pub fn bounding<I: IntoIterator<Item = Vec2>>(points: I) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let (mut min, mut max) = (first, first);
        for p in it {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        Some(Rect { min, max })
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn center(&self) -> Vec2 {
        Vec2::new(
            0.5 * (self.min.x + self.max.x),
            0.5 * (self.min.y + self.max.y),
        )
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Unit direction of a cut orthogonal to the longest side: a vertical
    /// line when the box is wider than tall, a horizontal one otherwise.
    pub fn longest_axis_cut_direction(&self) -> Vec2 {
        if self.width() > self.height() {
            Vec2::new(0.0, 1.0)
        } else {
            Vec2::new(1.0, 0.0)
        }
    }
}
