//! Plane-geometry primitives shared across the crate.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// A point (or vector) in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const ZERO: PlanePoint = PlanePoint { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        PlanePoint { x, y }
    }

    pub fn dot(self, other: PlanePoint) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_inf(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn dist(self, other: PlanePoint) -> f64 {
        (self - other).norm()
    }

    pub fn dist_sq(self, other: PlanePoint) -> f64 {
        let d = self - other;
        d.x * d.x + d.y * d.y
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for PlanePoint {
    type Output = PlanePoint;
    fn add(self, o: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for PlanePoint {
    type Output = PlanePoint;
    fn sub(self, o: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for PlanePoint {
    type Output = PlanePoint;
    fn neg(self) -> PlanePoint {
        PlanePoint::new(-self.x, -self.y)
    }
}

impl Mul<f64> for PlanePoint {
    type Output = PlanePoint;
    fn mul(self, s: f64) -> PlanePoint {
        PlanePoint::new(self.x * s, self.y * s)
    }
}

/// Cross product of `a - o` and `b - o`; positive for a counterclockwise turn.
pub fn cross(o: PlanePoint, a: PlanePoint, b: PlanePoint) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn seg_point_distance(a: PlanePoint, b: PlanePoint, p: PlanePoint) -> f64 {
    let ab = b - a;
    let len_sq = ab.dot(ab);
    if len_sq == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Whether `p` lies in the closed convex polygon `poly` (counterclockwise),
/// up to `tol` on the cross-product test.
pub fn point_in_convex(poly: &[PlanePoint], p: PlanePoint, tol: f64) -> bool {
    if poly.len() < 3 {
        return false;
    }
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        if cross(a, b, p) < -tol {
            return false;
        }
    }
    true
}

/// Distance from `p` to the filled convex polygon (0 when inside).
pub fn dist_to_convex_polygon(poly: &[PlanePoint], p: PlanePoint) -> f64 {
    if point_in_convex(poly, p, 0.0) {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        best = best.min(seg_point_distance(a, b, p));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_distance_endpoints_and_interior() {
        let a = PlanePoint::new(0.0, 0.0);
        let b = PlanePoint::new(2.0, 0.0);
        assert_eq!(seg_point_distance(a, b, PlanePoint::new(1.0, 1.5)), 1.5);
        assert_eq!(seg_point_distance(a, b, PlanePoint::new(-3.0, 4.0)), 5.0);
    }

    #[test]
    fn convex_containment() {
        let sq = [
            PlanePoint::new(0.0, 0.0),
            PlanePoint::new(1.0, 0.0),
            PlanePoint::new(1.0, 1.0),
            PlanePoint::new(0.0, 1.0),
        ];
        assert!(point_in_convex(&sq, PlanePoint::new(0.5, 0.5), 1e-12));
        assert!(!point_in_convex(&sq, PlanePoint::new(1.5, 0.5), 1e-12));
        assert!(dist_to_convex_polygon(&sq, PlanePoint::new(2.0, 0.5)) - 1.0 < 1e-12);
    }
}
