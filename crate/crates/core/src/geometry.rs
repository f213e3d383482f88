//! Plane geometry on complex numbers: circles, disc automorphisms, and a few
//! predicates used by the embedding audits.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = Complex64;

pub fn pt(x: f64, y: f64) -> Point {
    Complex64::new(x, y)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

/// Twice the signed area of the triangle `a b c`; positive when
/// counterclockwise.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    let u = b - a;
    let v = c - a;
    u.re * v.im - u.im * v.re
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(mut t: f64) -> f64 {
    t %= 2.0 * PI;
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Proper crossing of the open segments `ab` and `cd`.
pub fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

/// Even-odd point in polygon test.
pub fn point_in_polygon(p: Point, poly: &[Point]) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a.im > p.im) != (b.im > p.im) {
            let x = a.re + (p.im - a.im) * (b.re - a.re) / (b.im - a.im);
            if x > p.re {
                inside = !inside;
            }
        }
    }
    inside
}

pub fn signed_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| orient(Point::new(0.0, 0.0), poly[i], poly[(i + 1) % n])).sum::<f64>() / 2.0
}

/// Incenter of a triangle. For three mutually tangent circles centered at
/// the corners this is the center of the circle through the tangency points.
pub fn incenter(a: Point, b: Point, c: Point) -> Point {
    let la = (b - c).norm();
    let lb = (c - a).norm();
    let lc = (a - b).norm();
    (a * la + b * lb + c * lc) / (la + lb + lc)
}

/// A conformal automorphism of the unit disc,
/// `z -> e^{i rotation} (z - a) / (1 - conj(a) z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscAutomorphism {
    pub rotation: f64,
    pub a_re: f64,
    pub a_im: f64,
}

impl DiscAutomorphism {
    pub fn identity() -> Self {
        Self { rotation: 0.0, a_re: 0.0, a_im: 0.0 }
    }

    pub fn new(rotation: f64, a: Point) -> Result<Self> {
        if !(a.norm() < 1.0) || !rotation.is_finite() {
            return Err(Error::Parameter(format!("automorphism parameter {a} is not inside the disc")));
        }
        Ok(Self { rotation, a_re: a.re, a_im: a.im })
    }

    /// Sends `a` to the origin.
    pub fn to_origin(a: Point) -> Result<Self> {
        Self::new(0.0, a)
    }

    /// Hyperbolic translation along the diameter through the boundary point
    /// `x = e^{i angle}`, fixing `x` and `-x`; `t` in `(-1, 1)` is the image
    /// of the origin along that diameter.
    pub fn translation_fixing(angle: f64, t: f64) -> Result<Self> {
        if !(t.abs() < 1.0) {
            return Err(Error::Parameter(format!("translation length {t} must lie in (-1, 1)")));
        }
        Self::new(0.0, Point::from_polar(-t, angle))
    }

    pub fn a(&self) -> Point {
        pt(self.a_re, self.a_im)
    }

    fn coefficients(&self) -> (Point, Point, Point, Point) {
        let r = Point::from_polar(1.0, self.rotation);
        let a = self.a();
        (r, -r * a, -a.conj(), pt(1.0, 0.0))
    }

    pub fn apply(&self, z: Point) -> Point {
        let (al, be, ga, de) = self.coefficients();
        (al * z + be) / (ga * z + de)
    }

    pub fn derivative(&self, z: Point) -> Point {
        let a = self.a();
        let den = pt(1.0, 0.0) - a.conj() * z;
        Point::from_polar(1.0, self.rotation) * (1.0 - a.norm_sqr()) / (den * den)
    }

    /// A continuous argument of the derivative on the closed disc. Since
    /// `Re(1 - conj(a) z) > 0` there, the principal argument of that factor
    /// never jumps.
    pub fn arg_derivative(&self, z: Point) -> f64 {
        let a = self.a();
        self.rotation - 2.0 * (pt(1.0, 0.0) - a.conj() * z).arg()
    }

    pub fn inverse(&self) -> Self {
        // w = r (z - a)/(1 - conj(a) z)  =>  z = (w/r + a)/(1 + conj(a) w/r)
        //   = e^{-i rot} (w + r a) / (1 + conj(r a) w)
        let r = Point::from_polar(1.0, self.rotation);
        let b = -(r * self.a());
        Self { rotation: -self.rotation, a_re: b.re, a_im: b.im }
    }

    /// Image of a circle not passing through the pole.
    pub fn apply_circle(&self, c: Circle) -> Circle {
        let (al, be, ga, de) = self.coefficients();
        let m = c.center;
        let r2 = c.radius * c.radius;
        let q = ga * m + de;
        let den = q.norm_sqr() - ga.norm_sqr() * r2;
        let center = ((al * m + be) * q.conj() - al * ga.conj() * r2) / den;
        let radius = c.radius * (al * de - be * ga).norm() / den.abs();
        Circle { center, radius }
    }

    pub fn is_identity(&self) -> bool {
        self.a().norm() == 0.0 && wrap_angle(self.rotation) == 0.0
    }
}

/// Hyperbolic center of a Euclidean circle lying inside the unit disc.
pub fn hyperbolic_center(c: Circle) -> Result<Point> {
    let d = c.center.norm();
    if d + c.radius >= 1.0 {
        return Err(Error::Geometry("circle touches the unit circle; no hyperbolic center".into()));
    }
    if d == 0.0 {
        return Ok(c.center);
    }
    let p1 = d - c.radius;
    let p2 = d + c.radius;
    let t = ((p1.atanh() + p2.atanh()) / 2.0).tanh();
    Ok(c.center / d * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn automorphism_inverse_round_trips() {
        let phi = DiscAutomorphism::new(0.7, pt(0.3, -0.4)).unwrap();
        let z = pt(-0.2, 0.55);
        let w = phi.inverse().apply(phi.apply(z));
        assert!((w - z).norm() < 1e-14);
    }

    #[test]
    fn translation_fixes_its_endpoint() {
        let phi = DiscAutomorphism::translation_fixing(1.1, 0.4).unwrap();
        let x = Point::from_polar(1.0, 1.1);
        assert!((phi.apply(x) - x).norm() < 1e-14);
        assert!((phi.apply(-x) + x).norm() < 1e-14);
        assert!(DiscAutomorphism::translation_fixing(0.0, 1.0).is_err());
    }

    #[test]
    fn circle_image_contains_image_points() {
        let phi = DiscAutomorphism::new(-0.3, pt(0.5, 0.2)).unwrap();
        let c = Circle { center: pt(-0.3, 0.1), radius: 0.25 };
        let img = phi.apply_circle(c);
        for k in 0..12 {
            let z = c.center + Point::from_polar(c.radius, k as f64 * 0.5);
            assert!(((phi.apply(z) - img.center).norm() - img.radius).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_matches_finite_difference_and_arg() {
        let phi = DiscAutomorphism::new(0.4, pt(-0.6, 0.1)).unwrap();
        let z = pt(0.2, 0.3);
        let h = 1e-6;
        let fd = (phi.apply(z + h) - phi.apply(z - h)) / (2.0 * h);
        assert!((fd - phi.derivative(z)).norm() < 1e-7);
        assert!(wrap_angle(phi.arg_derivative(z) - phi.derivative(z).arg()).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_center_maps_to_origin_centered_circle() {
        let c = Circle { center: pt(0.4, 0.3), radius: 0.2 };
        let h = hyperbolic_center(c).unwrap();
        let img = DiscAutomorphism::to_origin(h).unwrap().apply_circle(c);
        assert!(img.center.norm() < 1e-12);
    }

    #[test]
    fn predicates() {
        let sq = [pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)];
        assert!(point_in_polygon(pt(0.5, 0.5), &sq));
        assert!(!point_in_polygon(pt(1.5, 0.5), &sq));
        assert!((signed_area(&sq) - 1.0).abs() < 1e-15);
        assert!(segments_cross(pt(0.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0), pt(1.0, 0.0)));
        let i = incenter(pt(0.0, 0.0), pt(2.0, 0.0), pt(1.0, 3f64.sqrt()));
        assert!((i - pt(1.0, 1.0 / 3f64.sqrt())).norm() < 1e-12);
    }
}
