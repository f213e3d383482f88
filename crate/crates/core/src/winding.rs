//! Windings of polylines and of their images under disc automorphisms.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{orient, wrap_angle, DiscAutomorphism, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<Point>,
    pub closed: bool,
}

impl Polyline {
    pub fn open(points: Vec<Point>) -> Self {
        Self { points, closed: false }
    }

    pub fn closed(points: Vec<Point>) -> Self {
        Self { points, closed: true }
    }

    fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.points.len();
        let m = if self.closed && n > 1 { n } else { n.saturating_sub(1) };
        (0..m).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    /// Concatenation; a shared endpoint is kept once.
    pub fn concat(&self, other: &Polyline) -> Polyline {
        let mut points = self.points.clone();
        let skip = usize::from(points.last() == other.points.first());
        points.extend_from_slice(&other.points[skip..]);
        Polyline::open(points)
    }
}

fn on_segment(p: Point, a: Point, b: Point) -> bool {
    let scale = (b - a).norm().max(1e-300);
    if orient(a, b, p).abs() > 1e-14 * scale * scale.max((p - a).norm()) {
        return false;
    }
    let t = ((p - a) * (b - a).conj()).re / (scale * scale);
    (-1e-15..=1.0 + 1e-15).contains(&t)
}

/// Total change of the argument of `γ(t) - p`. The point may coincide with
/// the first or last vertex of an open polyline, in which case the argument
/// is followed from the side where it is defined; it may not touch the
/// curve anywhere else.
pub fn topological_winding(poly: &Polyline, p: Point) -> Result<f64> {
    let n = poly.points.len();
    let mut total = 0.0;
    for (i, (a, b)) in poly.segments().enumerate() {
        let first = !poly.closed && i == 0 && a == p;
        let last = !poly.closed && i + 2 == n && b == p;
        if first || last {
            continue;
        }
        if on_segment(p, a, b) {
            return Err(Error::Geometry(format!("point {p} lies on segment {i}")));
        }
        total += ((b - p) / (a - p)).arg();
    }
    Ok(total)
}

/// Total turning of the tangent, i.e. the sum of signed exterior angles at
/// interior vertices. Exact reversals are counted as 0; their indices are
/// returned.
pub fn intrinsic_winding_report(poly: &Polyline) -> (f64, Vec<usize>) {
    let pts = &poly.points;
    let n = pts.len();
    let mut total = 0.0;
    let mut degenerate = Vec::new();
    let corners: Vec<usize> = if poly.closed { (0..n).collect() } else { (1..n.saturating_sub(1)).collect() };
    for i in corners {
        let a = pts[(i + n - 1) % n];
        let b = pts[i];
        let c = pts[(i + 1) % n];
        let q = (c - b) / (b - a);
        if q.im == 0.0 && q.re < 0.0 {
            degenerate.push(i);
            continue;
        }
        total += q.arg();
    }
    (total, degenerate)
}

pub fn intrinsic_winding(poly: &Polyline) -> f64 {
    intrinsic_winding_report(poly).0
}

/// Image of the segment `a b` under a Möbius map: a circular arc, or a
/// segment when the image is straight. Returns the signed turning of the
/// tangent along it and the tangent directions at both ends.
fn arc_of_segment(phi: &DiscAutomorphism, a: Point, b: Point) -> (f64, f64, f64) {
    let p = phi.apply(a);
    let m = phi.apply((a + b) / 2.0);
    let q = phi.apply(b);
    let o = orient(p, m, q);
    let chord = q - p;
    if o.abs() <= 1e-15 * chord.norm_sqr() {
        let t = chord.arg();
        return (0.0, t, t);
    }
    // circumcenter of p, m, q
    let (d1, d2) = (m - p, q - p);
    let den = 2.0 * (d1.re * d2.im - d1.im * d2.re);
    let c = p + Point::new(
        d2.im * d1.norm_sqr() - d1.im * d2.norm_sqr(),
        d1.re * d2.norm_sqr() - d2.re * d1.norm_sqr(),
    ) / den;
    // positive orientation of p, m, q means the arc runs counterclockwise
    let ccw = o > 0.0;
    let piece = |from: Point, to: Point| {
        let a = ((to - c) / (from - c)).arg();
        if ccw {
            a.rem_euclid(2.0 * PI)
        } else {
            -(-a).rem_euclid(2.0 * PI)
        }
    };
    let swept = piece(p, m) + piece(m, q);
    let normal = if ccw { Point::new(0.0, 1.0) } else { Point::new(0.0, -1.0) };
    let t_start = ((p - c) * normal).arg();
    let t_end = ((q - c) * normal).arg();
    (swept, t_start, t_end)
}

/// Intrinsic winding of the image of an open polyline under `phi`, computed
/// from the circular arcs themselves.
pub fn mapped_intrinsic_winding(poly: &Polyline, phi: &DiscAutomorphism) -> f64 {
    let pts = &poly.points;
    let mut total = 0.0;
    let mut prev_end: Option<f64> = None;
    for i in 0..pts.len().saturating_sub(1) {
        let (swept, t0, t1) = arc_of_segment(phi, pts[i], pts[i + 1]);
        if let Some(e) = prev_end {
            let turn = wrap_angle(t0 - e);
            total += if (turn.abs() - PI).abs() < 1e-15 { 0.0 } else { turn };
        }
        total += swept;
        prev_end = Some(t1);
    }
    total
}
