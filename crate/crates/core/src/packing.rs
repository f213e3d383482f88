//! Circle packings of triangulation patches.
//!
//! Radii are found by angle-sum relaxation with the uniform-neighbor update:
//! at each interior vertex the current neighbors are replaced by equal
//! circles producing the same angle sum, and the vertex radius is reset to
//! the value that would make that flower close up exactly. Two geometries
//! are supported. Euclidean packings take fixed boundary radii. Hyperbolic
//! packings live in the Poincare disc and take a fixed boundary hyperbolic
//! radius; an infinite boundary radius turns the boundary circles into
//! horocycles, i.e. circles internally tangent to the unit circle.
//!
//! Hyperbolic radii are handled through `s = exp(-h)`, which stays finite
//! for horocycles (`s = 0`).

use std::collections::VecDeque;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{hyperbolic_center, incenter, orient, pt, Circle, DiscAutomorphism, Point};
use crate::triangulation::{DualMap, PlanarTriangulation, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Euclidean,
    Hyperbolic,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryCondition {
    /// Euclidean radii for the boundary vertices, in boundary order.
    Fixed(Vec<f64>),
    /// The same Euclidean radius on every boundary vertex.
    Uniform(f64),
    /// Hyperbolic radius for every boundary vertex; `f64::INFINITY` gives
    /// horocycles.
    Hyperbolic(f64),
}

impl BoundaryCondition {
    pub fn horocycles() -> Self {
        BoundaryCondition::Hyperbolic(f64::INFINITY)
    }

    fn geometry(&self) -> Geometry {
        match self {
            BoundaryCondition::Hyperbolic(_) => Geometry::Hyperbolic,
            _ => Geometry::Euclidean,
        }
    }
}

/// Output of [`solve_radii`].
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusSolution {
    pub geometry: Geometry,
    /// Euclidean radii, or `s = exp(-h)` in the hyperbolic case.
    pub label: Vec<f64>,
    pub iterations: usize,
    pub max_residual: f64,
}

impl RadiusSolution {
    /// Hyperbolic radii (`inf` for horocycles); Euclidean radii unchanged.
    pub fn radii(&self) -> Vec<f64> {
        match self.geometry {
            Geometry::Euclidean => self.label.clone(),
            Geometry::Hyperbolic => self.label.iter().map(|&s| if s == 0.0 { f64::INFINITY } else { -s.ln() }).collect(),
        }
    }
}

/// A laid-out packing with Euclidean centers and radii.
#[derive(Debug, Clone, PartialEq)]
pub struct Packing {
    pub center: Vec<Point>,
    pub radius: Vec<f64>,
    /// Boundary circles are internally tangent to the unit circle.
    pub boundary_tangent: bool,
}

impl Packing {
    pub fn circle(&self, v: VertexId) -> Circle {
        Circle { center: self.center[v], radius: self.radius[v] }
    }

    pub fn len(&self) -> usize {
        self.center.len()
    }

    pub fn is_empty(&self) -> bool {
        self.center.is_empty()
    }

    /// Tangency point of the circles of `u` and `v`.
    pub fn tangency_point(&self, u: VertexId, v: VertexId) -> Point {
        let d = self.center[v] - self.center[u];
        self.center[u] + d / d.norm() * self.radius[u]
    }

    /// `vertex_id,x,y,r` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("vertex_id,x,y,r\n");
        for v in 0..self.len() {
            s.push_str(&format!("{v},{:.17e},{:.17e},{:.17e}\n", self.center[v].re, self.center[v].im, self.radius[v]));
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut center = Vec::new();
        let mut radius = Vec::new();
        for (i, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            let bad = || Error::Parse { line: i + 1, msg: format!("bad packing row `{line}`") };
            if f.len() != 4 || f[0].trim().parse::<usize>().map_err(|_| bad())? != center.len() {
                return Err(bad());
            }
            let x: f64 = f[1].trim().parse().map_err(|_| bad())?;
            let y: f64 = f[2].trim().parse().map_err(|_| bad())?;
            let r: f64 = f[3].trim().parse().map_err(|_| bad())?;
            center.push(pt(x, y));
            radius.push(r);
        }
        Ok(Packing { center, radius, boundary_tangent: false })
    }
}

fn hyperbolic_angle(x: f64, y: f64, z: f64) -> f64 {
    let num = x * x * (1.0 - y * y) * (1.0 - z * z);
    let den = (1.0 - x * x * y * y) * (1.0 - x * x * z * z);
    2.0 * (num / den).sqrt().min(1.0).asin()
}

fn euclidean_angle(x: f64, y: f64, z: f64) -> f64 {
    2.0 * (y * z / ((x + y) * (x + z))).sqrt().min(1.0).asin()
}

fn flower_angle(geometry: Geometry, label: &[f64], v: VertexId, petals: &[VertexId]) -> f64 {
    let k = petals.len();
    let angle = match geometry {
        Geometry::Euclidean => euclidean_angle,
        Geometry::Hyperbolic => hyperbolic_angle,
    };
    (0..k).map(|i| angle(label[v], label[petals[i]], label[petals[(i + 1) % k]])).sum()
}

/// Angle sum at `v` of the flower described by the labels.
pub fn angle_sum(tri: &PlanarTriangulation, solution: &RadiusSolution, v: VertexId) -> f64 {
    flower_angle(solution.geometry, &solution.label, v, &tri.rotation()[v])
}

pub fn solve_radii(
    tri: &PlanarTriangulation,
    boundary: &BoundaryCondition,
    tol: f64,
    max_iters: usize,
) -> Result<RadiusSolution> {
    if !(tol > 0.0) {
        return Err(Error::Parameter("tolerance must be positive".into()));
    }
    tri.validate()?;
    if tri.num_edges() > 0 && tri.interior_euler()? != 1 {
        return Err(Error::Structural("patch is not simply connected".into()));
    }
    let n = tri.num_vertices();
    let geometry = boundary.geometry();
    let on_boundary = tri.is_boundary_mask();
    let mut label = vec![1.0; n];
    if geometry == Geometry::Hyperbolic {
        label.iter_mut().for_each(|s| *s = 0.5);
    }
    match boundary {
        BoundaryCondition::Fixed(r) => {
            if r.len() != tri.boundary().len() || r.iter().any(|&x| !(x > 0.0)) {
                return Err(Error::Parameter("need one positive radius per boundary vertex".into()));
            }
            for (&b, &x) in tri.boundary().iter().zip(r) {
                label[b] = x;
            }
        }
        BoundaryCondition::Uniform(x) => {
            if !(*x > 0.0) {
                return Err(Error::Parameter("boundary radius must be positive".into()));
            }
            tri.boundary().iter().for_each(|&b| label[b] = *x);
        }
        BoundaryCondition::Hyperbolic(h) => {
            if !(*h > 0.0) {
                return Err(Error::Parameter("hyperbolic boundary radius must be positive".into()));
            }
            let s = (-h).exp();
            tri.boundary().iter().for_each(|&b| label[b] = s);
        }
    }
    let interior: Vec<VertexId> = (0..n).filter(|&v| !on_boundary[v] && !tri.rotation()[v].is_empty()).collect();
    let residual = |label: &[f64]| -> f64 {
        interior
            .iter()
            .map(|&v| (flower_angle(geometry, label, v, &tri.rotation()[v]) - 2.0 * PI).abs())
            .fold(0.0, f64::max)
    };
    let mut worst = residual(&label);
    let mut iterations = 0;
    while worst > tol {
        if iterations == max_iters {
            return Err(Error::NoConvergence { iterations, residual: worst });
        }
        iterations += 1;
        for &v in &interior {
            let petals = &tri.rotation()[v];
            let k = petals.len() as f64;
            let theta = flower_angle(geometry, &label, v, petals);
            let beta = (theta / (2.0 * k)).sin();
            let delta = (PI / k).sin();
            let x = label[v];
            label[v] = match geometry {
                Geometry::Euclidean => {
                    let y = x * beta / (1.0 - beta);
                    y * (1.0 - delta) / delta
                }
                Geometry::Hyperbolic => {
                    let y2 = ((x - beta) / (x * (1.0 - beta * x))).max(0.0);
                    if y2 < 1e-300 {
                        delta
                    } else {
                        let b = 1.0 - y2;
                        let c = delta * y2;
                        // root of c x^2 + b x - delta = 0, written to avoid cancellation
                        2.0 * delta / (b + (b * b + 4.0 * c * delta).sqrt())
                    }
                }
            };
        }
        worst = residual(&label);
    }
    Ok(RadiusSolution { geometry, label, iterations, max_residual: worst })
}

/// Places the circles by propagating across faces from the root. The root
/// goes to the origin and its first neighbor to the positive real axis.
/// Euclidean solutions are laid out directly with the law of cosines.
/// Hyperbolic ones are placed by hyperbolic centers in the Poincare disc and
/// converted to Euclidean circles afterwards.
pub fn layout(tri: &PlanarTriangulation, solution: &RadiusSolution, audit_tol: f64) -> Result<Packing> {
    let n = tri.num_vertices();
    let map = tri.half_edges()?;
    let faces = map.faces();
    let outer = tri.outer_dart(&map).map(|d| faces.face_of[d]);
    let root = tri.root();
    let label = &solution.label;
    let hyperbolic = solution.geometry == Geometry::Hyperbolic;
    if hyperbolic && label[root] == 0.0 {
        return Err(Error::Parameter("root circle cannot be a horocycle".into()));
    }
    let mut pos: Vec<Option<Point>> = vec![None; n];
    pos[root] = Some(pt(0.0, 0.0));
    // distance between centers of tangent circles, seen from a center at the origin
    let separation = |u: usize, w: usize| -> f64 {
        if hyperbolic {
            (1.0 - label[u] * label[w]) / (1.0 + label[u] * label[w])
        } else {
            label[u] + label[w]
        }
    };
    let angle_at = |u: usize, v: usize, w: usize| -> f64 {
        if hyperbolic {
            hyperbolic_angle(label[u], label[v], label[w])
        } else {
            euclidean_angle(label[u], label[v], label[w])
        }
    };
    let mut placed_from: Vec<Option<VertexId>> = vec![None; n];
    let mut done = vec![false; faces.len()];
    let mut queue = VecDeque::new();
    if let Some(&first) = map.darts_at(root).first() {
        let v = map.target(first);
        pos[v] = Some(pt(separation(root, v), 0.0));
        queue.push_back(faces.face_of[first]);
        queue.push_back(faces.face_of[map.twin(first)]);
    }
    while let Some(f) = queue.pop_front() {
        if done[f] || Some(f) == outer {
            continue;
        }
        let cycle = &faces.cycles[f];
        if let Some(&e) = cycle.iter().find(|&&e| pos[map.target(e)].is_none()) {
            // the face is u -> v -> w counterclockwise with w unplaced
            let d = map.face_next(map.face_next(e));
            let (u, v, w) = (map.origin(d), map.target(d), map.target(e));
            if pos[u].is_none() || pos[v].is_none() {
                continue;
            }
            let (pivot, other, turn) = if !hyperbolic || label[u] > 0.0 {
                (u, v, 1.0)
            } else if label[v] > 0.0 {
                (v, u, -1.0)
            } else {
                continue;
            };
            let (cp, co) = (pos[pivot].unwrap(), pos[other].unwrap());
            let alpha = turn * angle_at(pivot, other, w);
            let p = if hyperbolic {
                let f = DiscAutomorphism::to_origin(cp)?;
                let dir = f.apply(co).arg() + alpha;
                f.inverse().apply(Point::from_polar(separation(pivot, w), dir))
            } else {
                cp + Point::from_polar(separation(pivot, w), (co - cp).arg() + alpha)
            };
            pos[w] = Some(p);
            placed_from[w] = Some(pivot);
        }
        done[f] = true;
        for &e in cycle {
            queue.push_back(faces.face_of[map.twin(e)]);
        }
    }
    if let Some(v) = (0..n).find(|&v| pos[v].is_none()) {
        return Err(Error::Structural(format!("vertex {v} unreachable during layout")));
    }
    let pos: Vec<Point> = pos.into_iter().map(Option::unwrap).collect();
    let mut center = vec![pt(0.0, 0.0); n];
    let mut radius = vec![0.0; n];
    for v in 0..n {
        if !hyperbolic {
            center[v] = pos[v];
            radius[v] = label[v];
        } else if label[v] > 0.0 {
            let rho = (1.0 - label[v]) / (1.0 + label[v]);
            let c2 = pos[v].norm_sqr();
            let den = 1.0 - rho * rho * c2;
            center[v] = pos[v] * (1.0 - rho * rho) / den;
            radius[v] = rho * (1.0 - c2) / den;
        }
    }
    if hyperbolic {
        for v in 0..n {
            if label[v] > 0.0 {
                continue;
            }
            let u = placed_from[v]
                .or_else(|| tri.rotation()[v].iter().copied().find(|&u| label[u] > 0.0))
                .ok_or_else(|| Error::Structural(format!("horocycle {v} has no interior neighbor")))?;
            let f = DiscAutomorphism::to_origin(pos[u])?;
            let rho = (1.0 - label[u]) / (1.0 + label[u]);
            let dir = f.apply(pos[v]).arg();
            let local = Circle { center: Point::from_polar((1.0 + rho) / 2.0, dir), radius: (1.0 - rho) / 2.0 };
            let c = f.inverse().apply_circle(local);
            center[v] = c.center;
            radius[v] = c.radius;
        }
    }
    let packing = Packing { center, radius, boundary_tangent: hyperbolic && label.contains(&0.0) };
    let (worst, edge) = tangency_audit(tri, &packing);
    if worst > audit_tol {
        return Err(Error::Layout(edge.0, edge.1, worst));
    }
    Ok(packing)
}

/// Largest `| |c_u - c_v| - (r_u + r_v) |` over edges, with the worst edge.
pub fn tangency_audit(tri: &PlanarTriangulation, p: &Packing) -> (f64, (VertexId, VertexId)) {
    let mut worst = (0.0, (0, 0));
    for (u, nbrs) in tri.rotation().iter().enumerate() {
        for &v in nbrs.iter().filter(|&&v| v > u) {
            let r = ((p.center[u] - p.center[v]).norm() - (p.radius[u] + p.radius[v])).abs();
            if r > worst.0 {
                worst = (r, (u, v));
            }
        }
    }
    worst
}

/// Largest deviation of interior Euclidean angle sums from `2 pi`, computed
/// from the laid-out Euclidean radii alone.
pub fn euclidean_angle_residual(tri: &PlanarTriangulation, p: &Packing) -> f64 {
    let on_boundary = tri.is_boundary_mask();
    (0..tri.num_vertices())
        .filter(|&v| !on_boundary[v] && !tri.rotation()[v].is_empty())
        .map(|v| (flower_angle(Geometry::Euclidean, &p.radius, v, &tri.rotation()[v]) - 2.0 * PI).abs())
        .fold(0.0, f64::max)
}

/// Largest `|center| + radius` over all circles.
pub fn max_extent(p: &Packing) -> f64 {
    p.center.iter().zip(&p.radius).map(|(c, r)| c.norm() + r).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormalizeMode {
    /// Move the hyperbolic center of the root circle to the origin.
    RootAtOrigin,
    /// Hyperbolic translation fixing `e^{i angle}` by parameter `t`.
    FixBoundaryPoint { angle: f64, t: f64 },
    /// Any explicit automorphism.
    Explicit(DiscAutomorphism),
}

/// Applies a disc automorphism to every circle of a packing in the disc.
pub fn mobius_normalize(tri: &PlanarTriangulation, p: &Packing, mode: NormalizeMode) -> Result<(Packing, DiscAutomorphism)> {
    if max_extent(p) > 1.0 + 1e-9 {
        return Err(Error::Parameter("packing does not lie in the unit disc".into()));
    }
    let phi = match mode {
        NormalizeMode::RootAtOrigin => DiscAutomorphism::to_origin(hyperbolic_center(p.circle(tri.root()))?)?,
        NormalizeMode::FixBoundaryPoint { angle, t } => DiscAutomorphism::translation_fixing(angle, t)?,
        NormalizeMode::Explicit(phi) => {
            DiscAutomorphism::new(phi.rotation, phi.a())?;
            phi
        }
    };
    Ok((apply_automorphism(p, &phi), phi))
}

pub fn apply_automorphism(p: &Packing, phi: &DiscAutomorphism) -> Packing {
    let mut out = p.clone();
    for v in 0..p.len() {
        let c = phi.apply_circle(p.circle(v));
        out.center[v] = c.center;
        out.radius[v] = c.radius;
    }
    out
}

/// Circle packing of a patch with horocycle boundary, root circle centered
/// at the origin.
pub fn pack_in_disc(tri: &PlanarTriangulation, tol: f64) -> Result<Packing> {
    let sol = solve_radii(tri, &BoundaryCondition::horocycles(), tol, 1_000_000)?;
    layout(tri, &sol, 1e-8)
}

/// Positions of dual vertices and crossing points in a packing.
#[derive(Debug, Clone, PartialEq)]
pub struct DualEmbedding {
    /// Incenter of the triangle of centers; `None` for the outer face.
    pub face_point: Vec<Option<Point>>,
    /// Tangency point per entry of `DualMap::crossing`.
    pub crossing_point: Vec<Point>,
    /// `[v, white, face, white]` for each corner of an interior vertex,
    /// counterclockwise.
    pub quads: Vec<[Point; 4]>,
}

pub fn dual_embedding(tri: &PlanarTriangulation, p: &Packing, dm: &DualMap) -> Result<DualEmbedding> {
    let map = &dm.primal;
    let mut face_point = vec![None; dm.faces.len()];
    for (f, cycle) in dm.faces.cycles.iter().enumerate() {
        if Some(f) == dm.outer {
            continue;
        }
        let [a, b, c] = [0, 1, 2].map(|i| p.center[map.origin(cycle[i])]);
        if orient(a, b, c) <= 0.0 {
            return Err(Error::Geometry(format!("triangle {f} is degenerate or reversed")));
        }
        face_point[f] = Some(incenter(a, b, c));
    }
    let crossing_point = dm.crossing.iter().map(|&(u, v, _, _)| p.tangency_point(u, v)).collect();
    let on_boundary = tri.is_boundary_mask();
    let mut quads = Vec::new();
    for v in (0..tri.num_vertices()).filter(|&v| !on_boundary[v]) {
        for &d in map.darts_at(v) {
            // corner between d and its counterclockwise successor; the face is left of d
            let e = map.ccw_next(d);
            let f = dm.faces.face_of[d];
            let t = face_point[f].ok_or_else(|| Error::Geometry(format!("vertex {v} touches the outer face")))?;
            quads.push([p.center[v], p.tangency_point(v, map.target(d)), t, p.tangency_point(v, map.target(e))]);
        }
    }
    Ok(DualEmbedding { face_point, crossing_point, quads })
}

/// Number of corner quadrangles that are not strictly convex and
/// counterclockwise. Each one is a kite with right angles at the two
/// tangency points, so convexity is the expected outcome.
pub fn quad_orientation_failures(emb: &DualEmbedding) -> usize {
    emb.quads.iter().filter(|q| !(0..4).all(|i| orient(q[i], q[(i + 1) % 4], q[(i + 2) % 4]) > 0.0)).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{build_regular_ball, dual};

    #[test]
    fn seven_flower_center_radius() {
        let t = build_regular_ball(7, 1).unwrap();
        let sol = solve_radii(&t, &BoundaryCondition::Uniform(1.0), 1e-13, 10_000).unwrap();
        let expected = 1.0 / (PI / 7.0).sin() - 1.0;
        assert!((sol.label[0] - expected).abs() < 1e-12);
        let p = layout(&t, &sol, 1e-10).unwrap();
        for k in 0..7 {
            let petal = t.rotation()[0][k];
            let a = p.center[petal].arg() - 2.0 * PI * k as f64 / 7.0;
            assert!(crate::geometry::wrap_angle(a).abs() < 1e-10);
        }
    }

    #[test]
    fn lone_triangle_has_no_interior_vertex() {
        let t = PlanarTriangulation::from_parts(vec![vec![1, 2], vec![2, 0], vec![0, 1]], 0, vec![0, 1, 2], 7, 0, None)
            .unwrap();
        let sol = solve_radii(&t, &BoundaryCondition::Uniform(1.0), 1e-12, 10).unwrap();
        assert_eq!(sol.iterations, 0);
        let p = layout(&t, &sol, 1e-12).unwrap();
        assert!(((p.center[1] - p.center[0]).norm() - 2.0).abs() < 1e-14);
        assert!((p.center[2] - pt(1.0, 3f64.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn hyperbolic_ball_packs_into_disc() {
        let t = build_regular_ball(7, 3).unwrap();
        let sol = solve_radii(&t, &BoundaryCondition::horocycles(), 1e-12, 100_000).unwrap();
        assert!(sol.max_residual <= 1e-12);
        let p = layout(&t, &sol, 1e-9).unwrap();
        assert!(euclidean_angle_residual(&t, &p) < 1e-9);
        assert!(max_extent(&p) <= 1.0 + 1e-12);
        for &b in t.boundary() {
            assert!((p.center[b].norm() + p.radius[b] - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn non_convergence_is_reported() {
        let t = build_regular_ball(7, 3).unwrap();
        let err = solve_radii(&t, &BoundaryCondition::horocycles(), 1e-12, 2).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { iterations: 2, .. }));
    }

    #[test]
    fn layer_max_radius_decays() {
        let t = build_regular_ball(7, 4).unwrap();
        let p = pack_in_disc(&t, 1e-11).unwrap();
        let dist = t.bfs_distances(0).unwrap();
        let mut layer_max = vec![0.0f64; 5];
        for v in 0..t.num_vertices() {
            layer_max[dist[v]] = layer_max[dist[v]].max(p.radius[v]);
        }
        assert!(layer_max.windows(2).all(|w| w[1] < w[0]), "{layer_max:?}");
    }

    #[test]
    fn automorphism_preserves_tangency() {
        let t = build_regular_ball(7, 2).unwrap();
        let p = pack_in_disc(&t, 1e-12).unwrap();
        let (q, phi) =
            mobius_normalize(&t, &p, NormalizeMode::Explicit(DiscAutomorphism::new(0.0, p.center[5]).unwrap())).unwrap();
        assert!(phi.apply(p.center[5]).norm() < 1e-14);
        assert!(tangency_audit(&t, &q).0 < 1e-8);
        let (r, _) = mobius_normalize(&t, &q, NormalizeMode::RootAtOrigin).unwrap();
        assert!(r.center[0].norm() < 1e-12);
        assert!(tangency_audit(&t, &r).0 < 1e-8);
        let (same, id) = mobius_normalize(&t, &p, NormalizeMode::Explicit(DiscAutomorphism::identity())).unwrap();
        assert!(id.is_identity());
        assert_eq!(same, p);
    }

    #[test]
    fn wheel_quads_are_convex() {
        let t = build_regular_ball(7, 1).unwrap();
        let p = pack_in_disc(&t, 1e-12).unwrap();
        let dm = dual(&t).unwrap();
        let emb = dual_embedding(&t, &p, &dm).unwrap();
        assert_eq!(emb.quads.len(), 7);
        assert_eq!(quad_orientation_failures(&emb), 0);
        let (u, v, _, _) = dm.crossing[0];
        let unit = (p.center[v] - p.center[u]) / (p.center[v] - p.center[u]).norm();
        assert!((emb.crossing_point[0] - (p.center[u] + unit * p.radius[u])).norm() < 1e-15);
    }

    #[test]
    fn symmetric_interstice_incenter() {
        let t = PlanarTriangulation::from_parts(vec![vec![1, 2], vec![2, 0], vec![0, 1]], 0, vec![0, 1, 2], 7, 0, None)
            .unwrap();
        let sol = solve_radii(&t, &BoundaryCondition::Uniform(1.0), 1e-12, 10).unwrap();
        let p = layout(&t, &sol, 1e-12).unwrap();
        let dm = dual(&t).unwrap();
        let emb = dual_embedding(&t, &p, &dm).unwrap();
        let centroid = (p.center[0] + p.center[1] + p.center[2]) / 3.0;
        let inner = emb.face_point.iter().flatten().next().unwrap();
        assert!((inner - centroid).norm() < 1e-14);
    }

    #[test]
    fn csv_round_trip() {
        let t = build_regular_ball(7, 1).unwrap();
        let p = pack_in_disc(&t, 1e-12).unwrap();
        let q = Packing::from_csv(&p.to_csv()).unwrap();
        assert_eq!(q.center, p.center);
        assert_eq!(q.radius, p.radius);
    }
}
