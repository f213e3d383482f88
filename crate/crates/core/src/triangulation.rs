//! Finite patches of regular hyperbolic triangulations.
//!
//! A [`PlanarTriangulation`] is a rotation system: for every vertex the
//! counterclockwise cyclic list of its neighbors. Boundary vertices keep a
//! cyclic list as well; the outer face sits between the last and first
//! entries. The boundary cycle is stored counterclockwise, so the interior is
//! on the left of `boundary[i] -> boundary[i + 1]`.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::map::{Faces, HalfEdgeMap};

pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarTriangulation {
    rotation: Vec<Vec<VertexId>>,
    root: VertexId,
    boundary: Vec<VertexId>,
    degree: usize,
    radius: usize,
    labels: Vec<usize>,
}

/// One step of an exhaustion: a hole-free ball and the vertices that had to
/// be added to make it simply connected.
#[derive(Debug, Clone)]
pub struct ExhaustionStep {
    pub radius: usize,
    pub map: PlanarTriangulation,
    pub filled: Vec<VertexId>,
}

/// Dual of a finite map: one dual vertex per face, the outer face included.
#[derive(Debug, Clone)]
pub struct DualMap {
    pub primal: HalfEdgeMap,
    pub faces: Faces,
    pub dual: HalfEdgeMap,
    /// Dual vertex standing for the outer face.
    pub outer: Option<usize>,
    /// `(primal u, primal v, dual f, dual g)` per edge; dual dart `f -> g`
    /// crosses `u -> v` from right to left.
    pub crossing: Vec<(VertexId, VertexId, usize, usize)>,
}

pub fn dual(tri: &PlanarTriangulation) -> Result<DualMap> {
    let primal = tri.half_edges()?;
    let faces = primal.faces();
    let dual = primal.dual(&faces)?;
    let outer = tri.outer_dart(&primal).map(|d| faces.face_of[d]);
    let crossing = (0..primal.num_darts())
        .filter(|&d| d < primal.twin(d))
        .map(|d| (primal.origin(d), primal.target(d), dual.origin(d), dual.target(d)))
        .collect();
    Ok(DualMap { primal, faces, dual, outer, crossing })
}

/// Builds the combinatorial ball of the given radius around a vertex of the
/// `degree`-regular triangulation of the hyperbolic plane.
///
/// The ball is grown layer by layer. A vertex on the current outer layer
/// with `j` neighbors on the previous layer still needs `degree - j - 2`
/// outward neighbors; the first and last of these are shared with its two
/// neighbors along the layer.
pub fn build_regular_ball(degree: usize, radius: usize) -> Result<PlanarTriangulation> {
    if degree < 7 {
        return Err(Error::Amenable(degree));
    }
    let mut rotation: Vec<Vec<VertexId>> = vec![Vec::new()];
    let mut layer: Vec<VertexId> = vec![0];
    if radius == 0 {
        return Ok(PlanarTriangulation::from_construction(rotation, vec![0], degree, 0));
    }
    layer = (1..=degree).collect();
    rotation[0] = layer.clone();
    for i in 0..degree {
        let next = layer[(i + 1) % degree];
        let prev = layer[(i + degree - 1) % degree];
        rotation.push(vec![next, 0, prev]);
    }
    for _ in 1..radius {
        let m = layer.len();
        // apex[i] is the new vertex on the triangle outside edge (layer[i], layer[i+1])
        let mut next_layer = Vec::new();
        let mut apex = vec![usize::MAX; m];
        let mut exclusive: Vec<Vec<VertexId>> = vec![Vec::new(); m];
        let mut fresh = rotation.len();
        let take = |fresh: &mut usize| {
            let v = *fresh;
            *fresh += 1;
            v
        };
        // apex of the closing edge (layer[m-1], layer[0]) comes first in the new cycle
        apex[m - 1] = take(&mut fresh);
        for i in 0..m {
            let v = layer[i];
            let inner = rotation[v].len() - 2;
            let count = degree - inner - 4;
            exclusive[i] = (0..count).map(|_| take(&mut fresh)).collect();
            if i + 1 < m {
                apex[i] = take(&mut fresh);
            }
        }
        for i in 0..m {
            let before = apex[(i + m - 1) % m];
            next_layer.push(before);
            next_layer.extend_from_slice(&exclusive[i]);
        }
        rotation.resize(fresh, Vec::new());
        let k = next_layer.len();
        let position: std::collections::HashMap<VertexId, usize> =
            next_layer.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        for i in 0..m {
            let v = layer[i];
            let before = apex[(i + m - 1) % m];
            let after = apex[i];
            let mut outer = vec![before];
            outer.extend_from_slice(&exclusive[i]);
            outer.push(after);
            for &x in &exclusive[i] {
                let p = position[&x];
                rotation[x] = vec![next_layer[(p + 1) % k], v, next_layer[(p + k - 1) % k]];
            }
            let p = position[&after];
            rotation[after] =
                vec![next_layer[(p + 1) % k], layer[(i + 1) % m], v, next_layer[(p + k - 1) % k]];
            rotation[v].extend(outer);
        }
        layer = next_layer;
    }
    Ok(PlanarTriangulation::from_construction(rotation, layer, degree, radius))
}

impl PlanarTriangulation {
    fn from_construction(rotation: Vec<Vec<VertexId>>, boundary: Vec<VertexId>, degree: usize, radius: usize) -> Self {
        let labels = (0..rotation.len()).collect();
        Self { rotation, root: 0, boundary, degree, radius, labels }
    }

    /// Assembles and validates a triangulation from raw parts.
    pub fn from_parts(
        rotation: Vec<Vec<VertexId>>,
        root: VertexId,
        boundary: Vec<VertexId>,
        degree: usize,
        radius: usize,
        labels: Option<Vec<usize>>,
    ) -> Result<Self> {
        let n = rotation.len();
        let labels = labels.unwrap_or_else(|| (0..n).collect());
        if labels.len() != n {
            return Err(Error::Structural("label count does not match vertex count".into()));
        }
        if root >= n {
            return Err(Error::Lookup(root));
        }
        if let Some(&b) = boundary.iter().find(|&&b| b >= n) {
            return Err(Error::Lookup(b));
        }
        let tri = Self { rotation, root, boundary, degree, radius, labels };
        tri.validate()?;
        Ok(tri)
    }

    pub fn num_vertices(&self) -> usize {
        self.rotation.len()
    }

    pub fn num_edges(&self) -> usize {
        self.rotation.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn rotation(&self) -> &[Vec<VertexId>] {
        &self.rotation
    }

    pub fn neighbors(&self, v: VertexId) -> Result<&[VertexId]> {
        self.rotation.get(v).map(Vec::as_slice).ok_or(Error::Lookup(v))
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn boundary(&self) -> &[VertexId] {
        &self.boundary
    }

    pub fn degree_bound(&self) -> usize {
        self.degree
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Identifier of each vertex in the map this one was cut from.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn is_boundary_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.num_vertices()];
        for &b in &self.boundary {
            mask[b] = true;
        }
        mask
    }

    pub fn interior_vertices(&self) -> Vec<VertexId> {
        let mask = self.is_boundary_mask();
        (0..self.num_vertices()).filter(|&v| !mask[v]).collect()
    }

    pub fn half_edges(&self) -> Result<HalfEdgeMap> {
        HalfEdgeMap::from_rotation(&self.rotation)
    }

    /// Dart of the outer face, if the map has any edge. The outer face runs
    /// clockwise, so it contains `boundary[1] -> boundary[0]`.
    pub fn outer_dart(&self, map: &HalfEdgeMap) -> Option<usize> {
        if self.boundary.len() < 2 {
            return None;
        }
        map.find_dart(self.boundary[1], self.boundary[0])
    }

    /// Interior faces as counterclockwise vertex triples.
    pub fn triangles(&self) -> Result<Vec<[VertexId; 3]>> {
        let map = self.half_edges()?;
        let faces = map.faces();
        let outer = self.outer_dart(&map).map(|d| faces.face_of[d]);
        let mut out = Vec::new();
        for (f, cycle) in faces.cycles.iter().enumerate() {
            if Some(f) == outer {
                continue;
            }
            if cycle.len() != 3 {
                return Err(Error::Structural(format!("interior face {f} has {} sides", cycle.len())));
            }
            out.push([map.origin(cycle[0]), map.origin(cycle[1]), map.origin(cycle[2])]);
        }
        Ok(out)
    }

    /// Checks dart tracing, triangular interior faces, the Euler formula and
    /// the degree bound on interior vertices.
    pub fn validate(&self) -> Result<()> {
        let map = self.half_edges()?;
        if map.num_darts() == 0 {
            return if self.num_vertices() == 1 {
                Ok(())
            } else {
                Err(Error::Structural("edgeless map with several vertices".into()))
            };
        }
        let faces = map.faces();
        let outer = self
            .outer_dart(&map)
            .map(|d| faces.face_of[d])
            .ok_or_else(|| Error::Structural("boundary cycle is not an outer face".into()))?;
        let outer_len = faces.cycles[outer].len();
        if outer_len != self.boundary.len() {
            return Err(Error::Structural(format!(
                "outer face has {outer_len} sides but boundary lists {}",
                self.boundary.len()
            )));
        }
        for (f, cycle) in faces.cycles.iter().enumerate() {
            if f != outer && cycle.len() != 3 {
                return Err(Error::Structural(format!("interior face {f} has {} sides", cycle.len())));
            }
        }
        if map.euler_characteristic() != 2 {
            return Err(Error::Structural(format!(
                "Euler characteristic {} != 2",
                map.euler_characteristic()
            )));
        }
        let mask = self.is_boundary_mask();
        for v in 0..self.num_vertices() {
            if !mask[v] && self.rotation[v].len() > self.degree {
                return Err(Error::Structural(format!(
                    "interior vertex {v} has degree {} above the bound {}",
                    self.rotation[v].len(),
                    self.degree
                )));
            }
        }
        Ok(())
    }

    /// V - E + (number of interior faces); equals 1 for a disc.
    pub fn interior_euler(&self) -> Result<i64> {
        let f = self.triangles()?.len() as i64;
        Ok(self.num_vertices() as i64 - self.num_edges() as i64 + f)
    }

    pub fn bfs_distances(&self, source: VertexId) -> Result<Vec<usize>> {
        if source >= self.num_vertices() {
            return Err(Error::Lookup(source));
        }
        let mut dist = vec![usize::MAX; self.num_vertices()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.rotation[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        Ok(dist)
    }

    pub fn graph_distance(&self, u: VertexId, v: VertexId) -> Result<usize> {
        if v >= self.num_vertices() {
            return Err(Error::Lookup(v));
        }
        let d = self.bfs_distances(u)?[v];
        if d == usize::MAX {
            Err(Error::Structural(format!("{v} unreachable from {u}")))
        } else {
            Ok(d)
        }
    }

    /// Breadth-first ball with enclosed holes filled in.
    pub fn ball(&self, center: VertexId, r: usize) -> Result<ExhaustionStep> {
        let dist = self.bfs_distances(center)?;
        let mut keep: Vec<bool> = dist.iter().map(|&d| d <= r).collect();
        let filled = self.fill_holes(&mut keep);
        let mut map = self.induced(&keep, center)?;
        map.radius = r;
        let filled = filled.into_iter().map(|v| keep[..v].iter().filter(|&&k| k).count()).collect();
        Ok(ExhaustionStep { radius: r, map, filled })
    }

    /// Nested balls around the root.
    pub fn exhaustion(&self, radii: &[usize]) -> Result<Vec<ExhaustionStep>> {
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter("exhaustion radii must be strictly increasing".into()));
        }
        if let Some(&r) = radii.iter().find(|&&r| r > self.radius) {
            return Err(Error::Parameter(format!(
                "radius {r} exceeds the construction radius {}",
                self.radius
            )));
        }
        let steps = radii.iter().map(|&r| self.ball(self.root, r)).collect::<Result<Vec<_>>>()?;
        for step in &steps {
            if step.map.num_edges() > 0 && step.map.interior_euler()? != 1 {
                return Err(Error::Structural(format!("ball of radius {} is not a disc", step.radius)));
            }
        }
        Ok(steps)
    }

    /// Adds every connected group of excluded vertices that does not reach
    /// the boundary of this map. Returns the added vertices.
    fn fill_holes(&self, keep: &mut [bool]) -> Vec<VertexId> {
        let on_boundary = self.is_boundary_mask();
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut filled = Vec::new();
        for s in 0..n {
            if keep[s] || seen[s] {
                continue;
            }
            let mut component = vec![s];
            let mut escapes = on_boundary[s];
            seen[s] = true;
            let mut i = 0;
            while i < component.len() {
                let u = component[i];
                i += 1;
                for &v in &self.rotation[u] {
                    if !keep[v] && !seen[v] {
                        seen[v] = true;
                        escapes |= on_boundary[v];
                        component.push(v);
                    }
                }
            }
            if !escapes {
                filled.extend_from_slice(&component);
            }
        }
        for &v in &filled {
            keep[v] = true;
        }
        filled.sort_unstable();
        filled
    }

    /// Sub-map induced on `keep`, relabeled densely in increasing id order.
    pub fn induced(&self, keep: &[bool], root: VertexId) -> Result<PlanarTriangulation> {
        if !keep.get(root).copied().unwrap_or(false) {
            return Err(Error::Lookup(root));
        }
        let mut new_id = vec![usize::MAX; self.num_vertices()];
        let mut labels = Vec::new();
        for v in 0..self.num_vertices() {
            if keep[v] {
                new_id[v] = labels.len();
                labels.push(self.labels[v]);
            }
        }
        let rotation: Vec<Vec<VertexId>> = (0..self.num_vertices())
            .filter(|&v| keep[v])
            .map(|v| self.rotation[v].iter().filter(|&&u| keep[u]).map(|&u| new_id[u]).collect())
            .collect();
        let n = rotation.len();
        let boundary = if n == 1 {
            vec![0]
        } else {
            let map = HalfEdgeMap::from_rotation(&rotation)?;
            let faces = map.faces();
            let parent = self.half_edges()?;
            let parent_faces = parent.faces();
            let parent_outer = self.outer_dart(&parent).map(|d| parent_faces.face_of[d]);
            let old_id: Vec<usize> = (0..self.num_vertices()).filter(|&v| keep[v]).collect();
            let mut outer = Vec::new();
            for (f, cycle) in faces.cycles.iter().enumerate() {
                let inherited = cycle.len() == 3 && {
                    let d = cycle[0];
                    let pd = parent
                        .find_dart(old_id[map.origin(d)], old_id[map.target(d)])
                        .expect("induced dart exists in parent");
                    let pf = parent_faces.face_of[pd];
                    Some(pf) != parent_outer && parent_faces.cycles[pf].len() == 3
                };
                if !inherited {
                    outer.push(f);
                }
            }
            if outer.len() != 1 {
                return Err(Error::Structural(format!(
                    "induced sub-map has {} non-triangular faces",
                    outer.len()
                )));
            }
            let mut cycle: Vec<VertexId> = faces.cycles[outer[0]].iter().map(|&d| map.origin(d)).collect();
            cycle.reverse();
            // start at the smallest label for determinism
            let start = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap_or(0);
            cycle.rotate_left(start);
            // boundary[1] -> boundary[0] must be an outer dart: reversing the
            // clockwise trace gives counterclockwise order
            cycle
        };
        let tri = PlanarTriangulation {
            rotation,
            root: new_id[root],
            boundary,
            degree: self.degree,
            radius: self.radius,
            labels,
        };
        tri.validate()?;
        Ok(tri)
    }

    /// Line-oriented text form: a header, then `vertex_id: n1 n2 ... nk`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let join = |xs: &[usize]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(s, "degree {}", self.degree);
        let _ = writeln!(s, "radius {}", self.radius);
        let _ = writeln!(s, "root {}", self.root);
        let _ = writeln!(s, "boundary {}", join(&self.boundary));
        if self.labels.iter().enumerate().any(|(i, &l)| i != l) {
            let _ = writeln!(s, "labels {}", join(&self.labels));
        }
        for (v, nbrs) in self.rotation.iter().enumerate() {
            if nbrs.is_empty() {
                let _ = writeln!(s, "{v}:");
            } else {
                let _ = writeln!(s, "{v}: {}", join(nbrs));
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut degree = None;
        let mut radius = None;
        let mut root = None;
        let mut boundary = None;
        let mut labels = None;
        let mut rotation: Vec<Vec<VertexId>> = Vec::new();
        let parse_list = |line: usize, s: &str| -> Result<Vec<usize>> {
            s.split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| Error::Parse { line, msg: e.to_string() }))
                .collect()
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            if let Some((head, rest)) = raw.split_once(':') {
                let v: usize = head.trim().parse().map_err(|_| Error::Parse { line, msg: format!("bad vertex id `{head}`") })?;
                if v != rotation.len() {
                    return Err(Error::Parse { line, msg: format!("vertex {v} out of order") });
                }
                rotation.push(parse_list(line, rest)?);
                continue;
            }
            let (key, rest) = raw.split_once(' ').unwrap_or((raw, ""));
            let single = |line: usize| -> Result<usize> {
                rest.trim().parse().map_err(|_| Error::Parse { line, msg: format!("bad value for {key}") })
            };
            match key {
                "degree" => degree = Some(single(line)?),
                "radius" => radius = Some(single(line)?),
                "root" => root = Some(single(line)?),
                "boundary" => boundary = Some(parse_list(line, rest)?),
                "labels" => labels = Some(parse_list(line, rest)?),
                _ => return Err(Error::Parse { line, msg: format!("unknown header `{key}`") }),
            }
        }
        let missing = |k: &str| Error::Parse { line: 0, msg: format!("missing header `{k}`") };
        Self::from_parts(
            rotation,
            root.ok_or_else(|| missing("root"))?,
            boundary.ok_or_else(|| missing("boundary"))?,
            degree.ok_or_else(|| missing("degree"))?,
            radius.ok_or_else(|| missing("radius"))?,
            labels,
        )
    }

    /// Number of edges leaving a vertex set, relative to the sum of degrees
    /// inside it, measured in the ambient map.
    pub fn edge_boundary_ratio(&self, set: &[VertexId]) -> f64 {
        let inside: HashSet<VertexId> = set.iter().copied().collect();
        let mut leaving = 0usize;
        let mut volume = 0usize;
        for &v in set {
            volume += self.rotation[v].len();
            leaving += self.rotation[v].iter().filter(|u| !inside.contains(u)).count();
        }
        leaving as f64 / volume.max(1) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Layer sizes of the `d`-regular triangulation: a layer vertex has
    /// either one (`a`) or two (`b`) neighbors on the previous layer.
    fn layer_recurrence(d: usize, radius: usize) -> Vec<usize> {
        let mut sizes = vec![1];
        if radius == 0 {
            return sizes;
        }
        let (mut a, mut b) = (d, 0);
        sizes.push(a + b);
        for _ in 1..radius {
            let na = a * (d - 5) + b * (d - 6);
            let nb = a + b;
            a = na;
            b = nb;
            sizes.push(a + b);
        }
        sizes
    }

    #[test]
    fn degree_six_is_rejected() {
        assert_eq!(build_regular_ball(6, 2).unwrap_err(), Error::Amenable(6));
    }

    #[test]
    fn radius_zero_is_a_single_vertex() {
        let t = build_regular_ball(7, 0).unwrap();
        assert_eq!(t.num_vertices(), 1);
        assert_eq!(t.num_edges(), 0);
    }

    #[test]
    fn wheel_counts() {
        let t = build_regular_ball(7, 1).unwrap();
        let map = t.half_edges().unwrap();
        assert_eq!(t.num_vertices(), 8);
        assert_eq!(t.num_edges(), 14);
        assert_eq!(map.faces().len(), 8);
        assert_eq!(map.euler_characteristic(), 2);
    }

    #[test]
    fn layer_sizes_match_recurrence() {
        for d in 7..=9 {
            let t = build_regular_ball(d, 3).unwrap();
            let dist = t.bfs_distances(0).unwrap();
            let expected = layer_recurrence(d, 3);
            for (r, &count) in expected.iter().enumerate() {
                assert_eq!(dist.iter().filter(|&&x| x == r).count(), count, "d={d} r={r}");
            }
        }
    }

    #[test]
    fn golden_ball_sizes() {
        let golden = [1usize, 8, 29, 85, 232, 617, 1625];
        let rec: Vec<usize> = layer_recurrence(7, 6)
            .iter()
            .scan(0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect();
        assert_eq!(rec, golden);
        for r in 0..=6 {
            assert_eq!(build_regular_ball(7, r).unwrap().num_vertices(), golden[r]);
        }
    }

    #[test]
    fn interior_vertices_have_full_degree() {
        let t = build_regular_ball(8, 4).unwrap();
        for v in t.interior_vertices() {
            assert_eq!(t.rotation()[v].len(), 8);
        }
        t.validate().unwrap();
    }

    #[test]
    fn construction_is_deterministic() {
        assert_eq!(build_regular_ball(7, 4).unwrap(), build_regular_ball(7, 4).unwrap());
    }

    #[test]
    fn dual_of_dual_recovers_the_map() {
        let t = build_regular_ball(7, 2).unwrap();
        let map = t.half_edges().unwrap();
        let dual = map.dual(&map.faces()).unwrap();
        let back = dual.dual(&dual.faces()).unwrap();
        assert!(back.is_isomorphic(&map));
    }

    #[test]
    fn dual_of_wheel() {
        let t = build_regular_ball(7, 1).unwrap();
        let d = dual(&t).unwrap();
        assert_eq!(d.dual.num_vertices(), 8);
        assert_eq!(d.crossing.len(), 14);
        assert_eq!(d.dual.degree(d.outer.unwrap()), 7);
        let mut seen: Vec<_> = d.crossing.iter().map(|c| (c.0.min(c.1), c.0.max(c.1))).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 14);
    }

    #[test]
    fn ball_of_radius_zero() {
        let t = build_regular_ball(7, 3).unwrap();
        let b = t.ball(0, 0).unwrap();
        assert_eq!(b.map.num_vertices(), 1);
        assert_eq!(t.graph_distance(0, 0).unwrap(), 0);
    }

    #[test]
    fn exhaustion_is_nested_and_simply_connected() {
        let t = build_regular_ball(7, 3).unwrap();
        let steps = t.exhaustion(&[1, 2]).unwrap();
        assert_eq!(steps[0].map.num_vertices(), 8);
        assert_eq!(steps[1].map.num_vertices(), 29);
        for s in &steps {
            assert_eq!(s.map.interior_euler().unwrap(), 1);
            assert!(s.filled.is_empty());
        }
        assert!(steps[0].map.labels().iter().all(|l| steps[1].map.labels().contains(l)));
    }

    #[test]
    fn exhaustion_rejects_decreasing_radii() {
        let t = build_regular_ball(7, 3).unwrap();
        assert!(matches!(t.exhaustion(&[2, 1]), Err(Error::Parameter(_))));
    }

    #[test]
    fn off_center_balls_are_discs() {
        let t = build_regular_ball(7, 4).unwrap();
        for center in [3, 12, 40] {
            let b = t.ball(center, 2).unwrap();
            assert_eq!(b.map.interior_euler().unwrap(), 1);
        }
    }

    #[test]
    fn unknown_vertex_lookup_fails() {
        let t = build_regular_ball(7, 1).unwrap();
        assert_eq!(t.ball(99, 1).unwrap_err(), Error::Lookup(99));
    }

    #[test]
    fn text_round_trip() {
        let t = build_regular_ball(7, 3).unwrap();
        assert_eq!(PlanarTriangulation::from_text(&t.to_text()).unwrap(), t);
        let sub = t.ball(5, 1).unwrap().map;
        assert_eq!(PlanarTriangulation::from_text(&sub.to_text()).unwrap(), sub);
    }

    #[test]
    fn growth_is_exponential_and_cheeger_ratio_positive() {
        let t = build_regular_ball(7, 6).unwrap();
        let sizes: Vec<usize> = (0..=6).map(|r| t.ball(0, r).unwrap().map.num_vertices()).collect();
        for w in sizes.windows(2).skip(1) {
            assert!(w[1] as f64 / w[0] as f64 >= 2.0);
        }
        let dist = t.bfs_distances(0).unwrap();
        for r in 1..6 {
            let set: Vec<usize> = (0..t.num_vertices()).filter(|&v| dist[v] <= r).collect();
            assert!(t.edge_boundary_ratio(&set) > 0.2, "r={r}");
        }
    }
}
