//! Temperleyan superposition of a triangulation patch and its dual.
//!
//! For a finite patch the primal graph is the wired one: all boundary
//! vertices of the patch are identified into a single vertex `∂`, and its
//! edges are the edges of the patch that are not on the boundary cycle. The
//! dual graph has one vertex per triangle, joined across those same edges.
//! Every such edge carries one white vertex, so boundary-cycle edges carry
//! none. Black vertices are the interior vertices, `∂` and the triangles;
//! Euler's formula gives `black = white + 2`.
//!
//! The extended graph replaces `∂` by a cycle `c_0 … c_{k-1}`, one vertex
//! per edge at `∂`, listed counterclockwise around the patch. A white `z_a`
//! sits on the cycle edge `c_a c_{a+1}` and is joined to the triangle `t_a`
//! lying between the `∂`-edges `a` and `a + 1`. Choosing the removed black
//! `𝔟 = t_j` forces the dimers `c_a z_a` for `a != j` and `𝔢 = 𝔟 z_j`. The
//! vertex `c_j` is left unmatched; it is the root of the wired tree and the
//! black corner of the base face `𝔣`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{signed_area, Point};
use crate::graph::Graph;
use crate::map::HalfEdgeMap;
use crate::packing::{dual_embedding, Packing};
use crate::triangulation::{DualMap, PlanarTriangulation, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    /// Interior vertex of the patch.
    Primal(VertexId),
    /// The identified boundary `∂` (superposition only).
    Wired,
    /// Triangle, by index into the triangle list.
    Dual(usize),
    /// White vertex on an interior edge, by edge index.
    Crossing(usize),
    /// Vertex `c_a` of the boundary cycle.
    Cycle(usize),
    /// White vertex `z_a` on the boundary cycle.
    CycleWhite(usize),
}

impl Node {
    pub fn is_black(self) -> bool {
        matches!(self, Node::Primal(_) | Node::Wired | Node::Dual(_) | Node::Cycle(_))
    }

    fn tag(self) -> &'static str {
        match self {
            Node::Primal(_) => "black-primal",
            Node::Wired => "black-wired",
            Node::Dual(_) => "black-dual",
            Node::Crossing(_) => "white",
            Node::Cycle(_) => "black-cycle",
            Node::CycleWhite(_) => "white-cycle",
        }
    }
}

/// One edge at `∂`, in counterclockwise order around the patch.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Slot {
    /// Crossing index of the edge `x - u`.
    crossing: usize,
    /// Boundary endpoint.
    boundary_vertex: VertexId,
    /// Triangle between this edge and the next one.
    corner: usize,
    c_pos: Point,
    z_pos: Point,
}

/// The superposition `G` of the wired primal and free dual graphs.
#[derive(Debug, Clone)]
pub struct TemperleyanGraph {
    pub nodes: Vec<Node>,
    pub adj: Vec<Vec<usize>>,
    /// `None` for `∂`, which has no position of its own.
    pub pos: Vec<Option<Point>>,
    /// `[black, white, black, white]` per face; the first black is a
    /// primal vertex or `∂`, the second a triangle.
    pub quads: Vec<[usize; 4]>,
    pub removed: Vec<bool>,
    /// Triangles of the patch, counterclockwise.
    pub triangles: Vec<[VertexId; 3]>,
    /// Interior edges `(u, v)` carrying the crossing whites.
    pub edges: Vec<(VertexId, VertexId)>,
    num_primal: usize,
    slots: Vec<Slot>,
    primal_node: Vec<Option<usize>>,
}

impl TemperleyanGraph {
    pub fn num_interior(&self) -> usize {
        self.num_primal
    }

    pub fn dual_node(&self, triangle: usize) -> usize {
        self.num_primal + triangle
    }

    pub fn crossing_node(&self, edge: usize) -> usize {
        self.num_primal + self.triangles.len() + edge
    }

    pub fn wired_node(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Node of a patch vertex; `∂` for boundary vertices.
    pub fn node_of_vertex(&self, v: VertexId) -> usize {
        self.primal_node[v].unwrap_or(self.wired_node())
    }

    /// Triangles touching the boundary of the patch, i.e. the boundary
    /// cycle of the dual graph, as node ids in counterclockwise order.
    pub fn boundary_dual(&self) -> Vec<usize> {
        self.slots.iter().map(|s| self.dual_node(s.corner)).collect()
    }

    pub fn count_colors(&self) -> (usize, usize) {
        let mut black = 0;
        let mut white = 0;
        for (i, n) in self.nodes.iter().enumerate() {
            if self.removed[i] {
                continue;
            }
            if n.is_black() {
                black += 1;
            } else {
                white += 1;
            }
        }
        (black, white)
    }
}

/// Builds `G` from a patch, its dual and a packing of the patch.
pub fn superimpose(tri: &PlanarTriangulation, dm: &DualMap, packing: &Packing) -> Result<TemperleyanGraph> {
    let n = tri.num_vertices();
    if packing.len() != n {
        return Err(Error::Structural("packing and patch sizes differ".into()));
    }
    let on_boundary = tri.is_boundary_mask();
    let emb = dual_embedding(tri, packing, dm)?;
    let map = &dm.primal;

    let mut face_index = vec![usize::MAX; dm.faces.len()];
    let mut triangles = Vec::new();
    let mut tri_pos = Vec::new();
    for (f, cycle) in dm.faces.cycles.iter().enumerate() {
        if Some(f) == dm.outer {
            continue;
        }
        face_index[f] = triangles.len();
        triangles.push([0, 1, 2].map(|i| map.origin(cycle[i])));
        tri_pos.push(emb.face_point[f].expect("bounded face"));
    }

    let mut primal_node = vec![None; n];
    let mut nodes = Vec::new();
    let mut pos = Vec::new();
    for v in (0..n).filter(|&v| !on_boundary[v]) {
        primal_node[v] = Some(nodes.len());
        nodes.push(Node::Primal(v));
        pos.push(Some(packing.center[v]));
    }
    let num_primal = nodes.len();
    for (t, &p) in tri_pos.iter().enumerate() {
        nodes.push(Node::Dual(t));
        pos.push(Some(p));
    }

    let boundary = tri.boundary();
    let mut edges = Vec::new();
    let mut edge_faces = Vec::new();
    let mut edge_index: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    for (i, &(u, v, f, g)) in dm.crossing.iter().enumerate() {
        if Some(f) == dm.outer || Some(g) == dm.outer {
            continue;
        }
        // boundary-cycle edges border the outer face, so this is a chord
        if on_boundary[u] && on_boundary[v] {
            return Err(Error::Structural(format!(
                "edge ({u}, {v}) joins two boundary vertices through the interior; the wired graph would get a loop"
            )));
        }
        edge_index.insert((u.min(v), u.max(v)), edges.len());
        edges.push((u, v));
        edge_faces.push((face_index[f], face_index[g]));
        nodes.push(Node::Crossing(edges.len() - 1));
        pos.push(Some(emb.crossing_point[i]));
    }
    nodes.push(Node::Wired);
    pos.push(None);
    let wired = nodes.len() - 1;
    let node_of = |v: VertexId| primal_node[v].unwrap_or(wired);

    let mut adj = vec![Vec::new(); nodes.len()];
    for (e, (&(u, v), &(f, g))) in edges.iter().zip(&edge_faces).enumerate() {
        let w = num_primal + triangles.len() + e;
        for b in [node_of(u), num_primal + f, node_of(v), num_primal + g] {
            adj[w].push(b);
            adj[b].push(w);
        }
    }

    // corners at interior vertices
    let mut quads = Vec::new();
    for v in (0..n).filter(|&v| !on_boundary[v]) {
        for &d in map.darts_at(v) {
            let e = map.ccw_next(d);
            let t = face_index[dm.faces.face_of[d]];
            let w1 = edge_index[&key(v, map.target(d))];
            let w2 = edge_index[&key(v, map.target(e))];
            let cw = |i| num_primal + triangles.len() + i;
            quads.push([node_of(v), cw(w1), num_primal + t, cw(w2)]);
        }
    }

    // edges at ∂ in counterclockwise order, and the triangle after each
    let mut tri_lookup: HashMap<[VertexId; 3], usize> = HashMap::new();
    for (t, tr) in triangles.iter().enumerate() {
        let mut s = *tr;
        s.sort_unstable();
        tri_lookup.insert(s, t);
    }
    let find_tri = |a: VertexId, b: VertexId, c: VertexId| -> Result<usize> {
        let mut s = [a, b, c];
        s.sort_unstable();
        tri_lookup.get(&s).copied().ok_or_else(|| Error::Structural(format!("no triangle ({a}, {b}, {c})")))
    };
    let k = boundary.len();
    let mut raw: Vec<(VertexId, VertexId)> = Vec::new();
    if num_primal > 0 {
        for j in 0..k {
            let u = boundary[j];
            let next = boundary[(j + 1) % k];
            let rot = &tri.rotation()[u];
            let start = rot.iter().position(|&x| x == next).ok_or_else(|| Error::Structural("broken boundary".into()))?;
            let mut inner: Vec<VertexId> = (1..rot.len())
                .map(|i| rot[(start + i) % rot.len()])
                .take_while(|&x| !on_boundary[x])
                .collect();
            inner.reverse();
            raw.extend(inner.into_iter().map(|x| (x, u)));
        }
    }
    let mut slots = Vec::new();
    let mut seen_corner = vec![false; triangles.len()];
    for a in 0..raw.len() {
        let (x, u) = raw[a];
        let (y, v) = raw[(a + 1) % raw.len()];
        let corner = if u == v { find_tri(u, x, y)? } else { find_tri(u, v, x)? };
        if u != v && x != y {
            return Err(Error::Structural(format!("boundary edge ({u}, {v}) is not capped by one triangle")));
        }
        if std::mem::replace(&mut seen_corner[corner], true) {
            return Err(Error::Structural(format!("triangle {corner} met twice around the boundary")));
        }
        let cu = packing.center[u];
        let c_pos = (cu + packing.tangency_point(u, x)) / 2.0;
        let z_pos = if u == v {
            let dir = tri_pos[corner] - cu;
            cu + dir / dir.norm() * (0.75 * packing.radius[u])
        } else {
            packing.tangency_point(u, v)
        };
        slots.push(Slot { crossing: edge_index[&key(x, u)], boundary_vertex: u, corner, c_pos, z_pos });
    }
    for s in 0..slots.len() {
        let next = &slots[(s + 1) % slots.len()];
        let t = slots[s].corner;
        quads.push([
            wired,
            num_primal + triangles.len() + slots[s].crossing,
            num_primal + t,
            num_primal + triangles.len() + next.crossing,
        ]);
    }

    let removed = vec![false; nodes.len()];
    Ok(TemperleyanGraph { nodes, adj, pos, quads, removed, triangles, edges, num_primal, slots, primal_node })
}

fn key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    (u.min(v), u.max(v))
}

/// Removes `∂` and the boundary triangle `b` (a node id). Fails if the
/// colors no longer balance, for instance when called a second time.
pub fn remove_for_dimers(g: &TemperleyanGraph, b: usize) -> Result<TemperleyanGraph> {
    if !matches!(g.nodes.get(b), Some(Node::Dual(_))) || !g.boundary_dual().contains(&b) {
        return Err(Error::Parameter(format!("node {b} is not a triangle on the boundary")));
    }
    if g.removed[b] {
        return Err(Error::Parameter(format!("node {b} was already removed")));
    }
    let mut out = g.clone();
    let wired = out.wired_node();
    out.removed[wired] = true;
    out.removed[b] = true;
    let (black, white) = out.count_colors();
    if black != white {
        return Err(Error::Structural(format!("{black} black vs {white} white vertices after removal")));
    }
    Ok(out)
}

/// Boundary triangle whose incenter is closest to the segment from the
/// origin to `x`; ties go to the smaller node id.
pub fn choose_b_towards(g: &TemperleyanGraph, x: Point) -> Result<usize> {
    let x = x / x.norm();
    let candidates = g.boundary_dual();
    let dist = |p: Point| {
        let t = (p.re * x.re + p.im * x.im).clamp(0.0, 1.0);
        (p - x * t).norm()
    };
    let mut best: Option<(f64, usize)> = None;
    for b in candidates {
        let d = dist(g.pos[b].expect("triangles are placed"));
        if best.is_none_or(|(bd, bn)| d < bd || (d == bd && b < bn)) {
            best = Some((d, b));
        }
    }
    best.map(|(_, b)| b).ok_or_else(|| Error::Parameter("patch has no boundary triangle".into()))
}

/// A bounded face of the extended graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Face {
    /// Counterclockwise, starting from the primal-side black vertex.
    pub nodes: [usize; 4],
    /// Midpoint of the black diagonal.
    pub mid: Point,
}

/// The extended graph `Ḡ` with its forced dimers.
#[derive(Debug, Clone)]
pub struct ExtendedGraph {
    pub nodes: Vec<Node>,
    pub pos: Vec<Point>,
    pub map: HalfEdgeMap,
    /// Face of each dart (the face on its left); `outer` for the outer face.
    pub face_of: Vec<usize>,
    pub faces: Vec<Face>,
    pub outer: usize,
    /// `(black, white)` pairs frozen in every cover.
    pub forced: Vec<(usize, usize)>,
    /// Removed boundary triangle `𝔟`.
    pub b: usize,
    /// White `𝔴` matched to `𝔟`.
    pub w: usize,
    /// Unmatched cycle vertex, root of the wired tree.
    pub root: usize,
    /// Base face `𝔣`, height 0.
    pub base_face: usize,
    num_primal: usize,
    num_triangles: usize,
    num_crossings: usize,
    /// `(primal side, primal side, dual side, dual side)` per crossing.
    crossing_ends: Vec<[usize; 4]>,
    cycle_len: usize,
    slot_corner: Vec<usize>,
}

impl ExtendedGraph {
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_interior(&self) -> usize {
        self.num_primal
    }

    pub fn num_triangles(&self) -> usize {
        self.num_triangles
    }

    pub fn num_crossings(&self) -> usize {
        self.num_crossings
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle_len
    }

    pub fn is_black(&self, v: usize) -> bool {
        self.nodes[v].is_black()
    }

    pub fn dual_node(&self, t: usize) -> usize {
        self.num_primal + t
    }

    pub fn crossing_node(&self, e: usize) -> usize {
        self.num_primal + self.num_triangles + e
    }

    pub fn cycle_node(&self, a: usize) -> usize {
        self.num_primal + self.num_triangles + self.num_crossings + a
    }

    pub fn cycle_white_node(&self, a: usize) -> usize {
        self.cycle_node(self.cycle_len) + a
    }

    /// Primal-side and dual-side black neighbors of crossing `e`.
    pub fn crossing_ends(&self, e: usize) -> [usize; 4] {
        self.crossing_ends[e]
    }

    /// Triangle joined to `z_a`.
    pub fn slot_corner(&self, a: usize) -> usize {
        self.dual_node(self.slot_corner[a])
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.map.darts_at(v).iter().map(|&d| self.map.target(d))
    }

    /// Darts of bounded face `f` in boundary order, each with `f` on its left.
    pub fn face_darts(&self, f: usize) -> [usize; 4] {
        let q = self.faces[f].nodes;
        std::array::from_fn(|i| self.map.find_dart(q[i], q[(i + 1) % 4]).expect("face edge"))
    }

    /// True when `v` belongs to the unextended superposition.
    pub fn in_base_graph(&self, v: usize) -> bool {
        !matches!(self.nodes[v], Node::Cycle(_) | Node::CycleWhite(_))
    }

    /// Wired primal graph used by the sampler: vertex `i < num_interior()`
    /// is primal node `i`, vertex `num_interior()` is `∂`. Edge `e` is
    /// crossing `e`.
    pub fn wired_graph(&self) -> Graph {
        let wired = self.num_primal;
        let mut g = Graph::new(self.num_primal + 1);
        for ends in &self.crossing_ends {
            let side = |x: usize| if x < self.num_primal { x } else { wired };
            g.add_edge(side(ends[0]), side(ends[1]));
        }
        g
    }

    /// Dual graph on triangles; edge `e` is crossing `e`.
    pub fn dual_graph(&self) -> Graph {
        let mut g = Graph::new(self.num_triangles);
        for ends in &self.crossing_ends {
            g.add_edge(ends[2] - self.num_primal, ends[3] - self.num_primal);
        }
        g
    }

    /// Adjacency-list text with tags, positions, forced dimers and the
    /// distinguished vertices, edge and face.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "b {}\nw {}\nroot {}\nbase_face {}", self.b, self.w, self.root, self.base_face);
        let _ = writeln!(s, "e {} {}", self.b, self.w);
        for &(b, w) in &self.forced {
            let _ = writeln!(s, "forced {b} {w}");
        }
        for v in 0..self.num_nodes() {
            let nbrs: Vec<String> = self.neighbors(v).map(|u| u.to_string()).collect();
            let _ = writeln!(
                s,
                "{v} {} {:.17e} {:.17e}: {}",
                self.nodes[v].tag(),
                self.pos[v].re,
                self.pos[v].im,
                nbrs.join(" ")
            );
        }
        s
    }
}

/// Builds `Ḡ` for the removed boundary triangle `b` (a node id of `g`).
pub fn extend_with_boundary(g: &TemperleyanGraph, b: usize) -> Result<ExtendedGraph> {
    let boundary_dual = g.boundary_dual();
    let j = boundary_dual
        .iter()
        .position(|&x| x == b)
        .ok_or_else(|| Error::Parameter(format!("node {b} is not a triangle on the boundary")))?;
    let k = g.slots.len();
    if k == 0 {
        return Err(Error::Structural("patch has no interior vertex".into()));
    }
    let num_primal = g.num_primal;
    let num_triangles = g.triangles.len();
    let num_crossings = g.edges.len();
    let cycle0 = num_primal + num_triangles + num_crossings;
    let zero = cycle0 + k;

    let mut nodes: Vec<Node> = g.nodes[..cycle0].to_vec();
    let mut pos: Vec<Point> = g.pos[..cycle0].iter().map(|p| p.expect("placed")).collect();
    for (a, s) in g.slots.iter().enumerate() {
        nodes.push(Node::Cycle(a));
        pos.push(s.c_pos);
    }
    for (a, s) in g.slots.iter().enumerate() {
        nodes.push(Node::CycleWhite(a));
        pos.push(s.z_pos);
    }

    // the crossing on the a-th edge at ∂ attaches to c_a
    let mut cycle_of_crossing = HashMap::new();
    for (a, s) in g.slots.iter().enumerate() {
        cycle_of_crossing.insert(s.crossing, cycle0 + a);
    }
    let mut crossing_ends = Vec::with_capacity(num_crossings);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    let link = |x: usize, y: usize, adj: &mut Vec<Vec<usize>>| {
        adj[x].push(y);
        adj[y].push(x);
    };
    for e in 0..num_crossings {
        let w = g.crossing_node(e);
        let nb = &g.adj[w];
        let side = |x: usize| if x == g.wired_node() { cycle_of_crossing[&e] } else { x };
        let ends = [side(nb[0]), side(nb[2]), nb[1], nb[3]];
        for &x in &ends {
            link(w, x, &mut adj);
        }
        crossing_ends.push(ends);
    }
    for a in 0..k {
        link(zero + a, cycle0 + a, &mut adj);
        link(zero + a, cycle0 + (a + 1) % k, &mut adj);
        link(zero + a, g.dual_node(g.slots[a].corner), &mut adj);
    }

    // rotation by angle; the drawing is straight-line, so this is the embedding
    for (v, nb) in adj.iter_mut().enumerate() {
        let p = pos[v];
        nb.sort_by(|&x, &y| (pos[x] - p).arg().total_cmp(&(pos[y] - p).arg()));
        // start at the smallest id so dart and face numbering do not depend
        // on where the angles wrap; re-embeddings then share face ids
        if let Some(i) = (0..nb.len()).min_by_key(|&i| nb[i]) {
            nb.rotate_left(i);
        }
    }
    let map = HalfEdgeMap::from_rotation(&adj)?;
    let traced = map.faces();
    if map.euler_characteristic() != 2 {
        return Err(Error::Geometry("extended graph drawing is not planar".into()));
    }
    let area = |cycle: &[usize]| signed_area(&cycle.iter().map(|&d| pos[map.origin(d)]).collect::<Vec<_>>());
    let outer = (0..traced.len())
        .min_by(|&x, &y| area(&traced.cycles[x]).total_cmp(&area(&traced.cycles[y])))
        .expect("faces exist");
    if traced.cycles[outer].len() != 2 * k {
        return Err(Error::Geometry("outer face is not the boundary cycle".into()));
    }
    let mut faces = Vec::with_capacity(traced.len() - 1);
    let mut face_index = vec![usize::MAX; traced.len()];
    for (f, cycle) in traced.cycles.iter().enumerate() {
        if f == outer {
            continue;
        }
        if cycle.len() != 4 {
            return Err(Error::Geometry(format!("face with {} sides", cycle.len())));
        }
        let mut vs: Vec<usize> = cycle.iter().map(|&d| map.origin(d)).collect();
        // start from the primal-side black vertex
        let first = (0..4)
            .find(|&i| matches!(nodes[vs[i]], Node::Primal(_) | Node::Cycle(_)))
            .ok_or_else(|| Error::Geometry("face without a primal vertex".into()))?;
        vs.rotate_left(first);
        let q = [vs[0], vs[1], vs[2], vs[3]];
        if !(area(cycle) > 0.0) {
            return Err(Error::Geometry(format!("face {q:?} is not positively oriented")));
        }
        face_index[f] = faces.len();
        faces.push(Face { nodes: q, mid: (pos[q[0]] + pos[q[2]]) / 2.0 });
    }
    let outer_id = faces.len();
    let face_of: Vec<usize> =
        traced.face_of.iter().map(|&f| if f == outer { outer_id } else { face_index[f] }).collect();

    let w = zero + j;
    let root = cycle0 + j;
    let mut forced: Vec<(usize, usize)> = (0..k).filter(|&a| a != j).map(|a| (cycle0 + a, zero + a)).collect();
    forced.push((b, w));
    let d = map.find_dart(w, b).expect("forced edge exists");
    let base_face = [face_of[d], face_of[map.twin(d)]]
        .into_iter()
        .find(|&f| f != outer_id && faces[f].nodes.contains(&root))
        .ok_or_else(|| Error::Structural("no face holds the removed edge and the root".into()))?;

    Ok(ExtendedGraph {
        nodes,
        pos,
        map,
        face_of,
        faces,
        outer: outer_id,
        forced,
        b,
        w,
        root,
        base_face,
        num_primal,
        num_triangles,
        num_crossings,
        crossing_ends,
        cycle_len: k,
        slot_corner: g.slots.iter().map(|s| s.corner).collect(),
    })
}

/// Convenience pipeline: dual, superposition and extension for a packed
/// patch, with `𝔟` chosen towards the boundary point `e^{i angle}`.
pub fn build_extended(tri: &PlanarTriangulation, packing: &Packing, angle: f64) -> Result<ExtendedGraph> {
    let dm = crate::triangulation::dual(tri)?;
    let g = superimpose(tri, &dm, packing)?;
    let b = choose_b_towards(&g, Point::from_polar(1.0, angle))?;
    extend_with_boundary(&g, b)
}

/// Same as [`build_extended`] with an explicit removed triangle, given as
/// a node id. Node and face ids depend only on the combinatorics, so this
/// re-embeds an extended graph under a different packing.
pub fn build_extended_at(tri: &PlanarTriangulation, packing: &Packing, b: usize) -> Result<ExtendedGraph> {
    let dm = crate::triangulation::dual(tri)?;
    let g = superimpose(tri, &dm, packing)?;
    extend_with_boundary(&g, b)
}
