//! Reference flow and height functions on the faces of the extended graph.
//!
//! Heights are measured in units where one dimer carries unit flow, so an
//! intrinsic winding `W` in radians corresponds to a height of `W / 2π`.

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, DiscAutomorphism, Point};
use crate::sampler::DimerCover;
use crate::temperley::{ExtendedGraph, Node};
use crate::winding::{intrinsic_winding, mapped_intrinsic_winding, topological_winding, Polyline};

const TAU: f64 = 2.0 * PI;

/// `ω_ref` per dart of the extended map, as the flow from the dart's origin
/// to its target; `NaN` on the edges of the boundary cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceFlow {
    pub value: Vec<f64>,
}

impl ReferenceFlow {
    pub fn get(&self, dart: usize) -> Option<f64> {
        let v = self.value[dart];
        (!v.is_nan()).then_some(v)
    }
}

/// For an edge `w b` with faces `f_l`, `f_r` on the left and right of
/// `w -> b`, the value is `(W_i(m(f_l), b, m(f_r)) + π) / 2π`: the share of
/// the full turn around `b` taken by the sector between the two diagonal
/// midpoints that contains `w`.
pub fn reference_flow(ext: &ExtendedGraph) -> Result<ReferenceFlow> {
    let map = &ext.map;
    let mut value = vec![f64::NAN; map.num_darts()];
    for d in 0..map.num_darts() {
        let w = map.origin(d);
        let b = map.target(d);
        if ext.is_black(w) || !(ext.in_base_graph(w) || ext.in_base_graph(b)) {
            continue;
        }
        let (fl, fr) = (ext.face_of[d], ext.face_of[map.twin(d)]);
        if fl == ext.outer || fr == ext.outer {
            return Err(Error::Structural(format!("edge ({w}, {b}) borders the outer face")));
        }
        let path = Polyline::open(vec![ext.faces[fl].mid, ext.pos[b], ext.faces[fr].mid]);
        let omega = (intrinsic_winding(&path) + PI) / TAU;
        value[d] = omega;
        value[map.twin(d)] = -omega;
    }
    Ok(ReferenceFlow { value })
}

/// Largest deviation of the flow out of a vertex of the unextended graph
/// from `-1` (black) or `+1` (white).
pub fn divergence_defect(ext: &ExtendedGraph, flow: &ReferenceFlow) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for v in (0..ext.num_nodes()).filter(|&v| ext.in_base_graph(v)) {
        let mut out = 0.0;
        for &d in ext.map.darts_at(v) {
            out += flow.get(d).ok_or_else(|| Error::FlowAudit(format!("no flow on an edge at {v}")))?;
        }
        let expected = if ext.is_black(v) { -1.0 } else { 1.0 };
        worst = worst.max((out - expected).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeightField {
    pub value: Vec<f64>,
    pub base: usize,
}

impl HeightField {
    /// `face_id,x,y,h` with the face position at its diagonal midpoint.
    pub fn to_csv(&self, ext: &ExtendedGraph) -> String {
        let mut s = String::from("face_id,x,y,h\n");
        for (f, h) in self.value.iter().enumerate() {
            let m = ext.faces[f].mid;
            let _ = writeln!(s, "{f},{:.17e},{:.17e},{:.17e}", m.re, m.im, h);
        }
        s
    }
}

/// Increment `h(face_of[d]) - h(face_of[twin d])` across dart `d`.
fn increment(ext: &ExtendedGraph, cover: &DimerCover, flow: &ReferenceFlow, d: usize) -> Option<f64> {
    let (a, b) = (ext.map.origin(d), ext.map.target(d));
    let omega = flow.get(d)?;
    let covered = if cover.mate[a] == b { 1.0 } else { 0.0 };
    // flow stored as origin -> target; the dimer flow runs white -> black
    let dimer = if ext.is_black(a) { -covered } else { covered };
    Some(omega - dimer)
}

/// Integrates `h(f_l) - h(f_r) = ω_ref - ω_dim` across each white-to-black edge
/// between bounded faces.
pub fn height_from_flow(cover: &DimerCover, flow: &ReferenceFlow, ext: &ExtendedGraph) -> Result<HeightField> {
    let nf = ext.faces.len();
    let mut h = vec![f64::NAN; nf];
    h[ext.base_face] = 0.0;
    let mut queue = VecDeque::from([ext.base_face]);
    while let Some(f) = queue.pop_front() {
        for d in ext.face_darts(f) {
            let g = ext.face_of[ext.map.twin(d)];
            if g == ext.outer || !h[g].is_nan() {
                continue;
            }
            let inc = increment(ext, cover, flow, d).ok_or_else(|| Error::FlowAudit("missing flow value".into()))?;
            h[g] = h[f] - inc;
            queue.push_back(g);
        }
    }
    if h.iter().any(|x| x.is_nan()) {
        return Err(Error::FlowAudit("some faces are unreachable from the base face".into()));
    }
    for d in 0..ext.map.num_darts() {
        let (l, r) = (ext.face_of[d], ext.face_of[ext.map.twin(d)]);
        if l == ext.outer || r == ext.outer {
            continue;
        }
        let inc = increment(ext, cover, flow, d).ok_or_else(|| Error::FlowAudit("missing flow value".into()))?;
        if (h[l] - h[r] - inc).abs() > 1e-9 {
            return Err(Error::FlowAudit(format!("flow is not closed around faces {l} and {r}")));
        }
    }
    Ok(HeightField { value: h, base: ext.base_face })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeKind {
    /// Branches of the wired tree, ending at the root of the boundary cycle.
    Wired,
    /// Branches of the free tree, ending at the removed triangle.
    Free,
}

/// Next `(white, black)` step along a tree branch, `None` at the end.
fn tree_step(cover: &DimerCover, ext: &ExtendedGraph, v: usize, kind: TreeKind) -> Option<(usize, usize)> {
    let end = match kind {
        TreeKind::Wired => ext.root,
        TreeKind::Free => ext.b,
    };
    if v == end {
        return None;
    }
    let w = cover.mate[v];
    let same_side = |u: usize| match kind {
        TreeKind::Wired => matches!(ext.nodes[u], Node::Primal(_) | Node::Cycle(_)),
        TreeKind::Free => matches!(ext.nodes[u], Node::Dual(_)),
    };
    ext.neighbors(w).find(|&u| u != v && same_side(u)).map(|u| (w, u))
}

/// The branch of the base face itself is a U-turn at the root, counted as
/// a left turn for the wired tree and a right turn for the free tree. Other
/// faces inherit the matching half-unit offset so that `h(𝔣) = 0`.
fn offset(kind: TreeKind) -> f64 {
    match kind {
        TreeKind::Wired => -0.5,
        TreeKind::Free => 0.5,
    }
}

fn tree_start(ext: &ExtendedGraph, f: usize, kind: TreeKind) -> usize {
    match kind {
        TreeKind::Wired => ext.faces[f].nodes[0],
        TreeKind::Free => ext.faces[f].nodes[2],
    }
}

/// The curve `m(f) -> v_f -> branch -> v_𝔣 -> m(𝔣)` through the blacks and
/// whites of the chosen tree.
pub fn branch_polyline(cover: &DimerCover, ext: &ExtendedGraph, f: usize, kind: TreeKind) -> Result<Polyline> {
    let mut pts = vec![ext.faces[f].mid];
    let mut v = tree_start(ext, f, kind);
    pts.push(ext.pos[v]);
    let mut steps = 0;
    while let Some((w, u)) = tree_step(cover, ext, v, kind) {
        pts.push(ext.pos[w]);
        pts.push(ext.pos[u]);
        v = u;
        steps += 1;
        if steps > ext.num_nodes() {
            return Err(Error::Bijection("tree branch does not reach its root".into()));
        }
    }
    let end = match kind {
        TreeKind::Wired => ext.root,
        TreeKind::Free => ext.b,
    };
    if v != end {
        return Err(Error::Bijection(format!("branch from face {f} stops at {v}")));
    }
    pts.push(ext.faces[ext.base_face].mid);
    Ok(Polyline::open(pts))
}

/// Height of one face as the intrinsic winding of its tree branch.
pub fn height_via_winding(cover: &DimerCover, ext: &ExtendedGraph, f: usize, kind: TreeKind) -> Result<f64> {
    if f == ext.base_face {
        return Ok(0.0);
    }
    Ok(intrinsic_winding(&branch_polyline(cover, ext, f, kind)?) / TAU + offset(kind))
}

/// Same as [`height_via_winding`] through the two endpoint windings:
/// `W_i(γ) = W(γ, γ(1)) + W(γ, γ(0))`.
pub fn height_topological(cover: &DimerCover, ext: &ExtendedGraph, f: usize, kind: TreeKind) -> Result<f64> {
    if f == ext.base_face {
        return Ok(0.0);
    }
    let path = branch_polyline(cover, ext, f, kind)?;
    let start = path.points[0];
    let end = *path.points.last().expect("nonempty");
    Ok((topological_winding(&path, end)? + topological_winding(&path, start)?) / TAU + offset(kind))
}

fn turn(a: Point, b: Point) -> f64 {
    let q = b / a;
    if q.im == 0.0 && q.re < 0.0 {
        0.0
    } else {
        q.arg()
    }
}

/// Intrinsic winding of every face's branch, sharing the turning along
/// common tails. `terminal(v)` ends a branch at `v`, giving the direction
/// leaving `v` and the turning accumulated after it.
fn face_windings(
    cover: &DimerCover,
    ext: &ExtendedGraph,
    kind: TreeKind,
    terminal: &dyn Fn(usize) -> Option<(Point, f64)>,
) -> Result<Vec<f64>> {
    let n = ext.num_nodes();
    // out[v]: direction of the first segment leaving v; tail[v]: turning
    // from that segment to the end of the branch
    let mut out = vec![Point::new(f64::NAN, 0.0); n];
    let mut tail = vec![f64::NAN; n];
    let mut stack = Vec::new();
    let mut faces_out = vec![0.0; ext.faces.len()];
    for f in 0..ext.faces.len() {
        let start = tree_start(ext, f, kind);
        let mut v = start;
        while tail[v].is_nan() {
            if let Some((dir, rest)) = terminal(v) {
                out[v] = dir;
                tail[v] = rest;
                break;
            }
            stack.push(v);
            v = match tree_step(cover, ext, v, kind) {
                Some((_, u)) if stack.len() <= n => u,
                _ => return Err(Error::Bijection("tree branch does not reach its end".into())),
            };
        }
        while let Some(x) = stack.pop() {
            let (w, u) = tree_step(cover, ext, x, kind).expect("not an end");
            let d1 = ext.pos[w] - ext.pos[x];
            let d2 = ext.pos[u] - ext.pos[w];
            out[x] = d1;
            tail[x] = turn(d1, d2) + turn(d2, out[u]) + tail[u];
        }
        faces_out[f] = turn(ext.pos[start] - ext.faces[f].mid, out[start]) + tail[start];
    }
    Ok(faces_out)
}

/// Heights of all faces from tree windings.
pub fn heights_via_winding(cover: &DimerCover, ext: &ExtendedGraph, kind: TreeKind) -> Result<Vec<f64>> {
    let end = match kind {
        TreeKind::Wired => ext.root,
        TreeKind::Free => ext.b,
    };
    let base_mid = ext.faces[ext.base_face].mid;
    let terminal = |v: usize| (v == end).then(|| (base_mid - ext.pos[v], 0.0));
    let mut h = face_windings(cover, ext, kind, &terminal)?;
    for (f, x) in h.iter_mut().enumerate() {
        *x = if f == ext.base_face { 0.0 } else { *x / TAU + offset(kind) };
    }
    Ok(h)
}

/// Counterclockwise angle from `a` to `b` on the unit circle, in `[0, 2π)`.
fn ccw_sweep(a: Point, b: Point) -> f64 {
    (b / a).arg().rem_euclid(TAU)
}

/// Heights normalized at a boundary point instead of the base face: each
/// wired branch is followed until it first reaches a boundary slot, leaves
/// radially to the unit circle at `x_f`, and closes with the
/// counterclockwise arc from `x_f` to `x`. This is the finite-volume proxy
/// of the height with respect to `x`; it does not depend on the base face.
pub fn heights_at_boundary(cover: &DimerCover, ext: &ExtendedGraph, x: Point) -> Result<Vec<f64>> {
    if (x.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Parameter("target must lie on the unit circle".into()));
    }
    let terminal = |v: usize| {
        matches!(ext.nodes[v], Node::Cycle(_)).then(|| {
            let xf = ext.pos[v] / ext.pos[v].norm();
            let radial = xf - ext.pos[v];
            (radial, turn(radial, xf * Point::i()) + ccw_sweep(xf, x))
        })
    };
    Ok(face_windings(cover, ext, TreeKind::Wired, &terminal)?.into_iter().map(|w| w / TAU).collect())
}

/// The same height for one face through the two topological windings of
/// the curve about its endpoints, `m(f)` and `x`.
pub fn height_at_boundary_topological(cover: &DimerCover, ext: &ExtendedGraph, f: usize, x: Point) -> Result<f64> {
    let mut pts = vec![ext.faces[f].mid];
    let mut v = tree_start(ext, f, TreeKind::Wired);
    pts.push(ext.pos[v]);
    while !matches!(ext.nodes[v], Node::Cycle(_)) {
        let (w, u) = tree_step(cover, ext, v, TreeKind::Wired)
            .ok_or_else(|| Error::Bijection(format!("branch from face {f} misses the boundary")))?;
        pts.extend([ext.pos[w], ext.pos[u]]);
        v = u;
        if pts.len() > 2 * ext.num_nodes() + 2 {
            return Err(Error::Bijection("tree branch does not reach its end".into()));
        }
    }
    let xf = ext.pos[v] / ext.pos[v].norm();
    pts.push(xf);
    let start = pts[0];
    let poly = Polyline::open(pts);
    // about an interior point the argument increases monotonically along a
    // counterclockwise arc; about its own endpoint it changes by half the sweep
    let sweep = ccw_sweep(xf, x);
    let arc_about_start = if sweep == 0.0 { 0.0 } else { ccw_sweep(xf - start, x - start) };
    let about_start = topological_winding(&poly, start)? + arc_about_start;
    let about_end = topological_winding(&poly, x)? + sweep / 2.0;
    Ok((about_start + about_end) / TAU)
}

/// Outcome of comparing heights before and after a disc automorphism.
#[derive(Debug, Clone, PartialEq)]
pub struct MobiusReport {
    pub max_deviation: f64,
    pub worst_face: usize,
    /// Largest jump of the continuous argument of `φ'` between adjacent
    /// faces; a value near `π` or above signals a branch problem.
    pub max_branch_jump: f64,
    /// Spread of (continuous branch - closed-form branch) over all faces.
    pub branch_spread: f64,
}

/// Continuous branch of `arg φ'(m(f))` along a breadth-first spanning tree
/// of the faces, normalized to the closed form at the base face.
pub fn continuous_arg_derivative(ext: &ExtendedGraph, phi: &DiscAutomorphism) -> (Vec<f64>, f64) {
    let nf = ext.faces.len();
    let raw: Vec<f64> = ext.faces.iter().map(|f| phi.derivative(f.mid).arg()).collect();
    let mut arg = vec![f64::NAN; nf];
    arg[ext.base_face] = phi.arg_derivative(ext.faces[ext.base_face].mid);
    let mut jump: f64 = 0.0;
    let mut queue = VecDeque::from([ext.base_face]);
    while let Some(f) = queue.pop_front() {
        for d in ext.face_darts(f) {
            let g = ext.face_of[ext.map.twin(d)];
            if g == ext.outer || !arg[g].is_nan() {
                continue;
            }
            let step = wrap_angle(raw[g] - arg[f]);
            arg[g] = arg[f] + step;
            jump = jump.max(step.abs());
            queue.push_back(g);
        }
    }
    (arg, jump)
}

/// Recomputes wired-tree heights on the image of the drawing under `phi`
/// (edges become circular arcs) and compares them with
/// `h(f) - [arg φ'(m(f)) - arg φ'(m(𝔣))] / 2π`. The map must fix the
/// boundary target `x`.
pub fn mobius_height_change(
    cover: &DimerCover,
    ext: &ExtendedGraph,
    phi: &DiscAutomorphism,
    x: Point,
) -> Result<MobiusReport> {
    if (x.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Parameter("target must lie on the unit circle".into()));
    }
    if (phi.apply(x) - x).norm() > 1e-9 {
        return Err(Error::Parameter(format!("automorphism moves the target {x}")));
    }
    let before = heights_via_winding(cover, ext, TreeKind::Wired)?;
    let (arg, max_branch_jump) = continuous_arg_derivative(ext, phi);
    let base = arg[ext.base_face];
    let mut report = MobiusReport { max_deviation: 0.0, worst_face: ext.base_face, max_branch_jump, branch_spread: 0.0 };
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for f in 0..ext.faces.len() {
        let diff = arg[f] - phi.arg_derivative(ext.faces[f].mid);
        lo = lo.min(diff);
        hi = hi.max(diff);
        let after = if f == ext.base_face {
            0.0
        } else {
            mapped_intrinsic_winding(&branch_polyline(cover, ext, f, TreeKind::Wired)?, phi) / TAU + offset(TreeKind::Wired)
        };
        let expected = before[f] - (arg[f] - base) / TAU;
        let dev = (after - expected).abs();
        if dev > report.max_deviation {
            report.max_deviation = dev;
            report.worst_face = f;
        }
    }
    report.branch_spread = hi - lo;
    Ok(report)
}
