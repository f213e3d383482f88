//! Half-edge (dart) representation of a finite planar map.
//!
//! Every undirected edge is a pair of darts `d`, `twin(d)`. Around each
//! vertex the outgoing darts are stored in counterclockwise order. Faces are
//! traced with the face kept on the left: the successor of a dart `u -> v`
//! is the dart leaving `v` that comes clockwise after `v -> u`.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct HalfEdgeMap {
    origin: Vec<usize>,
    twin: Vec<usize>,
    around: Vec<Vec<usize>>,
    pos: Vec<usize>,
}

/// Faces of a map as cycles of darts.
#[derive(Debug, Clone, PartialEq)]
pub struct Faces {
    pub face_of: Vec<usize>,
    pub cycles: Vec<Vec<usize>>,
}

impl Faces {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

impl HalfEdgeMap {
    /// Builds a map from a rotation system of a simple graph.
    pub fn from_rotation(rotation: &[Vec<usize>]) -> Result<Self> {
        let n = rotation.len();
        let mut origin = Vec::new();
        let mut around = vec![Vec::new(); n];
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        for (u, nbrs) in rotation.iter().enumerate() {
            for &v in nbrs {
                if v >= n {
                    return Err(Error::Structural(format!("neighbor {v} of {u} out of range")));
                }
                if u == v {
                    return Err(Error::Structural(format!("self-loop at {u}")));
                }
                let d = origin.len();
                if index.insert((u, v), d).is_some() {
                    return Err(Error::Structural(format!("repeated edge ({u}, {v})")));
                }
                origin.push(u);
                around[u].push(d);
            }
        }
        let mut twin = vec![usize::MAX; origin.len()];
        for (&(u, v), &d) in &index {
            match index.get(&(v, u)) {
                Some(&e) => twin[d] = e,
                None => {
                    return Err(Error::Structural(format!(
                        "edge ({u}, {v}) has no reverse in the rotation system"
                    )))
                }
            }
        }
        Self::from_parts(origin, twin, around)
    }

    /// Builds a map from raw dart data; checks that `twin` is a fixed-point
    /// free involution and that `around` lists every dart exactly once.
    pub fn from_parts(origin: Vec<usize>, twin: Vec<usize>, around: Vec<Vec<usize>>) -> Result<Self> {
        let m = origin.len();
        if twin.len() != m {
            return Err(Error::Structural("twin table length mismatch".into()));
        }
        for d in 0..m {
            let t = twin[d];
            if t >= m || t == d || twin[t] != d {
                return Err(Error::Structural(format!("dart {d} has an invalid twin")));
            }
        }
        let mut pos = vec![usize::MAX; m];
        for (v, darts) in around.iter().enumerate() {
            for (i, &d) in darts.iter().enumerate() {
                if d >= m || origin[d] != v || pos[d] != usize::MAX {
                    return Err(Error::Structural(format!("dart {d} misplaced around vertex {v}")));
                }
                pos[d] = i;
            }
        }
        if pos.contains(&usize::MAX) {
            return Err(Error::Structural("dart missing from every rotation".into()));
        }
        Ok(Self { origin, twin, around, pos })
    }

    pub fn num_vertices(&self) -> usize {
        self.around.len()
    }

    pub fn num_darts(&self) -> usize {
        self.origin.len()
    }

    pub fn num_edges(&self) -> usize {
        self.origin.len() / 2
    }

    pub fn origin(&self, d: usize) -> usize {
        self.origin[d]
    }

    pub fn target(&self, d: usize) -> usize {
        self.origin[self.twin[d]]
    }

    pub fn twin(&self, d: usize) -> usize {
        self.twin[d]
    }

    pub fn darts_at(&self, v: usize) -> &[usize] {
        &self.around[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.around[v].len()
    }

    pub fn ccw_next(&self, d: usize) -> usize {
        let ring = &self.around[self.origin[d]];
        ring[(self.pos[d] + 1) % ring.len()]
    }

    pub fn cw_next(&self, d: usize) -> usize {
        let ring = &self.around[self.origin[d]];
        ring[(self.pos[d] + ring.len() - 1) % ring.len()]
    }

    /// Successor of `d` along the face on its left.
    pub fn face_next(&self, d: usize) -> usize {
        self.cw_next(self.twin[d])
    }

    /// Dart `u -> v`, if the edge exists (first one for multi-edges).
    pub fn find_dart(&self, u: usize, v: usize) -> Option<usize> {
        self.around.get(u)?.iter().copied().find(|&d| self.target(d) == v)
    }

    pub fn faces(&self) -> Faces {
        let m = self.num_darts();
        let mut face_of = vec![usize::MAX; m];
        let mut cycles = Vec::new();
        for start in 0..m {
            if face_of[start] != usize::MAX {
                continue;
            }
            let f = cycles.len();
            let mut cycle = Vec::new();
            let mut d = start;
            loop {
                face_of[d] = f;
                cycle.push(d);
                d = self.face_next(d);
                if d == start {
                    break;
                }
            }
            cycles.push(cycle);
        }
        Faces { face_of, cycles }
    }

    /// Euler characteristic V - E + F, counting every traced face.
    pub fn euler_characteristic(&self) -> i64 {
        let faces = if self.num_darts() == 0 { 1 } else { self.faces().len() };
        self.num_vertices() as i64 - self.num_edges() as i64 + faces as i64
    }

    /// The dual map. Dart `d` of the dual crosses primal dart `d`, running
    /// from the face on the right of `d` to the face on its left; dual
    /// vertex `f` is face `f` of `faces`.
    pub fn dual(&self, faces: &Faces) -> Result<Self> {
        let origin: Vec<usize> = (0..self.num_darts()).map(|d| faces.face_of[self.twin[d]]).collect();
        let around: Vec<Vec<usize>> =
            faces.cycles.iter().map(|c| c.iter().map(|&e| self.twin[e]).collect()).collect();
        Self::from_parts(origin, self.twin.clone(), around)
    }

    fn canonical_code_from(&self, start: usize) -> Vec<usize> {
        let n = self.num_vertices();
        let mut label = vec![usize::MAX; n];
        let mut entry = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        let mut next_label = 0;
        let s = self.origin[start];
        label[s] = next_label;
        next_label += 1;
        entry[s] = start;
        queue.push_back(s);
        let mut code = Vec::with_capacity(self.num_darts() + n);
        while let Some(u) = queue.pop_front() {
            let ring = &self.around[u];
            code.push(ring.len());
            let first = self.pos[entry[u]];
            for k in 0..ring.len() {
                let d = ring[(first + k) % ring.len()];
                let v = self.target(d);
                if label[v] == usize::MAX {
                    label[v] = next_label;
                    next_label += 1;
                    entry[v] = self.twin[d];
                    queue.push_back(v);
                }
                code.push(label[v]);
            }
        }
        code.push(next_label);
        code
    }

    /// Orientation-preserving isomorphism of connected maps, by canonical
    /// breadth-first relabeling from every possible starting dart.
    pub fn is_isomorphic(&self, other: &Self) -> bool {
        if self.num_vertices() != other.num_vertices() || self.num_darts() != other.num_darts() {
            return false;
        }
        if self.num_darts() == 0 {
            return true;
        }
        let code = self.canonical_code_from(0);
        (0..other.num_darts()).any(|d| other.canonical_code_from(d) == code)
    }
}
