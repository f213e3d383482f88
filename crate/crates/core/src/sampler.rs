//! Uniform spanning trees and uniform dimer covers.
//!
//! Wilson's algorithm samples the wired spanning tree of the primal graph.
//! The unused crossings form the dual tree, which is then oriented towards
//! the removed triangle. Each black vertex is matched to the white vertex
//! on its outgoing tree edge; together with the forced boundary dimers this
//! is a dimer cover of the extended graph, and the map is a bijection.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::temperley::{ExtendedGraph, Node};

const NONE: usize = usize::MAX;

/// Parent pointers of a rooted spanning forest: `(parent, edge id)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpanningTree {
    pub parent: Vec<Option<(usize, usize)>>,
}

impl SpanningTree {
    /// Sorted edge ids.
    pub fn edges(&self) -> Vec<usize> {
        let mut e: Vec<usize> = self.parent.iter().flatten().map(|&(_, e)| e).collect();
        e.sort_unstable();
        e
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.parent.len()).filter(|&v| self.parent[v].is_none()).collect()
    }

    /// Checks that following parents from every vertex ends at a root
    /// without repeating a vertex, and that every parent edge exists.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let n = self.parent.len();
        if n != g.num_vertices() {
            return Err(Error::Structural("tree and graph sizes differ".into()));
        }
        for (v, p) in self.parent.iter().enumerate() {
            if let Some((u, e)) = *p {
                let (a, b) = g.endpoints(e);
                if !((a == u && b == v) || (a == v && b == u)) {
                    return Err(Error::Structural(format!("edge {e} does not join {v} and {u}")));
                }
            }
        }
        let mut state = vec![0u8; n]; // 0 unknown, 1 on current path, 2 reaches a root
        for s in 0..n {
            let mut path = Vec::new();
            let mut v = s;
            while state[v] == 0 {
                state[v] = 1;
                path.push(v);
                match self.parent[v] {
                    Some((u, _)) => v = u,
                    None => break,
                }
            }
            if state[v] == 1 && self.parent[v].is_some() {
                return Err(Error::Structural(format!("cycle through vertex {v}")));
            }
            for p in path {
                state[p] = 2;
            }
        }
        Ok(())
    }

    /// Vertices from `v` up to its root.
    pub fn branch(&self, mut v: usize) -> Vec<usize> {
        let mut out = vec![v];
        while let Some((u, _)) = self.parent[v] {
            out.push(u);
            v = u;
            if out.len() > self.parent.len() {
                break;
            }
        }
        out
    }

    /// Space-separated parent array, `-` for roots.
    pub fn to_text(&self) -> String {
        let cells: Vec<String> =
            self.parent.iter().map(|p| p.map_or("-".to_string(), |(u, e)| format!("{u}/{e}"))).collect();
        cells.join(" ")
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let parent = s
            .split_whitespace()
            .map(|c| {
                if c == "-" {
                    return Ok(None);
                }
                let (u, e) = c.split_once('/').ok_or_else(|| Error::Input(format!("bad tree cell `{c}`")))?;
                let u = u.parse().map_err(|_| Error::Input(format!("bad tree cell `{c}`")))?;
                let e = e.parse().map_err(|_| Error::Input(format!("bad tree cell `{c}`")))?;
                Ok(Some((u, e)))
            })
            .collect::<Result<_>>()?;
        Ok(Self { parent })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ScanOrder {
    #[default]
    Ascending,
    Descending,
    Custom(Vec<usize>),
}

fn reaches(g: &Graph, start: usize, stop: &[bool]) -> bool {
    let mut seen = vec![false; g.num_vertices()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        if stop[u] {
            return true;
        }
        for &(v, _) in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    false
}

/// Loop-erased random walk from `start` until it hits `stop`.
pub fn lerw<R: Rng + ?Sized>(g: &Graph, start: usize, stop: &[bool], rng: &mut R) -> Result<Vec<usize>> {
    if start >= g.num_vertices() {
        return Err(Error::Lookup(start));
    }
    if !reaches(g, start, stop) {
        return Err(Error::Parameter("stop set is unreachable from the start".into()));
    }
    // the last exit from each vertex describes the chronological loop erasure
    let mut next = vec![NONE; g.num_vertices()];
    let mut v = start;
    while !stop[v] {
        let nb = g.neighbors(v);
        let (u, _) = nb[rng.gen_range(0..nb.len())];
        next[v] = u;
        v = u;
    }
    let mut path = vec![start];
    let mut v = start;
    while !stop[v] {
        v = next[v];
        path.push(v);
    }
    Ok(path)
}

/// Wilson's algorithm; the tree is rooted at `roots` (wired together).
pub fn wilson<R: Rng + ?Sized>(g: &Graph, roots: &[usize], rng: &mut R, order: &ScanOrder) -> Result<SpanningTree> {
    let n = g.num_vertices();
    if roots.is_empty() {
        return Err(Error::Parameter("Wilson's algorithm needs at least one root".into()));
    }
    if let Some(&r) = roots.iter().find(|&&r| r >= n) {
        return Err(Error::Lookup(r));
    }
    let mut in_tree = vec![false; n];
    for &r in roots {
        in_tree[r] = true;
    }
    if roots.len() == 1 && !g.is_connected() {
        return Err(Error::Parameter("graph is not connected".into()));
    }
    let scan: Vec<usize> = match order {
        ScanOrder::Ascending => (0..n).collect(),
        ScanOrder::Descending => (0..n).rev().collect(),
        ScanOrder::Custom(v) => {
            let mut seen = vec![false; n];
            if v.len() != n || v.iter().any(|&x| x >= n || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::Parameter("scan order must be a permutation of the vertices".into()));
            }
            v.clone()
        }
    };
    wilson_scan(g, in_tree, &scan, rng)
}

fn wilson_scan<R: Rng + ?Sized>(g: &Graph, mut in_tree: Vec<bool>, scan: &[usize], rng: &mut R) -> Result<SpanningTree> {
    let n = g.num_vertices();
    let mut next: Vec<(usize, usize)> = vec![(NONE, NONE); n];
    let mut parent = vec![None; n];
    for &s in scan {
        let mut v = s;
        let mut steps = 0usize;
        while !in_tree[v] {
            let nb = g.neighbors(v);
            if nb.is_empty() {
                return Err(Error::Parameter(format!("vertex {v} is isolated")));
            }
            let step = nb[rng.gen_range(0..nb.len())];
            next[v] = step;
            v = step.0;
            steps += 1;
            if steps > 1 << 40 {
                return Err(Error::Parameter("random walk does not reach the root".into()));
            }
        }
        let mut v = s;
        while !in_tree[v] {
            in_tree[v] = true;
            parent[v] = Some(next[v]);
            v = next[v].0;
        }
    }
    Ok(SpanningTree { parent })
}

/// Complementary tree on the dual graph (edge ids shared with the primal
/// graph), oriented towards `root`.
pub fn dual_tree(tree: &SpanningTree, dual: &Graph, root: usize) -> Result<SpanningTree> {
    let m = dual.num_edges();
    let mut used = vec![false; m];
    for (_, e) in tree.parent.iter().flatten() {
        if *e >= m || std::mem::replace(&mut used[*e], true) {
            return Err(Error::Structural(format!("edge {e} repeated or unknown")));
        }
    }
    let n = dual.num_vertices();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &(v, e) in dual.neighbors(u) {
            if used[e] {
                continue;
            }
            if seen[v] {
                // the only legal repeat is the edge back to the parent
                if parent[u] != Some((v, e)) {
                    return Err(Error::Structural("unused dual edges contain a cycle".into()));
                }
                continue;
            }
            seen[v] = true;
            reached += 1;
            parent[v] = Some((u, e));
            queue.push_back(v);
        }
    }
    if reached != n {
        return Err(Error::Structural("unused dual edges do not span".into()));
    }
    Ok(SpanningTree { parent })
}

/// Perfect matching of the extended graph minus its root, as a mate table
/// over node ids (`usize::MAX` for the root).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimerCover {
    pub mate: Vec<usize>,
}

impl DimerCover {
    pub fn contains(&self, b: usize, w: usize) -> bool {
        self.mate[b] == w
    }

    /// `(black, white)` pairs, sorted by black.
    pub fn pairs(&self, ext: &ExtendedGraph) -> Vec<(usize, usize)> {
        (0..self.mate.len()).filter(|&v| ext.is_black(v) && self.mate[v] != NONE).map(|v| (v, self.mate[v])).collect()
    }

    pub fn to_text(&self, ext: &ExtendedGraph) -> String {
        let mut s = String::new();
        for (b, w) in self.pairs(ext) {
            let _ = writeln!(s, "{b} {w}");
        }
        s
    }

    pub fn from_text(text: &str, ext: &ExtendedGraph) -> Result<Self> {
        let mut mate = vec![NONE; ext.num_nodes()];
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let bad = || Error::Parse { line: i + 1, msg: format!("bad dimer `{line}`") };
            let mut it = line.split_whitespace().map(|x| x.parse::<usize>());
            let (Some(Ok(b)), Some(Ok(w)), None) = (it.next(), it.next(), it.next()) else {
                return Err(bad());
            };
            if b >= mate.len() || w >= mate.len() {
                return Err(bad());
            }
            mate[b] = w;
            mate[w] = b;
        }
        let cover = Self { mate };
        validate_cover(&cover, ext)?;
        Ok(cover)
    }
}

/// Checks that a cover is a perfect matching of `Ḡ` minus the root that
/// contains every forced dimer.
pub fn validate_cover(m: &DimerCover, ext: &ExtendedGraph) -> Result<()> {
    if m.mate.len() != ext.num_nodes() {
        return Err(Error::Input("cover belongs to a different graph".into()));
    }
    for v in 0..ext.num_nodes() {
        let u = m.mate[v];
        if v == ext.root {
            if u != NONE {
                return Err(Error::Input("root of the boundary cycle is matched".into()));
            }
            continue;
        }
        if u == NONE || u >= m.mate.len() || m.mate[u] != v {
            return Err(Error::Input(format!("vertex {v} is not matched exactly once")));
        }
        if ext.map.find_dart(v, u).is_none() {
            return Err(Error::Input(format!("dimer ({v}, {u}) is not an edge")));
        }
    }
    for &(b, w) in &ext.forced {
        if m.mate[b] != w {
            return Err(Error::Input(format!("forced dimer ({b}, {w}) missing")));
        }
    }
    Ok(())
}

/// Index of `𝔟` in the dual graph.
pub fn dual_root(ext: &ExtendedGraph) -> usize {
    ext.b - ext.num_interior()
}

pub fn trees_to_dimers(wired: &SpanningTree, free: &SpanningTree, ext: &ExtendedGraph) -> Result<DimerCover> {
    let ni = ext.num_interior();
    if wired.parent.len() != ni + 1 || free.parent.len() != ext.num_triangles() {
        return Err(Error::Bijection("tree sizes do not match the graph".into()));
    }
    if wired.parent[ni].is_some() || free.parent[dual_root(ext)].is_some() {
        return Err(Error::Bijection("trees are not rooted at the boundary and the removed triangle".into()));
    }
    let mut mate = vec![NONE; ext.num_nodes()];
    let pair = |b: usize, w: usize, mate: &mut Vec<usize>| -> Result<()> {
        if mate[w] != NONE {
            return Err(Error::Bijection(format!("white {w} used twice; trees are not dual")));
        }
        mate[b] = w;
        mate[w] = b;
        Ok(())
    };
    for v in 0..ni {
        let (_, e) = wired.parent[v].ok_or_else(|| Error::Bijection(format!("interior vertex {v} is a root")))?;
        pair(v, ext.crossing_node(e), &mut mate)?;
    }
    for t in 0..ext.num_triangles() {
        if let Some((_, e)) = free.parent[t] {
            pair(ext.dual_node(t), ext.crossing_node(e), &mut mate)?;
        }
    }
    for &(b, w) in &ext.forced {
        pair(b, w, &mut mate)?;
    }
    let cover = DimerCover { mate };
    validate_cover(&cover, ext).map_err(|e| Error::Bijection(e.to_string()))?;
    Ok(cover)
}

pub fn dimers_to_trees(m: &DimerCover, ext: &ExtendedGraph) -> Result<(SpanningTree, SpanningTree)> {
    validate_cover(m, ext)?;
    let ni = ext.num_interior();
    let side = |x: usize| if x < ni { x } else { ni };
    let mut wired = vec![None; ni + 1];
    for (v, slot) in wired.iter_mut().enumerate().take(ni) {
        let Node::Crossing(e) = ext.nodes[m.mate[v]] else {
            return Err(Error::Bijection(format!("interior vertex {v} matched off the crossings")));
        };
        let [p, q, _, _] = ext.crossing_ends(e);
        *slot = Some((side(if p == v { q } else { p }), e));
    }
    let mut free = vec![None; ext.num_triangles()];
    for (t, slot) in free.iter_mut().enumerate() {
        let node = ext.dual_node(t);
        if node == ext.b {
            continue;
        }
        let Node::Crossing(e) = ext.nodes[m.mate[node]] else {
            return Err(Error::Bijection(format!("triangle {t} matched to the boundary cycle")));
        };
        let [_, _, p, q] = ext.crossing_ends(e);
        *slot = Some((if p == node { q } else { p } - ni, e));
    }
    let wired = SpanningTree { parent: wired };
    let free = SpanningTree { parent: free };
    wired.validate(&ext.wired_graph()).map_err(|e| Error::Bijection(e.to_string()))?;
    free.validate(&ext.dual_graph()).map_err(|e| Error::Bijection(e.to_string()))?;
    Ok((wired, free))
}

/// Wired tree extended to the nodes of `Ḡ`: parent of each black node
/// through its matched white, the cycle vertices pointing along the cycle
/// towards the root.
pub fn extended_wired_parent(m: &DimerCover, ext: &ExtendedGraph) -> Vec<usize> {
    let mut parent = vec![NONE; ext.num_nodes()];
    for v in 0..ext.num_nodes() {
        let is_primal_side = matches!(ext.nodes[v], Node::Primal(_) | Node::Cycle(_));
        if !is_primal_side || v == ext.root {
            continue;
        }
        let w = m.mate[v];
        parent[v] = ext.neighbors(w).find(|&u| u != v && matches!(ext.nodes[u], Node::Primal(_) | Node::Cycle(_))).unwrap_or(NONE);
    }
    parent
}

/// Caches the graphs needed to sample covers of one extended graph.
#[derive(Debug, Clone)]
pub struct DimerSampler<'a> {
    ext: &'a ExtendedGraph,
    wired: Graph,
    dual: Graph,
    scan: Vec<usize>,
}

impl<'a> DimerSampler<'a> {
    pub fn new(ext: &'a ExtendedGraph) -> Self {
        let wired = ext.wired_graph();
        let scan = (0..wired.num_vertices()).collect();
        Self { ext, dual: ext.dual_graph(), wired, scan }
    }

    pub fn sample_trees<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(SpanningTree, SpanningTree)> {
        let mut in_tree = vec![false; self.wired.num_vertices()];
        in_tree[self.ext.num_interior()] = true;
        let t = wilson_scan(&self.wired, in_tree, &self.scan, rng)?;
        let d = dual_tree(&t, &self.dual, dual_root(self.ext))?;
        Ok((t, d))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<DimerCover> {
        let (t, d) = self.sample_trees(rng)?;
        trees_to_dimers(&t, &d, self.ext)
    }
}

pub fn sample_uniform_dimer<R: Rng + ?Sized>(ext: &ExtendedGraph, rng: &mut R) -> Result<DimerCover> {
    DimerSampler::new(ext).sample(rng)
}

/// Bipartite graph given by the white neighbors of each black vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartite {
    pub black_adj: Vec<Vec<usize>>,
    pub num_white: usize,
}

impl Bipartite {
    pub fn biadjacency(&self) -> Vec<Vec<bool>> {
        self.black_adj
            .iter()
            .map(|nb| {
                let mut row = vec![false; self.num_white];
                nb.iter().for_each(|&w| row[w] = true);
                row
            })
            .collect()
    }
}

/// Largest number of white vertices accepted by the exhaustive search.
pub const ENUMERATION_BUDGET: usize = 24;

/// Every perfect matching, each as the white matched to each black.
pub fn enumerate_dimer_covers(g: &Bipartite) -> Result<Vec<Vec<usize>>> {
    if g.num_white > ENUMERATION_BUDGET {
        return Err(Error::Size(format!("{} white vertices exceed the budget of {ENUMERATION_BUDGET}", g.num_white)));
    }
    let nb = g.black_adj.len();
    let mut out = Vec::new();
    if nb != g.num_white {
        return Ok(out);
    }
    let mut used = vec![false; g.num_white];
    let mut mate = vec![NONE; nb];
    fn go(g: &Bipartite, used: &mut [bool], mate: &mut [usize], left: usize, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(mate.to_vec());
            return;
        }
        // most constrained unmatched black first
        let mut best = NONE;
        let mut best_count = usize::MAX;
        for b in 0..mate.len() {
            if mate[b] == NONE {
                let c = g.black_adj[b].iter().filter(|&&w| !used[w]).count();
                if c < best_count {
                    best = b;
                    best_count = c;
                }
            }
        }
        if best_count == 0 {
            return;
        }
        for &w in &g.black_adj[best] {
            if !used[w] {
                used[w] = true;
                mate[best] = w;
                go(g, used, mate, left - 1, out);
                mate[best] = NONE;
                used[w] = false;
            }
        }
    }
    go(g, &mut used, &mut mate, nb, &mut out);
    Ok(out)
}

/// Permanent of a 0/1 square matrix by Ryser's formula with Gray-code
/// updates of the row sums.
pub fn ryser_permanent(m: &[Vec<bool>]) -> Result<i128> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Parameter("matrix is not square".into()));
    }
    if n > 30 {
        return Err(Error::Size(format!("Ryser on {n} columns is too slow")));
    }
    if n == 0 {
        return Ok(1);
    }
    let mut row_sum = vec![0i64; n];
    let mut total: i128 = 0;
    let mut gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let next = k ^ (k >> 1);
        let col = (gray ^ next).trailing_zeros() as usize;
        let add = next & (1 << col) != 0;
        for (i, s) in row_sum.iter_mut().enumerate() {
            if m[i][col] {
                *s += if add { 1 } else { -1 };
            }
        }
        gray = next;
        let prod: i128 = row_sum.iter().map(|&s| s as i128).product();
        let sign = if (n - next.count_ones() as usize) % 2 == 0 { 1 } else { -1 };
        total += sign * prod;
    }
    Ok(total)
}

/// All spanning trees of a small multigraph, as sorted edge-id lists.
pub fn enumerate_spanning_trees(g: &Graph) -> Result<Vec<Vec<usize>>> {
    let n = g.num_vertices();
    let m = g.num_edges();
    if m > 30 {
        return Err(Error::Size(format!("{m} edges is too many to enumerate")));
    }
    let mut out = Vec::new();
    if n == 0 {
        return Ok(out);
    }
    for mask in 0u64..(1u64 << m) {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let mut uf: Vec<usize> = (0..n).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        let mut ok = true;
        for e in (0..m).filter(|&e| mask & (1 << e) != 0) {
            let (a, b) = g.endpoints(e);
            let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
            if ra == rb {
                ok = false;
                break;
            }
            uf[ra] = rb;
        }
        if ok {
            out.push((0..m).filter(|&e| mask & (1 << e) != 0).collect());
        }
    }
    Ok(out)
}

/// The dimer graph `G_i`: interior vertices and triangles other than `𝔟`
/// against the crossing whites. Black `i` is node `i` for `i < b`, node
/// `i + 1` after it; white `e` is crossing `e`.
pub fn reduced_bipartite(ext: &ExtendedGraph) -> Bipartite {
    let blacks: Vec<usize> = (0..ext.num_interior() + ext.num_triangles()).filter(|&v| v != ext.b).collect();
    let black_adj = blacks
        .iter()
        .map(|&v| {
            ext.neighbors(v)
                .filter_map(|w| match ext.nodes[w] {
                    Node::Crossing(e) => Some(e),
                    _ => None,
                })
                .collect()
        })
        .collect();
    Bipartite { black_adj, num_white: ext.num_crossings() }
}

/// `Ḡ` minus its root, all vertices kept; returns the black and white node
/// lists alongside.
pub fn extended_bipartite(ext: &ExtendedGraph) -> (Bipartite, Vec<usize>, Vec<usize>) {
    let blacks: Vec<usize> = (0..ext.num_nodes()).filter(|&v| ext.is_black(v) && v != ext.root).collect();
    let whites: Vec<usize> = (0..ext.num_nodes()).filter(|&v| !ext.is_black(v)).collect();
    let mut white_index = vec![NONE; ext.num_nodes()];
    for (i, &w) in whites.iter().enumerate() {
        white_index[w] = i;
    }
    let black_adj = blacks.iter().map(|&v| ext.neighbors(v).map(|w| white_index[w]).collect()).collect();
    (Bipartite { black_adj, num_white: whites.len() }, blacks, whites)
}

/// Cover of `Ḡ` from a matching of `G_i` as returned by
/// [`enumerate_dimer_covers`] on [`reduced_bipartite`].
pub fn cover_from_reduced(ext: &ExtendedGraph, matching: &[usize]) -> DimerCover {
    let blacks = (0..ext.num_interior() + ext.num_triangles()).filter(|&v| v != ext.b);
    let mut mate = vec![NONE; ext.num_nodes()];
    for (v, &e) in blacks.zip(matching) {
        let w = ext.crossing_node(e);
        mate[v] = w;
        mate[w] = v;
    }
    for &(b, w) in &ext.forced {
        mate[b] = w;
        mate[w] = b;
    }
    DimerCover { mate }
}
