//! Superposition of two covers: loops, separation counts, height
//! differences and the statistics built on them.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{point_in_polygon, Point};
use crate::sampler::DimerCover;
use crate::stats::{chi_square, sign_sum_law, wilson_interval, ChiSquare, Summary};
use crate::temperley::ExtendedGraph;

/// One alternating cycle of `M Δ M'`, listed from its smallest node, with
/// the edge from `nodes[i]` to `nodes[i + 1]` in the first cover for even `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Loop {
    pub nodes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct LoopEnsemble {
    pub loops: Vec<Loop>,
    /// `(black, white)` dimers shared by both covers.
    pub doubled: Vec<(usize, usize)>,
    /// Loop id of each node, `None` off the loops.
    pub loop_of: Vec<Option<usize>>,
    /// Index of each loop node within its loop.
    pub position: Vec<usize>,
}

pub fn symmetric_difference(ext: &ExtendedGraph, m1: &DimerCover, m2: &DimerCover) -> Result<LoopEnsemble> {
    let n = ext.num_nodes();
    if m1.mate.len() != n || m2.mate.len() != n {
        return Err(Error::Input("covers do not belong to this graph".into()));
    }
    let mut ens = LoopEnsemble { loops: Vec::new(), doubled: Vec::new(), loop_of: vec![None; n], position: vec![0; n] };
    for v in 0..n {
        let (a, b) = (m1.mate[v], m2.mate[v]);
        if a == b {
            if a != usize::MAX && ext.is_black(v) {
                ens.doubled.push((v, a));
            }
            continue;
        }
        if a == usize::MAX || b == usize::MAX {
            return Err(Error::Input(format!("node {v} is matched in only one cover")));
        }
        if ens.loop_of[v].is_some() {
            continue;
        }
        let id = ens.loops.len();
        let mut nodes = vec![v];
        ens.loop_of[v] = Some(id);
        let mut cur = v;
        loop {
            let mate = if nodes.len() % 2 == 1 { &m1.mate } else { &m2.mate };
            let next = mate[cur];
            if next == v {
                break;
            }
            if ens.loop_of[next].is_some() || nodes.len() > n || m1.mate[next] == m2.mate[next] {
                return Err(Error::Input(format!("symmetric difference is not a union of cycles at {next}")));
            }
            ens.loop_of[next] = Some(id);
            ens.position[next] = nodes.len();
            nodes.push(next);
            cur = next;
        }
        if nodes.len() % 2 == 1 {
            return Err(Error::Input("odd alternating cycle".into()));
        }
        ens.loops.push(Loop { nodes });
    }
    Ok(ens)
}

impl LoopEnsemble {
    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }

    pub fn polygon(&self, ext: &ExtendedGraph, id: usize) -> Vec<Point> {
        self.loops[id].nodes.iter().map(|&v| ext.pos[v]).collect()
    }

    /// Loop owning the edge `u v`, if it is a loop edge.
    pub fn loop_of_edge(&self, u: usize, v: usize) -> Option<usize> {
        let id = self.loop_of[u]?;
        (self.loop_of[v] == Some(id) && {
            let nodes = &self.loops[id].nodes;
            let i = self.position[u];
            let k = nodes.len();
            nodes[(i + 1) % k] == v || nodes[(i + k - 1) % k] == v
        })
        .then_some(id)
    }
}

/// Loops separating two faces, found by both methods.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub count: usize,
    pub loops: Vec<usize>,
}

/// Loops with exactly one of `m(f)`, `m(f')` inside, cross-checked against
/// the loops crossed an odd number of times by a shortest dual path.
pub fn separating_loops(ens: &LoopEnsemble, ext: &ExtendedGraph, f: usize, g: usize) -> Result<Separation> {
    let inside = separating_by_inclusion(ens, ext, f, g);
    let parity = separating_by_parity(ens, ext, f, g)?;
    if inside != parity {
        let bad = inside.iter().chain(&parity).find(|id| !(inside.contains(id) && parity.contains(id)));
        return Err(Error::Geometry(format!("inclusion and parity disagree on loop {}", bad.copied().unwrap_or(0))));
    }
    Ok(Separation { count: inside.len(), loops: inside })
}

pub fn separating_by_inclusion(ens: &LoopEnsemble, ext: &ExtendedGraph, f: usize, g: usize) -> Vec<usize> {
    let (a, b) = (ext.faces[f].mid, ext.faces[g].mid);
    (0..ens.loops.len())
        .filter(|&id| {
            let poly = ens.polygon(ext, id);
            point_in_polygon(a, &poly) != point_in_polygon(b, &poly)
        })
        .collect()
}

/// Shortest path of bounded faces, as the darts crossed from `f` to `g`.
pub fn dual_path(ext: &ExtendedGraph, f: usize, g: usize) -> Result<Vec<usize>> {
    let mut via = vec![usize::MAX; ext.faces.len()];
    via[f] = usize::MAX - 1;
    let mut queue = VecDeque::from([f]);
    while let Some(x) = queue.pop_front() {
        if x == g {
            break;
        }
        for d in ext.face_darts(x) {
            let y = ext.face_of[ext.map.twin(d)];
            if y != ext.outer && via[y] == usize::MAX {
                via[y] = d;
                queue.push_back(y);
            }
        }
    }
    if via[g] == usize::MAX {
        return Err(Error::Structural(format!("faces {f} and {g} are not connected")));
    }
    let mut path = Vec::new();
    let mut x = g;
    while x != f {
        let d = via[x];
        path.push(d);
        x = ext.face_of[d];
    }
    path.reverse();
    Ok(path)
}

pub fn separating_by_parity(ens: &LoopEnsemble, ext: &ExtendedGraph, f: usize, g: usize) -> Result<Vec<usize>> {
    let mut crossings: HashMap<usize, usize> = HashMap::new();
    for d in dual_path(ext, f, g)? {
        if let Some(id) = ens.loop_of_edge(ext.map.origin(d), ext.map.target(d)) {
            *crossings.entry(id).or_default() += 1;
        }
    }
    let mut odd: Vec<usize> = crossings.into_iter().filter(|&(_, c)| c % 2 == 1).map(|(id, _)| id).collect();
    odd.sort_unstable();
    Ok(odd)
}

pub fn delta_height(h1: &[f64], h2: &[f64]) -> Vec<f64> {
    h1.iter().zip(h2).map(|(a, b)| a - b).collect()
}

/// Chi-square comparison of one stratum `|ℒ| = k` with the law of a sum of
/// `k` fair signs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stratum {
    pub loops: usize,
    pub n: usize,
    /// `None` when the stratum is too small or degenerate.
    pub test: Option<ChiSquare>,
    /// Fraction of positive values (for `k = 1`).
    pub positive_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernoulliReport {
    pub strata: Vec<Stratum>,
    pub skipped: Vec<(usize, usize)>,
    pub variance: f64,
    pub mean_loops: f64,
    /// Mean and standard error of `D² - |ℒ|`, whose expectation is zero
    /// exactly when the variance identity holds (given `E[D | ℒ] = 0`).
    pub identity_gap: Summary,
    pub min_p_value: f64,
}

pub const MIN_STRATUM: usize = 50;

/// `samples` are pairs `(Δh(f) - Δh(f'), |ℒ(f, f')|)`. Values must be
/// integers up to rounding.
pub fn verify_loop_bernoulli(samples: &[(f64, usize)]) -> Result<BernoulliReport> {
    let mut by_k: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for &(d, k) in samples {
        let r = d.round();
        if (d - r).abs() > 1e-6 {
            return Err(Error::Input(format!("height difference {d} is not an integer")));
        }
        by_k.entry(k).or_default().push(r as i64);
    }
    let mut strata = Vec::new();
    let mut skipped = Vec::new();
    let mut min_p: f64 = 1.0;
    for (&k, values) in &by_k {
        if values.len() < MIN_STRATUM {
            skipped.push((k, values.len()));
            continue;
        }
        let law = sign_sum_law(k);
        let mut counts = vec![0u64; law.len()];
        let mut outside = 0;
        for &v in values {
            match law.iter().position(|&(s, _)| s == v) {
                Some(i) => counts[i] += 1,
                None => outside += 1,
            }
        }
        let test = if outside > 0 {
            // off the support: impossible under the law
            Some(ChiSquare { statistic: f64::INFINITY, dof: law.len().max(1) - 1, p_value: 0.0, cells: law.len() })
        } else if k == 0 {
            None
        } else {
            Some(chi_square(&counts, &law.iter().map(|&(_, p)| p).collect::<Vec<_>>())?)
        };
        if let Some(t) = &test {
            min_p = min_p.min(t.p_value);
        }
        let positive = values.iter().filter(|&&v| v > 0).count() as f64 / values.len() as f64;
        strata.push(Stratum { loops: k, n: values.len(), test, positive_fraction: positive });
    }
    let d: Vec<f64> = samples.iter().map(|s| s.0.round()).collect();
    let l: Vec<f64> = samples.iter().map(|s| s.1 as f64).collect();
    let gap: Vec<f64> = d.iter().zip(&l).map(|(d, l)| d * d - l).collect();
    Ok(BernoulliReport {
        strata,
        skipped,
        variance: Summary::of(&d).variance,
        mean_loops: Summary::of(&l).mean,
        identity_gap: Summary::of(&gap),
        min_p_value: min_p,
    })
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterReport {
    pub threshold: f64,
    /// Components sorted by decreasing size, faces ascending inside.
    pub components: Vec<Vec<usize>>,
    /// size -> number of components
    pub histogram: BTreeMap<usize, usize>,
    pub largest: usize,
}

/// Components of `{f : |h(f)| > k}` under adjacency of bounded faces.
pub fn height_clusters(ext: &ExtendedGraph, h: &[f64], k: f64) -> ClusterReport {
    let nf = ext.faces.len();
    let hot: Vec<bool> = h.iter().map(|x| x.abs() > k).collect();
    let mut uf = UnionFind::new(nf);
    for d in 0..ext.map.num_darts() {
        let (a, b) = (ext.face_of[d], ext.face_of[ext.map.twin(d)]);
        if a < b && b != ext.outer && hot[a] && hot[b] {
            uf.union(a, b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for f in (0..nf).filter(|&f| hot[f]) {
        groups.entry(uf.find(f)).or_default().push(f);
    }
    let mut components: Vec<Vec<usize>> = groups.into_values().collect();
    components.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let mut histogram = BTreeMap::new();
    for c in &components {
        *histogram.entry(c.len()).or_default() += 1;
    }
    let largest = components.first().map_or(0, Vec::len);
    ClusterReport { threshold: k, components, histogram, largest }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailRow {
    pub k: f64,
    pub count: u64,
    pub n: u64,
    pub p: f64,
    pub lo: f64,
    pub hi: f64,
    /// No exceedances observed: the estimate is an upper bound only.
    pub censored: bool,
    /// `ln ln (1 / p)`, `NaN` when undefined.
    pub log_log: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailTable {
    pub rows: Vec<TailRow>,
    /// `(j, E|h|^j)` summaries for `j = 1..=4`.
    pub moments: Vec<(u32, Summary)>,
}

pub fn tail_statistics(values: &[f64], ks: &[f64]) -> TailTable {
    let n = values.len() as u64;
    let rows = ks
        .iter()
        .map(|&k| {
            let count = values.iter().filter(|x| x.abs() > k).count() as u64;
            let p = count as f64 / n.max(1) as f64;
            let (lo, hi) = wilson_interval(count, n, 1.96);
            let log_log = if p > 0.0 && p < 1.0 { (1.0 / p).ln().ln() } else { f64::NAN };
            TailRow { k, count, n, p, lo, hi, censored: count == 0, log_log }
        })
        .collect();
    let moments = (1..=4)
        .map(|j| {
            let m: Vec<f64> = values.iter().map(|x| x.abs().powi(j as i32)).collect();
            (j, Summary::of(&m))
        })
        .collect();
    TailTable { rows, moments }
}

/// Comparison of an exponential fit with a Gompertz fit (survival
/// `exp(-η (e^{b k} - 1))`, which has doubly exponential tails for `b > 0`
/// and tends to the exponential law as `b -> 0`), both fitted by maximum
/// likelihood to the counts of `|h|` between consecutive thresholds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub thresholds: Vec<f64>,
    pub counts: Vec<u64>,
    pub rate: f64,
    pub log_lik_exponential: f64,
    pub eta: f64,
    pub b: f64,
    pub log_lik_gompertz: f64,
    /// Likelihood-ratio statistic, chi-square with one degree of freedom
    /// under the exponential null.
    pub lr_statistic: f64,
    pub p_value: f64,
}

/// Maximizes `f` over `[lo, hi]`: grid scan, then golden section around the
/// best grid point.
fn maximize(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let steps = 120;
    let h = (hi - lo) / steps as f64;
    let best = (0..=steps).map(|i| lo + i as f64 * h).map(|t| (t, f(t))).fold((lo, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let (mut a, mut c) = ((best.0 - h).max(lo), (best.0 + h).min(hi));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let x1 = c - g * (c - a);
        let x2 = a + g * (c - a);
        if f(x1) < f(x2) {
            a = x1;
        } else {
            c = x2;
        }
    }
    let t = 0.5 * (a + c);
    let v = f(t);
    if v >= best.1 {
        (t, v)
    } else {
        best
    }
}

/// `thresholds` must start at 0 and increase; the last bin is open.
pub fn fit_tail_decay(values: &[f64], thresholds: &[f64]) -> Result<DecayFit> {
    if thresholds.len() < 3 || thresholds[0] != 0.0 || thresholds.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Parameter("need at least three increasing thresholds starting at 0".into()));
    }
    let m = thresholds.len();
    let mut counts = vec![0u64; m];
    for v in values {
        let a = v.abs();
        counts[thresholds.iter().rposition(|&k| a >= k).expect("starts at 0")] += 1;
    }
    if counts[1..].iter().all(|&c| c == 0) {
        return Err(Error::Parameter("no values beyond the first threshold".into()));
    }
    let loglik = |surv: &dyn Fn(f64) -> f64| -> f64 {
        (0..m)
            .filter(|&i| counts[i] > 0)
            .map(|i| {
                let p = surv(thresholds[i]) - if i + 1 < m { surv(thresholds[i + 1]) } else { 0.0 };
                counts[i] as f64 * p.max(1e-300).ln()
            })
            .sum()
    };
    let exp_ll = |t: f64| loglik(&|k| (-t.exp() * k).exp());
    let (lr_rate, ll_exp) = maximize(&exp_ll, -12.0, 8.0);
    let gom = |lb: f64, le: f64| loglik(&|k| (-le.exp() * (lb.exp() * k).exp_m1()).exp());
    let inner = |lb: f64| maximize(&|le| gom(lb, le), -20.0, 8.0);
    let (lb, ll_gom) = maximize(&|lb| inner(lb).1, -12.0, 5.0);
    let le = inner(lb).0;
    let lr = (2.0 * (ll_gom - ll_exp)).max(0.0);
    let p_value = statrs::distribution::ContinuousCDF::sf(&statrs::distribution::ChiSquared::new(1.0).expect("dof"), lr);
    Ok(DecayFit {
        thresholds: thresholds.to_vec(),
        counts,
        rate: lr_rate.exp(),
        log_lik_exponential: ll_exp,
        eta: le.exp(),
        b: lb.exp(),
        log_lik_gompertz: ll_gom,
        lr_statistic: lr,
        p_value,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationRow {
    pub faces: Vec<usize>,
    pub mean: f64,
    pub se: f64,
    pub n: usize,
}

/// Empirical `E[Δh(f_1) .. Δh(f_k)]` for each tuple whose faces are at least
/// `eta` apart in the embedding; closer tuples are skipped.
pub fn correlation_decay(ext: &ExtendedGraph, fields: &[Vec<f64>], tuples: &[Vec<usize>], eta: f64) -> Vec<CorrelationRow> {
    tuples
        .iter()
        .filter(|t| {
            t.iter().enumerate().all(|(i, &a)| t[i + 1..].iter().all(|&b| (ext.faces[a].mid - ext.faces[b].mid).norm() >= eta))
        })
        .map(|t| {
            let prods: Vec<f64> = fields.iter().map(|h| t.iter().map(|&f| h[f]).product()).collect();
            let s = Summary::of(&prods);
            CorrelationRow { faces: t.clone(), mean: s.mean, se: s.se, n: s.n }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoopSizes {
    pub count: usize,
    pub max_length: usize,
    /// Largest loop diameter in hops of the extended graph.
    pub max_diameter: usize,
    /// Largest Euclidean diameter of a loop in the embedding.
    pub max_extent: f64,
}

/// Loop lengths and diameters. A loop's hop diameter is estimated by a double
/// sweep: the farthest loop node from an arbitrary one, then the farthest
/// loop node from that, all distances measured in the extended graph.
pub fn loop_sizes(ens: &LoopEnsemble, ext: &ExtendedGraph) -> LoopSizes {
    let mut out = LoopSizes { count: ens.loops.len(), max_length: 0, max_diameter: 0, max_extent: 0.0 };
    let mut dist = vec![usize::MAX; ext.num_nodes()];
    let mut touched = Vec::new();
    let mut farthest = |from: usize, nodes: &[usize], dist: &mut Vec<usize>| -> (usize, usize) {
        for &v in &touched {
            dist[v] = usize::MAX;
        }
        touched.clear();
        let mut remaining = nodes.len();
        let member: std::collections::HashSet<usize> = nodes.iter().copied().collect();
        let mut best = (from, 0);
        dist[from] = 0;
        touched.push(from);
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if member.contains(&u) {
                best = (u, dist[u]);
                remaining -= 1;
                if remaining == 0 {
                    break;
                }
            }
            for w in ext.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    touched.push(w);
                    queue.push_back(w);
                }
            }
        }
        best
    };
    for l in &ens.loops {
        out.max_length = out.max_length.max(l.nodes.len());
        let (a, _) = farthest(l.nodes[0], &l.nodes, &mut dist);
        let (_, d) = farthest(a, &l.nodes, &mut dist);
        out.max_diameter = out.max_diameter.max(d);
        for (i, &u) in l.nodes.iter().enumerate() {
            for &v in &l.nodes[i + 1..] {
                out.max_extent = out.max_extent.max((ext.pos[u] - ext.pos[v]).norm());
            }
        }
    }
    out
}
