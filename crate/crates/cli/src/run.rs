//! Experiment pipelines. Each one returns its artifacts in memory; the
//! caller writes them and the manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use hyperdimer::doubledimer::{
    correlation_decay, delta_height, fit_tail_decay, height_clusters, loop_sizes, separating_loops, symmetric_difference,
    tail_statistics, verify_loop_bernoulli,
};
use hyperdimer::geometry::Point;
use hyperdimer::height::heights_at_boundary;
use hyperdimer::packing::{euclidean_angle_residual, pack_in_disc, tangency_audit, Packing};
use hyperdimer::parallel::map_replicas;
use hyperdimer::sampler::DimerSampler;
use hyperdimer::stats::Summary;
use hyperdimer::temperley::{build_extended, ExtendedGraph, Node};
use hyperdimer::triangulation::build_regular_ball;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::svg::{render, Scene};

pub const SEED_DERIVATION: &str =
    "ChaCha8Rng::seed_from_u64(seed) with set_stream(s) for s in 0..streams; draw i comes from stream i % streams";

#[derive(Debug)]
pub enum RunError {
    Numerical(hyperdimer::Error),
    Validation(hyperdimer::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Numerical(e) | RunError::Validation(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<hyperdimer::Error> for RunError {
    fn from(e: hyperdimer::Error) -> Self {
        if e.is_validation() {
            RunError::Validation(e)
        } else {
            RunError::Numerical(e)
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

type Artifacts = Vec<(String, Vec<u8>)>;

struct Patch {
    packing: Packing,
    ext: ExtendedGraph,
    /// Faces whose primal corner lies strictly inside the window radius.
    window: Vec<usize>,
    root_face: usize,
    boundary_point: Point,
}

fn patch(cfg: &ExperimentConfig) -> Result<Patch, RunError> {
    let tri = build_regular_ball(cfg.degree, cfg.sampling_radius)?;
    let packing = pack_in_disc(&tri, cfg.tolerance)?;
    let ext = build_extended(&tri, &packing, cfg.target_angle)?;
    let dist = tri.bfs_distances(tri.root())?;
    let window: Vec<usize> = (0..ext.faces.len())
        .filter(|&f| matches!(ext.nodes[ext.faces[f].nodes[0]], Node::Primal(v) if dist[v] < cfg.radius))
        .collect();
    let root_face = window
        .iter()
        .copied()
        .find(|&f| ext.nodes[ext.faces[f].nodes[0]] == Node::Primal(tri.root()))
        .expect("the root is interior to the window");
    let boundary_point = Point::from_polar(1.0, cfg.target_angle);
    Ok(Patch { packing, ext, window, root_face, boundary_point })
}

/// `n` draws spread over `cfg.streams` independent streams, returned in
/// draw order.
fn draws<T, F>(cfg: &ExperimentConfig, n: usize, f: F) -> Result<Vec<T>, RunError>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> hyperdimer::Result<T> + Sync + Send,
{
    let streams = cfg.streams.min(n);
    let chunks = map_replicas(cfg.seed, streams, |s, rng| (s..n).step_by(streams).map(|_| f(rng)).collect::<hyperdimer::Result<Vec<T>>>());
    let mut chunks: Vec<std::vec::IntoIter<T>> = chunks.into_iter().map(|c| c.map(Vec::into_iter)).collect::<hyperdimer::Result<_>>()?;
    Ok((0..n).map(|i| chunks[i % streams].next().expect("stream length")).collect())
}

fn json_bytes(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s.into_bytes()
}

fn face_xy(ext: &ExtendedGraph, f: usize) -> (f64, f64) {
    (ext.faces[f].mid.re, ext.faces[f].mid.im)
}

fn nearest_face(p: &Patch, z: Point) -> usize {
    *p.window.iter().min_by(|&&a, &&b| (p.ext.faces[a].mid - z).norm().total_cmp(&(p.ext.faces[b].mid - z).norm())).unwrap()
}

fn summary_json(s: &Summary) -> Value {
    json!({ "n": s.n, "mean": s.mean, "variance": s.variance, "se": s.se })
}

fn pack(cfg: &ExperimentConfig) -> Result<Artifacts, RunError> {
    let tri = build_regular_ball(cfg.degree, cfg.radius)?;
    let packing = pack_in_disc(&tri, cfg.tolerance)?;
    let (tangency, _) = tangency_audit(&tri, &packing);
    let summary = json!({
        "vertices": tri.num_vertices(),
        "boundary": tri.boundary().len(),
        "angle_residual": euclidean_angle_residual(&tri, &packing),
        "tangency_residual": tangency,
    });
    let mut out = vec![
        ("packing.csv".to_string(), packing.to_csv().into_bytes()),
        ("packing.json".to_string(), json_bytes(&summary)),
    ];
    if cfg.svg {
        out.push(("packing.svg".into(), render(&Scene::Packing(&packing)).into_bytes()));
    }
    Ok(out)
}

fn sample(cfg: &ExperimentConfig) -> Result<Artifacts, RunError> {
    let p = patch(cfg)?;
    let s = DimerSampler::new(&p.ext);
    let covers = draws(cfg, cfg.samples, |rng| s.sample(rng))?;
    let inside: Vec<bool> = {
        let mut m = vec![false; p.ext.num_nodes()];
        for &f in &p.window {
            for v in p.ext.faces[f].nodes {
                m[v] = true;
            }
        }
        m
    };
    let mut freq: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for m in &covers {
        for (b, w) in m.pairs(&p.ext) {
            if inside[b] && inside[w] {
                *freq.entry((b, w)).or_default() += 1;
            }
        }
    }
    let mut csv = String::from("black,white,frequency\n");
    for ((b, w), c) in &freq {
        let _ = writeln!(csv, "{b},{w},{:?}", *c as f64 / covers.len() as f64);
    }
    let summary = json!({
        "samples": covers.len(),
        "faces": p.ext.faces.len(),
        "window_faces": p.window.len(),
        "window_edges_seen": freq.len(),
    });
    let mut out = vec![
        ("dimers.csv".to_string(), csv.into_bytes()),
        ("cover_0.txt".to_string(), covers[0].to_text(&p.ext).into_bytes()),
        ("sample.json".to_string(), json_bytes(&summary)),
    ];
    if cfg.svg {
        out.push(("cover.svg".into(), render(&Scene::Cover(&p.packing, &p.ext, &covers[0])).into_bytes()));
        out.push(("trees.svg".into(), render(&Scene::Trees(&p.packing, &p.ext, &covers[0])).into_bytes()));
    }
    Ok(out)
}

/// Boundary-normalized heights on the whole sampling ball, one row per draw.
fn height_draws(cfg: &ExperimentConfig, p: &Patch, n: usize) -> Result<Vec<Vec<f64>>, RunError> {
    let s = DimerSampler::new(&p.ext);
    draws(cfg, n, |rng| heights_at_boundary(&s.sample(rng)?, &p.ext, p.boundary_point))
}

fn heights(cfg: &ExperimentConfig) -> Result<Artifacts, RunError> {
    let p = patch(cfg)?;
    let fields = height_draws(cfg, &p, cfg.samples)?;
    let mut csv = String::from("face_id,x,y,mean,variance\n");
    let mut means = vec![f64::NAN; p.ext.faces.len()];
    for &f in &p.window {
        let s = Summary::of(&fields.iter().map(|h| h[f]).collect::<Vec<_>>());
        let (x, y) = face_xy(&p.ext, f);
        let _ = writeln!(csv, "{f},{x:?},{y:?},{:?},{:?}", s.mean, s.variance);
        means[f] = s.mean;
    }
    let root = Summary::of(&fields.iter().map(|h| h[p.root_face]).collect::<Vec<_>>());
    let summary = json!({ "samples": fields.len(), "root_face": p.root_face, "root_height": summary_json(&root) });
    let mut out = vec![("heights.csv".to_string(), csv.into_bytes()), ("heights.json".to_string(), json_bytes(&summary))];
    if cfg.svg {
        out.push(("heatmap.svg".into(), render(&Scene::Heatmap(&p.ext, &means)).into_bytes()));
    }
    Ok(out)
}

fn doubledimer(cfg: &ExperimentConfig) -> Result<Artifacts, RunError> {
    let p = patch(cfg)?;
    let s = DimerSampler::new(&p.ext);
    let up = nearest_face(&p, Point::new(0.0, 0.5));
    let down = nearest_face(&p, Point::new(0.0, -0.5));
    let pairs = [(p.root_face, p.ext.base_face), (p.root_face, up), (up, down)];
    let rows = draws(cfg, cfg.samples, |rng| {
        let (a, b) = (s.sample(rng)?, s.sample(rng)?);
        let dh = delta_height(&heights_at_boundary(&a, &p.ext, p.boundary_point)?, &heights_at_boundary(&b, &p.ext, p.boundary_point)?);
        let ens = symmetric_difference(&p.ext, &a, &b)?;
        let mut per_pair = Vec::with_capacity(pairs.len());
        for &(f, g) in &pairs {
            per_pair.push((dh[f] - dh[g], separating_loops(&ens, &p.ext, f, g)?.count));
        }
        Ok((ens.loops.len(), ens.doubled.len(), per_pair))
    })?;
    let mut csv = String::from("draw,loops,doubled_edges");
    for (f, g) in pairs {
        let _ = write!(csv, ",dh_{f}_{g},separating_{f}_{g}");
    }
    csv.push('\n');
    for (i, (loops, doubled, per_pair)) in rows.iter().enumerate() {
        let _ = write!(csv, "{i},{loops},{doubled}");
        for (d, k) in per_pair {
            let _ = write!(csv, ",{d:?},{k}");
        }
        csv.push('\n');
    }
    let mut reports = Vec::new();
    for (i, &(f, g)) in pairs.iter().enumerate() {
        let samples: Vec<(f64, usize)> = rows.iter().map(|r| r.2[i]).collect();
        let rep = verify_loop_bernoulli(&samples)?;
        reports.push(json!({ "faces": [f, g], "report": serde_json::to_value(&rep).expect("serializable") }));
    }
    let mut out = vec![
        ("doubledimer.csv".to_string(), csv.into_bytes()),
        ("bernoulli.json".to_string(), json_bytes(&json!({ "samples": rows.len(), "pairs": reports }))),
    ];
    if cfg.svg {
        let mut rng = hyperdimer::parallel::replica_rng(cfg.seed, 0);
        let (a, b) = (s.sample(&mut rng)?, s.sample(&mut rng)?);
        let ens = symmetric_difference(&p.ext, &a, &b)?;
        out.push(("loops.svg".into(), render(&Scene::Loops(&p.packing, &p.ext, &ens)).into_bytes()));
    }
    Ok(out)
}

fn tails(cfg: &ExperimentConfig) -> Result<Artifacts, RunError> {
    let p = patch(cfg)?;
    let s = DimerSampler::new(&p.ext);
    let root = p.root_face;
    let h = draws(cfg, cfg.samples, |rng| Ok(heights_at_boundary(&s.sample(rng)?, &p.ext, p.boundary_point)?[root]))?;
    let kmax = h.iter().fold(0.0f64, |a, b| a.max(b.abs())).ceil() as usize + 1;
    let ks: Vec<f64> = (0..=kmax.max(3)).map(|k| k as f64).collect();
    let table = tail_statistics(&h, &ks);
    let mut csv = String::from("k,count,n,p,lo,hi,censored,log_log\n");
    for r in &table.rows {
        let _ = writeln!(csv, "{:?},{},{},{:?},{:?},{:?},{},{:?}", r.k, r.count, r.n, r.p, r.lo, r.hi, r.censored, r.log_log);
    }
    let fit = fit_tail_decay(&h, &ks).ok();
    let summary = json!({
        "samples": h.len(),
        "root_face": root,
        "moments": table.moments.iter().map(|(j, s)| json!({ "order": j, "summary": summary_json(s) })).collect::<Vec<_>>(),
        "decay_fit": fit.map(|f| serde_json::to_value(&f).expect("serializable")),
    });
    Ok(vec![("tails.csv".to_string(), csv.into_bytes()), ("tails.json".to_string(), json_bytes(&summary))])
}

fn clusters(cfg: &ExperimentConfig) -> Result<Artifacts, RunError> {
    let p = patch(cfg)?;
    let fields = height_draws(cfg, &p, cfg.samples)?;
    let volume = p.ext.faces.len();
    let mut csv = String::from("draw,components,largest,largest_fraction\n");
    let mut fractions = Vec::new();
    for (i, h) in fields.iter().enumerate() {
        let c = height_clusters(&p.ext, h, cfg.threshold);
        let frac = c.largest as f64 / volume as f64;
        let _ = writeln!(csv, "{i},{},{},{frac:?}", c.components.len(), c.largest);
        fractions.push(frac);
    }
    let summary = json!({ "threshold": cfg.threshold, "faces": volume, "largest_fraction": summary_json(&Summary::of(&fractions)) });
    Ok(vec![("clusters.csv".to_string(), csv.into_bytes()), ("clusters.json".to_string(), json_bytes(&summary))])
}

fn correlation(cfg: &ExperimentConfig) -> Result<Artifacts, RunError> {
    let p = patch(cfg)?;
    let s = DimerSampler::new(&p.ext);
    let fields = draws(cfg, cfg.samples, |rng| {
        let (a, b) = (s.sample(rng)?, s.sample(rng)?);
        Ok(delta_height(&heights_at_boundary(&a, &p.ext, p.boundary_point)?, &heights_at_boundary(&b, &p.ext, p.boundary_point)?))
    })?;
    // the root face against the window face nearest each of a few radii
    let probes: Vec<usize> = (1..=4).map(|k| nearest_face(&p, Point::new(0.2 * k as f64, 0.0))).collect();
    let mut tuples = vec![vec![p.root_face]];
    for &g in &probes {
        if g != p.root_face {
            tuples.push(vec![p.root_face, g]);
        }
    }
    let rows = correlation_decay(&p.ext, &fields, &tuples, 1e-9);
    let mut csv = String::from("faces,distance,mean,se,n\n");
    for r in &rows {
        let names: Vec<String> = r.faces.iter().map(usize::to_string).collect();
        let d = r.faces.last().map_or(0.0, |&g| (p.ext.faces[g].mid - p.ext.faces[r.faces[0]].mid).norm());
        let _ = writeln!(csv, "{},{d:?},{:?},{:?},{}", names.join(" "), r.mean, r.se, r.n);
    }
    Ok(vec![("correlation.csv".to_string(), csv.into_bytes())])
}

fn loops(cfg: &ExperimentConfig) -> Result<Artifacts, RunError> {
    let p = patch(cfg)?;
    let s = DimerSampler::new(&p.ext);
    let sizes = draws(cfg, cfg.samples, |rng| {
        let (a, b) = (s.sample(rng)?, s.sample(rng)?);
        Ok(loop_sizes(&symmetric_difference(&p.ext, &a, &b)?, &p.ext))
    })?;
    let mut csv = String::from("draw,count,max_length,max_hop_diameter,max_extent\n");
    for (i, l) in sizes.iter().enumerate() {
        let _ = writeln!(csv, "{i},{},{},{},{:?}", l.count, l.max_length, l.max_diameter, l.max_extent);
    }
    let extents: Vec<f64> = sizes.iter().map(|l| l.max_extent).collect();
    let summary = json!({ "samples": sizes.len(), "max_extent": summary_json(&Summary::of(&extents)) });
    Ok(vec![("loops.csv".to_string(), csv.into_bytes()), ("loops.json".to_string(), json_bytes(&summary))])
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Runs the experiment, writes its artifacts and `manifest.json`, and
/// returns the manifest.
pub fn run(cfg: &ExperimentConfig) -> Result<Value, RunError> {
    let start = Instant::now();
    let artifacts = match cfg.experiment.as_str() {
        "pack" => pack(cfg)?,
        "sample" => sample(cfg)?,
        "heights" => heights(cfg)?,
        "doubledimer" => doubledimer(cfg)?,
        "tails" => tails(cfg)?,
        "clusters" => clusters(cfg)?,
        "correlation" => correlation(cfg)?,
        "loops" => loops(cfg)?,
        other => unreachable!("validated experiment name {other}"),
    };
    std::fs::create_dir_all(&cfg.out)?;
    let mut files = Vec::new();
    let mut data = Sha256::new();
    for (name, bytes) in &artifacts {
        std::fs::write(Path::new(&cfg.out).join(name), bytes)?;
        let h = sha256_hex(bytes);
        data.update(name.as_bytes());
        data.update(h.as_bytes());
        files.push(json!({ "name": name, "sha256": h, "bytes": bytes.len() }));
    }
    let canonical = cfg.canonical();
    let manifest = json!({
        "experiment": cfg.experiment,
        "config": canonical,
        "config_sha256": sha256_hex(canonical.as_bytes()),
        "seed": cfg.seed,
        "streams": cfg.streams,
        "seed_derivation": SEED_DERIVATION,
        "versions": {
            "hyperdimer": env!("CARGO_PKG_VERSION"),
            "parallel": cfg!(feature = "parallel"),
        },
        "files": files,
        "data_sha256": hex::encode(data.finalize()),
        "wall_time_seconds": start.elapsed().as_secs_f64(),
    });
    std::fs::write(Path::new(&cfg.out).join("manifest.json"), json_bytes(&manifest))?;
    Ok(manifest)
}
