//! Flat `key = value` configuration with command-line overrides.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

pub const EXPERIMENTS: [&str; 8] = ["pack", "sample", "heights", "doubledimer", "tails", "clusters", "correlation", "loops"];

/// Every recognised key with its default; `None` means required or derived.
const KEYS: [(&str, Option<&str>); 11] = [
    ("degree", Some("7")),
    ("radius", Some("3")),
    ("sampling-radius", None),
    ("samples", Some("1000")),
    ("seed", Some("42")),
    ("streams", Some("16")),
    ("target-angle", Some("0")),
    ("tolerance", Some("1e-12")),
    ("threshold", Some("1")),
    ("svg", Some("true")),
    ("out", None),
];

const MAX_RADIUS: usize = 9;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub degree: usize,
    /// Observation window.
    pub radius: usize,
    /// Ball on which covers are sampled; strictly larger than the window.
    pub sampling_radius: usize,
    pub samples: usize,
    pub seed: u64,
    pub streams: usize,
    pub target_angle: f64,
    /// Radius solver tolerance.
    pub tolerance: f64,
    /// Cluster threshold `k`.
    pub threshold: f64,
    pub svg: bool,
    pub out: PathBuf,
}

/// All problems found in one pass.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationError(pub Vec<String>);

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration:")?;
        for p in &self.0 {
            write!(f, "\n  - {p}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationError {}

fn normalize(key: &str) -> String {
    key.trim().replace('_', "-")
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_file(text: &str) -> Result<BTreeMap<String, String>, ValidationError> {
    let mut map = BTreeMap::new();
    let mut errors = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) => {
                map.insert(normalize(k), v.trim().to_string());
            }
            None => errors.push(format!("line {}: expected `key = value`, got `{line}`", i + 1)),
        }
    }
    if errors.is_empty() {
        Ok(map)
    } else {
        Err(ValidationError(errors))
    }
}

fn field<T: std::str::FromStr>(raw: &BTreeMap<String, String>, key: &str, errors: &mut Vec<String>) -> Option<T> {
    let v = raw.get(key)?;
    match v.parse() {
        Ok(x) => Some(x),
        Err(_) => {
            errors.push(format!("{key}: cannot parse `{v}`"));
            None
        }
    }
}

impl ExperimentConfig {
    /// Builds and validates a config from merged key-value pairs.
    pub fn from_map(experiment: &str, given: &BTreeMap<String, String>) -> Result<Self, ValidationError> {
        let mut errors = Vec::new();
        if !EXPERIMENTS.contains(&experiment) {
            errors.push(format!("unknown experiment `{experiment}` (expected one of {})", EXPERIMENTS.join(", ")));
        }
        let mut raw: BTreeMap<String, String> = BTreeMap::new();
        for (k, d) in KEYS {
            if let Some(d) = d {
                raw.insert(k.to_string(), d.to_string());
            }
        }
        for (k, v) in given {
            let k = normalize(k);
            if KEYS.iter().any(|(name, _)| *name == k) {
                raw.insert(k, v.clone());
            } else {
                errors.push(format!("unknown key `{k}`"));
            }
        }
        let degree = field::<usize>(&raw, "degree", &mut errors);
        let radius = field::<usize>(&raw, "radius", &mut errors);
        let sampling_radius = match raw.contains_key("sampling-radius") {
            true => field::<usize>(&raw, "sampling-radius", &mut errors),
            false => radius.map(|r| r + 1),
        };
        let samples = field::<usize>(&raw, "samples", &mut errors);
        let seed = field::<u64>(&raw, "seed", &mut errors);
        let streams = field::<usize>(&raw, "streams", &mut errors);
        let target_angle = field::<f64>(&raw, "target-angle", &mut errors);
        let tolerance = field::<f64>(&raw, "tolerance", &mut errors);
        let threshold = field::<f64>(&raw, "threshold", &mut errors);
        let svg = field::<bool>(&raw, "svg", &mut errors);
        let out = raw.get("out").map(PathBuf::from);

        if let Some(d) = degree {
            if d < 7 {
                errors.push(format!("degree: {d} is below 7, the triangulation would not be hyperbolic"));
            }
        }
        if let Some(r) = radius {
            if r == 0 || r > MAX_RADIUS {
                errors.push(format!("radius: {r} must lie in 1..={MAX_RADIUS}"));
            }
        }
        if let (Some(r), Some(s)) = (radius, sampling_radius) {
            if s <= r {
                errors.push(format!("sampling-radius: {s} must exceed radius {r}"));
            }
            if s > MAX_RADIUS + 1 {
                errors.push(format!("sampling-radius: {s} exceeds {}", MAX_RADIUS + 1));
            }
        }
        if samples == Some(0) {
            errors.push("samples: must be at least 1".into());
        }
        if streams == Some(0) {
            errors.push("streams: must be at least 1".into());
        }
        if let Some(t) = target_angle {
            if !t.is_finite() {
                errors.push("target-angle: must be finite".into());
            }
        }
        if let Some(t) = tolerance {
            if !(t > 0.0 && t <= 1e-3) {
                errors.push(format!("tolerance: {t} must lie in (0, 1e-3]"));
            }
        }
        if let Some(k) = threshold {
            if !(k > 0.0 && k.is_finite()) {
                errors.push(format!("threshold: {k} must be positive"));
            }
        }
        if out.is_none() {
            errors.push("out: output directory is required".into());
        }
        if !errors.is_empty() {
            return Err(ValidationError(errors));
        }
        Ok(Self {
            experiment: experiment.to_string(),
            degree: degree.unwrap(),
            radius: radius.unwrap(),
            sampling_radius: sampling_radius.unwrap(),
            samples: samples.unwrap(),
            seed: seed.unwrap(),
            streams: streams.unwrap(),
            target_angle: target_angle.unwrap(),
            tolerance: tolerance.unwrap(),
            threshold: threshold.unwrap(),
            svg: svg.unwrap(),
            out: out.unwrap(),
        })
    }

    /// Canonical text of everything that affects outputs (the output
    /// directory is excluded so relocated runs hash alike).
    pub fn canonical(&self) -> String {
        format!(
            "experiment = {}\ndegree = {}\nradius = {}\nsampling-radius = {}\nsamples = {}\nseed = {}\nstreams = {}\ntarget-angle = {:?}\ntolerance = {:?}\nthreshold = {:?}\nsvg = {}\n",
            self.experiment,
            self.degree,
            self.radius,
            self.sampling_radius,
            self.samples,
            self.seed,
            self.streams,
            self.target_angle,
            self.tolerance,
            self.threshold,
            self.svg
        )
    }
}
