//! `hyperdimer <experiment> [--config FILE] [--key value ...]`
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
//! 1 for I/O errors.

mod config;
mod run;
mod svg;

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::Parser;

use config::{parse_file, ExperimentConfig, ValidationError};
use run::RunError;

#[derive(Parser, Debug)]
#[command(name = "hyperdimer", version, about = "Dimer and spanning tree experiments on hyperbolic circle packings")]
struct Args {
    /// One of pack, sample, heights, doubledimer, tails, clusters, correlation, loops.
    experiment: String,
    /// Flat `key = value` file; flags override it.
    #[arg(long)]
    config: Option<std::path::PathBuf>,
    #[arg(long)]
    degree: Option<String>,
    /// Window radius.
    #[arg(long)]
    radius: Option<String>,
    /// Radius of the ball covers are sampled on (default radius + 1).
    #[arg(long)]
    sampling_radius: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    streams: Option<String>,
    /// Boundary target angle in radians.
    #[arg(long, allow_hyphen_values = true)]
    target_angle: Option<String>,
    #[arg(long)]
    tolerance: Option<String>,
    /// Cluster threshold.
    #[arg(long)]
    threshold: Option<String>,
    #[arg(long)]
    svg: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

impl Args {
    fn overrides(&self) -> BTreeMap<String, String> {
        let flags = [
            ("degree", &self.degree),
            ("radius", &self.radius),
            ("sampling-radius", &self.sampling_radius),
            ("samples", &self.samples),
            ("seed", &self.seed),
            ("streams", &self.streams),
            ("target-angle", &self.target_angle),
            ("tolerance", &self.tolerance),
            ("threshold", &self.threshold),
            ("svg", &self.svg),
            ("out", &self.out),
        ];
        flags.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k.to_string(), v))).collect()
    }
}

fn load(args: &Args) -> Result<ExperimentConfig, ValidationError> {
    let mut map = match &args.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => parse_file(&text)?,
            Err(e) => return Err(ValidationError(vec![format!("config: cannot read {}: {e}", path.display())])),
        },
        None => BTreeMap::new(),
    };
    map.extend(args.overrides());
    ExperimentConfig::from_map(&args.experiment, &map)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match load(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    match run::run(&cfg) {
        Ok(manifest) => {
            println!("{} -> {} ({} files)", cfg.experiment, cfg.out.display(), manifest["files"].as_array().map_or(0, Vec::len));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                RunError::Validation(_) => 2,
                RunError::Numerical(_) => 3,
                RunError::Io(_) => 1,
            })
        }
    }
}
