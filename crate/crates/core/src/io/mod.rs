//! Configuration, ingestion, orchestration and output files.

pub mod config;
pub mod report;
pub mod svg;

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::halfplane::{read_zeros, ZeroFile};
use crate::pipeline::{stabilize, Run, StabilizeOptions};

pub use config::{parse_config, EmitFlags, RunConfig};
pub use report::{build_report, status_name, InputsBlock, StabilizationReport, SCHEMA_VERSION};
pub use svg::render_svg;

/// Result of [`execute`]: the report, plus the run when ingestion succeeded.
#[derive(Debug)]
pub struct Outcome {
    pub report: StabilizationReport,
    pub run: Option<Run>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.report.exit_code
    }

    /// One-line summary for the terminal.
    pub fn status_line(&self) -> String {
        let r = &self.report;
        match (&r.stage, &r.error) {
            (Some(stage), Some(e)) => {
                let stage = serde_json::to_value(stage).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                format!("{} at stage {stage}: {e}", r.status)
            }
            _ => format!(
                "{}: residual {:.3e}, sup|g1| {:.4}, sup|g2| {:.4}, sup|1/g1| {:.4}",
                r.status,
                r.residual.unwrap_or(f64::NAN),
                r.norms.as_ref().map_or(f64::NAN, |n| n.g1_sup),
                r.norms.as_ref().map_or(f64::NAN, |n| n.g2_sup),
                r.norms.as_ref().map_or(f64::NAN, |n| n.g1_inv_sup),
            ),
        }
    }
}

fn inputs_block(cfg: &RunConfig, z1: Option<&ZeroFile>, z2: Option<&ZeroFile>) -> InputsBlock {
    let zeros = |z: Option<&ZeroFile>| z.map(|z| z.product.zeros().to_vec()).unwrap_or_default();
    let completed = |z: Option<&ZeroFile>| z.map(|z| z.completed.clone()).unwrap_or_default();
    InputsBlock {
        f1_zeros: zeros(z1),
        f2_zeros: zeros(z2),
        f1_completed: completed(z1),
        f2_completed: completed(z2),
        epsilon: cfg.epsilon,
        delta_prime_override: cfg.delta_prime,
        resolution: cfg.resolution,
        tolerance: cfg.tolerance,
        seed: cfg.seed,
    }
}

fn options(cfg: &RunConfig) -> StabilizeOptions {
    let mut o = StabilizeOptions::new(cfg.epsilon);
    o.delta_prime = cfg.delta_prime;
    o.resolution = cfg.resolution;
    o.tolerance = cfg.tolerance;
    o.seed = cfg.seed;
    o
}

/// Reads the zero files and runs the pipeline. Input problems become an ingest-stage report.
pub fn execute(cfg: &RunConfig) -> Outcome {
    let ingest = cfg.validate().and_then(|_| Ok((read_zeros(&cfg.f1)?, read_zeros(&cfg.f2)?)));
    match ingest {
        Err(e) => {
            let (z1, z2) = (read_zeros(&cfg.f1).ok(), read_zeros(&cfg.f2).ok());
            Outcome { report: StabilizationReport::input_error(inputs_block(cfg, z1.as_ref(), z2.as_ref()), &e), run: None }
        }
        Ok((z1, z2)) => {
            let run = stabilize(&z1.product, &z2.product, options(cfg));
            let report = build_report(&run, inputs_block(cfg, Some(&z1), Some(&z2)));
            Outcome { report, run: Some(run) }
        }
    }
}

fn write(path: PathBuf, text: &str) -> Result<PathBuf> {
    std::fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Writes the artifacts selected in `cfg.emit` into `dir` and returns their paths.
///
/// `report.json` always; with `svg`, `geometry.svg` and `geometry.json`; with `fields`, one text
/// dump per available field (`V.txt`, `v.txt`, `kappa.txt`, `g1.txt`, `g2.txt`).
pub fn emit_outputs(outcome: &Outcome, emit: EmitFlags, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();
    if emit.report {
        written.push(write(dir.join("report.json"), &outcome.report.to_json())?);
    }
    let Some(run) = &outcome.run else {
        return Ok(written);
    };
    if emit.svg {
        let (half, height) = match (run.grid, &run.decomposition) {
            (Some(g), _) => (g.half_width, g.height),
            (None, Some(d)) => (2.0 * d.half_width, 2.0 * d.half_width),
            (None, None) => {
                let r = run.f1.zeros().iter().chain(run.f2.zeros()).map(|a| a.norm()).fold(1.0, f64::max);
                (2.0 * r, 2.0 * r)
            }
        };
        let svg = render_svg(&run.f1, &run.f2, run.decomposition.as_ref(), run.slits.as_ref(), half, height);
        written.push(write(dir.join("geometry.svg"), &svg)?);
        let geometry = serde_json::json!({
            "decomposition": run.decomposition,
            "slits": run.slits,
        });
        let text = serde_json::to_string_pretty(&geometry).expect("geometry serializes") + "\n";
        written.push(write(dir.join("geometry.json"), &text)?);
    }
    if emit.fields {
        let fields = [
            ("V", run.v.as_ref().map(|v| &v.v)),
            ("v", run.dbar.as_ref().map(|s| &s.v)),
            ("kappa", run.kappa.as_ref().map(|k| &k.kappa)),
            ("g1", run.solution.as_ref().map(|s| &s.g1)),
            ("g2", run.solution.as_ref().map(|s| &s.g2)),
        ];
        for (name, field) in fields {
            if let Some(f) = field {
                written.push(write(dir.join(format!("{name}.txt")), &f.dump())?);
            }
        }
    }
    Ok(written)
}
