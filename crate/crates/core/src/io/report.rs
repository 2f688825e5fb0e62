//! The JSON stabilization report. Every measured constant carries the resolution it was
//! measured at; nothing time-dependent is recorded, so equal inputs give equal bytes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::carleson::CarlesonDecomposition;
use crate::error::Error;
use crate::halfplane::{CoronaDelta, SignViolation};
use crate::pipeline::{error_exit_code, Necessity, Run, Stage};
use crate::slits::{census_grid, SlitKind, SlitSystem};

pub const SCHEMA_VERSION: u32 = 1;
/// Side of the sample grid for the neighborhood census.
pub const CENSUS_RESOLUTION: usize = 128;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputsBlock {
    pub f1_zeros: Vec<Complex64>,
    pub f2_zeros: Vec<Complex64>,
    /// Reflections added by the loader.
    pub f1_completed: Vec<Complex64>,
    pub f2_completed: Vec<Complex64>,
    pub epsilon: f64,
    pub delta_prime_override: Option<f64>,
    pub resolution: usize,
    pub tolerance: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormsBlock {
    pub resolution: usize,
    pub g1_sup: f64,
    pub g2_sup: f64,
    pub g1_inv_sup: f64,
    pub g1_inf: f64,
    pub grid_nodes: usize,
    pub random_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecessityBlock {
    pub status: String,
    pub sign: Option<i8>,
    /// Axis intervals `(y_lo, y_hi)` where `|f2| < epsilon`.
    pub intervals: Vec<(f64, f64)>,
    pub witness: Option<SignViolation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleBlock {
    pub status: String,
    pub trivial: bool,
    pub residual: Option<f64>,
    pub absolute_residual: Option<f64>,
    pub magnitude: Option<f64>,
    pub samples: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionBlock {
    pub half_width: f64,
    pub mass_threshold: f64,
    pub eta: f64,
    pub generations: usize,
    pub regions: usize,
    pub components: usize,
    pub sigma1: usize,
    pub stopping_runs: usize,
    /// Runs whose length, mass and residual bounds all held.
    pub stopping_ok: usize,
    pub max_length_ratio: f64,
    pub min_mass_ratio: f64,
    pub max_residual_ratio: f64,
    pub max_pointwise_constant: f64,
    pub region_max_modulus: f64,
    pub boundary_intensity: f64,
    pub sigma1_intensity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusBlock {
    pub resolution: usize,
    pub samples: usize,
    pub max_slits_per_rank: usize,
    pub max_components: usize,
    pub max_discs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlitsBlock {
    pub delta_prime: f64,
    pub vertical: usize,
    pub gamma: usize,
    pub axis_connector: usize,
    pub skipped: usize,
    pub pairings: usize,
    pub discs: usize,
    pub z_intervals: Vec<(f64, f64)>,
    pub census: CensusBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VFieldBlock {
    pub resolution: usize,
    pub half_width: f64,
    pub height: f64,
    pub mollifier_radius: f64,
    pub summands: usize,
    pub sup_re: f64,
    pub laplacian_intensity: f64,
    pub gradient_intensity: f64,
    pub closeness_nodes: usize,
    pub closeness_max: f64,
    pub closeness_at_q_zeros: f64,
    pub treil_max: f64,
    pub symmetry_defect: f64,
    pub max_dbar_scaled: f64,
    pub max_laplacian_scaled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DbarBlock {
    pub resolution: usize,
    pub sup_v: f64,
    pub residual_max: f64,
    pub residual_p99: f64,
    pub residual_max_relative: f64,
    pub residual_p99_relative: f64,
    pub data_sup: f64,
    pub raw_symmetry_defect: f64,
    pub sweeps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaBlock {
    pub resolution: usize,
    pub sup_re: f64,
    pub dbar_max: f64,
    pub symmetry_defect: f64,
    pub exp_sup: f64,
    pub exp_neg_sup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpolationBlock {
    pub resolution: usize,
    pub nodes: Vec<Complex64>,
    pub targets: Vec<Complex64>,
    pub gamma: f64,
    pub constant: bool,
    pub rho_min: Option<f64>,
    pub rho: Option<f64>,
    pub node_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionBlock {
    pub resolution: usize,
    pub filled_nodes: usize,
    pub consistency: f64,
    pub raw_symmetry_defect: f64,
    pub residual_grid: f64,
    pub residual_random: f64,
    pub g1_symmetry: f64,
    pub g2_symmetry: f64,
    pub invertibility_ratio: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub corona: Option<CoronaDelta>,
    pub oracle: Option<OracleBlock>,
    pub decomposition: Option<DecompositionBlock>,
    pub slits: Option<SlitsBlock>,
    pub v_field: Option<VFieldBlock>,
    pub dbar: Option<DbarBlock>,
    pub kappa: Option<KappaBlock>,
    pub interpolation: Option<InterpolationBlock>,
    pub solution: Option<SolutionBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizationReport {
    pub schema: u32,
    pub status: String,
    pub exit_code: i32,
    pub stage: Option<Stage>,
    pub error: Option<String>,
    pub remediation: Option<String>,
    pub inputs: InputsBlock,
    pub delta: Option<f64>,
    pub epsilon: f64,
    pub delta_prime: Option<f64>,
    pub delta_prime_attempts: usize,
    /// Resolution of the final grid, after any automatic refinement.
    pub resolution: usize,
    pub refinements: usize,
    pub residual: Option<f64>,
    pub norms: Option<NormsBlock>,
    pub necessity: Option<NecessityBlock>,
    pub diagnostics: Diagnostics,
}

/// Status word for an exit code.
pub fn status_name(code: i32) -> &'static str {
    match code {
        0 => "success",
        2 => "necessity-violation",
        3 => "not-unimodular",
        4 => "numerical-failure",
        _ => "input-error",
    }
}

impl StabilizationReport {
    /// Report for a run that never started, such as an unreadable zero file.
    pub fn input_error(inputs: InputsBlock, error: &Error) -> Self {
        let code = error_exit_code(error);
        StabilizationReport {
            schema: SCHEMA_VERSION,
            status: status_name(code).into(),
            exit_code: code,
            stage: Some(Stage::Ingest),
            error: Some(error.to_string()),
            remediation: Some(Stage::Ingest.remediation(error).into()),
            epsilon: inputs.epsilon,
            resolution: inputs.resolution,
            refinements: 0,
            inputs,
            delta: None,
            delta_prime: None,
            delta_prime_attempts: 0,
            residual: None,
            norms: None,
            necessity: None,
            diagnostics: Diagnostics::default(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn decomposition_block(d: &CarlesonDecomposition) -> DecompositionBlock {
    let fold_max = |f: &dyn Fn(&crate::carleson::StoppingResult) -> f64| d.stopping.iter().map(f).fold(0.0, f64::max);
    let ok = d
        .stopping
        .iter()
        .filter(|s| s.total_length <= s.length_bound && s.min_mass_ratio >= s.mass_threshold && s.residual_intensity <= s.residual_bound)
        .count();
    DecompositionBlock {
        half_width: d.half_width,
        mass_threshold: d.mass_threshold,
        eta: d.eta,
        generations: d.generations.len(),
        regions: d.regions.len(),
        components: d.components.len(),
        sigma1: d.sigma1.len(),
        stopping_runs: d.stopping.len(),
        stopping_ok: ok,
        max_length_ratio: fold_max(&|s| if s.length_bound > 0.0 { s.total_length / s.length_bound } else { 0.0 }),
        min_mass_ratio: d.stopping.iter().map(|s| s.min_mass_ratio).fold(f64::INFINITY, f64::min),
        max_residual_ratio: fold_max(&|s| if s.residual_bound > 0.0 { s.residual_intensity / s.residual_bound } else { 0.0 }),
        max_pointwise_constant: fold_max(&|s| s.pointwise_constant),
        region_max_modulus: d.region_max_modulus,
        boundary_intensity: d.boundary_intensity,
        sigma1_intensity: d.sigma1_intensity,
    }
}

fn slits_block(d: &CarlesonDecomposition, sys: &SlitSystem, half: f64) -> SlitsBlock {
    let c = census_grid(d, sys, half, half, CENSUS_RESOLUTION);
    SlitsBlock {
        delta_prime: sys.delta_prime,
        vertical: sys.count(SlitKind::Vertical),
        gamma: sys.count(SlitKind::Gamma),
        axis_connector: sys.count(SlitKind::AxisConnector),
        skipped: sys.skipped.len(),
        pairings: sys.pairings.len(),
        discs: sys.pairings.iter().map(|p| p.discs.len()).sum(),
        z_intervals: sys.z_intervals.clone(),
        census: CensusBlock {
            resolution: CENSUS_RESOLUTION,
            samples: c.samples,
            max_slits_per_rank: c.max_slits_per_rank,
            max_components: c.max_components,
            max_discs: c.max_discs,
        },
    }
}

/// Assembles the report from a finished (or stopped) run.
pub fn build_report(run: &Run, inputs: InputsBlock) -> StabilizationReport {
    let code = run.exit_code();
    let n = run.grid.map(|g| g.nx - 1).unwrap_or(run.options.resolution);
    let mut diag = Diagnostics { corona: run.corona.clone(), ..Diagnostics::default() };

    diag.oracle = run.oracle.as_ref().map(|o| match o {
        Ok(o) => OracleBlock {
            status: "certified".into(),
            trivial: o.unit.is_some(),
            residual: Some(o.residual),
            absolute_residual: Some(o.absolute_residual),
            magnitude: Some(o.magnitude),
            samples: o.samples,
            error: None,
        },
        Err(e) => OracleBlock {
            status: "failed".into(),
            trivial: false,
            residual: None,
            absolute_residual: None,
            magnitude: None,
            samples: 0,
            error: Some(e.to_string()),
        },
    });
    diag.decomposition = run.decomposition.as_ref().map(decomposition_block);
    if let (Some(d), Some(sys)) = (&run.decomposition, &run.slits) {
        let half = run.grid.map(|g| g.half_width).unwrap_or(2.0 * d.half_width);
        diag.slits = Some(slits_block(d, sys, half));
    }
    if let (Some(v), Some(g)) = (&run.v, &run.grid) {
        let c = &v.certificates;
        diag.v_field = Some(VFieldBlock {
            resolution: n,
            half_width: g.half_width,
            height: g.height,
            mollifier_radius: v.radius,
            summands: v.summands.len(),
            sup_re: c.sup_re,
            laplacian_intensity: c.laplacian_intensity,
            gradient_intensity: c.gradient_intensity,
            closeness_nodes: c.closeness_nodes,
            closeness_max: c.closeness_max,
            closeness_at_q_zeros: c.closeness_at_q_zeros,
            treil_max: c.treil_max,
            symmetry_defect: c.symmetry_defect,
            max_dbar_scaled: v.summands.iter().map(|s| s.dbar_scaled).fold(0.0, f64::max),
            max_laplacian_scaled: v.summands.iter().map(|s| s.laplacian_scaled).fold(0.0, f64::max),
        });
    }
    diag.dbar = run.dbar.as_ref().map(|s| DbarBlock {
        resolution: n,
        sup_v: s.sup_v,
        residual_max: s.residual.max_abs,
        residual_p99: s.residual.p99_abs,
        residual_max_relative: s.residual.max_rel,
        residual_p99_relative: s.residual.p99_rel,
        data_sup: s.residual.data_sup,
        raw_symmetry_defect: s.raw_symmetry_defect,
        sweeps: s.sweeps_used,
    });
    diag.kappa = run.kappa.as_ref().map(|k| KappaBlock {
        resolution: n,
        sup_re: k.sup_re,
        dbar_max: k.dbar_max,
        symmetry_defect: k.symmetry_defect,
        exp_sup: k.exp_sup,
        exp_neg_sup: k.exp_neg_sup,
    });
    diag.interpolation = run.problem.as_ref().map(|p| {
        let h = run.interpolant.as_ref();
        InterpolationBlock {
            resolution: n,
            nodes: p.nodes.clone(),
            targets: p.targets.clone(),
            gamma: p.gamma,
            constant: h.is_some_and(|h| h.constant.is_some()),
            rho_min: h.map(|h| h.rho_min),
            rho: h.map(|h| h.rho()),
            node_error: h.map(|h| h.node_error),
        }
    });
    if let (Some(sol), Some(rep)) = (&run.solution, &run.verification) {
        diag.solution = Some(SolutionBlock {
            resolution: n,
            filled_nodes: sol.filled_nodes,
            consistency: sol.consistency,
            raw_symmetry_defect: sol.raw_symmetry_defect,
            residual_grid: rep.residual_grid,
            residual_random: rep.residual_random,
            g1_symmetry: rep.g1_symmetry,
            g2_symmetry: rep.g2_symmetry,
            invertibility_ratio: rep.invertibility_ratio,
        });
    }

    let necessity = run.necessity.as_ref().map(|nec| match nec {
        Necessity::Pass { sign, intervals } => {
            NecessityBlock { status: "pass".into(), sign: Some(*sign), intervals: intervals.intervals.clone(), witness: None }
        }
        Necessity::Violation { violation, intervals } => NecessityBlock {
            status: "violation".into(),
            sign: None,
            intervals: intervals.intervals.clone(),
            witness: Some(violation.clone()),
        },
    });
    let (stage, error, remediation) = match (&run.failure, &run.necessity) {
        (Some(f), _) => (Some(f.stage), Some(f.error.to_string()), Some(f.stage.remediation(&f.error).to_string())),
        (None, Some(Necessity::Violation { violation, .. })) => {
            let e = Error::SignCondition { y_low: violation.y_low, y_high: violation.y_high };
            (Some(Stage::Necessity), Some(e.to_string()), Some(Stage::Necessity.remediation(&e).to_string()))
        }
        _ => (None, None, None),
    };
    let norms = run.verification.as_ref().map(|r| NormsBlock {
        resolution: n,
        g1_sup: r.g1_sup,
        g2_sup: r.g2_sup,
        g1_inv_sup: r.g1_inv_sup,
        g1_inf: r.g1_inf,
        grid_nodes: r.grid_nodes,
        random_points: r.random_points,
    });
    StabilizationReport {
        schema: SCHEMA_VERSION,
        status: status_name(code).into(),
        exit_code: code,
        stage,
        error,
        remediation,
        epsilon: run.options.epsilon,
        inputs,
        delta: run.corona.as_ref().map(|c| c.delta),
        delta_prime: run.delta_prime,
        delta_prime_attempts: run.delta_prime_attempts,
        resolution: n,
        refinements: run.refinements,
        residual: run.verification.as_ref().map(|r| r.residual),
        norms,
        necessity,
        diagnostics: diag,
    }
}
