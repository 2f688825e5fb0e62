//! Stage-by-stage orchestration of one stabilization run.

use serde::{Deserialize, Serialize};

use crate::carleson::{base_half_width, build_generations, CarlesonDecomposition, DecompositionOptions};
use crate::dbar::{check_dbar, make_kappa, solve_dbar, DbarOptions, DbarSolution, Kappa};
use crate::error::{Error, Result};
use crate::halfplane::{axis_sign_condition, corona_delta, AxisIntervalSet, BlaschkeProduct, CoronaDelta, SignOutcome, SignViolation};
use crate::pipeline::interpolate::{choose_branches, interpolate_symmetric, InterpolationProblem, SymmetricInterpolant};
use crate::pipeline::oracle::{bezout_oracle, BezoutOracle};
use crate::pipeline::solution::{assemble_solution, interpolation_targets, verify_solution, Solution, VerificationReport};
use crate::slits::{build_slit_system, SlitSystem};
use crate::vfield::{build_v, radius_floor, Grid, VField};

/// Pipeline stages in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Ingest,
    Corona,
    Necessity,
    Oracle,
    Decomposition,
    Slits,
    VField,
    Dbar,
    Interpolation,
    Assembly,
    Verification,
}

impl Stage {
    pub fn remediation(self, error: &Error) -> &'static str {
        match (self, error) {
            (_, Error::Io(_)) | (_, Error::Parse { .. }) | (_, Error::Config(_)) => "check the input files and options",
            (_, Error::CommonZero) => "the pair shares a zero; no Bezout solution exists",
            (_, Error::SignCondition { .. }) | (Stage::Necessity, _) => "f1 changes sign where |f2| is small; no invertible g1 exists",
            (_, Error::GridTooSmall(_)) => "raise the resolution",
            (_, Error::SlitGeometry(_)) => "shrink delta_prime",
            (_, Error::IllConditioned(_)) => "shrink delta_prime or separate the zeros of f2",
            (Stage::Dbar, _) | (Stage::VField, _) => "raise the resolution",
            (Stage::Interpolation, _) | (Stage::Assembly, _) => "raise the resolution or shrink delta_prime",
            _ => "shrink delta_prime or raise the resolution",
        }
    }
}

/// Outcome of the necessity screen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Necessity {
    Pass { sign: i8, intervals: AxisIntervalSet },
    Violation { violation: SignViolation, intervals: AxisIntervalSet },
}

/// `f1` must keep one sign on the axis where `|f2| < epsilon`.
pub fn check_necessity(f1: &BlaschkeProduct, f2: &BlaschkeProduct, epsilon: f64) -> Result<Necessity> {
    Ok(match axis_sign_condition(f1, f2, epsilon)? {
        SignOutcome::Holds { intervals, sign, .. } => Necessity::Pass { sign, intervals },
        SignOutcome::Violated { intervals, violation } => Necessity::Violation { violation, intervals },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilizeOptions {
    pub epsilon: f64,
    pub delta_prime: Option<f64>,
    pub resolution: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub random_points: usize,
    pub mass_threshold: Option<f64>,
    pub dbar: DbarOptions,
}

impl StabilizeOptions {
    pub fn new(epsilon: f64) -> Self {
        StabilizeOptions {
            epsilon,
            delta_prime: None,
            resolution: 512,
            tolerance: 1e-6,
            seed: 42,
            random_points: 10_000,
            mass_threshold: None,
            dbar: DbarOptions::default(),
        }
    }
}

/// Halvings of `delta'` tried after a slit geometry failure.
pub const DELTA_PRIME_RETRIES: usize = 8;
/// Doublings of the grid box tried after a mollifier leaves the grid.
pub const GRID_RETRIES: usize = 3;
/// Resolution of the corona search.
pub const CORONA_RESOLUTION: usize = 256;
/// Rows of the grid required below the lowest zero of `f2`.
pub const ZERO_ROWS: f64 = 4.0;
/// Ceiling for the automatic refinement after a failed solver check.
pub const MAX_RESOLUTION: usize = 4096;

#[derive(Debug, Clone)]
pub struct Failure {
    pub stage: Stage,
    pub error: Error,
}

/// Everything a run produced; later fields stay `None` after a failure.
#[derive(Debug, Clone)]
pub struct Run {
    pub f1: BlaschkeProduct,
    pub f2: BlaschkeProduct,
    pub options: StabilizeOptions,
    pub corona: Option<CoronaDelta>,
    pub delta_prime: Option<f64>,
    pub necessity: Option<Necessity>,
    pub oracle: Option<std::result::Result<BezoutOracle, Error>>,
    pub delta_prime_attempts: usize,
    /// Automatic resolution doublings after a failed solver check.
    pub refinements: usize,
    pub decomposition: Option<CarlesonDecomposition>,
    pub slits: Option<SlitSystem>,
    pub grid: Option<Grid>,
    pub v: Option<VField>,
    pub dbar: Option<DbarSolution>,
    pub kappa: Option<Kappa>,
    pub problem: Option<InterpolationProblem>,
    pub interpolant: Option<SymmetricInterpolant>,
    pub solution: Option<Solution>,
    pub verification: Option<VerificationReport>,
    pub failure: Option<Failure>,
}

impl Run {
    fn new(f1: &BlaschkeProduct, f2: &BlaschkeProduct, options: StabilizeOptions) -> Self {
        Run {
            f1: f1.clone(),
            f2: f2.clone(),
            options,
            corona: None,
            delta_prime: None,
            necessity: None,
            oracle: None,
            delta_prime_attempts: 0,
            refinements: 0,
            decomposition: None,
            slits: None,
            grid: None,
            v: None,
            dbar: None,
            kappa: None,
            problem: None,
            interpolant: None,
            solution: None,
            verification: None,
            failure: None,
        }
    }

    pub fn succeeded(&self) -> bool {
        self.failure.is_none() && self.verification.is_some()
    }

    /// Process exit status: 0 success, 2 necessity, 3 not unimodular, 4 numerical, 5 input.
    pub fn exit_code(&self) -> i32 {
        if let Some(Necessity::Violation { .. }) = self.necessity {
            return 2;
        }
        match &self.failure {
            None => 0,
            Some(f) => error_exit_code(&f.error),
        }
    }
}

pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::SignCondition { .. } => 2,
        Error::CommonZero => 3,
        Error::Io(_) | Error::Parse { .. } | Error::Config(_) => 5,
        Error::NotUpperHalfPlane(_) | Error::RepeatedZero(_) | Error::NotSymmetric(_) => 5,
        _ => 4,
    }
}

fn fail<T>(run: &mut Run, stage: Stage, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(error) => {
            run.failure = Some(Failure { stage, error });
            None
        }
    }
}

/// Runs every stage; the returned [`Run`] records what completed and where it stopped.
pub fn stabilize(f1: &BlaschkeProduct, f2: &BlaschkeProduct, options: StabilizeOptions) -> Run {
    let mut run = Run::new(f1, f2, options);
    let _ = run_stages(&mut run);
    run
}

fn run_stages(run: &mut Run) -> Option<()> {
    let opts = run.options;
    let (f1, f2) = (run.f1.clone(), run.f2.clone());
    let checked = check_options(&opts);
    fail(run, Stage::Ingest, checked)?;

    let corona = corona_delta(&f1, &f2, CORONA_RESOLUTION);
    let unimodular = corona.unimodular;
    let delta = corona.delta;
    run.corona = Some(corona);
    if !unimodular {
        return fail(run, Stage::Corona, Err(Error::CommonZero));
    }
    let mut dp = opts.delta_prime.unwrap_or(delta.min(opts.epsilon) / 10.0);
    run.delta_prime = Some(dp);

    let necessity = fail(run, Stage::Necessity, check_necessity(&f1, &f2, opts.epsilon))?;
    let sign = match &necessity {
        Necessity::Pass { sign, .. } => *sign as f64,
        Necessity::Violation { .. } => {
            run.necessity = Some(necessity);
            return None;
        }
    };
    run.necessity = Some(necessity);

    let oracle = bezout_oracle(&f1, &f2);
    if oracle == Err(Error::CommonZero) {
        return fail(run, Stage::Oracle, Err(Error::CommonZero));
    }
    run.oracle = Some(oracle);

    if f2.is_empty() {
        let grid = fail(run, Stage::Assembly, Grid::new(opts.resolution, 2.0 * base_half_width(&f1), 2.0 * base_half_width(&f1)))?;
        let sol = fail(run, Stage::Assembly, assemble_solution(&f1, &f2, sign, &crate::vfield::GridField::zeros(grid), None))?;
        run.grid = Some(grid);
        return verify(run, sol);
    }

    let options = DecompositionOptions { mass_threshold: opts.mass_threshold };
    let mut attempt = 0;
    let (d, sys) = loop {
        run.delta_prime_attempts = attempt + 1;
        let d = fail(run, Stage::Decomposition, build_generations(&f1, &f2, dp, options))?;
        match build_slit_system(&d, &f2, dp) {
            Ok(sys) => break (d, sys),
            Err(Error::SlitGeometry(_)) if attempt < DELTA_PRIME_RETRIES && opts.delta_prime.is_none() => {
                attempt += 1;
                dp /= 2.0;
                run.delta_prime = Some(dp);
            }
            Err(e) => {
                run.decomposition = Some(d);
                return fail(run, Stage::Slits, Err(e));
            }
        }
    };
    run.decomposition = Some(d.clone());
    run.slits = Some(sys.clone());

    let mut resolution = opts.resolution;
    let kappa = loop {
        let mut half = 2.0 * d.half_width.max(base_half_width(&f2));
        let mut tries = 0;
        let vf = loop {
            let grid = fail(run, Stage::VField, Grid::new(resolution, half, half))?;
            run.grid = Some(grid);
            if let Err(e) = check_resolves(&grid, &f2) {
                if resolution == opts.resolution && resolution < MAX_RESOLUTION {
                    resolution *= 2;
                    run.refinements += 1;
                    continue;
                }
                return fail(run, Stage::VField, Err(e));
            }
            match build_v(grid, &d, &sys, &f1, &f2, radius_floor(&grid)) {
                Ok(v) => break v,
                Err(Error::GridTooSmall(_)) if tries < GRID_RETRIES => {
                    tries += 1;
                    half *= 2.0;
                }
                Err(e) => return fail(run, Stage::VField, Err(e)),
            }
        };
        let sol = fail(run, Stage::Dbar, solve_dbar(&vf.v, opts.dbar))?;
        let kappa = fail(run, Stage::Dbar, make_kappa(&vf.v, &sol))?;
        run.v = Some(vf);
        let checked = check_dbar(&sol, &kappa);
        run.dbar = Some(sol);
        run.kappa = Some(kappa.clone());
        match checked {
            Ok(()) => break kappa,
            Err(Error::Tolerance { .. }) if resolution == opts.resolution && resolution < MAX_RESOLUTION => {
                resolution *= 2;
                run.refinements += 1;
            }
            Err(e) => return fail(run, Stage::Dbar, Err(e)),
        }
    };

    let problem = fail(run, Stage::Interpolation, interpolation_targets(&f1, sign, &f2, &kappa.kappa, dp))?;
    let problem = fail(run, Stage::Interpolation, choose_branches(&problem))?;
    run.problem = Some(problem.clone());
    let h = fail(run, Stage::Interpolation, interpolate_symmetric(&problem))?;
    run.interpolant = Some(h.clone());
    let sol = fail(run, Stage::Assembly, assemble_solution(&f1, &f2, sign, &kappa.kappa, Some(h)))?;
    verify(run, sol)
}

fn verify(run: &mut Run, sol: Solution) -> Option<()> {
    let opts = run.options;
    let rep = verify_solution(&sol, opts.random_points, opts.seed);
    run.solution = Some(sol);
    run.verification = Some(rep);
    let ok = rep.residual < opts.tolerance
        && rep.g1_inf > 0.0
        && rep.g1_inv_sup.is_finite()
        && rep.g2_sup.is_finite()
        && rep.g1_symmetry < 1e-10
        && rep.g2_symmetry < 1e-10;
    if !ok {
        return fail(
            run,
            Stage::Verification,
            Err(Error::Tolerance {
                stage: "verification",
                detail: format!(
                    "residual {:.3e}, inf |g1| {:.3e}, symmetry {:.1e}/{:.1e}",
                    rep.residual, rep.g1_inf, rep.g1_symmetry, rep.g2_symmetry
                ),
            }),
        );
    }
    Some(())
}

/// Every zero of `f2` must sit at least [`ZERO_ROWS`] rows above the axis so the interpolation
/// targets see a full stencil of `kappa`.
fn check_resolves(grid: &Grid, f2: &BlaschkeProduct) -> Result<()> {
    let low = f2.zeros().iter().map(|a| a.im).fold(f64::INFINITY, f64::min);
    if low < ZERO_ROWS * grid.hy {
        let needed = (ZERO_ROWS * grid.height / low).log2().ceil().exp2() as usize;
        return Err(Error::GridTooSmall(format!(
            "zero of f2 at height {low} is within {ZERO_ROWS} rows of the axis; resolution {} or more is needed",
            needed
        )));
    }
    Ok(())
}

fn check_options(o: &StabilizeOptions) -> Result<()> {
    if !(o.epsilon > 0.0 && o.epsilon < 1.0) {
        return Err(Error::Config(format!("epsilon {} must lie in (0, 1)", o.epsilon)));
    }
    if let Some(dp) = o.delta_prime {
        if !(dp > 0.0 && dp < 1.0) {
            return Err(Error::Config(format!("delta_prime {dp} must lie in (0, 1)")));
        }
    }
    if !(o.tolerance > 0.0) {
        return Err(Error::Config(format!("tolerance {} must be positive", o.tolerance)));
    }
    Ok(())
}
