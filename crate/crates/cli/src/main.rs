//! `stabilize`: solves `f1 g1 + f2 g2 = 1` with invertible symmetric `g1` for two zero files.
//!
//! Standard output carries one status line. Artifacts go to `--out`; the paths written are
//! listed on standard error.
//!
//! Exit codes: 0 success, 2 necessity violation, 3 common zero, 4 numerical failure,
//! 5 input or usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use stabrank_core::io::{emit_outputs, execute, EmitFlags, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "stabilize", version, about = "Bounded stable-rank-one solutions for symmetric Blaschke pairs")]
struct Args {
    /// Zero file for f1: one `re im` pair per line.
    #[arg(long)]
    f1: PathBuf,
    /// Zero file for f2.
    #[arg(long)]
    f2: PathBuf,
    /// Sublevel parameter epsilon in (0, 1).
    #[arg(long)]
    epsilon: f64,
    /// Override for delta'; defaults to min(delta, epsilon)/10.
    #[arg(long = "delta-prime")]
    delta_prime: Option<f64>,
    /// Grid resolution, a power of two in [128, 4096].
    #[arg(long, default_value_t = 512)]
    grid: usize,
    /// Residual tolerance for the verification stage.
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    /// Output directory for report.json and the optional artifacts.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Do not write report.json.
    #[arg(long = "no-report")]
    no_report: bool,
    /// Also write geometry.svg and geometry.json.
    #[arg(long, requires = "out")]
    svg: bool,
    /// Also write text dumps of V, v, kappa, g1 and g2.
    #[arg(long, requires = "out")]
    fields: bool,
    /// Seed for the random verification points.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl Args {
    fn config(&self) -> RunConfig {
        RunConfig {
            f1: self.f1.clone(),
            f2: self.f2.clone(),
            epsilon: self.epsilon,
            delta_prime: self.delta_prime,
            resolution: self.grid,
            tolerance: self.tolerance,
            out: self.out.clone(),
            emit: EmitFlags { report: !self.no_report, fields: self.fields, svg: self.svg },
            seed: self.seed,
        }
    }
}

fn run(args: &Args) -> anyhow::Result<i32> {
    let cfg = args.config();
    let outcome = execute(&cfg);
    if let Some(dir) = &cfg.out {
        let files = emit_outputs(&outcome, cfg.emit, dir).with_context(|| format!("writing to {}", dir.display()))?;
        for f in files {
            eprintln!("wrote {}", f.display());
        }
    }
    println!("{}", outcome.status_line());
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 5 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(5)
        }
    }
}
