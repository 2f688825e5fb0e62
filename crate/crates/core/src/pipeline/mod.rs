//! End-to-end construction of `g1`, `g2` with `f1 g1 + f2 g2 = 1` and `g1` invertible.

pub mod interpolate;
pub mod oracle;
pub mod solution;
pub mod stabilize;

pub use interpolate::{
    choose_branches, interpolate_symmetric, minimal_norm, pick_matrix, pick_min_eigenvalue, InterpolationProblem, SchurInterpolant,
    SymmetricInterpolant,
};
pub use oracle::{bezout_oracle, BezoutOracle, ORACLE_TOLERANCE};
pub use solution::{assemble_solution, bicubic, interpolation_targets, kappa_at, verify_solution, Solution, VerificationReport};
pub use stabilize::{check_necessity, error_exit_code, stabilize, Failure, Necessity, Run, StabilizeOptions, Stage};
