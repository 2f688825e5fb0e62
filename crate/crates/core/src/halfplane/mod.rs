//! Blaschke products on the upper half-plane and the measurements taken on them.

pub mod axis;
pub mod blaschke;
pub mod blasest;
pub mod corona;
pub mod symmetry;
pub mod transfer;
pub mod zerofile;

pub use axis::{axis_sign_condition, axis_sublevel_set, AxisIntervalSet, SignOutcome, SignViolation};
pub use blaschke::{factor, pseudo_distance, reflect, BlaschkeProduct};
pub use blasest::{log_modulus_sum, LogModulusBounds};
pub use corona::{corona_delta, CoronaDelta};
pub use symmetry::SampledFunction;
pub use transfer::Direction;
pub use zerofile::{parse_zeros, read_zeros, ZeroFile};
