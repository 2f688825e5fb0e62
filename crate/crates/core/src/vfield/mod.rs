//! The correcting field `V`: branch-tracked logarithms of the family products, mollified near
//! their cuts and summed, with finite-difference calculus on reflection-closed grids.

pub mod assemble;
pub mod grid;
pub mod mollify;
pub mod summand;

pub use assemble::{assemble_v, build_v, radius_floor, reduce_im, SummandReport, VCertificates, VField};
pub use grid::{Grid, GridField};
pub use mollify::{bump, mollify};
pub use summand::{summand_phi, summand_specs, Phi, SummandSpec};
