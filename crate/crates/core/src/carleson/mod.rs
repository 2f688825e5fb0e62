//! Carleson intensity, dyadic stopping times and the symmetric region decomposition.

pub mod decomposition;
pub mod intensity;
pub mod stopping;

pub use decomposition::{
    base_half_width, build_generations, default_mass_threshold, reflection_defect, CarlesonDecomposition, Component, DecompositionOptions,
    Generation, Region, MAX_GENERATIONS,
};
pub use intensity::{carleson_intensity, grid_intensity, Atom, GridMeasure, Intensity, PointMassMeasure};
pub use stopping::{stopping_intervals, top_half_witness, triple_square_mass, StoppingResult};
