//! Parameter matrices, samplers and correlated families.

mod family;
mod grid;
mod params;
pub mod seed;
mod spec;

pub use family::{sample_family, sample_family_with, CorrelatedFamily};
pub use grid::SpatialGrid;
pub use params::{anchor_density, build_anchor_matrix, build_parameter_matrix, subsample, Latent, ParameterMatrix};
pub use spec::{ModelKind, ModelSpec, RggParams, SbmParams, SbmProbs};
