//! Annealed grid clusters with prescribed areas.

mod anneal;
mod grid;
mod sequence;

pub use anneal::{initial_grid, minimize_n_cluster, AnnealConfig, MinimizeResult, AREA_TOLERANCE};
pub use grid::{
    aligned_hausdorff_distance, boundary_connectivity, boundary_hausdorff_distance, CellWindow, GridCluster,
    GridSpec, Locality, LocalityReport,
};
pub use sequence::{p_sequence, PSequence, BOUND_SLACK, MONOTONE_SLACK};
