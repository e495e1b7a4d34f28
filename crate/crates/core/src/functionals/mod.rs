//! Perimeter functionals beyond the classical one.

pub mod anisotropic;
pub mod fractional;
pub mod norm;

pub use anisotropic::{anisotropic_cluster_perimeter, anisotropic_perimeter};
pub use fractional::{
    disk_constant, fractional_cluster_perimeter, fractional_perimeter_disk, fractional_perimeter_mc,
    fractional_union_mc, FractionalClusterValue, FractionalOrder, McEstimate,
};
pub use norm::{wulff_lower_bound, Norm, PolygonalNorm};
