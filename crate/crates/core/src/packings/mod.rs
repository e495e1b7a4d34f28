//! Constructors for the example clusters and the packing exponent estimator.

pub mod apollonian;
pub mod bubble;
pub mod cantor;
pub mod exponent;
pub mod squares;

pub use apollonian::{apollonian_cluster, covered_area, generate_apollonian, ApollonianNode};
pub use bubble::{double_bubble_perimeter, standard_double_bubble};
pub use cantor::{build_cantor_cluster, cantor_report, CantorReport, CantorSchedule};
pub use exponent::{estimate_packing_exponent, ExponentEstimate};
pub use squares::{build_square_gasket, figure_areas};
