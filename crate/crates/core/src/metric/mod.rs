//! Finite metric spaces, quotient structures and sections.

mod heisenberg;
mod quotient;
mod section;
mod space;

pub use heisenberg::{heisenberg_sample, HeisenbergDistance};
pub use quotient::{fiber_distance, fiber_distance_by_id, make_quotient, QuotientStructure};
pub use section::{all_sections, Section};
pub use space::{
    build_space, cloud_metric, graph_metric, numbered_ids, p_norm_diff, validate_metric, validate_metric_with,
    FiniteMetricSpace, SpaceSource,
};
