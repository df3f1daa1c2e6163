//! The intrinsic Hölder inequality and the relations built on it.

mod check;
mod cones;
mod family;
mod wrt;

pub use check::{
    bound_k_from_l, check_global_view, check_holder, check_holder_view, diameter_bound_k, diameter_bound_k_view,
    intrinsic_slack, minimal_constant_view, minimal_global_constant, minimal_global_constant_view,
    minimal_holder_constant, HolderCertificate, HolderParams, PairSlack, SectionView,
};
pub(crate) use check::check_alpha;
pub use cones::{cone_avoidance_check, cone_points, cone_points_by_id, ConeAvoidance, ConeSpec};
pub use family::{
    continuity_modulus, family_equibound_check, limit_closure_check, uniform_openness_radius, verify_continuity,
    ContinuityReport, EquiboundReport, LimitReport,
};
pub use wrt::{
    check_wrt, check_wrt_strong, equivalence_classes, minimal_wrt_constant, strong_transitivity_check,
    wrt_from_distances, wrt_pointbound_equivalence, EquivalenceReport, FiberSlack, PointBoundDirection,
    PointBoundReport, TransitivityReport, WrtCertificate, WrtMode,
};
