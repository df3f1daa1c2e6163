//! Sections as level sets of fiber-biLipschitz functions, and the explicit
//! extension of partially defined sections to zero sets of such functions.

mod fibered;
mod kernel;

pub use fibered::{
    fiber_bilip_of, holder_constant_of, section_from_level_set, verify_fibered_claims, FiberedFunction,
    FiberedReport, FiberedValues, Level, LevelSetSection,
};
pub use kernel::{
    build_extension_kernel, extend_partial_section, extension_kernel_value, ExtensionMachinery, ExtensionReport,
    MachineryConstants,
};
