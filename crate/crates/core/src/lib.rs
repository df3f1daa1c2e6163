//! Computable intrinsically Hölder sections of quotient maps.
//!
//! A quotient map is modelled as a labeled partition of a finite metric
//! space into fibers; a section picks one point per fiber. The crate checks
//! and fits the intrinsic Hölder inequality
//! `d(phi(y1), phi(y2)) <= L D^alpha + D`, with `D = d(phi(y1), fiber y2)`,
//! together with the relations, constructions and regularity estimates
//! derived from it.
//!
//! Numerical code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! at the crate root fix `f64`.

pub mod algebra;
pub mod error;
pub mod extension;
pub mod fixtures;
pub mod holder;
pub mod io;
pub mod metric;
pub mod regularity;
pub mod report;
mod scalar;

pub use error::{Error, Result};
pub use scalar::{pow, Scalar};

pub type MetricSpace = metric::FiniteMetricSpace<f64>;
pub type Params = holder::HolderParams<f64>;
pub type Certificate = holder::HolderCertificate<f64>;
pub type WrtCert = holder::WrtCertificate<f64>;
pub type View = holder::SectionView<f64>;
pub type Normed = algebra::NormedQuotient<f64>;
pub type LinSection = algebra::LinearSection<f64>;
pub type Fibered = extension::FiberedFunction<f64>;
pub type Measure = regularity::MeasureOnY<f64>;
pub type Profile = regularity::BallGrowthProfile<f64>;
