use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Real scalar used for distances, constants and exponents: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Relative slack tolerance used by default when judging inequalities.
    const DEFAULT_TOLERANCE: f64;
    /// Absolute tolerance for metric axioms on float-built tables.
    const AXIOM_TOLERANCE: f64;

    /// Lossy conversion from an `f64` literal.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const DEFAULT_TOLERANCE: f64 = 1e-9;
    const AXIOM_TOLERANCE: f64 = 1e-12;
}

impl Scalar for f32 {
    const DEFAULT_TOLERANCE: f64 = 1e-5;
    const AXIOM_TOLERANCE: f64 = 1e-5;
}

/// `x^alpha` with the convention `0^alpha = 0` for `alpha > 0`.
#[inline]
pub fn pow<T: Scalar>(x: T, alpha: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else if alpha == T::one() {
        x
    } else {
        x.powf(alpha)
    }
}

/// True when every entry is an integer; such tables are judged with zero tolerance.
pub fn all_integral<T: Scalar>(values: &[T]) -> bool {
    values.iter().all(|v| v.fract() == T::zero())
}

/// Relative acceptance band `tol * (1 + |scale|)`.
#[inline]
pub fn band<T: Scalar>(tol: T, scale: T) -> T {
    tol * (T::one() + scale.abs())
}
