use serde::Serialize;

use crate::error::Result;
use crate::holder::check::{intrinsic_slack, HolderParams};
use crate::metric::{fiber_distance, FiniteMetricSpace, QuotientStructure, Section};
use crate::scalar::Scalar;

/// Intrinsic cone at `apex`: the points `x'` with
/// `L * D(x', fiber(apex))^alpha + D(x', fiber(apex)) < d(x', apex)`.
///
/// Co-fiber points other than the apex always belong (vertical opening).
#[derive(Debug, Clone, Serialize)]
pub struct ConeSpec<T> {
    pub apex: usize,
    pub params: HolderParams<T>,
    pub members: Vec<usize>,
}

#[inline]
fn in_cone<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    apex: usize,
    x: usize,
    params: HolderParams<T>,
) -> bool {
    let fd = fiber_distance(space, quotient, x, quotient.fiber_of(apex));
    intrinsic_slack(space.dist(x, apex), fd, params) < T::zero()
}

pub fn cone_points<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    apex: usize,
    params: HolderParams<T>,
) -> ConeSpec<T> {
    let members = (0..space.len()).filter(|&x| in_cone(space, quotient, apex, x, params)).collect();
    ConeSpec { apex, params, members }
}

/// Cone at the point with the given id.
pub fn cone_points_by_id<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    apex: &str,
    params: HolderParams<T>,
) -> Result<ConeSpec<T>> {
    Ok(cone_points(space, quotient, space.index_of(apex)?, params))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeAvoidance {
    pub avoids: bool,
    /// First `(apex, point)` found with the graph point inside the apex's cone,
    /// scanning apexes then points in fiber order.
    pub witness: Option<(usize, usize)>,
}

/// Does the graph miss the cones at each of its own points?
///
/// Agrees with the strict verdict of `check_holder` on every input.
pub fn cone_avoidance_check<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    section: &Section,
    params: HolderParams<T>,
) -> ConeAvoidance {
    for &apex in section.choice() {
        for &x in section.choice() {
            if in_cone(space, quotient, apex, x, params) {
                return ConeAvoidance { avoids: false, witness: Some((apex, x)) };
            }
        }
    }
    ConeAvoidance { avoids: true, witness: None }
}
