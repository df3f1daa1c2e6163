use crate::error::{Error, Result};
use crate::metric::{validate_metric_with, FiniteMetricSpace, QuotientStructure};
use crate::scalar::Scalar;

/// Distance used on the Heisenberg lattice sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeisenbergDistance {
    /// `max(|horizontal|, |vertical|^(1/2))` of the group difference `p^-1 q`.
    /// Left-invariant and homogeneous; a genuine metric since the
    /// vertical weight (1) is at most 2.
    Box,
    /// Euclidean distance of exponential coordinates, for comparison.
    Euclidean,
}

/// Uniform `resolution^3` lattice in `[0,1]^3` (exponential coordinates) of the
/// first Heisenberg group, with fibers the cosets of the vertical subgroup.
///
/// Point `(i, j, k)` has id `h{i}_{j}_{k}` and belongs to fiber `c{i}_{j}`;
/// points are ordered with `k` fastest.
pub fn heisenberg_sample<T: Scalar>(
    resolution: usize,
    kind: HeisenbergDistance,
) -> Result<(FiniteMetricSpace<T>, QuotientStructure)> {
    if resolution < 2 {
        return Err(Error::ResolutionTooSmall(resolution));
    }
    let step = T::one() / T::from_usize(resolution - 1).unwrap();
    let mut coords = Vec::new();
    let mut ids = Vec::new();
    let mut assignment = Vec::new();
    let mut fiber_ids = Vec::new();
    for i in 0..resolution {
        for j in 0..resolution {
            fiber_ids.push(format!("c{i}_{j}"));
            for k in 0..resolution {
                let c = |v: usize| T::from_usize(v).unwrap() * step;
                coords.push([c(i), c(j), c(k)]);
                ids.push(format!("h{i}_{j}_{k}"));
                assignment.push(i * resolution + j);
            }
        }
    }
    let n = coords.len();
    let half = T::of(0.5);
    let rows: Vec<Vec<T>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let [x, y, t] = coords[a];
                    let [x2, y2, t2] = coords[b];
                    let (dx, dy) = (x2 - x, y2 - y);
                    match kind {
                        HeisenbergDistance::Box => {
                            let dt = t2 - t - half * (x * y2 - y * x2);
                            (dx * dx + dy * dy).sqrt().max(dt.abs().sqrt())
                        }
                        HeisenbergDistance::Euclidean => {
                            let dt = t2 - t;
                            (dx * dx + dy * dy + dt * dt).sqrt()
                        }
                    }
                })
                .collect()
        })
        .collect();
    let space = validate_metric_with(ids, rows, T::of(T::AXIOM_TOLERANCE))?;
    let quotient = QuotientStructure::from_assignment(space.ids(), fiber_ids, &assignment)?;
    Ok((space, quotient))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolution_two_enumerates_cosets() {
        let (space, q) = heisenberg_sample::<f64>(2, HeisenbergDistance::Box).unwrap();
        assert_eq!(space.len(), 8);
        assert_eq!(q.fiber_count(), 4);
        // direct enumeration: (i, j, k) lies in coset (i, j)
        for i in 0..2 {
            for j in 0..2 {
                let fiber = q.fiber_index(&format!("c{i}_{j}")).unwrap();
                let mut want: Vec<usize> = (0..2)
                    .map(|k| space.index_of(&format!("h{i}_{j}_{k}")).unwrap())
                    .collect();
                want.sort();
                assert_eq!(q.members(fiber), want.as_slice());
            }
        }
    }

    #[test]
    fn fibers_are_equal_sized_and_kind_independent() {
        for res in 2..=4 {
            let (sb, qb) = heisenberg_sample::<f64>(res, HeisenbergDistance::Box).unwrap();
            let (se, qe) = heisenberg_sample::<f64>(res, HeisenbergDistance::Euclidean).unwrap();
            assert_eq!(qb, qe);
            assert!((0..qb.fiber_count()).all(|y| qb.members(y).len() == res));
            assert!((0..sb.len()).any(|i| (0..sb.len()).any(|j| sb.dist(i, j) != se.dist(i, j))));
        }
    }

    #[test]
    fn rejects_tiny_resolution() {
        assert_eq!(
            heisenberg_sample::<f64>(1, HeisenbergDistance::Box).unwrap_err(),
            Error::ResolutionTooSmall(1)
        );
    }
}
