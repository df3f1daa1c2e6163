use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::scalar::Scalar;

/// A labeled partition of the points of a finite space into fibers.
///
/// Fiber `y` is `members(y)`; `fiber_of(x)` is the quotient map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuotientStructure {
    fiber_ids: Vec<String>,
    fiber_of: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl QuotientStructure {
    /// Build from blocks of point indices. Blocks keep their given order.
    pub fn from_blocks(
        point_ids: &[String],
        blocks: Vec<(String, Vec<usize>)>,
    ) -> Result<Self> {
        let n = point_ids.len();
        let mut fiber_of = vec![usize::MAX; n];
        let mut fiber_ids = Vec::with_capacity(blocks.len());
        let mut members = Vec::with_capacity(blocks.len());
        let mut seen = HashMap::new();
        for (f, (label, block)) in blocks.into_iter().enumerate() {
            if seen.insert(label.clone(), f).is_some() {
                return Err(Error::Input(format!("duplicate fiber id `{label}`")));
            }
            if block.is_empty() {
                return Err(Error::EmptyFiber(label));
            }
            let mut block = block;
            block.sort_unstable();
            for (k, &x) in block.iter().enumerate() {
                if x >= n {
                    return Err(Error::UnknownPoint(format!("#{x}")));
                }
                if fiber_of[x] != usize::MAX || (k > 0 && block[k - 1] == x) {
                    return Err(Error::OverlappingFibers(point_ids[x].clone()));
                }
                fiber_of[x] = f;
            }
            fiber_ids.push(label);
            members.push(block);
        }
        if let Some(x) = fiber_of.iter().position(|&f| f == usize::MAX) {
            return Err(Error::UncoveredPoint(point_ids[x].clone()));
        }
        Ok(QuotientStructure { fiber_ids, fiber_of, members })
    }

    /// Build from a total assignment point -> fiber index, with fiber labels.
    pub fn from_assignment(point_ids: &[String], fiber_ids: Vec<String>, assignment: &[usize]) -> Result<Self> {
        if assignment.len() < point_ids.len() {
            return Err(Error::UncoveredPoint(point_ids[assignment.len()].clone()));
        }
        let mut blocks: Vec<(String, Vec<usize>)> = fiber_ids.into_iter().map(|l| (l, Vec::new())).collect();
        for (x, &f) in assignment.iter().enumerate() {
            match blocks.get_mut(f) {
                Some(b) => b.1.push(x),
                None => return Err(Error::UnknownFiber(format!("#{f}"))),
            }
        }
        Self::from_blocks(point_ids, blocks)
    }

    /// Every point is its own fiber; fiber labels equal point ids.
    pub fn singletons(point_ids: &[String]) -> Self {
        QuotientStructure {
            fiber_ids: point_ids.to_vec(),
            fiber_of: (0..point_ids.len()).collect(),
            members: (0..point_ids.len()).map(|x| vec![x]).collect(),
        }
    }

    /// One fiber holding every point.
    pub fn single_fiber(point_ids: &[String], label: &str) -> Self {
        QuotientStructure {
            fiber_ids: vec![label.to_string()],
            fiber_of: vec![0; point_ids.len()],
            members: vec![(0..point_ids.len()).collect()],
        }
    }

    pub fn fiber_count(&self) -> usize {
        self.fiber_ids.len()
    }

    pub fn point_count(&self) -> usize {
        self.fiber_of.len()
    }

    pub fn fiber_ids(&self) -> &[String] {
        &self.fiber_ids
    }

    pub fn fiber_id(&self, y: usize) -> &str {
        &self.fiber_ids[y]
    }

    pub fn fiber_index(&self, label: &str) -> Result<usize> {
        self.fiber_ids
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownFiber(label.to_string()))
    }

    #[inline]
    pub fn fiber_of(&self, x: usize) -> usize {
        self.fiber_of[x]
    }

    pub fn members(&self, y: usize) -> &[usize] {
        &self.members[y]
    }

    /// Fibers containing at least one point of `set`.
    pub fn image(&self, set: impl IntoIterator<Item = usize>) -> Vec<bool> {
        let mut hit = vec![false; self.fiber_count()];
        for x in set {
            hit[self.fiber_of[x]] = true;
        }
        hit
    }
}

/// Build a quotient from labeled blocks of point ids.
pub fn make_quotient<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    blocks: Vec<(String, Vec<String>)>,
) -> Result<QuotientStructure> {
    let mut indexed = Vec::with_capacity(blocks.len());
    for (label, block) in blocks {
        let idx = block.iter().map(|id| space.index_of(id)).collect::<Result<Vec<_>>>()?;
        indexed.push((label, idx));
    }
    QuotientStructure::from_blocks(space.ids(), indexed)
}

/// `d(x, fiber y) = min over members of y of d(x, .)`.
#[inline]
pub fn fiber_distance<T: Scalar>(space: &FiniteMetricSpace<T>, quotient: &QuotientStructure, x: usize, y: usize) -> T {
    if quotient.fiber_of(x) == y {
        return T::zero();
    }
    let row = space.row(x);
    quotient
        .members(y)
        .iter()
        .map(|&m| row[m])
        .fold(T::infinity(), T::min)
}

/// Fiber distance by identifiers.
pub fn fiber_distance_by_id<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    point: &str,
    fiber: &str,
) -> Result<T> {
    let x = space.index_of(point)?;
    let y = quotient.fiber_index(fiber)?;
    Ok(fiber_distance(space, quotient, x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::w4;

    #[test]
    fn identity_quotient_has_one_fiber_per_point() {
        let (space, _) = w4::<f64>();
        let q = QuotientStructure::singletons(space.ids());
        assert_eq!(q.fiber_count(), space.len());
    }

    #[test]
    fn w4_fibers_and_distances() {
        let (space, q) = w4::<f64>();
        assert_eq!(q.fiber_count(), 2);
        assert_eq!(fiber_distance_by_id(&space, &q, "a", "F2").unwrap(), 1.0);
        assert_eq!(fiber_distance_by_id(&space, &q, "a", "F1").unwrap(), 0.0);
        assert_eq!(fiber_distance_by_id(&space, &q, "d", "F1").unwrap(), 1.0);
        assert!(matches!(
            fiber_distance_by_id(&space, &q, "z", "F1"),
            Err(Error::UnknownPoint(_))
        ));
        assert!(matches!(
            fiber_distance_by_id(&space, &q, "a", "F9"),
            Err(Error::UnknownFiber(_))
        ));
    }

    #[test]
    fn partition_errors() {
        let (space, _) = w4::<f64>();
        let blocks = |spec: &[(&str, &[&str])]| {
            spec.iter()
                .map(|(l, b)| (l.to_string(), b.iter().map(|s| s.to_string()).collect()))
                .collect::<Vec<_>>()
        };
        assert_eq!(
            make_quotient(&space, blocks(&[("A", &["a"]), ("B", &["a", "b"]), ("C", &["c", "d"])])).unwrap_err(),
            Error::OverlappingFibers("a".into())
        );
        assert_eq!(
            make_quotient(&space, blocks(&[("A", &["a", "b"]), ("B", &[])])).unwrap_err(),
            Error::EmptyFiber("B".into())
        );
        assert_eq!(
            make_quotient(&space, blocks(&[("A", &["a", "b", "c"])])).unwrap_err(),
            Error::UncoveredPoint("d".into())
        );
    }
}
