use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, QuotientStructure};
use crate::scalar::Scalar;

/// A right inverse of the quotient map: one chosen point per fiber.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Section {
    choice: Vec<usize>,
}

impl Section {
    /// Validates `fiber_of(choice[y]) == y` for every fiber.
    pub fn new(quotient: &QuotientStructure, choice: Vec<usize>) -> Result<Self> {
        if choice.len() != quotient.fiber_count() {
            return Err(Error::NotASection(format!(
                "{} choices for {} fibers",
                choice.len(),
                quotient.fiber_count()
            )));
        }
        for (y, &x) in choice.iter().enumerate() {
            if x >= quotient.point_count() || quotient.fiber_of(x) != y {
                return Err(Error::NotASection(format!(
                    "chosen point for fiber `{}` lies outside it",
                    quotient.fiber_id(y)
                )));
            }
        }
        Ok(Section { choice })
    }

    /// Build from `(fiber id, point id)` pairs covering every fiber.
    pub fn from_ids<T: Scalar>(
        space: &FiniteMetricSpace<T>,
        quotient: &QuotientStructure,
        pairs: &[(&str, &str)],
    ) -> Result<Self> {
        let mut choice = vec![usize::MAX; quotient.fiber_count()];
        for (fiber, point) in pairs {
            let y = quotient.fiber_index(fiber)?;
            choice[y] = space.index_of(point)?;
        }
        if let Some(y) = choice.iter().position(|&x| x == usize::MAX) {
            return Err(Error::NotASection(format!("fiber `{}` has no point", quotient.fiber_id(y))));
        }
        Self::new(quotient, choice)
    }

    /// Shorthand for fixtures: point ids listed in fiber order.
    pub fn from_points<T: Scalar>(
        space: &FiniteMetricSpace<T>,
        quotient: &QuotientStructure,
        points: &[&str],
    ) -> Result<Self> {
        let choice = points.iter().map(|p| space.index_of(p)).collect::<Result<Vec<_>>>()?;
        Self::new(quotient, choice)
    }

    #[inline]
    pub fn at(&self, y: usize) -> usize {
        self.choice[y]
    }

    pub fn choice(&self) -> &[usize] {
        &self.choice
    }

    pub fn fiber_count(&self) -> usize {
        self.choice.len()
    }

    /// Fiber whose chosen point is `x`, if `x` lies on the graph.
    pub fn fiber_of_graph_point(&self, x: usize) -> Option<usize> {
        self.choice.iter().position(|&c| c == x)
    }

    /// Point ids of the graph, keyed by fiber id.
    pub fn to_id_map<T: Scalar>(&self, space: &FiniteMetricSpace<T>, quotient: &QuotientStructure) -> HashMap<String, String> {
        self.choice
            .iter()
            .enumerate()
            .map(|(y, &x)| (quotient.fiber_id(y).to_string(), space.id(x).to_string()))
            .collect()
    }
}

/// Every section of a quotient, in lexicographic order of choices.
///
/// The count is the product of fiber sizes; callers keep instances small.
pub fn all_sections(quotient: &QuotientStructure) -> Vec<Section> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; quotient.fiber_count()];
    if quotient.fiber_count() == 0 {
        return out;
    }
    loop {
        let choice = idx.iter().enumerate().map(|(y, &k)| quotient.members(y)[k]).collect();
        out.push(Section { choice });
        let mut y = quotient.fiber_count();
        loop {
            if y == 0 {
                return out;
            }
            y -= 1;
            idx[y] += 1;
            if idx[y] < quotient.members(y).len() {
                break;
            }
            idx[y] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::w4;
    use crate::metric::fiber_distance;

    #[test]
    fn section_must_respect_fibers() {
        let (space, q) = w4::<f64>();
        assert!(Section::from_points(&space, &q, &["a", "d"]).is_ok());
        assert!(matches!(
            Section::from_points(&space, &q, &["c", "d"]),
            Err(Error::NotASection(_))
        ));
        assert!(matches!(Section::from_points(&space, &q, &["a"]), Err(Error::NotASection(_))));
    }

    #[test]
    fn off_fiber_distances_are_positive() {
        let (space, q) = w4::<f64>();
        for s in all_sections(&q) {
            for y1 in 0..q.fiber_count() {
                assert_eq!(q.fiber_of(s.at(y1)), y1);
                for y2 in 0..q.fiber_count() {
                    if y1 != y2 {
                        assert!(fiber_distance(&space, &q, s.at(y1), y2) > 0.0);
                    }
                }
            }
        }
        assert_eq!(all_sections(&q).len(), 4);
    }
}
