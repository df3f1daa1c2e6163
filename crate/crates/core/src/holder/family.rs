use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::holder::check::{check_holder, HolderCertificate, HolderParams};
use crate::metric::{fiber_distance, FiniteMetricSpace, QuotientStructure, Section};
use crate::scalar::{band, pow, Scalar};

/// Radius `r = (eps / (L + 1))^(1/alpha)`: graph points over fibers met within
/// `r` of `phi(y)` stay within `eps` of `phi(y)`.
pub fn continuity_modulus<T: Scalar>(params: HolderParams<T>, epsilon: T) -> Result<T> {
    let top = params.l + T::one();
    if !(epsilon > T::zero() && epsilon <= top) {
        return Err(Error::EpsilonOutOfRange(epsilon.as_f64()));
    }
    Ok((epsilon / top).powf(params.alpha.recip()))
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuityReport<T> {
    pub radius: T,
    pub epsilon: T,
    /// Largest `d(phi(y), phi(pi(x')))` over `d(phi(y), x') <= radius`.
    pub max_displacement: T,
    /// `(graph point, x')` attaining the max.
    pub witness: Option<(usize, usize)>,
    pub holds: bool,
}

/// Verify the modulus of continuity on every graph point of a section that
/// satisfies the `(L, alpha)` claim.
pub fn verify_continuity<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    section: &Section,
    params: HolderParams<T>,
    epsilon: T,
) -> Result<ContinuityReport<T>> {
    let radius = continuity_modulus(params, epsilon)?;
    if !check_holder(space, quotient, section, params).holds {
        return Err(Error::PremiseFailed("section does not satisfy the (L, alpha) claim".into()));
    }
    let mut max_displacement = T::zero();
    let mut witness = None;
    for &x in section.choice() {
        for xp in 0..space.len() {
            if space.dist(x, xp) <= radius {
                let moved = space.dist(x, section.at(quotient.fiber_of(xp)));
                if moved > max_displacement || witness.is_none() {
                    max_displacement = moved.max(max_displacement);
                    witness = Some((x, xp));
                }
            }
        }
    }
    let tol = T::of(T::DEFAULT_TOLERANCE);
    Ok(ContinuityReport {
        radius,
        epsilon,
        max_displacement,
        witness,
        holds: max_displacement <= epsilon + band(tol, epsilon),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EquiboundReport<T> {
    /// Per fiber: `(max over members and x0 in K of d(x0, phi(y)), bound)`.
    pub per_fiber: Vec<(T, T)>,
    pub max_left: T,
    pub max_bound: T,
    pub holds: bool,
}

/// For a family of `(L, alpha)` sections with `phi(y0)` in `k_set`, check
/// `d(x0, phi(y)) <= diam(K) + (L + 1) max_{x in K} max(D(x, y)^alpha, D(x, y))`
/// for every `x0` in `K`, every member and every fiber.
pub fn family_equibound_check<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    family: &[Section],
    params: HolderParams<T>,
    y0: usize,
    k_set: &[usize],
) -> Result<EquiboundReport<T>> {
    if k_set.is_empty() {
        return Err(Error::PremiseFailed("the compact set K is empty".into()));
    }
    for phi in family {
        if !check_holder(space, quotient, phi, params).holds {
            return Err(Error::PremiseFailed("a family member fails the (L, alpha) claim".into()));
        }
        if !k_set.contains(&phi.at(y0)) {
            return Err(Error::PremiseFailed("a family member has phi(y0) outside K".into()));
        }
    }
    let diam = space.set_diameter(k_set);
    let tol = T::of(T::DEFAULT_TOLERANCE);
    let mut per_fiber = Vec::with_capacity(quotient.fiber_count());
    let mut holds = true;
    for y in 0..quotient.fiber_count() {
        let reach = k_set
            .iter()
            .map(|&x| {
                let d = fiber_distance(space, quotient, x, y);
                pow(d, params.alpha).max(d)
            })
            .fold(T::zero(), T::max);
        let bound = diam + (params.l + T::one()) * reach;
        let left = family
            .iter()
            .flat_map(|phi| k_set.iter().map(move |&x0| space.dist(x0, phi.at(y))))
            .fold(T::zero(), T::max);
        holds &= left <= bound + band(tol, bound);
        per_fiber.push((left, bound));
    }
    let max_left = per_fiber.iter().map(|p| p.0).fold(T::zero(), T::max);
    let max_bound = per_fiber.iter().map(|p| p.1).fold(T::zero(), T::max);
    Ok(EquiboundReport { per_fiber, max_left, max_bound, holds })
}

/// Fibers `y'` such that every point of `K` in fiber `y` has a point of `y'`
/// strictly within `epsilon`. Always contains `y`.
pub fn uniform_openness_radius<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    k_set: &[usize],
    y: usize,
    epsilon: T,
) -> Vec<usize> {
    let anchors: Vec<usize> = k_set.iter().copied().filter(|&x| quotient.fiber_of(x) == y).collect();
    (0..quotient.fiber_count())
        .filter(|&yp| {
            yp == y
                || anchors
                    .iter()
                    .all(|&x| quotient.members(yp).iter().any(|&xp| space.dist(x, xp) < epsilon))
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitReport<T> {
    pub limit: Section,
    /// Positions of the extracted constant subsequence.
    pub subsequence: Vec<usize>,
    pub certificate: HolderCertificate<T>,
}

/// Extract a constant subsequence (pigeonhole on the finitely many sections)
/// and check its limit against the claim.
///
/// The most frequent section is taken; ties go to the one appearing first.
pub fn limit_closure_check<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    sequence: &[Section],
    params: HolderParams<T>,
) -> Result<LimitReport<T>> {
    if sequence.is_empty() {
        return Err(Error::NoConvergentSubsequence);
    }
    for s in sequence {
        if !check_holder(space, quotient, s, params).holds {
            return Err(Error::PremiseFailed("a sequence element fails the (L, alpha) claim".into()));
        }
    }
    let mut counts: HashMap<&Section, (usize, usize)> = HashMap::new();
    for (i, s) in sequence.iter().enumerate() {
        counts.entry(s).or_insert((0, i)).0 += 1;
    }
    let (limit, _) = counts
        .into_iter()
        .max_by(|a, b| a.1 .0.cmp(&b.1 .0).then(b.1 .1.cmp(&a.1 .1)))
        .expect("nonempty sequence");
    let limit = limit.clone();
    let subsequence = sequence.iter().enumerate().filter(|(_, s)| **s == limit).map(|(i, _)| i).collect();
    let certificate = check_holder(space, quotient, &limit, params);
    Ok(LimitReport { limit, subsequence, certificate })
}
