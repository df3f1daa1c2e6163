use serde::Serialize;

use crate::error::{Error, Result};
use crate::holder::check::{
    bound_k_from_l, check_alpha, check_holder, diameter_bound_k, HolderParams,
};
use crate::metric::{fiber_distance, FiniteMetricSpace, QuotientStructure, Section};
use crate::scalar::{band, pow, Scalar};

/// Which with-respect-to relation is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WrtMode {
    /// `d(phi(y), psi(y)) <= L a^alpha + a` with `a = d(x^, psi(y))`.
    Weak,
    /// Minimum of the weak bound and the same bound measured to `phi(y)`;
    /// symmetric under swapping the two sections.
    Strong,
}

#[derive(Debug, Clone, Serialize)]
pub struct FiberSlack<T> {
    pub fiber: usize,
    /// `d(phi(y), psi(y))`
    pub gap: T,
    /// `d(x^, psi(y))`
    pub base_radius: T,
    /// `d(x^, phi(y))`
    pub subject_radius: T,
    pub bound: T,
    pub slack: T,
}

/// Per-fiber outcome of a with-respect-to check.
#[derive(Debug, Clone, Serialize)]
pub struct WrtCertificate<T> {
    pub mode: WrtMode,
    pub params: HolderParams<T>,
    pub anchor_fiber: usize,
    pub fibers: Vec<FiberSlack<T>>,
    pub slack_min: T,
    pub worst_fiber: Option<usize>,
    /// Least constant making the relation hold; `None` when no finite one does.
    pub minimal_l: Option<T>,
    pub tolerance: T,
    pub holds: bool,
    pub holds_strict: bool,
}

#[inline]
fn radial_bound<T: Scalar>(l: T, alpha: T, r: T) -> T {
    l * pow(r, alpha) + r
}

/// Smallest `L >= 0` with `gap <= L r^alpha + r`, or `None` if `r = 0 < gap`.
#[inline]
fn required_constant<T: Scalar>(gap: T, r: T, alpha: T) -> Option<T> {
    if gap <= r {
        Some(T::zero())
    } else if r <= T::zero() {
        None
    } else {
        Some((gap - r) / pow(r, alpha))
    }
}

/// Core check from the three per-fiber distance profiles.
pub fn wrt_from_distances<T: Scalar>(
    gap: &[T],
    base_radius: &[T],
    subject_radius: &[T],
    anchor_fiber: usize,
    params: HolderParams<T>,
    mode: WrtMode,
    tol: T,
) -> WrtCertificate<T> {
    let mut fibers = Vec::with_capacity(gap.len());
    let mut slack_min = T::infinity();
    let mut worst_fiber = None;
    let mut holds = true;
    let mut holds_strict = true;
    let mut minimal = Some(T::zero());
    for y in 0..gap.len() {
        let (g, a, b) = (gap[y], base_radius[y], subject_radius[y]);
        let bound = match mode {
            WrtMode::Weak => radial_bound(params.l, params.alpha, a),
            WrtMode::Strong => radial_bound(params.l, params.alpha, a).min(radial_bound(params.l, params.alpha, b)),
        };
        let slack = bound - g;
        if slack < slack_min {
            slack_min = slack;
            worst_fiber = Some(y);
        }
        holds_strict &= slack >= T::zero();
        holds &= slack >= -band(tol, g);
        let need = match mode {
            WrtMode::Weak => required_constant(g, a, params.alpha),
            WrtMode::Strong => required_constant(g, a, params.alpha)
                .zip(required_constant(g, b, params.alpha))
                .map(|(u, v)| u.max(v)),
        };
        minimal = minimal.zip(need).map(|(m, n)| m.max(n));
        fibers.push(FiberSlack { fiber: y, gap: g, base_radius: a, subject_radius: b, bound, slack });
    }
    WrtCertificate {
        mode,
        params,
        anchor_fiber,
        fibers,
        slack_min,
        worst_fiber,
        minimal_l: minimal,
        tolerance: tol,
        holds,
        holds_strict,
    }
}

fn default_tol<T: Scalar>(space: &FiniteMetricSpace<T>) -> T {
    if space.is_integral() {
        T::zero()
    } else {
        T::of(T::DEFAULT_TOLERANCE)
    }
}

/// Distance profiles of `subject` against `base` at the anchor fiber.
fn profiles<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    subject: &Section,
    base: &Section,
    anchor_fiber: usize,
) -> Result<(Vec<T>, Vec<T>, Vec<T>)> {
    if anchor_fiber >= quotient.fiber_count() {
        return Err(Error::UnknownFiber(format!("#{anchor_fiber}")));
    }
    let anchor = base.at(anchor_fiber);
    if subject.at(anchor_fiber) != anchor {
        return Err(Error::AnchorMismatch(quotient.fiber_id(anchor_fiber).to_string()));
    }
    let n = quotient.fiber_count();
    let gap = (0..n).map(|y| space.dist(subject.at(y), base.at(y))).collect();
    let a = (0..n).map(|y| space.dist(anchor, base.at(y))).collect();
    let b = (0..n).map(|y| space.dist(anchor, subject.at(y))).collect();
    Ok((gap, a, b))
}

fn check_mode<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    subject: &Section,
    base: &Section,
    anchor_fiber: usize,
    params: HolderParams<T>,
    mode: WrtMode,
) -> Result<WrtCertificate<T>> {
    let (g, a, b) = profiles(space, quotient, subject, base, anchor_fiber)?;
    Ok(wrt_from_distances(&g, &a, &b, anchor_fiber, params, mode, default_tol(space)))
}

/// Is `subject` intrinsically `(L, alpha)`-Hölder with respect to `base`
/// at the shared point over `anchor_fiber`?
pub fn check_wrt<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    subject: &Section,
    base: &Section,
    anchor_fiber: usize,
    params: HolderParams<T>,
) -> Result<WrtCertificate<T>> {
    check_mode(space, quotient, subject, base, anchor_fiber, params, WrtMode::Weak)
}

/// Strong (symmetric) form of [`check_wrt`].
pub fn check_wrt_strong<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    subject: &Section,
    base: &Section,
    anchor_fiber: usize,
    params: HolderParams<T>,
) -> Result<WrtCertificate<T>> {
    check_mode(space, quotient, subject, base, anchor_fiber, params, WrtMode::Strong)
}

/// Least constant for the relation in the given mode (`None` if infinite).
pub fn minimal_wrt_constant<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    subject: &Section,
    base: &Section,
    anchor_fiber: usize,
    alpha: T,
    mode: WrtMode,
) -> Result<Option<T>> {
    let params = HolderParams::new(T::one(), alpha)?;
    Ok(check_mode(space, quotient, subject, base, anchor_fiber, params, mode)?.minimal_l)
}

#[derive(Debug, Clone, Serialize)]
pub struct TransitivityReport<T> {
    pub composed_constant: T,
    pub composed: WrtCertificate<T>,
    /// The composed relation holds at `2 max(L1, L2)`.
    pub holds: bool,
}

/// Given `phi ~ psi` at `L1` and `psi ~ eta` at `L2` (strong form, common
/// anchor), check `phi ~ eta` at `2 max(L1, L2)`.
///
/// The composed relation is reported, not assumed: it can fail on
/// instances where a fiber carries three well-separated graph points.
#[allow(clippy::too_many_arguments)]
pub fn strong_transitivity_check<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    phi: &Section,
    psi: &Section,
    eta: &Section,
    anchor_fiber: usize,
    l1: T,
    l2: T,
    alpha: T,
) -> Result<TransitivityReport<T>> {
    let first = check_wrt_strong(space, quotient, phi, psi, anchor_fiber, HolderParams::new(l1, alpha)?)?;
    if !first.holds {
        return Err(Error::PremiseFailed("first relation does not hold at L1".into()));
    }
    let second = check_wrt_strong(space, quotient, psi, eta, anchor_fiber, HolderParams::new(l2, alpha)?)?;
    if !second.holds {
        return Err(Error::PremiseFailed("second relation does not hold at L2".into()));
    }
    let composed_constant = T::of(2.0) * l1.max(l2);
    let composed = check_wrt_strong(
        space,
        quotient,
        phi,
        eta,
        anchor_fiber,
        HolderParams::new(composed_constant, alpha)?,
    )?;
    let holds = composed.holds;
    Ok(TransitivityReport { composed_constant, composed, holds })
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport<T> {
    /// Classes as sorted lists of input positions, ordered by first member.
    pub classes: Vec<Vec<usize>>,
    /// `constants[i][j]`: least strong constant relating section `i` to `j`.
    pub constants: Vec<Vec<Option<T>>>,
}

/// Partition `sections` under "strongly related at some finite constant"
/// at the point `psi(anchor_fiber)`.
pub fn equivalence_classes<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    sections: &[Section],
    psi: &Section,
    anchor_fiber: usize,
    alpha: T,
) -> Result<EquivalenceReport<T>> {
    check_alpha(alpha)?;
    let anchor = psi.at(anchor_fiber);
    if sections.iter().any(|s| s.at(anchor_fiber) != anchor) {
        return Err(Error::AnchorMismatch(quotient.fiber_id(anchor_fiber).to_string()));
    }
    let n = sections.len();
    let mut constants = vec![vec![None; n]; n];
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in 0..n {
            let c = minimal_wrt_constant(space, quotient, &sections[i], &sections[j], anchor_fiber, alpha, WrtMode::Strong)?;
            constants[i][j] = c;
            if c.is_some() {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot[r]].push(i);
    }
    Ok(EquivalenceReport { classes, constants })
}

/// Which implication between the with-respect-to relation and the point
/// bound `d(x0, phi(y)) <= C D(x0, y)^e` is exercised.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PointBoundDirection<T> {
    /// From `phi ~ phi0` at `(l1, beta)` derive the point bound with constant
    /// `L K (l1 + 1)` and exponent `beta * alpha`.
    FromWrt { l1: T, beta: T },
    /// From the point bound at `(l2, gamma)` derive `phi ~ phi0` at `(l2, gamma)`.
    FromPointBound { l2: T, gamma: T },
}

#[derive(Debug, Clone, Serialize)]
pub struct PointBoundReport<T> {
    pub direction: PointBoundDirection<T>,
    /// `diameter_bound_k` of `phi0`.
    pub spread: T,
    /// `L + 3 (floor(spread) + 1)`.
    pub global_constant: T,
    pub asserted_constant: T,
    pub asserted_exponent: T,
    /// Least point-bound constant at the asserted exponent (forward direction).
    pub measured_constant: Option<T>,
    /// The derived relation (backward direction).
    pub derived_wrt: Option<WrtCertificate<T>>,
    pub holds: bool,
}

/// Check one direction of the equivalence between "related to an
/// `(L, alpha)`-Hölder section `phi0`" and a point bound at `x0 = phi(y0)`.
///
/// Constants below 1 are rejected: the forward constant is only valid for
/// `L, l1 >= 1`.
#[allow(clippy::too_many_arguments)]
pub fn wrt_pointbound_equivalence<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    phi: &Section,
    phi0: &Section,
    y0: usize,
    l: T,
    alpha: T,
    direction: PointBoundDirection<T>,
) -> Result<PointBoundReport<T>> {
    if l < T::one() {
        return Err(Error::PremiseFailed("the base section's constant must be at least 1".into()));
    }
    let params = HolderParams::new(l, alpha)?;
    if !check_holder(space, quotient, phi0, params).holds {
        return Err(Error::PremiseFailed("phi0 is not intrinsically (L, alpha)-Hölder".into()));
    }
    if y0 >= quotient.fiber_count() {
        return Err(Error::UnknownFiber(format!("#{y0}")));
    }
    if phi.at(y0) != phi0.at(y0) {
        return Err(Error::AnchorMismatch(quotient.fiber_id(y0).to_string()));
    }
    let x0 = phi.at(y0);
    let tol = default_tol(space);
    let spread = diameter_bound_k(space, quotient, phi0);
    let global_constant = bound_k_from_l(l, spread)?;
    let n = quotient.fiber_count();
    let reach: Vec<T> = (0..n).map(|y| space.dist(x0, phi.at(y))).collect();
    let to_fiber: Vec<T> = (0..n).map(|y| fiber_distance(space, quotient, x0, y)).collect();
    let point_bound_holds = |c: T, e: T| (0..n).all(|y| c * pow(to_fiber[y], e) - reach[y] >= -band(tol, reach[y]));

    match direction {
        PointBoundDirection::FromWrt { l1, beta } => {
            if l1 < T::one() {
                return Err(Error::PremiseFailed("l1 must be at least 1".into()));
            }
            let wrt = check_wrt(space, quotient, phi, phi0, y0, HolderParams::new(l1, beta)?)?;
            if !wrt.holds {
                return Err(Error::PremiseFailed("phi is not related to phi0 at (l1, beta)".into()));
            }
            let asserted_constant = l * global_constant * (l1 + T::one());
            let asserted_exponent = beta * alpha;
            let measured = (0..n)
                .filter(|&y| y != y0)
                .map(|y| reach[y] / pow(to_fiber[y], asserted_exponent))
                .fold(T::zero(), T::max);
            Ok(PointBoundReport {
                direction,
                spread,
                global_constant,
                asserted_constant,
                asserted_exponent,
                measured_constant: Some(measured),
                derived_wrt: None,
                holds: point_bound_holds(asserted_constant, asserted_exponent),
            })
        }
        PointBoundDirection::FromPointBound { l2, gamma } => {
            let wrt_params = HolderParams::new(l2, gamma)?;
            if !point_bound_holds(l2, gamma) {
                return Err(Error::PremiseFailed("point bound does not hold at (l2, gamma)".into()));
            }
            let derived = check_wrt(space, quotient, phi, phi0, y0, wrt_params)?;
            Ok(PointBoundReport {
                direction,
                spread,
                global_constant,
                asserted_constant: l2,
                asserted_exponent: gamma,
                measured_constant: None,
                holds: derived.holds,
                derived_wrt: Some(derived),
            })
        }
    }
}
