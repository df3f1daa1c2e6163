use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{fiber_distance, FiniteMetricSpace, QuotientStructure, Section};
use crate::scalar::{band, pow, Scalar};

/// An `(L, alpha)` claim: `L > 0`, `0 < alpha <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderParams<T> {
    pub l: T,
    pub alpha: T,
}

impl<T: Scalar> HolderParams<T> {
    pub fn new(l: T, alpha: T) -> Result<Self> {
        check_alpha(alpha)?;
        if !(l.is_finite() && l > T::zero()) {
            return Err(Error::InvalidConstant(l.as_f64()));
        }
        Ok(HolderParams { l, alpha })
    }

    /// Same exponent, different constant.
    pub fn with_constant(self, l: T) -> Result<Self> {
        Self::new(l, self.alpha)
    }
}

pub(crate) fn check_alpha<T: Scalar>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha <= T::one() {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha.as_f64()))
    }
}

/// `L * D^alpha + D - d`; nonnegative exactly when the pair satisfies the
/// intrinsic inequality.
#[inline]
pub fn intrinsic_slack<T: Scalar>(d: T, fiber_d: T, params: HolderParams<T>) -> T {
    params.l * pow(fiber_d, params.alpha) + fiber_d - d
}

/// The distances a section's graph presents to the intrinsic inequality:
/// `graph(y1, y2) = d(phi(y1), phi(y2))` and
/// `fiber(y1, y2) = d(phi(y1), fiber y2)`.
///
/// Finite instances and sampled linear quotients both reduce to this view.
#[derive(Debug, Clone)]
pub struct SectionView<T> {
    n: usize,
    graph: Vec<T>,
    fiber: Vec<T>,
    exact: bool,
}

impl<T: Scalar> SectionView<T> {
    pub fn new(space: &FiniteMetricSpace<T>, quotient: &QuotientStructure, section: &Section) -> Self {
        let n = section.fiber_count();
        let mut graph = vec![T::zero(); n * n];
        let mut fiber = vec![T::zero(); n * n];
        for y1 in 0..n {
            let x1 = section.at(y1);
            for y2 in 0..n {
                graph[y1 * n + y2] = space.dist(x1, section.at(y2));
                fiber[y1 * n + y2] = fiber_distance(space, quotient, x1, y2);
            }
        }
        SectionView { n, graph, fiber, exact: space.is_integral() }
    }

    /// Build from precomputed row-major tables.
    pub fn from_tables(n: usize, graph: Vec<T>, fiber: Vec<T>) -> Result<Self> {
        if graph.len() != n * n || fiber.len() != n * n {
            return Err(Error::Input("section view tables must be n x n".into()));
        }
        Ok(SectionView { n, graph, fiber, exact: false })
    }

    pub fn fiber_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn graph_dist(&self, y1: usize, y2: usize) -> T {
        self.graph[y1 * self.n + y2]
    }

    #[inline]
    pub fn fiber_dist(&self, y1: usize, y2: usize) -> T {
        self.fiber[y1 * self.n + y2]
    }

    /// Tolerance this view is judged with by default: zero on integer tables.
    pub fn default_tolerance(&self) -> T {
        if self.exact {
            T::zero()
        } else {
            T::of(T::DEFAULT_TOLERANCE)
        }
    }

    /// Ordered pairs `(y1, y2)` with `y1 != y2`, lexicographic.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| (0..self.n).filter(move |&b| b != a).map(move |b| (a, b)))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairSlack<T> {
    pub from: usize,
    pub to: usize,
    pub distance: T,
    pub fiber_distance: T,
    pub slack: T,
}

/// Result of checking an `(L, alpha)` claim against a section.
#[derive(Debug, Clone, Serialize)]
pub struct HolderCertificate<T> {
    pub params: HolderParams<T>,
    pub per_pair_slack: Vec<PairSlack<T>>,
    /// Smallest constant that would make the claim hold (may be 0).
    pub minimal_l: T,
    /// Lexicographically least ordered pair attaining `minimal_l`.
    pub worst_pair: Option<(usize, usize)>,
    pub slack_min: T,
    pub slack_min_pair: Option<(usize, usize)>,
    pub tolerance: T,
    /// Every pair has `slack >= -tolerance * (1 + d)`.
    pub holds: bool,
    /// Every pair has `slack >= 0`.
    pub holds_strict: bool,
}

/// Check the intrinsic `(L, alpha)` inequality over all ordered fiber pairs.
pub fn check_holder_view<T: Scalar>(view: &SectionView<T>, params: HolderParams<T>, tol: T) -> HolderCertificate<T> {
    let mut per_pair_slack = Vec::with_capacity(view.n * view.n.saturating_sub(1));
    let mut slack_min = T::infinity();
    let mut slack_min_pair = None;
    let mut holds = true;
    let mut holds_strict = true;
    for (a, b) in view.pairs() {
        let d = view.graph_dist(a, b);
        let fd = view.fiber_dist(a, b);
        let slack = intrinsic_slack(d, fd, params);
        if slack < slack_min {
            slack_min = slack;
            slack_min_pair = Some((a, b));
        }
        holds_strict &= slack >= T::zero();
        holds &= slack >= -band(tol, d);
        per_pair_slack.push(PairSlack { from: a, to: b, distance: d, fiber_distance: fd, slack });
    }
    let (minimal_l, worst_pair) = minimal_constant_view(view, params.alpha);
    HolderCertificate {
        params,
        per_pair_slack,
        minimal_l,
        worst_pair,
        slack_min,
        slack_min_pair,
        tolerance: tol,
        holds,
        holds_strict,
    }
}

/// Check on a finite instance with the instance's default tolerance.
pub fn check_holder<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    section: &Section,
    params: HolderParams<T>,
) -> HolderCertificate<T> {
    let view = SectionView::new(space, quotient, section);
    let tol = view.default_tolerance();
    check_holder_view(&view, params, tol)
}

/// Max over ordered pairs of `score(y1, y2)`; ties keep the first pair.
fn argmax_pairs<T: Scalar>(view: &SectionView<T>, score: impl Fn(T, T) -> T) -> (T, Option<(usize, usize)>) {
    let mut best = T::neg_infinity();
    let mut at = None;
    for (a, b) in view.pairs() {
        let s = score(view.graph_dist(a, b), view.fiber_dist(a, b));
        if s > best {
            best = s;
            at = Some((a, b));
        }
    }
    (best, at)
}

/// `max over pairs of max(0, (d - D) / D^alpha)` with its witness pair.
pub fn minimal_constant_view<T: Scalar>(view: &SectionView<T>, alpha: T) -> (T, Option<(usize, usize)>) {
    let (best, at) = argmax_pairs(view, |d, fd| ((d - fd) / pow(fd, alpha)).max(T::zero()));
    (best.max(T::zero()), at)
}

/// Smallest `L >= 0` for which the intrinsic inequality holds.
pub fn minimal_holder_constant<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    section: &Section,
    alpha: T,
) -> Result<(T, Option<(usize, usize)>)> {
    check_alpha(alpha)?;
    Ok(minimal_constant_view(&SectionView::new(space, quotient, section), alpha))
}

/// Smallest `K` with `d <= K * D^alpha` on all pairs (the one-term form).
pub fn minimal_global_constant_view<T: Scalar>(view: &SectionView<T>, alpha: T) -> (T, Option<(usize, usize)>) {
    let (best, at) = argmax_pairs(view, |d, fd| d / pow(fd, alpha));
    (best.max(T::zero()), at)
}

pub fn minimal_global_constant<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    section: &Section,
    alpha: T,
) -> Result<(T, Option<(usize, usize)>)> {
    check_alpha(alpha)?;
    Ok(minimal_global_constant_view(&SectionView::new(space, quotient, section), alpha))
}

/// Does `d <= K * D^alpha` hold on every pair (within tolerance)?
pub fn check_global_view<T: Scalar>(view: &SectionView<T>, k: T, alpha: T, tol: T) -> bool {
    view.pairs().all(|(a, b)| {
        let d = view.graph_dist(a, b);
        k * pow(view.fiber_dist(a, b), alpha) - d >= -band(tol, d)
    })
}

/// `k = max over all (y1, y2) of d(phi(y1), fiber y2)`.
pub fn diameter_bound_k_view<T: Scalar>(view: &SectionView<T>) -> T {
    view.pairs().map(|(a, b)| view.fiber_dist(a, b)).fold(T::zero(), T::max)
}

pub fn diameter_bound_k<T: Scalar>(space: &FiniteMetricSpace<T>, quotient: &QuotientStructure, section: &Section) -> T {
    diameter_bound_k_view(&SectionView::new(space, quotient, section))
}

/// Global constant implied by an intrinsic constant on a base of fiber
/// spread `k`: `L + 3 (floor(k) + 1)`.
pub fn bound_k_from_l<T: Scalar>(l: T, k: T) -> Result<T> {
    if !(l.is_finite() && l >= T::zero()) {
        return Err(Error::InvalidConstant(l.as_f64()));
    }
    if !(k.is_finite() && k >= T::zero()) {
        return Err(Error::InvalidConstant(k.as_f64()));
    }
    Ok(l + T::of(3.0) * (k.floor() + T::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{w4, w4_section};

    fn params(l: f64, a: f64) -> HolderParams<f64> {
        HolderParams::new(l, a).unwrap()
    }

    #[test]
    fn params_validate() {
        assert_eq!(HolderParams::new(1.0, 1.5).unwrap_err(), Error::AlphaOutOfRange(1.5));
        assert_eq!(HolderParams::new(1.0, 0.0).unwrap_err(), Error::AlphaOutOfRange(0.0));
        assert_eq!(HolderParams::new(0.0, 0.5).unwrap_err(), Error::InvalidConstant(0.0));
        assert!(HolderParams::new(1.0, 1.0).is_ok());
    }

    #[test]
    fn w4_tight_claim_holds_with_zero_slack() {
        let (s, q) = w4::<f64>();
        let phi = w4_section(&s, &q, "a", "d");
        let cert = check_holder(&s, &q, &phi, params(2.0, 0.5));
        assert!(cert.holds && cert.holds_strict);
        assert_eq!(cert.slack_min, 0.0);
        assert_eq!(cert.tolerance, 0.0);
        assert_eq!(cert.per_pair_slack.len(), 2);
    }

    #[test]
    fn w4_below_threshold_fails_at_first_pair() {
        let (s, q) = w4::<f64>();
        let phi = w4_section(&s, &q, "a", "d");
        let cert = check_holder(&s, &q, &phi, params(1.9, 0.5));
        assert!(!cert.holds);
        assert_eq!(cert.worst_pair, Some((0, 1)));
        assert_eq!(cert.minimal_l, 2.0);
    }

    #[test]
    fn identity_quotient_always_holds() {
        let (s, _) = w4::<f64>();
        let q = QuotientStructure::singletons(s.ids());
        let phi = Section::new(&q, (0..4).collect()).unwrap();
        for &(l, a) in &[(0.1, 0.25), (1.0, 1.0), (5.0, 0.5)] {
            assert!(check_holder(&s, &q, &phi, params(l, a)).holds_strict);
        }
        assert_eq!(minimal_holder_constant(&s, &q, &phi, 0.5).unwrap().0, 0.0);
        assert_eq!(minimal_global_constant(&s, &q, &phi, 1.0).unwrap().0, 1.0);
        assert_eq!(diameter_bound_k(&s, &q, &phi), s.diameter());
    }

    #[test]
    fn w4_constants() {
        let (s, q) = w4::<f64>();
        let phi = w4_section(&s, &q, "a", "d");
        let psi = w4_section(&s, &q, "a", "c");
        for alpha in [0.25, 0.5, 1.0] {
            assert_eq!(minimal_holder_constant(&s, &q, &phi, alpha).unwrap().0, 2.0);
            assert_eq!(minimal_holder_constant(&s, &q, &psi, alpha).unwrap().0, 0.0);
            assert_eq!(minimal_global_constant(&s, &q, &psi, alpha).unwrap().0, 1.0);
        }
        assert_eq!(minimal_global_constant(&s, &q, &phi, 0.5).unwrap().0, 3.0);
        assert_eq!(diameter_bound_k(&s, &q, &phi), 1.0);
        let single = QuotientStructure::single_fiber(s.ids(), "Y");
        let one = Section::new(&single, vec![2]).unwrap();
        assert_eq!(diameter_bound_k(&s, &single, &one), 0.0);
    }

    #[test]
    fn bound_from_l_formula() {
        assert_eq!(bound_k_from_l(2.0, 1.0).unwrap(), 8.0);
        assert_eq!(bound_k_from_l(1.0, 0.5).unwrap(), 4.0);
        let (s, q) = w4::<f64>();
        let phi = w4_section(&s, &q, "a", "d");
        let k = diameter_bound_k(&s, &q, &phi);
        let (kmin, _) = minimal_global_constant(&s, &q, &phi, 0.5).unwrap();
        assert!(kmin <= bound_k_from_l(2.0, k).unwrap());
    }

    #[test]
    fn grid_search_agrees_with_closed_form_on_w4() {
        let (s, q) = w4::<f64>();
        let phi = w4_section(&s, &q, "a", "d");
        let view = SectionView::new(&s, &q, &phi);
        // bisection on the verdict
        let (mut lo, mut hi) = (0.0f64, 100.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if check_holder_view(&view, params(mid.max(1e-300), 0.5), 0.0).holds_strict {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((hi - 2.0).abs() < 1e-9);
    }
}
