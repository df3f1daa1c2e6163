//! Ball inclusions, pushforward measures and Ahlfors-David growth of section graphs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::holder::{check_holder, HolderParams};
use crate::metric::{FiniteMetricSpace, QuotientStructure, Section};
use crate::scalar::{band, pow, Scalar};

/// Nonnegative weights on the fibers, indexed like the quotient.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureOnY<T> {
    weights: Vec<T>,
}

impl<T: Scalar> MeasureOnY<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= T::zero())) {
            return Err(Error::InvalidMeasure(format!("weight {w} is not a finite nonnegative number")));
        }
        if !(weights.iter().copied().sum::<T>() > T::zero()) {
            return Err(Error::InvalidMeasure("total mass is zero".into()));
        }
        Ok(MeasureOnY { weights })
    }

    /// Weight 1 on every fiber.
    pub fn counting(quotient: &QuotientStructure) -> Self {
        MeasureOnY { weights: vec![T::one(); quotient.fiber_count()] }
    }

    /// Weights given by fiber id; every fiber must be listed.
    pub fn from_ids(quotient: &QuotientStructure, weights: &[(String, T)]) -> Result<Self> {
        let mut w = vec![None; quotient.fiber_count()];
        for (id, v) in weights {
            let y = quotient.fiber_index(id)?;
            w[y] = Some(*v);
        }
        let w = w
            .into_iter()
            .enumerate()
            .map(|(y, v)| v.ok_or_else(|| Error::InvalidMeasure(format!("no weight for fiber `{}`", quotient.fiber_id(y)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(w)
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn weight(&self, y: usize) -> T {
        self.weights[y]
    }

    pub fn total(&self) -> T {
        self.weights.iter().copied().sum()
    }

    pub fn scaled(&self, s: T) -> Result<Self> {
        Self::new(self.weights.iter().map(|w| *w * s).collect())
    }

    /// `mu` of a fiber set given as a membership mask.
    pub fn of_mask(&self, mask: &[bool]) -> T {
        self.weights.iter().zip(mask).filter(|(_, m)| **m).map(|(w, _)| *w).sum()
    }

    fn check_len(&self, quotient: &QuotientStructure) -> Result<()> {
        if self.weights.len() != quotient.fiber_count() {
            return Err(Error::InvalidMeasure(format!(
                "{} weights for {} fibers",
                self.weights.len(),
                quotient.fiber_count()
            )));
        }
        Ok(())
    }
}

fn check_radius<T: Scalar>(r: T) -> Result<()> {
    if r > T::zero() && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidRadius)
    }
}

fn graph_fiber<T: Scalar>(space: &FiniteMetricSpace<T>, section: &Section, x: usize) -> Result<usize> {
    if x >= space.len() {
        return Err(Error::UnknownPoint(format!("#{x}")));
    }
    section
        .fiber_of_graph_point(x)
        .ok_or_else(|| Error::CenterOffGraph(space.id(x).to_string()))
}

/// `phi_* mu(B(x, r) ∩ phi(Y))`: the weight of the fibers whose graph point lies in the closed ball.
pub fn pushforward_ball_mass<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    section: &Section,
    measure: &MeasureOnY<T>,
    x: usize,
    r: T,
) -> Result<T> {
    measure.check_len(quotient)?;
    graph_fiber(space, section, x)?;
    check_radius(r)?;
    Ok(graph_mass(space, section, measure, x, r))
}

fn graph_mass<T: Scalar>(space: &FiniteMetricSpace<T>, section: &Section, measure: &MeasureOnY<T>, x: usize, r: T) -> T {
    let row = space.row(x);
    section
        .choice()
        .iter()
        .enumerate()
        .filter(|(_, &g)| row[g] <= r)
        .map(|(y, _)| measure.weight(y))
        .sum()
}

/// Fibers met by the closed ball `B(x, r)`.
fn ball_image<T: Scalar>(space: &FiniteMetricSpace<T>, quotient: &QuotientStructure, x: usize, r: T) -> Vec<bool> {
    let row = space.row(x);
    quotient.image((0..space.len()).filter(|&p| row[p] <= r))
}

#[derive(Debug, Clone, Serialize)]
pub struct BallInclusion<T> {
    pub center: usize,
    pub radius: T,
    /// `(L + 1) r^alpha`
    pub outer_radius: T,
    /// `pi(B(p, r))`
    pub left: Vec<usize>,
    /// `pi(B(p, R) ∩ phi(Y))`
    pub middle: Vec<usize>,
    /// `pi(B(p, R))`
    pub right: Vec<usize>,
    pub first_holds: bool,
    pub second_holds: bool,
    pub holds: bool,
}

fn mask_to_list(mask: &[bool]) -> Vec<usize> {
    mask.iter().enumerate().filter(|(_, m)| **m).map(|(i, _)| i).collect()
}

fn subset(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(x, y)| !*x || *y)
}

/// Verify `pi(B(p, r)) ⊆ pi(B(p, R) ∩ phi(Y)) ⊆ pi(B(p, R))` with `R = (L + 1) r^alpha`.
///
/// The section must satisfy the claim with zero slack tolerance.
pub fn check_ball_inclusion<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    section: &Section,
    params: HolderParams<T>,
    p: usize,
    r: T,
) -> Result<BallInclusion<T>> {
    graph_fiber(space, section, p)?;
    check_radius(r)?;
    if !check_holder(space, quotient, section, params).holds_strict {
        return Err(Error::PremiseFailed("section does not satisfy the (L, alpha) claim".into()));
    }
    let outer_radius = (params.l + T::one()) * pow(r, params.alpha);
    let left = ball_image(space, quotient, p, r);
    let row = space.row(p);
    let middle = quotient.image(section.choice().iter().copied().filter(|&g| row[g] <= outer_radius));
    let right = ball_image(space, quotient, p, outer_radius);
    let first_holds = subset(&left, &middle);
    let second_holds = subset(&middle, &right);
    Ok(BallInclusion {
        center: p,
        radius: r,
        outer_radius,
        left: mask_to_list(&left),
        middle: mask_to_list(&middle),
        right: mask_to_list(&right),
        first_holds,
        second_holds,
        holds: first_holds && second_holds,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Compatibility<T> {
    /// Least `C` with `mu(pi(B(x, r))) <= C mu(pi(B(x', r)))` over co-fiber
    /// pairs and grid radii; infinite when some right side vanishes alone.
    pub constant: T,
    /// `(x, x', r)` attaining the constant.
    pub witness: Option<(usize, usize, T)>,
}

fn check_grid<T: Scalar>(r_grid: &[T]) -> Result<()> {
    if r_grid.is_empty() {
        return Err(Error::InvalidRadius);
    }
    r_grid.iter().try_for_each(|&r| check_radius(r))
}

pub fn measure_compatibility_constant<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    measure: &MeasureOnY<T>,
    r_grid: &[T],
) -> Result<Compatibility<T>> {
    measure.check_len(quotient)?;
    check_grid(r_grid)?;
    let mut constant = T::one();
    let mut witness = None;
    for &r in r_grid {
        let masses: Vec<T> = (0..space.len()).map(|x| measure.of_mask(&ball_image(space, quotient, x, r))).collect();
        for y in 0..quotient.fiber_count() {
            for &x in quotient.members(y) {
                for &xp in quotient.members(y) {
                    let (a, b) = (masses[x], masses[xp]);
                    let ratio = if a <= T::zero() {
                        continue;
                    } else if b <= T::zero() {
                        T::infinity()
                    } else {
                        a / b
                    };
                    if ratio > constant {
                        constant = ratio;
                        witness = Some((x, xp, r));
                    }
                }
            }
        }
    }
    Ok(Compatibility { constant, witness })
}

/// Pushforward masses of balls around a graph point, with a log-log fit.
#[derive(Debug, Clone, Serialize)]
pub struct BallGrowthProfile<T> {
    pub center: usize,
    pub radii: Vec<T>,
    pub masses: Vec<T>,
    pub fitted_q: T,
    pub fitted_c: T,
    /// Sum of squared residuals of the log-log regression.
    pub residual: T,
}

impl<T: Scalar> BallGrowthProfile<T> {
    /// `(r, mass)` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,mass\n");
        for (r, m) in self.radii.iter().zip(&self.masses) {
            out.push_str(&format!("{r},{m}\n"));
        }
        out
    }
}

/// Least-squares line `y = a + b x`; returns `(b, a, residual)`.
fn ols<T: Scalar>(xs: &[T], ys: &[T]) -> (T, T, T) {
    let n = T::from_usize(xs.len()).unwrap();
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let sxx: T = xs.iter().map(|x| (*x - mx) * (*x - mx)).sum();
    let sxy: T = xs.iter().zip(ys).map(|(x, y)| (*x - mx) * (*y - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let residual = xs.iter().zip(ys).map(|(x, y)| (*y - a - b * *x).powi(2)).sum();
    (b, a, residual)
}

/// Fit `mass(r) ~ C r^Q` on the radii where the mass is positive.
pub fn fit_ahlfors_exponent<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    section: &Section,
    measure: &MeasureOnY<T>,
    center: usize,
    r_grid: &[T],
) -> Result<BallGrowthProfile<T>> {
    measure.check_len(quotient)?;
    graph_fiber(space, section, center)?;
    check_grid(r_grid)?;
    if r_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidRadius);
    }
    let masses: Vec<T> = r_grid.iter().map(|&r| graph_mass(space, section, measure, center, r)).collect();
    let (xs, ys): (Vec<T>, Vec<T>) = r_grid
        .iter()
        .zip(&masses)
        .filter(|(_, m)| **m > T::zero())
        .map(|(r, m)| (r.ln(), m.ln()))
        .unzip();
    if xs.len() < 3 {
        return Err(Error::DegenerateMasses);
    }
    let (fitted_q, intercept, residual) = ols(&xs, &ys);
    Ok(BallGrowthProfile {
        center,
        radii: r_grid.to_vec(),
        masses,
        fitted_q,
        fitted_c: intercept.exp(),
        residual,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TransferRow<T> {
    pub fiber: usize,
    pub radius: T,
    pub mass: T,
    /// `c1 C ((L + 1) r^alpha)^(l + 1 - alpha)`
    pub bound: T,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransferReport<T> {
    /// `l + 1 - alpha`
    pub source_exponent: T,
    /// `alpha (l + 1 - alpha)`
    pub target_exponent: T,
    pub compatibility: Compatibility<T>,
    /// Per fiber: least `c1` with `mass_phi(R) <= c1 R^(l + 1 - alpha)` on the grid
    /// radii and the inflated radii `(L + 1) r^alpha`.
    pub c1: Vec<T>,
    pub rows: Vec<TransferRow<T>>,
    /// Largest `mass / bound` over the rows.
    pub worst_ratio: T,
    /// Log-log fit of `psi` around its graph point over the first fiber.
    pub target_fit: Option<BallGrowthProfile<T>>,
    pub holds: bool,
}

/// Check the upper Ahlfors bound transferred from `phi` to `psi` on `r_grid ∩ (0, 1]`.
#[allow(clippy::too_many_arguments)]
pub fn transfer_regularity_check<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    phi: &Section,
    psi: &Section,
    params: HolderParams<T>,
    measure: &MeasureOnY<T>,
    ell: T,
    r_grid: &[T],
) -> Result<TransferReport<T>> {
    measure.check_len(quotient)?;
    check_grid(r_grid)?;
    if !(ell > T::zero() && ell.is_finite()) {
        return Err(Error::InvalidConstant(ell.as_f64()));
    }
    for (name, s) in [("phi", phi), ("psi", psi)] {
        if !check_holder(space, quotient, s, params).holds {
            return Err(Error::PremiseFailed(format!("{name} does not satisfy the (L, alpha) claim")));
        }
    }
    let compatibility = measure_compatibility_constant(space, quotient, measure, r_grid)?;
    if !compatibility.constant.is_finite() {
        return Err(Error::PremiseFailed("measure compatibility constant is infinite on the grid".into()));
    }
    let used: Vec<T> = r_grid.iter().copied().filter(|&r| r <= T::one()).collect();
    if used.is_empty() {
        return Err(Error::PremiseFailed("no grid radius in (0, 1]".into()));
    }
    let alpha = params.alpha;
    let e = ell + T::one() - alpha;
    let inflate = |r: T| (params.l + T::one()) * pow(r, alpha);
    let probe: Vec<T> = r_grid.iter().copied().chain(used.iter().map(|&r| inflate(r))).collect();
    let tol = T::of(T::DEFAULT_TOLERANCE);
    let mut c1 = Vec::with_capacity(quotient.fiber_count());
    let mut rows = Vec::new();
    let mut worst_ratio = T::zero();
    let mut holds = true;
    for y in 0..quotient.fiber_count() {
        let c = probe
            .iter()
            .map(|&big| graph_mass(space, phi, measure, phi.at(y), big) / pow(big, e))
            .fold(T::zero(), T::max);
        c1.push(c);
        for &r in &used {
            let mass = graph_mass(space, psi, measure, psi.at(y), r);
            let bound = c * compatibility.constant * pow(inflate(r), e);
            let ok = mass <= bound + band(tol, bound);
            holds &= ok;
            if bound > T::zero() {
                worst_ratio = worst_ratio.max(mass / bound);
            } else if mass > T::zero() {
                worst_ratio = T::infinity();
            }
            rows.push(TransferRow { fiber: y, radius: r, mass, bound, holds: ok });
        }
    }
    let target_fit = fit_ahlfors_exponent(space, quotient, psi, measure, psi.at(0), r_grid).ok();
    Ok(TransferReport {
        source_exponent: e,
        target_exponent: alpha * e,
        compatibility,
        c1,
        rows,
        worst_ratio,
        target_fit,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{antipodal_cycle, w4, w4_section, GridMetric, PlaneGrid};

    fn p(l: f64, a: f64) -> HolderParams<f64> {
        HolderParams::new(l, a).unwrap()
    }

    #[test]
    fn measure_validation() {
        assert!(matches!(MeasureOnY::new(vec![1.0, -1.0]), Err(Error::InvalidMeasure(_))));
        assert!(matches!(MeasureOnY::new(vec![0.0, 0.0]), Err(Error::InvalidMeasure(_))));
        let (_, q) = w4::<f64>();
        let m = MeasureOnY::from_ids(&q, &[("F2".into(), 2.0), ("F1".into(), 1.0)]).unwrap();
        assert_eq!(m.weights(), &[1.0, 2.0]);
        assert!(MeasureOnY::<f64>::from_ids(&q, &[("F2".into(), 2.0)]).is_err());
    }

    #[test]
    fn w4_masses() {
        let (s, q) = w4::<f64>();
        let phi = w4_section(&s, &q, "a", "d");
        let mu = MeasureOnY::counting(&q);
        assert_eq!(pushforward_ball_mass(&s, &q, &phi, &mu, 0, 3.0).unwrap(), 2.0);
        assert_eq!(pushforward_ball_mass(&s, &q, &phi, &mu, 0, 0.5).unwrap(), 1.0);
        assert_eq!(pushforward_ball_mass(&s, &q, &phi, &mu, 1, 3.0).unwrap_err(), Error::CenterOffGraph("b".into()));
        assert_eq!(pushforward_ball_mass(&s, &q, &phi, &mu, 0, 0.0).unwrap_err(), Error::InvalidRadius);
    }

    #[test]
    fn w4_inclusion() {
        let (s, q) = w4::<f64>();
        let phi = w4_section(&s, &q, "a", "d");
        let r = check_ball_inclusion(&s, &q, &phi, p(2.0, 0.5), 0, 1.0).unwrap();
        assert_eq!(r.left, vec![0, 1]);
        assert_eq!(r.outer_radius, 3.0);
        assert_eq!(r.middle, vec![0, 1]);
        assert!(r.holds);
        assert!(matches!(
            check_ball_inclusion(&s, &q, &phi, p(1.0, 0.5), 0, 1.0),
            Err(Error::PremiseFailed(_))
        ));
    }

    #[test]
    fn inclusion_can_fail_beyond_unit_radius() {
        // singleton fibers on a line: 0, 3
        let s = crate::metric::validate_metric(vec!["u".into(), "v".into()], vec![vec![0.0, 3.0], vec![3.0, 0.0]])
            .unwrap();
        let q = QuotientStructure::singletons(s.ids());
        let phi = Section::new(&q, vec![0, 1]).unwrap();
        let r = check_ball_inclusion(&s, &q, &phi, p(0.5, 0.5), 0, 3.0).unwrap();
        assert!(!r.first_holds);
        assert_eq!(r.left, vec![0, 1]);
        assert_eq!(r.middle, vec![0]);
    }

    #[test]
    fn compatibility_constants() {
        let (s, q) = antipodal_cycle::<f64>(5);
        let mu = MeasureOnY::counting(&q);
        let c = measure_compatibility_constant(&s, &q, &mu, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(c.constant, 1.0);
        let single = QuotientStructure::singletons(s.ids());
        let c = measure_compatibility_constant(&s, &single, &MeasureOnY::counting(&single), &[1.0]).unwrap();
        assert_eq!(c.constant, 1.0);
        // W4 at r = 1: every ball meets both fibers
        let (s, q) = w4::<f64>();
        let c = measure_compatibility_constant(&s, &q, &MeasureOnY::counting(&q), &[1.0]).unwrap();
        assert_eq!(c.constant, 1.0);
        // W4 at r = 0.5: every ball meets only its own fiber
        let mu = MeasureOnY::new(vec![1.0, 3.0]).unwrap();
        let c = measure_compatibility_constant(&s, &q, &mu, &[0.5]).unwrap();
        assert_eq!(c.constant, 1.0);
    }

    #[test]
    fn fit_flat_and_scaled() {
        let g = PlaneGrid::<f64>::new(9, 3, 1.0, GridMetric::Path);
        let phi = g.zero_section();
        let mu = MeasureOnY::counting(&g.quotient);
        let center = phi.at(4);
        let prof = fit_ahlfors_exponent(&g.space, &g.quotient, &phi, &mu, center, &[10.0, 11.0, 12.0]).unwrap();
        assert!(prof.fitted_q.abs() < 1e-12);
        let grown = fit_ahlfors_exponent(&g.space, &g.quotient, &phi, &mu, center, &[1.0, 2.0, 3.0]).unwrap();
        let doubled =
            fit_ahlfors_exponent(&g.space, &g.quotient, &phi, &mu.scaled(2.0).unwrap(), center, &[1.0, 2.0, 3.0])
                .unwrap();
        assert!((doubled.fitted_c / grown.fitted_c - 2.0).abs() < 1e-12);
        assert!((doubled.fitted_q - grown.fitted_q).abs() < 1e-12);
        assert_eq!(
            fit_ahlfors_exponent(&g.space, &g.quotient, &phi, &mu, center, &[1.0, 2.0]).unwrap_err(),
            Error::DegenerateMasses
        );
        assert!(prof.to_csv().starts_with("r,mass\n10,9\n"));
    }

    #[test]
    fn transfer_on_plane_grid() {
        let g = PlaneGrid::<f64>::new(9, 9, 0.25, GridMetric::Path);
        let phi = g.zero_section();
        let psi = g.graph_section(&[0, 1, 1, 2, 2, 2, 1, 1, 0]);
        let mu = MeasureOnY::counting(&g.quotient);
        let grid = [0.25, 0.5, 0.75, 1.0];
        let params = p(3.0, 0.5);
        let r = transfer_regularity_check(&g.space, &g.quotient, &phi, &psi, params, &mu, 0.5, &grid).unwrap();
        assert!(r.holds, "{:?}", r.worst_ratio);
        let scaled = mu.scaled(3.5).unwrap();
        let r2 = transfer_regularity_check(&g.space, &g.quotient, &phi, &psi, params, &scaled, 0.5, &grid).unwrap();
        assert_eq!(r.holds, r2.holds);
        let same = transfer_regularity_check(&g.space, &g.quotient, &phi, &phi, p(3.0, 0.99), &mu, 1.0, &grid).unwrap();
        assert!(same.holds);
    }
}
