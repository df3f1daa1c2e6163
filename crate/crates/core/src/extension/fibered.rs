use serde::Serialize;

use crate::error::{Error, Result};
use crate::holder::{check_holder_view, HolderCertificate, HolderParams, SectionView};
use crate::metric::{FiniteMetricSpace, QuotientStructure, Section};
use crate::scalar::{all_integral, band, pow, Scalar};

/// Values of a function on the points of `X`.
#[derive(Debug, Clone)]
pub enum FiberedValues<T> {
    Real(Vec<T>),
    /// Point indices into a target space `Z`.
    Points { target: FiniteMetricSpace<T>, image: Vec<usize> },
}

/// Level `z0` of a [`FiberedFunction`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Level<T> {
    Real(T),
    Point(usize),
}

/// A tabulated function on `X` with its `(lambda, beta)`-Hölder claim and
/// its fiber-biLipschitz claim.
#[derive(Debug, Clone)]
pub struct FiberedFunction<T> {
    pub values: FiberedValues<T>,
    pub holder: HolderParams<T>,
    pub fiber_bilip: T,
}

impl<T: Scalar> FiberedFunction<T> {
    pub fn real(values: Vec<T>, holder: HolderParams<T>, fiber_bilip: T) -> Self {
        FiberedFunction { values: FiberedValues::Real(values), holder, fiber_bilip }
    }

    pub fn len(&self) -> usize {
        match &self.values {
            FiberedValues::Real(v) => v.len(),
            FiberedValues::Points { image, .. } => image.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `d_Z(f(x), f(x'))`
    pub fn value_dist(&self, x: usize, xp: usize) -> T {
        match &self.values {
            FiberedValues::Real(v) => (v[x] - v[xp]).abs(),
            FiberedValues::Points { target, image } => target.dist(image[x], image[xp]),
        }
    }

    /// Whether values are compared exactly.
    fn exact(&self) -> bool {
        match &self.values {
            FiberedValues::Real(v) => all_integral(v),
            FiberedValues::Points { .. } => true,
        }
    }

    fn on_level(&self, x: usize, z0: Level<T>) -> bool {
        match (&self.values, z0) {
            (FiberedValues::Real(v), Level::Real(z)) => {
                if self.exact() && z.fract() == T::zero() {
                    v[x] == z
                } else {
                    (v[x] - z).abs() <= T::of(1e-9)
                }
            }
            (FiberedValues::Points { image, .. }, Level::Point(p)) => image[x] == p,
            _ => false,
        }
    }

    fn check_shape(&self, space: &FiniteMetricSpace<T>) -> Result<()> {
        if self.len() != space.len() {
            return Err(Error::Input(format!(
                "function has {} values for {} points",
                self.len(),
                space.len()
            )));
        }
        if let FiberedValues::Points { target, image } = &self.values {
            if image.iter().any(|&z| z >= target.len()) {
                return Err(Error::Input("function image outside the target space".into()));
            }
        }
        Ok(())
    }
}

fn level_f64<T: Scalar>(z0: Level<T>) -> f64 {
    match z0 {
        Level::Real(z) => z.as_f64(),
        Level::Point(p) => p as f64,
    }
}

/// Measured constants of a [`FiberedFunction`] against its claims.
#[derive(Debug, Clone, Serialize)]
pub struct FiberedReport<T> {
    /// Least `lambda` with `d_Z <= lambda d_X^beta` at the claimed `beta`.
    pub holder_constant: T,
    pub holder_pair: Option<(usize, usize)>,
    /// Least `lambda >= 1` with `d / lambda <= d_Z <= lambda d` on co-fiber pairs.
    pub fiber_bilip: T,
    pub fiber_pair: Option<(usize, usize)>,
    pub holder_holds: bool,
    pub bilip_holds: bool,
    pub holds: bool,
}

/// Least `c` with `|f(x) - f(x')| <= c d(x, x')^alpha` over unordered pairs.
pub fn holder_constant_of<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    alpha: T,
    value_dist: impl Fn(usize, usize) -> T,
) -> (T, Option<(usize, usize)>) {
    let mut best = T::zero();
    let mut at = None;
    for x in 0..space.len() {
        for xp in (x + 1)..space.len() {
            let r = value_dist(x, xp) / pow(space.dist(x, xp), alpha);
            if r > best {
                best = r;
                at = Some((x, xp));
            }
        }
    }
    (best, at)
}

/// Least `c >= 1` with `d / c <= |f(x) - f(x')| <= c d` on co-fiber pairs;
/// infinite when `f` collapses two points of a fiber.
pub fn fiber_bilip_of<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    value_dist: impl Fn(usize, usize) -> T,
) -> (T, Option<(usize, usize)>) {
    let mut best = T::one();
    let mut at = None;
    for y in 0..quotient.fiber_count() {
        let m = quotient.members(y);
        for (i, &x) in m.iter().enumerate() {
            for &xp in &m[i + 1..] {
                let d = space.dist(x, xp);
                let dz = value_dist(x, xp);
                let r = if dz > T::zero() { (dz / d).max(d / dz) } else { T::infinity() };
                if r > best {
                    best = r;
                    at = Some((x, xp));
                }
            }
        }
    }
    (best, at)
}

pub fn verify_fibered_claims<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    f: &FiberedFunction<T>,
) -> Result<FiberedReport<T>> {
    f.check_shape(space)?;
    let (holder_constant, holder_pair) = holder_constant_of(space, f.holder.alpha, |a, b| f.value_dist(a, b));
    let (fiber_bilip, fiber_pair) = fiber_bilip_of(space, quotient, |a, b| f.value_dist(a, b));
    let tol = if f.exact() && space.is_integral() { T::zero() } else { T::of(T::DEFAULT_TOLERANCE) };
    let holder_holds = holder_constant <= f.holder.l + band(tol, f.holder.l);
    let bilip_holds = fiber_bilip <= f.fiber_bilip + band(tol, f.fiber_bilip);
    Ok(FiberedReport {
        holder_constant,
        holder_pair,
        fiber_bilip,
        fiber_pair,
        holder_holds,
        bilip_holds,
        holds: holder_holds && bilip_holds,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelSetSection<T> {
    pub section: Section,
    pub claims: FiberedReport<T>,
    /// Check at `(lambda^2, beta)`.
    pub certificate: HolderCertificate<T>,
}

/// The section whose graph is `f^{-1}(z0)`, with its intrinsic certificate.
pub fn section_from_level_set<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    quotient: &QuotientStructure,
    f: &FiberedFunction<T>,
    z0: Level<T>,
) -> Result<LevelSetSection<T>> {
    let claims = verify_fibered_claims(space, quotient, f)?;
    if !claims.holds {
        return Err(Error::HypothesisViolated(format!(
            "function fails its claims: Hölder constant {} (claimed {}), fiber biLipschitz {} (claimed {})",
            claims.holder_constant, f.holder.l, claims.fiber_bilip, f.fiber_bilip
        )));
    }
    let mut choice = Vec::with_capacity(quotient.fiber_count());
    for y in 0..quotient.fiber_count() {
        let mut hits = quotient.members(y).iter().copied().filter(|&x| f.on_level(x, z0));
        let first = hits
            .next()
            .ok_or_else(|| Error::LevelMissesFiber(level_f64(z0), quotient.fiber_id(y).to_string()))?;
        if hits.next().is_some() {
            return Err(Error::LevelAmbiguous(level_f64(z0), quotient.fiber_id(y).to_string()));
        }
        choice.push(first);
    }
    let section = Section::new(quotient, choice)?;
    let lambda = f.holder.l;
    let params = HolderParams::new(lambda * lambda, f.holder.alpha)?;
    let view = SectionView::new(space, quotient, &section);
    // the bound is evaluated in floating point unless every term is an integer
    let exact = params.alpha == T::one() && params.l.fract() == T::zero();
    let tol = if exact { view.default_tolerance() } else { T::of(T::DEFAULT_TOLERANCE) };
    let certificate = check_holder_view(&view, params, tol);
    Ok(LevelSetSection { section, claims, certificate })
}
