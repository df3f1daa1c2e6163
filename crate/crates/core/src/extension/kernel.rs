use serde::Serialize;

use crate::error::{Error, Result};
use crate::extension::fibered::{fiber_bilip_of, holder_constant_of};
use crate::holder::{check_alpha, check_holder, intrinsic_slack, HolderParams};
use crate::metric::{fiber_distance, FiniteMetricSpace, QuotientStructure, Section};
use crate::scalar::{all_integral, band, pow, Scalar};

/// Constants measured on the data of an [`ExtensionMachinery`].
#[derive(Debug, Clone, Serialize)]
pub struct MachineryConstants<T> {
    /// Least `c` with `|tau(x) - tau(x')| <= c d^alpha`.
    pub tau_holder: T,
    pub tau_fiber_bilip: T,
    /// Least `c >= 1` with `d / c <= rho <= c d`.
    pub rho_bilip: T,
    /// Largest minimal intrinsic constant over the level sections.
    pub level_constant: T,
}

impl<T: Scalar> MachineryConstants<T> {
    pub fn max(&self) -> T {
        T::one().max(self.tau_holder).max(self.tau_fiber_bilip).max(self.rho_bilip).max(self.level_constant)
    }
}

/// Data of the extension construction: a real function `tau` whose level
/// sets are section graphs, a distance-like table `rho`, the common
/// constant `k`, and the subject constant `L`.
#[derive(Debug, Clone)]
pub struct ExtensionMachinery<T> {
    ids: Vec<String>,
    tau: Vec<T>,
    rho: Vec<T>,
    n: usize,
    k: T,
    alpha: T,
    l: T,
    gamma: T,
    exact: bool,
    levels: Vec<T>,
    level_of: Vec<usize>,
    level_sections: Vec<Section>,
    quotient: QuotientStructure,
    constants: MachineryConstants<T>,
}

fn hypothesis(msg: String) -> Error {
    Error::HypothesisViolated(msg)
}

/// Group points by `tau` value; exact on integer tables, within `1e-9` otherwise.
fn group_levels<T: Scalar>(tau: &[T], exact: bool) -> (Vec<T>, Vec<usize>) {
    let mut order: Vec<usize> = (0..tau.len()).collect();
    order.sort_by(|&a, &b| tau[a].partial_cmp(&tau[b]).expect("finite tau"));
    let tol = T::of(1e-9);
    let mut levels: Vec<T> = Vec::new();
    let mut level_of = vec![0; tau.len()];
    for x in order {
        let same = levels.last().is_some_and(|&v| if exact { tau[x] == v } else { tau[x] - v <= tol });
        if !same {
            levels.push(tau[x]);
        }
        level_of[x] = levels.len() - 1;
    }
    (levels, level_of)
}

impl<T: Scalar> ExtensionMachinery<T> {
    /// Validate the hypotheses of the construction and tabulate its levels.
    pub fn new(
        space: &FiniteMetricSpace<T>,
        quotient: &QuotientStructure,
        tau: Vec<T>,
        rho: Vec<Vec<T>>,
        k: T,
        alpha: T,
        l: T,
    ) -> Result<Self> {
        check_alpha(alpha)?;
        for c in [k, l] {
            if !(c.is_finite() && c >= T::one()) {
                return Err(Error::InvalidConstant(c.as_f64()));
            }
        }
        let n = space.len();
        if tau.len() != n || tau.iter().any(|t| !t.is_finite()) {
            return Err(Error::Input(format!("tau needs {n} finite values")));
        }
        if rho.len() != n || rho.iter().any(|r| r.len() != n) {
            return Err(Error::Input(format!("rho must be a {n} x {n} table")));
        }
        let rho: Vec<T> = rho.into_iter().flatten().collect();
        for x in 0..n {
            if rho[x * n + x] != T::zero() {
                return Err(hypothesis(format!("rho({0}, {0}) is not 0", space.id(x))));
            }
            for xp in 0..x {
                if rho[x * n + xp] != rho[xp * n + x] {
                    return Err(hypothesis(format!("rho is not symmetric at ({}, {})", space.id(x), space.id(xp))));
                }
            }
        }
        let exact = all_integral(&tau);
        let (levels, level_of) = group_levels(&tau, exact);
        let mut level_sections = Vec::with_capacity(levels.len());
        for (v, level) in levels.iter().enumerate() {
            let mut choice = vec![usize::MAX; quotient.fiber_count()];
            for x in (0..n).filter(|&x| level_of[x] == v) {
                let y = quotient.fiber_of(x);
                if choice[y] != usize::MAX {
                    return Err(Error::LevelAmbiguous(level.as_f64(), quotient.fiber_id(y).to_string()));
                }
                choice[y] = x;
            }
            if let Some(y) = choice.iter().position(|&c| c == usize::MAX) {
                return Err(Error::LevelMissesFiber(level.as_f64(), quotient.fiber_id(y).to_string()));
            }
            level_sections.push(Section::new(quotient, choice)?);
        }
        let constants = Self::measure(space, quotient, &tau, &rho, alpha, &level_sections);
        let tol = T::of(T::DEFAULT_TOLERANCE);
        let within = |c: T| c <= k + band(tol, k);
        if !within(constants.tau_holder) {
            return Err(hypothesis(format!("tau is not (k, alpha)-Hölder: needs {}", constants.tau_holder)));
        }
        if !within(constants.tau_fiber_bilip) {
            return Err(hypothesis(format!("tau is not k-biLipschitz on fibers: needs {}", constants.tau_fiber_bilip)));
        }
        if !within(constants.rho_bilip) {
            return Err(hypothesis(format!("rho is not k-biLipschitz to the distance: needs {}", constants.rho_bilip)));
        }
        if !within(constants.level_constant) {
            return Err(hypothesis(format!(
                "a level section is not intrinsically (k, alpha)-Hölder: needs {}",
                constants.level_constant
            )));
        }
        let two = T::of(2.0);
        Ok(ExtensionMachinery {
            ids: space.ids().to_vec(),
            tau,
            rho,
            n,
            k,
            alpha,
            l,
            gamma: two * k * l + T::one(),
            exact,
            levels,
            level_of,
            level_sections,
            quotient: quotient.clone(),
            constants,
        })
    }

    fn measure(
        space: &FiniteMetricSpace<T>,
        quotient: &QuotientStructure,
        tau: &[T],
        rho: &[T],
        alpha: T,
        level_sections: &[Section],
    ) -> MachineryConstants<T> {
        let n = space.len();
        let tau_dist = |a: usize, b: usize| (tau[a] - tau[b]).abs();
        let (tau_holder, _) = holder_constant_of(space, alpha, tau_dist);
        let (tau_fiber_bilip, _) = fiber_bilip_of(space, quotient, tau_dist);
        let mut rho_bilip = T::one();
        for x in 0..n {
            for xp in (x + 1)..n {
                let d = space.dist(x, xp);
                let r = rho[x * n + xp];
                let c = if r > T::zero() { (r / d).max(d / r) } else { T::infinity() };
                rho_bilip = rho_bilip.max(c);
            }
        }
        let level_constant = level_sections
            .iter()
            .map(|s| {
                let params = HolderParams { l: T::one(), alpha };
                check_holder(space, quotient, s, params).minimal_l
            })
            .fold(T::zero(), T::max);
        MachineryConstants { tau_holder, tau_fiber_bilip, rho_bilip, level_constant }
    }

    /// Least `k` satisfying every hypothesis on this data, including the
    /// Lipschitz condition on `delta` for every anchor.
    pub fn measured_k(
        space: &FiniteMetricSpace<T>,
        quotient: &QuotientStructure,
        tau: Vec<T>,
        rho: Vec<Vec<T>>,
        alpha: T,
    ) -> Result<T> {
        let loose = Self::new(space, quotient, tau, rho, T::max_value().sqrt(), alpha, T::one())?;
        let delta = (0..space.len()).map(|x0| loose.delta_lipschitz(space, x0)).fold(T::zero(), T::max);
        Ok(loose.constants.max().max(delta))
    }

    pub fn k(&self) -> T {
        self.k
    }

    pub fn l(&self) -> T {
        self.l
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// `gamma = 2 k L + 1`
    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn tau(&self) -> &[T] {
        &self.tau
    }

    pub fn levels(&self) -> &[T] {
        &self.levels
    }

    pub fn level_section(&self, level: usize) -> &Section {
        &self.level_sections[level]
    }

    pub fn constants(&self) -> &MachineryConstants<T> {
        &self.constants
    }

    #[inline]
    pub fn rho(&self, x: usize, xp: usize) -> T {
        self.rho[x * self.n + xp]
    }

    /// Level index of `tau0`, if attained.
    pub fn level_index(&self, tau0: T) -> Option<usize> {
        let tol = T::of(1e-9);
        self.levels.iter().position(|&v| if self.exact { v == tau0 } else { (v - tau0).abs() <= tol })
    }

    /// `delta(x) = rho(x0, phi_{tau(x0)}(pi(x)))`; depends on `x` only through its fiber.
    #[inline]
    pub fn delta(&self, x0: usize, x: usize) -> T {
        let s = &self.level_sections[self.level_of[x0]];
        self.rho(x0, s.at(self.quotient.fiber_of(x)))
    }

    /// Least Lipschitz constant of `delta` for anchor `x0` on `{|tau| <= delta}`.
    pub fn delta_lipschitz(&self, space: &FiniteMetricSpace<T>, x0: usize) -> T {
        let set: Vec<usize> = (0..self.n).filter(|&x| self.tau[x].abs() <= self.delta(x0, x)).collect();
        let mut best = T::zero();
        for (i, &x) in set.iter().enumerate() {
            let dx = self.delta(x0, x);
            for &xp in &set[i + 1..] {
                best = best.max((dx - self.delta(x0, xp)).abs() / space.dist(x, xp));
            }
        }
        best
    }

    fn kernel_at(&self, x0: usize, x: usize) -> T {
        let delta = self.delta(x0, x);
        extension_kernel_value(self.tau[x] - self.tau[x0], pow(delta, self.alpha) + delta, self.gamma)
    }
}

/// Three-case kernel in `t = tau(x) - tau(x0)` and `s = delta^alpha + delta`:
/// `2 (t - gamma s)` when `|t| <= 2 gamma s`, `t` above, `3 t` below.
pub fn extension_kernel_value<T: Scalar>(t: T, s: T, gamma: T) -> T {
    let edge = T::of(2.0) * gamma * s;
    if t.abs() <= edge {
        T::of(2.0) * (t - gamma * s)
    } else if t > edge {
        t
    } else {
        T::of(3.0) * t
    }
}

/// `f_{x0}(x)` for an anchor on level `tau0`.
pub fn build_extension_kernel<T: Scalar>(machinery: &ExtensionMachinery<T>, x0: usize, tau0: T, x: usize) -> Result<T> {
    if x0 >= machinery.n || x >= machinery.n {
        return Err(Error::UnknownPoint(format!("#{}", x0.max(x))));
    }
    if machinery.level_index(tau0) != Some(machinery.level_of[x0]) {
        return Err(Error::AnchorOffLevel(machinery.ids[x0].clone()));
    }
    Ok(machinery.kernel_at(x0, x))
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionReport<T> {
    /// Graph points of the partial section.
    pub anchors: Vec<usize>,
    /// `f(x) = max over anchors of f_{x0}(x)`
    pub values: Vec<T>,
    pub zero_set: Vec<usize>,
    /// `f` vanishes on every anchor.
    pub containment: bool,
    /// Largest `f_{x0}(x1)` over distinct anchors; the construction needs it `<= 0`.
    pub anchor_excess: T,
    pub gamma: T,
    pub k: T,
    pub l: T,
    pub holder_constant: T,
    pub holder_pair: Option<(usize, usize)>,
    /// Largest Hölder constant of a single kernel `f_{x0}`.
    pub kernel_holder_max: T,
    pub fiber_bilip: T,
    /// `2k + 4 gamma k`
    pub asserted_holder: T,
    pub delta_lipschitz: T,
}

/// Extend a section given on the fibers `partial[i].0` (graph points
/// `partial[i].1`) to a function on `X` vanishing on its graph.
pub fn extend_partial_section<T: Scalar>(
    machinery: &ExtensionMachinery<T>,
    space: &FiniteMetricSpace<T>,
    partial: &[(usize, usize)],
) -> Result<ExtensionReport<T>> {
    let q = &machinery.quotient;
    if partial.is_empty() {
        return Err(Error::PremiseFailed("the partial section is empty".into()));
    }
    let mut seen = vec![false; q.fiber_count()];
    for &(y, x) in partial {
        if y >= q.fiber_count() || x >= machinery.n || q.fiber_of(x) != y || seen[y] {
            return Err(Error::NotASection(format!("fiber #{y}, point #{x}")));
        }
        seen[y] = true;
    }
    let params = HolderParams { l: machinery.l, alpha: machinery.alpha };
    let tol = if space.is_integral() { T::zero() } else { T::of(T::DEFAULT_TOLERANCE) };
    for &(y1, x1) in partial {
        for &(y2, x2) in partial {
            if y1 != y2 {
                let d = space.dist(x1, x2);
                let slack = intrinsic_slack(d, fiber_distance(space, q, x1, y2), params);
                if slack < -band(tol, d) {
                    return Err(Error::PremiseFailed(format!(
                        "partial section fails (L, alpha) at ({}, {})",
                        q.fiber_id(y1),
                        q.fiber_id(y2)
                    )));
                }
            }
        }
    }
    let anchors: Vec<usize> = partial.iter().map(|p| p.1).collect();
    let mut delta_lipschitz = T::zero();
    for &x0 in &anchors {
        let c = machinery.delta_lipschitz(space, x0);
        if c > machinery.k + band(T::of(T::DEFAULT_TOLERANCE), machinery.k) {
            return Err(hypothesis(format!("delta for anchor {} is not k-Lipschitz: needs {c}", space.id(x0))));
        }
        delta_lipschitz = delta_lipschitz.max(c);
    }
    let n = machinery.n;
    let mut values = vec![T::neg_infinity(); n];
    let mut kernel_holder_max = T::zero();
    for &x0 in &anchors {
        let kernel: Vec<T> = (0..n).map(|x| machinery.kernel_at(x0, x)).collect();
        let (c, _) = holder_constant_of(space, machinery.alpha, |a, b| (kernel[a] - kernel[b]).abs());
        kernel_holder_max = kernel_holder_max.max(c);
        for (v, kv) in values.iter_mut().zip(&kernel) {
            *v = v.max(*kv);
        }
    }
    let anchor_excess = anchors
        .iter()
        .flat_map(|&x0| anchors.iter().filter(move |&&x1| x1 != x0).map(move |&x1| machinery.kernel_at(x0, x1)))
        .fold(T::neg_infinity(), T::max);
    let containment = anchors.iter().all(|&x| values[x] == T::zero());
    let zero_set = (0..n).filter(|&x| values[x] == T::zero()).collect();
    let (holder_constant, holder_pair) = holder_constant_of(space, machinery.alpha, |a, b| (values[a] - values[b]).abs());
    let (fiber_bilip, _) = fiber_bilip_of(space, q, |a, b| (values[a] - values[b]).abs());
    let k = machinery.k;
    Ok(ExtensionReport {
        anchors,
        values,
        zero_set,
        containment,
        anchor_excess,
        gamma: machinery.gamma,
        k,
        l: machinery.l,
        holder_constant,
        holder_pair,
        kernel_holder_max,
        fiber_bilip,
        asserted_holder: T::of(2.0) * k + T::of(4.0) * machinery.gamma * k,
        delta_lipschitz,
    })
}
