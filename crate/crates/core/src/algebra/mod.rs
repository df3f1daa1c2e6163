//! Sections of linear quotient maps between finite-dimensional normed spaces,
//! sampled on a finite set of base points.

mod linalg;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::holder::{
    check_alpha, check_global_view, wrt_from_distances, HolderParams, SectionView, WrtCertificate, WrtMode,
};
use crate::scalar::{band, Scalar};

pub use linalg::{solve_dense, Cholesky, Matrix};

const IRLS_MAX_ITER: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum NormKind<T> {
    Euclidean,
    /// `p`-norm with `p >= 1`.
    P(T),
}

/// `pi = A x` from `R^n` (with the chosen norm) onto `R^m`, observed on a
/// finite sample of base points.
#[derive(Debug, Clone)]
pub struct NormedQuotient<T> {
    map: Matrix<T>,
    norm: NormKind<T>,
    sample: Vec<Vec<T>>,
    gram: Cholesky<T>,
    kernel: Vec<Vec<T>>,
}

impl<T: Scalar> NormedQuotient<T> {
    pub fn new(rows: &[Vec<T>], norm: NormKind<T>, sample: Vec<Vec<T>>) -> Result<Self> {
        let map = Matrix::from_rows(rows)?;
        if let NormKind::P(p) = norm {
            if !(p >= T::one()) {
                return Err(Error::InvalidPNorm(p.as_f64()));
            }
        }
        if map.rows() > map.cols() {
            return Err(Error::RankDeficientMap);
        }
        let gram = Cholesky::new(&map.gram())?;
        if sample.iter().any(|y| y.len() != map.rows() || y.iter().any(|v| !v.is_finite())) {
            return Err(Error::DimensionMismatch);
        }
        for (i, y) in sample.iter().enumerate() {
            if sample[..i].contains(y) {
                return Err(Error::Input(format!("duplicate base sample point #{i}")));
            }
        }
        let mut nq = NormedQuotient { map, norm, sample, gram, kernel: Vec::new() };
        let dim = nq.map.cols() - nq.map.rows();
        nq.kernel = linalg::kernel_basis(nq.map.cols(), |v| nq.row_projection(v), dim);
        Ok(nq)
    }

    pub fn ambient_dim(&self) -> usize {
        self.map.cols()
    }

    pub fn base_dim(&self) -> usize {
        self.map.rows()
    }

    pub fn norm_kind(&self) -> NormKind<T> {
        self.norm
    }

    pub fn map(&self) -> &Matrix<T> {
        &self.map
    }

    pub fn sample(&self) -> &[Vec<T>] {
        &self.sample
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        self.map.apply(x)
    }

    pub fn norm(&self, v: &[T]) -> T {
        match self.norm {
            NormKind::Euclidean => v.iter().map(|x| *x * *x).sum::<T>().sqrt(),
            NormKind::P(p) => p_norm(v, p),
        }
    }

    pub fn dist(&self, x1: &[T], x2: &[T]) -> T {
        let d: Vec<T> = x1.iter().zip(x2).map(|(a, b)| *a - *b).collect();
        self.norm(&d)
    }

    /// `A^T (A A^T)^{-1} A v`
    fn row_projection(&self, v: &[T]) -> Vec<T> {
        self.map.apply_transpose(&self.gram.solve(&self.map.apply(v)))
    }

    /// Same sample, map `A / lambda`.
    pub fn rescaled(&self, lambda: T) -> Result<Self> {
        if lambda == T::zero() || !lambda.is_finite() {
            return Err(Error::ZeroScalar);
        }
        Self::new(&self.map.scaled(lambda.recip()).to_rows(), self.norm, self.sample.clone())
    }
}

fn p_norm<T: Scalar>(v: &[T], p: T) -> T {
    let m = v.iter().fold(T::zero(), |a, x| a.max(x.abs()));
    if m == T::zero() {
        return T::zero();
    }
    if p == T::one() {
        return v.iter().map(|x| x.abs()).sum();
    }
    m * v.iter().map(|x| (x.abs() / m).powf(p)).sum::<T>().powf(p.recip())
}

/// Distance from `x` to the affine fiber `A^{-1}(y)`.
pub fn linear_fiber_distance<T: Scalar>(nq: &NormedQuotient<T>, x: &[T], y: &[T]) -> Result<T> {
    if x.len() != nq.ambient_dim() || y.len() != nq.base_dim() {
        return Err(Error::DimensionMismatch);
    }
    let residual: Vec<T> = nq.apply(x).iter().zip(y).map(|(a, b)| *a - *b).collect();
    if residual.iter().all(|r| *r == T::zero()) {
        return Ok(T::zero());
    }
    // x - r0 is the point of the fiber nearest to x in the Euclidean sense
    let r0 = nq.map.apply_transpose(&nq.gram.solve(&residual));
    match nq.norm {
        NormKind::Euclidean => Ok(nq.norm(&r0)),
        NormKind::P(p) if p == T::of(2.0) || nq.kernel.is_empty() => Ok(p_norm(&r0, p)),
        NormKind::P(p) => irls(&r0, &nq.kernel, p),
    }
}

/// `min_w ||r0 - N w||_p` by damped iteratively reweighted least squares.
fn irls<T: Scalar>(r0: &[T], basis: &[Vec<T>], p: T) -> Result<T> {
    let k = basis.len();
    let scale = r0.iter().fold(T::zero(), |a, x| a.max(x.abs()));
    let eps = scale * T::of(1e-12);
    let residual = |w: &[T]| -> Vec<T> {
        (0..r0.len())
            .map(|i| r0[i] - (0..k).map(|j| basis[j][i] * w[j]).sum::<T>())
            .collect()
    };
    let mut w = vec![T::zero(); k];
    let mut res = residual(&w);
    let mut f = p_norm(&res, p);
    let stop = T::of(1e-14);
    for _ in 0..IRLS_MAX_ITER {
        let weights: Vec<T> = res.iter().map(|r| r.abs().max(eps).powf(p - T::of(2.0))).collect();
        let normal: Vec<Vec<T>> = (0..k)
            .map(|a| (0..k).map(|b| (0..r0.len()).map(|i| weights[i] * basis[a][i] * basis[b][i]).sum()).collect())
            .collect();
        let rhs: Vec<T> = (0..k).map(|a| (0..r0.len()).map(|i| weights[i] * basis[a][i] * r0[i]).sum()).collect();
        let target = solve_dense(normal, rhs).ok_or(Error::IterationDivergence)?;
        let mut theta = T::one();
        let mut accepted = None;
        for _ in 0..40 {
            let trial: Vec<T> = w.iter().zip(&target).map(|(a, b)| *a + theta * (*b - *a)).collect();
            let tr = residual(&trial);
            let ft = p_norm(&tr, p);
            if ft <= f {
                accepted = Some((trial, tr, ft));
                break;
            }
            theta = theta * T::of(0.5);
        }
        let Some((nw, nr, nf)) = accepted else {
            return Ok(f);
        };
        let improvement = f - nf;
        w = nw;
        res = nr;
        f = nf;
        if improvement <= stop * f.max(scale) {
            return Ok(f);
        }
    }
    Err(Error::IterationDivergence)
}

/// A section of a [`NormedQuotient`] on its base sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearSection<T> {
    table: Vec<Vec<T>>,
}

impl<T: Scalar> LinearSection<T> {
    /// `table[i]` is the value at `nq.sample()[i]`; requires `A table[i] = y_i`
    /// to relative tolerance `1e-9`.
    pub fn new(nq: &NormedQuotient<T>, table: Vec<Vec<T>>) -> Result<Self> {
        if table.len() != nq.sample().len() {
            return Err(Error::SampleMismatch);
        }
        let tol = T::of(1e-9);
        for (i, (x, y)) in table.iter().zip(nq.sample()).enumerate() {
            if x.len() != nq.ambient_dim() {
                return Err(Error::DimensionMismatch);
            }
            let ax = nq.apply(x);
            let off = ax.iter().zip(y).any(|(a, b)| (*a - *b).abs() > band(tol, b.abs().max(a.abs())));
            if off {
                return Err(Error::NotASection(format!("base sample #{i}")));
            }
        }
        Ok(LinearSection { table })
    }

    /// Tabulate a closure over the sample.
    pub fn from_fn(nq: &NormedQuotient<T>, f: impl Fn(&[T]) -> Vec<T>) -> Result<Self> {
        Self::new(nq, nq.sample().iter().map(|y| f(y)).collect())
    }

    pub fn at(&self, i: usize) -> &[T] {
        &self.table[i]
    }

    pub fn table(&self) -> &[Vec<T>] {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

/// Pair tables of a linear section for the intrinsic checks.
pub fn linear_view<T: Scalar>(nq: &NormedQuotient<T>, phi: &LinearSection<T>) -> Result<SectionView<T>> {
    let n = phi.len();
    let mut graph = vec![T::zero(); n * n];
    let mut fiber = vec![T::zero(); n * n];
    for a in 0..n {
        for b in 0..n {
            if a != b {
                graph[a * n + b] = nq.dist(phi.at(a), phi.at(b));
                fiber[a * n + b] = linear_fiber_distance(nq, phi.at(a), &nq.sample()[b])?;
            }
        }
    }
    SectionView::from_tables(n, graph, fiber)
}

fn same_point<T: Scalar>(a: &[T], b: &[T]) -> bool {
    let tol = T::of(T::DEFAULT_TOLERANCE);
    a.iter().zip(b).all(|(u, v)| (*u - *v).abs() <= band(tol, u.abs().max(v.abs())))
}

/// Pointwise `t phi + (1 - t) eta`.
pub fn affine_combine<T: Scalar>(
    nq: &NormedQuotient<T>,
    phi: &LinearSection<T>,
    eta: &LinearSection<T>,
    t: T,
) -> Result<LinearSection<T>> {
    if phi.len() != nq.sample().len() || eta.len() != nq.sample().len() {
        return Err(Error::SampleMismatch);
    }
    if !(t >= T::zero() && t <= T::one()) {
        return Err(Error::Input(format!("combination weight {t} outside [0, 1]")));
    }
    let s = T::one() - t;
    let table = phi
        .table()
        .iter()
        .zip(eta.table())
        .map(|(p, e)| p.iter().zip(e).map(|(a, b)| t * *a + s * *b).collect())
        .collect();
    LinearSection::new(nq, table)
}

/// Weak or strong relation of `subject` to `base` at the anchor sample index.
pub fn linear_wrt<T: Scalar>(
    nq: &NormedQuotient<T>,
    subject: &LinearSection<T>,
    base: &LinearSection<T>,
    anchor: usize,
    params: HolderParams<T>,
    mode: WrtMode,
) -> Result<WrtCertificate<T>> {
    if subject.len() != nq.sample().len() || base.len() != nq.sample().len() {
        return Err(Error::SampleMismatch);
    }
    if anchor >= base.len() {
        return Err(Error::UnknownFiber(format!("#{anchor}")));
    }
    let hat = base.at(anchor);
    if !same_point(subject.at(anchor), hat) {
        return Err(Error::AnchorMismatch(format!("#{anchor}")));
    }
    let n = base.len();
    let gap: Vec<T> = (0..n).map(|y| nq.dist(subject.at(y), base.at(y))).collect();
    let a: Vec<T> = (0..n).map(|y| nq.dist(hat, base.at(y))).collect();
    let b: Vec<T> = (0..n).map(|y| nq.dist(hat, subject.at(y))).collect();
    Ok(wrt_from_distances(&gap, &a, &b, anchor, params, mode, T::of(T::DEFAULT_TOLERANCE)))
}

/// Least weak-relation constant, `None` when none is finite.
pub fn minimal_linear_wrt_constant<T: Scalar>(
    nq: &NormedQuotient<T>,
    subject: &LinearSection<T>,
    base: &LinearSection<T>,
    anchor: usize,
    alpha: T,
) -> Result<Option<T>> {
    let params = HolderParams::new(T::one(), alpha)?;
    Ok(linear_wrt(nq, subject, base, anchor, params, WrtMode::Weak)?.minimal_l)
}

fn member_constant<T: Scalar>(
    nq: &NormedQuotient<T>,
    s: &LinearSection<T>,
    psi: &LinearSection<T>,
    anchor: usize,
    alpha: T,
    name: &str,
) -> Result<T> {
    minimal_linear_wrt_constant(nq, s, psi, anchor, alpha)?
        .ok_or_else(|| Error::PremiseFailed(format!("{name} is not related to the base section at any constant")))
}

/// Constant-tracked membership of a convex combination.
#[derive(Debug, Clone, Serialize)]
pub struct CombinationReport<T> {
    pub combined: LinearSection<T>,
    pub t: T,
    pub l_phi: T,
    pub l_eta: T,
    /// `t (L_phi - L_eta) + L_eta`
    pub asserted: T,
    pub measured: Option<T>,
    pub certificate: WrtCertificate<T>,
    pub holds: bool,
}

/// Combine two members of the class of `psi` at `anchor` and check the
/// combination at the interpolated constant.
pub fn combination_membership<T: Scalar>(
    nq: &NormedQuotient<T>,
    phi: &LinearSection<T>,
    eta: &LinearSection<T>,
    psi: &LinearSection<T>,
    anchor: usize,
    t: T,
    alpha: T,
) -> Result<CombinationReport<T>> {
    check_alpha(alpha)?;
    let l_phi = member_constant(nq, phi, psi, anchor, alpha, "phi")?;
    let l_eta = member_constant(nq, eta, psi, anchor, alpha, "eta")?;
    let combined = affine_combine(nq, phi, eta, t)?;
    let asserted = t * (l_phi - l_eta) + l_eta;
    let params = HolderParams { l: asserted, alpha };
    let certificate = linear_wrt(nq, &combined, psi, anchor, params, WrtMode::Weak)?;
    let measured = certificate.minimal_l;
    let holds = certificate.holds;
    Ok(CombinationReport { combined, t, l_phi, l_eta, asserted, measured, certificate, holds })
}

/// `lambda phi` as a section of `A / lambda`.
#[derive(Debug, Clone)]
pub struct ScaledSection<T> {
    pub quotient: NormedQuotient<T>,
    pub section: LinearSection<T>,
    /// `|lambda|^(1 - alpha) L`
    pub constant: T,
}

pub fn scale_section<T: Scalar>(
    nq: &NormedQuotient<T>,
    phi: &LinearSection<T>,
    lambda: T,
    params: HolderParams<T>,
) -> Result<ScaledSection<T>> {
    let quotient = nq.rescaled(lambda)?;
    let table = phi.table().iter().map(|x| x.iter().map(|v| lambda * *v).collect()).collect();
    let section = LinearSection::new(&quotient, table)?;
    let constant = lambda.abs().powf(T::one() - params.alpha) * params.l;
    Ok(ScaledSection { quotient, section, constant })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport<T> {
    pub lambda: T,
    pub constant: T,
    pub scaled_constant: T,
    pub original_verdict: bool,
    pub scaled_verdict: bool,
    pub agree: bool,
}

/// Compare the one-term global verdict of `phi` at `K` with that of
/// `lambda phi` at `|lambda|^(1 - alpha) K`.
pub fn scaling_invariance<T: Scalar>(
    nq: &NormedQuotient<T>,
    phi: &LinearSection<T>,
    lambda: T,
    params: HolderParams<T>,
) -> Result<ScalingReport<T>> {
    let scaled = scale_section(nq, phi, lambda, params)?;
    let tol = T::of(T::DEFAULT_TOLERANCE);
    let original_verdict = check_global_view(&linear_view(nq, phi)?, params.l, params.alpha, tol);
    let scaled_verdict =
        check_global_view(&linear_view(&scaled.quotient, &scaled.section)?, scaled.constant, params.alpha, tol);
    Ok(ScalingReport {
        lambda,
        constant: params.l,
        scaled_constant: scaled.constant,
        original_verdict,
        scaled_verdict,
        agree: original_verdict == scaled_verdict,
    })
}

/// Membership certificate for `phi + eta` in the class of `2 psi`.
#[derive(Debug, Clone, Serialize)]
pub struct SumReport<T> {
    pub sum: LinearSection<T>,
    pub doubled_base: LinearSection<T>,
    pub l_phi: T,
    pub l_eta: T,
    /// `2^(1 - alpha) max(L_phi, L_eta)`
    pub asserted: T,
    pub measured: Option<T>,
    pub certificate: WrtCertificate<T>,
    pub holds: bool,
}

pub fn sum_sections<T: Scalar>(
    nq: &NormedQuotient<T>,
    phi: &LinearSection<T>,
    eta: &LinearSection<T>,
    psi: &LinearSection<T>,
    anchor: usize,
    alpha: T,
) -> Result<SumReport<T>> {
    check_alpha(alpha)?;
    let l_phi = member_constant(nq, phi, psi, anchor, alpha, "phi")?;
    let l_eta = member_constant(nq, eta, psi, anchor, alpha, "eta")?;
    let two = T::of(2.0);
    let halved = nq.rescaled(two)?;
    let add = |u: &LinearSection<T>, v: &LinearSection<T>| -> Vec<Vec<T>> {
        u.table().iter().zip(v.table()).map(|(p, q)| p.iter().zip(q).map(|(a, b)| *a + *b).collect()).collect()
    };
    let sum = LinearSection::new(&halved, add(phi, eta))?;
    let doubled_base = LinearSection::new(&halved, add(psi, psi))?;
    let asserted = two.powf(T::one() - alpha) * l_phi.max(l_eta);
    let params = HolderParams { l: asserted, alpha };
    let certificate = linear_wrt(&halved, &sum, &doubled_base, anchor, params, WrtMode::Weak)?;
    let measured = certificate.minimal_l;
    let holds = certificate.holds;
    Ok(SumReport { sum, doubled_base, l_phi, l_eta, asserted, measured, certificate, holds })
}
