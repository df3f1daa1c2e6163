//! Claim builders shared by the subcommands and the suite.

use intrinsic_holder::algebra::{
    combination_membership, scaling_invariance, sum_sections, LinearSection, NormedQuotient,
};
use intrinsic_holder::extension::{
    extend_partial_section, extension_kernel_value, section_from_level_set, verify_fibered_claims,
    ExtensionMachinery, FiberedFunction, Level,
};
use intrinsic_holder::holder::{
    bound_k_from_l, check_global_view, check_holder_view, check_wrt, check_wrt_strong, cone_avoidance_check,
    cone_points, diameter_bound_k_view, equivalence_classes, family_equibound_check, limit_closure_check,
    minimal_constant_view, minimal_global_constant_view, minimal_wrt_constant, strong_transitivity_check,
    uniform_openness_radius, verify_continuity, wrt_pointbound_equivalence, HolderParams, PointBoundDirection,
    SectionView, WrtCertificate, WrtMode,
};
use intrinsic_holder::metric::{FiniteMetricSpace, QuotientStructure, Section};
use intrinsic_holder::regularity::{
    check_ball_inclusion, fit_ahlfors_exponent, measure_compatibility_constant, transfer_regularity_check,
    BallGrowthProfile, MeasureOnY,
};
use intrinsic_holder::report::{Claim, Json};
use intrinsic_holder::{Error, Result};

const TOL: f64 = 1e-9;

/// A finite instance with a label prefixed to claim names.
#[derive(Clone, Copy)]
pub struct Inst<'a> {
    pub label: &'a str,
    pub space: &'a FiniteMetricSpace<f64>,
    pub q: &'a QuotientStructure,
}

impl Inst<'_> {
    fn name(&self, claim: &str) -> String {
        if self.label.is_empty() {
            claim.to_string()
        } else {
            format!("{}/{claim}", self.label)
        }
    }

    fn pt(&self, x: usize) -> Json {
        Json::from(self.space.id(x))
    }

    fn fiber(&self, y: usize) -> Json {
        Json::from(self.q.fiber_id(y))
    }

    fn fibers(&self, ys: &[usize]) -> Json {
        Json::Arr(ys.iter().map(|&y| self.fiber(y)).collect())
    }

    fn pts(&self, xs: &[usize]) -> Json {
        Json::Arr(xs.iter().map(|&x| self.pt(x)).collect())
    }

    fn fiber_pair(&self, p: Option<(usize, usize)>) -> Json {
        p.map_or(Json::Null, |(a, b)| Json::Arr(vec![self.fiber(a), self.fiber(b)]))
    }

    fn section(&self, s: &Section) -> Json {
        self.pts(s.choice())
    }
}

fn params_json(p: HolderParams<f64>) -> Json {
    Json::obj([("L", Json::from(p.l)), ("alpha", Json::from(p.alpha))])
}

fn within(value: f64, bound: f64) -> bool {
    value <= bound + TOL * (1.0 + bound.abs())
}

pub fn holder(inst: Inst, section: &Section, params: HolderParams<f64>, tol: Option<f64>) -> Claim {
    let view = SectionView::new(inst.space, inst.q, section);
    let tol = tol.unwrap_or_else(|| view.default_tolerance());
    let cert = check_holder_view(&view, params, tol);
    Claim::new(inst.name("intrinsic-holder"), "intrinsic Hölder inequality", cert.holds)
        .measured(Json::obj([
            ("slack_min", Json::from(cert.slack_min)),
            ("minimal_L", Json::from(cert.minimal_l)),
            ("holds_strict", Json::from(cert.holds_strict)),
        ]))
        .bound(Json::obj([
            ("L", Json::from(params.l)),
            ("alpha", Json::from(params.alpha)),
            ("tolerance", Json::from(tol)),
        ]))
        .witnesses(Json::obj([
            ("slack_min_pair", inst.fiber_pair(cert.slack_min_pair)),
            ("worst_pair", inst.fiber_pair(cert.worst_pair)),
            ("section", inst.section(section)),
        ]))
}

/// Minimal constants, the bounded-base estimate and its converse.
pub fn fit(inst: Inst, section: &Section, alpha: f64) -> Vec<Claim> {
    let view = SectionView::new(inst.space, inst.q, section);
    let tol = view.default_tolerance();
    let (l_min, l_pair) = minimal_constant_view(&view, alpha);
    let (k_min, k_pair) = minimal_global_constant_view(&view, alpha);
    let spread = diameter_bound_k_view(&view);
    let at_min = check_holder_view(&view, HolderParams { l: l_min, alpha }, tol);
    let below_fails = l_min == 0.0 || !check_holder_view(&view, HolderParams { l: l_min * (1.0 - 1e-6), alpha }, 0.0).holds_strict;
    let bound = bound_k_from_l(l_min, spread).expect("measured constants are finite and nonnegative");
    let reverse = check_holder_view(&view, HolderParams { l: k_min, alpha }, tol);
    vec![
        Claim::new(inst.name("minimal-constant"), "intrinsic Hölder inequality", at_min.holds && below_fails)
            .measured(Json::from(l_min))
            .bound(Json::obj([("alpha", Json::from(alpha))]))
            .witnesses(inst.fiber_pair(l_pair)),
        Claim::new(inst.name("global-constant"), "one-term Hölder bound", check_global_view(&view, k_min, alpha, tol))
            .measured(Json::from(k_min))
            .witnesses(inst.fiber_pair(k_pair)),
        Claim::new(inst.name("bounded-base"), "bounded base", within(k_min, bound))
            .measured(Json::from(k_min))
            .bound(Json::obj([("bound_K", Json::from(bound)), ("k", Json::from(spread)), ("L", Json::from(l_min))]))
            .witnesses(inst.fiber_pair(k_pair)),
        Claim::new(inst.name("bounded-base-converse"), "bounded base", reverse.holds)
            .measured(Json::from(reverse.slack_min))
            .bound(Json::obj([("L", Json::from(k_min))]))
            .witnesses(inst.fiber_pair(reverse.slack_min_pair)),
    ]
}

pub fn cones(inst: Inst, apex: usize, params: HolderParams<f64>, section: Option<&Section>) -> Vec<Claim> {
    let cone = cone_points(inst.space, inst.q, apex, params);
    let y = inst.q.fiber_of(apex);
    let vertical = !cone.members.contains(&apex)
        && inst.q.members(y).iter().filter(|&&x| x != apex).all(|x| cone.members.contains(x));
    let mut out = vec![Claim::new(inst.name("cone-vertical-opening"), "intrinsic cones", vertical)
        .measured(inst.pts(&cone.members))
        .bound(params_json(params))
        .witnesses(Json::obj([("apex", inst.pt(apex))]))];
    if let Some(s) = section {
        let avoid = cone_avoidance_check(inst.space, inst.q, s, params);
        let view = SectionView::new(inst.space, inst.q, s);
        let strict = check_holder_view(&view, params, 0.0).holds_strict;
        out.push(
            Claim::new(inst.name("cone-characterization"), "intrinsic cones", avoid.avoids == strict)
                .measured(Json::obj([("avoids", Json::from(avoid.avoids)), ("holds_strict", Json::from(strict))]))
                .bound(params_json(params))
                .witnesses(avoid.witness.map_or(Json::Null, |(a, x)| inst.pts(&[a, x]))),
        );
    }
    out
}

fn wrt_json(inst: Inst, c: &WrtCertificate<f64>) -> Json {
    Json::obj([
        ("slack_min", Json::from(c.slack_min)),
        ("minimal_L", c.minimal_l.map_or(Json::from("inf"), Json::from)),
        ("worst_fiber", c.worst_fiber.map_or(Json::Null, |y| inst.fiber(y))),
    ])
}

/// Weak and strong relations of `phi` to `psi`, their symmetry, and the
/// derived statements that apply to the given data.
pub fn relate(
    inst: Inst,
    phi: &Section,
    psi: &Section,
    eta: Option<&Section>,
    anchor: usize,
    params: HolderParams<f64>,
) -> Result<Vec<Claim>> {
    let (space, q) = (inst.space, inst.q);
    let weak = check_wrt(space, q, phi, psi, anchor, params)?;
    let strong = check_wrt_strong(space, q, phi, psi, anchor, params)?;
    let back = check_wrt_strong(space, q, psi, phi, anchor, params)?;
    let mut out = vec![
        Claim::new(inst.name("weak-relation"), "relation to a section", weak.holds)
            .measured(wrt_json(inst, &weak))
            .bound(params_json(params)),
        Claim::new(inst.name("strong-relation"), "strong relation", strong.holds)
            .measured(wrt_json(inst, &strong))
            .bound(params_json(params)),
        Claim::new(inst.name("strong-implies-weak"), "strong relation", !strong.holds || weak.holds)
            .measured(Json::obj([("strong", Json::from(strong.holds)), ("weak", Json::from(weak.holds))])),
        Claim::new(
            inst.name("strong-symmetry"),
            "strong relation is an equivalence",
            strong.holds == back.holds && strong.minimal_l == back.minimal_l,
        )
        .measured(Json::obj([("forward", wrt_json(inst, &strong)), ("backward", wrt_json(inst, &back))])),
    ];
    if let Some(eta) = eta {
        match strong_transitivity_check(space, q, phi, psi, eta, anchor, params.l, params.l, params.alpha) {
            Ok(t) => out.push(
                Claim::new(inst.name("strong-transitivity"), "strong relation is an equivalence", t.holds)
                    .measured(wrt_json(inst, &t.composed))
                    .bound(Json::obj([("L", Json::from(t.composed_constant)), ("alpha", Json::from(params.alpha))]))
                    .witnesses(Json::obj([
                        ("phi", inst.section(phi)),
                        ("psi", inst.section(psi)),
                        ("eta", inst.section(eta)),
                    ])),
            ),
            Err(Error::PremiseFailed(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let mut family = vec![phi.clone(), psi.clone()];
    family.extend(eta.cloned());
    let eq = equivalence_classes(space, q, &family, psi, anchor, params.alpha)?;
    let n = family.len();
    let consistent = (0..n).all(|i| {
        eq.constants[i][i] == Some(0.0) && (0..n).all(|j| eq.constants[i][j].is_some() == eq.constants[j][i].is_some())
    });
    out.push(
        Claim::new(inst.name("equivalence-classes"), "strong relation is an equivalence", consistent).measured(
            Json::Arr(eq.classes.iter().map(|c| Json::Arr(c.iter().map(|&i| Json::from(i)).collect())).collect()),
        ),
    );
    out.extend(point_bound(inst, phi, psi, anchor, params)?);
    Ok(out)
}

/// Both directions of the point-bound characterization, when `psi` qualifies as a base.
pub fn point_bound(
    inst: Inst,
    phi: &Section,
    psi: &Section,
    anchor: usize,
    params: HolderParams<f64>,
) -> Result<Vec<Claim>> {
    let (space, q) = (inst.space, inst.q);
    let Some(l1) = minimal_wrt_constant(space, q, phi, psi, anchor, params.alpha, WrtMode::Weak)? else {
        return Ok(vec![]);
    };
    let l1 = l1.max(1.0);
    let dir = PointBoundDirection::FromWrt { l1, beta: params.alpha };
    let forward = match wrt_pointbound_equivalence(space, q, phi, psi, anchor, params.l, params.alpha, dir) {
        Ok(r) => r,
        Err(Error::PremiseFailed(_)) => return Ok(vec![]),
        Err(e) => return Err(e),
    };
    let dir = PointBoundDirection::FromPointBound { l2: forward.asserted_constant, gamma: forward.asserted_exponent };
    let backward = wrt_pointbound_equivalence(space, q, phi, psi, anchor, params.l, params.alpha, dir)?;
    Ok(vec![
        Claim::new(inst.name("point-bound"), "point bound", forward.holds)
            .measured(Json::opt(forward.measured_constant))
            .bound(Json::obj([
                ("C", Json::from(forward.asserted_constant)),
                ("exponent", Json::from(forward.asserted_exponent)),
                ("L1", Json::from(l1)),
            ])),
        Claim::new(inst.name("point-bound-converse"), "point bound", backward.holds)
            .measured(Json::opt(backward.derived_wrt.as_ref().map(|c| c.slack_min)))
            .bound(Json::obj([
                ("L", Json::from(backward.asserted_constant)),
                ("alpha", Json::from(backward.asserted_exponent)),
            ])),
    ])
}

/// Continuity modulus, equiboundedness, openness and limit closure for the
/// members of `candidates` that satisfy the claim.
pub fn family(
    inst: Inst,
    candidates: &[Section],
    params: HolderParams<f64>,
    y0: usize,
    epsilon: f64,
) -> Result<Vec<Claim>> {
    let (space, q) = (inst.space, inst.q);
    let members: Vec<Section> = candidates
        .iter()
        .filter(|s| {
            let view = SectionView::new(space, q, s);
            check_holder_view(&view, params, view.default_tolerance()).holds
        })
        .cloned()
        .collect();
    if members.is_empty() {
        return Ok(vec![]);
    }
    let eps = epsilon.min(params.l + 1.0);
    let mut cont_ok = true;
    let mut displacement = 0.0f64;
    let mut radius = 0.0;
    for s in &members {
        let r = verify_continuity(space, q, s, params, eps)?;
        cont_ok &= r.holds;
        displacement = displacement.max(r.max_displacement);
        radius = r.radius;
    }
    let mut k_set: Vec<usize> = members.iter().map(|s| s.at(y0)).collect();
    k_set.sort_unstable();
    k_set.dedup();
    let eb = family_equibound_check(space, q, &members, params, y0, &k_set)?;
    let open = uniform_openness_radius(space, q, &k_set, y0, eps);
    let anchors: Vec<usize> = k_set.iter().copied().filter(|&x| q.fiber_of(x) == y0).collect();
    let open_ok = (0..q.fiber_count()).all(|yp| {
        let reached = anchors.iter().all(|&x| q.members(yp).iter().any(|&xp| space.dist(x, xp) < eps));
        open.contains(&yp) == (yp == y0 || reached)
    });
    let limit = limit_closure_check(space, q, &members, params)?;
    Ok(vec![
        Claim::new(inst.name("continuity-modulus"), "continuity of sections", cont_ok)
            .measured(Json::from(displacement))
            .bound(Json::obj([("epsilon", Json::from(eps)), ("radius", Json::from(radius))]))
            .witnesses(Json::from(members.len())),
        Claim::new(inst.name("equibound"), "equiboundedness", eb.holds)
            .measured(Json::from(eb.max_left))
            .bound(Json::from(eb.max_bound))
            .witnesses(Json::obj([("K", inst.pts(&k_set))])),
        Claim::new(inst.name("uniform-openness"), "uniform openness", open_ok && open.contains(&y0))
            .measured(inst.fibers(&open))
            .bound(Json::obj([("epsilon", Json::from(eps))])),
        Claim::new(inst.name("limit-closure"), "closedness of the family", limit.certificate.holds)
            .measured(inst.section(&limit.limit))
            .bound(params_json(params))
            .witnesses(Json::Arr(limit.subsequence.iter().map(|&i| Json::from(i)).collect())),
    ])
}

pub fn ball_inclusion(inst: Inst, section: &Section, params: HolderParams<f64>, radii: &[f64]) -> Result<Option<Claim>> {
    let view = SectionView::new(inst.space, inst.q, section);
    if !check_holder_view(&view, params, 0.0).holds_strict {
        return Ok(None);
    }
    let mut checked = 0usize;
    let mut failure = Json::Null;
    for &r in radii.iter().filter(|&&r| r > 0.0 && r <= 1.0) {
        for &p in section.choice() {
            let b = check_ball_inclusion(inst.space, inst.q, section, params, p, r)?;
            checked += 1;
            if !b.holds && failure == Json::Null {
                failure = Json::obj([("center", inst.pt(p)), ("r", Json::from(r))]);
            }
        }
    }
    Ok(Some(
        Claim::new(inst.name("ball-inclusion"), "ball inclusion", failure == Json::Null)
            .measured(Json::from(checked))
            .bound(params_json(params))
            .witnesses(failure),
    ))
}

pub fn compatibility(inst: Inst, mu: &MeasureOnY<f64>, radii: &[f64]) -> Result<Claim> {
    let c = measure_compatibility_constant(inst.space, inst.q, mu, radii)?;
    let scaled = measure_compatibility_constant(inst.space, inst.q, &mu.scaled(3.0)?, radii)?;
    let same = c.constant == scaled.constant || (c.constant - scaled.constant).abs() <= TOL * c.constant;
    Ok(Claim::new(inst.name("measure-compatibility"), "compatible measure", same)
        .measured(Json::from(c.constant))
        .bound(Json::obj([("scaled_by_3", Json::from(scaled.constant))]))
        .witnesses(c.witness.map_or(Json::Null, |(x, xp, r)| Json::Arr(vec![inst.pt(x), inst.pt(xp), Json::from(r)]))))
}

pub fn profile_json(inst: Inst, p: &BallGrowthProfile<f64>) -> Json {
    Json::obj([
        ("center", inst.pt(p.center)),
        ("Q", Json::from(p.fitted_q)),
        ("C", Json::from(p.fitted_c)),
        ("residual", Json::from(p.residual)),
    ])
}

/// Log-log fit around `center`, optionally asserting the exponent lies in `range`.
pub fn ahlfors(
    inst: Inst,
    section: &Section,
    mu: &MeasureOnY<f64>,
    center: usize,
    radii: &[f64],
    range: Option<(f64, f64)>,
) -> Result<(Claim, BallGrowthProfile<f64>)> {
    let p = fit_ahlfors_exponent(inst.space, inst.q, section, mu, center, radii)?;
    let pass = p.fitted_q.is_finite() && range.map_or(true, |(lo, hi)| p.fitted_q >= lo && p.fitted_q <= hi);
    let claim = Claim::new(inst.name("ahlfors-fit"), "Ahlfors regularity", pass)
        .measured(profile_json(inst, &p))
        .bound(range.map_or(Json::Null, |(lo, hi)| Json::Arr(vec![Json::from(lo), Json::from(hi)])));
    Ok((claim, p))
}

#[allow(clippy::too_many_arguments)]
pub fn transfer(
    inst: Inst,
    phi: &Section,
    psi: &Section,
    params: HolderParams<f64>,
    mu: &MeasureOnY<f64>,
    ell: f64,
    radii: &[f64],
) -> Result<Vec<Claim>> {
    let run = |m: &MeasureOnY<f64>| transfer_regularity_check(inst.space, inst.q, phi, psi, params, m, ell, radii);
    let r = match run(mu) {
        Ok(r) => r,
        Err(Error::PremiseFailed(_)) => return Ok(vec![]),
        Err(e) => return Err(e),
    };
    let scaled = run(&mu.scaled(3.0)?)?;
    Ok(vec![
        Claim::new(inst.name("regularity-transfer"), "regularity of section graphs", r.holds)
            .measured(Json::from(r.worst_ratio))
            .bound(Json::obj([
                ("ell", Json::from(ell)),
                ("source_exponent", Json::from(r.source_exponent)),
                ("target_exponent", Json::from(r.target_exponent)),
                ("compatibility", Json::from(r.compatibility.constant)),
            ]))
            .witnesses(Json::from(r.rows.len())),
        Claim::new(inst.name("regularity-measure-scaling"), "regularity of section graphs", r.holds == scaled.holds)
            .measured(Json::obj([("original", Json::from(r.holds)), ("scaled_by_3", Json::from(scaled.holds))])),
    ])
}

pub fn level_set(inst: Inst, f: &FiberedFunction<f64>, z0: Level<f64>) -> Result<Vec<Claim>> {
    let claims = verify_fibered_claims(inst.space, inst.q, f)?;
    let mut out = vec![Claim::new(inst.name("fibered-claims"), "fiber-biLipschitz functions", claims.holds)
        .measured(Json::obj([
            ("holder_constant", Json::from(claims.holder_constant)),
            ("fiber_bilip", Json::from(claims.fiber_bilip)),
        ]))
        .bound(Json::obj([
            ("lambda", Json::from(f.holder.l)),
            ("beta", Json::from(f.holder.alpha)),
            ("fiber_bilip", Json::from(f.fiber_bilip)),
        ]))];
    if !claims.holds {
        return Ok(out);
    }
    let s = section_from_level_set(inst.space, inst.q, f, z0)?;
    let lambda = f.holder.l;
    let exact_params = s.certificate.params.alpha == f.holder.alpha && s.certificate.params.l == lambda * lambda;
    out.push(
        Claim::new(inst.name("level-set-section"), "sections as level sets", s.certificate.holds && exact_params)
            .measured(Json::obj([
                ("minimal_L", Json::from(s.certificate.minimal_l)),
                ("slack_min", Json::from(s.certificate.slack_min)),
            ]))
            .bound(params_json(s.certificate.params))
            .witnesses(inst.section(&s.section)),
    );
    Ok(out)
}

/// Exactness of the zero set, anchor values, kernel continuity and the Hölder bound.
pub fn extension(inst: Inst, m: &ExtensionMachinery<f64>, partial: &[(usize, usize)]) -> Result<Vec<Claim>> {
    let r = extend_partial_section(m, inst.space, partial)?;
    let anchors_zero = r.anchors.iter().all(|&x| r.values[x] == 0.0);
    let gamma = m.gamma();
    let mut jump = 0.0f64;
    for &x0 in &r.anchors {
        for x in 0..inst.space.len() {
            let s = m.delta(x0, x);
            for edge in [2.0 * gamma * s, -2.0 * gamma * s] {
                let h = 1e-13 * (1.0 + edge.abs());
                let gap = (extension_kernel_value(edge + h, s, gamma) - extension_kernel_value(edge - h, s, gamma)).abs();
                jump = jump.max(gap / (1.0 + edge.abs()));
            }
        }
    }
    Ok(vec![
        Claim::new(inst.name("extension-anchor-zero"), "extension of partial sections", anchors_zero)
            .measured(Json::from(r.anchors.len()))
            .witnesses(inst.pts(&r.anchors)),
        Claim::new(inst.name("extension-containment"), "extension of partial sections", r.containment)
            .measured(inst.pts(&r.zero_set))
            .witnesses(inst.pts(&r.anchors)),
        Claim::new(inst.name("extension-kernel-continuity"), "extension of partial sections", jump <= 1e-12)
            .measured(Json::from(jump))
            .bound(Json::from(1e-12)),
        Claim::new(
            inst.name("extension-holder"),
            "extension of partial sections",
            r.holder_constant <= 2.0 * r.asserted_holder,
        )
        .measured(Json::from(r.holder_constant))
        .bound(Json::obj([
            ("2k+4gammak", Json::from(r.asserted_holder)),
            ("slack_factor", Json::from(2.0)),
            ("gamma", Json::from(r.gamma)),
            ("k", Json::from(r.k)),
            ("L", Json::from(r.l)),
        ]))
        .witnesses(r.holder_pair.map_or(Json::Null, |(a, b)| inst.pts(&[a, b]))),
    ])
}

/// Combination, sum and scaling on a sampled linear quotient.
#[allow(clippy::too_many_arguments)]
pub fn algebra(
    label: &str,
    nq: &NormedQuotient<f64>,
    phi: &LinearSection<f64>,
    eta: &LinearSection<f64>,
    psi: &LinearSection<f64>,
    anchor: usize,
    alpha: f64,
    ts: &[f64],
    lambdas: &[f64],
    l: f64,
) -> Result<Vec<Claim>> {
    let name = |n: &str| if label.is_empty() { n.to_string() } else { format!("{label}/{n}") };
    let mut out = Vec::new();
    for &t in ts {
        let c = combination_membership(nq, phi, eta, psi, anchor, t, alpha)?;
        let pass = c.measured.is_some_and(|m| within(m, c.asserted));
        out.push(
            Claim::new(name(&format!("combination-t{t}")), "convex combinations", pass)
                .measured(Json::opt(c.measured))
                .bound(Json::from(c.asserted))
                .witnesses(Json::obj([("L_phi", Json::from(c.l_phi)), ("L_eta", Json::from(c.l_eta))])),
        );
    }
    let s = sum_sections(nq, phi, eta, psi, anchor, alpha)?;
    out.push(
        Claim::new(name("sum"), "sums of sections", s.measured.is_some_and(|m| within(m, s.asserted)))
            .measured(Json::opt(s.measured))
            .bound(Json::from(s.asserted))
            .witnesses(Json::obj([("L_phi", Json::from(s.l_phi)), ("L_eta", Json::from(s.l_eta))])),
    );
    let params = HolderParams::new(l, alpha)?;
    for &lambda in lambdas {
        let r = scaling_invariance(nq, phi, lambda, params)?;
        out.push(
            Claim::new(name(&format!("scaling-lambda{lambda}")), "scaling of sections", r.agree)
                .measured(Json::obj([
                    ("original", Json::from(r.original_verdict)),
                    ("scaled", Json::from(r.scaled_verdict)),
                ]))
                .bound(Json::obj([("K", Json::from(r.constant)), ("scaled_K", Json::from(r.scaled_constant))])),
        );
    }
    Ok(out)
}
