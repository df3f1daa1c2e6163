//! Every premise-conditional check over the bundled fixtures.

use anyhow::Result;
use intrinsic_holder::extension::{ExtensionMachinery, FiberedFunction, Level};
use intrinsic_holder::fixtures::{antipodal_cycle, GridMetric, PlaneGrid};
use intrinsic_holder::algebra::linear_view;
use intrinsic_holder::holder::{minimal_global_constant_view, HolderParams};
use intrinsic_holder::io;
use intrinsic_holder::metric::{all_sections, FiniteMetricSpace, Section};
use intrinsic_holder::regularity::MeasureOnY;
use intrinsic_holder::report::{Claim, Json};

use crate::claims::{self, Inst};
use crate::inputs::Loader;

const W4_SPACE: &str = include_str!("../fixtures/w4_space.json");
const W4_QUOTIENT: &str = include_str!("../fixtures/w4_quotient.json");
const W4_MEASURE: &str = include_str!("../fixtures/w4_measure.json");
const LINEAR_QUOTIENT: &str = include_str!("../fixtures/linear_quotient.json");
const LINEAR_PHI: &str = include_str!("../fixtures/linear_phi.json");
const LINEAR_ETA: &str = include_str!("../fixtures/linear_eta.json");
const LINEAR_PSI: &str = include_str!("../fixtures/linear_psi.json");

const ALPHAS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];
const CONSTANTS: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
const UNIT_RADII: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

fn p(l: f64, alpha: f64) -> HolderParams<f64> {
    HolderParams::new(l, alpha).expect("suite parameters are valid")
}

/// Collapse many claims with one name into a single claim counting failures.
fn aggregate(name: String, anchor: &str, claims: Vec<Claim>) -> Claim {
    let total = claims.len();
    let failed: Vec<Json> = claims.iter().filter(|c| !c.pass).map(|c| c.witnesses.clone()).collect();
    Claim::new(name, anchor, failed.is_empty())
        .measured(Json::obj([("checked", Json::from(total)), ("failed", Json::from(failed.len()))]))
        .witnesses(failed.into_iter().next().unwrap_or(Json::Null))
}

/// Group claims by name (in first-appearance order) and aggregate each group.
fn grouped(claims: Vec<Claim>) -> Vec<Claim> {
    let mut order: Vec<(String, String)> = Vec::new();
    let mut groups: Vec<Vec<Claim>> = Vec::new();
    for c in claims {
        match order.iter().position(|(n, _)| *n == c.name) {
            Some(i) => groups[i].push(c),
            None => {
                order.push((c.name.clone(), c.paper_anchor.clone()));
                groups.push(vec![c]);
            }
        }
    }
    order.into_iter().zip(groups).map(|((n, a), g)| aggregate(n, &a, g)).collect()
}

/// Checks that need only a space, a quotient and its sections.
fn finite_instance(inst: Inst, sections: &[Section]) -> Result<Vec<Claim>> {
    let mut raw = Vec::new();
    for s in sections {
        for alpha in ALPHAS {
            raw.extend(claims::fit(inst, s, alpha));
            for l in CONSTANTS {
                for &apex in s.choice() {
                    raw.extend(claims::cones(inst, apex, p(l, alpha), Some(s)));
                }
                raw.extend(claims::ball_inclusion(inst, s, p(l, alpha), &UNIT_RADII)?);
            }
        }
    }
    for y in 0..inst.q.fiber_count() {
        for l in CONSTANTS {
            for alpha in ALPHAS {
                raw.extend(claims::family(inst, sections, p(l, alpha), y, 1.0)?);
            }
        }
    }
    Ok(grouped(raw))
}

/// Relations between every pair and triple of sections sharing an anchor.
fn relations(inst: Inst, sections: &[Section]) -> Result<Vec<Claim>> {
    let mut raw = Vec::new();
    for y in 0..inst.q.fiber_count() {
        for x in inst.q.members(y) {
            let through: Vec<&Section> = sections.iter().filter(|s| s.at(y) == *x).collect();
            for phi in &through {
                for psi in &through {
                    for eta in &through {
                        for l in [1.0, 2.0] {
                            for alpha in [0.5, 1.0] {
                                raw.extend(claims::relate(inst, phi, psi, Some(eta), y, p(l, alpha))?);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(grouped(raw))
}

fn w4(loader: &mut Loader) -> Result<Vec<Claim>> {
    loader.bundled("w4_space.json", W4_SPACE);
    loader.bundled("w4_quotient.json", W4_QUOTIENT);
    loader.bundled("w4_measure.json", W4_MEASURE);
    let space: FiniteMetricSpace<f64> = io::parse_space(W4_SPACE)?;
    let q = io::parse_quotient(&space, W4_QUOTIENT)?;
    let mu: MeasureOnY<f64> = io::parse_measure(&q, W4_MEASURE)?;
    let inst = Inst { label: "w4", space: &space, q: &q };
    let sections = all_sections(&q);
    let ad = Section::from_points(&space, &q, &["a", "d"])?;
    let mut out = vec![claims::holder(inst, &ad, p(2.0, 0.5), None)];
    let (l_min, _) = intrinsic_holder::holder::minimal_holder_constant(&space, &q, &ad, 0.5)?;
    out.push(
        Claim::new("w4/minimal-constant-ad", "intrinsic Hölder inequality", l_min == 2.0)
            .measured(Json::from(l_min))
            .bound(Json::from(2.0)),
    );
    out.extend(finite_instance(inst, &sections)?);
    out.extend(relations(inst, &sections)?);
    out.push(claims::compatibility(inst, &mu, &UNIT_RADII)?);
    Ok(out)
}

fn cycle() -> Result<Vec<Claim>> {
    let (space, q) = antipodal_cycle::<f64>(4);
    let inst = Inst { label: "cycle8", space: &space, q: &q };
    let sections = all_sections(&q);
    finite_instance(inst, &sections)
}

fn heights(g: &PlaneGrid<f64>) -> Vec<f64> {
    (0..g.space.len()).map(|x| g.height(x)).collect()
}

fn grid() -> Result<Vec<Claim>> {
    let mut out = Vec::new();

    let g = PlaneGrid::<f64>::new(6, 7, 1.0, GridMetric::Path);
    let inst = Inst { label: "grid6x7", space: &g.space, q: &g.quotient };
    let f = FiberedFunction::real(heights(&g), p(1.0, 1.0), 1.0);
    out.extend(claims::level_set(inst, &f, Level::Real(0.0))?);
    out.extend(claims::level_set(inst, &f, Level::Real(2.0))?);
    let zero = g.zero_section();
    let bump = g.graph_section(&[0, 0, 1, 1, 0, 0]);
    for alpha in [0.5, 1.0] {
        let tau = heights(&g);
        let k = ExtensionMachinery::measured_k(&g.space, &g.quotient, tau.clone(), g.space.rows(), alpha)?;
        let m = ExtensionMachinery::new(&g.space, &g.quotient, tau, g.space.rows(), k.max(1.0), alpha, 1.0)?;
        for (name, section, fibers) in [("left", &zero, 0..3), ("bump", &bump, 0..6), ("single", &zero, 2..3)] {
            let partial: Vec<(usize, usize)> = fibers.map(|y| (y, section.at(y))).collect();
            let label = format!("grid6x7-{name}-alpha{alpha}");
            let inst = Inst { label: &label, space: &g.space, q: &g.quotient };
            out.extend(claims::extension(inst, &m, &partial)?);
        }
    }

    let g = PlaneGrid::<f64>::new(33, 3, 1.0, GridMetric::Path);
    let inst = Inst { label: "grid33x3", space: &g.space, q: &g.quotient };
    let mu = MeasureOnY::counting(&g.quotient);
    let zero = g.zero_section();
    let radii: Vec<f64> = (2..=16).map(f64::from).collect();
    let (claim, _) = claims::ahlfors(inst, &zero, &mu, zero.at(16), &radii, Some((0.9, 1.1)))?;
    out.push(claim);

    let g = PlaneGrid::<f64>::new(9, 5, 1.0, GridMetric::Path);
    let inst = Inst { label: "grid9x5", space: &g.space, q: &g.quotient };
    let mu = MeasureOnY::counting(&g.quotient);
    let phi = g.zero_section();
    let psi = g.graph_section(&[0, 0, 1, 1, 1, 0, 0, -1, 0]);
    let params = p(2.0, 0.5);
    let radii = [0.25, 0.5, 1.0, 2.0, 3.0, 4.0];
    let (claim, profile) = claims::ahlfors(inst, &phi, &mu, phi.at(4), &radii, None)?;
    out.push(claim);
    let ell = profile.fitted_q - 1.0 + params.alpha;
    out.extend(claims::transfer(inst, &phi, &psi, params, &mu, ell, &radii)?);
    out.extend(claims::ball_inclusion(inst, &psi, params, &UNIT_RADII)?);
    out.push(claims::compatibility(inst, &mu, &radii)?);
    Ok(out)
}

fn linear(loader: &mut Loader) -> Result<Vec<Claim>> {
    loader.bundled("linear_quotient.json", LINEAR_QUOTIENT);
    loader.bundled("linear_phi.json", LINEAR_PHI);
    loader.bundled("linear_eta.json", LINEAR_ETA);
    loader.bundled("linear_psi.json", LINEAR_PSI);
    let nq = io::parse_normed_quotient::<f64>(LINEAR_QUOTIENT)?;
    let phi = io::parse_linear_section(&nq, LINEAR_PHI)?;
    let eta = io::parse_linear_section(&nq, LINEAR_ETA)?;
    let psi = io::parse_linear_section(&nq, LINEAR_PSI)?;
    let mut out = Vec::new();
    for alpha in [0.5, 1.0] {
        let (k, _) = minimal_global_constant_view(&linear_view(&nq, &phi)?, alpha);
        for (tag, l) in [("K", k), ("half-K", 0.5 * k)] {
            let label = format!("sqrt-alpha{alpha}-{tag}");
            let ts: &[f64] = if tag == "K" { &[0.0, 0.25, 0.5, 0.75, 1.0] } else { &[] };
            out.extend(claims::algebra(&label, &nq, &phi, &eta, &psi, 0, alpha, ts, &[-2.0, -1.0, 0.5, 3.0], l)?);
        }
    }
    Ok(out)
}

pub fn run(loader: &mut Loader) -> Result<Vec<Claim>> {
    let mut out = w4(loader)?;
    out.extend(cycle()?);
    out.extend(grid()?);
    out.extend(linear(loader)?);
    Ok(out)
}
