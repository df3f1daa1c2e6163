use anyhow::{anyhow, bail, Context, Result};
use intrinsic_holder::extension::{ExtensionMachinery, FiberedValues, Level};
use intrinsic_holder::holder::HolderParams;
use intrinsic_holder::io;
use intrinsic_holder::metric::{FiniteMetricSpace, QuotientStructure, Section};
use intrinsic_holder::report::{Claim, Json, Report};
use intrinsic_holder::Error;

use crate::args::{Cli, Command, Opts};
use crate::claims::{self, Inst};
use crate::inputs::Loader;
use crate::suite;

/// A finished report plus any plot-ready CSV.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub csv: Option<String>,
}

const DEFAULT_RADII: [f64; 6] = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0];

pub fn run(cli: &Cli) -> Result<Outcome> {
    let opts = &cli.opts;
    let mut loader = Loader::default();
    let (claims, csv) = match cli.command {
        Command::Validate => (validate(opts, &mut loader)?, None),
        Command::Check => (check(opts, &mut loader)?, None),
        Command::Fit => (fit(opts, &mut loader)?, None),
        Command::Cones => (cones(opts, &mut loader)?, None),
        Command::Relate => (relate(opts, &mut loader)?, None),
        Command::Family => (family(opts, &mut loader)?, None),
        Command::Algebra => (algebra(opts, &mut loader)?, None),
        Command::Levelset => (levelset(opts, &mut loader)?, None),
        Command::Extend => (extend(opts, &mut loader)?, None),
        Command::Regularity => regularity(opts, &mut loader)?,
        Command::Suite => (suite::run(&mut loader)?, None),
    };
    let report = Report {
        command: cli.command.name().to_string(),
        inputs_digest: loader.digest(cli.command.name(), &opts.canonical()),
        claims,
    };
    Ok(Outcome { report, csv })
}

fn params(opts: &Opts) -> Result<HolderParams<f64>> {
    Ok(HolderParams::new(opts.l, opts.alpha)?)
}

struct Base {
    space: FiniteMetricSpace<f64>,
    q: QuotientStructure,
}

impl Base {
    fn load(opts: &Opts, loader: &mut Loader) -> Result<Self> {
        let space = loader.space(&opts.space)?;
        let q = loader.quotient(&space, &opts.quotient)?;
        Ok(Base { space, q })
    }

    fn inst(&self) -> Inst<'_> {
        Inst { label: "", space: &self.space, q: &self.q }
    }

    fn section(&self, loader: &mut Loader, flag: &str, path: &Option<std::path::PathBuf>) -> Result<Section> {
        loader.section(flag, &self.space, &self.q, path)
    }

    /// `--anchor` as a fiber id, defaulting to the first fiber.
    fn anchor_fiber(&self, opts: &Opts) -> Result<usize> {
        match &opts.anchor {
            None => Ok(0),
            Some(a) => self.q.fiber_index(a).with_context(|| format!("--anchor `{a}`")),
        }
    }
}

fn is_axiom_error(e: &Error) -> bool {
    matches!(
        e,
        Error::NotSquare { .. }
            | Error::IdCountMismatch { .. }
            | Error::DuplicateId(_)
            | Error::InvalidDistance(..)
            | Error::NonzeroSelfDistance(_)
            | Error::Asymmetry(..)
            | Error::ZeroDistanceDistinctPoints(..)
            | Error::TriangleViolation { .. }
            | Error::DisconnectedGraph(..)
            | Error::InvalidEdgeWeight(..)
            | Error::EmptyFiber(_)
            | Error::OverlappingFibers(_)
            | Error::UncoveredPoint(_)
            | Error::NotASection(_)
    )
}

fn invariant(name: &str, anchor: &str, outcome: std::result::Result<Json, Error>) -> Result<Claim> {
    match outcome {
        Ok(m) => Ok(Claim::new(name, anchor, true).measured(m)),
        Err(e) if is_axiom_error(&e) => Ok(Claim::new(name, anchor, false).witnesses(Json::from(e.to_string()))),
        Err(e) => Err(e.into()),
    }
}

fn validate(opts: &Opts, loader: &mut Loader) -> Result<Vec<Claim>> {
    let path = opts.space.as_ref().ok_or_else(|| anyhow!("missing required flag --space"))?;
    let text = loader.text("--space", path)?;
    let parsed = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        io::parse_space_csv::<f64>(&text)
    } else {
        io::parse_space::<f64>(&text)
    };
    let space = match parsed {
        Ok(s) => s,
        Err(e) => return Ok(vec![invariant("metric-axioms", "metric spaces", Err(e)).context(path.display().to_string())?]),
    };
    let mut out = vec![Claim::new("metric-axioms", "metric spaces", true).measured(Json::obj([
        ("points", Json::from(space.len())),
        ("diameter", Json::from(space.diameter())),
        ("integral", Json::from(space.is_integral())),
    ]))];
    let Some(qpath) = &opts.quotient else { return Ok(out) };
    let text = loader.text("--quotient", qpath)?;
    let q = match io::parse_quotient(&space, &text) {
        Ok(q) => q,
        Err(e) => {
            out.push(invariant("quotient-partition", "quotient maps", Err(e)).context(qpath.display().to_string())?);
            return Ok(out);
        }
    };
    out.push(Claim::new("quotient-partition", "quotient maps", true).measured(Json::obj([
        ("fibers", Json::from(q.fiber_count())),
        ("points", Json::from(q.point_count())),
    ])));
    let given = [
        ("--section", "section", &opts.section),
        ("--section2", "section2", &opts.section2),
        ("--base-section", "base-section", &opts.base_section),
    ];
    for (flag, name, path) in given {
        let Some(p) = path else { continue };
        let text = loader.text(flag, p)?;
        let outcome = io::parse_section(&space, &q, &text).map(|s| {
            Json::Arr(s.choice().iter().map(|&x| Json::from(space.id(x))).collect())
        });
        out.push(invariant(name, "sections", outcome).context(p.display().to_string())?);
    }
    Ok(out)
}

fn check(opts: &Opts, loader: &mut Loader) -> Result<Vec<Claim>> {
    let p = params(opts)?;
    let b = Base::load(opts, loader)?;
    let phi = b.section(loader, "--section", &opts.section)?;
    Ok(vec![claims::holder(b.inst(), &phi, p, opts.tol)])
}

fn fit(opts: &Opts, loader: &mut Loader) -> Result<Vec<Claim>> {
    params(opts)?;
    let b = Base::load(opts, loader)?;
    let phi = b.section(loader, "--section", &opts.section)?;
    Ok(claims::fit(b.inst(), &phi, opts.alpha))
}

fn cones(opts: &Opts, loader: &mut Loader) -> Result<Vec<Claim>> {
    let p = params(opts)?;
    let b = Base::load(opts, loader)?;
    let apex = opts.anchor.as_deref().ok_or_else(|| anyhow!("missing required flag --anchor (a point id)"))?;
    let apex = b.space.index_of(apex).with_context(|| format!("--anchor `{apex}`"))?;
    let phi = loader.optional_section("--section", &b.space, &b.q, &opts.section)?;
    Ok(claims::cones(b.inst(), apex, p, phi.as_ref()))
}

fn relate(opts: &Opts, loader: &mut Loader) -> Result<Vec<Claim>> {
    let p = params(opts)?;
    let b = Base::load(opts, loader)?;
    let phi = b.section(loader, "--section", &opts.section)?;
    let psi = b.section(loader, "--section2", &opts.section2)?;
    let eta = loader.optional_section("--base-section", &b.space, &b.q, &opts.base_section)?;
    let anchor = b.anchor_fiber(opts)?;
    Ok(claims::relate(b.inst(), &phi, &psi, eta.as_ref(), anchor, p)?)
}

fn family(opts: &Opts, loader: &mut Loader) -> Result<Vec<Claim>> {
    let p = params(opts)?;
    let b = Base::load(opts, loader)?;
    let mut members = vec![b.section(loader, "--section", &opts.section)?];
    members.extend(loader.optional_section("--section2", &b.space, &b.q, &opts.section2)?);
    members.extend(loader.optional_section("--base-section", &b.space, &b.q, &opts.base_section)?);
    let y0 = b.anchor_fiber(opts)?;
    let out = claims::family(b.inst(), &members, p, y0, opts.epsilon)?;
    if out.is_empty() {
        bail!("no given section satisfies the (L, alpha) claim");
    }
    Ok(out)
}

fn algebra(opts: &Opts, loader: &mut Loader) -> Result<Vec<Claim>> {
    let alpha = opts.alpha;
    params(opts)?;
    let nq = loader.normed(&opts.space)?;
    let phi = loader.linear_section("--section", &nq, &opts.section)?;
    let eta = loader.linear_section("--section2", &nq, &opts.section2)?;
    let psi = loader.linear_section("--base-section", &nq, &opts.base_section)?;
    let anchor = match &opts.anchor {
        None => 0,
        Some(a) => a.parse::<usize>().with_context(|| format!("--anchor `{a}`: expected a sample index"))?,
    };
    Ok(claims::algebra("", &nq, &phi, &eta, &psi, anchor, alpha, &[opts.t], &[opts.lambda], opts.l)?)
}

fn levelset(opts: &Opts, loader: &mut Loader) -> Result<Vec<Claim>> {
    let b = Base::load(opts, loader)?;
    let f = loader.fibered(&b.space, &opts.fibered)?;
    let z0 = match (&f.values, opts.z0.as_deref()) {
        (FiberedValues::Real(_), None) => Level::Real(0.0),
        (FiberedValues::Real(_), Some(z)) => {
            Level::Real(z.parse::<f64>().with_context(|| format!("--z0 `{z}`: expected a number"))?)
        }
        (FiberedValues::Points { target, .. }, Some(z)) => {
            Level::Point(target.index_of(z).with_context(|| format!("--z0 `{z}`"))?)
        }
        (FiberedValues::Points { .. }, None) => bail!("missing required flag --z0 (a target point id)"),
    };
    Ok(claims::level_set(b.inst(), &f, z0)?)
}

fn extend(opts: &Opts, loader: &mut Loader) -> Result<Vec<Claim>> {
    let b = Base::load(opts, loader)?;
    let f = loader.fibered(&b.space, &opts.fibered)?;
    let FiberedValues::Real(tau) = f.values else {
        bail!("--fibered: extension needs real values");
    };
    let partial = loader.partial_section(&b.space, &b.q, &opts.section)?;
    let rho = b.space.rows();
    let k = ExtensionMachinery::measured_k(&b.space, &b.q, tau.clone(), rho.clone(), opts.alpha)?;
    let m = ExtensionMachinery::new(&b.space, &b.q, tau, rho, k.max(1.0), opts.alpha, opts.l.max(1.0))?;
    Ok(claims::extension(b.inst(), &m, &partial)?)
}

fn regularity(opts: &Opts, loader: &mut Loader) -> Result<(Vec<Claim>, Option<String>)> {
    let p = params(opts)?;
    let b = Base::load(opts, loader)?;
    let phi = b.section(loader, "--section", &opts.section)?;
    let psi = loader.optional_section("--section2", &b.space, &b.q, &opts.section2)?;
    let mu = loader.measure(&b.q, &opts.measure)?;
    let radii = opts.radii()?.unwrap_or_else(|| DEFAULT_RADII.to_vec());
    let center = match &opts.anchor {
        None => phi.at(0),
        Some(a) => b.space.index_of(a).with_context(|| format!("--anchor `{a}`"))?,
    };
    let inst = b.inst();
    let mut out = Vec::new();
    out.extend(claims::ball_inclusion(inst, &phi, p, &radii)?);
    out.push(claims::compatibility(inst, &mu, &radii)?);
    let mut csv = None;
    match claims::ahlfors(inst, &phi, &mu, center, &radii, None) {
        Ok((claim, profile)) => {
            csv = Some(profile.to_csv());
            out.push(claim);
            let ell = profile.fitted_q - 1.0 + p.alpha;
            if let (Some(psi), true) = (&psi, ell > 0.0) {
                out.extend(claims::transfer(inst, &phi, psi, p, &mu, ell, &radii)?);
            }
        }
        Err(Error::DegenerateMasses) => {}
        Err(e) => return Err(e.into()),
    }
    Ok((out, csv))
}
