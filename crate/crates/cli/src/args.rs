use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "ihg", version, about = "Verify intrinsically Hölder sections of quotient maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Metric, quotient and section invariants.
    Validate,
    /// The intrinsic (L, alpha) inequality for one section.
    Check,
    /// Minimal intrinsic and global constants.
    Fit,
    /// Intrinsic cones and their avoidance by a section.
    Cones,
    /// Relations between sections sharing an anchor.
    Relate,
    /// Continuity, equiboundedness, openness and limits of a family.
    Family,
    /// Combinations, sums and scalings of sections of a linear quotient.
    Algebra,
    /// The section cut out by a level set of a fibered function.
    Levelset,
    /// Extend a partial section to the zero set of a function.
    Extend,
    /// Ball inclusions, measure compatibility and Ahlfors regularity.
    Regularity,
    /// Every check over the bundled fixtures.
    Suite,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Check => "check",
            Command::Fit => "fit",
            Command::Cones => "cones",
            Command::Relate => "relate",
            Command::Family => "family",
            Command::Algebra => "algebra",
            Command::Levelset => "levelset",
            Command::Extend => "extend",
            Command::Regularity => "regularity",
            Command::Suite => "suite",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// Metric space (JSON, or CSV distance matrix with a `.csv` extension).
    /// For `algebra`, the normed quotient.
    #[arg(long, global = true)]
    pub space: Option<PathBuf>,
    #[arg(long, global = true)]
    pub quotient: Option<PathBuf>,
    #[arg(long, global = true)]
    pub section: Option<PathBuf>,
    #[arg(long, global = true)]
    pub section2: Option<PathBuf>,
    #[arg(long = "base-section", global = true)]
    pub base_section: Option<PathBuf>,
    #[arg(long, global = true)]
    pub measure: Option<PathBuf>,
    #[arg(long, global = true)]
    pub fibered: Option<PathBuf>,
    #[arg(long = "L", global = true, default_value_t = 1.0)]
    pub l: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    pub alpha: f64,
    /// Combination weight.
    #[arg(long, global = true, default_value_t = 0.5)]
    pub t: f64,
    /// Scaling factor.
    #[arg(long, global = true, default_value_t = 2.0, allow_hyphen_values = true)]
    pub lambda: f64,
    /// Level value (a number, or a target point id).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z0: Option<String>,
    /// Anchor: a point id for `cones`, a fiber id or sample index elsewhere.
    #[arg(long, global = true)]
    pub anchor: Option<String>,
    /// Comma-separated radii.
    #[arg(long, global = true)]
    pub rgrid: Option<String>,
    /// Relative slack tolerance (defaults to 0 on integer tables, 1e-9 otherwise).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Continuity and openness radius parameter.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub epsilon: f64,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl Opts {
    /// Parameters that enter the digest, with paths left out.
    pub fn canonical(&self) -> String {
        format!(
            "L={:e};alpha={:e};t={:e};lambda={:e};z0={:?};anchor={:?};rgrid={:?};tol={:?};epsilon={:e}",
            self.l, self.alpha, self.t, self.lambda, self.z0, self.anchor, self.rgrid, self.tol, self.epsilon
        )
    }

    pub fn radii(&self) -> anyhow::Result<Option<Vec<f64>>> {
        let Some(raw) = &self.rgrid else { return Ok(None) };
        raw.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|e| anyhow::anyhow!("--rgrid: `{s}`: {e}")))
            .collect::<anyhow::Result<Vec<_>>>()
            .map(Some)
    }
}
