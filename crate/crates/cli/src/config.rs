use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use onofri_core::inequalities::ENDPOINT_GUARD;
use serde::Serialize;

use crate::emit::Format;
use crate::spec::{FieldSpec, SpecError};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "ONOFRI_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "onofri", version, about = "Spectral experiments for sharp Sobolev and Moser-Trudinger-Onofri inequalities on S^n and the CR sphere")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sobolev and MTO deficits of one field on S^n.
    SphereVerify(SphereArgs),
    /// Convergence table of the rescaled Sobolev functionals toward MTO on S^n.
    SphereLimit(SphereArgs),
    /// Sobolev and MTO deficits of one field on the CR sphere.
    CrVerify(CrArgs),
    /// Convergence table of the CR functionals toward the CR MTO inequality.
    CrLimit(CrArgs),
    /// Multistart minimization of the Sobolev quotient on S^n.
    Extremal(ExtremalArgs),
    /// Runs the invariant suite.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Dimension parameter: S^n, or the CR sphere S^{2n+1}.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Truncation degree (K on S^n, J on the CR sphere).
    #[arg(short = 'K', long = "degree")]
    pub degree: Option<usize>,
    /// Base quadrature size (Gauss points on S^n, radial points on the CR sphere).
    #[arg(short = 'M', long = "points")]
    pub points: Option<usize>,
    /// Test-function spec, e.g. `sum:1:0.5,3:0.3`.
    #[arg(long)]
    pub field: Option<String>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file. Defaults to `<name>.<format>` in $ONOFRI_OUT_DIR or the
    /// working directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Base name of the output file; defaults to the command name.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args)]
pub struct SphereArgs {
    #[command(flatten)]
    pub common: Common,
    /// Single γ in (0, n/2).
    #[arg(long, conflicts_with = "gamma_gap")]
    pub gamma: Option<f64>,
    /// Grid γ_m = n/2 − gap·refine^{−m}, m = 1..steps.
    #[arg(long)]
    pub gamma_gap: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub refine: f64,
    #[arg(long, default_value_t = 8)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct CrArgs {
    #[command(flatten)]
    pub common: Common,
    /// Single d in (0, Q), Q = 2n + 2.
    #[arg(long, conflicts_with = "d_gap")]
    pub d: Option<f64>,
    /// Grid d_m = Q − gap·refine^{−m}, m = 1..steps.
    #[arg(long)]
    pub d_gap: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub refine: f64,
    #[arg(long, default_value_t = 8)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct ExtremalArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(short = 'K', long = "degree", default_value_t = 16)]
    pub degree: usize,
    #[arg(short = 'M', long = "points")]
    pub points: Option<usize>,
    #[arg(long)]
    pub gamma: f64,
    /// Number of random starts; start i uses seed `seed + i`.
    #[arg(long, default_value_t = 5)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5000)]
    pub max_iterations: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Base seed for the random fields.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    SphereVerify,
    SphereLimit,
    CrVerify,
    CrLimit,
    Extremal,
    Selftest,
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::SphereVerify => "sphere-verify",
            CommandName::SphereLimit => "sphere-limit",
            CommandName::CrVerify => "cr-verify",
            CommandName::CrLimit => "cr-limit",
            CommandName::Extremal => "extremal",
            CommandName::Selftest => "selftest",
        }
    }
}

/// A `γ` or `d` selection.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Grid {
    Single(f64),
    Sequence { gap: f64, refine: f64, steps: usize },
}

/// A validated command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: CommandName,
    pub n: usize,
    pub grid: Option<Grid>,
    pub degree: usize,
    pub points: Option<usize>,
    pub field: Option<String>,
    pub seed: u64,
    pub starts: usize,
    pub max_iterations: usize,
    pub format: Format,
    pub output: PathBuf,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

fn invalid(message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(message.into())
}

pub const SPHERE_DEFAULT_FIELD: &str = "sum:1:0.5,3:0.3";
pub const CR_DEFAULT_FIELD: &str = "pluri:1:0.4:0";

impl ExperimentConfig {
    /// Validates parsed arguments. `out_dir` is the default output directory
    /// (normally `$ONOFRI_OUT_DIR`).
    pub fn from_cli(cli: Cli, out_dir: Option<&Path>) -> Result<Self, ConfigError> {
        let blank = |command, n, output: Output| ExperimentConfig {
            command,
            n,
            grid: None,
            degree: 0,
            points: None,
            field: None,
            seed: 0,
            starts: 0,
            max_iterations: 0,
            format: output.format,
            output: output_path(command, &output, out_dir),
        };
        let config = match cli.command {
            Command::SphereVerify(a) => sphere(CommandName::SphereVerify, a, blank)?,
            Command::SphereLimit(a) => sphere(CommandName::SphereLimit, a, blank)?,
            Command::CrVerify(a) => cr(CommandName::CrVerify, a, blank)?,
            Command::CrLimit(a) => cr(CommandName::CrLimit, a, blank)?,
            Command::Extremal(a) => {
                check_n(a.n)?;
                check_gamma(a.n, a.gamma)?;
                if a.starts == 0 {
                    return Err(invalid("--starts must be at least 1"));
                }
                check_degree(a.degree)?;
                ExperimentConfig {
                    grid: Some(Grid::Single(a.gamma)),
                    degree: a.degree,
                    points: a.points,
                    seed: a.seed,
                    starts: a.starts,
                    max_iterations: a.max_iterations,
                    ..blank(CommandName::Extremal, a.n, a.output)
                }
            }
            Command::Selftest(a) => ExperimentConfig {
                seed: a.seed,
                ..blank(CommandName::Selftest, 0, a.output)
            },
        };
        Ok(config)
    }
}

fn output_path(command: CommandName, output: &Output, out_dir: Option<&Path>) -> PathBuf {
    if let Some(path) = &output.out {
        return path.clone();
    }
    let name = output.name.as_deref().unwrap_or(command.as_str());
    let file = format!("{name}.{}", output.format.extension());
    out_dir.map_or_else(|| PathBuf::from(&file), |dir| dir.join(&file))
}

fn check_n(n: usize) -> Result<(), ConfigError> {
    if n == 0 {
        return Err(invalid("--n must be at least 1"));
    }
    Ok(())
}

fn check_degree(degree: usize) -> Result<(), ConfigError> {
    if degree == 0 {
        return Err(invalid("-K must be at least 1"));
    }
    Ok(())
}

fn check_gamma(n: usize, gamma: f64) -> Result<(), ConfigError> {
    let half = n as f64 / 2.0;
    if !(gamma > 0.0 && gamma < half) {
        return Err(invalid(format!("--gamma must lie in (0, {half}), got {gamma}")));
    }
    if n as f64 - 2.0 * gamma < ENDPOINT_GUARD {
        return Err(invalid(format!(
            "--gamma {gamma} is within the endpoint guard: n − 2γ must be at least {ENDPOINT_GUARD}"
        )));
    }
    Ok(())
}

/// Validates a geometric grid `endpoint − gap·refine^{−m}` whose distance to
/// the endpoint is `scale · gap · refine^{−m}`.
fn check_sequence(flag: &str, endpoint: f64, gap: f64, refine: f64, steps: usize, scale: f64) -> Result<Grid, ConfigError> {
    if !(gap > 0.0 && gap.is_finite()) {
        return Err(invalid(format!("{flag} must be positive, got {gap}")));
    }
    if !(refine > 1.0 && refine.is_finite()) {
        return Err(invalid(format!("--refine must exceed 1, got {refine}")));
    }
    if steps == 0 {
        return Err(invalid("--steps must be at least 1"));
    }
    if endpoint - gap / refine <= 0.0 {
        return Err(invalid(format!("{flag} {gap} puts the first grid point at or below 0")));
    }
    let last = scale * gap * refine.powi(-(steps as i32));
    if last < ENDPOINT_GUARD {
        return Err(invalid(format!(
            "grid reaches endpoint distance {last:e}, below the guard {ENDPOINT_GUARD}"
        )));
    }
    Ok(Grid::Sequence { gap, refine, steps })
}

fn check_field(spec: Option<String>) -> Result<Option<String>, ConfigError> {
    if let Some(s) = &spec {
        FieldSpec::parse(s)?;
    }
    Ok(spec)
}

fn sphere(
    command: CommandName,
    a: SphereArgs,
    blank: impl FnOnce(CommandName, usize, Output) -> ExperimentConfig,
) -> Result<ExperimentConfig, ConfigError> {
    let n = a.common.n;
    check_n(n)?;
    let half = n as f64 / 2.0;
    let grid = match (a.gamma, a.gamma_gap) {
        (Some(g), _) => {
            if command == CommandName::SphereLimit {
                return Err(invalid("sphere-limit takes a grid (--gamma-gap), not a single --gamma"));
            }
            check_gamma(n, g)?;
            Grid::Single(g)
        }
        (None, Some(gap)) => check_sequence("--gamma-gap", half, gap, a.refine, a.steps, 2.0)?,
        (None, None) if command == CommandName::SphereLimit => {
            check_sequence("--gamma-gap", half, 0.4f64.min(half / 2.0), a.refine, a.steps, 2.0)?
        }
        (None, None) => return Err(invalid("sphere-verify needs --gamma or --gamma-gap")),
    };
    finish(command, a.common, grid, 32, blank)
}

fn cr(
    command: CommandName,
    a: CrArgs,
    blank: impl FnOnce(CommandName, usize, Output) -> ExperimentConfig,
) -> Result<ExperimentConfig, ConfigError> {
    let n = a.common.n;
    check_n(n)?;
    let q = (2 * n + 2) as f64;
    let grid = match (a.d, a.d_gap) {
        (Some(d), _) => {
            if command == CommandName::CrLimit {
                return Err(invalid("cr-limit takes a grid (--d-gap), not a single --d"));
            }
            if !(d > 0.0 && d < q) {
                return Err(invalid(format!("--d must lie in (0, {q}), got {d}")));
            }
            if q - d < ENDPOINT_GUARD {
                return Err(invalid(format!(
                    "--d {d} is within the endpoint guard: Q − d must be at least {ENDPOINT_GUARD}"
                )));
            }
            Grid::Single(d)
        }
        (None, Some(gap)) => check_sequence("--d-gap", q, gap, a.refine, a.steps, 1.0)?,
        (None, None) if command == CommandName::CrLimit => check_sequence("--d-gap", q, 0.8, a.refine, a.steps, 1.0)?,
        (None, None) => return Err(invalid("cr-verify needs --d or --d-gap")),
    };
    finish(command, a.common, grid, 16, blank)
}

fn finish(
    command: CommandName,
    common: Common,
    grid: Grid,
    default_degree: usize,
    blank: impl FnOnce(CommandName, usize, Output) -> ExperimentConfig,
) -> Result<ExperimentConfig, ConfigError> {
    let degree = common.degree.unwrap_or(default_degree);
    check_degree(degree)?;
    Ok(ExperimentConfig {
        grid: Some(grid),
        degree,
        points: common.points,
        field: check_field(common.field)?,
        ..blank(command, common.n, common.output)
    })
}
