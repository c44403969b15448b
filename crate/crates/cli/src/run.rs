use std::path::PathBuf;
use std::sync::Arc;

use onofri_core::cr::{
    cr_d_pair, cr_limit_study, cr_mto_pair, cr_sobolev_pair, d_sequence, lambda_j, make_cr_context,
    make_cr_context_default, CrContext, DiskField,
};
use onofri_core::extremal::{multistart, OptimizerOptions, Quotient};
use onofri_core::inequalities::{
    fitted_order, gamma_pair, gamma_sequence, limit_study, mto_pair, sobolev_pair, taylor_remainder_check,
    DeficitRecord, LimitTable, DEFICIT_TOLERANCE,
};
use onofri_core::specfun::gamma_ratio;
use onofri_core::sphere::{analyze, make_context, spectrum_p_endpoint, SphereContext, ZonalField};
use serde::Serialize;
use serde_json::json;

use crate::config::{CommandName, ExperimentConfig, Grid, CR_DEFAULT_FIELD, SPHERE_DEFAULT_FIELD};
use crate::emit::Artifact;
use crate::spec::{parse_field_spec, SpecError, Target};

/// Accepted deviation of a fitted convergence order from 1.
pub const ORDER_TOLERANCE: f64 = 0.3;

/// Errors below this are treated as already converged when fitting orders.
const CONVERGED: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    InvalidInput,
    SharpnessViolation,
    OrderFailure,
    Io,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::InvalidInput => 1,
            Status::SharpnessViolation => 2,
            Status::OrderFailure => 3,
            Status::Io => 4,
        }
    }
}

/// Machine-readable result of one invocation, printed to stdout.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub command: Option<CommandName>,
    pub status: Status,
    pub exit_code: i32,
    pub output: Option<PathBuf>,
    pub message: String,
    pub details: serde_json::Value,
}

impl Summary {
    pub fn failure(command: Option<CommandName>, status: Status, message: impl Into<String>) -> Self {
        Summary {
            command,
            status,
            exit_code: status.code(),
            output: None,
            message: message.into(),
            details: serde_json::Value::Null,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    /// An algebraic or quadrature identity; failure indicates a bug.
    Identity,
    /// Nonnegativity of an inequality deficit.
    Sharpness,
    /// Fitted convergence order or optimizer recovery.
    Order,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub category: Category,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, category: Category, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            category,
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }

    fn at_least(name: impl Into<String>, category: Category, value: f64, floor: f64) -> Self {
        Check {
            name: name.into(),
            category,
            value,
            tolerance: floor,
            pass: value >= floor,
        }
    }
}

/// What a command produced before it is written out.
pub(crate) struct Produced {
    artifact: Artifact,
    status: Status,
    message: String,
    details: serde_json::Value,
}

#[derive(Debug, thiserror::Error)]
enum RunError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Core(#[from] onofri_core::Error),
}

/// Executes `config`, writes the artifact file and returns the summary.
pub fn run_command(config: &ExperimentConfig) -> Summary {
    log::info!("running {} -> {}", config.command.as_str(), config.output.display());
    let produced = match config.command {
        CommandName::SphereVerify => sphere_verify(config),
        CommandName::SphereLimit => sphere_limit(config),
        CommandName::CrVerify => cr_verify(config),
        CommandName::CrLimit => cr_limit(config),
        CommandName::Extremal => extremal(config),
        CommandName::Selftest => Ok(selftest(config)),
    };
    let produced = match produced {
        Ok(p) => p,
        Err(e) => return Summary::failure(Some(config.command), Status::InvalidInput, e.to_string()),
    };
    let bytes = produced.artifact.render(config.format);
    if let Err(e) = write_artifact(&config.output, &bytes) {
        return Summary::failure(
            Some(config.command),
            Status::Io,
            format!("cannot write {}: {e}", config.output.display()),
        );
    }
    Summary {
        command: Some(config.command),
        status: produced.status,
        exit_code: produced.status.code(),
        output: Some(config.output.clone()),
        message: produced.message,
        details: produced.details,
    }
}

fn write_artifact(path: &std::path::Path, bytes: &[u8]) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, bytes)
}

fn sphere_context(config: &ExperimentConfig) -> Result<Arc<SphereContext<f64>>, RunError> {
    let k = config.degree;
    Ok(make_context(config.n, k, config.points.unwrap_or(2 * k + 2))?)
}

fn cr_context(config: &ExperimentConfig) -> Result<Arc<CrContext<f64>>, RunError> {
    let j = config.degree;
    Ok(match config.points {
        Some(radial) => make_cr_context(config.n, j, radial, 4 * j + 2)?,
        None => make_cr_context_default(config.n, j)?,
    })
}

fn sphere_grid(config: &ExperimentConfig) -> Vec<f64> {
    match config.grid {
        Some(Grid::Single(g)) => vec![g],
        Some(Grid::Sequence { gap, refine, steps }) => gamma_sequence(config.n, gap, refine, steps),
        None => Vec::new(),
    }
}

fn cr_grid(config: &ExperimentConfig) -> Vec<f64> {
    match config.grid {
        Some(Grid::Single(d)) => vec![d],
        Some(Grid::Sequence { gap, refine, steps }) => d_sequence(2 * config.n + 2, gap, refine, steps),
        None => Vec::new(),
    }
}

fn field_spec<'a>(config: &'a ExperimentConfig, default: &'a str) -> &'a str {
    config.field.as_deref().unwrap_or(default)
}

fn zonal(spec: &str, ctx: &Arc<SphereContext<f64>>, gamma: Option<f64>) -> Result<ZonalField<f64>, RunError> {
    Ok(parse_field_spec(spec, Target::Sphere { ctx, gamma })?
        .into_zonal()
        .expect("sphere target"))
}

fn disk(spec: &str, ctx: &Arc<CrContext<f64>>) -> Result<DiskField<f64>, RunError> {
    Ok(parse_field_spec(spec, Target::Cr(ctx))?.into_disk().expect("CR target"))
}

pub(crate) fn verdict_for_records(records: Vec<DeficitRecord<f64>>, note: String) -> Produced {
    let min = records.iter().map(|r| r.deficit).fold(f64::INFINITY, f64::min);
    let violated = records.iter().filter(|r| !r.holds(DEFICIT_TOLERANCE)).count();
    let status = if violated > 0 { Status::SharpnessViolation } else { Status::Ok };
    let mut message = if violated > 0 {
        format!("{violated} of {} deficits below -{DEFICIT_TOLERANCE:e}", records.len())
    } else {
        format!("{} deficits, all nonnegative within tolerance", records.len())
    };
    if !note.is_empty() {
        message = format!("{message}; {note}");
    }
    Produced {
        details: json!({ "records": records.len(), "min_deficit": min, "violations": violated }),
        artifact: Artifact::Deficits(records),
        status,
        message,
    }
}

fn sphere_verify(config: &ExperimentConfig) -> Result<Produced, RunError> {
    let ctx = sphere_context(config)?;
    let spec = field_spec(config, SPHERE_DEFAULT_FIELD);
    let mut records = Vec::new();
    for gamma in sphere_grid(config) {
        let v = zonal(spec, &ctx, Some(gamma))?;
        records.push(sobolev_pair(gamma, &v)?.with_field(spec));
    }
    let w = zonal(spec, &ctx, None)?;
    records.push(mto_pair(&w)?.with_field(spec));
    Ok(verdict_for_records(records, String::new()))
}

fn cr_verify(config: &ExperimentConfig) -> Result<Produced, RunError> {
    let ctx = cr_context(config)?;
    let spec = field_spec(config, CR_DEFAULT_FIELD);
    let f = disk(spec, &ctx)?;
    let mut records = Vec::new();
    for d in cr_grid(config) {
        records.push(cr_sobolev_pair(d, &f)?.with_field(spec));
    }
    let note = if f.is_pluriharmonic() {
        records.push(cr_mto_pair(&f)?.with_field(spec));
        String::new()
    } else {
        "MTO skipped: field is not CR-pluriharmonic".to_owned()
    };
    Ok(verdict_for_records(records, note))
}

/// Sharpness and order verdict for a limit table. `deficit_of_row` recovers
/// the Sobolev deficit from `rhs − lhs`.
fn verdict_for_table(table: LimitTable<f64>, deficit_of_row: impl Fn(f64, f64, f64) -> f64) -> Produced {
    let min_deficit = table
        .rows
        .iter()
        .map(|r| deficit_of_row(r.parameter, r.gap, r.rhs - r.lhs))
        .fold(f64::INFINITY, f64::min);
    let converged = table.rows.iter().all(|r| r.lhs_err <= CONVERGED && r.rhs_err <= CONVERGED);
    let order_ok = |o: Option<f64>| o.is_some_and(|o| (o - 1.0).abs() <= ORDER_TOLERANCE);
    let orders_ok = converged || (order_ok(table.lhs_order) && order_ok(table.rhs_order));
    let (status, message) = if min_deficit < -DEFICIT_TOLERANCE {
        (Status::SharpnessViolation, format!("Sobolev deficit {min_deficit:e} is negative"))
    } else if !orders_ok {
        (
            Status::OrderFailure,
            format!(
                "fitted orders {}/{} are outside 1 ± {ORDER_TOLERANCE}",
                describe(table.lhs_order),
                describe(table.rhs_order)
            ),
        )
    } else {
        (Status::Ok, format!("{} rows, fitted orders within 1 ± {ORDER_TOLERANCE}", table.rows.len()))
    };
    Produced {
        details: json!({
            "rows": table.rows.len(),
            "lhs_order": table.lhs_order,
            "rhs_order": table.rhs_order,
            "errors_decreasing": table.errors_decreasing(0),
            "min_deficit": min_deficit,
        }),
        artifact: Artifact::Limit(table),
        status,
        message,
    }
}

fn describe(order: Option<f64>) -> String {
    order.map_or_else(|| "undefined".to_owned(), |o| format!("{o:.4}"))
}

fn sphere_limit(config: &ExperimentConfig) -> Result<Produced, RunError> {
    let ctx = sphere_context(config)?;
    let w = zonal(field_spec(config, SPHERE_DEFAULT_FIELD), &ctx, None)?;
    let table = limit_study(&w, &sphere_grid(config))?;
    Ok(verdict_for_table(table, |_, gap, diff| diff * gap * gap / 4.0))
}

fn cr_limit(config: &ExperimentConfig) -> Result<Produced, RunError> {
    let ctx = cr_context(config)?;
    let q = ctx.q();
    let f = disk(field_spec(config, CR_DEFAULT_FIELD), &ctx)?;
    let table = cr_limit_study(&f, &cr_grid(config))?;
    Ok(verdict_for_table(table, |d, gap, diff| {
        diff * gap * gap * lambda_j(d, 0, q).unwrap_or(f64::NAN) / 4.0
    }))
}

fn extremal(config: &ExperimentConfig) -> Result<Produced, RunError> {
    let ctx = sphere_context(config)?;
    let Some(Grid::Single(gamma)) = config.grid else {
        unreachable!("validated config carries a single gamma")
    };
    let opts = OptimizerOptions {
        max_iterations: config.max_iterations,
        ..OptimizerOptions::default()
    };
    let report = multistart(&ctx, gamma, config.starts, config.seed, &opts)?;
    let sharp = report.best.sharp_constant;
    let lowest = report
        .runs
        .iter()
        .flat_map(|r| r.trace.iter().copied().chain([r.final_value]))
        .fold(f64::INFINITY, f64::min);
    let relative_gap = (report.best.final_value - sharp) / sharp;
    let (status, message) = if lowest < sharp - DEFICIT_TOLERANCE {
        (
            Status::SharpnessViolation,
            format!("quotient {lowest} fell below the sharp constant {sharp}"),
        )
    } else {
        (Status::Ok, format!("best quotient exceeds the sharp constant by {relative_gap:e} (relative)"))
    };
    Ok(Produced {
        details: json!({
            "best": report.best.final_value,
            "sharp_constant": sharp,
            "relative_gap": relative_gap,
            "lowest_iterate": lowest,
        }),
        artifact: Artifact::Extremal(report),
        status,
        message,
    })
}

fn limit_field(ctx: &Arc<SphereContext<f64>>) -> ZonalField<f64> {
    let mut coeffs = vec![0.0; ctx.degree() + 1];
    coeffs[1] = 0.5;
    coeffs[3] = 0.3;
    ZonalField::from_coeffs(ctx, &coeffs).expect("degree at least 3")
}

fn order_deviation(order: Option<f64>) -> f64 {
    order.map_or(f64::INFINITY, |o| (o - 1.0).abs())
}

/// Invariant suite. Core failures are recorded as failed checks.
fn selftest(config: &ExperimentConfig) -> Produced {
    let mut checks = Vec::new();
    let seed = config.seed;
    let failed = |name: &str, e: onofri_core::Error| Check {
        name: format!("{name}: {e}"),
        category: Category::Identity,
        value: f64::NAN,
        tolerance: 0.0,
        pass: false,
    };
    macro_rules! attempt {
        ($name:expr, $body:expr) => {
            match (|| -> onofri_core::Result<Vec<Check>> { $body })() {
                Ok(found) => checks.extend(found),
                Err(e) => checks.push(failed($name, e)),
            }
        };
    }

    attempt!("sphere-identities", {
        let mut out = Vec::new();
        let (mut gram, mut round_trip, mut constants) = (0.0f64, 0.0f64, 0.0f64);
        for n in 1..=4 {
            let ctx = make_context(n, 32, 66)?;
            gram = gram.max(ctx.gram_error());
            let f = ZonalField::random(&ctx, 32, seed);
            let back = analyze(&ctx, &f.values_at_nodes())?;
            for (a, b) in f.coeffs().iter().zip(back.coeffs()) {
                round_trip = round_trip.max((a - b).abs());
            }
            for frac in [0.2, 0.5, 0.9] {
                let c = ZonalField::constant(&ctx, 1.0);
                constants = constants.max(sobolev_pair(frac * n as f64 / 2.0, &c)?.deficit.abs());
                constants = constants.max(mto_pair(&c)?.deficit.abs());
            }
        }
        let s2 = spectrum_p_endpoint(&*make_context::<f64>(2, 64, 130)?);
        let spectrum = (1..=64usize)
            .map(|k| {
                let exact = (k * (k + 1)) as f64;
                (s2.eigenvalues[k] - exact).abs() / exact
            })
            .fold(0.0, f64::max);
        out.push(Check::at_most("sphere-gram", Category::Identity, gram, 1e-11));
        out.push(Check::at_most("sphere-round-trip", Category::Identity, round_trip, 1e-12));
        out.push(Check::at_most("constant-equality", Category::Identity, constants, 1e-10));
        out.push(Check::at_most("endpoint-spectrum-s2", Category::Identity, spectrum, 1e-12));
        Ok(out)
    });

    attempt!("sphere-deficits", {
        let (mut sobolev, mut mto) = (f64::INFINITY, f64::INFINITY);
        for n in 1..=4 {
            let ctx = make_context(n, 16, 34)?;
            for frac in [0.2, 0.5, 0.9] {
                for s in 0..20 {
                    let w = ZonalField::random(&ctx, 16, seed.wrapping_add(s));
                    let lowest = ctx.nodes().iter().map(|&x| w.eval(x)).fold(f64::INFINITY, f64::min);
                    let v = w.plus_constant(lowest.abs() + 0.5);
                    sobolev = sobolev.min(sobolev_pair(frac * n as f64 / 2.0, &v)?.deficit);
                    mto = mto.min(mto_pair(&w)?.deficit);
                }
            }
        }
        Ok(vec![
            Check::at_least("sobolev-deficit-min", Category::Sharpness, sobolev, -DEFICIT_TOLERANCE),
            Check::at_least("mto-deficit-min", Category::Sharpness, mto, -DEFICIT_TOLERANCE),
        ])
    });

    attempt!("sphere-limit", {
        let mut out = Vec::new();
        for n in 1..=3usize {
            let ctx = make_context(n, 32, 66)?;
            let w = limit_field(&ctx);
            let gammas = gamma_sequence(n, 0.4, 2.0, 8);
            let table = limit_study(&w, &gammas)?;
            let mut bridge = 0.0f64;
            for &g in &gammas {
                let pair = gamma_pair(g, &w)?;
                let gap = n as f64 - 2.0 * g;
                bridge = bridge.max(((pair.rhs - pair.lhs) - 4.0 / (gap * gap) * pair.sobolev.deficit).abs());
            }
            let mut taylor = (0.0f64, f64::INFINITY, 0.0f64);
            for gap in [0.8, 0.4, 0.1] {
                let t = taylor_remainder_check((n as f64 - gap) / 2.0, &w)?;
                taylor = (taylor.0.max(t.representation_error), taylor.1.min(t.sup), taylor.2.max(t.sup));
            }
            let deviation = order_deviation(table.lhs_order).max(order_deviation(table.rhs_order));
            out.push(Check::at_most(format!("sphere-bridge-n{n}"), Category::Identity, bridge, 1e-12));
            out.push(Check::at_most(format!("sphere-order-n{n}"), Category::Order, deviation, ORDER_TOLERANCE));
            out.push(Check::at_most(format!("taylor-representation-n{n}"), Category::Identity, taylor.0, 1e-10));
            out.push(Check::at_most(format!("taylor-sup-ratio-n{n}"), Category::Order, taylor.2 / taylor.1, 1.5));
        }
        Ok(out)
    });

    attempt!("cr", {
        let mut out = Vec::new();
        let (mut gram, mut identity, mut endpoint) = (0.0f64, 0.0f64, 0.0f64);
        for n in 1..=3usize {
            let q = 2 * n + 2;
            gram = gram.max(make_cr_context_default::<f64>(n, 16)?.gram_error());
            let nf = n as f64;
            for j in 0..=16usize {
                for k in 0..=16usize {
                    let (jf, kf) = (j as f64, k as f64);
                    let exact = jf * kf + nf / 2.0 * (jf + kf) + nf * nf / 4.0;
                    let prod = lambda_j(2.0, j, q)? * lambda_j(2.0, k, q)?;
                    identity = identity.max((prod - exact).abs() / exact);
                }
            }
            let eps: Vec<f64> = (1..=8).map(|m| 0.8 * 0.5f64.powi(m)).collect();
            for j in 1..=16usize {
                let target: f64 = (0..=n).map(|l| (j + l) as f64).product();
                let errs = eps
                    .iter()
                    .map(|&e| Ok((lambda_j(q as f64 - e, j, q)? - target).abs()))
                    .collect::<onofri_core::Result<Vec<f64>>>()?;
                endpoint = endpoint.max(order_deviation(fitted_order(&eps, &errs)));
            }
        }
        let ctx = make_cr_context_default::<f64>(1, 16)?;
        let f = DiskField::pluri(&ctx, 1, 0.4, 0.0)?;
        let ds = d_sequence(4, 0.8, 2.0, 8);
        let table = cr_limit_study(&f, &ds)?;
        let mut bridge = 0.0f64;
        for &d in &ds {
            let pair = cr_d_pair(d, &f)?;
            let gap = 4.0 - d;
            let bridged = 4.0 / (gap * gap) / lambda_j(d, 0, 4)? * pair.sobolev.deficit;
            bridge = bridge.max(((pair.rhs - pair.lhs) - bridged).abs());
        }
        let mut mto = f64::INFINITY;
        for s in 0..50 {
            mto = mto.min(cr_mto_pair(&DiskField::random_pluriharmonic(&ctx, 16, seed.wrapping_add(s)))?.deficit);
        }
        let deviation = order_deviation(table.lhs_order).max(order_deviation(table.rhs_order));
        out.push(Check::at_most("cr-gram", Category::Identity, gram, 1e-11));
        out.push(Check::at_most("sub-laplacian-identity", Category::Identity, identity, 1e-10));
        out.push(Check::at_most("aprime-endpoint-order", Category::Order, endpoint, ORDER_TOLERANCE));
        out.push(Check::at_most("cr-order", Category::Order, deviation, ORDER_TOLERANCE));
        out.push(Check::at_most("cr-bridge", Category::Identity, bridge, 1e-12));
        out.push(Check::at_least("cr-mto-deficit-min", Category::Sharpness, mto, -DEFICIT_TOLERANCE));
        Ok(out)
    });

    attempt!("extremal", {
        let mut gradient = 0.0f64;
        let ctx = make_context(3, 10, 22)?;
        let quotient = Quotient::new(&ctx, 1.0)?;
        for s in 0..10 {
            let x = ZonalField::random(&ctx, 10, seed.wrapping_add(s)).plus_constant(1.5);
            let x = x.coeffs();
            let (_, grad) = quotient.value_and_gradient(x)?;
            let h = 1e-6;
            let (mut diff, mut size) = (0.0f64, 0.0f64);
            for (k, g) in grad.iter().enumerate() {
                let (mut up, mut down) = (x.to_vec(), x.to_vec());
                up[k] += h;
                down[k] -= h;
                let fd = (quotient.value(&up)? - quotient.value(&down)?) / (2.0 * h);
                diff += (fd - g) * (fd - g);
                size += g * g;
            }
            gradient = gradient.max((diff / size).sqrt());
        }
        let ctx = make_context(2, 16, 34)?;
        let report = multistart(&ctx, 0.5, 5, seed, &OptimizerOptions::default())?;
        let sharp = gamma_ratio(1.5, 0.5)?;
        let lowest = report
            .runs
            .iter()
            .flat_map(|r| r.trace.iter().copied().chain([r.final_value]))
            .fold(f64::INFINITY, f64::min);
        Ok(vec![
            Check::at_most("quotient-gradient", Category::Identity, gradient, 1e-5),
            Check::at_least("quotient-floor", Category::Sharpness, lowest, sharp - DEFICIT_TOLERANCE),
            Check::at_most(
                "sharp-constant-recovery",
                Category::Order,
                (report.best.final_value - sharp).abs() / sharp,
                5e-3,
            ),
        ])
    });

    let failing: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    let status = if failing.iter().any(|c| c.category != Category::Order) {
        Status::SharpnessViolation
    } else if !failing.is_empty() {
        Status::OrderFailure
    } else {
        Status::Ok
    };
    let message = if failing.is_empty() {
        format!("all {} checks passed", checks.len())
    } else {
        let names: Vec<&str> = failing.iter().map(|c| c.name.as_str()).collect();
        format!("{} of {} checks failed: {}", failing.len(), checks.len(), names.join(", "))
    };
    Produced {
        details: json!({ "checks": checks.len(), "failed": failing.len() }),
        artifact: Artifact::Checks(checks),
        status,
        message,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use onofri_core::inequalities::InequalityKind;
    use onofri_core::sphere::QuadDiagnostics;

    fn record(deficit: f64) -> DeficitRecord<f64> {
        DeficitRecord {
            kind: InequalityKind::SphereMto,
            n: 2,
            parameter: None,
            lhs: 1.0,
            rhs: 1.0 + deficit,
            deficit,
            field: "const:1".into(),
            diagnostics: QuadDiagnostics {
                points: 10,
                last_rel_change: 0.0,
                capped: false,
            },
        }
    }

    #[test]
    fn negative_deficit_is_a_sharpness_violation() {
        let bad = verdict_for_records(vec![record(0.1), record(-1e-6)], String::new());
        assert_eq!(bad.status, Status::SharpnessViolation);
        assert_eq!(bad.status.code(), 2);
        let noise = verdict_for_records(vec![record(-1e-12)], String::new());
        assert_eq!(noise.status, Status::Ok);
    }

    #[test]
    fn exit_codes() {
        let codes: Vec<i32> = [
            Status::Ok,
            Status::InvalidInput,
            Status::SharpnessViolation,
            Status::OrderFailure,
            Status::Io,
        ]
        .iter()
        .map(|s| s.code())
        .collect();
        assert_eq!(codes, vec![0, 1, 2, 3, 4]);
    }
}
