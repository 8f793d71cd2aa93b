//! Command-line front end for `twotype-core`.
//!
//! Every subcommand parses flags, calls the library and formats the result.
//! Exit codes: 0 success, 1 validation failure, 2 usage error, 3 numerical
//! error.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use twotype_core::asymptotics::{extinction_curve, extinction_fixed_point, CurveMethod};
use twotype_core::model::classify;
use twotype_core::moments::expected_counts;
use twotype_core::oracle::{invert_pgf, sample_final_states, simulate_replicate, Caps};
use twotype_core::pgf::{backward_residual, evaluate, Method};
use twotype_core::specfun::identity_suite;
use twotype_core::{ComplexValue, ModelParams};

mod validate;

pub use validate::{cross_validate, CaseKind, CaseStatus, Suite, ValidationCase, ValidationReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{}: {source} ({params})", source.name())]
    Numerical {
        source: twotype_core::Error,
        params: String,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("output error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numerical { .. } | CliError::Io(_) => 3,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Invalid parameters are the caller's fault; everything else is numerical.
fn numerical(params: impl std::fmt::Display) -> impl FnOnce(twotype_core::Error) -> CliError {
    move |source| match source {
        twotype_core::Error::InvalidParameter(msg) => CliError::Usage(msg),
        source => CliError::Numerical {
            source,
            params: params.to_string(),
        },
    }
}

#[derive(Debug, Parser)]
#[command(name = "twotype", version, about = "Two-type stem/committed cell branching process")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long = "lambda-a")]
    lambda_a: Option<f64>,
    #[arg(long = "lambda-b")]
    lambda_b: Option<f64>,
    /// key=value file with alpha, p, lambda_a, lambda_b; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
}

impl ParamArgs {
    fn resolve(&self) -> CliResult<ModelParams> {
        let base = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
                Some(ModelParams::from_key_values(&text).map_err(|e| CliError::Usage(e.to_string()))?)
            }
            None => None,
        };
        let alpha = self.alpha.or(base.map(|b| b.alpha()));
        let p = self.p.or(base.map(|b| b.p()));
        let (Some(alpha), Some(p)) = (alpha, p) else {
            return Err(CliError::Usage("--alpha and --p are required (or --config)".into()));
        };
        let lambda_a = self.lambda_a.or(base.map(|b| b.lambda_a())).unwrap_or(1.0);
        let lambda_b = self.lambda_b.or(base.map(|b| b.lambda_b())).unwrap_or(1.0);
        ModelParams::new(alpha, p, lambda_a, lambda_b).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PgfMethod {
    Closed,
    Ode,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExtinctionMethod {
    Exact,
    Asymptotic,
    Ode,
    Mc,
    FixedPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Summary,
    Trajectories,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Criticality of each type and the applicable closed form
    Classify {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Expected cell counts over a time grid
    Moments {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// start:stop:steps
        #[arg(long = "t-grid", default_value = "0:10:11")]
        t_grid: String,
    },
    /// Joint generating function F_A(x, y, t) for real x, y in [0, 1]
    Pgf {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum, default_value = "auto")]
        method: PgfMethod,
    },
    /// Extinction probability E(t) over a time grid
    Extinction {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_enum, default_value = "exact")]
        method: ExtinctionMethod,
        /// start:stop:steps
        #[arg(long = "t-grid", default_value = "0:10:11")]
        t_grid: String,
        /// replicates per time point for --method mc
        #[arg(long, default_value_t = 10_000)]
        replicates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact stochastic simulation
    Simulate {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, default_value_t = 1)]
        replicates: usize,
        #[arg(long = "t-max")]
        t_max: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// max_cells,max_events
        #[arg(long)]
        caps: Option<String>,
        #[arg(long, value_enum, default_value = "summary")]
        emit: Emit,
    },
    /// Joint probability mass function by lattice inversion
    Invert {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        t: f64,
        #[arg(long = "j-max", default_value_t = 15)]
        j_max: usize,
        #[arg(long = "k-max", default_value_t = 15)]
        k_max: usize,
    },
    /// Special-function identity checks
    Selftest {
        #[command(flatten)]
        output: OutputArgs,
        /// run the special-function suite (the only suite available)
        #[arg(long)]
        specfun: bool,
    },
    /// Cross-validate closed forms, the ODE oracle and simulation
    Validate {
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_enum, default_value = "quick")]
        suite: Suite,
    },
}

/// Parses `args` (including the program name) and runs one subcommand,
/// writing results to `out` (or `--out`) and diagnostics to `err`.
pub fn run_command<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let CliError::Usage(_) = e {
                let _ = writeln!(err, "\n{}", Cli::command().render_usage());
            }
            e.exit_code()
        }
    }
}

/// Buffers output so `--out` files are only created on success.
fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(path) => {
            let mut f =
                File::create(path).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", path.display())))?;
            f.write_all(text.as_bytes())?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult<()> {
    let (text, output, verdict) = match command {
        Command::Classify { params, output } => (classify_cmd(&params, &output)?, output, Ok(())),
        Command::Moments { params, output, t_grid } => (moments_cmd(&params, &output, &t_grid)?, output, Ok(())),
        Command::Pgf {
            params,
            output,
            x,
            y,
            t,
            method,
        } => (pgf_cmd(&params, &output, x, y, t, method)?, output, Ok(())),
        Command::Extinction {
            params,
            output,
            method,
            t_grid,
            replicates,
            seed,
        } => (
            extinction_cmd(&params, &output, method, &t_grid, replicates, seed)?,
            output,
            Ok(()),
        ),
        Command::Simulate {
            params,
            output,
            replicates,
            t_max,
            seed,
            caps,
            emit,
        } => (
            simulate_cmd(&params, &output, replicates, t_max, seed, caps.as_deref(), emit)?,
            output,
            Ok(()),
        ),
        Command::Invert {
            params,
            output,
            t,
            j_max,
            k_max,
        } => (invert_cmd(&params, &output, t, j_max, k_max)?, output, Ok(())),
        Command::Selftest { output, specfun: _ } => {
            let (text, verdict) = selftest_cmd(&output)?;
            (text, output, verdict)
        }
        Command::Validate { output, suite } => {
            let (text, verdict) = validate_cmd(&output, suite)?;
            (text, output, verdict)
        }
    };
    emit(out, output.out.as_deref(), &text)?;
    verdict
}

/// `re+imi` with shortest round-trip parts.
pub fn complex_string(v: ComplexValue) -> String {
    if v.im.is_sign_negative() {
        format!("{:?}-{:?}i", v.re, -v.im)
    } else {
        format!("{:?}+{:?}i", v.re, v.im)
    }
}

fn json_text(value: &impl Serialize) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    s.push('\n');
    Ok(s)
}

/// Parses `start:stop:steps` into `steps` evenly spaced times.
fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Usage(format!("--t-grid expects start:stop:steps, got {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, steps] = parts.as_slice() else {
        return Err(bad());
    };
    let start: f64 = start.trim().parse().map_err(|_| bad())?;
    let stop: f64 = stop.trim().parse().map_err(|_| bad())?;
    let steps: usize = steps.trim().parse().map_err(|_| bad())?;
    if steps == 0 || !(start >= 0.0 && stop >= start && stop.is_finite()) {
        return Err(bad());
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    let dt = (stop - start) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| if k + 1 == steps { stop } else { start + dt * k as f64 })
        .collect())
}

fn parse_caps(spec: Option<&str>) -> CliResult<Caps> {
    let Some(spec) = spec else {
        return Ok(Caps::default());
    };
    let bad = || CliError::Usage(format!("--caps expects max_cells,max_events, got {spec:?}"));
    let (cells, events) = spec.split_once(',').ok_or_else(bad)?;
    // accept 1e7-style input
    let count = |s: &str| -> CliResult<u64> {
        let v: f64 = s.trim().parse().map_err(|_| bad())?;
        if v >= 1.0 && v.fract() == 0.0 && v < u64::MAX as f64 {
            Ok(v as u64)
        } else {
            Err(bad())
        }
    };
    Ok(Caps {
        max_cells: count(cells)?,
        max_events: count(events)?,
    })
}

fn classify_cmd(params: &ParamArgs, output: &OutputArgs) -> CliResult<String> {
    let m = params.resolve()?;
    let regime = classify(&m);
    match output.format.unwrap_or(Format::Csv) {
        Format::Csv => Ok(format!("{}\n", regime.theorem_branch.label())),
        Format::Json => json_text(&regime),
    }
}

fn moments_cmd(params: &ParamArgs, output: &OutputArgs, grid: &str) -> CliResult<String> {
    let m = params.resolve()?;
    let rows: Vec<_> = parse_grid(grid)?.into_iter().map(|t| expected_counts(&m, t)).collect();
    match output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("t,E_A,E_B\n");
            for r in rows {
                s += &format!("{:?},{:?},{:?}\n", r.t, r.e_a, r.e_b);
            }
            Ok(s)
        }
        Format::Json => json_text(&rows),
    }
}

fn pgf_cmd(params: &ParamArgs, output: &OutputArgs, x: f64, y: f64, t: f64, method: PgfMethod) -> CliResult<String> {
    let m = params.resolve()?;
    if !((0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y)) {
        return Err(CliError::Usage(format!("x = {x} and y = {y} must lie in [0, 1]")));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(CliError::Usage(format!("t = {t} must be finite and >= 0")));
    }
    let method = match method {
        PgfMethod::Closed => Method::ClosedForm,
        PgfMethod::Ode => Method::Oracle,
        PgfMethod::Auto => Method::Auto,
    };
    let (cx, cy) = (ComplexValue::new(x, 0.0), ComplexValue::new(y, 0.0));
    let v = evaluate(cx, cy, t, &m, method).map_err(numerical(m))?;
    // residual of whichever method actually produced the value
    let residual = backward_residual(cx, cy, t, &m, v.method_used).map_err(numerical(m))?;
    let reason = v.fallback_reason.clone().unwrap_or_default();
    match output.format.unwrap_or(Format::Csv) {
        Format::Csv => Ok(format!(
            "x,y,t,value,method,residual,fallback_reason\n{x:?},{y:?},{t:?},{:?},{},{residual:?},\"{}\"\n",
            v.value.re,
            v.method_used.label(),
            reason.replace('"', "'")
        )),
        Format::Json => json_text(&json!({
            "x": x,
            "y": y,
            "t": t,
            "value": complex_string(v.value),
            "method": v.method_used.label(),
            "residual": residual,
            "fallback_reason": v.fallback_reason,
        })),
    }
}

fn extinction_cmd(
    params: &ParamArgs,
    output: &OutputArgs,
    method: ExtinctionMethod,
    grid: &str,
    replicates: usize,
    seed: u64,
) -> CliResult<String> {
    let m = params.resolve()?;
    let times = parse_grid(grid)?;
    let (label, rows) = match method {
        ExtinctionMethod::FixedPoint => {
            let s = extinction_fixed_point(&m);
            ("fixed-point", times.iter().map(|&t| (t, s)).collect())
        }
        other => {
            let curve = match other {
                ExtinctionMethod::Exact => CurveMethod::Exact,
                ExtinctionMethod::Asymptotic => CurveMethod::Asymptotic,
                ExtinctionMethod::Ode => CurveMethod::Ode,
                _ => CurveMethod::MonteCarlo { replicates, seed },
            };
            (
                curve.label(),
                extinction_curve(&m, &times, curve).map_err(numerical(m))?,
            )
        }
    };
    match output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("t,value,method\n");
            for (t, v) in rows {
                s += &format!("{t:?},{v:?},{label}\n");
            }
            Ok(s)
        }
        Format::Json => json_text(
            &rows
                .iter()
                .map(|&(t, value)| json!({"t": t, "value": value, "method": label}))
                .collect::<Vec<_>>(),
        ),
    }
}

fn simulate_cmd(
    params: &ParamArgs,
    output: &OutputArgs,
    replicates: usize,
    t_max: f64,
    seed: u64,
    caps: Option<&str>,
    emit: Emit,
) -> CliResult<String> {
    let m = params.resolve()?;
    let caps = parse_caps(caps)?;
    if replicates == 0 {
        return Err(CliError::Usage("--replicates must be at least 1".into()));
    }
    match emit {
        Emit::Trajectories => {
            // JSON Lines; each replicate starts again at t = 0
            let mut s = String::new();
            for r in 0..replicates as u64 {
                let traj = simulate_replicate(&m, t_max, seed, r, &caps).map_err(numerical(m))?;
                for e in &traj.events {
                    s += &serde_json::to_string(e).map_err(io::Error::other)?;
                    s.push('\n');
                }
            }
            Ok(s)
        }
        Emit::Summary => {
            let states = sample_final_states(&m, t_max, replicates, seed, &caps).map_err(numerical(m))?;
            match output.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut s = String::from("replicate,t,za,zb,events,truncated\n");
                    for (r, st) in states.iter().enumerate() {
                        s += &format!("{r},{t_max:?},{},{},{},{}\n", st.z_a, st.z_b, st.events, st.truncated);
                    }
                    Ok(s)
                }
                Format::Json => json_text(&states),
            }
        }
    }
}

fn invert_cmd(params: &ParamArgs, output: &OutputArgs, t: f64, j_max: usize, k_max: usize) -> CliResult<String> {
    let m = params.resolve()?;
    let grid = invert_pgf(&m, t, j_max, k_max).map_err(numerical(m))?;
    match output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("j\\k");
            for k in 0..=k_max {
                s += &format!(",{k}");
            }
            s.push('\n');
            for (j, row) in grid.probs.iter().enumerate() {
                s += &j.to_string();
                for p in row {
                    s += &format!(",{p:?}");
                }
                s.push('\n');
            }
            s += &format!("truncation_mass,{:?}\n", grid.truncation_mass);
            Ok(s)
        }
        Format::Json => json_text(&json!({
            "t": grid.t,
            "probs": grid.probs,
            "truncation_mass": grid.truncation_mass,
        })),
    }
}

fn selftest_cmd(output: &OutputArgs) -> CliResult<(String, CliResult<()>)> {
    let checks = identity_suite();
    let failed = checks.iter().filter(|c| !c.passed).count();
    let text = match output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("function,identity,max_rel_err,status\n");
            for c in &checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                s += &format!("{},\"{}\",{:?},{status}\n", c.function, c.identity, c.max_rel_err);
            }
            s
        }
        Format::Json => json_text(&checks)?,
    };
    let verdict = if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "{failed} of {} identities failed",
            checks.len()
        )))
    };
    Ok((text, verdict))
}

fn validate_cmd(output: &OutputArgs, suite: Suite) -> CliResult<(String, CliResult<()>)> {
    let report = cross_validate(suite);
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&report)?,
        Format::Csv => report.to_csv(),
    };
    let fails = report.summary.fail;
    let verdict = if fails == 0 {
        Ok(())
    } else {
        Err(CliError::Validation(format!("{fails} cases failed")))
    };
    Ok((text, verdict))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("2:2:1").unwrap(), vec![2.0]);
        assert!(parse_grid("1:0:3").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn caps_parsing() {
        let c = parse_caps(Some("1e3,5000")).unwrap();
        assert_eq!((c.max_cells, c.max_events), (1000, 5000));
        assert!(parse_caps(Some("10")).is_err());
        assert!(parse_caps(Some("0.5,10")).is_err());
        assert_eq!(parse_caps(None).unwrap(), Caps::default());
    }

    #[test]
    fn complex_formatting() {
        assert_eq!(complex_string(ComplexValue::new(0.5, 0.0)), "0.5+0.0i");
        assert_eq!(complex_string(ComplexValue::new(-1.0, -2.5)), "-1.0-2.5i");
    }
}
