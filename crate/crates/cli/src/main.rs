#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use eisenhart_core::dynamics::{geodesic_flow, newton_flow};
use eisenhart_core::geometry::assess_flatness;
use eisenhart_core::lifts::{build_lift, build_lift_for};
use eisenhart_core::linearize::roundtrip;
use eisenhart_core::{Error as CoreError, LiftedSystem};

use config::{Command, Format, RunConfig};
use report::{AuxRow, FlatnessSummary, LiftSummary};

const EXIT_SUITE_FAILURE: u8 = 1;
const EXIT_INVALID_CONFIG: u8 = 2;
const EXIT_NUMERIC_FAILURE: u8 = 3;

/// Eisenhart-lift linearization of one-dimensional Newtonian systems.
#[derive(Parser, Debug)]
#[command(name = "eisenhart", version)]
struct Cli {
    command: Command,
    /// JSON run configuration (optional for `suite`)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report path; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, short)]
    verbose: bool,
}

enum Failure {
    Config(anyhow::Error),
    Numeric(anyhow::Error),
    Suite,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Config(e)
    }
}

/// Construction and argument errors come from the configuration; the rest are numeric.
fn core(e: CoreError) -> Failure {
    match e {
        CoreError::Argument(_) | CoreError::Construction(_) => Failure::Config(e.into()),
        other => Failure::Numeric(other.into()),
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("EISENHART_THREADS") else {
        return Ok(());
    };
    let n: usize = value.trim().parse().with_context(|| format!("EISENHART_THREADS must be a positive integer, got {value:?}"))?;
    anyhow::ensure!(n > 0, "EISENHART_THREADS must be positive");
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn emit(cli: &Cli, cfg: &RunConfig, body: &str) -> Result<()> {
    match cli.out.as_ref().or(cfg.output.path.as_ref()) {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn format(cli: &Cli, cfg: &RunConfig, default: Format) -> Format {
    cli.format.or(cfg.output.format).unwrap_or(default)
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn lifted(cfg: &RunConfig) -> Result<LiftedSystem, Failure> {
    let pot = cfg.potential()?;
    let kind = cfg.lift_kind()?;
    match (cfg.energy, &cfg.initial) {
        (None, Some(i)) => build_lift_for(kind, pot, cfg.alpha(), i.x0, i.v0).map_err(core),
        (energy, _) => build_lift(kind, pot, cfg.alpha(), energy.unwrap_or(0.0)).map_err(core),
    }
}

fn grid_points(cfg: &RunConfig, system: &LiftedSystem) -> Result<(Vec<f64>, Vec<Vec<f64>>), Failure> {
    let g = cfg.grid()?;
    let xs = system.domain().sample(g.x_min, g.x_max, g.n_points);
    if xs.len() < 2 {
        return Err(Failure::Config(anyhow::anyhow!(
            "grid [{}, {}] has fewer than two points inside the lift domain",
            g.x_min,
            g.x_max
        )));
    }
    let points = xs
        .iter()
        .map(|&x| {
            let mut p = vec![0.0; system.dim()];
            p[0] = x;
            p
        })
        .collect();
    Ok((xs, points))
}

fn curvature(cli: &Cli, cfg: &RunConfig) -> Result<(), Failure> {
    let system = lifted(cfg)?;
    let (_, grid) = grid_points(cfg, &system)?;
    let report = assess_flatness(system.metric(), &grid).map_err(core)?;
    if cli.verbose {
        eprintln!("{} points, max |Riemann| = {:.3e}", report.points.len(), report.max_riemann);
    }
    let body = match format(cli, cfg, Format::Json) {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report::curvature_csv(&report),
    };
    Ok(emit(cli, cfg, &body)?)
}

fn flatness(cli: &Cli, cfg: &RunConfig) -> Result<(), Failure> {
    let system = lifted(cfg)?;
    let (xs, grid) = grid_points(cfg, &system)?;
    let report = assess_flatness(system.metric(), &grid).map_err(core)?;
    let residuals = report::residual_table(&system, &xs).map_err(core)?;
    let verdict = format!("{:?}", report.verdict);
    let summary = FlatnessSummary {
        lift: system.kind().to_string(),
        verdict,
        tolerance: report.tolerance,
        max_riemann: report.max_riemann,
        max_conformal: report.max_conformal,
        max_relative_residual: report::max_relative(&residuals),
        residuals,
        curvature: &report,
    };
    if cli.verbose {
        eprintln!("max relative residual = {:.3e}", summary.max_relative_residual);
    }
    let to_file = cli.out.is_some() || cfg.output.path.is_some();
    if to_file || (cli.format.is_none() && cfg.output.format.is_none()) {
        println!("verdict: {}", summary.verdict);
    }
    if !to_file && cli.format.is_none() && cfg.output.format.is_none() {
        return Ok(());
    }
    let body = match format(cli, cfg, Format::Json) {
        Format::Json => json(&summary),
        Format::Csv => report::flatness_csv(&summary),
    };
    Ok(emit(cli, cfg, &body)?)
}

fn lift(cli: &Cli, cfg: &RunConfig) -> Result<(), Failure> {
    let system = lifted(cfg)?;
    let names: Vec<String> = system.aux().names().map(String::from).collect();
    let table = match cfg.grid {
        Some(_) => grid_points(cfg, &system)?
            .0
            .into_iter()
            .map(|x| {
                let values = names.iter().map(|n| system.aux().get(n)?.value(x)).collect::<Result<_, _>>()?;
                Ok(AuxRow { x, values })
            })
            .collect::<Result<_, CoreError>>()
            .map_err(core)?,
        None => Vec::new(),
    };
    let summary = LiftSummary {
        lift: system.kind().to_string(),
        alpha: system.alpha(),
        coordinates: system.coords(),
        potential: system.potential(),
        recovery: system.recovery(),
        aux_functions: names,
        table,
    };
    let body = match format(cli, cfg, Format::Json) {
        Format::Json => json(&summary),
        Format::Csv => report::lift_csv(&summary),
    };
    Ok(emit(cli, cfg, &body)?)
}

fn integrate(cli: &Cli, cfg: &RunConfig) -> Result<(), Failure> {
    let init = cfg.initial()?;
    let span = cfg.t_span()?;
    let integrator = cfg.integrator();
    let traj = if cfg.lift.is_some() {
        let system = lifted(cfg)?;
        let state = system.recovered_state(init.x0, init.v0, &init.extended, span.0).map_err(core)?;
        geodesic_flow(&system, &state, span, &integrator).map_err(core)?
    } else {
        newton_flow(cfg.potential()?, init.x0, init.v0, span, &integrator).map_err(core)?
    };
    let meta = traj.meta();
    if cli.verbose {
        eprintln!("{} samples, {} steps, energy drift {:.3e}", traj.len(), meta.steps, meta.max_energy_drift.unwrap_or(f64::NAN));
    }
    if meta.exited_domain {
        eprintln!("warning: trajectory left the domain at t = {}", traj.last().t);
    }
    let body = match format(cli, cfg, Format::Csv) {
        Format::Csv => traj.to_csv(),
        Format::Json => traj.to_json() + "\n",
    };
    Ok(emit(cli, cfg, &body)?)
}

fn roundtrip_cmd(cli: &Cli, cfg: &RunConfig) -> Result<(), Failure> {
    let init = cfg.initial()?;
    let report = roundtrip(cfg.potential()?, init.x0, init.v0, cfg.t_span()?).map_err(core)?;
    if cli.verbose {
        eprintln!("{} via {}: max deviation {:.3e}", report.family, report.map_used, report.max_deviation);
    }
    let body = match format(cli, cfg, Format::Json) {
        Format::Json => json(&report),
        Format::Csv => format!(
            "family,lift_kind,map_used,max_deviation,samples,partial,t_end\n{},{},{},{:.16e},{},{},{:.16e}\n",
            report.family, report.lift_kind, report.map_used, report.max_deviation, report.samples, report.partial, report.t_end
        ),
    };
    Ok(emit(cli, cfg, &body)?)
}

fn suite(cli: &Cli, cfg: &RunConfig) -> Result<(), Failure> {
    let outcomes: Vec<_> = eisenhart_core::suite::CRITERIA
        .iter()
        .map(|criterion| {
            let outcome = criterion();
            println!("{outcome}");
            if cli.verbose {
                for m in &outcome.measurements {
                    eprintln!("    {} = {:.3e} (threshold {:.1e})", m.label, m.value, m.threshold);
                }
            }
            outcome
        })
        .collect();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("{passed}/{} criteria passed", outcomes.len());
    if cli.out.is_some() || cfg.output.path.is_some() {
        let body = match format(cli, cfg, Format::Json) {
            Format::Json => json(&outcomes),
            Format::Csv => report::suite_csv(&outcomes),
        };
        emit(cli, cfg, &body)?;
    }
    if passed == outcomes.len() {
        Ok(())
    } else {
        Err(Failure::Suite)
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    configure_threads()?;
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None if cli.command == Command::Suite => RunConfig::default(),
        None => return Err(Failure::Config(anyhow::anyhow!("--config is required for {:?}", cli.command))),
    };
    cfg.validate(cli.command)?;
    match cli.command {
        Command::Curvature => curvature(cli, &cfg),
        Command::Flatness => flatness(cli, &cfg),
        Command::Lift => lift(cli, &cfg),
        Command::Integrate => integrate(cli, &cfg),
        Command::Roundtrip => roundtrip_cmd(cli, &cfg),
        Command::Suite => suite(cli, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Suite) => ExitCode::from(EXIT_SUITE_FAILURE),
        Err(Failure::Config(e)) => {
            eprintln!("error: invalid configuration: {e:#}");
            ExitCode::from(EXIT_INVALID_CONFIG)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_NUMERIC_FAILURE)
        }
    }
}
