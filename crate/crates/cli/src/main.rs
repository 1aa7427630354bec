//! `cartan-forge`: load a geometry (JSON file or catalog name), run one
//! computation, print the JSON report and write it with any CSV data to the
//! output directory.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{CurveArg, Failure, Options, Outcome};

#[derive(Parser, Debug)]
#[command(
    name = "cartan-forge",
    version,
    about = "Cartan geometry: curvature, transport, Einstein forms, Cosserat media"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Integration step.
    #[arg(long, global = true, default_value_t = 1e-3)]
    step: f64,
    /// Final parameter for geodesics and autoparallels.
    #[arg(long = "t-end", global = true, default_value_t = 1.0)]
    t_end: f64,
    /// Pass threshold for numerical checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Report directory.
    #[arg(
        long,
        global = true,
        env = "CARTAN_FORGE_OUT",
        default_value = "cartan-forge-out"
    )]
    out: PathBuf,
    /// `json` writes the summary only; `csv` and `both` add trajectory and grid CSVs.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for sampled zero tests.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override a geometry parameter, `name=value`.
    #[arg(long = "param", global = true, value_parser = parse_param)]
    params: Vec<(String, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a geometry and summarize it.
    Check { geometry: String },
    /// Connection, torsion and curvature components with flatness verdicts.
    Curvature { geometry: String },
    /// Parallel transport of a frame-component vector along a curve.
    Transport {
        geometry: String,
        /// Curve or loop name from the file, or `x,y;x,y;...` polyline points.
        #[arg(long = "curve", visible_alias = "loop", allow_hyphen_values = true)]
        curve: String,
        /// Frame components of the transported vector, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Metric geodesic from `--x0` with coordinate velocity `--v0`.
    Geodesic {
        geometry: String,
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(long, allow_hyphen_values = true)]
        v0: String,
    },
    /// Autoparallel of the full connection.
    Autoparallel {
        geometry: String,
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(long, allow_hyphen_values = true)]
        v0: String,
    },
    /// Rotation, translation and enclosed area around a closed loop.
    Holonomy {
        geometry: String,
        /// Loop name from the file, or `x,y;x,y;...` polyline points.
        #[arg(long = "loop", allow_hyphen_values = true)]
        loop_: String,
    },
    /// Ricci data, Einstein tensor and Einstein forms.
    Einstein {
        geometry: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        beta: String,
    },
    /// Cosserat equilibrium residuals, or the medium read off a 3D connection.
    Cosserat { geometry: String },
    /// Built-in geometries.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Structure identities plus the file's experiments.
    Verify { geometry: String },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    List,
    /// Write an entry as a geometry file.
    Export {
        name: String,
    },
    /// Check an entry's ledger (`all` for every entry).
    Verify {
        name: String,
    },
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, found `{s}`"))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| format!("`{v}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok((k.trim().to_string(), v))
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let g = &cli.global;
    let mut opts = Options {
        step: g.step,
        t_end: g.t_end,
        tolerance: g.tolerance,
        seed: g.seed,
        ..Options::default()
    };
    let params = g.params.iter().cloned().collect();
    let load = |arg: &str| input::resolve(arg, &params);
    match &cli.command {
        Command::Check { geometry } => commands::check(&load(geometry)?),
        Command::Curvature { geometry } => commands::curvature(&load(geometry)?, &opts),
        Command::Transport {
            geometry,
            curve,
            vector,
        } => {
            opts.curve = Some(CurveArg::parse(curve)?);
            opts.vector = Some(input::numbers(vector, "--vector")?);
            commands::transport(&load(geometry)?, &opts)
        }
        Command::Geodesic { geometry, x0, v0 } | Command::Autoparallel { geometry, x0, v0 } => {
            opts.x0 = Some(input::numbers(x0, "--x0")?);
            opts.v0 = Some(input::numbers(v0, "--v0")?);
            let geodesic = matches!(cli.command, Command::Geodesic { .. });
            commands::trajectory(&load(geometry)?, &opts, geodesic)
        }
        Command::Holonomy { geometry, loop_ } => {
            opts.curve = Some(CurveArg::parse(loop_)?);
            commands::holonomy(&load(geometry)?, &opts)
        }
        Command::Einstein {
            geometry,
            alpha,
            beta,
        } => {
            opts.alpha = alpha.clone();
            opts.beta = beta.clone();
            commands::einstein(&load(geometry)?, &opts)
        }
        Command::Cosserat { geometry } => commands::cosserat(&load(geometry)?, &opts),
        Command::Catalog { action } => match action {
            CatalogAction::List => commands::catalog_list(),
            CatalogAction::Export { name } => commands::catalog_export(name),
            CatalogAction::Verify { name } => commands::catalog_verify(name),
        },
        Command::Verify { geometry } => commands::verify(&load(geometry)?, &opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.global.out.clone();
    let csv = cli.global.format != Format::Json;
    match run(cli) {
        Ok(outcome) => match input::emit(&outcome, &out, csv) {
            Ok(()) => ExitCode::from(if outcome.ok { 0 } else { 1 }),
            Err(e) => {
                eprintln!("error: cannot write reports to {}: {e}", out.display());
                ExitCode::from(1)
            }
        },
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
