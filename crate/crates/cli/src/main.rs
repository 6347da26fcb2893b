//! `pcharts`: conversions between canonical charts of the planetary problem,
//! canonicity checks, averaging and reference integration.

mod commands;
mod demo;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};

use planetary_charts::verify::ChartKind;

/// Exit status 2: bad invocation or unreadable input. Exit status 1: a
/// computation failed or a check did not pass.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(planetary_charts::Error),
}

impl From<planetary_charts::Error> for CliError {
    fn from(e: planetary_charts::Error) -> Self {
        CliError::Compute(e)
    }
}

/// Either Cartesian variables or one of the registered charts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    Cartesian,
    Chart(ChartKind),
}

impl FromStr for Space {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "cartesian" {
            return Ok(Space::Cartesian);
        }
        s.parse::<ChartKind>()
            .map(Space::Chart)
            .map_err(|_| unknown_chart(s))
    }
}

fn unknown_chart(s: &str) -> String {
    let names: Vec<&str> = ChartKind::ALL.iter().map(|k| k.name()).collect();
    format!("unknown chart `{s}`; known charts: {}", names.join(", "))
}

fn parse_chart(s: &str) -> Result<ChartKind, String> {
    s.parse().map_err(|_| unknown_chart(s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    TwoPlanetInclined,
    PlanarLimit,
    EquivalenceSweep,
}

#[derive(Parser, Debug)]
#[command(
    name = "pcharts",
    version,
    about = "Canonical charts of the planetary (1+n)-body problem"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Converts a state or chart file to another chart (or to Cartesian variables).
    Convert {
        #[arg(long)]
        input: PathBuf,
        /// `cartesian` for a state file, otherwise the chart of the input file.
        #[arg(long, value_parser = Space::from_str)]
        from: Space,
        #[arg(long, value_parser = Space::from_str)]
        to: Space,
        /// Defaults to standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Checks symplecticity of a chart on seeded random regular states.
    CheckCanonical {
        #[arg(long, value_parser = parse_chart)]
        chart: ChartKind,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Number of planets; defaults to 2 for two-planet charts, 3 otherwise.
        #[arg(long)]
        bodies: Option<usize>,
        #[arg(long, default_value_t = 1e-3)]
        mu: f64,
        #[arg(long, default_value_t = planetary_charts::verify::SYMPLECTIC_STEP)]
        step: f64,
        #[arg(long, default_value_t = planetary_charts::verify::SYMPLECTIC_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Checks that the pulled-back Hamiltonian does not depend on the named coordinates.
    CheckCyclic {
        #[arg(long, value_parser = parse_chart)]
        chart: ChartKind,
        /// Comma-separated coordinate labels, e.g. C3,zeta,psi0.
        #[arg(long, value_delimiter = ',', required = true)]
        vars: Vec<String>,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        bodies: Option<usize>,
        #[arg(long, default_value_t = 1e-3)]
        mu: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Averages the heliocentric perturbation over the mean longitudes.
    Average {
        #[arg(long)]
        input: PathBuf,
        /// poincare or rps.
        #[arg(long, value_parser = parse_chart, default_value = "poincare")]
        chart: ChartKind,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
        #[arg(long, default_value_t = 512)]
        max_nodes: usize,
    },
    /// Sweeps μ and fits the gap between heliocentric and Jacobi averages (two planets).
    Equivalence {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1e-3, 5e-4, 2.5e-4])]
        mus: Vec<f64>,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
    },
    /// Integrates the Cartesian dynamics and reports the drift of E, C and P.
    Integrate {
        #[arg(long)]
        input: PathBuf,
        /// Length in periods of the first planet.
        #[arg(long, default_value_t = 100.0)]
        periods: f64,
        #[arg(long, default_value_t = 100)]
        steps_per_period: usize,
        /// Emit every k-th step.
        #[arg(long, default_value_t = 100)]
        every: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Narrated scenarios with column data.
    Demo {
        #[arg(value_enum)]
        scenario: Scenario,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Convert {
            input,
            from,
            to,
            output,
        } => commands::convert(&input, from, to, output.as_deref()),
        Command::CheckCanonical {
            chart,
            samples,
            seed,
            bodies,
            mu,
            step,
            tol,
            format,
        } => commands::check_canonical(chart, samples, seed, bodies, mu, step, tol, format),
        Command::CheckCyclic {
            chart,
            vars,
            samples,
            seed,
            bodies,
            mu,
            tol,
            format,
        } => commands::check_cyclic(chart, &vars, samples, seed, bodies, mu, tol, format),
        Command::Average {
            input,
            chart,
            nodes,
            max_nodes,
        } => commands::average(&input, chart, nodes, max_nodes),
        Command::Equivalence { input, mus, nodes } => commands::equivalence(&input, &mus, nodes),
        Command::Integrate {
            input,
            periods,
            steps_per_period,
            every,
            tol,
        } => commands::integrate(&input, periods, steps_per_period, every, tol),
        Command::Demo { scenario } => demo::run(scenario),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            eprintln!("\n{}", Cli::command().render_usage());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
