use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gnls_cli::{
    parse_potential_expression, CommandKind, ExperimentConfig, LatticeDims, MassSpec,
    PotentialSpec, SolverSettings, SourceSpec,
};

/// Normalized solutions of the nonlinear Schrödinger equation on weighted
/// graphs: constrained solves, mass sweeps, limit classification, and
/// truncation studies, with CSV outputs.
#[derive(Parser)]
#[command(name = "gnls", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimise J over the mass sphere on a finite graph
    Solve(CommonArgs),
    /// Maximise the potential-problem energy on the h-weighted sphere
    Maximize(CommonArgs),
    /// Solve across a log-spaced mass range, writing one CSV row per mass
    Sweep(CommonArgs),
    /// Sweep a mass range and classify the limit object
    Limits(CommonArgs),
    /// Solve the same potential problem on balls of increasing radius
    Truncate(CommonArgs),
    /// Report the potential-problem conditions (informational)
    CheckConditions(CommonArgs),
    /// Eigenpairs of -Δv = λ h v in the μ-weighted inner product
    Eigen(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Graph file (JSON: {"vertices": [...], "edges": [...]})
    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,

    /// Built-in fixture: g6-table1, g6-uniform, path2, path3, lattice1d(r), lattice2d(r)
    #[arg(long, value_name = "NAME", conflicts_with = "graph")]
    fixture: Option<String>,

    /// Integer-lattice generator (with --radius)
    #[arg(long, value_parser = ["1d", "2d"], conflicts_with_all = ["graph", "fixture"])]
    lattice: Option<String>,

    /// Ball radius for --lattice
    #[arg(long, value_name = "R")]
    radius: Option<u32>,

    /// Nonlinearity exponent (> 2)
    #[arg(long, default_value_t = 3.0)]
    p: f64,

    /// Constraint mass for single solves
    #[arg(long, value_name = "REAL")]
    mass: Option<f64>,

    /// Sweep start mass (log-spaced range)
    #[arg(long, value_name = "REAL", requires_all = ["mass_to", "mass_points"], conflicts_with = "mass")]
    mass_from: Option<f64>,

    /// Sweep end mass
    #[arg(long, value_name = "REAL")]
    mass_to: Option<f64>,

    /// Number of log-spaced sweep points
    #[arg(long, value_name = "N")]
    mass_points: Option<usize>,

    /// Radial potential "a+b*rho^g" (rho = hop distance from the origin)
    #[arg(long, value_name = "EXPR")]
    potential: Option<String>,

    /// JSON file mapping vertex id to potential value
    #[arg(long, value_name = "FILE", conflicts_with = "potential")]
    potential_file: Option<PathBuf>,

    /// Origin vertex id (defaults to the generator origin on lattices)
    #[arg(long, value_name = "ID")]
    origin: Option<String>,

    /// Truncation radii for `truncate`, comma separated (e.g. 16,32,64)
    #[arg(long, value_delimiter = ',', value_name = "R,R,...")]
    radii: Vec<u32>,

    /// Solver tolerance (projected-gradient sup-norm, relative to max(1, m^(p/2-1)))
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,

    /// Iteration cap per restart
    #[arg(long, default_value_t = 1_000_000)]
    max_iter: u64,

    /// Number of deterministic restarts
    #[arg(long, default_value_t = 8)]
    restarts: u32,

    /// Seed for the deterministic restart perturbations
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output directory for CSV artifacts and the run manifest
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn build_config(kind: CommandKind, args: CommonArgs) -> Result<ExperimentConfig, String> {
    let source = match (&args.graph, &args.fixture, &args.lattice) {
        (Some(path), None, None) => SourceSpec::File(path.clone()),
        (None, Some(name), None) => SourceSpec::Fixture(name.clone()),
        (None, None, Some(dims)) => {
            let dims = match dims.as_str() {
                "1d" => LatticeDims::One,
                _ => LatticeDims::Two,
            };
            // `truncate` builds its own balls from --radii.
            let radius = match (args.radius, kind) {
                (Some(r), _) => r,
                (None, CommandKind::Truncate) => *args.radii.iter().max().unwrap_or(&0),
                (None, _) => return Err("--lattice needs --radius".into()),
            };
            SourceSpec::Lattice { dims, radius }
        }
        _ => return Err("give exactly one of --graph, --fixture, --lattice".into()),
    };

    let mass = match (args.mass, args.mass_from, args.mass_to, args.mass_points) {
        (Some(m), None, _, _) => Some(MassSpec::Single(m)),
        (None, Some(from), Some(to), Some(points)) => {
            if points < 2 {
                return Err("--mass-points must be at least 2".into());
            }
            if !(from > 0.0) || !(to > 0.0) || from == to {
                return Err("mass range endpoints must be positive and distinct".into());
            }
            Some(MassSpec::Range { from, to, points })
        }
        (None, None, _, _) => None,
        _ => return Err("give --mass or the full --mass-from/--mass-to/--mass-points".into()),
    };

    let potential = match (&args.potential, &args.potential_file) {
        (Some(expr), None) => Some(parse_potential_expression(expr).ok_or_else(|| {
            format!("cannot parse potential {expr:?}; expected \"a+b*rho^g\" with a,b > 0, g >= 1")
        })?),
        (None, Some(path)) => Some(PotentialSpec::File(path.clone())),
        (None, None) => None,
        _ => unreachable!("clap conflict"),
    };

    Ok(ExperimentConfig {
        command: kind,
        source,
        p: args.p,
        mass,
        potential,
        origin: args.origin,
        radii: args.radii,
        solver: SolverSettings {
            tolerance: args.tol,
            max_iterations: args.max_iter,
            restarts: args.restarts,
            seed: args.seed,
        },
        out_dir: args.out,
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::Solve(a) => (CommandKind::Solve, a),
        Command::Maximize(a) => (CommandKind::Maximize, a),
        Command::Sweep(a) => (CommandKind::Sweep, a),
        Command::Limits(a) => (CommandKind::Limits, a),
        Command::Truncate(a) => (CommandKind::Truncate, a),
        Command::CheckConditions(a) => (CommandKind::CheckConditions, a),
        Command::Eigen(a) => (CommandKind::Eigen, a),
    };
    let config = match build_config(kind, args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    ExitCode::from(gnls_cli::run_exit_code(&config) as u8)
}
