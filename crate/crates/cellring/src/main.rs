//! `cellring` — simulate coupled logistic-map cell rings, compute complexity
//! spectra, and certify equilibrium stability; batch outputs as CSV plus
//! optional plot scripts.

use cellring::config::{
    AxesSection, CommandKind, PartialConfig, PartialModel, PartialSim, ScalarOrVec,
};
use cellring::sweep::{AxisSpec, RingSampleSpec};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "cellring",
    version,
    about = "Coupled-map cell ring simulation, complexity spectra, and stability maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate the map and write the trajectory
    Simulate(CommonArgs),
    /// Single normalized complexity value of the simulated series
    Complexity(CommonArgs),
    /// Full complexity spectrum of the simulated series
    Spectrum(CommonArgs),
    /// Two-cell stability report at a point (--eq) or over a grid
    Stability2(CommonArgs),
    /// Random survey of ring equilibria: region S, norm check, spectral radius
    RingStability(CommonArgs),
    /// Grid of spectrum maxima over the (r, p) plane
    MapComplexity(CommonArgs),
    /// Classification grid over candidate two-cell equilibria
    MapStability(CommonArgs),
    /// Extreme-eigenvalue surfaces over candidate two-cell equilibria
    MapEigs(CommonArgs),
}

impl Command {
    fn kind(&self) -> CommandKind {
        match self {
            Command::Simulate(_) => CommandKind::Simulate,
            Command::Complexity(_) => CommandKind::Complexity,
            Command::Spectrum(_) => CommandKind::Spectrum,
            Command::Stability2(_) => CommandKind::Stability2,
            Command::RingStability(_) => CommandKind::RingStability,
            Command::MapComplexity(_) => CommandKind::MapComplexity,
            Command::MapStability(_) => CommandKind::MapStability,
            Command::MapEigs(_) => CommandKind::MapEigs,
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::Simulate(a)
            | Command::Complexity(a)
            | Command::Spectrum(a)
            | Command::Stability2(a)
            | Command::RingStability(a)
            | Command::MapComplexity(a)
            | Command::MapStability(a)
            | Command::MapEigs(a) => a,
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// TOML config file; CLI flags override its values
    #[arg(long)]
    config: Option<PathBuf>,

    /// Logistic/environment parameter (0 < r <= 4)
    #[arg(long)]
    r: Option<f64>,

    /// Coupling: one shared value or one per cell
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    c: Option<Vec<f64>>,

    /// Affinities: one value (two-cell: p and 1-p) or one per cell
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    p: Option<Vec<f64>>,

    /// Number of cells in the ring
    #[arg(long)]
    n_cells: Option<usize>,

    /// Initial concentrations, comma separated
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    x0: Option<Vec<f64>>,

    /// Total iterations of the map
    #[arg(long)]
    steps: Option<usize>,

    /// Leading iterations to discard
    #[arg(long)]
    transient: Option<usize>,

    /// Grid step applied to both axes of a map command
    #[arg(long)]
    grid_step: Option<f64>,

    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,

    /// Seed for sampled commands
    #[arg(long)]
    seed: Option<u64>,

    /// Coupling-weight placement: two-cell or ring
    #[arg(long)]
    convention: Option<cellring::dynamics::Convention>,

    /// Full paper-scale resolution for map commands (step 0.005, 5000 steps)
    #[arg(long)]
    full_res: bool,

    /// Worker threads for map commands (default: all cores)
    #[arg(long)]
    workers: Option<usize>,

    /// Also emit a matplotlib plot script
    #[arg(long)]
    plot: bool,

    /// Equilibrium point for single-point stability2, e.g. --eq 0.5,0.5
    #[arg(long, value_delimiter = ',', num_args = 2..)]
    eq: Option<Vec<f64>>,

    /// Sample count for ring-stability
    #[arg(long)]
    samples: Option<usize>,

    /// Sample equilibria uniformly in the cube instead of inside region S
    #[arg(long)]
    uniform_eq: bool,
}

fn scalar_or_vec(v: Vec<f64>) -> ScalarOrVec {
    if v.len() == 1 {
        ScalarOrVec::Scalar(v[0])
    } else {
        ScalarOrVec::PerCell(v)
    }
}

impl CommonArgs {
    fn to_partial(&self, kind: CommandKind) -> PartialConfig {
        let model = PartialModel {
            r: self.r,
            c: self.c.clone().map(scalar_or_vec),
            p: self.p.clone().map(scalar_or_vec),
            n_cells: self.n_cells,
        };
        let sim = PartialSim {
            x0: self.x0.clone(),
            n_total: self.steps,
            n_transient: self.transient,
        };
        let ring = if kind == CommandKind::RingStability
            && (self.samples.is_some() || self.uniform_eq)
        {
            Some(RingSampleSpec {
                n_samples: self.samples.unwrap_or(500),
                inside_s: !self.uniform_eq,
                ..RingSampleSpec::default()
            })
        } else {
            None
        };
        PartialConfig {
            command: None,
            output: self.out.clone(),
            seed: self.seed,
            convention: self.convention,
            full_res: self.full_res.then_some(true),
            plot: self.plot.then_some(true),
            workers: self.workers,
            eq: self.eq.clone(),
            model: Some(model),
            sim: Some(sim),
            axes: None,
            ring,
        }
    }
}

fn build_config(kind: CommandKind, args: &CommonArgs) -> cellring::Result<cellring::config::RunConfig> {
    let file = match &args.config {
        Some(path) => PartialConfig::from_file(path)?,
        None => PartialConfig::default(),
    };
    let merged = file.overlaid(args.to_partial(kind));
    let mut config = merged.resolve(kind)?;
    if let Some(step) = args.grid_step {
        if let Some(axes) = &config.axes {
            let x = AxisSpec::new(axes.x.name.clone(), axes.x.start, axes.x.stop, step)?;
            let y = AxisSpec::new(axes.y.name.clone(), axes.y.start, axes.y.stop, step)?;
            config.axes = Some(AxesSection { x, y });
            config.validate()?;
        }
    }
    Ok(config)
}

fn main() {
    let cli = Cli::parse();
    let kind = cli.command.kind();
    let args = cli.command.args();

    let config = match build_config(kind, args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("cellring: {e}");
            std::process::exit(e.exit_code());
        }
    };
    match cellring::output::run(&config) {
        Ok(artifacts) => {
            for path in artifacts {
                println!("{}", path.display());
            }
        }
        Err(e) => {
            eprintln!("cellring: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
