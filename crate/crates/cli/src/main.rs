//! `helly`: exact Helly decisions and related checks, with JSON run reports.

mod commands;
mod error;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use helly_core::exactcore::DEFAULT_MAX_GROUP_SIZE;
use helly_core::hellygraph::DEFAULT_VERTEX_CAP;
use helly_core::hyperoct::{DEFAULT_MAX_DIM, DEFAULT_MAX_GENERATORS, DEFAULT_PROBE_SEED};
use helly_core::stablenorm::DEFAULT_BFS_BUDGET;

use commands::{GraphArgs, GraphSource, LieArgs, Settings, StableNormArgs};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "helly", version, about = "Exact Helly decisions for crystallographic groups and finite graphs")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Cap on point-group closure.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_GROUP_SIZE)]
    max_group_size: usize,
    /// Largest n for which Bₙ is enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DIM)]
    max_dim: usize,
    /// Largest number of irredundant generators for the homomorphism search.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_GENERATORS)]
    max_generators: usize,
    /// Cap on stored BFS states.
    #[arg(long, global = true, default_value_t = DEFAULT_BFS_BUDGET)]
    bfs_budget: usize,
    /// Worker threads for the searches; reports do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    /// Seed for intertwiner probes and random samples.
    #[arg(long, global = true, default_value_t = DEFAULT_PROBE_SEED)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a crystallographic group is Helly.
    Decide { spec: PathBuf },
    /// Directional limits and the stable norm of a word metric on Zⁿ.
    Stablenorm {
        /// Word metric JSON.
        metric: Option<PathBuf>,
        /// Use the orbit of ±eᵢ under this crystal's point group as generators.
        #[arg(long, conflicts_with = "metric")]
        orbit: Option<PathBuf>,
        /// Check that this crystal's point group preserves the polytope.
        #[arg(long)]
        point_group: Option<PathBuf>,
        /// Directions such as "1,0;1,1", repeatable. Defaults to the standard basis.
        #[arg(long)]
        directions: Vec<String>,
        #[arg(long, default_value_t = 32)]
        k_max: u64,
        /// Write the sampled distances as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Second metric for the rough-equivalence probe.
        #[arg(long)]
        compare: Option<PathBuf>,
        /// Ball radius for the rough-equivalence probe.
        #[arg(long, default_value_t = 16)]
        radius: u32,
    },
    /// Exhaustive Helly test of a finite graph.
    HellyGraph {
        /// Graph JSON.
        file: Option<PathBuf>,
        /// K<n>, P<n>, C<n>, S<n>, Q<n> or box<dim>x<side>.
        #[arg(long)]
        builtin: Option<String>,
        /// Word metric whose Cayley ball is tested.
        #[arg(long)]
        cayley: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        radius: u32,
        /// King graph on {0..side}^dim, checked through its ℓ∞ structure.
        #[arg(long, num_args = 2, value_names = ["DIM", "SIDE"])]
        grid: Option<Vec<usize>>,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        vertex_cap: usize,
        /// Use the unpruned enumeration.
        #[arg(long)]
        unpruned: bool,
    },
    /// Common point of a rescaled ball family.
    ScaledHelly {
        input: PathBuf,
        /// Override the scale d.
        #[arg(long)]
        d: Option<u64>,
        /// Override the slack parameter j.
        #[arg(long)]
        j: Option<u64>,
    },
    /// Pushout of a finite group extension.
    Pushout {
        input: Option<PathBuf>,
        /// z2_identity, z4_doubling or s3_alternating.
        #[arg(long, conflicts_with = "input")]
        example: Option<String>,
    },
    /// Lower central series and associated graded of a Lie algebra.
    Lie {
        input: Option<PathBuf>,
        /// Check this many random nilpotent algebras instead.
        #[arg(long, conflicts_with = "input")]
        random: Option<usize>,
        #[arg(long, default_value_t = 5)]
        lie_max_dim: usize,
        #[arg(long, default_value_t = 3)]
        max_class: usize,
    },
    /// Re-check the certificates in a saved report.
    Verify { report: PathBuf },
}

fn graph_source(
    file: Option<PathBuf>,
    builtin: Option<String>,
    cayley: Option<PathBuf>,
    radius: u32,
    grid: Option<Vec<usize>>,
) -> Result<GraphSource, CliError> {
    match (file, builtin, cayley, grid) {
        (Some(f), None, None, None) => Ok(GraphSource::File(f)),
        (None, Some(b), None, None) => Ok(GraphSource::Builtin(b)),
        (None, None, Some(spec), None) => Ok(GraphSource::Cayley { spec, radius }),
        (None, None, None, Some(g)) => Ok(GraphSource::Grid {
            dim: g[0],
            side: g[1],
        }),
        _ => Err(CliError::input(
            "give exactly one of a graph file, --builtin, --cayley or --grid",
        )),
    }
}

fn run(cli: Cli, settings: &Settings) -> Result<report::Draft, CliError> {
    match cli.command {
        Command::Decide { spec } => commands::decide(&spec, settings),
        Command::Stablenorm {
            metric,
            orbit,
            point_group,
            directions,
            k_max,
            csv,
            compare,
            radius,
        } => {
            let args = StableNormArgs {
                metric,
                orbit,
                point_group,
                compare,
                directions: commands::parse_directions(&directions)?,
                k_max,
                radius,
                csv,
            };
            commands::stablenorm(&args, settings)
        }
        Command::HellyGraph {
            file,
            builtin,
            cayley,
            radius,
            grid,
            vertex_cap,
            unpruned,
        } => {
            let args = GraphArgs {
                source: graph_source(file, builtin, cayley, radius, grid)?,
                vertex_cap,
                unpruned,
            };
            commands::helly_graph(&args, settings)
        }
        Command::ScaledHelly { input, d, j } => commands::scaled_helly(&input, d, j, settings),
        Command::Pushout { input, example } => commands::pushout(input.as_deref(), example.as_deref()),
        Command::Lie {
            input,
            random,
            lie_max_dim,
            max_class,
        } => commands::lie(
            &LieArgs {
                input,
                random,
                max_dim: lie_max_dim,
                max_class,
            },
            settings,
        ),
        Command::Verify { report } => verify::verify(&report, settings),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = Settings {
        max_group_size: cli.global.max_group_size,
        max_dim: cli.global.max_dim,
        max_generators: cli.global.max_generators,
        bfs_budget: cli.global.bfs_budget,
        workers: cli.global.workers.max(1),
        seed: cli.global.seed,
    };
    let json_out = cli.global.json_out.clone();
    let start = Instant::now();
    let outcome = run(cli, &settings).and_then(|draft| {
        let (report, exit) = draft.finish(start.elapsed().as_millis() as u64);
        let text = report.to_json();
        if let Some(path) = &json_out {
            std::fs::write(path, &text).map_err(|source| CliError::Write {
                path: path.clone(),
                source,
            })?;
        }
        print!("{text}");
        Ok(exit)
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
