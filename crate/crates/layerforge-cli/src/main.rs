//! `layerforge` — generate, solve, export, validate, benchmark and render
//! layer assignments for directed graphs.

mod bench;
mod commands;
mod presets;
mod records;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use commands::Family;

#[derive(Parser)]
#[command(
    name = "layerforge",
    version,
    about = "Exact layer-assignment toolkit: instance generation, solving, \
             MIP export, validation, benchmarks and SVG rendering"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Model parameters shared by most subcommands. A `--preset` derives the
/// layer budget and weights from the instance; explicit flags override
/// individual pieces. Without either, the defaults are the `glp` variant,
/// unit length/reversal weights and a layer budget of `|V|`.
#[derive(Args)]
pub struct ModelArgs {
    /// Named preset: exp1, exp2, ms_1_2, ms_1_1, ms_2_1
    #[arg(long)]
    pub preset: Option<String>,
    /// Problem variant: dlp, dlp-w, glp, glp-w, glp-ms, glp-ms*
    #[arg(long)]
    pub variant: Option<String>,
    /// Layer budget Y
    #[arg(long)]
    pub ylayers: Option<u32>,
    /// Arc length weight, an exact rational ("1", "3/4", "0.25")
    #[arg(long)]
    pub wlen: Option<String>,
    /// Reversed arc weight
    #[arg(long)]
    pub wrev: Option<String>,
    /// Width weight (dlp-w / glp-w)
    #[arg(long)]
    pub wwid: Option<String>,
    /// Scale weight (glp-ms / glp-ms*)
    #[arg(long)]
    pub wscl: Option<String>,
    /// Target area width (positive rational)
    #[arg(long)]
    pub rw: Option<String>,
    /// Target area height (positive rational)
    #[arg(long)]
    pub rh: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a corpus of seeded random acyclic graphs plus a manifest
    Gen {
        /// Target vertex count before isolated-vertex removal
        n: usize,
        /// Number of graphs
        count: usize,
        /// Output directory
        out_dir: PathBuf,
        /// Base seed; file i uses seed + i
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Arc density (arcs ~= density * n), default 3/2
        #[arg(long)]
        density: Option<String>,
    },
    /// Build a MIP formulation and write it as an LP file
    Build {
        /// Graph file (.gr edge list, or .dot/.gv)
        graph: PathBuf,
        /// Formulation family
        #[arg(long, value_enum)]
        family: Family,
        /// Output LP path
        #[arg(long, short)]
        out: PathBuf,
        /// Add the optional first-layer occupancy row (cgl only)
        #[arg(long)]
        first_layer_row: bool,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Solve an instance exactly; prints a JSON run record
    Solve {
        graph: PathBuf,
        /// Wall-clock limit in seconds (0 disables; default 1800 or
        /// LAYERFORGE_TIME_LIMIT)
        #[arg(long)]
        time_limit: Option<u64>,
        /// Use exhaustive enumeration instead of branch-and-bound
        #[arg(long)]
        brute: bool,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Check a layering file against a graph and print its metrics
    Validate {
        graph: PathBuf,
        /// Layering file: `vertex layer` lines
        layering: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Verify an external solver's solution file against a built model
    CheckSolution {
        graph: PathBuf,
        /// Solution file: `name value` lines
        solution: PathBuf,
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        first_layer_row: bool,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Run presets over a corpus directory and write a CSV report
    Bench {
        /// Directory of .gr instances
        corpus: PathBuf,
        /// Comma-separated preset names
        #[arg(long, default_value = "exp1")]
        presets: String,
        /// Comma-separated families: direct, qla, cgl
        #[arg(long, default_value = "direct")]
        families: String,
        /// Output CSV path
        #[arg(long, short)]
        out: PathBuf,
        /// Wall-clock limit per run in seconds
        #[arg(long)]
        time_limit: Option<u64>,
        /// Worker threads
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Render a layered drawing as SVG
    Render {
        graph: PathBuf,
        layering: PathBuf,
        /// Output SVG path
        #[arg(long, short)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Gen {
            n,
            count,
            out_dir,
            seed,
            density,
        } => {
            let density = density
                .as_deref()
                .map(layerforge::parse_ratio)
                .transpose()
                .map_err(|e| anyhow::anyhow!("invalid --density: {e}"))?;
            commands::cmd_gen(n, count, &out_dir, seed, density)?;
            Ok(0)
        }
        Cmd::Build {
            graph,
            family,
            out,
            first_layer_row,
            model,
        } => {
            commands::cmd_build(&graph, family, &model, &out, first_layer_row)?;
            Ok(0)
        }
        Cmd::Solve {
            graph,
            time_limit,
            brute,
            model,
        } => commands::cmd_solve(&graph, &model, time_limit, brute),
        Cmd::Validate {
            graph,
            layering,
            model,
        } => commands::cmd_validate(&graph, &layering, &model),
        Cmd::CheckSolution {
            graph,
            solution,
            family,
            first_layer_row,
            model,
        } => commands::cmd_check_solution(&graph, &solution, family, &model, first_layer_row),
        Cmd::Bench {
            corpus,
            presets,
            families,
            out,
            time_limit,
            threads,
        } => {
            bench::cmd_bench(&corpus, &presets, &families, time_limit, &out, threads)?;
            Ok(0)
        }
        Cmd::Render {
            graph,
            layering,
            out,
        } => {
            commands::cmd_render(&graph, &layering, &out)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
