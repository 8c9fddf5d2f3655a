mod commands;
mod grid;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gluedwalk::WalkParams;

use output::Format;

/// Szegedy quantum walks on the path reduction of glued trees.
#[derive(Debug, Parser)]
#[command(name = "gluedwalk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigensystem of the Jacobi matrix and of the walk operator.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        /// Skip the lift to eigenpairs of U.
        #[arg(long)]
        jacobi_only: bool,
    },
    /// Position distribution for t = 0..=steps.
    Evolve {
        #[command(flatten)]
        model: ModelArgs,
        /// Start vertex in 1..=2n.
        #[arg(long)]
        start: usize,
        /// Start chirality; without it the two chiralities are averaged.
        #[arg(long, value_enum)]
        chirality: Option<ChiralityArg>,
        #[arg(long, default_value_t = 100)]
        steps: u64,
    },
    /// Time-averaged distribution for every start vertex.
    Timeavg {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Spectral)]
        method: MethodArg,
        /// Averaging horizon T for the empirical method.
        #[arg(long, default_value_t = 100_000)]
        horizon: u64,
    },
    /// Closed-form lower bound against the spectral time average.
    Bound {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Random glued tree, its edge list and the lumping check.
    Gluedtree {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, env = "GLUEDWALK_SEED", default_value_t = 0)]
        seed: u64,
        /// Steps compared in the lumping check.
        #[arg(long, default_value_t = 50)]
        steps: usize,
        /// Redraw the gluing until no leaf pair is joined twice.
        #[arg(long)]
        simple_gluing: bool,
        /// Write the edge list to this file.
        #[arg(long)]
        edges: Option<PathBuf>,
    },
    /// Run the residual and bound checks over a grid of (n, p).
    Certify {
        /// `default`, or `n=<lo>..<hi>;p=<p1>,<p2>,...` (fractions such as 1/3 allowed).
        #[arg(long, default_value = "default")]
        grid: String,
    },
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Half the number of path vertices.
    #[arg(long)]
    n: usize,
    /// Step probability toward the nearer end; decimal or fraction.
    #[arg(long, value_parser = grid::parse_probability, conflicts_with = "k", required_unless_present = "k")]
    p: Option<f64>,
    /// Tree arity; sets p = 1/(k+1).
    #[arg(long)]
    k: Option<usize>,
}

impl ModelArgs {
    fn params(&self) -> anyhow::Result<WalkParams> {
        let params = match (self.p, self.k) {
            (Some(p), None) => WalkParams::new(self.n, p)?,
            (None, Some(k)) => WalkParams::from_arity(self.n, k)?,
            _ => bail!("exactly one of --p and --k is required"),
        };
        Ok(params)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChiralityArg {
    L,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Spectral,
    Empirical,
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let report = match cli.command {
        Command::Spectrum { model, jacobi_only } => commands::spectrum(&model.params()?, jacobi_only)?,
        Command::Evolve { model, start, chirality, steps } => {
            let chirality = chirality.map(|c| match c {
                ChiralityArg::L => gluedwalk::Chirality::L,
                ChiralityArg::R => gluedwalk::Chirality::R,
            });
            commands::evolve(&model.params()?, start, chirality, steps)?
        }
        Command::Timeavg { model, method, horizon } => {
            let method = match method {
                MethodArg::Spectral => gluedwalk::Method::Spectral,
                MethodArg::Empirical => gluedwalk::Method::Empirical { horizon },
            };
            commands::timeavg(&model.params()?, method)?
        }
        Command::Bound { model } => commands::bound(&model.params()?)?,
        Command::Gluedtree { k, n, seed, steps, simple_gluing, edges } => {
            commands::gluedtree(k, n, seed, steps, simple_gluing, edges.as_deref())?
        }
        Command::Certify { grid } => commands::certify(&grid::parse_grid(&grid)?)?,
    };

    let text = report.table.render(cli.format);
    match &cli.output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }

    if report.failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for failure in &report.failures {
            eprintln!("check failed: {failure}");
        }
        Ok(ExitCode::FAILURE)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
