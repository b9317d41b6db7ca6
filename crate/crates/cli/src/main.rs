use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tamediv::abelian_ext::QPlace;
use tamediv::cli::{self, Format, Report, RunConfig, EXIT_INPUT};
use tamediv::config::Bounds;

#[derive(Parser)]
#[command(name = "tamediv", version, about = "Skeletons of tame division algebras: validation, crossed products, fibers")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    #[arg(long, global = true, env = "TAMEDIV_CONDUCTOR_BOUND", default_value_t = Bounds::default().conductor)]
    conductor_bound: u64,
    #[arg(long, global = true, env = "TAMEDIV_PRIME_SCAN", default_value_t = Bounds::default().prime_scan)]
    prime_scan: u64,
    #[arg(long, global = true, env = "TAMEDIV_SUPPORT_BOUND", default_value_t = Bounds::default().support)]
    support_bound: usize,
    /// Largest accepted rank of value groups.
    #[arg(long, global = true, env = "TAMEDIV_RANK", default_value_t = Bounds::default().ambient_rank)]
    rank: usize,
    /// Emit JSON documents (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit a one-line summary instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    /// Include construction traces and notes.
    #[arg(long, global = true)]
    trace: bool,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a skeleton and report deg D.
    Validate { skeleton: PathBuf },
    /// Canonical subalgebras U, Z, C, E.
    Canonical { skeleton: PathBuf },
    /// Decide whether the skeleton is a crossed product.
    Crossed { skeleton: PathBuf },
    /// Classify a fiber of the tame Brauer group.
    ClassifyFiber { fiber: PathBuf },
    /// Build a residue class of index m outside the crossed products.
    Witness {
        fiber: PathBuf,
        #[arg(long)]
        m: u64,
        /// Places S must avoid.
        #[arg(long, value_delimiter = ',')]
        exclude: Vec<QPlace>,
    },
    /// Search for an m-cover of Z with prescribed local degrees.
    CoverSearch {
        /// The field as a JSON document, inline or as a path.
        #[arg(long)]
        z: String,
        #[arg(long)]
        m: u64,
        /// `p:d` or `inf:d`; repeatable.
        #[arg(long = "demand")]
        demands: Vec<String>,
        #[arg(long)]
        cyclic: bool,
    },
}

fn read(path: &Path) -> Result<String, Report> {
    std::fs::read_to_string(path).map_err(|e| Report::input_error(format!("{}: {e}", path.display())))
}

fn inline_or_file(arg: &str) -> Result<String, Report> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        read(Path::new(arg))
    }
}

fn run(cmd: Command, cfg: &RunConfig) -> Report {
    let go = || -> Result<Report, Report> {
        Ok(match cmd {
            Command::Validate { skeleton } => cli::cmd_validate(cfg, &read(&skeleton)?),
            Command::Canonical { skeleton } => cli::cmd_canonical(cfg, &read(&skeleton)?),
            Command::Crossed { skeleton } => cli::cmd_crossed(cfg, &read(&skeleton)?),
            Command::ClassifyFiber { fiber } => cli::cmd_classify_fiber(cfg, &read(&fiber)?),
            Command::Witness { fiber, m, exclude } => cli::cmd_witness(cfg, &read(&fiber)?, m, &exclude),
            Command::CoverSearch { z, m, demands, cyclic } => {
                let z = cli::load_field(&inline_or_file(&z)?).map_err(Report::input_error)?;
                let demands = demands
                    .iter()
                    .map(|d| cli::parse_demand(d))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(Report::input_error)?;
                cli::cmd_cover_search(cfg, &z, m, &demands, cyclic)
            }
        })
    };
    go().unwrap_or_else(|r| r)
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let o = args.opts;
    let cfg = RunConfig {
        bounds: Bounds {
            conductor: o.conductor_bound,
            prime_scan: o.prime_scan,
            support: o.support_bound,
            ambient_rank: o.rank,
        },
        format: if o.text && !o.json { Format::Text } else { Format::Json },
        trace: o.trace,
        output: o.output,
    };
    let report = match cfg.check() {
        Ok(()) => run(args.command, &cfg),
        Err(e) => Report::input_error(e),
    };
    let out = report.render(cfg.format);
    match &cfg.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &out) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT as u8);
            }
        }
        None => print!("{out}"),
    }
    ExitCode::from(report.code as u8)
}
