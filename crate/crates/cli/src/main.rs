use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use homchain::lp::DEFAULT_NODE_LIMIT;
use homchain::Rational;

mod commands;
mod generate;

/// Exact optimal homologous and bounding chains.
#[derive(Parser)]
#[command(name = "homchain", version)]
struct Cli {
    /// More log output; repeat for more.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    Obcp,
    Ohcp,
    RelativeObcp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Report the LP vertex even if fractional.
    Lp,
    /// Fall back to branch and bound when the LP vertex is fractional.
    Ilp,
}

#[derive(Args)]
pub struct SolveArgs {
    #[arg(value_enum)]
    pub problem: Problem,
    #[arg(long)]
    pub input: PathBuf,
    /// Name of the input chain (`a` or `b`).
    #[arg(long)]
    pub chain: String,
    /// Name of the subcomplex, for relative-obcp.
    #[arg(long)]
    pub subcomplex: Option<String>,
    /// Dimension `n` of the optimal chain.
    #[arg(long)]
    pub dim: usize,
    #[arg(long, value_enum, default_value = "ilp")]
    pub mode: ModeArg,
    /// Answer the decision problem: is there a chain of norm at most this?
    #[arg(long)]
    pub threshold: Option<Rational>,
    /// Write the input document plus the optimal chain here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
    pub node_limit: usize,
}

#[derive(Args)]
pub struct DesingularizeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub chain: String,
    /// For 1-chains: the subcomplex where arcs may end.
    #[arg(long)]
    pub subcomplex: Option<String>,
    /// Write the surface as an OFF mesh (needs coordinates).
    #[arg(long)]
    pub off: Option<PathBuf>,
}

#[derive(Args)]
pub struct SpanningArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Curve to span; defaults to the document's `curve` metadata, then the longitude.
    #[arg(long)]
    pub chain: Option<String>,
    /// Answer the decision problem: is there a surface of area at most this?
    #[arg(long)]
    pub threshold: Option<Rational>,
    #[arg(long)]
    pub off: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
    pub node_limit: usize,
}

#[derive(Subcommand)]
pub enum GenKind {
    /// Square grid with N x N cells.
    Grid { n: usize },
    /// OBCP instance from a 1-in-3 SAT file.
    Sat { file: PathBuf },
    /// OHCP cone instance from a 1-in-3 SAT file.
    Cone { file: PathBuf },
    /// Triangulated cube with a lattice loop through the corners listed in CYCLEFILE.
    CubeKnot { n: usize, cyclefile: PathBuf },
    /// Cube containing a Möbius strip in its 2-skeleton.
    Moebius,
    /// Ring of triangular prisms.
    SolidTorus,
    /// Torus times an interval.
    ThickenedTorus,
    /// Random 1-in-3 SAT file with distinct literals per clause.
    RandomSat {
        vars: usize,
        clauses: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Command {
    /// Solve an OBCP, OHCP or relative OBCP.
    Solve(SolveArgs),
    /// Turn an integral chain into an embedded surface or curve family.
    Desingularize(DesingularizeArgs),
    /// Write an instance document.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Integral homology groups.
    Homology {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Longitude of a knot exterior.
    Longitude {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Least-area spanning surface.
    SpanningArea(SpanningArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new().filter_level(level).init();
    let result = match cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Desingularize(a) => commands::desingularize(a),
        Command::Gen { kind, out } => generate::gen(kind, out),
        Command::Homology { input, dim } => commands::homology(input, dim),
        Command::Longitude { input, out } => commands::longitude(input, out),
        Command::SpanningArea(a) => commands::spanning(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
