//! Command-line surface over the 2-factor bracket library.
//!
//! Exit codes: 0 success, 1 invalid input, 2 a verification check failed,
//! 3 a resource limit was exceeded.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use twofactor_core::bracket::{
    bracket_state_sum_threads, cube_with_limit, export_cube_dot, export_cube_json,
    DEFAULT_STATE_LIMIT,
};
use twofactor_core::factors::{
    enumerate_perfect_matchings, tait_colorings_count, tait_polynomial,
    two_factor_count_formula, two_factor_enumerate_with_limit, DEFAULT_ENUMERATION_LIMIT,
};
use twofactor_core::harness::{
    corpus, generate, verify_instance, GenSpec, MatchingPolicy, VerificationReport,
};
use twofactor_core::ihmoves::{
    classify_faces, ih_move, reduce_to_short_cycle, smooth_horizontal, smooth_vertical,
    triangle_closure_identity,
};
use twofactor_core::{EdgeId, Error, MatchedDiagram};

#[derive(Parser)]
#[command(
    name = "twofactor",
    about = "2-factor bracket polynomials of matched cubic planar maps",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the bracket polynomial of a diagram.
    Bracket {
        graph: PathBuf,
        /// Also print the evaluation at z = 1.
        #[arg(long)]
        at_one: bool,
        /// Partition the state sum across worker threads.
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Maximum number of matching edges for the 2^k state sum.
        #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
        limit: usize,
    },
    /// Count 2-factors through the matching by the parity formula.
    Count2f {
        graph: PathBuf,
        /// Also enumerate them exhaustively and print each one.
        #[arg(long)]
        enumerate: bool,
        /// Maximum number of non-matching edges for enumeration.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        limit: usize,
    },
    /// Enumerate the perfect matchings of the underlying cubic graph.
    Matchings { graph: PathBuf },
    /// Print the planar Tait polynomial (sum of brackets over all matchings).
    Tait {
        graph: PathBuf,
        /// Also print the evaluation at z = 1.
        #[arg(long)]
        at_one: bool,
        /// Also print the brute-force Tait coloring count.
        #[arg(long)]
        oracle: bool,
    },
    /// Export the cube of resolutions.
    Cube {
        graph: PathBuf,
        #[arg(long, value_enum)]
        format: CubeFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
        limit: usize,
    },
    /// Apply an IH-move to a matching edge.
    Ih {
        graph: PathBuf,
        #[arg(long)]
        edge: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Smooth a matching edge away.
    Smooth {
        graph: PathBuf,
        #[arg(long)]
        edge: u32,
        #[arg(long, value_enum)]
        dir: SmoothDir,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rewrite by IH-moves until a complement cycle of length at most 3 appears.
    Reduce {
        graph: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the replayable move log to this file.
        #[arg(long)]
        moves: Option<PathBuf>,
    },
    /// Print the (m, l) label of every face.
    Classify { graph: PathBuf },
    /// Run the verification suite on a diagram or a random corpus.
    Verify(VerifyArgs),
    /// Generate a random matched planar cubic graph.
    Gen {
        #[arg(long)]
        vertices: u32,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the triangle closure identity over all 15 boundary pairings.
    ClosureIdentity,
}

#[derive(Args)]
struct VerifyArgs {
    /// Verify this diagram; omit to use --random.
    graph: Option<PathBuf>,
    /// Generate and verify this many random instances.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 6)]
    min_size: u32,
    #[arg(long, default_value_t = 14)]
    max_size: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Repeat the per-matching checks for every perfect matching.
    #[arg(long)]
    all_matchings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum CubeFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SmoothDir {
    Vertical,
    Horizontal,
}

enum AppError {
    Core(Error),
    Io(PathBuf, std::io::Error),
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Core(e) => write!(f, "{e}"),
            AppError::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        AppError::Core(e)
    }
}

impl AppError {
    fn exit_code(&self) -> ExitCode {
        match self {
            AppError::Core(
                Error::StateSpaceTooLarge { .. }
                | Error::EnumerationTooLarge { .. }
                | Error::MatchingCapExceeded { .. },
            ) => ExitCode::from(3),
            AppError::Core(Error::SearchExhausted { .. } | Error::NoPerfectMatching { .. }) => {
                ExitCode::from(2)
            }
            _ => ExitCode::from(1),
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn load(path: &Path) -> Result<MatchedDiagram, AppError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| AppError::Io(path.to_path_buf(), e))?;
    Ok(MatchedDiagram::from_json_str(&text)?)
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), AppError> {
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| AppError::Io(path.to_path_buf(), e))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, AppError> {
    match cli.command {
        Command::Bracket { graph, at_one, threads, limit } => {
            let d = load(&graph)?;
            let poly = bracket_state_sum_threads(&d, threads, limit)?;
            println!("{poly}");
            if at_one {
                println!("{}", poly.eval_at_one());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Count2f { graph, enumerate, limit } => {
            let d = load(&graph)?;
            println!("{}", two_factor_count_formula(&d)?);
            if enumerate {
                let factors = two_factor_enumerate_with_limit(&d, limit)?;
                println!("{}", factors.len());
                for tf in factors {
                    println!("{}", serde_json::to_string(&tf).expect("two-factor serializes"));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Matchings { graph } => {
            let d = load(&graph)?;
            for m in enumerate_perfect_matchings(&d)? {
                println!("{}", serde_json::to_string(&m).expect("matching serializes"));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Tait { graph, at_one, oracle } => {
            let d = load(&graph)?;
            let poly = tait_polynomial(&d)?;
            println!("{poly}");
            if at_one {
                println!("{}", poly.eval_at_one());
            }
            if oracle {
                println!("{}", tait_colorings_count(&d)?);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Cube { graph, format, output, limit } => {
            let d = load(&graph)?;
            let cube = cube_with_limit(&d, limit)?;
            let text = match format {
                CubeFormat::Dot => export_cube_dot(&cube),
                CubeFormat::Json => export_cube_json(&cube),
            };
            emit(output.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Ih { graph, edge, output } => {
            let d = load(&graph)?;
            let moved = ih_move(&d, EdgeId(edge))?;
            emit(output.as_deref(), &moved.to_json_string())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Smooth { graph, edge, dir, output } => {
            let d = load(&graph)?;
            let smoothed = match dir {
                SmoothDir::Vertical => smooth_vertical(&d, EdgeId(edge))?,
                SmoothDir::Horizontal => smooth_horizontal(&d, EdgeId(edge))?,
            };
            emit(output.as_deref(), &smoothed.to_json_string())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce { graph, output, moves } => {
            let d = load(&graph)?;
            let (reduced, log) = reduce_to_short_cycle(&d)?;
            emit(output.as_deref(), &reduced.to_json_string())?;
            if let Some(path) = moves {
                let mut text =
                    serde_json::to_string_pretty(&log).expect("move log serializes");
                text.push('\n');
                emit(Some(&path), &text)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { graph } => {
            let d = load(&graph)?;
            for (i, face) in classify_faces(&d)?.iter().enumerate() {
                let walk: Vec<u32> = face.walk.iter().map(|h| h.0).collect();
                println!(
                    "face {i}: m={} l={} size={} walk={walk:?}",
                    face.matching_edges,
                    face.free_vertices,
                    face.walk.len()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let mut report = VerificationReport::default();
            if let Some(path) = &args.graph {
                let d = load(path)?;
                report.merge(verify_instance(&d, args.all_matchings)?);
            } else {
                let count = args.random.ok_or_else(|| {
                    AppError::Core(Error::BadGenSpec(
                        "pass a graph file or --random N".to_string(),
                    ))
                })?;
                for d in corpus(count, args.min_size, args.max_size, args.seed)? {
                    report.merge(verify_instance(&d, args.all_matchings)?);
                }
            }
            print!("{}", report.to_jsonl());
            eprint!("{}", report.summary_table());
            if report.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
        Command::Gen { vertices, seed, output } => {
            let spec = GenSpec { vertices, seed, policy: MatchingPolicy::Random };
            let d = generate(&spec)?;
            emit(output.as_deref(), &d.to_json_string())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ClosureIdentity => {
            let report = triangle_closure_identity();
            for case in &report.cases {
                println!(
                    "pairing {:?}: sum={} columns={:?}",
                    case.pairing, case.sum, case.columns
                );
            }
            if report.all_zero() {
                println!("all {} closures vanish", report.cases.len());
                Ok(ExitCode::SUCCESS)
            } else {
                println!("closure identity FAILED");
                Ok(ExitCode::from(2))
            }
        }
    }
}
