use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cubulate::error::{Error, Result};
use cubulate::fixtures;
use cubulate::limits::Limits;
use cubulate::report::{self, AnalysisReport, Options};

/// Decide coarse-median and cocompact-cubulation status of tubular and
/// free-by-cyclic groups from finite combinatorial input, and work with the
/// finite median algebras underneath.
#[derive(Parser)]
#[command(name = "cubulate", version, max_term_width = 100)]
struct Cli {
    /// Emit the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Embed certificates in the report, re-verifying them first.
    #[arg(long, global = true)]
    witness: bool,
    /// Raise the size caps (elements for the combinatorial searches; the
    /// model vertex cap scales along).
    #[arg(long, global = true, value_name = "N")]
    limit: Option<usize>,
    /// List the bundled example inputs and exit.
    #[arg(long, global = true)]
    fixtures: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a tubular group (graph of Z^2 vertices and Z edges).
    Tubular {
        #[command(subcommand)]
        action: TubularAction,
    },
    /// Analyze a free-by-cyclic group from declared train-track data.
    Fbc {
        #[command(subcommand)]
        action: FbcAction,
    },
    /// Operate on finite median algebras.
    Median {
        #[command(subcommand)]
        action: MedianAction,
    },
    /// Work with richly-branching-flat data.
    Rbf {
        #[command(subcommand)]
        action: RbfAction,
    },
}

#[derive(Args)]
struct InputArg {
    /// Input file path, or `fixture:NAME` for a bundled example.
    input: String,
}

#[derive(Subcommand)]
enum TubularAction {
    /// Full verdict: distortion, Dehn class, and cubulation status.
    Analyze(InputArg),
}

#[derive(Subcommand)]
enum FbcAction {
    /// Full verdict: rich linearity and the positive branches.
    Analyze(InputArg),
}

#[derive(Subcommand)]
enum MedianAction {
    /// Check the median axioms (and metric compatibility, when present).
    Verify(InputArg),
    /// Rank by pairwise-crossing walls and by embedded cubes.
    Rank(InputArg),
    /// Median-convex hull of a set of elements.
    Hull {
        #[command(flatten)]
        input: InputArg,
        /// Comma-separated element names.
        #[arg(long, value_name = "ELEMENTS", required = true)]
        of: String,
    },
}

#[derive(Subcommand)]
enum RbfAction {
    /// Derive branching directions from a tubular vertex.
    FromTubular {
        #[command(flatten)]
        input: InputArg,
        /// Vertex to inspect.
        #[arg(long, value_name = "VERTEX", required = true)]
        vertex: String,
    },
    /// Derive branching directions from a rich-linearity witness.
    FromFbc(InputArg),
    /// Materialize the discrete model and re-check its invariants.
    Build {
        #[command(flatten)]
        input: InputArg,
        /// Base box radius R.
        #[arg(long, value_name = "R", default_value_t = 5)]
        radius: i64,
        /// Strip depth L.
        #[arg(long, value_name = "L", default_value_t = 3)]
        depth: u32,
    },
    /// Validate direction independence and position density.
    Validate(InputArg),
}

/// Splits a comma-separated element list, ignoring commas inside
/// parentheses so coordinate names like `(0,1)` survive.
fn split_element_list(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                current.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                current.push(c);
            }
            ',' if depth == 0 => {
                out.push(current.trim().to_string());
                current.clear();
            }
            _ => current.push(c),
        }
    }
    if !current.trim().is_empty() {
        out.push(current.trim().to_string());
    }
    out
}

fn read_input(arg: &str) -> Result<String> {
    if let Some(name) = arg.strip_prefix("fixture:") {
        return fixtures::find(name)
            .map(|f| f.json.to_string())
            .ok_or_else(|| Error::input(format!("no bundled fixture named {name:?}")));
    }
    std::fs::read_to_string(arg)
        .map_err(|e| Error::input(format!("cannot read {arg}: {e}")))
}

fn list_fixtures() {
    println!("bundled examples (use as `fixture:NAME`):");
    for f in fixtures::FIXTURES {
        println!("  {:<20} [{}] {}", f.name, f.kind, f.about);
    }
}

fn run(cli: Cli) -> Result<AnalysisReport> {
    let limits = match cli.limit {
        Some(n) => Limits::with_max_elements(n),
        None => Limits::default(),
    };
    let opts = Options {
        witness: cli.witness,
        limits,
    };
    let command = cli
        .command
        .ok_or_else(|| Error::input("no command given; see --help"))?;
    match command {
        Command::Tubular {
            action: TubularAction::Analyze(input),
        } => report::tubular_report(&read_input(&input.input)?, &opts),
        Command::Fbc {
            action: FbcAction::Analyze(input),
        } => report::fbc_report(&read_input(&input.input)?, &opts),
        Command::Median { action } => match action {
            MedianAction::Verify(input) => {
                report::median_verify_report(&read_input(&input.input)?)
            }
            MedianAction::Rank(input) => {
                report::median_rank_report(&read_input(&input.input)?, &opts)
            }
            MedianAction::Hull { input, of } => {
                let elements = split_element_list(&of);
                report::median_hull_report(&read_input(&input.input)?, &elements)
            }
        },
        Command::Rbf { action } => match action {
            RbfAction::FromTubular { input, vertex } => {
                report::rbf_from_tubular_report(&read_input(&input.input)?, &vertex)
            }
            RbfAction::FromFbc(input) => {
                report::rbf_from_fbc_report(&read_input(&input.input)?)
            }
            RbfAction::Build {
                input,
                radius,
                depth,
            } => report::rbf_build_report(&read_input(&input.input)?, radius, depth, &opts),
            RbfAction::Validate(input) => {
                report::rbf_validate_report(&read_input(&input.input)?)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are not errors
            if e.use_stderr() {
                let _ = write!(std::io::stderr(), "{e}");
                return ExitCode::from(1);
            }
            let _ = write!(std::io::stdout(), "{e}");
            return ExitCode::SUCCESS;
        }
    };
    if cli.fixtures {
        list_fixtures();
        return ExitCode::SUCCESS;
    }
    let json = cli.json;
    match run(cli) {
        Ok(report) => {
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.to_json())
                        .expect("report serializes")
                );
            } else {
                print!("{}", report.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
