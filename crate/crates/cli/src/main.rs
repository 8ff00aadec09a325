//! `monohecke`: command-line access to Weyl groups, canonical bases, cells,
//! the ring J and twisted centre counts.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use monohecke::{FactorBounds, RootDatum, TwistCase};
use serde_json::json;

use monohecke_cli::cache::Cache;
use monohecke_cli::commands::{self, Output, Setup, Suite, TwistSpec};
use monohecke_cli::CliError;

#[derive(Parser)]
#[command(name = "monohecke", version, about = "Monodromic Hecke algebras of finite root data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Named root datum (A1-SL2, A1-PGL2, A2, B2, G2, A3, A1xA1, GL2).
    #[arg(long)]
    preset: Option<String>,
    /// Explicit datum as JSON {rank, simple_roots, simple_coroots}, or @file.
    #[arg(long)]
    datum: Option<String>,
}

#[derive(Args)]
struct Common {
    #[command(flatten)]
    source: Source,
    /// Level: characters of the n-torsion points of the torus.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Directory for cached structure constants.
    #[arg(long, env = "MONOHECKE_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Bound on the number of characters and on block sizes.
    #[arg(long)]
    guard: Option<usize>,
    /// Order of the simple roots as a permutation of 1..r, e.g. 2,1.
    #[arg(long, value_delimiter = ',')]
    seed_order: Option<Vec<usize>>,
}

#[derive(Args)]
struct TwistArgs {
    /// Power of the Frobenius-type twist; must be prime to n.
    #[arg(long, default_value_t = 1)]
    q: u32,
    /// Diagram permutation of the simple roots (1-based), e.g. 2,1.
    #[arg(long, value_delimiter = ',')]
    pi: Option<Vec<usize>>,
    /// A (ε(λ) = q⁻¹π(λ)) or B (ε(λ) = π(λ)).
    #[arg(long, default_value = "A")]
    case: TwistCase,
    /// Exponent s of ε^s.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    s: i64,
}

#[derive(Args)]
struct LambdaArg {
    /// Character coordinates mod n (defaults to 0).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lambda: Option<Vec<i64>>,
}

#[derive(Subcommand)]
enum WeylAction {
    /// Elements of W with their lengths.
    List {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum Command {
    /// Weyl group of the datum.
    Weyl {
        #[command(subcommand)]
        action: WeylAction,
    },
    /// The W-orbit of a character with its stabilizer data.
    Block {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        lambda: LambdaArg,
    },
    /// Canonical basis and KL polynomials of a block.
    Canonical {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        lambda: LambdaArg,
    },
    /// Two-sided and left cells of every block.
    Cells {
        #[command(flatten)]
        common: Common,
    },
    /// Structure constants of J on a block.
    Jring {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        lambda: LambdaArg,
    },
    /// The twist ε, the set I^s and the ε^s-stable cells.
    Twist {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        twist: TwistArgs,
    },
    /// Simple-object counts of twisted centres of the stable cells.
    Centre {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        twist: TwistArgs,
        /// Largest Gram diagonal entry the factorization accepts.
        #[arg(long, default_value_t = 16)]
        max_diagonal: i64,
        /// Largest Gram dimension the factorization accepts.
        #[arg(long, default_value_t = 16)]
        max_dim: usize,
    },
    /// Exhaustive property suites.
    Check {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        twist: TwistArgs,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Target level for `--suite levels`.
        #[arg(long)]
        to: Option<u32>,
    },
}

fn load_datum(source: &Source) -> Result<RootDatum, CliError> {
    match (&source.preset, &source.datum) {
        (Some(name), _) => Ok(RootDatum::preset(name)?),
        (None, Some(text)) => {
            let body = match text.strip_prefix('@') {
                Some(path) => std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read datum file {path}: {e}")))?,
                None => text.clone(),
            };
            Ok(RootDatum::from_json(&body)?)
        }
        (None, None) => Err(CliError::Usage("one of --preset or --datum is required".into())),
    }
}

fn one_based(list: &[usize], what: &str) -> Result<Vec<usize>, CliError> {
    list.iter()
        .map(|&k| k.checked_sub(1).ok_or_else(|| CliError::Usage(format!("{what} entries start at 1"))))
        .collect()
}

fn setup(common: &Common) -> Result<Setup, CliError> {
    let mut datum = load_datum(&common.source)?;
    if let Some(order) = &common.seed_order {
        datum = datum.reordered(&one_based(order, "--seed-order")?)?;
    }
    Ok(Setup {
        datum,
        n: common.n,
        guard: common.guard,
        cache: common.cache_dir.clone().map(Cache::new),
    })
}

fn twist_spec(args: &TwistArgs) -> Result<TwistSpec, CliError> {
    Ok(TwistSpec {
        q: args.q,
        pi: args.pi.as_deref().map(|p| one_based(p, "--pi")).transpose()?,
        case: args.case,
        s: args.s,
    })
}

/// Runs a subcommand; the flag says whether the document failed a check.
fn run(command: &Command) -> Result<(Output, bool), CliError> {
    let out = match command {
        Command::Weyl { action: WeylAction::List { common } } => commands::weyl_list(&setup(common)?)?,
        Command::Block { common, lambda } => commands::block(&setup(common)?, &lambda.lambda)?,
        Command::Canonical { common, lambda } => commands::canonical(&setup(common)?, &lambda.lambda)?,
        Command::Cells { common } => commands::cells(&setup(common)?)?,
        Command::Jring { common, lambda } => commands::jring(&setup(common)?, &lambda.lambda)?,
        Command::Twist { common, twist } => commands::twist(&setup(common)?, &twist_spec(twist)?)?,
        Command::Centre {
            common,
            twist,
            max_diagonal,
            max_dim,
        } => {
            let bounds = FactorBounds {
                max_diagonal: *max_diagonal,
                max_dim: *max_dim,
            };
            commands::centre(&setup(common)?, &twist_spec(twist)?, bounds)?
        }
        Command::Check {
            common,
            twist,
            suite,
            to,
        } => commands::check(&setup(common)?, &twist_spec(twist)?, *suite, *to)?,
    };
    let failed = out.0.get("passed").and_then(|p| p.as_bool()) == Some(false);
    Ok((out, failed))
}

fn wants_json(command: &Command) -> bool {
    match command {
        Command::Weyl { action: WeylAction::List { common } }
        | Command::Block { common, .. }
        | Command::Canonical { common, .. }
        | Command::Cells { common }
        | Command::Jring { common, .. }
        | Command::Twist { common, .. }
        | Command::Centre { common, .. }
        | Command::Check { common, .. } => common.json,
    }
}

/// Writes to stdout; a closed pipe is not an error worth reporting.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = wants_json(&cli.command);
    match run(&cli.command) {
        Ok(((doc, text), failed)) => {
            if json {
                emit(&format!("{}\n", serde_json::to_string_pretty(&doc).expect("JSON serializes")));
            } else {
                emit(&text);
            }
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            if json {
                let obj = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
                emit(&format!("{}\n", serde_json::to_string_pretty(&obj).expect("JSON serializes")));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
