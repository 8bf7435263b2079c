//! `orehom`: run verification scenarios over Ore extensions.
//!
//! Exit status: 0 when every case passes or is skipped, 1 when a check
//! fails, 2 when the input cannot be read, parsed or validated.

mod report;
mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use orehom_core::verify::{self, SUITES};
use sha2::{Digest, Sha256};

const SCENARIO_SCHEMA: &str = include_str!("../schemas/scenario.schema.json");
const REPORT_SCHEMA: &str = include_str!("../schemas/report.schema.json");

#[derive(Parser)]
#[command(name = "orehom", version, about = "Exact verification suites for Ore extensions of finite-dimensional algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a scenario and run its suites.
    Run(RunArgs),
    /// Print a scenario in canonical form.
    Fmt {
        scenario: PathBuf,
        /// Rewrite the file instead of printing.
        #[arg(long)]
        in_place: bool,
    },
    /// Print the JSON schema of scenarios or reports.
    Schema {
        #[arg(value_enum, default_value_t = SchemaKind::Scenario)]
        kind: SchemaKind,
    },
    /// List the available suites.
    Suites,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemaKind {
    Scenario,
    Report,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct RunArgs {
    scenario: PathBuf,
    /// Run only this suite; repeatable. Overrides the scenario's list.
    #[arg(long = "suite", value_name = "NAME")]
    suites: Vec<String>,
    #[arg(long)]
    max_degree: Option<i64>,
    #[arg(long)]
    max_k: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Input problems: exit status 2.
struct InputError(String);

fn load(path: &Path) -> Result<scenario::Scenario, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    scenario::parse(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn run(args: RunArgs) -> Result<bool, InputError> {
    let doc = load(&args.scenario)?;
    let mut built = scenario::build(&doc).map_err(|e| InputError(format!("{}: {e}", args.scenario.display())))?;
    if !args.suites.is_empty() {
        if let Some(bad) = args.suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
            return Err(InputError(format!("unknown suite {bad:?}; known suites: {}", SUITES.join(", "))));
        }
        built.suites = args.suites.clone();
    }
    let p = &mut built.params;
    if let Some(d) = args.max_degree {
        if d < 0 {
            return Err(InputError("--max-degree must be nonnegative".into()));
        }
        p.max_degree = d;
    }
    p.max_k = args.max_k.unwrap_or(p.max_k);
    p.trials = args.trials.unwrap_or(p.trials);
    p.samples = args.samples.unwrap_or(p.samples);
    p.seed = args.seed.unwrap_or(p.seed);

    let canonical = scenario::emit(&doc);
    let sha256: String = Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
    let start = Instant::now();
    let suites = verify::run(&built.suites, &built.context, &built.params).map_err(|e| InputError(e.to_string()))?;
    let run = report::Run { scenario: &doc.name, sha256: &sha256, params: &built.params, suites: &suites, total: start.elapsed() };
    let text = match args.format {
        Format::Text => run.to_text(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&run.to_json()).expect("report serializes");
            s.push('\n');
            s
        }
    };
    match &args.out {
        Some(path) => std::fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(run.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Fmt { scenario: path, in_place } => load(&path).and_then(|doc| {
            let text = scenario::emit(&doc);
            if in_place {
                std::fs::write(&path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            } else {
                print!("{text}");
            }
            Ok(true)
        }),
        Command::Schema { kind } => {
            print!("{}", match kind {
                SchemaKind::Scenario => SCENARIO_SCHEMA,
                SchemaKind::Report => REPORT_SCHEMA,
            });
            Ok(true)
        }
        Command::Suites => {
            for s in SUITES {
                println!("{s}");
            }
            Ok(true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
