use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod bench;
mod commands;

/// Meta-querying over OWL 2 QL ontologies through a Datalog reduction.
#[derive(Parser, Debug)]
#[command(name = "metaql", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct QueryArgs {
    /// Ontology in functional-style syntax (.ofn)
    pub ontology: PathBuf,
    /// SPARQL query file (.rq)
    pub query: Option<PathBuf>,
    /// Inline query text instead of a file
    #[arg(long, conflicts_with = "query")]
    pub query_string: Option<String>,
    /// Answer through the magic-sets rewriting instead of full saturation
    #[arg(long)]
    pub demand: bool,
    /// Report whether the ontology is consistent
    #[arg(long)]
    pub check_consistency: bool,
    /// Print the end-to-end time in milliseconds on stderr
    #[arg(long)]
    pub report_time: bool,
    /// Abort after this many seconds with exit code 3
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Write answers here instead of stdout
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Encode an ontology as Datalog facts
    Translate {
        ontology: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print the rule catalogue
    Rules {
        /// Print per-family counts instead of the rules
        #[arg(long)]
        stats: bool,
        /// Include the consistency-violation rules
        #[arg(long)]
        violation: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Answer a query with the Datalog engine
    Query {
        #[command(flatten)]
        args: QueryArgs,
        /// Worker threads for saturation
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Write the sorted minimal model as a .dl file
        #[arg(long)]
        dump_model: Option<PathBuf>,
    },
    /// Answer a query with the reference chase (small inputs only)
    Oracle {
        #[command(flatten)]
        args: QueryArgs,
        /// Include tuples whose witnesses are anonymous elements
        #[arg(long)]
        full: bool,
        #[arg(long, default_value_t = metaql::oracle::DEFAULT_MAX_DEPTH)]
        max_depth: usize,
    },
    /// Run a benchmark suite described by a key = value config file
    Bench {
        config: PathBuf,
        /// Concurrent (ontology, query) pairs
        #[arg(long)]
        parallel: Option<usize>,
        /// CSV destination, overriding output_csv
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Merge an extension ontology into a base ontology
    Extend {
        base: PathBuf,
        extension: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Write the synthetic university suite to a directory
    Generate {
        #[arg(long, short)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 15)]
        departments: usize,
        #[arg(long, default_value_t = 1)]
        universities: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Translate { ontology, output } => {
            commands::translate(&ontology, output.as_deref())
        }
        Command::Rules {
            stats,
            violation,
            output,
        } => commands::rules(stats, violation, output.as_deref()),
        Command::Query {
            args,
            threads,
            dump_model,
        } => commands::query(&args, threads, dump_model.as_deref()),
        Command::Oracle {
            args,
            full,
            max_depth,
        } => commands::oracle(&args, full, max_depth),
        Command::Bench {
            config,
            parallel,
            output,
        } => bench::run(&config, parallel, output.as_deref()),
        Command::Extend {
            base,
            extension,
            output,
        } => commands::extend(&base, &extension, output.as_deref()),
        Command::Generate {
            out_dir,
            departments,
            universities,
            seed,
        } => commands::generate(&out_dir, departments, universities, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e.error);
            ExitCode::from(e.code)
        }
    }
}

/// An error paired with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code,
            error: error.into(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(1, e)
    }
}

pub type CmdResult = Result<(), Failure>;
