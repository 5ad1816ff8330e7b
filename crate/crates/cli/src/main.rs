mod cache;
mod commands;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use ternary_core::correspondence::Convention;

use crate::cache::GenusCache;
use crate::commands::{Outcome, Rendered};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConventionArg {
    #[value(name = "dM")]
    DM,
    #[value(name = "dN")]
    DN,
}

/// Positive definite integral ternary quadratic forms.
///
/// Forms are written `a,b,c,p,q,r` for ax²+by²+cz²+pyz+qzx+rxy, or `gram:a,b,c,s,t,u` for the
/// Gram matrix with diagonal a,b,c and off-diagonal entries s,t,u (halves allowed, e.g. 2.5).
#[derive(Parser, Debug)]
#[command(name = "ternary", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Parity convention for splitting the primes of the scaling.
    #[arg(long, value_enum, global = true)]
    convention: Option<ConventionArg>,
    /// Recompute genus tables instead of reading the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Add elapsed time to JSON output (makes output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Canonical reduced form and a basis realising it.
    Reduce { form: String },
    /// Whether two forms are isometric, with an isometry.
    Isom { first: String, second: String },
    /// The automorphism group.
    Aut { form: String },
    /// The discriminant dL and 4dL.
    Disc { form: String },
    /// All classes in the genus.
    GenusEnum { form: String },
    /// The genus split into proper spinor genera.
    Spinor { form: String },
    /// The Watson transformation λ_p.
    WatsonLambda { form: String, p: i64 },
    /// The two Γ_p-descendants.
    WatsonGamma { form: String, p: i64 },
    /// The multigraph of a family slice at level m.
    WatsonGraph { form: String, p: i64, m: u32 },
    /// Representable pairs by scaling n between two genera.
    CorrPairs {
        n_form: String,
        m_form: String,
        n: i64,
    },
    /// The bipartite graph on spinor genera.
    CorrGraph {
        n_form: String,
        m_form: String,
        n: i64,
    },
    /// The split of n, the chain decomposition and L_{N,M}.
    CorrSplit {
        n_form: String,
        m_form: String,
        n: i64,
    },
    /// Predicted and observed shape of the correspondence.
    CorrAnalyze {
        n_form: String,
        m_form: String,
        n: i64,
    },
    /// A perfect matching of spinor genera and the transfer property.
    CorrMatch {
        n_form: String,
        m_form: String,
        n: i64,
    },
    /// Whether the form represents k.
    Represents {
        form: String,
        k: i64,
        #[arg(long)]
        primitive: bool,
    },
    /// Transfers a complete system of spinor exceptional integers from gen(M) to gen(N).
    Exceptional {
        n_form: String,
        m_form: String,
        n: i64,
        #[arg(required = true, num_args = 1..)]
        system: Vec<i64>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Reduce { .. } => "reduce",
            Command::Isom { .. } => "isom",
            Command::Aut { .. } => "aut",
            Command::Disc { .. } => "disc",
            Command::GenusEnum { .. } => "genus-enum",
            Command::Spinor { .. } => "spinor",
            Command::WatsonLambda { .. } => "watson-lambda",
            Command::WatsonGamma { .. } => "watson-gamma",
            Command::WatsonGraph { .. } => "watson-graph",
            Command::CorrPairs { .. } => "corr-pairs",
            Command::CorrGraph { .. } => "corr-graph",
            Command::CorrSplit { .. } => "corr-split",
            Command::CorrAnalyze { .. } => "corr-analyze",
            Command::CorrMatch { .. } => "corr-match",
            Command::Represents { .. } => "represents",
            Command::Exceptional { .. } => "exceptional",
        }
    }

    fn draws_graph(&self) -> bool {
        matches!(
            self,
            Command::WatsonGraph { .. } | Command::CorrGraph { .. }
        )
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if cli.format == Format::Dot && !cli.command.draws_graph() {
        eprintln!("error: --format dot is only available for watson-graph and corr-graph");
        return ExitCode::from(2);
    }
    let convention = match cli.convention {
        Some(ConventionArg::DM) => Convention::DM,
        Some(ConventionArg::DN) => Convention::DN,
        None => Convention::default(),
    };
    let echo = json!({
        "name": cli.command.name(),
        "args": argv.iter().skip(1).cloned().collect::<Vec<_>>(),
        "convention": convention,
    });
    let cache = GenusCache::new(!cli.no_cache);
    let t0 = Instant::now();
    let outcome = commands::run(&cli.command, convention, &cache);
    let elapsed = t0.elapsed();
    emit(
        cli.format,
        echo,
        outcome,
        cli.timing.then_some(elapsed.as_secs_f64() * 1000.0),
    )
}

fn emit(format: Format, echo: Value, outcome: Outcome, elapsed_ms: Option<f64>) -> ExitCode {
    let mut doc = json!({ "schema_version": SCHEMA_VERSION, "command": echo });
    if let Some(ms) = elapsed_ms {
        doc["elapsed_ms"] = json!(ms);
    }
    match outcome {
        Ok(Rendered { payload, text, dot }) => {
            match format {
                Format::Json => {
                    doc["payload"] = payload;
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&doc).expect("serializable")
                    );
                }
                Format::Text => print!("{text}"),
                Format::Dot => print!("{}", dot.expect("graph commands render dot")),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if format == Format::Json {
                doc["error"] = json!({ "kind": e.kind(), "message": e.to_string() });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&doc).expect("serializable")
                );
            }
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
