//! `procat`: load finitely presented diagrams of pro-objects, run the
//! constructions and checks, and print depth-stamped reports.

mod base;
mod commands;
mod model;
mod report;
mod spec;

use clap::{Parser, Subcommand, ValueEnum};
use commands::{Failure, Outcome};
use procat::base::{FinAb, FinSet, FreeAb};
use procat::{Check, ProError, Verdict};
use report::Report;
use sha2::{Digest, Sha256};
use spec::{SpecError, SpecFile};
use std::process::ExitCode;
use std::time::Instant;

const DEPTH_ENV: &str = "PROLIM_DEPTH_DEFAULT";
const DEPTH_FALLBACK: usize = 4;

#[derive(Parser)]
#[command(
    name = "procat",
    version,
    about = "Constructions and bounded certificates for pro-objects"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Add the wall time to the report (reports stop being byte-identical).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelMethod {
    Level,
    Strict,
}

#[derive(Clone, Copy, ValueEnum)]
enum LimitMethod {
    Product,
    Pairs,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Level representation of a finite diagram of pro-objects.
    Levelrep {
        spec: String,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum, default_value_t = LevelMethod::Level)]
        method: LevelMethod,
    },
    /// Limit of a tower of pro-objects, or of a finite diagram.
    Prolim {
        spec: String,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum, default_value_t = LimitMethod::Both)]
        method: LimitMethod,
    },
    /// Colimit of a finite diagram of pro-objects over A x K.
    Procolim {
        spec: String,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Size of Hom(X, Y) on windows.
    Homset {
        spec: String,
        x: String,
        y: String,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Cofiltered limits against finite colimits on a tower of diagrams.
    CheckCommute {
        spec: String,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// The built-in sequence of free groups whose colimit is not exact.
    ReproInexactness {
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Cocompactness of X against seeded cofiltered systems.
    Cocompact {
        spec: String,
        x: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A usage or input error: printed to stderr, exit status 1.
struct Usage(String);

fn default_depth(file: Option<usize>) -> Result<usize, Usage> {
    if let Some(d) = file {
        return Ok(d);
    }
    match std::env::var(DEPTH_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Usage(format!("{DEPTH_ENV}={v} is not a depth"))),
        Err(_) => Ok(DEPTH_FALLBACK),
    }
}

struct Input {
    path: String,
    text: String,
    spec: SpecFile,
    digest: String,
}

fn load(path: &str) -> Result<Input, Usage> {
    let bytes = std::fs::read(path).map_err(|e| Usage(format!("{path}: {e}")))?;
    let text = String::from_utf8(bytes).map_err(|_| Usage(format!("{path}: not UTF-8")))?;
    let digest: String = Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    let digest = format!("sha256:{digest}");
    let spec = spec::parse(&text).map_err(|e| Usage(e.render(path, &text)))?;
    Ok(Input {
        path: path.into(),
        text,
        spec,
        digest,
    })
}

/// Budget and verification failures become checks; anything else is an
/// input error.
fn settle(
    name: &str,
    depth: usize,
    r: Outcome,
    input: Option<&Input>,
) -> Result<(Vec<Check>, Option<serde_json::Value>), Usage> {
    match r {
        Ok(v) => Ok(v),
        Err(Failure::Core(e @ ProError::Budget { .. })) => Ok((
            vec![Check::new(name, Verdict::Exhausted, depth).with_witness(e.to_string())],
            None,
        )),
        Err(Failure::Core(e @ ProError::Verification { .. })) => Ok((
            vec![Check::new(name, Verdict::Refuted, depth).with_witness(e.to_string())],
            None,
        )),
        Err(Failure::Core(e)) => Err(Usage(e.to_string())),
        Err(Failure::Spec(e)) => Err(Usage(match input {
            Some(i) => e.render(&i.path, &i.text),
            None => e.message,
        })),
    }
}

macro_rules! by_category {
    ($input:expr, $f:ident, $($arg:expr),*) => {
        match $input.spec.category.get_ref().as_str() {
            "finset" => commands::$f::<FinSet>(&$input.spec, $($arg),*),
            "finab" => commands::$f::<FinAb>(&$input.spec, $($arg),*),
            "freeab" => commands::$f::<FreeAb>(&$input.spec, $($arg),*),
            other => Err(Failure::Spec(SpecError::at($input.spec.category.span(), format!("unknown category `{other}` (finset, finab, freeab)")))),
        }
    };
}

fn run(cli: &Cli) -> Result<Report, Usage> {
    let (name, input, depth, seed, outcome) = match &cli.command {
        Command::Levelrep {
            spec,
            depth,
            method,
        } => {
            let i = load(spec)?;
            let d = depth.map_or_else(|| default_depth(i.spec.depth), Ok)?;
            let o = by_category!(i, levelrep, d, matches!(method, LevelMethod::Strict));
            ("levelrep", Some(i), d, None, o)
        }
        Command::Prolim {
            spec,
            depth,
            method,
        } => {
            let i = load(spec)?;
            let d = depth.map_or_else(|| default_depth(i.spec.depth), Ok)?;
            let m = match method {
                LimitMethod::Product => "product",
                LimitMethod::Pairs => "pairs",
                LimitMethod::Both => "both",
            };
            let o = by_category!(i, prolim, d, m);
            ("prolim", Some(i), d, None, o)
        }
        Command::Procolim { spec, depth } => {
            let i = load(spec)?;
            let d = depth.map_or_else(|| default_depth(i.spec.depth), Ok)?;
            let o = by_category!(i, procolim, d);
            ("procolim", Some(i), d, None, o)
        }
        Command::Homset { spec, x, y, depth } => {
            let i = load(spec)?;
            let d = depth.map_or_else(|| default_depth(i.spec.depth), Ok)?;
            let o = by_category!(i, homset, d, x, y);
            ("homset", Some(i), d, None, o)
        }
        Command::CheckCommute { spec, depth } => {
            let i = load(spec)?;
            let d = depth.map_or_else(|| default_depth(i.spec.depth), Ok)?;
            let o = by_category!(i, check_commute_cmd, d);
            ("check-commute", Some(i), d, None, o)
        }
        Command::ReproInexactness { depth } => {
            let d = depth.map_or_else(|| default_depth(None), Ok)?;
            (
                "repro-inexactness",
                None,
                d,
                None,
                commands::repro_inexactness(d),
            )
        }
        Command::Cocompact {
            spec,
            x,
            samples,
            depth,
            seed,
        } => {
            let i = load(spec)?;
            let d = depth.map_or_else(|| default_depth(i.spec.depth), Ok)?;
            let o = by_category!(i, cocompact, d, x, *samples, *seed);
            ("cocompact", Some(i), d, Some(*seed), o)
        }
    };
    let (checks, output) = settle(name, depth, outcome, input.as_ref())?;
    let mut r = Report::new(name, input.map(|i| i.digest), depth, checks, output);
    r.seed = seed;
    Ok(r)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    match run(&cli) {
        Ok(mut r) => {
            if cli.timing {
                r.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            match cli.format {
                Format::Text => print!("{}", r.text()),
                Format::Json => print!("{}", r.json()),
            }
            ExitCode::from(r.exit_code() as u8)
        }
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
