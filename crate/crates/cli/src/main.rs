use std::path::PathBuf;
use std::process::ExitCode;

use cartankit::flatmodels::{build_model, ModelSpec};
use cartankit::suite::{self, OctonionPart, SuiteOptions};
use cartankit::CheckReport;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_MODEL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "cartankit", version, about = "Exact checks for free distributions, split octonions and their tractor geometry")]
struct Cli {
    /// Also write the reports as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Trials for randomized property checks.
    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every check.
    VerifyAll,
    /// Lie algebra homology H2(p+, g) of so(n+1,n).
    Homology {
        #[arg(long)]
        n: usize,
    },
    /// Split octonion checks.
    Octonion {
        #[arg(value_enum)]
        part: Part,
    },
    /// Fefferman-type inclusions and exceptional isomorphisms.
    Inclusions {
        /// One of spinorial, cr, lagrangian, lagrangian-nontransverse, sl4, su22, four-form.
        #[arg(long)]
        case: Option<String>,
    },
    /// Normality and infinitesimal holonomy of a model given as JSON.
    Holonomy {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
    },
    /// The conformal structure of a free 3-distribution.
    Conformal3,
    /// Pointwise tractor algebra for n = 3.
    Tractor,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Part {
    Table,
    Derivations,
    Classify,
}

#[derive(Serialize)]
struct Output<'a> {
    command: String,
    seed: u64,
    trials: usize,
    max_n: usize,
    passed: bool,
    failed: Vec<&'a str>,
    reports: &'a [CheckReport],
}

fn max_n() -> Result<usize, String> {
    match std::env::var("CARTANKIT_MAX_N") {
        Err(_) => Ok(5),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 2 => Ok(n),
            _ => Err(format!("CARTANKIT_MAX_N must be an integer >= 2, got '{s}'")),
        },
    }
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn run(cli: &Cli, opts: &SuiteOptions) -> Result<Vec<CheckReport>, (u8, String)> {
    let lib = |e: cartankit::Error| (EXIT_FAIL, e.to_string());
    Ok(match &cli.command {
        Command::VerifyAll => suite::verify_all(opts).map_err(lib)?,
        Command::Homology { n } => {
            if *n < 2 || *n > opts.max_n {
                return Err((EXIT_USAGE, format!("--n must lie in 2..={} (raise CARTANKIT_MAX_N for more)", opts.max_n)));
            }
            suite::homology(*n)
        }
        Command::Octonion { part } => {
            let p = match part {
                Part::Table => OctonionPart::Table,
                Part::Derivations => OctonionPart::Derivations,
                Part::Classify => OctonionPart::Classify,
            };
            suite::octonion(p, opts)
        }
        Command::Inclusions { case } => suite::inclusions(case.as_deref(), opts).map_err(|e| (EXIT_USAGE, e))?,
        Command::Holonomy { model } => {
            let text = std::fs::read_to_string(model).map_err(|e| (EXIT_MODEL, format!("{}: {e}", model.display())))?;
            let spec = ModelSpec::from_json(&text).map_err(|e| (EXIT_MODEL, e.to_string()))?;
            if spec.n > opts.max_n {
                return Err((EXIT_USAGE, format!("model rank {} exceeds CARTANKIT_MAX_N = {}", spec.n, opts.max_n)));
            }
            let modification = spec.to_modification().map_err(|e| (EXIT_MODEL, e.to_string()))?;
            let m = build_model(spec.n, modification).map_err(|e| (EXIT_MODEL, e.to_string()))?;
            suite::holonomy(&m, opts)
        }
        Command::Conformal3 => suite::conformal(opts).map_err(lib)?,
        Command::Tractor => suite::tractor(opts),
    })
}

fn command_name(c: &Command) -> String {
    match c {
        Command::VerifyAll => "verify-all".into(),
        Command::Homology { n } => format!("homology --n {n}"),
        Command::Octonion { part } => format!("octonion {}", format!("{part:?}").to_lowercase()),
        Command::Inclusions { case } => match case {
            Some(c) => format!("inclusions --case {c}"),
            None => "inclusions".into(),
        },
        Command::Holonomy { model } => format!("holonomy --model {}", model.display()),
        Command::Conformal3 => "conformal3".into(),
        Command::Tractor => "tractor".into(),
    }
}

fn print_report(r: &CheckReport) {
    let tag = match r.status {
        cartankit::Status::Pass => "pass",
        cartankit::Status::Fail => "FAIL",
        cartankit::Status::Skipped => "skip",
    };
    println!("[{tag}] {}: {}", r.id, r.anchor);
    if !r.passed() || std::env::var_os("CARTANKIT_VERBOSE").is_some() {
        println!("       {}", r.payload);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let max_n = match max_n() {
        Ok(n) => n,
        Err(e) => return usage(&e),
    };
    let opts = SuiteOptions { seed: cli.seed, trials: cli.trials, max_n };
    let mut reports = match run(&cli, &opts) {
        Ok(r) => r,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(code);
        }
    };
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    for r in &reports {
        print_report(r);
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.id.as_str()).collect();
    println!("{} checks, {} failed", reports.len(), failed.len());
    if let Some(path) = &cli.json {
        let out = Output {
            command: command_name(&cli.command),
            seed: cli.seed,
            trials: cli.trials,
            max_n,
            passed: failed.is_empty(),
            failed: failed.clone(),
            reports: &reports,
        };
        let text = serde_json::to_string_pretty(&out).expect("reports serialize");
        if let Err(e) = std::fs::write(path, text + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_FAIL);
        }
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}
