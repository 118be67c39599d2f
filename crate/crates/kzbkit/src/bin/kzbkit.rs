//! Command-line front end for the verification suite.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kzbkit::harness::{self, ReportFormat, SuiteConfig};
use kzbkit::liealg;

#[derive(Parser)]
#[command(name = "kzbkit", version, about = "exact verification suite for elliptic series, logarithmic forms, and braid-type Lie presentations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification items and emit a report.
    Verify {
        /// Item name (repeatable); defaults to the full catalog.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Point count.
        #[arg(long)]
        n: Option<u8>,
        /// Bracket-length truncation.
        #[arg(long)]
        depth: Option<usize>,
        /// Maximum pole index.
        #[arg(long = "alpha-max")]
        alpha_max: Option<u32>,
        /// Series truncation order.
        #[arg(long)]
        order: Option<usize>,
        /// Treat inconclusive results as failures.
        #[arg(long)]
        strict: bool,
        /// Worker count (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Output format.
        #[arg(long, default_value = "json")]
        format: String,
        /// Write the report to a file instead of stdout.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// Deliberate single-constant mutation for sensitivity testing.
        #[arg(long = "inject-fault")]
        inject_fault: Option<String>,
    },
    /// Print the graded dimension table of the braid-type quotient.
    Dims {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Print the item catalog.
    List,
}

fn profile_config() -> Result<SuiteConfig, kzbkit::Error> {
    match std::env::var("KZBKIT_PROFILE") {
        Ok(profile) => SuiteConfig::from_profile(&profile),
        Err(_) => Ok(SuiteConfig::desk()),
    }
}

fn run() -> Result<i32, kzbkit::Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            suites,
            n,
            depth,
            alpha_max,
            order,
            strict,
            jobs,
            format,
            out,
            inject_fault,
        } => {
            let mut cfg = profile_config()?;
            cfg.suites = suites;
            if let Some(v) = n {
                cfg.n = v;
            }
            if let Some(v) = depth {
                cfg.depth = v;
            }
            if let Some(v) = alpha_max {
                cfg.alpha_max = v;
            }
            if let Some(v) = order {
                cfg.order = v;
            }
            cfg.strict = strict;
            cfg.jobs = jobs;
            cfg.fault = inject_fault;
            cfg.validate()?;
            cfg.fault_enum()?;
            let fmt: ReportFormat = format.parse()?;
            let report = harness::run_suite(&cfg)?;
            let rendered = harness::emit_report(&report, fmt);
            match out {
                Some(path) => {
                    let mut f = std::fs::File::create(&path).map_err(|e| {
                        kzbkit::Error::InvalidConfig(format!("cannot write {path:?}: {e}"))
                    })?;
                    f.write_all(rendered.as_bytes()).map_err(|e| {
                        kzbkit::Error::InvalidConfig(format!("cannot write {path:?}: {e}"))
                    })?;
                }
                None => println!("{rendered}"),
            }
            for item in &report.items {
                let status = match item.status {
                    harness::Status::Pass => "pass",
                    harness::Status::Fail => "FAIL",
                    harness::Status::Inconclusive => "inconclusive",
                };
                eprintln!("{:<20} {}", item.name, status);
            }
            Ok(report.exit_code())
        }
        Command::Dims { n, depth, format } => {
            let q = liealg::GradedQuotient::present_t1n(n, depth)?;
            let dims = q.dims()?;
            match format.as_str() {
                "json" => {
                    let doc = serde_json::json!({ "n": n, "depth": depth, "dims": dims });
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                }
                "markdown" => {
                    println!("| length | dimension |");
                    println!("|--------|-----------|");
                    for (l, d) in dims.iter().enumerate() {
                        println!("| {} | {} |", l + 1, d);
                    }
                }
                other => {
                    return Err(kzbkit::Error::InvalidConfig(format!(
                        "unknown format {other:?}"
                    )))
                }
            }
            Ok(0)
        }
        Command::List => {
            for entry in harness::catalog() {
                println!("{:<20} {}", entry.name, entry.description);
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                kzbkit::Error::UnknownItem(_) | kzbkit::Error::InvalidConfig(_) => {
                    ExitCode::from(2)
                }
                _ => ExitCode::from(1),
            }
        }
    }
}
