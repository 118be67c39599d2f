//! Run the full verification suite programmatically and emit the JSON
//! report.
//!
//! Run with: cargo run --example full_report

use kzbkit::harness::{emit_report, run_suite, ReportFormat, SuiteConfig};

fn main() {
    let cfg = SuiteConfig {
        // a lighter profile than the desk default, for a quick demo
        n: 2,
        depth: 5,
        alpha_max: 2,
        order: 8,
        ..SuiteConfig::default()
    };
    let report = run_suite(&cfg).unwrap();
    println!("{}", emit_report(&report, ReportFormat::Json));
    eprintln!(
        "{} items: {} passed, {} failed, {} inconclusive",
        report.summary.total,
        report.summary.passed,
        report.summary.failed,
        report.summary.inconclusive
    );
    std::process::exit(report.exit_code());
}
