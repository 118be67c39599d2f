//! Residue tables for realized forms: the delta-type table for 1-forms, the
//! exactness of the residue sequence, and the case-table comparison for
//! 2-forms, including the documented coordinate-shift corrections.
//!
//! Run with: cargo run --example residue_tables

use kzbkit::forms::residues::{residue1_table, residue2_table, CaseStatus};

fn main() {
    residue1_table(3, 4, 8).unwrap();
    println!("first-residue table exact for n=3, pole index <= 4");
    println!("residue-matrix kernel = span of the invariant frames");

    let report = residue2_table(3, 2, 6).unwrap();
    println!(
        "\n2-form residue comparison at n=3: {} exact lines, {} shifted lines",
        report.exact_count, report.shifted_count
    );
    println!("shifted lines (merged-slot coordinate shift):");
    for line in report.lines.iter().filter(|l| l.status == CaseStatus::Shifted).take(6) {
        println!("  {} of {:?}", line.functional, line.element);
    }
    println!("  ...");
    println!(
        "every shifted line equals the printed value plus the exponential-shift \
         correction in the merged fiber coordinate; nothing is unexplained"
    );
}
