//! End-to-end check of the bundled case-study counts.
//!
//! Run with `cargo run --example case_study`.

use concordia::annotation::ConfusionTable2x2;
use concordia::report::{reproduce_case_study, reproduce_case_study_with, OutputFormat, Render};

fn main() -> concordia::Result<()> {
    let report = reproduce_case_study()?;
    print!("{}", report.render(OutputFormat::Text)?);

    // A single altered cell is caught.
    let tampered = ConfusionTable2x2 { ff: report.counts.ff + 100, ..report.counts };
    let check = reproduce_case_study_with(&tampered)?;
    println!("\nwith ff + 100: overall {}", if check.overall { "PASS" } else { "FAIL" });

    // Swapping the raters keeps every statistic but reverses the diagnosis.
    let swapped = reproduce_case_study_with(&report.counts.transposed())?;
    println!("swapped raters: {}", swapped.notes[1]);
    Ok(())
}
