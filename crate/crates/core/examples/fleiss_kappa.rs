//! Fleiss' kappa for a complete design read from a wide CSV.
//!
//! Run with `cargo run --example fleiss_kappa`.

use concordia::agreement::fleiss_kappa;
use concordia::annotation::io::{read_wide_csv, write_long_csv};
use concordia::report::{OutputFormat, Render};

// Synthetic: five prompts, four annotators.
const WIDE: &str = "\
unit_id,ann1,ann2,ann3,ann4
p1,safe,safe,safe,unsafe
p2,unsafe,unsafe,unsafe,unsafe
p3,safe,unsafe,safe,safe
p4,safe,safe,safe,safe
p5,unsafe,safe,unsafe,unsafe
";

fn main() -> concordia::Result<()> {
    let table = read_wide_csv(WIDE.as_bytes(), None)?;
    print!("{}", fleiss_kappa(&table)?.render(OutputFormat::Text)?);

    // Same table in the long layout the CLI reads by default.
    println!("\nlong form:\n{}", write_long_csv(&table));
    Ok(())
}
