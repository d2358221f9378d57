//! Krippendorff's alpha with missing ratings, at each measurement level.
//!
//! Run with `cargo run --example krippendorff_alpha`.

use std::collections::BTreeMap;

use concordia::agreement::{krippendorff_alpha, MeasurementLevel};
use concordia::annotation::{AnnotationTable, Label};
use concordia::report::{OutputFormat, Render};

fn main() -> concordia::Result<()> {
    // Synthetic Likert-style ratings; not every rater saw every item.
    let rows = [
        ("q1", "r1", "agree"), ("q1", "r2", "agree"), ("q1", "r3", "neutral"),
        ("q2", "r1", "disagree"), ("q2", "r2", "disagree"),
        ("q3", "r2", "neutral"), ("q3", "r3", "agree"),
        ("q4", "r1", "agree"), ("q4", "r2", "agree"), ("q4", "r3", "agree"),
        ("q5", "r3", "disagree"),
    ];
    let table = AnnotationTable::from_long_records(rows, None)?;

    let order: Vec<Label> = ["disagree", "neutral", "agree"].iter().map(Label::new).collect::<Result<_, _>>()?;
    let values: BTreeMap<Label, f64> = order.iter().cloned().zip([1.0, 2.0, 3.0]).collect();

    for level in [
        MeasurementLevel::Nominal,
        MeasurementLevel::Ordinal(order.clone()),
        MeasurementLevel::Interval(values.clone()),
        MeasurementLevel::Ratio(values),
    ] {
        let alpha = krippendorff_alpha(&table, &level)?;
        println!("{:<9} alpha = {:.4} ({})", alpha.level, alpha.value, alpha.band);
    }

    // q5 has a single rating and is left out of the coincidences.
    let nominal = krippendorff_alpha(&table, &MeasurementLevel::Nominal)?;
    print!("\n{}", nominal.render(OutputFormat::Text)?);
    Ok(())
}
