//! Cohen's kappa two ways: from raw paired labels and from 2x2 counts.
//!
//! Run with `cargo run --example cohen_kappa`.

use concordia::agreement::{cohen_kappa, cohen_kappa_confusion, percent_agreement_counts};
use concordia::annotation::{ConfusionTable2x2, Label};
use concordia::report::{OutputFormat, Render, CASE_STUDY_FIXTURE};

fn main() -> concordia::Result<()> {
    // Two classifiers labeling 7795 prompts.
    let counts = ConfusionTable2x2::from_json_str(CASE_STUDY_FIXTURE)?;
    let from_counts = cohen_kappa_confusion(&counts)?;
    print!("{}", from_counts.render(OutputFormat::Text)?);
    println!("percent agreement {:.4}", percent_agreement_counts(&counts));

    // Expanding the counts into 7795 label pairs gives the same coefficient.
    let paired = counts.to_paired(&Label::new("True")?, &Label::new("False")?)?;
    let from_pairs = cohen_kappa(&paired)?;
    assert_eq!(from_pairs.value.to_bits(), from_counts.value.to_bits());
    println!("paired route agrees: {}", from_pairs.display_value());
    Ok(())
}
