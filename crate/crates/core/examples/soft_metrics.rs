//! Soft evaluation: keep the label distribution instead of a single gold label.
//!
//! Run with `cargo run --example soft_metrics`.

use concordia::annotation::{item_distribution, AnnotationTable, LabelDistribution};
use concordia::soft::{cross_entropy, entropy_correlation, entropy_similarity, js_divergence, EntropyVector, LogBase};

fn main() -> concordia::Result<()> {
    // Synthetic crowd labels for four prompts.
    let mut rows = Vec::new();
    let crowd = [("p1", "ssss"), ("p2", "ssvv"), ("p3", "vvvs"), ("p4", "svsv")];
    for (unit, labels) in crowd {
        for (i, l) in labels.chars().enumerate() {
            let label = if l == 's' { "subjective" } else { "verifiable" };
            rows.push((unit.to_owned(), format!("a{i}"), label.to_owned()));
        }
    }
    let human = AnnotationTable::from_long_records(rows, None)?;

    let p2 = item_distribution(&human, "p2")?;
    let model = LabelDistribution::from_pairs(&[("subjective", 0.9), ("verifiable", 0.1)])?;
    println!("JSD(human, model) on p2 = {:.4} bits", js_divergence(&p2, &model, LogBase::Two)?);
    println!("cross-entropy          = {:.4} bits", cross_entropy(&p2, &model, LogBase::Two, 0.0)?);

    let h = EntropyVector::from_table(&human, LogBase::Two, true)?;
    print!("{}", h.to_csv());

    // Per-item entropies of a hypothetical model's sampled outputs.
    let m = EntropyVector::new(h.units().to_vec(), vec![0.1, 0.8, 0.7, 0.95], LogBase::Two, true)?;
    println!("entropy similarity  {:.4}", entropy_similarity(&h, &m)?);
    println!("entropy correlation {:.4}", entropy_correlation(&h, &m)?);
    Ok(())
}
