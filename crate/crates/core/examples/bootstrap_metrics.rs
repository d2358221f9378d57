//! Hard metrics with percentile bootstrap intervals.
//!
//! Run with `cargo run --release --example bootstrap_metrics`.

use concordia::annotation::{ConfusionTable2x2, Label};
use concordia::bootstrap::{bootstrap_ci, BootstrapConfig};
use concordia::report::{OutputFormat, Render};
use concordia::significance::{classification_metrics, Metric, TruthAxis};

fn main() -> concordia::Result<()> {
    // Synthetic: a model scored against a human reference on 400 items.
    let counts = ConfusionTable2x2::new(70, 30, 20, 280)?;
    print!("{}", classification_metrics(&counts, TruthAxis::A).render(OutputFormat::Text)?);

    let paired = counts.to_paired(&Label::new("yes")?, &Label::new("no")?)?;
    let positive = Label::new("yes")?;
    let config = BootstrapConfig { replicates: 2000, level: 0.95, seed: 7 };
    for metric in [Metric::Accuracy, Metric::Precision, Metric::Recall, Metric::F1] {
        let ci = bootstrap_ci(metric, &paired, &positive, TruthAxis::A, &config)?;
        print!("{}", ci.render(OutputFormat::Text)?);
    }

    // Same seed, same interval, regardless of thread count.
    let again = bootstrap_ci(Metric::F1, &paired, &positive, TruthAxis::A, &config)?;
    let first = bootstrap_ci(Metric::F1, &paired, &positive, TruthAxis::A, &config)?;
    assert_eq!(again, first);
    Ok(())
}
