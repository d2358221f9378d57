//! Majority vote and disagreement-based filtering.
//!
//! Run with `cargo run --example aggregation`.

use concordia::annotation::{filter_by_disagreement, item_distribution, majority_label, AnnotationTable, Majority, TieRule};

fn main() -> concordia::Result<()> {
    // Synthetic: three raters, four items.
    let table = AnnotationTable::from_long_records(
        [
            ("i1", "r1", "a"), ("i1", "r2", "a"), ("i1", "r3", "a"),
            ("i2", "r1", "a"), ("i2", "r2", "b"), ("i2", "r3", "a"),
            ("i3", "r1", "a"), ("i3", "r2", "b"), ("i3", "r3", "c"),
            ("i4", "r1", "b"), ("i4", "r2", "c"),
        ],
        None,
    )?;

    for unit in table.units() {
        let dist = item_distribution(&table, unit)?;
        let vote = match majority_label(&dist, TieRule::Unresolved) {
            Majority::Label(l) => l.to_string(),
            Majority::Unresolved => "tie".to_owned(),
        };
        println!("{unit}: majority {vote}");
    }

    // Drop items whose normalized label entropy exceeds 0.9.
    let (kept, excluded) = filter_by_disagreement(&table, 0.9)?;
    println!("kept {:?}, excluded {:?}", kept.units(), excluded.units());
    Ok(())
}
