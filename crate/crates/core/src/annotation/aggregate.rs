//! Disagreement-as-noise aggregation: majority vote and exclusion of
//! high-disagreement items.

use serde::{Deserialize, Serialize};

use super::distribution::unit_distribution;
use super::{AnnotationTable, Label, LabelDistribution};
use crate::error::{Error, Result};
use crate::soft::{item_entropy, LogBase};

/// How `majority_label` resolves a tie for the top mass.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieRule {
    #[default]
    Unresolved,
    Lexicographic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Majority {
    Label(Label),
    Unresolved,
}

impl Majority {
    pub fn label(&self) -> Option<&Label> {
        match self {
            Majority::Label(l) => Some(l),
            Majority::Unresolved => None,
        }
    }
}

/// Most probable label. Ties (exactly equal masses) are either left
/// unresolved or broken toward the lexicographically smallest label.
pub fn majority_label(dist: &LabelDistribution, tie_rule: TieRule) -> Majority {
    let max = dist.probs().values().copied().fold(f64::NEG_INFINITY, f64::max);
    // BTreeMap iteration is sorted, so the first tied label is the smallest.
    let mut tied = dist.probs().iter().filter(|(_, &p)| p == max).map(|(l, _)| l);
    let first = tied.next().expect("distribution has at least one label");
    match (tied.next(), tie_rule) {
        (None, _) | (Some(_), TieRule::Lexicographic) => Majority::Label(first.clone()),
        (Some(_), TieRule::Unresolved) => Majority::Unresolved,
    }
}

/// Splits units into `(kept, excluded)` by normalized label entropy: a unit
/// is excluded when its entropy is strictly above `threshold`.
///
/// Entropy is normalized by the size of the table's label set. With a
/// single-label set no unit can show disagreement and all are kept.
pub fn filter_by_disagreement(
    table: &AnnotationTable,
    threshold: f64,
) -> Result<(AnnotationTable, AnnotationTable)> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidThreshold(threshold));
    }
    let mut kept = Vec::new();
    let mut excluded = Vec::new();
    for u in 0..table.n_units() {
        let dist = unit_distribution(table, u)?;
        let h = if table.n_labels() < 2 {
            0.0
        } else {
            item_entropy(&dist, LogBase::Two, true)?
        };
        if h > threshold {
            excluded.push(u);
        } else {
            kept.push(u);
        }
    }
    Ok((table.select_units(&kept), table.select_units(&excluded)))
}
