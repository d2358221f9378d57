use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AnnotationTable, Label};
use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-12;

/// Empirical probability distribution over a label set.
///
/// Every label of the task's label set has an entry, including zero-mass
/// labels, so two distributions over the same task compare entry by entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelDistribution {
    probs: BTreeMap<Label, f64>,
    support_count: usize,
}

impl LabelDistribution {
    pub fn new(probs: BTreeMap<Label, f64>, support_count: usize) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("no labels".into()));
        }
        if support_count == 0 {
            return Err(Error::InvalidDistribution("support count is zero".into()));
        }
        if let Some((l, p)) = probs.iter().find(|(_, p)| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::InvalidDistribution(format!("mass {p} for `{l}`")));
        }
        let total: f64 = probs.values().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("masses sum to {total}")));
        }
        Ok(LabelDistribution {
            probs,
            support_count,
        })
    }

    /// Builds a distribution from `(label, probability)` tokens, with the
    /// support count set to 1.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, f64)]) -> Result<Self> {
        let mut probs = BTreeMap::new();
        for (label, p) in pairs {
            if probs.insert(Label::new(label)?, *p).is_some() {
                return Err(Error::InvalidDistribution(format!(
                    "label `{}` repeated",
                    label.as_ref()
                )));
            }
        }
        Self::new(probs, 1)
    }

    /// Normalizes counts aligned with `labels`.
    pub fn from_counts(labels: &[Label], counts: &[usize]) -> Result<Self> {
        if labels.len() != counts.len() {
            return Err(Error::InvalidDistribution("label and count lengths differ".into()));
        }
        let total: usize = counts.iter().sum();
        if total == 0 {
            return Err(Error::InvalidDistribution("support count is zero".into()));
        }
        let probs = labels
            .iter()
            .cloned()
            .zip(counts.iter().map(|&c| c as f64 / total as f64))
            .collect();
        Self::new(probs, total)
    }

    pub fn probs(&self) -> &BTreeMap<Label, f64> {
        &self.probs
    }

    pub fn prob(&self, label: &Label) -> Option<f64> {
        self.probs.get(label).copied()
    }

    pub fn support_count(&self) -> usize {
        self.support_count
    }

    /// Number of labels in the distribution's label set.
    pub fn k(&self) -> usize {
        self.probs.len()
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.probs.keys()
    }

    /// Masses in label order.
    pub fn values(&self) -> Vec<f64> {
        self.probs.values().copied().collect()
    }

    pub fn same_labels(&self, other: &LabelDistribution) -> bool {
        self.probs.len() == other.probs.len() && self.probs.keys().eq(other.probs.keys())
    }
}

/// Label distribution of one unit's observations.
pub fn item_distribution(table: &AnnotationTable, unit: &str) -> Result<LabelDistribution> {
    let u = table
        .unit_index(unit)
        .ok_or_else(|| Error::UnknownUnit(unit.to_owned()))?;
    unit_distribution(table, u)
}

pub(crate) fn unit_distribution(table: &AnnotationTable, u: usize) -> Result<LabelDistribution> {
    if table.unit_len(u) == 0 {
        return Err(Error::EmptyUnit(table.units()[u].clone()));
    }
    LabelDistribution::from_counts(table.label_set(), &table.unit_counts(u))
}
