use serde::{Deserialize, Serialize};

use super::{AnnotationTable, Label};
use crate::error::{Error, Result};

/// Two complete labelings of a shared, ordered item set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairedLabels {
    pairs: Vec<(Label, Label)>,
    label_set: Vec<Label>,
}

impl PairedLabels {
    /// When `label_set` is `None` it is inferred from the observed labels.
    pub fn new(pairs: Vec<(Label, Label)>, label_set: Option<&[Label]>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyInput);
        }
        let label_set = match label_set {
            Some(set) => {
                let mut set = set.to_vec();
                set.sort();
                set.dedup();
                for (a, b) in &pairs {
                    for l in [a, b] {
                        if set.binary_search(l).is_err() {
                            return Err(Error::UnknownLabel(l.to_string()));
                        }
                    }
                }
                set
            }
            None => {
                let mut set: Vec<Label> = pairs
                    .iter()
                    .flat_map(|(a, b)| [a.clone(), b.clone()])
                    .collect();
                set.sort();
                set.dedup();
                set
            }
        };
        Ok(PairedLabels { pairs, label_set })
    }

    pub fn from_tokens<S: AsRef<str>>(pairs: &[(S, S)], label_set: Option<&[Label]>) -> Result<Self> {
        let pairs = pairs
            .iter()
            .map(|(a, b)| Ok((Label::new(a)?, Label::new(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pairs, label_set)
    }

    /// Pairs the labels two raters gave on every unit of `table`. Every unit
    /// must carry a label from both raters.
    pub fn from_table(table: &AnnotationTable, rater_a: &str, rater_b: &str) -> Result<Self> {
        let a = table
            .rater_index(rater_a)
            .ok_or_else(|| Error::UnknownRater(rater_a.to_owned()))?;
        let b = table
            .rater_index(rater_b)
            .ok_or_else(|| Error::UnknownRater(rater_b.to_owned()))?;
        let mut pairs = Vec::with_capacity(table.n_units());
        for (u, unit) in table.units().iter().enumerate() {
            let la = table.get(u, a).ok_or_else(|| Error::MissingPair {
                unit: unit.clone(),
                rater: rater_a.to_owned(),
            })?;
            let lb = table.get(u, b).ok_or_else(|| Error::MissingPair {
                unit: unit.clone(),
                rater: rater_b.to_owned(),
            })?;
            pairs.push((la.clone(), lb.clone()));
        }
        Self::new(pairs, Some(table.label_set()))
    }

    pub fn pairs(&self) -> &[(Label, Label)] {
        &self.pairs
    }

    pub fn label_set(&self) -> &[Label] {
        &self.label_set
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs as indices into `label_set()`.
    pub fn codes(&self) -> Vec<(usize, usize)> {
        self.pairs
            .iter()
            .map(|(a, b)| (self.index(a), self.index(b)))
            .collect()
    }

    fn index(&self, label: &Label) -> usize {
        self.label_set
            .binary_search(label)
            .expect("pair labels are validated against the label set")
    }

    /// k x k count matrix, rows = rater A, columns = rater B, indexed like
    /// `label_set()`.
    pub fn count_matrix(&self) -> Vec<Vec<u64>> {
        let k = self.label_set.len();
        let mut m = vec![vec![0u64; k]; k];
        for (a, b) in self.codes() {
            m[a][b] += 1;
        }
        m
    }

    /// Collapses binary paired labels into 2x2 counts with `positive` as
    /// the first category.
    pub fn to_confusion(&self, positive: &Label) -> Result<ConfusionTable2x2> {
        if self.label_set.len() != 2 {
            return Err(Error::NonBinaryLabels(self.label_set.len()));
        }
        if self.label_set.binary_search(positive).is_err() {
            return Err(Error::UnknownLabel(positive.to_string()));
        }
        let mut c = ConfusionTable2x2::default();
        for (a, b) in &self.pairs {
            match (a == positive, b == positive) {
                (true, true) => c.tt += 1,
                (true, false) => c.tf += 1,
                (false, true) => c.ft += 1,
                (false, false) => c.ff += 1,
            }
        }
        Ok(c)
    }
}

/// Paired binary counts. The first letter is rater A's label, the second
/// rater B's (`t` = positive, `f` = negative).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawConfusion")]
pub struct ConfusionTable2x2 {
    pub tt: u64,
    pub tf: u64,
    pub ft: u64,
    pub ff: u64,
}

#[derive(Deserialize)]
struct RawConfusion {
    tt: u64,
    tf: u64,
    ft: u64,
    ff: u64,
}

impl TryFrom<RawConfusion> for ConfusionTable2x2 {
    type Error = Error;

    fn try_from(raw: RawConfusion) -> Result<Self> {
        ConfusionTable2x2::new(raw.tt, raw.tf, raw.ft, raw.ff)
    }
}

impl ConfusionTable2x2 {
    pub fn new(tt: u64, tf: u64, ft: u64, ff: u64) -> Result<Self> {
        let c = ConfusionTable2x2 { tt, tf, ft, ff };
        if c.n() == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(c)
    }

    pub fn n(&self) -> u64 {
        self.tt + self.tf + self.ft + self.ff
    }

    /// Discordant counts `(b, c)` = `(tf, ft)`.
    pub fn discordant(&self) -> (u64, u64) {
        (self.tf, self.ft)
    }

    /// Exchanges the roles of rater A and rater B.
    pub fn transposed(&self) -> Self {
        ConfusionTable2x2 {
            tt: self.tt,
            tf: self.ft,
            ft: self.tf,
            ff: self.ff,
        }
    }

    /// Row-major `[[tt, tf], [ft, ff]]`.
    pub fn matrix(&self) -> [[u64; 2]; 2] {
        [[self.tt, self.tf], [self.ft, self.ff]]
    }

    /// Expands the counts into item-level pairs, ordered tt, tf, ft, ff.
    pub fn to_paired(&self, positive: &Label, negative: &Label) -> Result<PairedLabels> {
        if positive == negative {
            return Err(Error::NonBinaryLabels(1));
        }
        let (p, n) = (positive, negative);
        let mut pairs = Vec::with_capacity(self.n() as usize);
        for (count, a, b) in [(self.tt, p, p), (self.tf, p, n), (self.ft, n, p), (self.ff, n, n)] {
            pairs.extend((0..count).map(|_| (a.clone(), b.clone())));
        }
        PairedLabels::new(pairs, Some(&[p.clone(), n.clone()]))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("confusion counts always serialize")
    }
}
