//! Annotation data model: labels, sparse units x raters tables, paired
//! labelings, 2x2 confusion counts and per-item label distributions.
//!
//! Missing ratings are represented by the absence of a cell. Labels are
//! opaque tokens; any ordinal or numeric meaning is attached at analysis
//! time.

mod aggregate;
mod distribution;
pub mod io;
mod paired;

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use aggregate::{filter_by_disagreement, majority_label, Majority, TieRule};
pub use distribution::{item_distribution, LabelDistribution};
pub(crate) use distribution::unit_distribution as distribution_of_unit;
pub use paired::{ConfusionTable2x2, PairedLabels};

/// A categorical label token. Surrounding whitespace is trimmed on
/// construction; case is preserved.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Label(String);

impl Label {
    pub fn new(token: impl AsRef<str>) -> Result<Self> {
        let trimmed = token.as_ref().trim();
        if trimmed.is_empty() {
            return Err(Error::EmptyLabel);
        }
        Ok(Label(trimmed.to_owned()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for Label {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        Label::new(value)
    }
}

impl From<Label> for String {
    fn from(label: Label) -> String {
        label.0
    }
}

impl AsRef<str> for Label {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Builds a sorted, de-duplicated label set from tokens.
pub fn label_set<I, S>(tokens: I) -> Result<Vec<Label>>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut labels = tokens
        .into_iter()
        .map(Label::new)
        .collect::<Result<Vec<_>>>()?;
    labels.sort();
    labels.dedup();
    Ok(labels)
}

/// One observation: indices into the owning table's units, raters and
/// label set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub unit: usize,
    pub rater: usize,
    pub label: usize,
}

/// Sparse units x raters matrix of categorical labels.
///
/// Units and raters keep their first-appearance order. The label set is
/// kept sorted so that category indices are canonical. Cells are stored in
/// insertion order, which is what serialization reproduces.
#[derive(Clone, Debug)]
pub struct AnnotationTable {
    units: Vec<String>,
    raters: Vec<String>,
    label_set: Vec<Label>,
    cells: Vec<Cell>,
    by_unit: Vec<Vec<usize>>,
}

impl AnnotationTable {
    pub fn builder() -> TableBuilder {
        TableBuilder::default()
    }

    /// Builds a table from `(unit_id, rater_id, label)` triples.
    ///
    /// Units and raters are ordered by first appearance. When `label_set`
    /// is `None` it is inferred from the observed labels.
    pub fn from_long_records<I, U, R, L>(rows: I, label_set: Option<&[Label]>) -> Result<Self>
    where
        I: IntoIterator<Item = (U, R, L)>,
        U: AsRef<str>,
        R: AsRef<str>,
        L: AsRef<str>,
    {
        let mut builder = TableBuilder::default();
        if let Some(set) = label_set {
            builder = builder.with_label_set(set.iter().cloned());
        }
        let mut any = false;
        for (unit, rater, label) in rows {
            builder.add(unit.as_ref(), rater.as_ref(), label.as_ref())?;
            any = true;
        }
        if !any {
            return Err(Error::EmptyInput);
        }
        builder.build()
    }

    pub fn units(&self) -> &[String] {
        &self.units
    }

    pub fn raters(&self) -> &[String] {
        &self.raters
    }

    pub fn label_set(&self) -> &[Label] {
        &self.label_set
    }

    pub fn n_units(&self) -> usize {
        self.units.len()
    }

    pub fn n_raters(&self) -> usize {
        self.raters.len()
    }

    pub fn n_labels(&self) -> usize {
        self.label_set.len()
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    /// Cells in insertion order.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn unit_index(&self, unit: &str) -> Option<usize> {
        self.units.iter().position(|u| u == unit.trim())
    }

    pub fn rater_index(&self, rater: &str) -> Option<usize> {
        self.raters.iter().position(|r| r == rater.trim())
    }

    pub fn label_index(&self, label: &Label) -> Option<usize> {
        self.label_set.binary_search(label).ok()
    }

    /// Cells of one unit, in insertion order.
    pub fn unit_cells(&self, unit: usize) -> impl Iterator<Item = &Cell> + '_ {
        self.by_unit[unit].iter().map(move |&i| &self.cells[i])
    }

    pub fn unit_len(&self, unit: usize) -> usize {
        self.by_unit[unit].len()
    }

    /// Per-category label counts for one unit, indexed like `label_set()`.
    pub fn unit_counts(&self, unit: usize) -> Vec<usize> {
        let mut counts = vec![0; self.label_set.len()];
        for cell in self.unit_cells(unit) {
            counts[cell.label] += 1;
        }
        counts
    }

    pub fn get(&self, unit: usize, rater: usize) -> Option<&Label> {
        self.unit_cells(unit)
            .find(|c| c.rater == rater)
            .map(|c| &self.label_set[c.label])
    }

    /// New table restricted to the given units (by index, in the given
    /// order). Raters and label set are kept unchanged.
    pub fn select_units(&self, keep: &[usize]) -> AnnotationTable {
        let mut units = Vec::with_capacity(keep.len());
        let mut cells = Vec::new();
        let mut by_unit = Vec::with_capacity(keep.len());
        for (new_idx, &old_idx) in keep.iter().enumerate() {
            units.push(self.units[old_idx].clone());
            let mut positions = Vec::with_capacity(self.by_unit[old_idx].len());
            for cell in self.unit_cells(old_idx) {
                positions.push(cells.len());
                cells.push(Cell {
                    unit: new_idx,
                    ..*cell
                });
            }
            by_unit.push(positions);
        }
        AnnotationTable {
            units,
            raters: self.raters.clone(),
            label_set: self.label_set.clone(),
            cells,
            by_unit,
        }
    }

    /// Same table with units listed in a different order.
    pub fn permute_units(&self, order: &[usize]) -> Result<AnnotationTable> {
        let mut seen = vec![false; self.units.len()];
        if order.len() != self.units.len() {
            return Err(Error::InvalidArgument("permutation length differs from unit count".into()));
        }
        for &i in order {
            if i >= seen.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument("not a permutation of unit indices".into()));
            }
        }
        Ok(self.select_units(order))
    }

    fn sorted_cells(&self) -> Vec<Cell> {
        let mut cells = self.cells.clone();
        cells.sort();
        cells
    }
}

impl PartialEq for AnnotationTable {
    fn eq(&self, other: &Self) -> bool {
        self.units == other.units
            && self.raters == other.raters
            && self.label_set == other.label_set
            && self.sorted_cells() == other.sorted_cells()
    }
}

impl Eq for AnnotationTable {}

/// Incremental constructor for [`AnnotationTable`].
#[derive(Debug, Default)]
pub struct TableBuilder {
    fixed_labels: Option<Vec<Label>>,
    units: Vec<String>,
    raters: Vec<String>,
    unit_ids: HashMap<String, usize>,
    rater_ids: HashMap<String, usize>,
    occupied: HashSet<(usize, usize)>,
    pending: Vec<(usize, usize, Label)>,
}

impl TableBuilder {
    /// Restricts admissible labels to `labels`.
    pub fn with_label_set(mut self, labels: impl IntoIterator<Item = Label>) -> Self {
        let mut set: Vec<Label> = labels.into_iter().collect();
        set.sort();
        set.dedup();
        self.fixed_labels = Some(set);
        self
    }

    /// Registers a unit without adding observations (used for units whose
    /// cells are all missing in wide-format input).
    pub fn add_unit(&mut self, unit: &str) -> Result<usize> {
        intern(&mut self.units, &mut self.unit_ids, unit)
    }

    pub fn add_rater(&mut self, rater: &str) -> Result<usize> {
        intern(&mut self.raters, &mut self.rater_ids, rater)
    }

    pub fn add(&mut self, unit: &str, rater: &str, label: &str) -> Result<&mut Self> {
        let label = Label::new(label)?;
        if let Some(fixed) = &self.fixed_labels {
            if fixed.binary_search(&label).is_err() {
                return Err(Error::UnknownLabel(label.0));
            }
        }
        let u = self.add_unit(unit)?;
        let r = self.add_rater(rater)?;
        if !self.occupied.insert((u, r)) {
            return Err(Error::DuplicateCell {
                unit: self.units[u].clone(),
                rater: self.raters[r].clone(),
            });
        }
        self.pending.push((u, r, label));
        Ok(self)
    }

    pub fn build(self) -> Result<AnnotationTable> {
        let label_set = match self.fixed_labels {
            Some(set) => set,
            None => {
                let mut set: Vec<Label> = self.pending.iter().map(|(_, _, l)| l.clone()).collect();
                set.sort();
                set.dedup();
                set
            }
        };
        if self.units.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut by_unit = vec![Vec::new(); self.units.len()];
        let cells = self
            .pending
            .into_iter()
            .enumerate()
            .map(|(i, (unit, rater, label))| {
                by_unit[unit].push(i);
                let label = label_set
                    .binary_search(&label)
                    .expect("label validated on insertion");
                Cell { unit, rater, label }
            })
            .collect();
        Ok(AnnotationTable {
            units: self.units,
            raters: self.raters,
            label_set,
            cells,
            by_unit,
        })
    }
}

fn intern(names: &mut Vec<String>, index: &mut HashMap<String, usize>, name: &str) -> Result<usize> {
    let name = name.trim();
    if name.is_empty() {
        return Err(Error::Parse("empty unit or rater identifier".into()));
    }
    if let Some(&i) = index.get(name) {
        return Ok(i);
    }
    names.push(name.to_owned());
    index.insert(name.to_owned(), names.len() - 1);
    Ok(names.len() - 1)
}
