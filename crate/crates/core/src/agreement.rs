//! Inter-rater reliability coefficients.
//!
//! Which coefficient applies depends on the design: Cohen's kappa for
//! exactly two raters, Fleiss' kappa when every rater labels every unit,
//! Krippendorff's alpha when ratings are missing.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::annotation::{AnnotationTable, ConfusionTable2x2, Label, PairedLabels};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Percent,
    CohenKappa,
    FleissKappa,
    KrippendorffAlpha,
}

impl Statistic {
    /// Column heading used in text tables.
    pub fn heading(self) -> &'static str {
        match self {
            Statistic::Percent => "Agreement",
            Statistic::CohenKappa | Statistic::FleissKappa => "Kappa",
            Statistic::KrippendorffAlpha => "alpha",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Statistic::Percent => "Percent Agreement",
            Statistic::CohenKappa => "Cohen's Kappa",
            Statistic::FleissKappa => "Fleiss' Kappa",
            Statistic::KrippendorffAlpha => "Krippendorff's Alpha",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelKind {
    #[default]
    Nominal,
    Ordinal,
    Interval,
    Ratio,
}

impl fmt::Display for LevelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LevelKind::Nominal => "nominal",
            LevelKind::Ordinal => "ordinal",
            LevelKind::Interval => "interval",
            LevelKind::Ratio => "ratio",
        })
    }
}

/// Measurement level used by Krippendorff's alpha, with the extra
/// structure each level needs.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum MeasurementLevel {
    #[default]
    Nominal,
    /// Labels from lowest to highest rank.
    Ordinal(Vec<Label>),
    Interval(BTreeMap<Label, f64>),
    /// Values must be non-negative.
    Ratio(BTreeMap<Label, f64>),
}

impl MeasurementLevel {
    pub fn kind(&self) -> LevelKind {
        match self {
            MeasurementLevel::Nominal => LevelKind::Nominal,
            MeasurementLevel::Ordinal(_) => LevelKind::Ordinal,
            MeasurementLevel::Interval(_) => LevelKind::Interval,
            MeasurementLevel::Ratio(_) => LevelKind::Ratio,
        }
    }

    /// Per-category coordinates aligned with `label_set`: rank positions for
    /// ordinal data, mapped values for interval and ratio data.
    fn coordinates(&self, label_set: &[Label]) -> Result<Vec<f64>> {
        match self {
            MeasurementLevel::Nominal => Ok((0..label_set.len()).map(|i| i as f64).collect()),
            MeasurementLevel::Ordinal(order) => {
                let mut sorted = order.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != order.len() {
                    return Err(Error::InvalidMeasurementLevel("ordinal order repeats a label".into()));
                }
                label_set
                    .iter()
                    .map(|l| {
                        order.iter().position(|o| o == l).map(|p| p as f64).ok_or_else(|| {
                            Error::InvalidMeasurementLevel(format!("label `{l}` has no rank"))
                        })
                    })
                    .collect()
            }
            MeasurementLevel::Interval(values) | MeasurementLevel::Ratio(values) => {
                let mut seen: Vec<f64> = values.values().copied().collect();
                if seen.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidMeasurementLevel("non-finite scale value".into()));
                }
                if matches!(self, MeasurementLevel::Ratio(_)) && seen.iter().any(|&v| v < 0.0) {
                    return Err(Error::InvalidMeasurementLevel("ratio values must be non-negative".into()));
                }
                seen.sort_by(f64::total_cmp);
                if seen.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::InvalidMeasurementLevel("scale mapping is not injective".into()));
                }
                label_set
                    .iter()
                    .map(|l| {
                        values.get(l).copied().ok_or_else(|| {
                            Error::InvalidMeasurementLevel(format!("label `{l}` has no value"))
                        })
                    })
                    .collect()
            }
        }
    }
}

/// A named agreement coefficient with the counts it was computed from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityResult {
    pub statistic: Statistic,
    pub value: f64,
    pub n_subjects: usize,
    pub n_raters: usize,
    pub level: LevelKind,
    pub band: String,
    /// Units dropped because they carried a single observation
    /// (Krippendorff's alpha only; zero otherwise).
    pub excluded_units: usize,
}

impl ReliabilityResult {
    fn coefficient(statistic: Statistic, value: f64, n_subjects: usize, n_raters: usize, level: LevelKind) -> Result<Self> {
        Ok(ReliabilityResult {
            statistic,
            value,
            n_subjects,
            n_raters,
            level,
            band: interpret_band(value)?.to_owned(),
            excluded_units: 0,
        })
    }

    /// Value rounded to 4 decimal places, as shown in reports.
    pub fn display_value(&self) -> String {
        format!("{:.4}", self.value)
    }
}

/// Landis-Koch style descriptor for a coefficient in `[-1, 1]`.
pub fn interpret_band(value: f64) -> Result<&'static str> {
    if !(-1.0..=1.0).contains(&value) {
        return Err(Error::OutOfRange(value));
    }
    Ok(match value {
        v if v < 0.0 => "poor",
        v if v <= 0.20 => "slight",
        v if v <= 0.40 => "fair",
        v if v <= 0.60 => "moderate",
        v if v <= 0.80 => "substantial",
        _ => "almost perfect",
    })
}

/// Fraction of pairs on which both raters agree.
pub fn percent_agreement(paired: &PairedLabels) -> Result<f64> {
    if paired.is_empty() {
        return Err(Error::EmptyInput);
    }
    let agree = paired.pairs().iter().filter(|(a, b)| a == b).count();
    Ok(agree as f64 / paired.len() as f64)
}

pub fn percent_agreement_counts(confusion: &ConfusionTable2x2) -> f64 {
    (confusion.tt + confusion.ff) as f64 / confusion.n() as f64
}

/// Agreement expected when two raters pick uniformly among `k` labels.
pub fn chance_agreement_uniform(k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::TooFewLabels(k));
    }
    Ok(1.0 / k as f64)
}

/// Cohen's kappa for two raters over any number of categories.
pub fn cohen_kappa(paired: &PairedLabels) -> Result<ReliabilityResult> {
    let m = paired.count_matrix();
    let value = kappa_from_matrix(&m)?;
    ReliabilityResult::coefficient(Statistic::CohenKappa, value, paired.len(), 2, LevelKind::Nominal)
}

/// Cohen's kappa from 2x2 counts.
pub fn cohen_kappa_confusion(confusion: &ConfusionTable2x2) -> Result<ReliabilityResult> {
    let m: Vec<Vec<u64>> = confusion.matrix().iter().map(|r| r.to_vec()).collect();
    let value = kappa_from_matrix(&m)?;
    ReliabilityResult::coefficient(
        Statistic::CohenKappa,
        value,
        confusion.n() as usize,
        2,
        LevelKind::Nominal,
    )
}

// kappa = (p_o - p_e) / (1 - p_e) = (agree*n - S) / (n^2 - S) with
// S = sum_k row_k * col_k. Integer sums make the result independent of the
// category order, so the paired and 2x2 routes agree bit for bit.
fn kappa_from_matrix(m: &[Vec<u64>]) -> Result<f64> {
    let k = m.len();
    let n: u128 = m.iter().flatten().map(|&c| c as u128).sum();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let agree: u128 = (0..k).map(|i| m[i][i] as u128).sum();
    let chance: u128 = (0..k)
        .map(|c| {
            let row: u128 = m[c].iter().map(|&x| x as u128).sum();
            let col: u128 = m.iter().map(|r| r[c] as u128).sum();
            row * col
        })
        .sum();
    let denom = n * n - chance;
    if denom == 0 {
        return Err(Error::DegenerateMarginals);
    }
    let numer = (agree * n) as i128 - chance as i128;
    Ok(numer as f64 / denom as f64)
}

/// Fleiss' kappa for a complete design: every unit rated by every rater.
pub fn fleiss_kappa(table: &AnnotationTable) -> Result<ReliabilityResult> {
    let m = table.n_raters();
    if m < 2 {
        return Err(Error::IncompleteDesign(format!("{m} rater(s); at least 2 required")));
    }
    if table.n_units() == 0 {
        return Err(Error::EmptyInput);
    }
    let k = table.n_labels();
    let mut totals = vec![0u64; k];
    let mut agreement_sum = 0.0;
    for u in 0..table.n_units() {
        if table.unit_len(u) != m {
            return Err(Error::IncompleteDesign(format!(
                "unit `{}` has {} of {m} ratings",
                table.units()[u],
                table.unit_len(u)
            )));
        }
        let counts = table.unit_counts(u);
        let sq: usize = counts.iter().map(|c| c * c).sum();
        agreement_sum += (sq - m) as f64 / (m * (m - 1)) as f64;
        for (t, c) in totals.iter_mut().zip(&counts) {
            *t += *c as u64;
        }
    }
    let n_units = table.n_units();
    let all = (n_units * m) as u64;
    if totals.contains(&all) {
        return Err(Error::DegenerateMarginals);
    }
    let p_bar = agreement_sum / n_units as f64;
    let p_e: f64 = totals
        .iter()
        .map(|&t| {
            let p = t as f64 / all as f64;
            p * p
        })
        .sum();
    let value = (p_bar - p_e) / (1.0 - p_e);
    ReliabilityResult::coefficient(Statistic::FleissKappa, value, n_units, m, LevelKind::Nominal)
}

/// Krippendorff's alpha from the coincidence matrix of pairable values.
///
/// Units with fewer than two observations cannot be paired; those with
/// exactly one are counted in `excluded_units`.
pub fn krippendorff_alpha(table: &AnnotationTable, level: &MeasurementLevel) -> Result<ReliabilityResult> {
    let coords = level.coordinates(table.label_set())?;
    let k = table.n_labels();
    let mut coincidence = vec![vec![0.0f64; k]; k];
    let mut pairable = 0usize;
    let mut excluded = 0usize;
    for u in 0..table.n_units() {
        let m_u = table.unit_len(u);
        match m_u {
            0 => continue,
            1 => {
                excluded += 1;
                continue;
            }
            _ => pairable += 1,
        }
        let counts = table.unit_counts(u);
        let w = (m_u - 1) as f64;
        for c in 0..k {
            if counts[c] == 0 {
                continue;
            }
            for d in 0..k {
                let pairs = if c == d {
                    counts[c] * (counts[c] - 1)
                } else {
                    counts[c] * counts[d]
                };
                if pairs > 0 {
                    coincidence[c][d] += pairs as f64 / w;
                }
            }
        }
    }
    if pairable == 0 {
        return Err(Error::NoPairableValues);
    }
    let marginals: Vec<f64> = coincidence.iter().map(|row| row.iter().sum()).collect();
    let n: f64 = marginals.iter().sum();
    let delta = difference_matrix(level.kind(), &coords, &marginals);

    let mut observed = 0.0;
    let mut expected = 0.0;
    for c in 0..k {
        for d in 0..k {
            observed += coincidence[c][d] * delta[c][d];
            expected += marginals[c] * marginals[d] * delta[c][d];
        }
    }
    if expected <= 0.0 {
        return Err(Error::DegenerateValues);
    }
    let value = 1.0 - (n - 1.0) * observed / expected;
    let mut result = ReliabilityResult::coefficient(
        Statistic::KrippendorffAlpha,
        value.clamp(-1.0, 1.0),
        pairable,
        table.n_raters(),
        level.kind(),
    )?;
    // alpha can fall below -1 on adversarial data; keep the raw value.
    result.value = value;
    result.excluded_units = excluded;
    Ok(result)
}

/// Squared difference function for each pair of categories.
fn difference_matrix(kind: LevelKind, coords: &[f64], marginals: &[f64]) -> Vec<Vec<f64>> {
    let k = coords.len();
    let mut delta = vec![vec![0.0; k]; k];
    for c in 0..k {
        for d in 0..k {
            delta[c][d] = match kind {
                LevelKind::Nominal => f64::from(u8::from(c != d)),
                LevelKind::Interval => (coords[c] - coords[d]).powi(2),
                LevelKind::Ratio => {
                    let sum = coords[c] + coords[d];
                    if sum == 0.0 {
                        0.0
                    } else {
                        ((coords[c] - coords[d]) / sum).powi(2)
                    }
                }
                LevelKind::Ordinal => {
                    if c == d {
                        0.0
                    } else {
                        let (lo, hi) = if coords[c] < coords[d] {
                            (coords[c], coords[d])
                        } else {
                            (coords[d], coords[c])
                        };
                        let between: f64 = (0..k)
                            .filter(|&g| coords[g] >= lo && coords[g] <= hi)
                            .map(|g| marginals[g])
                            .sum();
                        (between - (marginals[c] + marginals[d]) / 2.0).powi(2)
                    }
                }
            };
        }
    }
    delta
}
