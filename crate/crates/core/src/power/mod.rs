//! Sample-size planning, per-item mean scores on a numeric response
//! scale, Gaussian kernel density estimates and subsample convergence.

mod convergence;
mod density;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::annotation::{AnnotationTable, Label};
use crate::error::{Error, Result};

pub use convergence::{subsample_convergence, ConvergenceConfig, ConvergencePoint, ConvergenceReport};
pub use density::{density_estimate, kernel_density, silverman_bandwidth, Bandwidth, DensityCurve};

/// Mean mapped response per unit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ItemScores {
    pub units: Vec<String>,
    pub scores: Vec<f64>,
    pub obs_counts: Vec<usize>,
    pub scale: BTreeMap<Label, f64>,
}

impl ItemScores {
    pub fn get(&self, unit: &str) -> Option<f64> {
        self.units.iter().position(|u| u == unit).map(|i| self.scores[i])
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Parses `Yes=1,Maybe=2,No=3` style scale definitions.
pub fn parse_scale(spec: &str) -> Result<BTreeMap<Label, f64>> {
    let mut scale = BTreeMap::new();
    for part in spec.split(',').filter(|p| !p.trim().is_empty()) {
        let (label, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("scale entry `{part}` is not `label=value`")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("scale value `{}` is not a number", value.trim())))?;
        if scale.insert(Label::new(label)?, value).is_some() {
            return Err(Error::Parse(format!("scale label `{}` repeated", label.trim())));
        }
    }
    if scale.is_empty() {
        return Err(Error::Parse("empty scale".into()));
    }
    Ok(scale)
}

fn mapped(table: &AnnotationTable, scale: &BTreeMap<Label, f64>) -> Result<Vec<f64>> {
    table
        .label_set()
        .iter()
        .map(|l| scale.get(l).copied().ok_or_else(|| Error::UnmappedLabel(l.to_string())))
        .collect()
}

/// Per-unit arithmetic mean of the scale values of its responses.
pub fn mean_item_scores(table: &AnnotationTable, scale: &BTreeMap<Label, f64>) -> Result<ItemScores> {
    let values = mapped(table, scale)?;
    let mut scores = Vec::with_capacity(table.n_units());
    let mut obs_counts = Vec::with_capacity(table.n_units());
    for u in 0..table.n_units() {
        let m = table.unit_len(u);
        if m == 0 {
            return Err(Error::EmptyUnit(table.units()[u].clone()));
        }
        // Sum in a fixed order so the mean does not depend on cell order.
        let mut obs: Vec<f64> = table.unit_cells(u).map(|c| values[c.label]).collect();
        obs.sort_by(f64::total_cmp);
        scores.push(obs.iter().sum::<f64>() / m as f64);
        obs_counts.push(m);
    }
    Ok(ItemScores {
        units: table.units().to_vec(),
        scores,
        obs_counts,
        scale: scale.clone(),
    })
}

/// Scale value of every observation, in cell insertion order.
pub fn observation_scores(table: &AnnotationTable, scale: &BTreeMap<Label, f64>) -> Result<Vec<f64>> {
    let values = mapped(table, scale)?;
    Ok(table.cells().iter().map(|c| values[c.label]).collect())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tails {
    One,
    #[default]
    Two,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Effect {
    /// Two independent proportions.
    Proportions { p1: f64, p2: f64 },
    /// Standardized mean difference (Cohen's d).
    StandardizedMean { d: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSpec {
    pub alpha: f64,
    pub power: f64,
    pub effect: Effect,
    pub tails: Tails,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSize {
    /// Required items per group, rounded up.
    pub per_group: u64,
    /// Unrounded formula value.
    pub exact: f64,
    pub z_alpha: f64,
    pub z_power: f64,
}

fn standard_normal_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

/// Normal-approximation sample size per group.
///
/// Proportions (unpooled): `n = (z_a + z_b)^2 (p1 q1 + p2 q2) / (p1 - p2)^2`.
/// Standardized mean difference: `n = 2 (z_a + z_b)^2 / d^2`.
/// `z_a` is the `1 - alpha / tails` quantile.
pub fn required_sample_size(spec: &PowerSpec) -> Result<SampleSize> {
    if !(spec.alpha > 0.0 && spec.alpha < 1.0) {
        return Err(Error::InvalidSpec(format!("alpha {} outside (0, 1)", spec.alpha)));
    }
    if !(spec.power > 0.0 && spec.power < 1.0) {
        return Err(Error::InvalidSpec(format!("power {} outside (0, 1)", spec.power)));
    }
    let tails = match spec.tails {
        Tails::One => 1.0,
        Tails::Two => 2.0,
    };
    let z_alpha = standard_normal_quantile(1.0 - spec.alpha / tails);
    let z_power = standard_normal_quantile(spec.power);
    let z2 = (z_alpha + z_power).powi(2);
    let exact = match spec.effect {
        Effect::Proportions { p1, p2 } => {
            for p in [p1, p2] {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidSpec(format!("proportion {p} outside [0, 1]")));
                }
            }
            if p1 == p2 {
                return Err(Error::ZeroEffect);
            }
            z2 * (p1 * (1.0 - p1) + p2 * (1.0 - p2)) / (p1 - p2).powi(2)
        }
        Effect::StandardizedMean { d } => {
            if !d.is_finite() {
                return Err(Error::InvalidSpec(format!("effect size {d} is not finite")));
            }
            if d == 0.0 {
                return Err(Error::ZeroEffect);
            }
            2.0 * z2 / (d * d)
        }
    };
    // Guard against values like 100.00000000001 from rounding noise.
    let per_group = ((exact - 1e-9).ceil() as u64).max(1);
    Ok(SampleSize {
        per_group,
        exact,
        z_alpha,
        z_power,
    })
}
