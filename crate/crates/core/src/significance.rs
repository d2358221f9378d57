//! McNemar's test for two paired binary labelings, the chi-square tail
//! probability behind it, and hard classification metrics.

use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma_ur;

use crate::annotation::ConfusionTable2x2;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "test", rename = "mcnemar")]
pub struct McNemarResult {
    pub chi_square: f64,
    pub df: u32,
    pub p_value: f64,
    pub n: u64,
    #[serde(rename = "continuity")]
    pub continuity_corrected: bool,
}

impl McNemarResult {
    /// `p < .001` below the 0.001 threshold, otherwise `p = .xxx`.
    pub fn p_text(&self) -> String {
        format_p(self.p_value)
    }

    /// `χ2(1, N = 7795) = 919.18, p < .001`
    pub fn apa(&self) -> String {
        format!(
            "χ2({}, N = {}) = {:.2}, {}",
            self.df,
            self.n,
            self.chi_square,
            self.p_text()
        )
    }
}

impl fmt::Display for McNemarResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.apa())
    }
}

/// Reporting-style p-value: `p < .001` or `p = .042` (no leading zero).
pub fn format_p(p: f64) -> String {
    if p < 0.001 {
        "p < .001".to_owned()
    } else if p >= 1.0 {
        "p = 1.000".to_owned()
    } else {
        let s = format!("{p:.3}");
        format!("p = {}", s.trim_start_matches('0'))
    }
}

/// McNemar's chi-square on the discordant counts `b = tf`, `c = ft`.
///
/// With continuity correction the statistic is `(|b - c| - 1)^2 / (b + c)`,
/// with the correction term floored at zero when `|b - c| <= 1`.
pub fn mcnemar(confusion: &ConfusionTable2x2, continuity: bool) -> Result<McNemarResult> {
    let (b, c) = confusion.discordant();
    let discordant = b + c;
    if discordant == 0 {
        return Err(Error::NoDiscordantPairs);
    }
    let diff = b.abs_diff(c) as f64;
    let numer = if continuity { (diff - 1.0).max(0.0) } else { diff };
    let chi_square = numer * numer / discordant as f64;
    Ok(McNemarResult {
        chi_square,
        df: 1,
        p_value: chi_square_sf(chi_square, 1)?,
        n: confusion.n(),
        continuity_corrected: continuity,
    })
}

/// Upper-tail probability `P(X >= x)` of a chi-square distribution.
///
/// One degree of freedom uses `erfc(sqrt(x / 2))`; other df values go
/// through the regularized upper incomplete gamma function.
pub fn chi_square_sf(x: f64, df: u32) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::NegativeArgument(x));
    }
    if df == 0 {
        return Err(Error::UnsupportedDf(df));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let p = if df == 1 {
        libm::erfc((x / 2.0).sqrt())
    } else {
        gamma_ur(df as f64 / 2.0, x / 2.0)
    };
    Ok(p.clamp(0.0, 1.0))
}

/// Which rater of a confusion table holds the reference labels.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruthAxis {
    #[default]
    A,
    B,
}

/// A ratio that may have an empty denominator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "Option<f64>", from = "Option<f64>")]
pub enum MetricValue {
    Defined(f64),
    NotDefined,
}

impl MetricValue {
    fn ratio(num: u64, den: u64) -> Self {
        if den == 0 {
            MetricValue::NotDefined
        } else {
            MetricValue::Defined(num as f64 / den as f64)
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            MetricValue::Defined(v) => Some(v),
            MetricValue::NotDefined => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, MetricValue::Defined(_))
    }
}

impl From<MetricValue> for Option<f64> {
    fn from(v: MetricValue) -> Self {
        v.value()
    }
}

impl From<Option<f64>> for MetricValue {
    fn from(v: Option<f64>) -> Self {
        v.map_or(MetricValue::NotDefined, MetricValue::Defined)
    }
}

impl fmt::Display for MetricValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricValue::Defined(v) => write!(f, "{v:.4}"),
            MetricValue::NotDefined => f.write_str("n/a"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Accuracy,
    Precision,
    Recall,
    F1,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Accuracy => "accuracy",
            Metric::Precision => "precision",
            Metric::Recall => "recall",
            Metric::F1 => "f1",
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "accuracy" => Ok(Metric::Accuracy),
            "precision" => Ok(Metric::Precision),
            "recall" => Ok(Metric::Recall),
            "f1" => Ok(Metric::F1),
            other => Err(Error::InvalidArgument(format!("unknown metric `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationMetrics {
    pub accuracy: MetricValue,
    pub precision: MetricValue,
    pub recall: MetricValue,
    pub f1: MetricValue,
}

impl ClassificationMetrics {
    pub fn get(&self, metric: Metric) -> MetricValue {
        match metric {
            Metric::Accuracy => self.accuracy,
            Metric::Precision => self.precision,
            Metric::Recall => self.recall,
            Metric::F1 => self.f1,
        }
    }
}

/// `(tp, fp, fn, tn)` with the chosen rater as the reference.
pub(crate) fn outcome_counts(confusion: &ConfusionTable2x2, truth: TruthAxis) -> (u64, u64, u64, u64) {
    let ConfusionTable2x2 { tt, tf, ft, ff } = *confusion;
    match truth {
        TruthAxis::A => (tt, ft, tf, ff),
        TruthAxis::B => (tt, tf, ft, ff),
    }
}

/// Accuracy, precision, recall and F1. Ratios with a zero denominator are
/// `NotDefined`, never 0.
pub fn classification_metrics(confusion: &ConfusionTable2x2, truth: TruthAxis) -> ClassificationMetrics {
    let (tp, fp, fn_, tn) = outcome_counts(confusion, truth);
    metrics_from_counts(tp, fp, fn_, tn)
}

pub(crate) fn metrics_from_counts(tp: u64, fp: u64, fn_: u64, tn: u64) -> ClassificationMetrics {
    let precision = MetricValue::ratio(tp, tp + fp);
    let recall = MetricValue::ratio(tp, tp + fn_);
    let f1 = match (precision, recall) {
        (MetricValue::Defined(_), MetricValue::Defined(_)) => MetricValue::ratio(2 * tp, 2 * tp + fp + fn_),
        _ => MetricValue::NotDefined,
    };
    ClassificationMetrics {
        accuracy: MetricValue::ratio(tp + tn, tp + fp + fn_ + tn),
        precision,
        recall,
        f1,
    }
}
