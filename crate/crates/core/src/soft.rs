//! Soft metrics for designs that keep disagreement: cross-entropy,
//! Jensen-Shannon divergence, per-item entropy and the entropy-vector
//! comparisons (cosine similarity and Pearson correlation).
//!
//! All entropic quantities default to base 2, so JSD lies in `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::annotation::distribution_of_unit;
use crate::annotation::{AnnotationTable, LabelDistribution};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "e")]
    E,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LogBase::Two => "2",
            LogBase::E => "e",
        }
    }
}

impl std::str::FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" => Ok(LogBase::Two),
            "e" => Ok(LogBase::E),
            other => Err(Error::InvalidArgument(format!("log base must be `2` or `e`, got `{other}`"))),
        }
    }
}

fn check_same_labels(p: &LabelDistribution, q: &LabelDistribution) -> Result<()> {
    if p.same_labels(q) {
        Ok(())
    } else {
        Err(Error::LabelSetMismatch)
    }
}

/// Shannon entropy of a probability vector; zero masses contribute 0.
pub fn entropy(probs: &[f64], base: LogBase) -> f64 {
    let h: f64 = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * base.log(p))
        .sum();
    // -0.0 for point masses
    h.max(0.0)
}

/// Entropy of one item's label distribution, optionally divided by
/// `log(k)` for the distribution's full label set.
pub fn item_entropy(dist: &LabelDistribution, base: LogBase, normalized: bool) -> Result<f64> {
    let h = entropy(&dist.values(), base);
    if !normalized {
        return Ok(h);
    }
    let k = dist.k();
    if k < 2 {
        return Err(Error::NormalizationUndefined);
    }
    Ok((h / base.log(k as f64)).min(1.0))
}

/// `H(p, q) = -sum p(x) log q'(x)` where `q'` is `q` with `epsilon` added to
/// every mass and renormalized.
pub fn cross_entropy(
    p: &LabelDistribution,
    q: &LabelDistribution,
    base: LogBase,
    epsilon: f64,
) -> Result<f64> {
    check_same_labels(p, q)?;
    cross_entropy_probs(&p.values(), &q.values(), base, epsilon)
}

pub fn cross_entropy_probs(p: &[f64], q: &[f64], base: LogBase, epsilon: f64) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::VectorMismatch(format!("lengths {} and {}", p.len(), q.len())));
    }
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!("smoothing epsilon {epsilon} must be >= 0")));
    }
    let denom = 1.0 + epsilon * q.len() as f64;
    let mut h = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi == 0.0 {
            continue;
        }
        let smoothed = (qi + epsilon) / denom;
        if smoothed <= 0.0 {
            return Err(Error::InfiniteResult);
        }
        h -= pi * base.log(smoothed);
    }
    Ok(h)
}

/// Jensen-Shannon divergence `½KL(p‖m) + ½KL(q‖m)` with `m = ½(p + q)`.
pub fn js_divergence(p: &LabelDistribution, q: &LabelDistribution, base: LogBase) -> Result<f64> {
    check_same_labels(p, q)?;
    js_divergence_probs(&p.values(), &q.values(), base)
}

pub fn js_divergence_probs(p: &[f64], q: &[f64], base: LogBase) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::VectorMismatch(format!("lengths {} and {}", p.len(), q.len())));
    }
    let term = |a: f64, m: f64| if a > 0.0 { a * base.log(a / m) } else { 0.0 };
    let mut jsd = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        let m = 0.5 * (pi + qi);
        // Each element's contribution is symmetric in (pi, qi) bit for bit.
        jsd += 0.5 * term(pi, m) + 0.5 * term(qi, m);
    }
    Ok(jsd.max(0.0))
}

/// Per-item entropies aligned to a unit ordering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyVector {
    units: Vec<String>,
    values: Vec<f64>,
    base: LogBase,
    normalized: bool,
}

impl EntropyVector {
    pub fn new(units: Vec<String>, values: Vec<f64>, base: LogBase, normalized: bool) -> Result<Self> {
        if units.len() != values.len() {
            return Err(Error::VectorMismatch("unit and value counts differ".into()));
        }
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        for &v in &values {
            if !(v.is_finite() && v >= 0.0) || (normalized && v > 1.0) {
                return Err(Error::InvalidArgument(format!("entropy value {v} out of range")));
            }
        }
        Ok(EntropyVector {
            units,
            values,
            base,
            normalized,
        })
    }

    /// Unnamed vector; units are numbered `0..n`.
    pub fn from_values(values: Vec<f64>, base: LogBase, normalized: bool) -> Result<Self> {
        let units = (0..values.len()).map(|i| i.to_string()).collect();
        Self::new(units, values, base, normalized)
    }

    /// Entropy of every unit of `table`, in unit order.
    pub fn from_table(table: &AnnotationTable, base: LogBase, normalized: bool) -> Result<Self> {
        let values = (0..table.n_units())
            .map(|u| item_entropy(&distribution_of_unit(table, u)?, base, normalized))
            .collect::<Result<Vec<_>>>()?;
        Self::new(table.units().to_vec(), values, base, normalized)
    }

    pub fn from_distributions(
        units: Vec<String>,
        dists: &[LabelDistribution],
        base: LogBase,
        normalized: bool,
    ) -> Result<Self> {
        let values = dists
            .iter()
            .map(|d| item_entropy(d, base, normalized))
            .collect::<Result<Vec<_>>>()?;
        Self::new(units, values, base, normalized)
    }

    pub fn units(&self) -> &[String] {
        &self.units
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn base(&self) -> LogBase {
        self.base
    }

    pub fn normalized(&self) -> bool {
        self.normalized
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Reorders this vector to follow `units`, which must name the same set.
    pub fn aligned_to(&self, units: &[String]) -> Result<Self> {
        if units.len() != self.units.len() {
            return Err(Error::VectorMismatch("unit sets differ".into()));
        }
        let values = units
            .iter()
            .map(|u| {
                self.units
                    .iter()
                    .position(|v| v == u)
                    .map(|i| self.values[i])
                    .ok_or_else(|| Error::VectorMismatch(format!("unit `{u}` missing")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(units.to_vec(), values, self.base, self.normalized)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["unit_id", "entropy"]).expect("in-memory write");
        for (u, v) in self.units.iter().zip(&self.values) {
            w.write_record([u.as_str(), &v.to_string()]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

fn check_aligned(a: &EntropyVector, b: &EntropyVector) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::VectorMismatch(format!("lengths {} and {}", a.len(), b.len())));
    }
    if a.units != b.units {
        return Err(Error::VectorMismatch("unit orderings differ".into()));
    }
    Ok(())
}

/// Cosine similarity of two entropy vectors.
pub fn entropy_similarity(human: &EntropyVector, model: &EntropyVector) -> Result<f64> {
    check_aligned(human, model)?;
    let dot: f64 = human.values.iter().zip(&model.values).map(|(a, b)| a * b).sum();
    let na = human.values.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nb = model.values.iter().map(|b| b * b).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok((dot / (na * nb)).clamp(0.0, 1.0))
}

/// Pearson correlation of two entropy vectors.
pub fn entropy_correlation(human: &EntropyVector, model: &EntropyVector) -> Result<f64> {
    check_aligned(human, model)?;
    if human.len() < 2 {
        return Err(Error::VectorMismatch("correlation needs at least 2 entries".into()));
    }
    pearson(&human.values, &model.values)
}

pub(crate) fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let constant = |v: &[f64]| v.iter().all(|&a| a == v[0]);
    if constant(x) || constant(y) {
        return Err(Error::ZeroVariance);
    }
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}
