//! Percentile bootstrap confidence intervals for hard metrics.
//!
//! Replicate `r` draws from its own ChaCha8 stream: the generator is seeded
//! with `seed` and switched to stream `r`. Replicates are therefore
//! independent of scheduling, and parallel evaluation reproduces the serial
//! result bit for bit on every platform. Quantiles use linear interpolation
//! between order statistics (type 7).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::annotation::{Label, PairedLabels};
use crate::error::{Error, Result};
use crate::significance::{metrics_from_counts, Metric, TruthAxis};

pub const DEFAULT_SEED: u64 = 20240;
pub const DEFAULT_REPLICATES: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub level: f64,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            replicates: DEFAULT_REPLICATES,
            level: 0.95,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapCI {
    pub metric_name: String,
    /// Full-sample estimate clamped into `[lower, upper]`.
    pub point: f64,
    /// Full-sample estimate as computed.
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub replicates: usize,
    /// Replicates on which the metric was undefined (0/0); they do not
    /// contribute to the quantiles.
    pub undefined_replicates: usize,
    pub seed: u64,
}

impl BootstrapCI {
    pub fn covers(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

/// Generator for replicate `index` under `seed`.
pub fn replicate_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Type-7 quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty data");
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

// Outcome codes per item: 0 = tp, 1 = fp, 2 = fn, 3 = tn.
fn outcomes(paired: &PairedLabels, positive: &Label, truth: TruthAxis) -> Result<Vec<u8>> {
    if paired.label_set().len() > 2 {
        return Err(Error::NonBinaryLabels(paired.label_set().len()));
    }
    if !paired.label_set().contains(positive) {
        return Err(Error::UnknownLabel(positive.to_string()));
    }
    Ok(paired
        .pairs()
        .iter()
        .map(|(a, b)| {
            let (reference, predicted) = match truth {
                TruthAxis::A => (a == positive, b == positive),
                TruthAxis::B => (b == positive, a == positive),
            };
            match (reference, predicted) {
                (true, true) => 0,
                (false, true) => 1,
                (true, false) => 2,
                (false, false) => 3,
            }
        })
        .collect())
}

fn metric_of(metric: Metric, counts: &[u64; 4]) -> Option<f64> {
    metrics_from_counts(counts[0], counts[1], counts[2], counts[3])
        .get(metric)
        .value()
}

/// Percentile bootstrap interval for `metric` over paired binary labels.
///
/// Items are resampled with replacement; `truth` selects the reference
/// rater and `positive` the positive class.
pub fn bootstrap_ci(
    metric: Metric,
    paired: &PairedLabels,
    positive: &Label,
    truth: TruthAxis,
    config: &BootstrapConfig,
) -> Result<BootstrapCI> {
    if paired.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(config.level > 0.0 && config.level < 1.0) {
        return Err(Error::InvalidLevel(config.level));
    }
    if config.replicates == 0 {
        return Err(Error::NoReplicates);
    }
    let codes = outcomes(paired, positive, truth)?;
    let mut full = [0u64; 4];
    for &c in &codes {
        full[c as usize] += 1;
    }
    let estimate = metric_of(metric, &full).ok_or(Error::MetricNotDefined(metric.name()))?;

    let n = codes.len() as u64;
    let draws: Vec<Option<f64>> = (0..config.replicates as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(config.seed, r);
            let mut counts = [0u64; 4];
            for _ in 0..n {
                counts[codes[rng.random_range(0..n) as usize] as usize] += 1;
            }
            metric_of(metric, &counts)
        })
        .collect();
    let mut values: Vec<f64> = draws.iter().flatten().copied().collect();
    let undefined = draws.len() - values.len();
    if values.is_empty() {
        return Err(Error::MetricNotDefined(metric.name()));
    }
    values.sort_by(f64::total_cmp);
    let tail = (1.0 - config.level) / 2.0;
    let lower = quantile_sorted(&values, tail);
    let upper = quantile_sorted(&values, 1.0 - tail);
    Ok(BootstrapCI {
        metric_name: metric.name().to_owned(),
        point: estimate.clamp(lower, upper),
        estimate,
        lower,
        upper,
        level: config.level,
        replicates: config.replicates,
        undefined_replicates: undefined,
        seed: config.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotation::ConfusionTable2x2;

    fn l(s: &str) -> Label {
        Label::new(s).unwrap()
    }

    fn paired(tt: u64, tf: u64, ft: u64, ff: u64) -> PairedLabels {
        ConfusionTable2x2::new(tt, tf, ft, ff)
            .unwrap()
            .to_paired(&l("T"), &l("F"))
            .unwrap()
    }

    fn cfg(replicates: usize, seed: u64) -> BootstrapConfig {
        BootstrapConfig {
            replicates,
            level: 0.95,
            seed,
        }
    }

    #[test]
    fn degenerate_resampling() {
        let p = paired(20, 0, 0, 0);
        let ci = bootstrap_ci(Metric::Accuracy, &p, &l("T"), TruthAxis::A, &cfg(200, 1)).unwrap();
        assert_eq!((ci.lower, ci.point, ci.upper), (1.0, 1.0, 1.0));
    }

    #[test]
    fn deterministic_for_seed() {
        let p = paired(30, 10, 15, 45);
        let a = bootstrap_ci(Metric::F1, &p, &l("T"), TruthAxis::A, &cfg(500, 9)).unwrap();
        let b = bootstrap_ci(Metric::F1, &p, &l("T"), TruthAxis::A, &cfg(500, 9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.lower.to_bits(), b.lower.to_bits());
        let c = bootstrap_ci(Metric::F1, &p, &l("T"), TruthAxis::A, &cfg(500, 10)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn interval_brackets_estimate() {
        let p = paired(30, 10, 15, 45);
        for metric in [Metric::Accuracy, Metric::Precision, Metric::Recall, Metric::F1] {
            let ci = bootstrap_ci(metric, &p, &l("T"), TruthAxis::B, &cfg(1000, 3)).unwrap();
            assert!(ci.lower <= ci.point && ci.point <= ci.upper, "{metric:?}");
            assert!(ci.upper - ci.lower > 0.0);
        }
    }

    #[test]
    fn argument_errors() {
        let p = paired(3, 1, 1, 3);
        let bad_level = BootstrapConfig { level: 1.0, ..cfg(10, 1) };
        assert!(matches!(
            bootstrap_ci(Metric::Accuracy, &p, &l("T"), TruthAxis::A, &bad_level),
            Err(Error::InvalidLevel(_))
        ));
        assert!(matches!(
            bootstrap_ci(Metric::Accuracy, &p, &l("T"), TruthAxis::A, &cfg(0, 1)),
            Err(Error::NoReplicates)
        ));
        let none_positive = paired(0, 0, 0, 5);
        assert!(matches!(
            bootstrap_ci(Metric::Precision, &none_positive, &l("T"), TruthAxis::A, &cfg(10, 1)),
            Err(Error::MetricNotDefined("precision"))
        ));
    }

    #[test]
    fn type7_quantiles() {
        let data = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_sorted(&data, 0.0), 1.0);
        assert_eq!(quantile_sorted(&data, 1.0), 4.0);
        assert_eq!(quantile_sorted(&data, 0.5), 2.5);
        // numpy.quantile([1,2,3,4], 0.025) == 1.075
        assert!((quantile_sorted(&data, 0.025) - 1.075).abs() < 1e-15);
        assert_eq!(quantile_sorted(&[7.0], 0.3), 7.0);
    }

    #[test]
    fn substreams_are_distinct() {
        let a: u64 = replicate_rng(5, 0).random();
        let b: u64 = replicate_rng(5, 1).random();
        let again: u64 = replicate_rng(5, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, again);
    }
}
