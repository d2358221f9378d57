use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::density::{density_estimate, kernel_density, silverman_bandwidth, Bandwidth};
use crate::bootstrap::replicate_rng;
use crate::error::{Error, Result};
use crate::soft::{js_divergence_probs, LogBase};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceConfig {
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub bandwidth: Bandwidth,
    pub grid_points: usize,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig {
            sizes: vec![100, 300, 600],
            reps: 20,
            seed: crate::bootstrap::DEFAULT_SEED,
            bandwidth: Bandwidth::Auto,
            grid_points: 256,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePoint {
    pub size: usize,
    pub mean_jsd: f64,
    pub rep_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub n: usize,
    pub points: Vec<ConvergencePoint>,
}

impl ConvergenceReport {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["size", "mean_jsd", "rep_count"]).expect("in-memory write");
        for p in &self.points {
            w.write_record([p.size.to_string(), p.mean_jsd.to_string(), p.rep_count.to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

fn to_probs(density: &[f64]) -> Result<Vec<f64>> {
    let total: f64 = density.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::DegenerateSample("density vanishes on the evaluation grid".into()));
    }
    Ok(density.iter().map(|d| d / total).collect())
}

/// Mean Jensen-Shannon divergence (bits) between subsample densities and
/// the full-sample density, per subsample size.
///
/// Subsamples are drawn without replacement. Both densities are evaluated
/// on the full sample's grid and renormalized to probability vectors. Each
/// `(size, rep)` draw has its own generator stream, so results do not
/// depend on evaluation order.
pub fn subsample_convergence(scores: &[f64], config: &ConvergenceConfig) -> Result<ConvergenceReport> {
    if scores.is_empty() {
        return Err(Error::EmptyScores);
    }
    if config.reps == 0 {
        return Err(Error::NoReplicates);
    }
    let n = scores.len();
    if let Some(&size) = config.sizes.iter().find(|&&s| s > n) {
        return Err(Error::SizeExceedsData { size, available: n });
    }
    if config.sizes.contains(&0) {
        return Err(Error::InvalidArgument("subsample size must be positive".into()));
    }
    let full = density_estimate(scores, config.bandwidth, config.grid_points)?;
    let full_probs = to_probs(&kernel_density(scores, full.bandwidth, &full.grid))?;

    let mut points = Vec::with_capacity(config.sizes.len());
    for (si, &size) in config.sizes.iter().enumerate() {
        let divergences = (0..config.reps)
            .into_par_iter()
            .map(|rep| {
                let stream = ((si as u64) << 32) | rep as u64;
                let mut rng = replicate_rng(config.seed, stream);
                let sub: Vec<f64> = index::sample(&mut rng, n, size)
                    .into_iter()
                    .map(|i| scores[i])
                    .collect();
                let h = match config.bandwidth {
                    Bandwidth::Auto => silverman_bandwidth(&sub)?,
                    Bandwidth::Fixed(h) => h,
                };
                let probs = to_probs(&kernel_density(&sub, h, &full.grid))?;
                js_divergence_probs(&probs, &full_probs, LogBase::Two)
            })
            .collect::<Result<Vec<f64>>>()?;
        points.push(ConvergencePoint {
            size,
            mean_jsd: divergences.iter().sum::<f64>() / config.reps as f64,
            rep_count: config.reps,
        });
    }
    Ok(ConvergenceReport { n, points })
}
