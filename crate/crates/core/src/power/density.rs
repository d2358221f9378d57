use serde::{Deserialize, Serialize};

use crate::bootstrap::quantile_sorted;
use crate::error::{Error, Result};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bandwidth {
    /// Silverman's rule of thumb.
    #[default]
    Auto,
    Fixed(f64),
}

impl std::str::FromStr for Bandwidth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Bandwidth::Auto);
        }
        match s.parse::<f64>() {
            Ok(h) if h > 0.0 && h.is_finite() => Ok(Bandwidth::Fixed(h)),
            _ => Err(Error::InvalidArgument(format!("bandwidth must be `auto` or a positive number, got `{s}`"))),
        }
    }
}

/// Gaussian kernel density evaluated on an evenly spaced grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub bandwidth: f64,
    pub n: usize,
}

impl DensityCurve {
    /// Trapezoidal integral of the density over the grid.
    pub fn integral(&self) -> f64 {
        trapezoid(&self.grid, &self.density)
    }

    /// Grid point with the highest density.
    pub fn mode(&self) -> f64 {
        let (i, _) = self
            .density
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &d)| if d > best.1 { (i, d) } else { best });
        self.grid[i]
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["x", "density"]).expect("in-memory write");
        for (x, d) in self.grid.iter().zip(&self.density) {
            w.write_record([x.to_string(), d.to_string()]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

fn sorted_copy(scores: &[f64]) -> Vec<f64> {
    let mut v = scores.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Silverman's rule `0.9 min(sd, IQR / 1.34) n^(-1/5)`. Falls back to the
/// standard deviation when the IQR is zero.
pub fn silverman_bandwidth(scores: &[f64]) -> Result<f64> {
    if scores.len() < 2 {
        return Err(Error::DegenerateSample("at least 2 scores needed for an automatic bandwidth".into()));
    }
    let sorted = sorted_copy(scores);
    let n = sorted.len() as f64;
    let mean = sorted.iter().sum::<f64>() / n;
    let sd = (sorted.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    if sd == 0.0 {
        return Err(Error::DegenerateSample("scores are constant".into()));
    }
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    Ok(0.9 * spread * n.powf(-0.2))
}

/// Unnormalized Gaussian KDE of `scores` at each grid point.
pub fn kernel_density(scores: &[f64], bandwidth: f64, grid: &[f64]) -> Vec<f64> {
    let sorted = sorted_copy(scores);
    let scale = INV_SQRT_2PI / (bandwidth * sorted.len() as f64);
    grid.iter()
        .map(|&x| {
            sorted
                .iter()
                .map(|&s| {
                    let z = (x - s) / bandwidth;
                    (-0.5 * z * z).exp()
                })
                .sum::<f64>()
                * scale
        })
        .collect()
}

/// Kernel density estimate over `[min - 3h, max + 3h]`.
///
/// The kernel mass beyond three bandwidths is cut off by the grid, so the
/// curve is rescaled to integrate to exactly 1 over the grid.
pub fn density_estimate(scores: &[f64], bandwidth: Bandwidth, grid_points: usize) -> Result<DensityCurve> {
    if scores.is_empty() {
        return Err(Error::EmptyScores);
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidArgument("scores must be finite".into()));
    }
    if grid_points < 2 {
        return Err(Error::InvalidArgument("at least 2 grid points required".into()));
    }
    let h = match bandwidth {
        Bandwidth::Auto => silverman_bandwidth(scores)?,
        Bandwidth::Fixed(h) if h > 0.0 && h.is_finite() => h,
        Bandwidth::Fixed(h) => return Err(Error::InvalidArgument(format!("bandwidth {h} must be positive"))),
    };
    let lo = scores.iter().copied().fold(f64::INFINITY, f64::min) - 3.0 * h;
    let hi = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 3.0 * h;
    let step = (hi - lo) / (grid_points - 1) as f64;
    let grid: Vec<f64> = (0..grid_points).map(|i| lo + step * i as f64).collect();
    let mut density = kernel_density(scores, h, &grid);
    let mass = trapezoid(&grid, &density);
    if mass.is_nan() || mass <= 0.0 {
        return Err(Error::DegenerateSample("density vanishes on the grid".into()));
    }
    density.iter_mut().for_each(|d| *d /= mass);
    Ok(DensityCurve {
        grid,
        density,
        bandwidth: h,
        n: scores.len(),
    })
}
