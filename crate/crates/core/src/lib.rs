//! Quantifying annotator and model disagreement.
//!
//! * [`annotation`]: label tables, paired labels, confusion counts, label
//!   distributions, majority vote and disagreement filtering
//! * [`agreement`]: percent agreement, Cohen's and Fleiss' kappa,
//!   Krippendorff's alpha
//! * [`significance`] and [`bootstrap`]: McNemar's test, hard metrics and
//!   percentile bootstrap intervals
//! * [`soft`]: cross-entropy, Jensen-Shannon divergence, entropy vectors
//! * [`power`]: sample sizes, item scores, densities, subsample convergence
//! * [`report`] and [`cli`]: rendering, the bundled case-study check and
//!   the command-line front end

pub mod agreement;
pub mod annotation;
pub mod bootstrap;
pub mod cli;
mod error;
pub mod power;
pub mod report;
pub mod significance;
pub mod soft;

pub use error::{Error, Result};
