//! Item scores, their density, and how fast subsamples approach it.
//!
//! Run with `cargo run --release --example convergence`.

use concordia::annotation::AnnotationTable;
use concordia::power::{density_estimate, mean_item_scores, observation_scores, parse_scale, subsample_convergence, Bandwidth, ConvergenceConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> concordia::Result<()> {
    // Synthetic survey: 50 items, 80 respondents, answers skewed toward "Yes".
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut rows = Vec::new();
    for item in 0..50 {
        let lean: f64 = rng.random();
        for who in 0..80 {
            let u: f64 = rng.random();
            let answer = if u < 0.5 + 0.3 * lean { "Yes" } else if u < 0.85 { "Maybe" } else { "No" };
            rows.push((format!("q{item:02}"), format!("r{who:02}"), answer));
        }
    }
    let table = AnnotationTable::from_long_records(rows, None)?;
    let scale = parse_scale("Yes=1,Maybe=2,No=3")?;

    let items = mean_item_scores(&table, &scale)?;
    println!("q00 mean score {:.3}", items.get("q00").unwrap_or(f64::NAN));

    let scores = observation_scores(&table, &scale)?;
    let curve = density_estimate(&scores, Bandwidth::Auto, 256)?;
    println!("bandwidth {:.4}, mode {:.3}, integral {:.6}", curve.bandwidth, curve.mode(), curve.integral());

    let config = ConvergenceConfig { sizes: vec![100, 500, 1000, 2000], ..ConvergenceConfig::default() };
    print!("{}", subsample_convergence(&scores, &config)?.to_csv());
    Ok(())
}
