//! Items needed per group to detect a difference.
//!
//! Run with `cargo run --example sample_size`.

use concordia::power::{required_sample_size, Effect, PowerSpec, Tails};

fn main() -> concordia::Result<()> {
    for (p1, p2) in [(0.5, 0.6), (0.5, 0.7), (0.3, 0.35)] {
        let spec = PowerSpec { alpha: 0.05, power: 0.8, effect: Effect::Proportions { p1, p2 }, tails: Tails::Two };
        println!("p1 = {p1}, p2 = {p2}: {} per group", required_sample_size(&spec)?.per_group);
    }
    for d in [0.2, 0.5, 0.8] {
        let spec = PowerSpec { alpha: 0.05, power: 0.8, effect: Effect::StandardizedMean { d }, tails: Tails::Two };
        println!("d = {d}: {} per group", required_sample_size(&spec)?.per_group);
    }
    Ok(())
}
