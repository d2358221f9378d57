#![allow(dead_code)]

use concordia::annotation::AnnotationTable;

/// Grid of ratings: `grid[unit][rater]`, `None` for a missing cell.
pub type Grid = Vec<Vec<Option<u8>>>;

pub const NAMES: [&str; 4] = ["a", "b", "c", "d"];

pub fn table_from_grid(grid: &Grid) -> concordia::Result<AnnotationTable> {
    let mut rows = Vec::new();
    for (u, row) in grid.iter().enumerate() {
        for (r, cell) in row.iter().enumerate() {
            if let Some(l) = cell {
                rows.push((format!("u{u}"), format!("r{r}"), NAMES[*l as usize].to_owned()));
            }
        }
    }
    AnnotationTable::from_long_records(rows, None)
}

/// Nominal alpha from pairwise disagreements, without a coincidence matrix.
///
/// Observed disagreement averages, over every pairable value, the share of
/// the other values in its unit that differ from it. Expected disagreement
/// is the share of differing ordered pairs among all pooled values.
pub fn alpha_nominal_pairwise(grid: &Grid) -> Option<f64> {
    let units: Vec<Vec<u8>> = grid
        .iter()
        .map(|row| row.iter().flatten().copied().collect::<Vec<u8>>())
        .filter(|v| v.len() >= 2)
        .collect();
    let pooled: Vec<u8> = units.iter().flatten().copied().collect();
    let n = pooled.len();
    if n < 2 {
        return None;
    }
    let mut observed = 0.0;
    for values in &units {
        let mut differing = 0usize;
        for (i, a) in values.iter().enumerate() {
            for (j, b) in values.iter().enumerate() {
                if i != j && a != b {
                    differing += 1;
                }
            }
        }
        observed += differing as f64 / (values.len() - 1) as f64;
    }
    observed /= n as f64;
    let mut differing = 0usize;
    for (i, a) in pooled.iter().enumerate() {
        for (j, b) in pooled.iter().enumerate() {
            if i != j && a != b {
                differing += 1;
            }
        }
    }
    if differing == 0 {
        return None;
    }
    let expected = differing as f64 / (n * (n - 1)) as f64;
    Some(1.0 - observed / expected)
}

/// Fleiss' kappa evaluated term by term from a complete grid.
pub fn fleiss_direct(grid: &Grid, k: usize) -> Option<f64> {
    let big_n = grid.len() as f64;
    let n = grid[0].len() as f64;
    let mut col = vec![0.0; k];
    let mut p_bar = 0.0;
    for row in grid {
        let mut counts = vec![0.0; k];
        for cell in row {
            counts[cell.expect("complete grid") as usize] += 1.0;
        }
        let agree: f64 = counts.iter().map(|c| c * (c - 1.0)).sum();
        p_bar += agree / (n * (n - 1.0));
        for (j, c) in counts.iter().enumerate() {
            col[j] += c;
        }
    }
    p_bar /= big_n;
    let p_e: f64 = col.iter().map(|c| (c / (big_n * n)).powi(2)).sum();
    if p_e == 1.0 {
        return None;
    }
    Some((p_bar - p_e) / (1.0 - p_e))
}

/// Cohen's kappa from a 2x2 table in plain floating point.
pub fn cohen_2x2(tt: f64, tf: f64, ft: f64, ff: f64) -> f64 {
    let n = tt + tf + ft + ff;
    let po = (tt + ff) / n;
    let pe = ((tt + tf) * (tt + ft) + (ft + ff) * (tf + ff)) / (n * n);
    (po - pe) / (1.0 - pe)
}
