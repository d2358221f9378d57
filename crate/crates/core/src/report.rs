//! Rendering of results as text, JSON or CSV, and the bundled case-study
//! check against the reference two-classifier confusion counts.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::agreement::{
    chance_agreement_uniform, cohen_kappa_confusion, percent_agreement_counts, ReliabilityResult,
    Statistic,
};
use crate::annotation::ConfusionTable2x2;
use crate::bootstrap::BootstrapCI;
use crate::error::{Error, Result};
use crate::power::{ConvergenceReport, DensityCurve, SampleSize};
use crate::significance::{mcnemar, ClassificationMetrics, McNemarResult};
use crate::soft::EntropyVector;

/// Reference 2x2 counts of the two-classifier labeling study.
pub const CASE_STUDY_FIXTURE: &str = include_str!("../data/case_study.json");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl std::fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OutputFormat::Text => "text",
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        })
    }
}

/// Deterministic rendering of a result. Every rendering ends with a newline.
pub trait Render {
    fn render(&self, format: OutputFormat) -> Result<String>;

    fn supports(&self, format: OutputFormat) -> bool {
        let _ = format;
        true
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn csv_rows<const N: usize>(header: [&str; N], rows: &[[String; N]]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

impl Render for ReliabilityResult {
    fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => json(self),
            OutputFormat::Csv => Ok(csv_rows(
                ["statistic", "value", "n_subjects", "n_raters", "level", "band", "excluded_units"],
                &[[
                    serde_json::to_value(self.statistic)?.as_str().unwrap_or_default().to_owned(),
                    self.value.to_string(),
                    self.n_subjects.to_string(),
                    self.n_raters.to_string(),
                    self.level.to_string(),
                    self.band.clone(),
                    self.excluded_units.to_string(),
                ]],
            )),
            OutputFormat::Text => {
                let mut s = String::new();
                writeln!(s, "{}", self.statistic.title()).ok();
                writeln!(s, "{:<10}{:<8}{}", "Subjects", "Raters", self.statistic.heading()).ok();
                writeln!(s, "{:<10}{:<8}{}", self.n_subjects, self.n_raters, self.display_value()).ok();
                writeln!(s, "agreement: {}", self.band).ok();
                if self.statistic == Statistic::KrippendorffAlpha {
                    writeln!(s, "level: {}", self.level).ok();
                    writeln!(s, "units excluded (single observation): {}", self.excluded_units).ok();
                }
                Ok(s)
            }
        }
    }
}

impl Render for McNemarResult {
    fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => json(self),
            OutputFormat::Csv => Ok(csv_rows(
                ["test", "chi_square", "df", "p_value", "n", "continuity"],
                &[[
                    "mcnemar".to_owned(),
                    self.chi_square.to_string(),
                    self.df.to_string(),
                    self.p_value.to_string(),
                    self.n.to_string(),
                    self.continuity_corrected.to_string(),
                ]],
            )),
            OutputFormat::Text => Ok(format!("McNemar's test\n{}\n", self.apa())),
        }
    }
}

impl Render for ClassificationMetrics {
    fn render(&self, format: OutputFormat) -> Result<String> {
        let cell = |v: crate::significance::MetricValue| v.value().map_or(String::new(), |x| x.to_string());
        match format {
            OutputFormat::Json => json(self),
            OutputFormat::Csv => Ok(csv_rows(
                ["accuracy", "precision", "recall", "f1"],
                &[[cell(self.accuracy), cell(self.precision), cell(self.recall), cell(self.f1)]],
            )),
            OutputFormat::Text => Ok(format!(
                "accuracy   {}\nprecision  {}\nrecall     {}\nf1         {}\n",
                self.accuracy, self.precision, self.recall, self.f1
            )),
        }
    }
}

impl Render for BootstrapCI {
    fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => json(self),
            OutputFormat::Csv => Ok(csv_rows(
                ["metric", "point", "estimate", "lower", "upper", "level", "replicates", "undefined_replicates", "seed"],
                &[[
                    self.metric_name.clone(),
                    self.point.to_string(),
                    self.estimate.to_string(),
                    self.lower.to_string(),
                    self.upper.to_string(),
                    self.level.to_string(),
                    self.replicates.to_string(),
                    self.undefined_replicates.to_string(),
                    self.seed.to_string(),
                ]],
            )),
            OutputFormat::Text => Ok(format!(
                "{} = {:.4}, {}% CI [{:.4}, {:.4}] ({} replicates, seed {})\n",
                self.metric_name,
                self.estimate,
                self.level * 100.0,
                self.lower,
                self.upper,
                self.replicates,
                self.seed
            )),
        }
    }
}

impl Render for SampleSize {
    fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => json(self),
            OutputFormat::Csv => Ok(csv_rows(
                ["per_group", "exact", "z_alpha", "z_power"],
                &[[
                    self.per_group.to_string(),
                    self.exact.to_string(),
                    self.z_alpha.to_string(),
                    self.z_power.to_string(),
                ]],
            )),
            OutputFormat::Text => Ok(format!(
                "required sample size: {} per group (unrounded {:.3})\n",
                self.per_group, self.exact
            )),
        }
    }
}

/// A single named number, e.g. a divergence or a correlation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarResult {
    pub metric: String,
    pub value: f64,
}

impl Render for ScalarResult {
    fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => json(self),
            OutputFormat::Csv => Ok(csv_rows(["metric", "value"], &[[self.metric.clone(), self.value.to_string()]])),
            OutputFormat::Text => Ok(format!("{} = {:.4}\n", self.metric, self.value)),
        }
    }
}

impl Render for EntropyVector {
    fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => json(self),
            OutputFormat::Csv => Ok(self.to_csv()),
            OutputFormat::Text => {
                let width = self.units().iter().map(String::len).max().unwrap_or(0).max(4);
                let mut s = format!("{:<width$}  entropy\n", "unit");
                for (u, v) in self.units().iter().zip(self.values()) {
                    writeln!(s, "{u:<width$}  {v:.4}").ok();
                }
                Ok(s)
            }
        }
    }
}

impl Render for ConvergenceReport {
    fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => json(self),
            OutputFormat::Csv => Ok(self.to_csv()),
            OutputFormat::Text => {
                let mut s = format!("subsample convergence (n = {})\n{:<8}{:<14}{}\n", self.n, "size", "mean_jsd", "reps");
                for p in &self.points {
                    writeln!(s, "{:<8}{:<14.6}{}", p.size, p.mean_jsd, p.rep_count).ok();
                }
                Ok(s)
            }
        }
    }
}

impl Render for DensityCurve {
    fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => json(self),
            OutputFormat::Csv => Ok(self.to_csv()),
            OutputFormat::Text => Err(Error::UnsupportedFormat(format.to_string())),
        }
    }

    fn supports(&self, format: OutputFormat) -> bool {
        format != OutputFormat::Text
    }
}

/// Whether a density curve can be rendered in `format`, known before any
/// computation happens.
pub fn density_supports(format: OutputFormat) -> bool {
    format != OutputFormat::Text
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    /// Full-precision computed value for numeric checks.
    pub computed_value: Option<f64>,
    pub tolerance: Option<f64>,
    pub passed: bool,
}

impl Check {
    fn numeric(name: &str, expected: f64, computed: f64, tolerance: f64, digits: usize) -> Self {
        Check {
            name: name.to_owned(),
            expected: format!("{expected:.digits$}"),
            computed: format!("{computed:.digits$}"),
            computed_value: Some(computed),
            tolerance: Some(tolerance),
            passed: (computed - expected).abs() <= tolerance,
        }
    }

    fn exact(name: &str, expected: impl ToString, computed: impl ToString, computed_value: Option<f64>) -> Self {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        Check {
            name: name.to_owned(),
            passed: expected == computed,
            expected,
            computed,
            computed_value,
            tolerance: None,
        }
    }
}

/// Which rater flags more items the other leaves unflagged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConservativeRater {
    A,
    B,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseStudyReport {
    pub counts: ConfusionTable2x2,
    pub checks: Vec<Check>,
    pub overall: bool,
    /// Items flagged positive by B only and by A only (`ft`, `tf`).
    pub flagged_only_by_b: u64,
    pub flagged_only_by_a: u64,
    pub conservative_rater: ConservativeRater,
    /// The reference diagnosis is that rater B (the second model) is the
    /// more conservative one.
    pub direction_matches_reference: bool,
    pub notes: Vec<String>,
}

const ALPHA_NOTE: &str = "not checked: Krippendorff's alpha of 0.21 for the survey (50 items, 80 raters) \
needs item-level responses, which are not available; it is excluded from pass/fail";

/// Runs the case-study checks on the bundled reference counts.
pub fn reproduce_case_study() -> Result<CaseStudyReport> {
    reproduce_case_study_with(&ConfusionTable2x2::from_json_str(CASE_STUDY_FIXTURE)?)
}

/// Runs the case-study checks on counts read from a confusion JSON file.
pub fn reproduce_case_study_from(path: &Path) -> Result<CaseStudyReport> {
    if !path.is_file() {
        return Err(Error::MissingFixture(path.display().to_string()));
    }
    reproduce_case_study_with(&crate::annotation::io::load_confusion(path)?)
}

/// Checks computed statistics on `counts` against the reference values:
/// kappa 0.0937 over 7795 subjects, McNemar chi-square 919.18 with
/// p < .001, and percent agreement 0.8703.
pub fn reproduce_case_study_with(counts: &ConfusionTable2x2) -> Result<CaseStudyReport> {
    let kappa = cohen_kappa_confusion(counts)?;
    let test = mcnemar(counts, true)?;
    let percent = percent_agreement_counts(counts);

    let mut kappa_check = Check::numeric("cohen_kappa", 0.0937, kappa.value, 5e-4, 4);
    kappa_check.passed &= kappa.display_value() == "0.0937";
    let checks = vec![
        kappa_check,
        Check::exact("kappa_subjects", 7795, kappa.n_subjects, None),
        Check::exact("kappa_band", "slight", &kappa.band, None),
        Check::numeric("mcnemar_chi_square", 919.18, test.chi_square, 0.01, 2),
        Check::exact("mcnemar_df", 1, test.df, None),
        Check::exact("mcnemar_p", "p < .001", test.p_text(), Some(test.p_value)),
        Check::numeric("percent_agreement", 0.8703, percent, 5e-4, 4),
        Check::exact("chance_agreement_two_labels", 0.5, chance_agreement_uniform(2)?, None),
        Check::numeric("chance_agreement_three_labels", 1.0 / 3.0, chance_agreement_uniform(3)?, 0.0, 4),
    ];
    let overall = checks.iter().all(|c| c.passed);

    let (only_a, only_b) = (counts.tf, counts.ft);
    let conservative_rater = match only_b.cmp(&only_a) {
        std::cmp::Ordering::Greater => ConservativeRater::B,
        std::cmp::Ordering::Less => ConservativeRater::A,
        std::cmp::Ordering::Equal => ConservativeRater::Neither,
    };
    let direction_matches_reference = conservative_rater == ConservativeRater::B;
    let mut notes = vec![format!(
        "discordant pairs: rater B flagged {only_b} items rater A did not; rater A flagged {only_a} items rater B did not"
    )];
    notes.push(match conservative_rater {
        ConservativeRater::B => "rater B is the more conservative labeler, as in the reference diagnosis".to_owned(),
        ConservativeRater::A => {
            "direction flipped: rater A is the more conservative labeler, opposite to the reference diagnosis".to_owned()
        }
        ConservativeRater::Neither => "discordant counts are balanced; neither rater is more conservative".to_owned(),
    });
    notes.push(ALPHA_NOTE.to_owned());

    Ok(CaseStudyReport {
        counts: *counts,
        checks,
        overall,
        flagged_only_by_b: only_b,
        flagged_only_by_a: only_a,
        conservative_rater,
        direction_matches_reference,
        notes,
    })
}

impl CaseStudyReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

impl Render for CaseStudyReport {
    fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => json(self),
            OutputFormat::Csv => {
                let rows: Vec<[String; 5]> = self
                    .checks
                    .iter()
                    .map(|c| {
                        [
                            c.name.clone(),
                            c.expected.clone(),
                            c.computed.clone(),
                            c.tolerance.map_or(String::new(), |t| t.to_string()),
                            verdict(c.passed).to_owned(),
                        ]
                    })
                    .collect();
                Ok(csv_rows(["check", "expected", "computed", "tolerance", "result"], &rows))
            }
            OutputFormat::Text => {
                let c = &self.counts;
                let mut s = String::from("Case study: two-classifier labeling\n");
                writeln!(s, "counts: tt={} tf={} ft={} ff={} (N = {})", c.tt, c.tf, c.ft, c.ff, c.n()).ok();
                writeln!(s).ok();
                writeln!(s, "{:<32}{:<12}{:<12}{:<11}result", "check", "expected", "computed", "tolerance").ok();
                for check in &self.checks {
                    let tol = check.tolerance.map_or("exact".to_owned(), |t| if t == 0.0 { "exact".into() } else { format!("{t:e}") });
                    writeln!(
                        s,
                        "{:<32}{:<12}{:<12}{:<11}{}",
                        check.name,
                        check.expected,
                        check.computed,
                        tol,
                        verdict(check.passed)
                    )
                    .ok();
                }
                writeln!(s).ok();
                for note in &self.notes {
                    writeln!(s, "note: {note}").ok();
                }
                writeln!(s, "overall: {}", verdict(self.overall)).ok();
                Ok(s)
            }
        }
    }
}
