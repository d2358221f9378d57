//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a computation fails or a case-study
//! check fails, 2 on usage errors. Usage errors (bad flags, unreadable
//! flag values, missing files, incompatible combinations) are detected
//! before anything is computed and never produce stdout.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::agreement::{cohen_kappa, cohen_kappa_confusion, fleiss_kappa, krippendorff_alpha, MeasurementLevel};
use crate::annotation::io::{load_confusion, load_table, TableFormat};
use crate::annotation::{label_set, AnnotationTable, ConfusionTable2x2, Label, LabelDistribution, PairedLabels};
use crate::bootstrap::{bootstrap_ci, BootstrapConfig, DEFAULT_REPLICATES, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::power::{
    density_estimate, observation_scores, parse_scale, required_sample_size, subsample_convergence, Bandwidth,
    ConvergenceConfig, Effect, PowerSpec, Tails,
};
use crate::report::{density_supports, reproduce_case_study, reproduce_case_study_from, OutputFormat, Render, ScalarResult};
use crate::significance::{classification_metrics, mcnemar, Metric, TruthAxis};
use crate::soft::{cross_entropy, entropy_correlation, entropy_similarity, js_divergence, EntropyVector, LogBase};

pub const SEED_ENV: &str = "CONCORDIA_SEED";

#[derive(Debug, Parser)]
#[command(name = "concordia", version, about = "Agreement, significance and disagreement metrics for annotations")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Inter-rater reliability coefficients.
    #[command(subcommand)]
    Agree(Agree),
    /// Significance tests and hard metrics.
    #[command(subcommand)]
    Test(TestCmd),
    /// Soft metrics over label distributions.
    #[command(subcommand)]
    Soft(Soft),
    /// Sample size and convergence analysis.
    #[command(subcommand)]
    Power(Power),
    /// Bundled reports.
    #[command(subcommand)]
    Report(ReportCmd),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InputFormat {
    #[value(name = "long_csv")]
    LongCsv,
    #[value(name = "wide_csv")]
    WideCsv,
}

impl From<InputFormat> for TableFormat {
    fn from(f: InputFormat) -> Self {
        match f {
            InputFormat::LongCsv => TableFormat::LongCsv,
            InputFormat::WideCsv => TableFormat::WideCsv,
        }
    }
}

#[derive(Debug, Args)]
struct TableArgs {
    /// Annotation table.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = InputFormat::LongCsv)]
    input_format: InputFormat,
    /// Declared label set, comma separated. Defaults to the labels observed.
    #[arg(long)]
    labels: Option<String>,
}

/// Either a confusion JSON file or a table plus the two raters to pair.
#[derive(Debug, Args)]
struct PairSource {
    /// 2x2 confusion counts as JSON.
    #[arg(long, conflicts_with_all = ["input", "rater_a", "rater_b"], required_unless_present = "input")]
    confusion: Option<PathBuf>,
    /// Annotation table; requires --rater-a and --rater-b.
    #[arg(long, requires_all = ["rater_a", "rater_b"])]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = InputFormat::LongCsv)]
    input_format: InputFormat,
    #[arg(long)]
    labels: Option<String>,
    #[arg(long)]
    rater_a: Option<String>,
    #[arg(long)]
    rater_b: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Level {
    Nominal,
    Ordinal,
    Interval,
    Ratio,
}

#[derive(Debug, Subcommand)]
enum Agree {
    /// Cohen's kappa for two raters.
    Cohen(PairSource),
    /// Fleiss' kappa for a complete design.
    Fleiss(TableArgs),
    /// Krippendorff's alpha; tolerates missing ratings.
    Kripp {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long, value_enum, default_value_t = Level::Nominal)]
        level: Level,
        /// Ordinal ranking, lowest first: `low,mid,high`.
        #[arg(long)]
        order: Option<String>,
        /// Interval or ratio values: `low=1,mid=2,high=3`.
        #[arg(long)]
        scale: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Truth {
    A,
    B,
}

impl From<Truth> for TruthAxis {
    fn from(t: Truth) -> Self {
        match t {
            Truth::A => TruthAxis::A,
            Truth::B => TruthAxis::B,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    Accuracy,
    Precision,
    Recall,
    F1,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Accuracy => Metric::Accuracy,
            MetricArg::Precision => Metric::Precision,
            MetricArg::Recall => Metric::Recall,
            MetricArg::F1 => Metric::F1,
        }
    }
}

#[derive(Debug, Subcommand)]
enum TestCmd {
    /// McNemar's test on paired binary labels.
    Mcnemar {
        #[command(flatten)]
        source: PairSource,
        /// Positive label when pairing a table.
        #[arg(long)]
        positive: Option<String>,
        /// Drop the continuity correction.
        #[arg(long)]
        no_continuity: bool,
    },
    /// Accuracy, precision, recall and F1.
    Metrics {
        #[command(flatten)]
        source: PairSource,
        #[arg(long)]
        positive: Option<String>,
        /// Rater holding the reference labels.
        #[arg(long, value_enum, default_value_t = Truth::A)]
        truth: Truth,
    },
    /// Percentile bootstrap interval for a hard metric.
    Bootstrap {
        #[command(flatten)]
        source: PairSource,
        #[arg(long)]
        positive: Option<String>,
        #[arg(long, value_enum, default_value_t = Truth::A)]
        truth: Truth,
        #[arg(long, value_enum, default_value_t = MetricArg::F1)]
        metric: MetricArg,
        #[arg(long, default_value_t = DEFAULT_REPLICATES)]
        replicates: usize,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BaseArg {
    #[value(name = "2")]
    Two,
    #[value(name = "e")]
    E,
}

impl From<BaseArg> for LogBase {
    fn from(b: BaseArg) -> Self {
        match b {
            BaseArg::Two => LogBase::Two,
            BaseArg::E => LogBase::E,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Soft {
    /// Jensen-Shannon divergence between two distributions.
    Jsd {
        /// `label=prob,...`
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        #[arg(long, value_enum, default_value_t = BaseArg::Two)]
        base: BaseArg,
    },
    /// Cross-entropy of q relative to p.
    Xent {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        #[arg(long, value_enum, default_value_t = BaseArg::Two)]
        base: BaseArg,
        /// Additive smoothing for q.
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
    },
    /// Per-unit label entropy of a table.
    Entropy {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long, value_enum, default_value_t = BaseArg::Two)]
        base: BaseArg,
        /// Divide by log k.
        #[arg(long)]
        normalized: bool,
    },
    /// Cosine similarity of human and model entropy vectors.
    Esim(EntropyPair),
    /// Pearson correlation of human and model entropy vectors.
    Ecorr(EntropyPair),
}

#[derive(Debug, Args)]
struct EntropyPair {
    /// Human annotation table.
    #[arg(long)]
    human: PathBuf,
    /// Model annotation table; aligned to the human unit order.
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_enum, default_value_t = InputFormat::LongCsv)]
    input_format: InputFormat,
    #[arg(long)]
    labels: Option<String>,
    #[arg(long, value_enum, default_value_t = BaseArg::Two)]
    base: BaseArg,
    /// Compare raw entropies instead of entropies divided by log k.
    #[arg(long)]
    raw: bool,
}

#[derive(Debug, Args)]
struct ScoreSource {
    /// Annotation table whose labels are mapped through --scale.
    #[arg(long, requires = "scale", conflicts_with = "scores", required_unless_present = "scores")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = InputFormat::LongCsv)]
    input_format: InputFormat,
    /// Label values: `Yes=1,Maybe=2,No=3`.
    #[arg(long)]
    scale: Option<String>,
    /// Numeric scores, one per line, with an optional `score` header.
    #[arg(long)]
    scores: Option<PathBuf>,
    /// `auto` or a positive bandwidth.
    #[arg(long, default_value = "auto")]
    bandwidth: String,
    #[arg(long, default_value_t = 256)]
    grid_points: usize,
}

#[derive(Debug, Subcommand)]
enum Power {
    /// Items per group for a target power.
    Size {
        #[arg(long, requires = "p2", conflicts_with = "d", required_unless_present = "d")]
        p1: Option<f64>,
        #[arg(long, requires = "p1")]
        p2: Option<f64>,
        /// Standardized mean difference.
        #[arg(long)]
        d: Option<f64>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 0.8)]
        power: f64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
        tails: u8,
    },
    /// Mean JSD of subsample densities to the full-sample density.
    Converge {
        #[command(flatten)]
        source: ScoreSource,
        /// Comma separated subsample sizes.
        #[arg(long, default_value = "100,300,600")]
        sizes: String,
        #[arg(long, default_value_t = 20)]
        reps: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Kernel density of item scores (json or csv only).
    Density {
        #[command(flatten)]
        source: ScoreSource,
    },
}

#[derive(Debug, Subcommand)]
enum ReportCmd {
    /// Check the reference case-study numbers.
    Casestudy {
        /// Confusion JSON to check instead of the bundled counts.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn usage(message: String) -> Self {
        CliOutput { code: 2, stdout: String::new(), stderr: message }
    }
}

/// Runs the command line with `CONCORDIA_SEED` read from the environment.
pub fn run_cli<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env = std::env::var(SEED_ENV).ok();
    run_cli_with_seed_env(argv, env.as_deref())
}

/// As [`run_cli`] with an explicit value standing in for `CONCORDIA_SEED`.
pub fn run_cli_with_seed_env<I, T>(argv: I, seed_env: Option<&str>) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            // --help and --version are successful runs.
            return if code == 0 {
                CliOutput { code: 0, stdout: text, stderr: String::new() }
            } else {
                CliOutput::usage(text)
            };
        }
    };
    let format = cli.format;
    let job = match plan(cli.command, format, seed_env) {
        Ok(job) => job,
        Err(msg) => return CliOutput::usage(format!("error: {msg}\n")),
    };
    match job() {
        Ok((text, ok)) => CliOutput { code: if ok { 0 } else { 1 }, stdout: text, stderr: String::new() },
        Err(e) => CliOutput { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

type Job = Box<dyn FnOnce() -> Result<(String, bool)>>;

fn done<R: Render>(result: R, format: OutputFormat) -> Result<(String, bool)> {
    Ok((result.render(format)?, true))
}

fn existing(flag: &str, path: &Path) -> std::result::Result<PathBuf, String> {
    if path.is_file() {
        Ok(path.to_path_buf())
    } else {
        Err(format!("{flag}: file not found: {}", path.display()))
    }
}

fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> std::result::Result<u64, String> {
    match (flag, env) {
        (Some(seed), _) => Ok(seed),
        (None, Some(raw)) => raw
            .trim()
            .parse()
            .map_err(|_| format!("{SEED_ENV} must be an unsigned integer, got `{raw}`")),
        (None, None) => Ok(DEFAULT_SEED),
    }
}

fn parse_labels(raw: Option<&str>) -> std::result::Result<Option<Vec<Label>>, String> {
    raw.map(|s| label_set(s.split(',')).map_err(|e| format!("--labels: {e}"))).transpose()
}

fn parse_distribution(flag: &str, raw: &str) -> std::result::Result<LabelDistribution, String> {
    let pairs = raw
        .split(',')
        .map(|item| {
            let (label, p) = item
                .split_once('=')
                .ok_or_else(|| format!("{flag}: expected `label=prob`, got `{item}`"))?;
            let p: f64 = p.trim().parse().map_err(|_| format!("{flag}: `{p}` is not a number"))?;
            Ok((label.trim().to_owned(), p))
        })
        .collect::<std::result::Result<Vec<_>, String>>()?;
    LabelDistribution::from_pairs(&pairs).map_err(|e| format!("{flag}: {e}"))
}

enum Pairs {
    Confusion(PathBuf),
    Table { path: PathBuf, format: TableFormat, labels: Option<Vec<Label>>, a: String, b: String },
}

impl Pairs {
    fn new(src: PairSource) -> std::result::Result<Self, String> {
        if let Some(path) = src.confusion {
            return Ok(Pairs::Confusion(existing("--confusion", &path)?));
        }
        let path = src.input.expect("clap enforces --confusion or --input");
        Ok(Pairs::Table {
            path: existing("--input", &path)?,
            format: src.input_format.into(),
            labels: parse_labels(src.labels.as_deref())?,
            a: src.rater_a.expect("clap requires --rater-a"),
            b: src.rater_b.expect("clap requires --rater-b"),
        })
    }

    fn paired(&self) -> Result<PairedLabels> {
        match self {
            Pairs::Confusion(path) => {
                load_confusion(path)?.to_paired(&Label::new("T")?, &Label::new("F")?)
            }
            Pairs::Table { path, format, labels, a, b } => {
                PairedLabels::from_table(&load_table(path, *format, labels.as_deref())?, a, b)
            }
        }
    }

    fn confusion(&self, positive: Option<&Label>) -> Result<ConfusionTable2x2> {
        match self {
            Pairs::Confusion(path) => load_confusion(path),
            Pairs::Table { .. } => {
                let paired = self.paired()?;
                let positive = positive.ok_or_else(|| {
                    Error::InvalidArgument("--positive is required when pairing a table".into())
                })?;
                paired.to_confusion(positive)
            }
        }
    }

    fn positive(&self, raw: Option<&str>) -> std::result::Result<Option<Label>, String> {
        match (self, raw) {
            (Pairs::Confusion(_), Some(_)) => Err("--positive applies to --input tables only".into()),
            (Pairs::Confusion(_), None) => Ok(Some(Label::new("T").expect("non-empty"))),
            (Pairs::Table { .. }, Some(p)) => Label::new(p).map(Some).map_err(|e| format!("--positive: {e}")),
            (Pairs::Table { .. }, None) => Err("--positive is required with --input".into()),
        }
    }
}

struct Table {
    path: PathBuf,
    format: TableFormat,
    labels: Option<Vec<Label>>,
}

impl Table {
    fn new(args: TableArgs) -> std::result::Result<Self, String> {
        Ok(Table {
            path: existing("--input", &args.input)?,
            format: args.input_format.into(),
            labels: parse_labels(args.labels.as_deref())?,
        })
    }

    fn load(&self) -> Result<AnnotationTable> {
        load_table(&self.path, self.format, self.labels.as_deref())
    }
}

enum Scores {
    Table { table: Table, scale: BTreeMap<Label, f64> },
    File(PathBuf),
}

impl Scores {
    fn new(src: &ScoreSource) -> std::result::Result<(Self, Bandwidth), String> {
        let bandwidth: Bandwidth = src.bandwidth.parse().map_err(|e| format!("--bandwidth: {e}"))?;
        if src.grid_points < 2 {
            return Err("--grid-points must be at least 2".into());
        }
        let scores = match (&src.input, &src.scores) {
            (Some(input), _) => Scores::Table {
                table: Table { path: existing("--input", input)?, format: src.input_format.into(), labels: None },
                scale: parse_scale(src.scale.as_deref().expect("clap requires --scale"))
                    .map_err(|e| format!("--scale: {e}"))?,
            },
            (None, Some(path)) => Scores::File(existing("--scores", path)?),
            (None, None) => unreachable!("clap requires --input or --scores"),
        };
        Ok((scores, bandwidth))
    }

    fn load(&self) -> Result<Vec<f64>> {
        match self {
            Scores::Table { table, scale } => observation_scores(&table.load()?, scale),
            Scores::File(path) => read_scores(&fs::read_to_string(path)?),
        }
    }
}

/// Parses one number per line. A first line reading `score` is a header;
/// blank lines are skipped.
pub fn read_scores(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line == "score") {
            continue;
        }
        out.push(
            line.parse()
                .map_err(|_| Error::Parse(format!("line {}: `{line}` is not a number", i + 1)))?,
        );
    }
    Ok(out)
}

fn parse_sizes(raw: &str) -> std::result::Result<Vec<usize>, String> {
    raw.split(',')
        .map(|s| s.trim().parse().map_err(|_| format!("--sizes: `{s}` is not a size")))
        .collect()
}

fn measurement_level(level: Level, order: Option<&str>, scale: Option<&str>) -> std::result::Result<MeasurementLevel, String> {
    let needs = |flag: &str| format!("--level {:?} requires {flag}", level).to_lowercase();
    match (level, order, scale) {
        (Level::Nominal, None, None) => Ok(MeasurementLevel::Nominal),
        (Level::Ordinal, Some(order), None) => {
            let ranks = order
                .split(',')
                .map(Label::new)
                .collect::<Result<Vec<_>>>()
                .map_err(|e| format!("--order: {e}"))?;
            Ok(MeasurementLevel::Ordinal(ranks))
        }
        (Level::Interval | Level::Ratio, None, Some(scale)) => {
            let values = parse_scale(scale).map_err(|e| format!("--scale: {e}"))?;
            Ok(if matches!(level, Level::Ratio) {
                MeasurementLevel::Ratio(values)
            } else {
                MeasurementLevel::Interval(values)
            })
        }
        (Level::Ordinal, None, _) => Err(needs("--order")),
        (Level::Interval | Level::Ratio, _, None) => Err(needs("--scale")),
        (_, Some(_), _) => Err("--order applies to --level ordinal only".into()),
        (_, _, Some(_)) => Err("--scale applies to --level interval or ratio only".into()),
    }
}

/// Validates every flag and file reference, then returns the computation.
fn plan(command: Command, format: OutputFormat, seed_env: Option<&str>) -> std::result::Result<Job, String> {
    Ok(match command {
        Command::Agree(Agree::Cohen(src)) => {
            let pairs = Pairs::new(src)?;
            Box::new(move || match &pairs {
                Pairs::Confusion(path) => done(cohen_kappa_confusion(&load_confusion(path)?)?, format),
                Pairs::Table { .. } => done(cohen_kappa(&pairs.paired()?)?, format),
            })
        }
        Command::Agree(Agree::Fleiss(args)) => {
            let table = Table::new(args)?;
            Box::new(move || done(fleiss_kappa(&table.load()?)?, format))
        }
        Command::Agree(Agree::Kripp { table, level, order, scale }) => {
            let table = Table::new(table)?;
            let level = measurement_level(level, order.as_deref(), scale.as_deref())?;
            Box::new(move || done(krippendorff_alpha(&table.load()?, &level)?, format))
        }
        Command::Test(TestCmd::Mcnemar { source, positive, no_continuity }) => {
            let pairs = Pairs::new(source)?;
            let positive = pairs.positive(positive.as_deref())?;
            Box::new(move || done(mcnemar(&pairs.confusion(positive.as_ref())?, !no_continuity)?, format))
        }
        Command::Test(TestCmd::Metrics { source, positive, truth }) => {
            let pairs = Pairs::new(source)?;
            let positive = pairs.positive(positive.as_deref())?;
            Box::new(move || done(classification_metrics(&pairs.confusion(positive.as_ref())?, truth.into()), format))
        }
        Command::Test(TestCmd::Bootstrap { source, positive, truth, metric, replicates, level, seed }) => {
            let pairs = Pairs::new(source)?;
            let positive = pairs.positive(positive.as_deref())?.expect("resolved above");
            let config = BootstrapConfig { replicates, level, seed: resolve_seed(seed, seed_env)? };
            Box::new(move || done(bootstrap_ci(metric.into(), &pairs.paired()?, &positive, truth.into(), &config)?, format))
        }
        Command::Soft(Soft::Jsd { p, q, base }) => {
            let (p, q) = (parse_distribution("--p", &p)?, parse_distribution("--q", &q)?);
            Box::new(move || {
                let value = js_divergence(&p, &q, base.into())?;
                done(ScalarResult { metric: "jsd".into(), value }, format)
            })
        }
        Command::Soft(Soft::Xent { p, q, base, epsilon }) => {
            let (p, q) = (parse_distribution("--p", &p)?, parse_distribution("--q", &q)?);
            Box::new(move || {
                let value = cross_entropy(&p, &q, base.into(), epsilon)?;
                done(ScalarResult { metric: "cross_entropy".into(), value }, format)
            })
        }
        Command::Soft(Soft::Entropy { table, base, normalized }) => {
            let table = Table::new(table)?;
            Box::new(move || done(EntropyVector::from_table(&table.load()?, base.into(), normalized)?, format))
        }
        Command::Soft(Soft::Esim(args)) => entropy_pair(args, format, "entropy_similarity", entropy_similarity)?,
        Command::Soft(Soft::Ecorr(args)) => entropy_pair(args, format, "entropy_correlation", entropy_correlation)?,
        Command::Power(Power::Size { p1, p2, d, alpha, power, tails }) => {
            let effect = match (p1, p2, d) {
                (Some(p1), Some(p2), None) => Effect::Proportions { p1, p2 },
                (None, None, Some(d)) => Effect::StandardizedMean { d },
                _ => unreachable!("clap enforces --p1/--p2 or --d"),
            };
            let tails = if tails == 1 { Tails::One } else { Tails::Two };
            let spec = PowerSpec { alpha, power, effect, tails };
            Box::new(move || done(required_sample_size(&spec)?, format))
        }
        Command::Power(Power::Converge { source, sizes, reps, seed }) => {
            let (scores, bandwidth) = Scores::new(&source)?;
            let config = ConvergenceConfig {
                sizes: parse_sizes(&sizes)?,
                reps,
                seed: resolve_seed(seed, seed_env)?,
                bandwidth,
                grid_points: source.grid_points,
            };
            Box::new(move || done(subsample_convergence(&scores.load()?, &config)?, format))
        }
        Command::Power(Power::Density { source }) => {
            if !density_supports(format) {
                return Err(format!("--format {format} is not available for density curves; use json or csv"));
            }
            let (scores, bandwidth) = Scores::new(&source)?;
            let points = source.grid_points;
            Box::new(move || done(density_estimate(&scores.load()?, bandwidth, points)?, format))
        }
        Command::Report(ReportCmd::Casestudy { fixture }) => {
            let fixture = fixture.map(|p| existing("--fixture", &p)).transpose()?;
            Box::new(move || {
                let report = match &fixture {
                    Some(path) => reproduce_case_study_from(path)?,
                    None => reproduce_case_study()?,
                };
                Ok((report.render(format)?, report.overall))
            })
        }
    })
}

fn entropy_pair(
    args: EntropyPair,
    format: OutputFormat,
    name: &'static str,
    compare: fn(&EntropyVector, &EntropyVector) -> Result<f64>,
) -> std::result::Result<Job, String> {
    let labels = parse_labels(args.labels.as_deref())?;
    let human = Table { path: existing("--human", &args.human)?, format: args.input_format.into(), labels: labels.clone() };
    let model = Table { path: existing("--model", &args.model)?, format: args.input_format.into(), labels };
    let (base, normalized) = (args.base.into(), !args.raw);
    Ok(Box::new(move || {
        let h = EntropyVector::from_table(&human.load()?, base, normalized)?;
        let m = EntropyVector::from_table(&model.load()?, base, normalized)?.aligned_to(h.units())?;
        done(ScalarResult { metric: name.into(), value: compare(&h, &m)? }, format)
    }))
}
