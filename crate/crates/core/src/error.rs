use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input is empty")]
    EmptyInput,
    #[error("label token is empty after trimming")]
    EmptyLabel,
    #[error("duplicate cell for unit `{unit}` and rater `{rater}`")]
    DuplicateCell { unit: String, rater: String },
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("label `{0}` is not in the label set")]
    UnknownLabel(String),
    #[error("unit `{0}` is not in the table")]
    UnknownUnit(String),
    #[error("rater `{0}` is not in the table")]
    UnknownRater(String),
    #[error("expected exactly 2 labels, found {0}")]
    NonBinaryLabels(usize),
    #[error("unit `{0}` has no observations")]
    EmptyUnit(String),
    #[error("rater `{rater}` has no label for unit `{unit}`")]
    MissingPair { unit: String, rater: String },
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("distributions are defined over different label sets")]
    LabelSetMismatch,
    #[error("threshold {0} is outside [0, 1]")]
    InvalidThreshold(f64),

    #[error("label-set size {0} is below 2")]
    TooFewLabels(usize),
    #[error("chance agreement equals 1; coefficient is undefined")]
    DegenerateMarginals,
    #[error("incomplete design: {0}")]
    IncompleteDesign(String),
    #[error("no unit has two or more pairable values")]
    NoPairableValues,
    #[error("expected disagreement is zero; alpha is undefined")]
    DegenerateValues,
    #[error("invalid measurement level: {0}")]
    InvalidMeasurementLevel(String),
    #[error("value {0} is outside [-1, 1]")]
    OutOfRange(f64),

    #[error("no discordant pairs (b + c = 0)")]
    NoDiscordantPairs,
    #[error("argument must be non-negative, got {0}")]
    NegativeArgument(f64),
    #[error("unsupported degrees of freedom {0}")]
    UnsupportedDf(u32),
    #[error("confidence level {0} is outside (0, 1)")]
    InvalidLevel(f64),
    #[error("replicate count must be at least 1")]
    NoReplicates,
    #[error("metric `{0}` is not defined on this data")]
    MetricNotDefined(&'static str),

    #[error("cross-entropy is infinite: q assigns zero mass where p is positive")]
    InfiniteResult,
    #[error("normalized entropy is undefined for a single-label set")]
    NormalizationUndefined,
    #[error("vectors differ: {0}")]
    VectorMismatch(String),
    #[error("vector has zero norm")]
    ZeroVector,
    #[error("vector has zero variance")]
    ZeroVariance,

    #[error("label `{0}` has no numeric scale value")]
    UnmappedLabel(String),
    #[error("sample is degenerate: {0}")]
    DegenerateSample(String),
    #[error("subsample size {size} exceeds the {available} available observations")]
    SizeExceedsData { size: usize, available: usize },
    #[error("no scores supplied")]
    EmptyScores,
    #[error("effect size is zero")]
    ZeroEffect,
    #[error("invalid power specification: {0}")]
    InvalidSpec(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("case-study fixture not found: {0}")]
    MissingFixture(String),
    #[error("format `{0}` is not supported for this result")]
    UnsupportedFormat(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
