use thiserror::Error;

/// Errors raised by trade-off analysis and search routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid trade-off point (accuracy_loss={accuracy_loss}, runtime={runtime}): {reason}")]
    InvalidPoint {
        accuracy_loss: f64,
        runtime: f64,
        reason: &'static str,
    },

    #[error("trade-off space is empty")]
    EmptySpace,

    #[error("input sequence is empty")]
    EmptyInput,

    #[error("frontier curve is empty")]
    EmptyCurve,

    #[error("points must be sorted by strictly increasing accuracy loss (index {index})")]
    UnsortedInput { index: usize },

    #[error("invalid knob `{knob}`: {reason}")]
    InvalidKnob { knob: String, reason: String },

    #[error("invalid configuration for framework `{framework}`: {reason}")]
    InvalidConfiguration { framework: String, reason: String },

    #[error("invalid trade-off space `{framework}`: {reason}")]
    InvalidSpace { framework: String, reason: String },

    #[error("degenerate comparison range [{min_x}, {max_x}]: accuracy-loss spans do not overlap with positive width")]
    DegenerateRange { min_x: f64, max_x: f64 },

    #[error("at least two hulls are required for a comparison, got {0}")]
    TooFewHulls(usize),

    #[error("accuracy loss {value} lies outside the hull span [{lo}, {hi}]")]
    OutOfSpan { value: f64, lo: f64, hi: f64 },

    #[error("baseline framework `{0}` is not among the compared hulls")]
    MissingBaseline(String),

    #[error("granularity must be at least 2, got {0}")]
    InvalidGranularity(usize),

    #[error("sequence lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("degenerate fit: {0}")]
    DegenerateFit(&'static str),

    #[error("threshold must be a finite non-negative number, got {0}")]
    NegativeThreshold(f64),

    #[error("invalid sigmoid parameters (beta={beta}, gamma={gamma}): gamma must be positive and both finite")]
    InvalidSigmoid { beta: f64, gamma: f64 },

    #[error("candidate set for framework `{0}` is empty")]
    EmptyCandidates(String),

    #[error("combined space size overflows")]
    SpaceOverflow,

    #[error("no measurement for configuration {configuration} on input `{input}`")]
    EvaluatorMiss { configuration: String, input: String },

    #[error("conflicting records for configuration {configuration} on input `{input}`")]
    ConflictingRecord { configuration: String, input: String },

    #[error("combined space of {size} configurations exceeds the cap of {cap}")]
    CapExceeded { size: u128, cap: u128 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("degenerate study: {0}")]
    DegenerateStudy(String),
}

impl Error {
    /// True for failures caused by degenerate mathematics (empty overlap,
    /// zero variance, too few frontier points) rather than malformed data.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DegenerateRange { .. } | Error::DegenerateFit(_) | Error::DegenerateStudy(_) | Error::TooFewHulls(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
