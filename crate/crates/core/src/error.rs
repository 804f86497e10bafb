use thiserror::Error;

/// Errors raised while building or querying digraphs and vertex sets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop arc at vertex {0}")]
    Loop(usize),
    #[error("vertex {vertex} out of range for n={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex set universe {found} does not match digraph order {expected}")]
    UniverseMismatch { expected: usize, found: usize },
    #[error("malformed vertex set: {0}")]
    MalformedSet(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("k={0} is outside the supported range 1..=2")]
    UnsupportedK(usize),
    #[error("k must be positive")]
    ZeroK,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no admissible r up to {cap} (need r >= {min} with (r-1)*{n} even)")]
    NoValidR { min: usize, cap: usize, n: usize },
    #[error("cannot pair deficiency slots without a duplicate arc")]
    PairingImpossible,
    /// The attachment step found no admissible pair. The construction
    /// guarantees one exists, so this means a bug in the constructor.
    #[error("internal error: no admissible attachment pair for w_{step}")]
    NoAttachmentPair { step: usize },
    #[error("exact solve did not finish: {0}")]
    Indeterminate(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid generator parameters: {0}")]
    Invalid(String),
    #[error("n={n} exceeds the enumeration cap {cap}")]
    AboveCap { n: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Gen(#[from] GenError),
    /// A proven theorem failed on an instance where every value was computed
    /// to optimality. This can only be a solver bug or a refuted result.
    #[error("proven bound violated: {0}")]
    ProvenBoundViolated(String),
}

/// Instance-file parse failure, carrying the 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}
