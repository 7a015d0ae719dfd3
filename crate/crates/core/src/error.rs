use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("edge probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("duplicate edge {u}-{v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseGraphError {
    #[error("edge list has no vertex-count line")]
    MissingHeader,
    #[error("line {line}: `{token}` is not a non-negative integer")]
    NotANumber { line: usize, token: String },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
}

/// Failure to turn a weight specification into a [`crate::WeightFn`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeightSpecError {
    #[error("unknown weight `{name}`; valid names: {valid}")]
    UnknownBuiltin { name: String, valid: String },
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("function `{name}` at offset {offset} takes {expected} argument(s), got {got}")]
    WrongArity {
        name: String,
        offset: usize,
        expected: usize,
        got: usize,
    },
}

impl WeightSpecError {
    /// Byte offset into the source, when the error came from the parser.
    pub fn offset(&self) -> Option<usize> {
        match self {
            Self::UnknownBuiltin { .. } => None,
            Self::Syntax { offset, .. }
            | Self::UnknownIdentifier { offset, .. }
            | Self::WrongArity { offset, .. } => Some(*offset),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of negative value {0}")]
    NegativeSqrt(f64),
    #[error("logarithm of non-positive value {0}")]
    NonPositiveLog(f64),
    #[error("weight evaluated to a non-finite value")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("graph is disconnected: vertices {i} and {j} are at infinite distance")]
    Disconnected { i: usize, j: usize },
    #[error("weight evaluation failed at entry ({i}, {j}): {source}")]
    Weight {
        i: usize,
        j: usize,
        #[source]
        source: EvalError,
    },
    #[error("f(1, np, np) equals f(2, np, np): degenerate branch, A1 cannot be normalised")]
    Degenerate,
    #[error("probability {0} is outside (0, 1)")]
    InvalidProbability(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("matrix is not symmetric: entries ({i}, {j}) differ by {diff:e}")]
    NonSymmetric { i: usize, j: usize, diff: f64 },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("moment order {0} exceeds the supported maximum of 24")]
    MomentOrder(u32),
    #[error("eigenvalue iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TheoryError {
    #[error("Catalan moment order s = {0} exceeds the supported maximum of 12")]
    CatalanOrder(u32),
    #[error("probability {0} is outside (0, 1)")]
    InvalidProbability(f64),
    #[error("n must be at least 2, got {0}")]
    TooFewVertices(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment configuration: {0}")]
    Config(String),
    #[error(
        "n = {n}, p = {p}: {rejections} consecutive disconnected samples; p is too small for this n"
    )]
    TooManyRejections { n: usize, p: f64, rejections: usize },
    #[error(transparent)]
    Weight(#[from] WeightSpecError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error("report format `{0}` needs histogram data, which only the esd mode produces")]
    NoHistogram(&'static str),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot write csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
