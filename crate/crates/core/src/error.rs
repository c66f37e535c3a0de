use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("axes are parallel{}", fmt_pair(*.pair))]
    DegenerateParallel { pair: Option<(usize, usize)> },

    #[error("axes intersect, chirality undefined{}", fmt_pair(*.pair))]
    ZeroChirality { pair: Option<(usize, usize)> },

    #[error("axes are orthogonal, spirality undefined{}", fmt_pair(*.pair))]
    OrthogonalPair { pair: Option<(usize, usize)> },

    #[error("degenerate projection along line {viewpoint}: {detail} (lines {lines:?})")]
    DegenerateProjection { viewpoint: usize, lines: Vec<usize>, detail: &'static str },

    #[error("contact direction is orthogonal to both section axes")]
    IndeterminateContact,

    #[error("cylinders are not tangent (least-squares residual {residual:.3e})")]
    NotTangent { residual: f64 },

    #[error("invalid semi-axes a={a}, b={b}: need a >= b > 0")]
    InvalidSemiAxes { a: f64, b: f64 },

    #[error("configuration needs at least 2 cylinders, got {0}")]
    TooFewCylinders(usize),

    #[error("not a Seidel matrix: {0}")]
    NotSeidel(String),

    #[error("not a ring matrix: {0}")]
    NotRing(String),

    #[error("matrix is not square or has inconsistent rows")]
    NotSquare,

    #[error("matrix orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("target of order {target} is larger than matrix of order {matrix}")]
    OrderError { target: usize, matrix: usize },

    #[error("ring matrix term is singular (det = 0)")]
    SingularRingMatrix,

    #[error("degrees of freedom {dof} < 0 for n = {n}")]
    InfeasibleDof { n: usize, dof: i64 },

    #[error("no convergence after {restarts} restarts (best residual {best_residual:.3e})")]
    NoConvergence { restarts: usize, best_residual: f64, best: Option<Box<crate::solver::SolveResult>> },

    #[error("validation failed on pairs {pairs:?}: {reason}")]
    ValidationFailure { pairs: Vec<(usize, usize)>, reason: String },

    #[error("degenerate construction parameters: {0}")]
    DegenerateParams(String),

    #[error("could not draw a non-degenerate configuration after {0} attempts")]
    SamplingFailed(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown named matrix `{0}`")]
    UnknownName(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

fn fmt_pair(pair: Option<(usize, usize)>) -> String {
    match pair {
        Some((i, j)) => format!(" (cylinders {i} and {j})"),
        None => String::new(),
    }
}

impl Error {
    /// Attach a cylinder pair to a pairwise geometric error.
    pub fn at(self, i: usize, j: usize) -> Self {
        match self {
            Error::DegenerateParallel { .. } => Error::DegenerateParallel { pair: Some((i, j)) },
            Error::ZeroChirality { .. } => Error::ZeroChirality { pair: Some((i, j)) },
            Error::OrthogonalPair { .. } => Error::OrthogonalPair { pair: Some((i, j)) },
            other => other,
        }
    }
}
