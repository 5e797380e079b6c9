use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex index {index} out of range (vertex count {count})")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("face {face} repeats a vertex")]
    DegenerateFace { face: usize },
    #[error("edge ({0}, {1}) is shared by more than two faces")]
    NonManifoldEdge(usize, usize),
    #[error("edge ({0}, {1}) is traversed twice in the same direction")]
    InconsistentOrientation(usize, usize),
    #[error("vertex {0} is not the apex of a single fan of faces")]
    NonManifoldVertex(usize),
    #[error("vertex {0} belongs to no face")]
    IsolatedVertex(usize),

    #[error("triangle is degenerate (collinear points)")]
    DegenerateTriangle,
    #[error("coincident points in edge stencil")]
    CoincidentPoints,
    #[error("edge {0} has zero length")]
    ZeroLengthEdge(usize),
    #[error("face {0} violates the triangle inequality")]
    TriangleInequalityViolated(usize),
    #[error("vertex {0} receives more than one scale row")]
    DuplicateRow(usize),
    #[error("operation requires a closed surface")]
    SurfaceHasBoundary,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular configuration: {0}")]
    SingularConfiguration(String),
    #[error("no convergence after {iterations} iterations (stationarity {stationarity:e}, feasibility {feasibility:e})")]
    MaxIterations {
        iterations: usize,
        stationarity: f64,
        feasibility: f64,
    },
    #[error("line search failed at iteration {0}")]
    LineSearchFailure(usize),
    #[error("KKT factorization broke down at maximum damping")]
    SingularKkt,
    #[error("prescribed fluxes do not balance: |sum| = {residual:e} > {tolerance:e}")]
    UnbalancedFlux { residual: f64, tolerance: f64 },

    #[error("dual chain is not closed")]
    OpenChain,
    #[error("centerline sample {0} repeats its predecessor")]
    DegenerateSample(usize),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{path}:{line}: face is not a triangle")]
    NonTriangleFace { path: String, line: usize },
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Failures of the numerical method, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::MaxIterations { .. }
                | Error::LineSearchFailure(_)
                | Error::SingularKkt
                | Error::SingularConfiguration(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
