use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is singular to working precision at pivot {pivot}")]
    Singular { pivot: usize },

    #[error("real Schur iteration did not converge after {iterations} QR sweeps")]
    SchurNoConvergence { iterations: usize },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    EigenNoConvergence { sweeps: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("node {node} is isolated; the walk matrix needs every degree > 0")]
    IsolatedNode { node: usize },

    #[error("node {node} has label {label}, outside 1..={labels}")]
    LabelOutOfRange {
        node: usize,
        label: usize,
        labels: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("fixed point is not well defined: rho(mu)*rho(A) = {rho_product}")]
    IllPosed { rho_product: f64 },

    #[error("linear system is singular (rho(mu)*rho(A) = {rho_product})")]
    SingularSystem { rho_product: f64 },

    #[error("singular {rows}x{cols} block system at block ({row_block}, {col_block})")]
    SingularBlock {
        row_block: usize,
        col_block: usize,
        rows: usize,
        cols: usize,
    },

    #[error("fixed-point iteration stopped after {iterations} iterations, last delta {delta:e}")]
    FixedPointNoConvergence { iterations: usize, delta: f64 },

    #[error("{method} solve residual {residual:e} exceeds bound {bound:e}")]
    Residual {
        method: &'static str,
        residual: f64,
        bound: f64,
    },

    #[error("every solver strategy failed: {0}")]
    AllStrategiesFailed(String),

    #[error("fit diverged at step {step} with loss {loss:e}")]
    Diverged {
        step: usize,
        loss: f64,
        trace: Vec<f64>,
    },

    #[error("run step {step}: no edge from node {from} to node {to}")]
    InvalidRun { step: usize, from: usize, to: usize },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// Innermost error once all context layers are peeled off.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
