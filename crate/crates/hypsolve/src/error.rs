//! Error types shared across the solver.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    // tableau
    #[error("tableau triangularity violated: {0}")]
    TriangularityViolation(String),
    #[error("tableau abscissa mismatch: {0}")]
    AbscissaMismatch(String),
    #[error("tableau dimensions inconsistent: {0}")]
    TableauShape(String),

    // models
    #[error("epsilon must be positive, got {0}")]
    NonpositiveEpsilon(f64),
    #[error("inadmissible state: {0}")]
    InadmissibleState(String),
    #[error("nonphysical state: {0}")]
    NonphysicalState(String),
    #[error("invalid model parameter: {0}")]
    InvalidModelParameter(String),

    // grids
    #[error("too few nodes: {0}")]
    TooFewNodes(String),
    #[error("eta must lie strictly in (0,1), got {0}")]
    InvalidEta(f64),
    #[error("obstacles overlap: {0}")]
    GeometryOverlap(String),
    #[error("obstacle extends outside the domain: {0}")]
    ObstacleOutsideDomain(String),
    #[error("grid spacing too large: {0}")]
    InvalidSpacing(String),

    // discretization / boundary
    #[error("ghost data missing: {0}")]
    MissingGhostData(String),
    #[error("missing stencil: {0}")]
    MissingStencil(String),
    #[error("eigenvalue too close to zero at the boundary: lambda={0}")]
    ZeroEigenvalue(f64),
    #[error("Newton iteration failed to converge: {0}")]
    NewtonDivergence(String),
    #[error("singular boundary Jacobian: {0}")]
    SingularBoundaryJacobian(String),
    #[error("singular ILW system: {0}")]
    SingularIlwSystem(String),
    #[error("singular stage matrix: {0}")]
    SingularStageMatrix(String),
    #[error("boundary relation count mismatch: {0}")]
    RelationCountMismatch(String),
    #[error("boundary is not inflow: f'(g) = {0}")]
    NonInflowBoundary(f64),

    // driver
    #[error("configuration error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SolverError>;
