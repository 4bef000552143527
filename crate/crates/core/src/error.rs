use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point sets have different cardinalities ({left} vs {right})")]
    CardinalityMismatch { left: usize, right: usize },

    #[error("a simplex in R^{dim} needs {expected} vertices, found {found}")]
    VertexCount {
        dim: usize,
        expected: usize,
        found: usize,
    },

    #[error("non-finite coordinate")]
    NonFinite,

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("linear part is not orthogonal (|QᵀQ - I|_F = {defect:e})")]
    NotOrthogonal { defect: f64 },

    #[error("simplex is affinely dependent; its stabilizer in E(n) is infinite")]
    AffinelyDependent,

    #[error("anchor is not fixed by symmetry #{element} (residual {residual:e})")]
    AnchorNotFixed { element: usize, residual: f64 },

    #[error("simplex is not congruent to the base simplex of the orbit-transport center")]
    OutOfDomain,

    #[error("triangle centers are defined only in the plane (got R^{0})")]
    NotATriangle(usize),

    #[error("triangle vertices are collinear")]
    Collinear,

    #[error("conic matrix must be symmetric and nonzero")]
    InvalidConic,

    #[error("conic has no affine center (parabola or degenerate)")]
    NoAffineCenter,

    #[error("simplex is not equifacetal")]
    NotEquifacetal,

    #[error("simplex is equifacetal; every center agrees with the centroid there")]
    EquifacetalInput,

    #[error("unsupported dimension {0} (supported range {1}..={2})")]
    UnsupportedDimension(usize, usize, usize),

    #[error("parameter must be positive")]
    NonPositiveParameter,

    #[error("isosceles tetrahedron parameters must not all be equal")]
    RegularParameters,

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}
