use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported center dimension l = {0} (supported: 1, 2, 3)")]
    UnsupportedCenterDimension(usize),
    #[error("invalid multiplicity: a + b must be at least 1")]
    InvalidMultiplicity,
    #[error("input algebra is not of Heisenberg type: {0}")]
    NotHType(String),
    #[error("order {0} is not supported")]
    OrderUnsupported(usize),
    #[error("exact sphere moments need degree <= 8, got {0}")]
    DegreeTooHigh(usize),
    #[error("series is singular: {0}")]
    SingularSeries(String),
    #[error("leading coefficient A0 is zero")]
    ZeroLeadingCoefficient,
    #[error("integrator failed: {0}")]
    StepFailure(String),
    #[error("coefficient fit is ill-conditioned: {0}")]
    FitIllConditioned(String),
    #[error("proper elimination needs equal radial degrees, got {target:?} and {tool:?}")]
    DegreeMismatch { target: Option<i32>, tool: Option<i32> },
    #[error("symbol {0} has zero coefficient in the elimination tool")]
    SymbolAbsent(String),
    #[error("gram matrix is degenerate on the generator span")]
    DegenerateGram,
    #[error("zero identity vector")]
    ZeroIdentity,
    #[error("lattice vector Z must be nonzero")]
    ZeroLatticeVector,
    #[error("J_Z is not a complex structure (J^2 != -I)")]
    NotComplexStructure,
    #[error("boundary condition (A, B) is degenerate")]
    DegenerateBoundary,
    #[error("eigenvalue refinement failed to converge: {0}")]
    ConvergenceFailure(String),
    #[error("skew spectra differ: {0}")]
    SpectraDiffer(String),
    #[error("family members disagree in (l, a+b): {0}")]
    FamilyMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
