use thiserror::Error;

/// Errors raised anywhere in the toolkit.
///
/// The CLI maps these onto stable exit codes, so variants are grouped by
/// the failure family rather than by module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field tower mismatch: cannot combine sqrt({0}) with sqrt({1})")]
    FieldTowerMismatch(i64, i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field tower exceeded: {0}")]
    FieldTowerExceeded(String),
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("curve is not invariant: {0}")]
    NotInvariant(String),
    #[error("curve is invariant: {0}")]
    IsInvariant(String),
    #[error("weak separatrix is not a polynomial invariant axis")]
    WeakSeparatrixNotPolynomial,
    #[error("blowup budget of {0} exhausted")]
    BudgetExceeded(usize),
    #[error("singular locus not solvable in the field tower: unsolved factor {0}")]
    UnsolvableSingularLocus(String),
    #[error("non-reduced singularity on curve at {0}")]
    NonReducedOnCurve(String),
    #[error("flip would create a non-reduced singularity (index {0})")]
    WouldCreateNonReduced(String),
    #[error("no non-negative conjugate found: {0}")]
    NotStabilizable(String),
    #[error("matrix has non-real eigenvalues")]
    ComplexEigenvalues,
    #[error("matrix has infinite order")]
    InfiniteOrder,
    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),
    #[error("generator inconsistent with lattice: {0}")]
    InconsistentLattice(String),
    #[error("element set is not a group: {0}")]
    NotAGroup(String),
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(i64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::FieldTowerMismatch(..) => "FieldTowerMismatch",
            Error::DivisionByZero => "DivisionByZero",
            Error::FieldTowerExceeded(_) => "FieldTowerExceeded",
            Error::Syntax { .. } => "Syntax",
            Error::NotInvariant(_) => "NotInvariant",
            Error::IsInvariant(_) => "IsInvariant",
            Error::WeakSeparatrixNotPolynomial => "WeakSeparatrixNotPolynomial",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::UnsolvableSingularLocus(_) => "UnsolvableSingularLocus",
            Error::NonReducedOnCurve(_) => "NonReducedOnCurve",
            Error::WouldCreateNonReduced(_) => "WouldCreateNonReduced",
            Error::NotStabilizable(_) => "NotStabilizable",
            Error::ComplexEigenvalues => "ComplexEigenvalues",
            Error::InfiniteOrder => "InfiniteOrder",
            Error::LatticeMismatch(_) => "LatticeMismatch",
            Error::InconsistentLattice(_) => "InconsistentLattice",
            Error::NotAGroup(_) => "NotAGroup",
            Error::CertificationFailed(_) => "CertificationFailed",
            Error::NotUnimodular(_) => "NotUnimodular",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}
