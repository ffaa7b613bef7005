//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("matrix is not symmetric (defect {defect:.3e}); the map does not square to the identity")]
    NotSymmetric { defect: f64 },

    #[error("vector is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("block shape error: {0}")]
    BlockShape(String),

    #[error("operator is numerically zero")]
    DegenerateZero,

    #[error("matrix is not skew-symmetric for the conjugation (residual {residual:.3e} > {threshold:.3e})")]
    Membership { residual: f64, threshold: f64 },

    #[error("contour of radius {radius} about {center} meets or encloses another part of the spectrum")]
    ContourTouchesSpectrum { center: String, radius: f64 },

    #[error("resolvent is singular at quadrature node {node}")]
    SingularResolvent { node: String },

    #[error("vector is not an eigenvector for the given value (residual {residual:.3e})")]
    NotEigenpair { residual: f64 },

    #[error("constructed element vanishes")]
    ZeroConstruct,

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("region has an empty boundary")]
    DegenerateRegion,
}
