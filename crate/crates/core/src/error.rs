use std::fmt;

use num_complex::Complex64;

/// Pipeline stage an error originated in. Printed as the tag on CLI failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Estimate,
    Partition,
    Loewner,
    Realize,
    ToContinuous,
    SpectralZeros,
    RealizePh,
    Realify,
    ExtractPh,
    Certify,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            Stage::Estimate => "estimate",
            Stage::Partition => "partition",
            Stage::Loewner => "loewner",
            Stage::Realize => "realize",
            Stage::ToContinuous => "to-continuous",
            Stage::SpectralZeros => "spectral-zeros",
            Stage::RealizePh => "realize-ph",
            Stage::Realify => "realify",
            Stage::ExtractPh => "extract-ph",
            Stage::Certify => "certify",
        };
        f.write_str(tag)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("pencil sE - A is numerically singular at s = {s} (rcond {rcond:.3e})")]
    SingularPencil { s: Complex64, rcond: f64 },

    #[error("E is numerically singular (rcond {rcond:.3e})")]
    SingularE { rcond: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("input spectrum carries {ratio:.3e} of its energy off the planned indices")]
    SupportMismatch { ratio: f64 },

    #[error("regressor has numerical rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("left point {left} and right point {right} coincide")]
    PointCollision { left: Complex64, right: Complex64 },

    #[error("data are degenerate: largest singular value {sigma_max:.3e}")]
    DegenerateData { sigma_max: f64 },

    #[error("no finite spectral zero in the open right half-plane")]
    NoRhpZeros,

    #[error("generalized eigenvalue iteration failed: {0}")]
    PencilFailure(String),

    #[error("tangential interpolation residual {residual:.3e} exceeds tolerance")]
    InterpolationFailure { residual: f64 },

    #[error("neither E nor -E is positive definite (eigenvalues in [{min:.3e}, {max:.3e}])")]
    IndefiniteE { min: f64, max: f64 },

    #[error("conjugacy violation: {0}")]
    ConjugacyViolation(String),

    #[error("E is not symmetric positive definite")]
    NotSpd,

    #[error("dissipation block has minimum eigenvalue {min_eig:.3e}")]
    StructureFailure { min_eig: f64 },

    #[error("system is not asymptotically stable (max real part {max_re:.3e})")]
    Unstable { max_re: f64 },

    #[error("H2 norm undefined: feedthrough norm {norm:.3e}")]
    NonzeroD { norm: f64 },

    #[error("{0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("{stage}: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Stage tag, if the error was raised inside the identification pipeline.
    pub fn stage(&self) -> Option<Stage> {
        match self {
            Error::Stage { stage, .. } => Some(*stage),
            _ => None,
        }
    }

    /// Strips any stage wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) trait StageExt<T> {
    fn stage(self, stage: Stage) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: Stage) -> Result<T> {
        self.map_err(|e| match e {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        })
    }
}
