use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A model or state parameter is out of range. Carries the field name.
    InvalidParameter { field: &'static str, reason: String },
    /// Stiffness matrix is not positive definite (a normal-mode frequency
    /// squared came out `<= 0`).
    NotPositiveDefinite { eigenvalue: f64 },
    /// Covariance violates the uncertainty relation beyond tolerance.
    NonPhysical { detail: String },
    /// Matrix or vector sizes do not agree.
    DimensionMismatch { expected: usize, found: usize },
    /// The operation is not defined for this attachment geometry or branch.
    UnsupportedGeometry(&'static str),
    /// An analysis window reaches past the revival time.
    WindowBeyondRevival { end: f64, t_rev: f64 },
    /// No real detuning places the shifted frequency on the requested zero.
    NoRealSolution { omega_zero: f64 },
    /// Not enough normal modes inside a frequency window.
    TooFewModes { found: usize, required: usize },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad input values, as opposed to numerical
    /// breakdown.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::UnsupportedGeometry(_)
                | Error::WindowBeyondRevival { .. }
                | Error::DimensionMismatch { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { field, reason } => {
                write!(f, "invalid value for `{field}`: {reason}")
            }
            Error::NotPositiveDefinite { eigenvalue } => write!(
                f,
                "stiffness matrix is not positive definite (eigenvalue {eigenvalue:e})"
            ),
            Error::NonPhysical { detail } => write!(f, "non-physical covariance: {detail}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::UnsupportedGeometry(what) => write!(f, "unsupported geometry: {what}"),
            Error::WindowBeyondRevival { end, t_rev } => write!(
                f,
                "analysis window ends at t={end} but the revival time is {t_rev}"
            ),
            Error::NoRealSolution { omega_zero } => write!(
                f,
                "no real detuning reaches spectral zero at omega={omega_zero}"
            ),
            Error::TooFewModes { found, required } => write!(
                f,
                "only {found} normal modes in window, need at least {required}"
            ),
        }
    }
}

impl core::error::Error for Error {}
