use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure classes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    Domain { what: &'static str, value: f64 },
    /// Kernel evaluated on its diagonal `z = w`.
    Coincidence,
    /// A series or iteration failed to meet its tolerance.
    NonConvergence { what: &'static str, iterations: usize },
    InvalidParameter { name: &'static str, value: f64 },
    /// A hypothesis of the checked statement does not hold for the input.
    Precondition(&'static str),
    /// `|psi(z)| >= 1` for a composed field.
    Range { modulus: f64 },
    /// `|f(z)|` too small for the `|f|^{p-4}` factor.
    SingularPoint { modulus: f64 },
    /// A singular integrand was handed to a tensor rule that cannot resolve it.
    SingularIntegrand,
    /// A finite-difference stencil leaves the domain or touches a puncture.
    Stencil { radius: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "domain error: {what} (got {value})"),
            Error::Coincidence => f.write_str("kernel evaluated at coincident points z = w"),
            Error::NonConvergence { what, iterations } => {
                write!(f, "{what} did not converge after {iterations} iterations")
            }
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid parameter {name} = {value}")
            }
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::Range { modulus } => {
                write!(f, "composed map leaves the disk (|psi(z)| = {modulus})")
            }
            Error::SingularPoint { modulus } => {
                write!(f, "|f(z)| = {modulus} is too close to zero for |f|^(p-4)")
            }
            Error::SingularIntegrand => {
                f.write_str("singular integrand must be integrated with a Mobius-centered rule")
            }
            Error::Stencil { radius } => {
                write!(f, "finite-difference stencil at |z| = {radius} leaves the domain")
            }
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    /// True for the errors caused by the caller's input rather than numerics.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. }
                | Error::Coincidence
                | Error::InvalidParameter { .. }
                | Error::Range { .. }
                | Error::Stencil { .. }
        )
    }
}
