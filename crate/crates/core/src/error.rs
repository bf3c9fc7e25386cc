use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every module of the crate.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain(String),
    /// A value that must be an integer or half-integer is neither.
    NotHalfInteger(f64),
    /// Spin labels violate the triangle rule or the projection bound.
    Triangle(String),
    /// A site index is outside the chain, repeated, or missing.
    Site(String),
    /// A pulse acts on two sites that are not nearest neighbours.
    NonAdjacent(usize, usize),
    /// A pulse duration outside `(0, 2π)`.
    Duration(f64),
    /// A family of states that should be orthonormal is not.
    NotOrthonormal(f64),
    /// Two coupling trees cannot be compared.
    IncompatibleShapes(String),
    /// The operator does not commute with total spin or its projection.
    NotConserving(f64),
    /// The operator maps part of the given span outside it.
    NotInvariant(f64),
    /// The encoded-basis gate has off-diagonal weight above threshold.
    NotDiagonal(f64),
    /// A matrix that must be unitary is not.
    NonUnitary(f64),
    /// The requested phase is outside the range reachable by one
    /// three-operation block with axes at cos⁻¹(−1/3).
    UnachievableTheta(f64),
    /// A five-spin check was asked about a sequence that pulses site 0.
    TouchesSiteZero,
    /// Text could not be parsed.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::NotHalfInteger(x) => write!(f, "{x} is not an integer or half-integer"),
            Error::Triangle(msg) => write!(f, "invalid spin labels: {msg}"),
            Error::Site(msg) => write!(f, "invalid site: {msg}"),
            Error::NonAdjacent(i, j) => write!(f, "sites {i} and {j} are not nearest neighbours"),
            Error::Duration(t) => write!(f, "pulse duration {t} is outside (0, 2π)"),
            Error::NotOrthonormal(dev) => write!(f, "states are not orthonormal (deviation {dev:e})"),
            Error::IncompatibleShapes(msg) => write!(f, "incompatible coupling trees: {msg}"),
            Error::NotConserving(dev) => {
                write!(f, "operator does not conserve total spin (commutator norm {dev:e})")
            }
            Error::NotInvariant(dev) => write!(f, "span is not invariant (residual {dev:e})"),
            Error::NotDiagonal(dev) => write!(f, "gate is not diagonal (off-diagonal {dev:e})"),
            Error::NonUnitary(dev) => write!(f, "matrix is not unitary (deviation {dev:e})"),
            Error::UnachievableTheta(theta) => {
                write!(f, "unachievable theta {theta}: outside the reachable range")
            }
            Error::TouchesSiteZero => write!(f, "sequence pulses site 0"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
