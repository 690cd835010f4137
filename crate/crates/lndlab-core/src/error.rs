//! Error type shared by all algebra operations.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("polynomials belong to different rings ({0} vs {1})")]
    RingMismatch(String, String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("inexact division: `{dividend}` is not a multiple of `{divisor}`")]
    InexactDivision { dividend: String, divisor: String },
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("operation limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("tag name `{0}` collides with an ambient variable")]
    TagCollision(String),
    #[error("expected a univariate polynomial, got one in variables {0}")]
    NotUnivariate(String),
    #[error("the zero derivation has no irreducibility verdict")]
    ZeroDerivation,
    #[error("derivation does not stabilize the relation ideal: delta({0}) has nonzero normal form {1}")]
    RelationsNotStable(String, String),
    #[error("`{0}` is not an element of the declared subalgebra")]
    NotInSubalgebra(String),
    #[error("`{0}` does not lie in the kernel of the derivation")]
    NotKernelElement(String),
    #[error("local slice invalid: delta({z}) = {got}, expected {expected}")]
    SliceInvalid { z: String, got: String, expected: String },
    #[error("plinth claim malformed: {0}")]
    PlinthMalformed(String),
    #[error("modification center does not contain f = {0}")]
    FNotInCenter(String),
    #[error("derivation image of f is nonzero: delta({f}) = {image}")]
    DeltaFNonzero { f: String, image: String },
    #[error("center is not delta-stable: delta({gen}) has nonzero normal form {witness}")]
    CenterNotStable { gen: String, witness: String },
    #[error("delta({gen})/{f} is not representable in the modified algebra (witness {witness})")]
    NotRepresentable { gen: String, f: String, witness: String },
    #[error("iterating the derivation on `{0}` exceeded the nilpotency bound {1}")]
    NilpotencyBoundExceeded(String, usize),
    #[error("prime `{0}` is not supported here: it must reduce to a single kernel tag")]
    UnsupportedPrime(String),
    #[error("fiber ideal has dimension {got}, expected {expected}")]
    UnexpectedDimension { got: usize, expected: usize },
    #[error("paper invariant violated: {0}")]
    InvariantViolated(String),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
