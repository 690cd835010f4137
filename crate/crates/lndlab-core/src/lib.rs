//! Exact symbolic computation for additive group actions on factorial
//! affine varieties: multivariate polynomials over the rationals, Groebner
//! bases and the ideal calculus, locally nilpotent derivations, equivariant
//! affine modification chains, and fiber analysis of quotient morphisms.

pub mod error;
pub mod fiber;
pub mod ideal;
pub mod limits;
pub mod lnd;
pub mod modification;
pub mod parse;
pub mod poly;
pub mod ring;
pub mod subalgebra;
pub mod suites;
pub mod univar;
pub mod util;

pub use error::{Error, Result};
pub use ideal::IdealHandle;
pub use limits::Limits;
pub use poly::{Polynomial, Rational};
pub use ring::{Monomial, MonomialOrder, RingContext};
