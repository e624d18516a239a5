//! Multiplicity of the zero periodic solution of the Abel-type equations
//!
//! ```text
//! z' = A(t) z^3 + B(t) z^2            (cubic)
//! z' = k z^4 + A(t) z^3 + B(t) z^2    (quartic, k = 1, or scaled with symbolic k)
//! ```
//!
//! on `0 <= t <= 1`, with polynomial or continuous piecewise-linear
//! coefficients. The symbolic side computes the focal quantities `eta_k`
//! exactly and analyses their ideals with a Gröbner engine; the numeric
//! side integrates the equation and fits the displacement map as an
//! independent cross-check.

pub mod cases;
pub mod center;
pub mod exact;
pub mod groebner;
pub mod input;
pub mod numverify;
pub mod piecewise;
pub mod variational;

pub use exact::{ParamPoly, Rational, Symbols};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Exact(#[from] exact::ExactError),
    #[error(transparent)]
    Parse(#[from] exact::ParseError),
    #[error(transparent)]
    Piecewise(#[from] piecewise::PiecewiseError),
    #[error(transparent)]
    Groebner(#[from] groebner::GroebnerError),
    #[error(transparent)]
    Variational(#[from] variational::VariationalError),
    #[error(transparent)]
    Center(#[from] center::CenterError),
    #[error(transparent)]
    Numeric(#[from] numverify::NumericError),
    #[error(transparent)]
    Input(#[from] input::InputError),
    #[error("{0}")]
    Case(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
