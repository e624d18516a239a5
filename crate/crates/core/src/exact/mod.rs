//! Exact scalars and multivariate parameter polynomials.

pub mod monomial;
pub mod parse;
pub mod poly;
pub mod rational;

pub use monomial::{Monomial, MonomialOrdering, OrderKind};
pub use parse::{parse_expr, parse_expr_at, parse_poly, parse_poly_in, Expr, ParseError};
pub use poly::{Assignment, ParamPoly, Symbols};
pub use rational::{parse_rational, q, rat_from_f64, rat_int, rat_make, rat_to_f64, Rational};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExactError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("malformed rational `{0}`")]
    BadRational(String),
    #[error("symbol lists differ: {left} vs {right}")]
    SymbolMismatch { left: String, right: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{0}` is not assigned")]
    Unassigned(String),
    #[error("division by a non-constant polynomial")]
    NonConstantDivisor,
    #[error("division by zero")]
    DivisionByZero,
}
