//! Exact multivariate polynomials over the rationals.

mod context;
pub(crate) mod dense;
mod gcd;
mod monomial;
mod order;
mod parse;
mod polynomial;
mod resultant;

pub use context::{VarContext, Variable};
pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use parse::RelToken;
pub(crate) use parse::{is_keyword, tokenize, Parser, Tok};
pub use polynomial::Polynomial;
pub use resultant::{determinant, sylvester_matrix};

pub(crate) use context::same_context;
pub(crate) use polynomial::pow_rational;

pub type Rational = num_rational::BigRational;

/// Integer as a rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `n / d` as a rational; panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
