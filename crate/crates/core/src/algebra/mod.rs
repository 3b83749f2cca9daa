//! Exact rational arithmetic, monomials, term orders and sparse polynomials.

mod monomial;
mod order;
mod polynomial;
mod ring;

pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use polynomial::{apply_ring_map, poly_product, Polynomial};
pub use ring::AmbientRing;

use num_bigint::BigInt;

/// Exact rational number backed by arbitrary-precision integers.
pub type Rational = num_rational::BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
