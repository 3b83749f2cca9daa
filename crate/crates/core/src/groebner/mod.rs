//! Buchberger's algorithm, normal forms, ideal arithmetic, standard
//! monomials and Hilbert series of monomial ideals.

mod buchberger;
mod ideal;
mod monomial_ideal;

pub use ideal::{
    groebner_basis, ideal_power, normal_form, quotient_length, standard_monomials,
    tangent_dimension, GroebnerBasis, Ideal, QuotientLength, StandardMonomialBasis,
    DEFAULT_SPAIR_BUDGET,
};
pub use monomial_ideal::{monomial_hilbert_series, MonomialIdeal};

#[cfg(test)]
mod tests;
