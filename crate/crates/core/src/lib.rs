//! Exact computation of K-theoretic Fulton classes and virtual structure
//! sheaves for zero-dimensional schemes cut out by polynomial ideals.

pub mod algebra;
pub mod error;
pub mod filtration;
pub mod fulton;
pub mod groebner;
pub mod kcharacter;
pub mod linalg;
pub mod parse;
pub mod specfile;
pub mod suite;
pub mod virtual_sheaf;

pub use error::{Error, ErrorClass, Result};
