//! Exact arithmetic verification of arithmeticity certificates for Sp₄
//! hypergeometric monodromy groups.
//!
//! The pipeline: build `A`, `B`, `C = A⁻¹B` from cyclotomic parameters
//! ([`monodromy`]), solve for the invariant symplectic form, pass to a
//! symplectic basis ([`symplectic`]), evaluate a word program ([`words`]) and
//! check that the resulting unipotents lie in distinct root groups spanning a
//! unipotent radical ([`certify`]).

pub mod certify;
pub mod cyclo;
pub mod exact;
pub mod monodromy;
pub mod search;
pub mod symplectic;
pub mod words;

pub use cyclo::{HGParams, IntPolynomial};
pub use exact::{BigInt, ExactMatrix, Rational};
pub use monodromy::{MonodromyTriple, SymplecticForm};
pub use symplectic::{Root, Sign, SymplecticBasis};
