//! Exact arithmetic over Q(params)(k): multivariate polynomials, gcds,
//! rational functions, resultants and factorization.

pub mod factor;
pub mod gcd;
pub mod mpoly;
pub mod ratfun;
pub mod resultant;


pub use factor::{factor_irreducible, factor_ratfun, Factorization};
pub use gcd::{poly_gcd, poly_lcm};
pub use mpoly::MPoly;
pub use ratfun::RatFun;
pub use resultant::{dispersion, integer_roots, resultant, shift_resultant};

pub type BigRat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("factor of degree {degree} exceeds the supported degree {cap}")]
    FactorDegreeExceeded { degree: i64, cap: i64 },
}
