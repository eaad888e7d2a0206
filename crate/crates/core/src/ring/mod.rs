//! Exact scalars and weighted-graded polynomial arithmetic.

pub mod field;
pub mod monomial;
pub mod parse;
pub mod poly;

pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use monomial::{weighted_degree, Monomial, MonomialOrder};
pub use parse::{parse_polynomial, parse_polynomial_at};
pub use poly::{GradedRingSpec, Poly, PolyRing, Polynomial};
