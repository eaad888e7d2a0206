//! Graded commutative algebra over `Q` and prime fields.
//!
//! The engine computes Gröbner bases of homogeneous ideals and modules in
//! weighted polynomial rings, minimal graded free resolutions, graded `Ext`
//! modules and, through graded local duality, the degree-wise dimensions of
//! local cohomology `H^i_m(A/I)`. On top of that sit the singularity
//! diagnostics: the graded Du Bois criterion, vanishing and `Ext`-injectivity
//! checks, Koszul-versus-local-cohomology comparison and the
//! characteristic-`p` tests (Fedder, Frobenius `Ext` injectivity and
//! deformation).

pub mod cli;
pub mod cohom;
pub mod error;
pub mod frobchar;
pub mod groebner;
pub mod koszul;
pub mod linalg;
pub mod resolve;
pub mod ring;

pub use error::{Error, Result};
