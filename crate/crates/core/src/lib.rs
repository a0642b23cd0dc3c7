//! Exact computer algebra for plane polynomial automorphisms over Q.
//!
//! The crate decides, with proofs-by-construction, whether a polynomial
//! automorphism of the affine plane is locally finite, semisimple,
//! unipotent, and whether its conjugacy class is closed; it produces the
//! witnesses: factorization words, triangularizations, diagonalizations,
//! conjugators between conjugate semisimple maps, and one-parameter
//! degeneration families with their limits.
//!
//! All arithmetic is exact — rationals and single quadratic extensions —
//! and every witness is re-verified by composition before it is returned.

pub mod bipoly;
pub mod classify;
pub mod corpus;
pub mod deformation;



pub mod endo;
pub mod error;
pub mod groebner;
pub mod linalg;




pub mod membership;
pub mod normalform;
pub mod numtheory;
pub mod scalar;
pub mod upoly;
pub mod word;


pub use bipoly::{BiPoly, Degree, MonomialOrder};
pub use endo::{AffineMap, PlaneEndo, Point, TriangularMap};
pub use error::{Error, Result};
pub use scalar::{QuadExt, Rational, Scalar};
pub use upoly::UniPoly;
pub use word::{Automorphism, Factor, FactorWord};
