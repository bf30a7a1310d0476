//! Exact commutative algebra over Q and prime fields: sparse polynomials,
//! Groebner-based ideal calculus, finitely presented algebras, Zariski cover
//! algorithms and Cech cohomology of twisting sheaves on projective space.

pub mod cech;
pub mod cover;
pub mod error;
pub mod field;
pub mod fpalg;
pub mod groebner;
pub mod poly;
pub mod proj;
pub mod wire;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use fpalg::{AlgHom, FpAlgebra, Presentation, RationalPoint};
pub use groebner::{Ideal, KDim};
pub use poly::{LaurentFraction, LaurentPoly, Monomial, MultiPoly, Ring, TermOrder};
