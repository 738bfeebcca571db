//! Exact-arithmetic graded free resolutions over k[x1,x2,x3]: trimming
//! constructions, multiplicative (DG) structures, and Tor-algebra
//! classification, all over F_p or Q with no floating point anywhere.

pub mod complex;
pub mod dg;
pub mod error;
pub mod families;
pub mod field;
pub mod graded;
pub mod koszul;
pub mod linalg;
pub mod monomial;
pub mod poly;
pub mod quotient;
pub mod sparse;
pub mod tor;
pub mod trimming;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar, DEFAULT_PRIME};
pub use graded::PolyMatrix;
pub use linalg::MatrixOverK;
pub use monomial::Monomial;
pub use poly::Polynomial;
