//! Exact construction and certification kernel.

pub mod certify;
pub mod constructions;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod registry;
pub mod sampling;
pub mod scalar;
pub mod sheared;
pub mod wirtinger;

pub use poly::{Monomial, PolyError, SparsePoly, DEGREE_CAP};
pub use registry::{ComplexCoord, VarRegistry, VarRole, MAX_VARS};
pub use scalar::{GaussRational, Rational};
