//! Exact computations in free-field vertex algebras: the Heisenberg algebra
//! `M(1)` and its Fock modules, the theta-twisted module, the rank-one
//! lattice algebra `V_L` with its half-lattice module, and the Weyl
//! (beta-gamma) algebra.
//!
//! All arithmetic is exact over `Q(sqrt 2)` and rational functions in a
//! formal momentum `x`. Every value is immutable; operations return fresh
//! canonical forms.

pub mod c1;
pub mod combinat;
pub mod engine;
pub mod error;
pub mod half;
pub mod lattice;
pub mod linalg;
pub mod oracle;
pub mod qchar;
pub mod scalar;
pub mod state;
pub mod twisted;
pub mod virasoro;
pub mod weyl;

pub use error::{Error, Result};
pub use half::Half;
pub use scalar::{Quad, Rational, Scalar};
pub use state::{Gen, Monomial, Part, Space, State};
