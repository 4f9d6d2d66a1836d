//! Exact computations with shift-of-argument subalgebras of classical Lie
//! algebras: Lie–Poisson brackets, PBW normal forms, symmetrised matrix
//! invariants, Jordan-diagram combinatorics and the checks built on them.

pub mod diagram;
pub mod error;
pub mod invariants;
pub mod jordan;
pub mod lie;
pub mod limits;
pub mod linalg;
pub mod pbw;
pub mod poisson;
pub mod poly;
pub mod quantise;
pub mod ring;
pub mod scalar;
pub mod verifier;

pub use error::{Error, Result};
pub use lie::{Family, Functional, JordanData, LieAlgebra, Subalgebra, Subspace};
pub use poly::{CPoly, Monomial, VariableContext};
pub use scalar::Scalar;
