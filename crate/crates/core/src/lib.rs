//! Fixed-point subspaces of compositions of linear reflectors.
//!
//! The crate builds projectors and reflectors onto subspaces of ℝⁿ, computes
//! the fixed-point subspace of any composition of them, provides the exact
//! rotation/reflection calculus of O(2), and ships executable checks for the
//! structural results about such compositions (cyclic shifts, reversal, sum
//! bounds, parity).
//!
//! Compositions are always written in application order: the list
//! `[R1, R2, R3]` is the map `x ↦ R3 R2 R1 x`.

pub mod error;
pub mod linalg;
pub mod operators;
pub mod plane;
pub mod plot;
pub mod scene;
pub mod subspace;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{Matrix, Tolerance, Vector};
pub use operators::{FixedSetReport, OperatorChain};
pub use plane::PlaneIsometry;
pub use subspace::Subspace;
pub use verify::{CheckReport, RandomSpec};
