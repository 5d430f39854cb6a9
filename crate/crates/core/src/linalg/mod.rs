//! Dense real linear algebra: matrices, the matrix exponential, φ-functions,
//! exponential actions and the block-skew lift.

mod action;
mod expm;
mod matrix;
mod skew;

pub use action::{expm_action, phi_action, LinearOperator};
pub use expm::{block_skew, commutator, expm, phi, symplectic_j, MAX_PHI_ORDER};
pub use matrix::RealMatrix;
pub use skew::{BlockSkew, SkewBlock};
