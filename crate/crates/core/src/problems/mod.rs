//! Split operator systems: the four model problems and small linear test systems.
//!
//! A system provides the block-skew generators of
//! `dy = (Ã₁ + Ã₂(y))·y dt + Ã₃·y ∘ dW`, where `Ã₁` is the lifted Laplacian,
//! `Ã₂` the lifted potential plus nonlinearity frozen at a given state and
//! `Ã₃` the lifted noise coupling. `ΔW` is never folded into `Ã₃`; the
//! integrators apply it.

mod linear;
mod nls;

pub use linear::LinearTestSystem;
pub use nls::{exact_soliton, Potential, ProblemKind, ProblemParams, SplitProblem};

use crate::discretization::HamiltonianState;
use crate::error::Result;
use crate::linalg::{BlockSkew, RealMatrix};

/// The interface every integrator consumes.
pub trait SplitSystem: Sync {
    /// Number of grid points `M`; states have `2M` real components.
    fn block_dim(&self) -> usize;

    /// Cell width used for the discrete mass.
    fn dx(&self) -> f64;

    fn a1(&self) -> &BlockSkew;

    /// `Ã₂` evaluated with its nonlinearity frozen at `frozen`.
    fn a2(&self, frozen: &HamiltonianState) -> Result<BlockSkew>;

    fn a3(&self) -> &BlockSkew;

    fn initial_condition(&self) -> HamiltonianState;

    /// Closed-form solution of the semi-discrete or continuous problem, when known.
    fn exact_solution(&self, _t: f64) -> Option<HamiltonianState> {
        None
    }

    /// Whether `Ã₂` depends on the frozen state.
    fn is_nonlinear(&self) -> bool;

    fn operators(&self, frozen: &HamiltonianState) -> Result<OperatorSet> {
        let a2 = self.a2(frozen)?;
        let a4 = self.a1().sum(&a2)?;
        Ok(OperatorSet { a1: self.a1().clone(), a2, a3: self.a3().clone(), a4 })
    }
}

/// The generators at one frozen state, with `a4 = a1 + a2`.
#[derive(Clone, Debug)]
pub struct OperatorSet {
    pub a1: BlockSkew,
    pub a2: BlockSkew,
    pub a3: BlockSkew,
    pub a4: BlockSkew,
}

impl OperatorSet {
    pub fn a1_tilde(&self) -> RealMatrix {
        self.a1.to_matrix()
    }

    pub fn a2_tilde(&self) -> RealMatrix {
        self.a2.to_matrix()
    }

    pub fn a3_tilde(&self) -> RealMatrix {
        self.a3.to_matrix()
    }

    pub fn a4_tilde(&self) -> RealMatrix {
        self.a4.to_matrix()
    }
}
