//! Iterative operator-splitting integrators for semi-discretized nonlinear
//! Schrödinger equations, deterministic and driven by scalar Stratonovich noise.
//!
//! A complex field `u = η + iξ` on a periodic grid is lifted to the real
//! Hamiltonian state `(η, ξ)`. Every linear sub-flow is generated by a
//! block-skew matrix `[[0, S], [-S, 0]]` with symmetric `S`, so sub-flows are
//! orthogonal and symplectic. The crate provides
//!
//! * [`linalg`]: dense matrices, Padé exponential, φ-functions, exponential actions;
//! * [`stochastic`]: reproducible Wiener paths, coarsening, the midpoint
//!   Stratonovich exponential integral;
//! * [`discretization`]: grids, the periodic Laplacian, diagonal operators, the real lift;
//! * [`problems`]: the four model problems and small linear test systems;
//! * [`integrators`]: Lie, Strang, iterative stochastic and two weighted iterative schemes;
//! * [`diagnostics`]: error norms, mass, flow Jacobians, symplectic defect, order fits;
//! * [`experiment`]: the config-driven runner behind the `nls-splitting` binary.
//!
//! ```
//! use nls_splitting::prelude::*;
//!
//! let grid = SpatialGrid::new(0.0, 50.0, 200).unwrap();
//! let problem = SplitProblem::with_defaults(ProblemKind::DeterministicNLS, grid).unwrap();
//! let path = WienerPath::zeros(10, 0.01).unwrap();
//! let traj = integrate(&problem, &SchemeSpec::strang(), 0.1, 10, &path).unwrap();
//! let m0 = mass(&traj.states[0], problem.grid().dx());
//! let m1 = mass(traj.last(), problem.grid().dx());
//! assert!((m0 - m1).abs() < 1e-12 * m0);
//! ```

pub mod diagnostics;
pub mod discretization;
pub mod error;
pub mod experiment;
pub mod integrators;
pub mod linalg;
pub mod problems;
pub mod stochastic;

pub use error::{Error, Result};

/// Commonly used items in one import.
pub mod prelude {
    pub use crate::diagnostics::{
        contraction_constant, convergence_order, flow_jacobian, l2_error, mass, mean_abs_error, mean_error, step_bound,
        symplectic_defect, ErrorReport, SymplecticBudget,
    };
    pub use crate::discretization::{
        lift, modulus, noise_diagonal, periodic_laplacian, potential_diagonal, HamiltonianState, SpatialGrid,
    };
    pub use crate::error::{Error, Result};
    pub use crate::integrators::{
        integrate, step, step_iterative_stochastic, step_lie, step_strang, step_weighted1, step_weighted2, Scheme,
        SchemeSpec, Trajectory,
    };
    pub use crate::linalg::{
        block_skew, commutator, expm, expm_action, phi, phi_action, symplectic_j, BlockSkew, LinearOperator, RealMatrix,
    };
    pub use crate::problems::{
        exact_soliton, LinearTestSystem, OperatorSet, Potential, ProblemKind, ProblemParams, SplitProblem, SplitSystem,
    };
    pub use crate::stochastic::{coarsen, sample_path, stratonovich_expm_integral, WienerPath};
}
