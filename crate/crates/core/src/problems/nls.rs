use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::discretization::{periodic_laplacian, potential_values, HamiltonianState, SpatialGrid};
use crate::error::{param_err, Error, Result};
use crate::linalg::BlockSkew;

use super::SplitSystem;

/// The four model problems. Each fixes its sign conventions:
///
/// | kind | `S = ` | noise |
/// |---|---|---|
/// | `LinearizedStochastic` | `(λ/2)·Lap + V + ψ·|u|^{2σ}`, `λ = -1`, `V ≡ 1` | `ε = 1` |
/// | `DeterministicPerturbed` | `-½·Lap + 1/(1+sin²x) + λ·|u|^{2σ}`, `λ = 30` | none |
/// | `DeterministicNLS` | `(λ/2)·Lap + ψ·|u|^{2σ}`, `λ = 2`, `ψ = 2` | none |
/// | `StochasticNLS` | as `DeterministicNLS` | `ε = 0.1` |
///
/// where `Lap` is the periodic second difference and the complex equation is
/// `i·u_t = S(u)·u + ε·u∘Ẇ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    LinearizedStochastic,
    DeterministicPerturbed,
    DeterministicNLS,
    StochasticNLS,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 4] = [
        ProblemKind::LinearizedStochastic,
        ProblemKind::DeterministicPerturbed,
        ProblemKind::DeterministicNLS,
        ProblemKind::StochasticNLS,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::LinearizedStochastic => "linearized_stochastic",
            ProblemKind::DeterministicPerturbed => "deterministic_perturbed",
            ProblemKind::DeterministicNLS => "deterministic_nls",
            ProblemKind::StochasticNLS => "stochastic_nls",
        }
    }

    pub fn is_deterministic(self) -> bool {
        matches!(self, ProblemKind::DeterministicPerturbed | ProblemKind::DeterministicNLS)
    }

    pub fn uses_soliton(self) -> bool {
        matches!(self, ProblemKind::DeterministicNLS | ProblemKind::StochasticNLS)
    }

    /// Default interval: `[0, 50]` for the soliton, `[0, 1]` otherwise.
    pub fn default_interval(self) -> (f64, f64) {
        if self.uses_soliton() {
            (0.0, 50.0)
        } else {
            (0.0, 1.0)
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown problem kind '{s}'")))
    }
}

/// External potential `V(x)`.
#[derive(Clone)]
pub enum Potential {
    Zero,
    Constant(f64),
    /// `1 / (1 + sin²x)`.
    PerturbedLattice,
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Potential {
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Potential::Custom(Arc::new(f))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Potential::Zero => 0.0,
            Potential::Constant(c) => *c,
            Potential::PerturbedLattice => 1.0 / (1.0 + x.sin().powi(2)),
            Potential::Custom(f) => f(x),
        }
    }
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Zero => write!(f, "Zero"),
            Potential::Constant(c) => write!(f, "Constant({c})"),
            Potential::PerturbedLattice => write!(f, "PerturbedLattice"),
            Potential::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Physical parameters; start from [`ProblemParams::defaults`] and override.
#[derive(Clone, Debug)]
pub struct ProblemParams {
    pub sigma: f64,
    pub eps: f64,
    pub lambda: f64,
    pub psi: f64,
    pub omega: f64,
    pub potential: Potential,
}

impl ProblemParams {
    pub fn defaults(kind: ProblemKind) -> Self {
        let (eps, lambda, potential) = match kind {
            ProblemKind::LinearizedStochastic => (1.0, -1.0, Potential::Constant(1.0)),
            ProblemKind::DeterministicPerturbed => (0.0, 30.0, Potential::PerturbedLattice),
            ProblemKind::DeterministicNLS => (0.0, 2.0, Potential::Zero),
            ProblemKind::StochasticNLS => (0.1, 2.0, Potential::Zero),
        };
        Self { sigma: 1.0, eps, lambda, psi: 2.0, omega: Self::default_omega(lambda), potential }
    }

    /// Relaxation weight `ω = 1/|λ|`, clipped to `[0, 1]`.
    pub fn default_omega(lambda: f64) -> f64 {
        if lambda == 0.0 {
            1.0
        } else {
            (1.0 / lambda.abs()).min(1.0)
        }
    }
}

/// One of the model problems on a concrete grid, with `Ã₁` and `Ã₃` prebuilt.
#[derive(Clone, Debug)]
pub struct SplitProblem {
    grid: SpatialGrid,
    kind: ProblemKind,
    params: ProblemParams,
    a1: BlockSkew,
    a3: BlockSkew,
}

impl SplitProblem {
    pub fn new(kind: ProblemKind, grid: SpatialGrid, params: ProblemParams) -> Result<Self> {
        let p = &params;
        for (name, v) in
            [("sigma", p.sigma), ("epsilon", p.eps), ("lambda", p.lambda), ("psi", p.psi), ("omega", p.omega)]
        {
            if !v.is_finite() {
                return param_err(format!("{name} must be finite"));
            }
        }
        if p.sigma <= 0.0 {
            return param_err(format!("sigma must be positive, got {}", p.sigma));
        }
        if p.eps < 0.0 {
            return param_err(format!("epsilon must be non-negative, got {}", p.eps));
        }
        if !(0.0..=1.0).contains(&p.omega) {
            return param_err(format!("omega must lie in [0, 1], got {}", p.omega));
        }
        if kind.is_deterministic() && p.eps != 0.0 {
            return param_err(format!("{kind} is deterministic; epsilon must be 0"));
        }
        let lap_coeff = match kind {
            ProblemKind::DeterministicPerturbed => -0.5,
            _ => 0.5 * p.lambda,
        };
        // Stored as its three periodic bands; entries equal `periodic_laplacian`.
        let lap = periodic_laplacian(&grid, lap_coeff);
        let m = grid.len();
        let band = |off: usize| (0..m).map(|i| lap[(i, (i + off) % m)]).collect::<Vec<f64>>();
        let a1 = BlockSkew::cyclic(band(m - 1), band(0), band(1))?;
        let a3 = BlockSkew::diagonal(vec![p.eps; grid.len()])?;
        Ok(Self { grid, kind, params, a1, a3 })
    }

    pub fn with_defaults(kind: ProblemKind, grid: SpatialGrid) -> Result<Self> {
        Self::new(kind, grid, ProblemParams::defaults(kind))
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn params(&self) -> &ProblemParams {
        &self.params
    }

    pub fn sigma(&self) -> f64 {
        self.params.sigma
    }

    pub fn eps(&self) -> f64 {
        self.params.eps
    }

    pub fn lambda(&self) -> f64 {
        self.params.lambda
    }

    pub fn psi(&self) -> f64 {
        self.params.psi
    }

    pub fn omega(&self) -> f64 {
        self.params.omega
    }

    pub fn potential(&self) -> &Potential {
        &self.params.potential
    }

    /// Coefficient multiplying `|u|^{2σ}` in `S`.
    pub fn nonlinear_coeff(&self) -> f64 {
        match self.kind {
            ProblemKind::DeterministicPerturbed => self.params.lambda,
            _ => self.params.psi,
        }
    }

    /// All four generators frozen at `frozen`.
    pub fn build_operators(&self, frozen: &HamiltonianState) -> Result<super::OperatorSet> {
        self.operators(frozen)
    }

    fn soliton_state(&self, t: f64) -> HamiltonianState {
        let (eta, xi) = self.grid.points().into_iter().map(|x| exact_soliton(x, t)).unzip();
        HamiltonianState::new(eta, xi).expect("soliton is finite")
    }

    fn has_exact_soliton(&self) -> bool {
        let p = &self.params;
        self.kind == ProblemKind::DeterministicNLS
            && p.sigma == 1.0
            && p.psi == 2.0
            && p.lambda == 2.0
            && matches!(p.potential, Potential::Zero)
    }
}

impl SplitSystem for SplitProblem {
    fn block_dim(&self) -> usize {
        self.grid.len()
    }

    fn dx(&self) -> f64 {
        self.grid.dx()
    }

    fn a1(&self) -> &BlockSkew {
        &self.a1
    }

    fn a2(&self, frozen: &HamiltonianState) -> Result<BlockSkew> {
        let pot = &self.params.potential;
        let values = potential_values(&self.grid, &|x| pot.eval(x), self.nonlinear_coeff(), self.params.sigma, frozen)?;
        BlockSkew::diagonal(values)
    }

    fn a3(&self) -> &BlockSkew {
        &self.a3
    }

    fn initial_condition(&self) -> HamiltonianState {
        if self.kind.uses_soliton() {
            self.soliton_state(0.0)
        } else {
            let eta = self.grid.points().into_iter().map(|x| (2.0 * x).sin().exp()).collect();
            HamiltonianState::new(eta, vec![0.0; self.grid.len()]).expect("finite initial data")
        }
    }

    /// The travelling soliton, for the default cubic focusing equation only.
    fn exact_solution(&self, t: f64) -> Option<HamiltonianState> {
        self.has_exact_soliton().then(|| self.soliton_state(t))
    }

    fn is_nonlinear(&self) -> bool {
        self.nonlinear_coeff() != 0.0
    }
}

/// `u = (1/√2)·sech((x − t/10 − 25)/√2)·exp(−i(x/20 + 199t/400))`, returned as
/// `(Re u, Im u)`. It solves `i·u_t = u_xx + 2|u|²u` on the real line.
pub fn exact_soliton(x: f64, t: f64) -> (f64, f64) {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let amp = a / (a * (x - t / 10.0 - 25.0)).cosh();
    let (s, c) = (-(x / 20.0 + 199.0 * t / 400.0)).sin_cos();
    (amp * c, amp * s)
}
