//! One-step maps for five splitting schemes and the trajectory driver.
//!
//! Every step map takes the state at `t^n` and returns the state at
//! `t^n + dt`. Nonlinear operators are frozen at states the step has already
//! computed, so each stage is a linear block-skew flow and the discrete mass
//! is preserved whenever the scheme composes only exponentials.

mod iterative;
mod splitting;
mod weighted;

use std::fmt;
use std::str::FromStr;

pub use iterative::step_iterative_stochastic;
pub use splitting::{step_lie, step_strang};
pub use weighted::{step_weighted1, step_weighted2};

use crate::discretization::HamiltonianState;
use crate::error::{dim_err, param_err, Error, Result};
use crate::problems::SplitSystem;
use crate::stochastic::WienerPath;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Sequential (A–B) splitting.
    Lie,
    /// Symmetric splitting with the noise factor in the middle.
    Strang,
    /// Predictor plus Picard sweeps with midpoint Stratonovich quadrature.
    IterativeStochastic,
    /// Relaxed iterative splitting with φ-function corrections.
    WeightedIter1,
    /// Coupled weighted sweeps solved exactly.
    WeightedIter2,
}

impl Scheme {
    pub const ALL: [Scheme; 5] =
        [Scheme::Lie, Scheme::Strang, Scheme::IterativeStochastic, Scheme::WeightedIter1, Scheme::WeightedIter2];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Lie => "lie",
            Scheme::Strang => "strang",
            Scheme::IterativeStochastic => "iterative",
            Scheme::WeightedIter1 => "weighted1",
            Scheme::WeightedIter2 => "weighted2",
        }
    }

    /// Whether the scheme can take a noise increment.
    pub fn supports_noise(self) -> bool {
        matches!(self, Scheme::Lie | Scheme::Strang | Scheme::IterativeStochastic)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ab" | "a-b" | "lie_trotter" => Ok(Scheme::Lie),
            _ => Scheme::ALL
                .into_iter()
                .find(|k| k.name() == s)
                .ok_or_else(|| Error::Parameter(format!("unknown scheme '{s}'"))),
        }
    }
}

/// A scheme with its tuning parameters.
///
/// `sweeps` is the number of corrector sweeps `m` (iterative schemes) or
/// sweep pairs (second weighted scheme); `omega` and `correction_order` are
/// used by the weighted schemes only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeSpec {
    pub scheme: Scheme,
    pub sweeps: usize,
    pub omega: f64,
    pub correction_order: usize,
}

impl SchemeSpec {
    pub fn lie() -> Self {
        Self { scheme: Scheme::Lie, sweeps: 1, omega: 0.0, correction_order: 1 }
    }

    pub fn strang() -> Self {
        Self { scheme: Scheme::Strang, ..Self::lie() }
    }

    pub fn iterative(m: usize) -> Self {
        Self { scheme: Scheme::IterativeStochastic, sweeps: m, ..Self::lie() }
    }

    pub fn weighted1(omega: f64, correction_order: usize) -> Self {
        Self { scheme: Scheme::WeightedIter1, sweeps: 1, omega, correction_order }
    }

    pub fn weighted2(omega: f64, m: usize) -> Self {
        Self { scheme: Scheme::WeightedIter2, sweeps: m, omega, correction_order: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweeps == 0 {
            return param_err("sweep count must be at least 1");
        }
        if !(1..=3).contains(&self.correction_order) {
            return param_err(format!("correction order must be 1, 2 or 3, got {}", self.correction_order));
        }
        if !(0.0..=1.0).contains(&self.omega) {
            return param_err(format!("omega must lie in [0, 1], got {}", self.omega));
        }
        Ok(())
    }
}

/// Advances one step with the scheme in `spec`.
///
/// `dw_sub` holds the Wiener increments of the step's sub-intervals; Lie and
/// Strang use their sum, the iterative scheme uses them individually and the
/// weighted schemes are deterministic.
pub fn step<S: SplitSystem + ?Sized>(
    sys: &S,
    spec: &SchemeSpec,
    state: &HamiltonianState,
    dt: f64,
    dw_sub: &[f64],
) -> Result<HamiltonianState> {
    let dw: f64 = dw_sub.iter().sum();
    match spec.scheme {
        Scheme::Lie => step_lie(sys, state, dt, dw),
        Scheme::Strang => step_strang(sys, state, dt, dw),
        Scheme::IterativeStochastic => step_iterative_stochastic(sys, state, dt, dw_sub, spec.sweeps),
        Scheme::WeightedIter1 => {
            require_deterministic(sys, spec)?;
            step_weighted1(sys, state, dt, spec.omega, spec.correction_order)
        }
        Scheme::WeightedIter2 => {
            require_deterministic(sys, spec)?;
            step_weighted2(sys, state, dt, spec.omega, spec.sweeps)
        }
    }
}

fn require_deterministic<S: SplitSystem + ?Sized>(sys: &S, spec: &SchemeSpec) -> Result<()> {
    if !sys.a3().is_zero() {
        return param_err(format!("{} is a deterministic scheme; the problem has noise", spec.scheme));
    }
    Ok(())
}

/// States recorded by [`integrate`].
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<HamiltonianState>,
    pub path: WienerPath,
    pub scheme: SchemeSpec,
    /// Every `stride`-th step is stored; the final state is always stored.
    pub stride: usize,
}

impl Trajectory {
    pub fn last(&self) -> &HamiltonianState {
        self.states.last().expect("trajectory holds at least the initial state")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory holds at least the initial time")
    }
}

/// Integrates from the system's initial condition, storing every state.
pub fn integrate<S: SplitSystem + ?Sized>(
    sys: &S,
    spec: &SchemeSpec,
    t_end: f64,
    n_steps: usize,
    path: &WienerPath,
) -> Result<Trajectory> {
    integrate_from(sys, spec, &sys.initial_condition(), t_end, n_steps, path, 1)
}

/// Integrates from `initial`, storing every `stride`-th state.
///
/// `path` must span `t_end` with a positive multiple of `n_steps` increments;
/// the multiple is the number of sub-intervals per step. A non-finite state
/// aborts with [`Error::NonFinite`].
pub fn integrate_from<S: SplitSystem + ?Sized>(
    sys: &S,
    spec: &SchemeSpec,
    initial: &HamiltonianState,
    t_end: f64,
    n_steps: usize,
    path: &WienerPath,
    stride: usize,
) -> Result<Trajectory> {
    spec.validate()?;
    if stride == 0 {
        return param_err("snapshot stride must be at least 1");
    }
    if initial.len() != sys.block_dim() {
        return dim_err(format!("initial state has {} points, system {}", initial.len(), sys.block_dim()));
    }
    let mut traj =
        Trajectory { times: vec![0.0], states: vec![initial.clone()], path: path.clone(), scheme: *spec, stride };
    if n_steps == 0 {
        return Ok(traj);
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return param_err(format!("final time must be positive, got {t_end}"));
    }
    if path.is_empty() || !path.len().is_multiple_of(n_steps) {
        return param_err(format!("path of {} increments cannot drive {n_steps} steps", path.len()));
    }
    if (path.duration() - t_end).abs() > 1e-9 * t_end.max(1.0) {
        return param_err(format!("path spans {} but the run ends at {t_end}", path.duration()));
    }
    let refinement = path.len() / n_steps;
    let dt = t_end / n_steps as f64;
    let mut y = initial.clone();
    for (n, sub) in path.increments().chunks(refinement).enumerate() {
        y = match step(sys, spec, &y, dt, sub) {
            Ok(next) => next,
            Err(Error::NonFinite { .. }) => return Err(Error::NonFinite { step: n + 1 }),
            Err(e) => return Err(e),
        };
        if (n + 1) % stride == 0 || n + 1 == n_steps {
            traj.times.push((n + 1) as f64 * dt);
            traj.states.push(y.clone());
        }
    }
    Ok(traj)
}

pub(crate) fn check_state<S: SplitSystem + ?Sized>(sys: &S, state: &HamiltonianState) -> Result<()> {
    if state.len() != sys.block_dim() {
        return dim_err(format!("state has {} points, system {}", state.len(), sys.block_dim()));
    }
    Ok(())
}

/// Packs a stacked vector, reporting overflow as [`Error::NonFinite`].
pub(crate) fn finish(v: Vec<f64>) -> Result<HamiltonianState> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite { step: 0 });
    }
    HamiltonianState::from_stacked(&v)
}

pub(crate) fn check_dt(dt: f64) -> Result<()> {
    if !dt.is_finite() {
        return param_err("time step must be finite");
    }
    Ok(())
}
