use crate::discretization::HamiltonianState;
use crate::error::Result;
use crate::problems::SplitSystem;

use super::{check_dt, check_state, finish};

/// Sequential splitting `exp(dt·Ã₁)·exp(dt·Ã₂(yⁿ))·exp(-½dt·Ã₃ᵀÃ₃ + Ã₃·dW)·yⁿ`.
///
/// `Ã₂` is frozen at the incoming state, which makes its flow the exact
/// flow of the nonlinear sub-problem (`|u|` is invariant under it).
pub fn step_lie<S: SplitSystem + ?Sized>(
    sys: &S,
    state: &HamiltonianState,
    dt: f64,
    dw: f64,
) -> Result<HamiltonianState> {
    check_state(sys, state)?;
    check_dt(dt)?;
    let mut y = state.to_stacked();
    if !sys.a3().is_zero() {
        y = sys.a3().stochastic_factor_apply(dt, dw, &y)?;
    }
    y = sys.a2(state)?.exp_apply(dt, &y)?;
    y = sys.a1().exp_apply(dt, &y)?;
    finish(y)
}

/// Symmetric splitting
/// `exp(½dt·Ã₁)·exp(½dt·Ã₂)·N(dt, dW)·exp(½dt·Ã₂)·exp(½dt·Ã₁)·yⁿ`, with the
/// noise factor `N` in the middle.
///
/// `Ã₂` is frozen at the state after the first `Ã₁` half-step, the state its
/// first half-flow acts on. Any finite `dt` is accepted, so `step(-dt)`
/// undoes `step(dt)` on linear problems.
pub fn step_strang<S: SplitSystem + ?Sized>(
    sys: &S,
    state: &HamiltonianState,
    dt: f64,
    dw: f64,
) -> Result<HamiltonianState> {
    check_state(sys, state)?;
    check_dt(dt)?;
    let half = 0.5 * dt;
    let mut y = sys.a1().exp_apply(half, &state.to_stacked())?;
    let a2 = sys.a2(&finish(y.clone())?)?;
    y = a2.exp_apply(half, &y)?;
    if !sys.a3().is_zero() {
        y = sys.a3().stochastic_factor_apply(dt, dw, &y)?;
    }
    y = a2.exp_apply(half, &y)?;
    y = sys.a1().exp_apply(half, &y)?;
    finish(y)
}
