use crate::discretization::HamiltonianState;
use crate::error::{param_err, Result};
use crate::linalg::{BlockSkew, LinearOperator};
use crate::problems::SplitSystem;

use super::{check_dt, check_state, finish};

/// Iterative stochastic splitting with `m` corrector sweeps.
///
/// The step interval is cut into `K = dw_sub.len()` sub-intervals of length
/// `τ = dt/K`. The predictor is the drift flow `y₀(t) = exp(t·Ã₄)·yⁿ` with
/// `Ã₄ = Ã₁ + Ã₂(yⁿ)`. Sweep `i` then solves the variation-of-constants form
/// with the noise term lagged at the previous iterate, using the midpoint
/// Stratonovich rule on every sub-interval:
///
/// ```text
/// yᵢ(t_{k+1}) = exp(τ·Ã₄)·yᵢ(t_k)
///             + exp(½τ·Ã₄)·Ã₃·½(yᵢ₋₁(t_k) + yᵢ₋₁(t_{k+1}))·ΔW_k
/// ```
///
/// The first sweep reproduces `X₁·(I + Ã₃ΔW + [Ã₃, C₁])` to leading order,
/// where `C₁` is the midpoint exponential integral over the sub-path; each
/// further sweep adds one more order of `ΔW`. Before every sweep `Ã₂` is
/// refrozen at the midpoint of `yⁿ` and the newest end iterate. Without noise
/// the sweeps reduce to `exp(dt·Ã₄)·yⁿ` with that refreezing.
pub fn step_iterative_stochastic<S: SplitSystem + ?Sized>(
    sys: &S,
    state: &HamiltonianState,
    dt: f64,
    dw_sub: &[f64],
    m: usize,
) -> Result<HamiltonianState> {
    check_state(sys, state)?;
    check_dt(dt)?;
    if m == 0 {
        return param_err("the iterative scheme needs at least one sweep");
    }
    if dw_sub.is_empty() {
        return param_err("the iterative scheme needs at least one sub-increment");
    }
    let y0 = state.to_stacked();
    let a4_in = sys.a1().sum(&sys.a2(state)?)?;
    let refreeze = |end: &[f64]| -> Result<BlockSkew> {
        let mid: Vec<f64> = y0.iter().zip(end).map(|(a, b)| 0.5 * (a + b)).collect();
        sys.a1().sum(&sys.a2(&finish(mid)?)?)
    };

    let noisy = !sys.a3().is_zero() && dw_sub.iter().any(|w| *w != 0.0);
    if !noisy {
        let mut x = a4_in.exp_apply(dt, &y0)?;
        if sys.is_nonlinear() {
            for _ in 0..m {
                x = refreeze(&x)?.exp_apply(dt, &y0)?;
            }
        }
        return finish(x);
    }

    let k = dw_sub.len();
    let tau = dt / k as f64;
    let mut nodes = Vec::with_capacity(k + 1);
    nodes.push(y0.clone());
    for j in 0..k {
        let next = a4_in.exp_apply(tau, &nodes[j])?;
        nodes.push(next);
    }
    let b = sys.a3();
    let n = y0.len();
    let mut kick = vec![0.0; n];
    for _ in 0..m {
        let a4 = if sys.is_nonlinear() { refreeze(&nodes[k])? } else { a4_in.clone() };
        let mut next = Vec::with_capacity(k + 1);
        next.push(y0.clone());
        for j in 0..k {
            let mid: Vec<f64> = nodes[j].iter().zip(&nodes[j + 1]).map(|(a, b)| 0.5 * (a + b)).collect();
            b.apply(&mid, &mut kick);
            kick.iter_mut().for_each(|v| *v *= dw_sub[j]);
            let drift = a4.exp_apply(tau, &next[j])?;
            let noise = a4.exp_apply(0.5 * tau, &kick)?;
            next.push(drift.iter().zip(&noise).map(|(a, b)| a + b).collect());
        }
        nodes = next;
    }
    finish(nodes.pop().expect("k >= 1 nodes"))
}
