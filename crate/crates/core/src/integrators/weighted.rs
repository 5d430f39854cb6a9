use crate::discretization::HamiltonianState;
use crate::error::{param_err, Result};
use crate::linalg::{expm_action, phi_action, BlockSkew, LinearOperator};
use crate::problems::SplitSystem;

use super::{check_dt, check_state, finish};

fn check_omega(omega: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&omega) {
        return param_err(format!("omega must lie in [0, 1], got {omega}"));
    }
    Ok(())
}

fn apply(g: &BlockSkew, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    g.apply(v, &mut out);
    out
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += a * xi);
}

/// Relaxed iterative splitting with commutator–φ corrections.
///
/// With `Â₁ = Ã₁ + (1-ω)·Ã₂`, `Â₂ = ω·Ã₂` (frozen at `yⁿ`) and `E = exp(dt·Â₁)`:
///
/// ```text
/// order 1: c₁ = E·yⁿ
/// order 2: c₂ = E·(I + dt·Â₂ + [Â₂, φ₁(dt·Â₁)])·yⁿ
/// order 3: c₃ = c₂ + E·(½dt²·Â₂² + [Â₂, E]·[Â₂, φ₂(dt·Â₁)] + [Â₂, Â₁E]·[Â₂, φ₃(dt·Â₁)])·yⁿ
/// ```
///
/// Against `exp(dt·(Ã₁ + Ã₂))` the one-step error of order `k` is `O(dt^k)`
/// for `ω > 0`: `c₁` leaves out `Â₂` altogether and each correction recovers
/// one more power of `dt`. The corrections are additive, so orders 2 and 3
/// preserve mass only to that accuracy.
pub fn step_weighted1<S: SplitSystem + ?Sized>(
    sys: &S,
    state: &HamiltonianState,
    dt: f64,
    omega: f64,
    correction_order: usize,
) -> Result<HamiltonianState> {
    check_state(sys, state)?;
    check_dt(dt)?;
    check_omega(omega)?;
    if !(1..=3).contains(&correction_order) {
        return param_err(format!("correction order must be 1, 2 or 3, got {correction_order}"));
    }
    let a2 = sys.a2(state)?;
    let hat1 = sys.a1().sum(&a2.scaled(1.0 - omega))?;
    let hat2 = a2.scaled(omega);
    let c0 = state.to_stacked();
    let mut out = hat1.exp_apply(dt, &c0)?;
    if correction_order == 1 || hat2.is_zero() {
        return finish(out);
    }
    let e = |v: &[f64]| hat1.exp_apply(dt, v);
    let phi = |k: usize, v: &[f64]| phi_action(&hat1, dt, k, v);
    // [Â₂, φ_k]·c₀
    let bracket_phi = |k: usize| -> Result<Vec<f64>> {
        let mut w = apply(&hat2, &phi(k, &c0)?);
        axpy(&mut w, -1.0, &phi(k, &apply(&hat2, &c0))?);
        Ok(w)
    };

    let b_c0 = apply(&hat2, &c0);
    let mut corr = bracket_phi(1)?;
    axpy(&mut corr, dt, &b_c0);
    if correction_order == 3 {
        axpy(&mut corr, 0.5 * dt * dt, &apply(&hat2, &b_c0));
        let w = bracket_phi(2)?;
        axpy(&mut corr, 1.0, &apply(&hat2, &e(&w)?));
        axpy(&mut corr, -1.0, &e(&apply(&hat2, &w))?);
        let z = bracket_phi(3)?;
        axpy(&mut corr, 1.0, &apply(&hat2, &apply(&hat1, &e(&z)?)));
        axpy(&mut corr, -1.0, &apply(&hat1, &e(&apply(&hat2, &z))?));
    }
    axpy(&mut out, 1.0, &e(&corr)?);
    finish(out)
}

/// Weighted iterative splitting with `m` sweep pairs.
///
/// Stages `u_0, …, u_{2m+1}` on `[tⁿ, tⁿ + dt]` satisfy
///
/// ```text
/// even k: u_k' = Ã₁·u_k + ω·Ã₂·u_{k-1},   u_k(tⁿ) = yⁿ   (u_{-1} = 0)
/// odd k:  u_k' = ω·Ã₁·u_{k-1} + Ã₂·u_k,   u_k(tⁿ) = ω·yⁿ + (1-ω)·u_{k-1}(tⁿ + dt)
/// ```
///
/// and the step returns `u_{2m+1}(tⁿ + dt)`. The coupled stages form a block
/// lower-triangular linear system that is integrated exactly by one
/// exponential action per stage, so the lagged terms are the true previous
/// iterates and not constants. `Ã₂` is frozen at `yⁿ`.
pub fn step_weighted2<S: SplitSystem + ?Sized>(
    sys: &S,
    state: &HamiltonianState,
    dt: f64,
    omega: f64,
    m: usize,
) -> Result<HamiltonianState> {
    check_state(sys, state)?;
    check_dt(dt)?;
    check_omega(omega)?;
    if m == 0 {
        return param_err("the weighted scheme needs at least one sweep pair");
    }
    let a2 = sys.a2(state)?;
    let y0 = state.to_stacked();
    let n = y0.len();
    let last = 2 * m + 1;
    let mut initial: Vec<Vec<f64>> = Vec::with_capacity(last + 1);
    let mut end = Vec::new();
    for k in 0..=last {
        if k % 2 == 0 {
            initial.push(y0.clone());
        } else {
            let prev_end = &end[(k - 1) * n..k * n];
            initial.push(y0.iter().zip(prev_end).map(|(a, b)| omega * a + (1.0 - omega) * b).collect());
        }
        // Odd stages only need the end value of the even stage before them.
        if k % 2 == 0 || k == last {
            let chain = Chain { a1: sys.a1(), a2: &a2, omega, stages: k + 1 };
            end = expm_action(&chain, dt, &initial.concat())?;
        }
    }
    finish(end[last * n..].to_vec())
}

struct Chain<'a> {
    a1: &'a BlockSkew,
    a2: &'a BlockSkew,
    omega: f64,
    stages: usize,
}

impl LinearOperator for Chain<'_> {
    fn dim(&self) -> usize {
        self.stages * self.a1.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.a1.dim();
        let mut tmp = vec![0.0; n];
        for k in 0..self.stages {
            let xk = &x[k * n..(k + 1) * n];
            // Even stages run Ã₁ on themselves and lag Ã₂; odd stages the reverse.
            let (own, lagged) = if k % 2 == 0 { (self.a1, self.a2) } else { (self.a2, self.a1) };
            let yk = &mut y[k * n..(k + 1) * n];
            own.apply(xk, yk);
            if k > 0 {
                lagged.apply(&x[(k - 1) * n..k * n], &mut tmp);
                axpy(yk, self.omega, &tmp);
            }
        }
    }

    fn norm_one(&self) -> f64 {
        (1.0 + self.omega) * self.a1.norm_one().max(self.a2.norm_one())
    }
}
