//! Error norms, mass, flow Jacobians, symplectic defect, order fits and the
//! step-size bound for almost-symplectic iterations.

use crate::discretization::{modulus, HamiltonianState};
use crate::error::{dim_err, param_err, Result};
use crate::integrators::SchemeSpec;
use crate::linalg::{symplectic_j, RealMatrix};
use crate::problems::SplitSystem;

fn check_same_len(a: &HamiltonianState, b: &HamiltonianState) -> Result<()> {
    if a.len() != b.len() {
        return dim_err(format!("states of {} and {} points", a.len(), b.len()));
    }
    Ok(())
}

/// Pointwise `||u_ref|_i − |u|_i|`.
pub fn per_point_errors(reference: &HamiltonianState, approx: &HamiltonianState) -> Result<Vec<f64>> {
    check_same_len(reference, approx)?;
    Ok(modulus(reference).into_iter().zip(modulus(approx)).map(|(a, b)| (a - b).abs()).collect())
}

/// `√(dx·Σ_i (|u_ref|_i − |u|_i)²)`, the discrete L² distance of the moduli.
pub fn l2_error(reference: &HamiltonianState, approx: &HamiltonianState, dx: f64) -> Result<f64> {
    let e = per_point_errors(reference, approx)?;
    Ok((dx * pairwise_sum(&e.iter().map(|v| v * v).collect::<Vec<_>>())).sqrt())
}

/// `(1/M)·Σ_i ||u_ref|_i − |u|_i|`.
pub fn mean_abs_error(reference: &HamiltonianState, approx: &HamiltonianState) -> Result<f64> {
    let e = per_point_errors(reference, approx)?;
    if e.is_empty() {
        return Ok(0.0);
    }
    Ok(pairwise_sum(&e) / e.len() as f64)
}

/// Errors of one run against its reference at a fixed time.
#[derive(Clone, Debug)]
pub struct ErrorReport {
    pub l2_error: f64,
    pub mean_abs_error: f64,
    pub per_point_errors: Vec<f64>,
    pub dt: f64,
    pub dx: f64,
    pub scheme: SchemeSpec,
}

impl ErrorReport {
    pub fn new(
        reference: &HamiltonianState,
        approx: &HamiltonianState,
        dt: f64,
        dx: f64,
        scheme: SchemeSpec,
    ) -> Result<Self> {
        let per_point_errors = per_point_errors(reference, approx)?;
        Ok(Self {
            l2_error: l2_error(reference, approx, dx)?,
            mean_abs_error: mean_abs_error(reference, approx)?,
            per_point_errors,
            dt,
            dx,
            scheme,
        })
    }
}

/// Pairwise (cascade) summation; its result does not depend on how an
/// ensemble was scheduled, only on the order of the slice.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let (a, b) = values.split_at(values.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Arithmetic mean over Monte Carlo paths.
pub fn mean_error(per_path_errors: &[f64]) -> Result<f64> {
    if per_path_errors.is_empty() {
        return param_err("mean of an empty error sample");
    }
    Ok(pairwise_sum(per_path_errors) / per_path_errors.len() as f64)
}

/// Median of a non-empty sample (mean of the middle pair for even sizes).
pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return param_err("median of an empty sample");
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Ok(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

/// Discrete mass `dx·Σ_i (η_i² + ξ_i²)`.
pub fn mass(state: &HamiltonianState, dx: f64) -> f64 {
    dx * pairwise_sum(&state.density())
}

/// Central-difference step `ε^{1/3}·(1 + ‖y‖∞)`.
pub fn default_fd_step(state: &HamiltonianState) -> f64 {
    let scale = state.to_stacked().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    f64::EPSILON.cbrt() * (1.0 + scale)
}

/// Central-difference Jacobian of a one-step map at `state0`.
///
/// Column `j` is `(Φ(y₀ + h·e_j) − Φ(y₀ − h·e_j)) / 2h`. The map must be
/// deterministic: capture the same `dt` and Wiener increments for every call.
pub fn flow_jacobian<F>(step_map: F, state0: &HamiltonianState, h: f64) -> Result<RealMatrix>
where
    F: Fn(&HamiltonianState) -> Result<HamiltonianState>,
{
    if !(h > 0.0 && h.is_finite()) {
        return param_err(format!("finite-difference step must be positive, got {h}"));
    }
    let y0 = state0.to_stacked();
    let n = y0.len();
    let mut jac = RealMatrix::zeros(n, n);
    let mut y = y0.clone();
    for j in 0..n {
        y[j] = y0[j] + h;
        let plus = step_map(&HamiltonianState::from_stacked(&y)?)?.to_stacked();
        y[j] = y0[j] - h;
        let minus = step_map(&HamiltonianState::from_stacked(&y)?)?.to_stacked();
        y[j] = y0[j];
        if plus.len() != n || minus.len() != n {
            return dim_err("step map changed the state dimension");
        }
        for i in 0..n {
            jac[(i, j)] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Matrix norm used for the symplectic defect.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DefectNorm {
    #[default]
    Frobenius,
    Spectral,
}

/// `‖JacᵀJ·Jac − J‖_F`.
pub fn symplectic_defect(jac: &RealMatrix) -> Result<f64> {
    symplectic_defect_with(jac, DefectNorm::Frobenius)
}

pub fn symplectic_defect_with(jac: &RealMatrix, norm: DefectNorm) -> Result<f64> {
    if !jac.is_square() || !jac.rows().is_multiple_of(2) || jac.rows() == 0 {
        return dim_err(format!("symplectic defect of a {}x{} matrix", jac.rows(), jac.cols()));
    }
    let j = symplectic_j(jac.rows() / 2)?;
    let d = jac.transpose().matmul(&j.matmul(jac)?)?.sub(&j)?;
    Ok(match norm {
        DefectNorm::Frobenius => d.norm_frobenius(),
        DefectNorm::Spectral => d.spectral_norm(1e-10),
    })
}

/// Least-squares fit `log y = log_constant + order·log x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawFit {
    pub order: f64,
    pub log_constant: f64,
}

impl PowerLawFit {
    pub fn constant(&self) -> f64 {
        self.log_constant.exp()
    }
}

pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<PowerLawFit> {
    if xs.len() != ys.len() {
        return dim_err(format!("{} abscissae and {} values", xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return param_err("a power-law fit needs at least two points");
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0 && v.is_finite())) {
        return param_err("power-law fit needs positive finite data");
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return param_err("power-law fit needs distinct abscissae");
    }
    let order = sxy / sxx;
    Ok(PowerLawFit { order, log_constant: my - order * mx })
}

/// Least-squares slope of `log(error)` against `log(dt)`.
pub fn convergence_order(errors: &[f64], dts: &[f64]) -> Result<f64> {
    if errors.len() != dts.len() {
        return dim_err(format!("{} errors for {} step sizes", errors.len(), dts.len()));
    }
    if dts.len() < 3 {
        return param_err("an order fit needs at least three levels");
    }
    if dts.windows(2).any(|w| w[1] >= w[0]) {
        return param_err("step sizes must be strictly decreasing");
    }
    if errors.iter().any(|e| e.is_nan() || *e <= 0.0) {
        return param_err("errors must be positive for a log-log fit");
    }
    Ok(fit_power_law(dts, errors)?.order)
}

/// Largest step `τ = (δ/K₁)²` with `K₁ = ‖B‖^{m+1}` for which `m+1` sweeps
/// keep the symplectic defect below `C·δ^{m+1}`.
pub fn step_bound(delta: f64, norm_b: f64, m: usize) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return param_err(format!("delta must lie in (0, 1), got {delta}"));
    }
    if !(norm_b > 0.0 && norm_b.is_finite()) {
        return param_err(format!("noise norm must be positive, got {norm_b}"));
    }
    let q = delta / norm_b.powi(m as i32 + 1);
    Ok(q * q)
}

/// The defect budget of one step size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymplecticBudget {
    pub delta: f64,
    pub m: usize,
    pub k1: f64,
    pub tau_bound: f64,
    pub measured_defect: f64,
    /// Fitted constant of `defect ≈ C·δ^{m+1}`; reported, never asserted.
    pub c_fit: f64,
}

impl SymplecticBudget {
    pub fn new(delta: f64, norm_b: f64, m: usize, measured_defect: f64, c_fit: f64) -> Result<Self> {
        if measured_defect.is_nan() || measured_defect < 0.0 {
            return param_err("measured defect must be non-negative");
        }
        let tau_bound = step_bound(delta, norm_b, m)?;
        Ok(Self { delta, m, k1: norm_b.powi(m as i32 + 1), tau_bound, measured_defect, c_fit })
    }
}

/// `ρ = dt·‖Ã₄‖₂ + |dW|·‖Ã₃‖₂` with operators frozen at `state`; the
/// fixed-point sweeps contract when `ρ < 1`.
pub fn contraction_constant<S: SplitSystem + ?Sized>(
    sys: &S,
    state: &HamiltonianState,
    dt: f64,
    dw: f64,
) -> Result<f64> {
    let ops = sys.operators(state)?;
    Ok(dt.abs() * ops.a4.spectral_norm(1e-12) + dw.abs() * ops.a3.spectral_norm(1e-12))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_matches_naive_on_small_input() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 5050.0);
    }

    #[test]
    fn median_odd_and_even() {
        assert_eq!(median(&[3.0, 1.0, 2.0]).unwrap(), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]).unwrap(), 2.5);
        assert!(median(&[]).is_err());
    }

    #[test]
    fn rejects_bad_fits() {
        assert!(convergence_order(&[1.0, 2.0], &[1.0, 0.5]).is_err());
        assert!(convergence_order(&[1.0, 2.0, 3.0], &[0.1, 0.2, 0.3]).is_err());
        assert!(convergence_order(&[1.0, 0.0, 3.0], &[0.3, 0.2, 0.1]).is_err());
        assert!(fit_power_law(&[1.0, 1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn step_bound_domain() {
        assert!(step_bound(0.0, 1.0, 1).is_err());
        assert!(step_bound(1.0, 1.0, 1).is_err());
        assert!(step_bound(0.5, 0.0, 1).is_err());
        assert_eq!(step_bound(0.5, 1.0, 3).unwrap(), 0.25);
    }

    #[test]
    fn defect_needs_even_square() {
        assert!(symplectic_defect(&RealMatrix::identity(3)).is_err());
        assert!(symplectic_defect(&RealMatrix::zeros(2, 4)).is_err());
        assert_eq!(symplectic_defect(&RealMatrix::identity(4)).unwrap(), 0.0);
    }

    #[test]
    fn jacobian_rejects_bad_step() {
        let y = HamiltonianState::zeros(2);
        assert!(flow_jacobian(|s| Ok(s.clone()), &y, 0.0).is_err());
        assert!(flow_jacobian(|s| Ok(s.clone()), &y, -1.0).is_err());
    }
}
