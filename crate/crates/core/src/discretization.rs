//! Periodic grids, finite-difference operators and the real lift `u = η + iξ`.

use crate::error::{dim_err, param_err, Result};
use crate::linalg::RealMatrix;

/// Uniform periodic grid `x_i = x_left + i·dx`, `i = 0..M`, with `x_M ≡ x_0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpatialGrid {
    x_left: f64,
    x_right: f64,
    m: usize,
    dx: f64,
}

impl SpatialGrid {
    pub fn new(x_left: f64, x_right: f64, m: usize) -> Result<Self> {
        if m < 3 {
            return param_err(format!("grid needs at least 3 points, got {m}"));
        }
        if !(x_left.is_finite() && x_right.is_finite() && x_right > x_left) {
            return param_err(format!("invalid grid interval [{x_left}, {x_right}]"));
        }
        Ok(Self { x_left, x_right, m, dx: (x_right - x_left) / m as f64 })
    }

    pub fn x_left(&self) -> f64 {
        self.x_left
    }

    pub fn x_right(&self) -> f64 {
        self.x_right
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn point(&self, i: usize) -> f64 {
        self.x_left + i as f64 * self.dx
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.m).map(|i| self.point(i)).collect()
    }
}

/// Real lift `(η, ξ) = (Re u, Im u)` of a complex grid function.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianState {
    eta: Vec<f64>,
    xi: Vec<f64>,
}

impl HamiltonianState {
    pub fn new(eta: Vec<f64>, xi: Vec<f64>) -> Result<Self> {
        if eta.len() != xi.len() {
            return dim_err(format!("real part has {} entries, imaginary part {}", eta.len(), xi.len()));
        }
        if eta.iter().chain(&xi).any(|v| !v.is_finite()) {
            return param_err("state entries must be finite");
        }
        Ok(Self { eta, xi })
    }

    pub fn zeros(m: usize) -> Self {
        Self { eta: vec![0.0; m], xi: vec![0.0; m] }
    }

    /// Splits a stacked vector `[η; ξ]`.
    pub fn from_stacked(v: &[f64]) -> Result<Self> {
        if !v.len().is_multiple_of(2) {
            return dim_err(format!("stacked state of odd length {}", v.len()));
        }
        let (eta, xi) = v.split_at(v.len() / 2);
        Self::new(eta.to_vec(), xi.to_vec())
    }

    pub fn to_stacked(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.len());
        v.extend_from_slice(&self.eta);
        v.extend_from_slice(&self.xi);
        v
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    /// Number of grid points `M`.
    pub fn len(&self) -> usize {
        self.eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eta.is_empty()
    }

    /// Pointwise `|u_i|²`.
    pub fn density(&self) -> Vec<f64> {
        self.eta.iter().zip(&self.xi).map(|(a, b)| a * a + b * b).collect()
    }
}

pub fn lift(u_real: &[f64], u_imag: &[f64]) -> Result<HamiltonianState> {
    HamiltonianState::new(u_real.to_vec(), u_imag.to_vec())
}

/// Pointwise `|u_i| = √(η_i² + ξ_i²)`.
pub fn modulus(state: &HamiltonianState) -> Vec<f64> {
    state.eta.iter().zip(&state.xi).map(|(a, b)| a.hypot(*b)).collect()
}

/// Circulant `coeff/dx²·[1 -2 1]` with periodic corner entries.
pub fn periodic_laplacian(grid: &SpatialGrid, coeff: f64) -> RealMatrix {
    let m = grid.len();
    let c = coeff / (grid.dx() * grid.dx());
    let mut a = RealMatrix::zeros(m, m);
    for i in 0..m {
        a[(i, i)] = -2.0 * c;
        a[(i, (i + 1) % m)] = c;
        a[(i, (i + m - 1) % m)] = c;
    }
    a
}

/// Entries `V(x_i) + nl_coeff·(η_i² + ξ_i²)^σ` with the nonlinearity frozen at `state`.
pub fn potential_values(
    grid: &SpatialGrid,
    v: &dyn Fn(f64) -> f64,
    nl_coeff: f64,
    sigma: f64,
    state: &HamiltonianState,
) -> Result<Vec<f64>> {
    if state.len() != grid.len() {
        return dim_err(format!("state has {} points, grid {}", state.len(), grid.len()));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return param_err(format!("nonlinearity exponent must be non-negative, got {sigma}"));
    }
    let values: Vec<f64> = state
        .density()
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let p = if sigma == 1.0 { r } else { r.powf(sigma) };
            v(grid.point(i)) + nl_coeff * p
        })
        .collect();
    if values.iter().any(|x| !x.is_finite()) {
        return param_err("potential is not finite on the grid");
    }
    Ok(values)
}

/// Diagonal matrix form of [`potential_values`].
pub fn potential_diagonal(
    grid: &SpatialGrid,
    v: &dyn Fn(f64) -> f64,
    nl_coeff: f64,
    sigma: f64,
    state: &HamiltonianState,
) -> Result<RealMatrix> {
    Ok(RealMatrix::from_diagonal(&potential_values(grid, v, nl_coeff, sigma, state)?))
}

/// `ε·I_M`, the noise coupling of scalar multiplicative noise.
pub fn noise_diagonal(m: usize, eps: f64) -> RealMatrix {
    RealMatrix::identity(m).scale(eps)
}
