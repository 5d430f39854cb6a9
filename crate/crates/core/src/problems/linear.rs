use std::f64::consts::PI;

use crate::discretization::HamiltonianState;
use crate::error::{dim_err, Result};
use crate::linalg::{expm, BlockSkew, RealMatrix};

use super::SplitSystem;

/// A linear split system with fixed generators, used to test schemes against
/// exact matrix exponentials. `Ã₂` ignores the frozen state.
#[derive(Clone, Debug)]
pub struct LinearTestSystem {
    a1: BlockSkew,
    a2: BlockSkew,
    a3: BlockSkew,
    initial: HamiltonianState,
    dx: f64,
}

impl LinearTestSystem {
    pub fn new(a1: BlockSkew, a2: BlockSkew, a3: BlockSkew, initial: HamiltonianState) -> Result<Self> {
        let m = a1.block_dim();
        if a2.block_dim() != m || a3.block_dim() != m || initial.len() != m {
            return dim_err(format!(
                "generator blocks {}, {}, {} and state of {} points",
                m,
                a2.block_dim(),
                a3.block_dim(),
                initial.len()
            ));
        }
        Ok(Self { a1, a2, a3, initial, dx: 1.0 })
    }

    /// Drift `bs(-½·Lap + I)` and noise `bs(ε·I)` on `m` points with unit spacing.
    /// The two commute, so `exp(A·t + B·W(t))·y₀` is the exact solution.
    pub fn commuting(m: usize, eps: f64) -> Self {
        let s = unit_laplacian(m, -0.5).add(&RealMatrix::identity(m)).expect("same size");
        Self::new(
            BlockSkew::dense(s).expect("square"),
            BlockSkew::zero(m),
            BlockSkew::diagonal(vec![eps; m]).expect("finite"),
            smooth_state(m),
        )
        .expect("consistent sizes")
    }

    /// Laplacian drift, a non-constant potential and non-constant noise
    /// coupling; none of the three generators commute.
    pub fn frozen_stochastic(m: usize, eps: f64) -> Self {
        let noise = (0..m).map(|i| eps * (1.0 + 0.5 * (2.0 * PI * i as f64 / m as f64).sin())).collect();
        Self::new(
            BlockSkew::dense(unit_laplacian(m, -0.5)).expect("square"),
            BlockSkew::diagonal(lattice(m)).expect("finite"),
            BlockSkew::diagonal(noise).expect("finite"),
            smooth_state(m),
        )
        .expect("consistent sizes")
    }

    /// Deterministic non-commuting pair: Laplacian and a non-constant potential.
    pub fn noncommuting_pair(m: usize) -> Self {
        Self::new(
            BlockSkew::dense(unit_laplacian(m, -0.5)).expect("square"),
            BlockSkew::diagonal(lattice(m)).expect("finite"),
            BlockSkew::zero(m),
            smooth_state(m),
        )
        .expect("consistent sizes")
    }

    pub fn with_initial(mut self, initial: HamiltonianState) -> Result<Self> {
        if initial.len() != self.a1.block_dim() {
            return dim_err("initial state does not match the generators");
        }
        self.initial = initial;
        Ok(self)
    }

    /// `Ã₁ + Ã₂`.
    pub fn drift(&self) -> BlockSkew {
        self.a1.sum(&self.a2).expect("same size")
    }

    /// `exp((Ã₁ + Ã₂)·t + Ã₃·w)·y₀`, the exact solution when drift and noise commute.
    pub fn exact_linear(&self, t: f64, w: f64) -> Result<HamiltonianState> {
        self.exact_linear_from(&self.initial, t, w)
    }

    pub fn exact_linear_from(&self, y0: &HamiltonianState, t: f64, w: f64) -> Result<HamiltonianState> {
        let gen = self.drift().to_matrix().scale(t).add_scaled(w, &self.a3.to_matrix())?;
        HamiltonianState::from_stacked(&expm(&gen, 1.0)?.matvec(&y0.to_stacked())?)
    }
}

impl SplitSystem for LinearTestSystem {
    fn block_dim(&self) -> usize {
        self.a1.block_dim()
    }

    fn dx(&self) -> f64 {
        self.dx
    }

    fn a1(&self) -> &BlockSkew {
        &self.a1
    }

    fn a2(&self, frozen: &HamiltonianState) -> Result<BlockSkew> {
        if frozen.len() != self.block_dim() {
            return dim_err(format!("state of {} points for a {}-point system", frozen.len(), self.block_dim()));
        }
        Ok(self.a2.clone())
    }

    fn a3(&self) -> &BlockSkew {
        &self.a3
    }

    fn initial_condition(&self) -> HamiltonianState {
        self.initial.clone()
    }

    fn is_nonlinear(&self) -> bool {
        false
    }
}

fn unit_laplacian(m: usize, coeff: f64) -> RealMatrix {
    let mut a = RealMatrix::zeros(m, m);
    if m == 1 {
        return a;
    }
    for i in 0..m {
        a[(i, i)] -= 2.0 * coeff;
        a[(i, (i + 1) % m)] += coeff;
        a[(i, (i + m - 1) % m)] += coeff;
    }
    a
}

fn lattice(m: usize) -> Vec<f64> {
    (0..m).map(|i| 1.0 + 0.5 * (2.0 * PI * i as f64 / m as f64).cos()).collect()
}

fn smooth_state(m: usize) -> HamiltonianState {
    let eta = (0..m).map(|i| 1.0 + 0.5 * (2.0 * PI * i as f64 / m as f64).cos()).collect();
    let xi = (0..m).map(|i| 0.3 * (4.0 * PI * i as f64 / m as f64).sin() + 0.1).collect();
    HamiltonianState::new(eta, xi).expect("finite")
}
