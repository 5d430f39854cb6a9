use crate::error::{dim_err, param_err, Result};

use super::{block_skew, expm_action, LinearOperator, RealMatrix};

/// The `M x M` block `S` of a block-skew generator.
#[derive(Clone, Debug, PartialEq)]
pub enum SkewBlock {
    Dense(RealMatrix),
    Diagonal(Vec<f64>),
    /// Periodic tridiagonal: row `i` holds `lower[i]` at column `i-1`,
    /// `diag[i]` at `i` and `upper[i]` at `i+1`, indices taken mod `M`.
    Cyclic {
        lower: Vec<f64>,
        diag: Vec<f64>,
        upper: Vec<f64>,
    },
}

/// Structured form of the generator `[[0, S], [-S, 0]]` acting on `(η, ξ)`.
///
/// Keeping `S` instead of the full `2M x 2M` lift halves the storage and lets
/// diagonal blocks be exponentiated in closed form as pointwise rotations.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSkew {
    block: SkewBlock,
}

impl BlockSkew {
    pub fn dense(s: RealMatrix) -> Result<Self> {
        if !s.is_square() {
            return dim_err(format!("block-skew generator from {}x{} block", s.rows(), s.cols()));
        }
        Ok(Self { block: SkewBlock::Dense(s) })
    }

    pub fn diagonal(d: Vec<f64>) -> Result<Self> {
        if d.iter().any(|v| !v.is_finite()) {
            return param_err("diagonal block has non-finite entries");
        }
        Ok(Self { block: SkewBlock::Diagonal(d) })
    }

    /// Periodic tridiagonal block; needs `M >= 3` so the three bands are distinct.
    pub fn cyclic(lower: Vec<f64>, diag: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let m = diag.len();
        if m < 3 || lower.len() != m || upper.len() != m {
            return dim_err(format!(
                "cyclic block needs three bands of equal length >= 3, got {}, {}, {}",
                lower.len(),
                m,
                upper.len()
            ));
        }
        if lower.iter().chain(&diag).chain(&upper).any(|v| !v.is_finite()) {
            return param_err("cyclic block has non-finite entries");
        }
        Ok(Self { block: SkewBlock::Cyclic { lower, diag, upper } })
    }

    pub fn zero(m: usize) -> Self {
        Self { block: SkewBlock::Diagonal(vec![0.0; m]) }
    }

    pub fn block(&self) -> &SkewBlock {
        &self.block
    }

    /// Size `M` of the block `S`.
    pub fn block_dim(&self) -> usize {
        match &self.block {
            SkewBlock::Dense(s) => s.rows(),
            SkewBlock::Diagonal(d) => d.len(),
            SkewBlock::Cyclic { diag, .. } => diag.len(),
        }
    }

    pub fn block_matrix(&self) -> RealMatrix {
        match &self.block {
            SkewBlock::Dense(s) => s.clone(),
            SkewBlock::Diagonal(d) => RealMatrix::from_diagonal(d),
            SkewBlock::Cyclic { lower, diag, upper } => {
                let m = diag.len();
                let mut s = RealMatrix::from_diagonal(diag);
                for i in 0..m {
                    s[(i, (i + m - 1) % m)] += lower[i];
                    s[(i, (i + 1) % m)] += upper[i];
                }
                s
            }
        }
    }

    /// The dense `2M x 2M` lift.
    pub fn to_matrix(&self) -> RealMatrix {
        block_skew(&self.block_matrix()).expect("block is square by construction")
    }

    pub fn is_zero(&self) -> bool {
        match &self.block {
            SkewBlock::Dense(s) => s.as_slice().iter().all(|v| *v == 0.0),
            SkewBlock::Diagonal(d) => d.iter().all(|v| *v == 0.0),
            SkewBlock::Cyclic { lower, diag, upper } => lower.iter().chain(diag).chain(upper).all(|v| *v == 0.0),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let block = match &self.block {
            SkewBlock::Dense(s) => SkewBlock::Dense(s.scale(c)),
            SkewBlock::Diagonal(d) => SkewBlock::Diagonal(scale_vec(c, d)),
            SkewBlock::Cyclic { lower, diag, upper } => {
                SkewBlock::Cyclic { lower: scale_vec(c, lower), diag: scale_vec(c, diag), upper: scale_vec(c, upper) }
            }
        };
        Self { block }
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.block_dim() != other.block_dim() {
            return dim_err(format!("sum of generators with blocks {} and {}", self.block_dim(), other.block_dim()));
        }
        let block = match (&self.block, &other.block) {
            (SkewBlock::Diagonal(a), SkewBlock::Diagonal(b)) => {
                SkewBlock::Diagonal(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (SkewBlock::Cyclic { lower, diag, upper }, SkewBlock::Diagonal(d))
            | (SkewBlock::Diagonal(d), SkewBlock::Cyclic { lower, diag, upper }) => SkewBlock::Cyclic {
                lower: lower.clone(),
                diag: diag.iter().zip(d).map(|(x, y)| x + y).collect(),
                upper: upper.clone(),
            },
            (
                SkewBlock::Cyclic { lower: l1, diag: d1, upper: u1 },
                SkewBlock::Cyclic { lower: l2, diag: d2, upper: u2 },
            ) => SkewBlock::Cyclic {
                lower: l1.iter().zip(l2).map(|(x, y)| x + y).collect(),
                diag: d1.iter().zip(d2).map(|(x, y)| x + y).collect(),
                upper: u1.iter().zip(u2).map(|(x, y)| x + y).collect(),
            },
            _ => SkewBlock::Dense(self.block_matrix().add(&other.block_matrix())?),
        };
        Ok(Self { block })
    }

    /// Spectral norm of the lift, which equals that of `S`.
    pub fn spectral_norm(&self, tol: f64) -> f64 {
        match &self.block {
            SkewBlock::Dense(s) => s.spectral_norm(tol),
            SkewBlock::Diagonal(d) => d.iter().fold(0.0, |m, v| m.max(v.abs())),
            SkewBlock::Cyclic { .. } => self.block_matrix().spectral_norm(tol),
        }
    }

    fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != 2 * self.block_dim() {
            return dim_err(format!(
                "generator of dimension {} applied to length-{} state",
                2 * self.block_dim(),
                v.len()
            ));
        }
        Ok(())
    }

    /// `exp(t·G)·v`; exact rotations for diagonal blocks, Taylor action otherwise.
    pub fn exp_apply(&self, t: f64, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(v)?;
        match &self.block {
            SkewBlock::Diagonal(d) => Ok(rotate(d, |_| 1.0, t, v)),
            _ => expm_action(self, t, v),
        }
    }

    /// `exp(-½·dt·GᵀG + dW·G)·v`, the Itô-corrected noise factor.
    pub fn stochastic_factor_apply(&self, dt: f64, dw: f64, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(v)?;
        if !dt.is_finite() || !dw.is_finite() {
            return param_err("noise factor needs finite dt and dW");
        }
        match &self.block {
            SkewBlock::Diagonal(d) => Ok(rotate(d, |di| (-0.5 * dt * di * di).exp(), dw, v)),
            _ => {
                let s = &self.block_matrix();
                let m = s.rows();
                let sts = s.transpose().matmul(s)?.scale(-0.5 * dt);
                let mut g = RealMatrix::zeros(2 * m, 2 * m);
                g.set_block(0, 0, &sts);
                g.set_block(m, m, &sts);
                g.set_block(0, m, &s.scale(dw));
                g.set_block(m, 0, &s.scale(-dw));
                expm_action(&g, 1.0, v)
            }
        }
    }
}

// Pointwise `damp(d_i)·[[cos, sin], [-sin, cos]](t·d_i)` on (η_i, ξ_i).
fn rotate(d: &[f64], damp: impl Fn(f64) -> f64, t: f64, v: &[f64]) -> Vec<f64> {
    let m = d.len();
    let mut out = vec![0.0; 2 * m];
    for (i, di) in d.iter().enumerate() {
        let (s, c) = (t * di).sin_cos();
        let g = damp(*di);
        let (eta, xi) = (v[i], v[m + i]);
        out[i] = g * (c * eta + s * xi);
        out[m + i] = g * (c * xi - s * eta);
    }
    out
}

impl LinearOperator for BlockSkew {
    fn dim(&self) -> usize {
        2 * self.block_dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let m = self.block_dim();
        let (eta, xi) = x.split_at(m);
        let (y_eta, y_xi) = y.split_at_mut(m);
        match &self.block {
            SkewBlock::Dense(s) => {
                s.matvec_into(xi, y_eta);
                s.matvec_into(eta, y_xi);
                y_xi.iter_mut().for_each(|v| *v = -*v);
            }
            SkewBlock::Diagonal(d) => {
                for i in 0..m {
                    y_eta[i] = d[i] * xi[i];
                    y_xi[i] = -d[i] * eta[i];
                }
            }
            SkewBlock::Cyclic { lower, diag, upper } => {
                cyclic_apply(lower, diag, upper, xi, y_eta, 1.0);
                cyclic_apply(lower, diag, upper, eta, y_xi, -1.0);
            }
        }
    }

    fn norm_one(&self) -> f64 {
        match &self.block {
            SkewBlock::Dense(s) => s.norm_one(),
            SkewBlock::Diagonal(d) => d.iter().fold(0.0, |m, v| m.max(v.abs())),
            SkewBlock::Cyclic { lower, diag, upper } => {
                let m = diag.len();
                (0..m)
                    .map(|j| diag[j].abs() + upper[(j + m - 1) % m].abs() + lower[(j + 1) % m].abs())
                    .fold(0.0, f64::max)
            }
        }
    }
}

fn scale_vec(c: f64, v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| c * x).collect()
}

fn cyclic_apply(lower: &[f64], diag: &[f64], upper: &[f64], x: &[f64], y: &mut [f64], sign: f64) {
    let m = diag.len();
    y[0] = sign * (lower[0] * x[m - 1] + diag[0] * x[0] + upper[0] * x[1]);
    for i in 1..m - 1 {
        y[i] = sign * (lower[i] * x[i - 1] + diag[i] * x[i] + upper[i] * x[i + 1]);
    }
    y[m - 1] = sign * (lower[m - 1] * x[m - 2] + diag[m - 1] * x[m - 1] + upper[m - 1] * x[0]);
}
