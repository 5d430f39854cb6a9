use crate::error::{dim_err, param_err, Error, Result};

use super::matrix::norm_inf_vec;
use super::{RealMatrix, MAX_PHI_ORDER};

/// A square linear map known only through matrix-vector products.
pub trait LinearOperator {
    fn dim(&self) -> usize;

    /// Writes `A·x` into `y`. Both slices have length [`LinearOperator::dim`].
    fn apply(&self, x: &[f64], y: &mut [f64]);

    /// An upper bound on the induced 1-norm; it sets the number of substeps.
    fn norm_one(&self) -> f64;
}

impl LinearOperator for RealMatrix {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.matvec_into(x, y);
    }

    fn norm_one(&self) -> f64 {
        RealMatrix::norm_one(self)
    }
}

// Norm budget per substep. Terms of the series stay below e^2 in relative size,
// so little precision is lost to cancellation.
const SUBSTEP_NORM: f64 = 2.0;
const MAX_TERMS: usize = 60;

/// `exp(t·A)·v` by a truncated Taylor series on `⌈|t|·‖A‖₁ / 2⌉` substeps.
///
/// Each substep sums terms until two consecutive ones fall below unit
/// roundoff relative to the partial sum.
pub fn expm_action<L: LinearOperator + ?Sized>(op: &L, t: f64, v: &[f64]) -> Result<Vec<f64>> {
    let n = op.dim();
    if v.len() != n {
        return dim_err(format!("exponential action of dimension {n} on length-{} vector", v.len()));
    }
    if !t.is_finite() {
        return param_err("exponential action time must be finite");
    }
    let nu = t.abs() * op.norm_one();
    if !nu.is_finite() {
        return param_err("operator norm is not finite");
    }
    if nu == 0.0 {
        return Ok(v.to_vec());
    }
    let steps = (nu / SUBSTEP_NORM).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let mut x = v.to_vec();
    let mut term = vec![0.0; n];
    let mut next = vec![0.0; n];
    for _ in 0..steps {
        term.copy_from_slice(&x);
        let mut small_run = 0;
        for k in 1..=MAX_TERMS {
            op.apply(&term, &mut next);
            let c = h / k as f64;
            for (tk, nk) in term.iter_mut().zip(&next) {
                *tk = c * nk;
            }
            for (xi, tk) in x.iter_mut().zip(&term) {
                *xi += tk;
            }
            if norm_inf_vec(&term) <= f64::EPSILON / 2.0 * norm_inf_vec(&x) {
                small_run += 1;
                if small_run == 2 {
                    break;
                }
            } else {
                small_run = 0;
            }
        }
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { step: 0 });
    }
    Ok(x)
}

/// `φ_k(t·A)·v` with the same normalization as [`super::phi`].
///
/// Uses the augmented operator `[[tA, b, 0, ..], [0, 0, 1, ..], ..]` with
/// `b = v / ‖v‖₁`, applied to the last unit vector.
pub fn phi_action<L: LinearOperator + ?Sized>(op: &L, t: f64, k: usize, v: &[f64]) -> Result<Vec<f64>> {
    if k > MAX_PHI_ORDER {
        return Err(Error::UnsupportedOrder { order: k, max: MAX_PHI_ORDER });
    }
    if k == 0 {
        return expm_action(op, t, v);
    }
    let n = op.dim();
    if v.len() != n {
        return dim_err(format!("phi action of dimension {n} on length-{} vector", v.len()));
    }
    let beta: f64 = v.iter().map(|x| x.abs()).sum();
    if beta == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let aug = Augmented { op, t, b: v.iter().map(|x| x / beta).collect(), k };
    let mut start = vec![0.0; n + k];
    start[n + k - 1] = 1.0;
    let out = expm_action(&aug, 1.0, &start)?;
    let scale = beta * t.powi(k as i32);
    Ok(out[..n].iter().map(|x| scale * x).collect())
}

struct Augmented<'a, L: ?Sized> {
    op: &'a L,
    t: f64,
    b: Vec<f64>,
    k: usize,
}

impl<L: LinearOperator + ?Sized> LinearOperator for Augmented<'_, L> {
    fn dim(&self) -> usize {
        self.b.len() + self.k
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.b.len();
        let (xt, xc) = x.split_at(n);
        let (yt, yc) = y.split_at_mut(n);
        self.op.apply(xt, yt);
        let c1 = xc[0];
        for (yi, bi) in yt.iter_mut().zip(&self.b) {
            *yi = self.t * *yi + c1 * bi;
        }
        for j in 0..self.k {
            yc[j] = if j + 1 < self.k { xc[j + 1] } else { 0.0 };
        }
    }

    fn norm_one(&self) -> f64 {
        (self.t.abs() * self.op.norm_one()).max(1.0)
    }
}
