use crate::error::{dim_err, param_err, Error, Result};

use super::RealMatrix;

/// Highest φ-function order supported by [`phi`] and [`super::phi_action`].
pub const MAX_PHI_ORDER: usize = 4;

const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

// Largest 1-norm for which the degree-13 Padé approximant meets double precision.
const THETA13: f64 = 5.371_920_351_148_152;

/// `exp(t·M)` by scaling and squaring with a degree-13 Padé approximant.
///
/// Dense O(n³); intended for matrices up to a few thousand rows.
pub fn expm(m: &RealMatrix, t: f64) -> Result<RealMatrix> {
    if !m.is_square() {
        return dim_err(format!("expm of non-square {}x{} matrix", m.rows(), m.cols()));
    }
    if !t.is_finite() {
        return param_err("expm time must be finite");
    }
    let n = m.rows();
    let a = m.scale(t);
    let norm = a.norm_one();
    if norm == 0.0 {
        return Ok(RealMatrix::identity(n));
    }
    let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a.scale(0.5f64.powi(s));
    let b = &PADE13;
    let id = RealMatrix::identity(n);
    let a2 = a.matmul(&a)?;
    let a4 = a2.matmul(&a2)?;
    let a6 = a4.matmul(&a2)?;

    let lin = |c6: f64, c4: f64, c2: f64, c0: f64| -> Result<RealMatrix> {
        a6.scale(c6).add_scaled(c4, &a4)?.add_scaled(c2, &a2)?.add_scaled(c0, &id)
    };
    let u_inner = a6.matmul(&lin(b[13], b[11], b[9], 0.0)?)?.add(&lin(b[7], b[5], b[3], b[1])?)?;
    let u = a.matmul(&u_inner)?;
    let v = a6.matmul(&lin(b[12], b[10], b[8], 0.0)?)?.add(&lin(b[6], b[4], b[2], b[0])?)?;

    let mut r = v.sub(&u)?.solve(&v.add(&u)?)?;
    for _ in 0..s {
        r = r.matmul(&r)?;
    }
    if !r.is_finite() {
        return Err(Error::NonFinite { step: 0 });
    }
    Ok(r)
}

/// `φ_k(tM) = ∫₀ᵗ φ_{k-1}(sM) ds` with `φ_0(tM) = exp(tM)`.
///
/// Computed from the exponential of the augmented block matrix
/// `[[tM, I, 0, ..], [0, 0, I, ..], ..]`, whose top-right block is the
/// standard `φ_k(tM)` normalized by `t^k`; no inverse of `M` is needed.
pub fn phi(m: &RealMatrix, t: f64, k: usize) -> Result<RealMatrix> {
    if k > MAX_PHI_ORDER {
        return Err(Error::UnsupportedOrder { order: k, max: MAX_PHI_ORDER });
    }
    if k == 0 {
        return expm(m, t);
    }
    if !m.is_square() {
        return dim_err(format!("phi of non-square {}x{} matrix", m.rows(), m.cols()));
    }
    let n = m.rows();
    let big = n * (k + 1);
    let mut aug = RealMatrix::zeros(big, big);
    aug.set_block(0, 0, &m.scale(t));
    let id = RealMatrix::identity(n);
    for j in 0..k {
        aug.set_block(j * n, (j + 1) * n, &id);
    }
    let e = expm(&aug, 1.0)?;
    Ok(e.block(0, k * n, n, n).scale(t.powi(k as i32)))
}

/// `XY − YX`.
pub fn commutator(a: &RealMatrix, b: &RealMatrix) -> Result<RealMatrix> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return dim_err(format!("commutator of {}x{} and {}x{}", a.rows(), a.cols(), b.rows(), b.cols()));
    }
    a.matmul(b)?.sub(&b.matmul(a)?)
}

/// The real lift `[[0, A], [-A, 0]]` of the complex operator `-iA`.
pub fn block_skew(a: &RealMatrix) -> Result<RealMatrix> {
    if !a.is_square() {
        return dim_err(format!("block_skew of non-square {}x{} matrix", a.rows(), a.cols()));
    }
    let n = a.rows();
    let mut out = RealMatrix::zeros(2 * n, 2 * n);
    out.set_block(0, n, a);
    out.set_block(n, 0, &a.scale(-1.0));
    Ok(out)
}

/// Canonical structure matrix `J = [[0, -I_d], [I_d, 0]]`.
pub fn symplectic_j(d: usize) -> Result<RealMatrix> {
    if d == 0 {
        return dim_err("symplectic structure matrix needs d >= 1");
    }
    let mut out = RealMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        out[(i, d + i)] = -1.0;
        out[(d + i, i)] = 1.0;
    }
    Ok(out)
}
