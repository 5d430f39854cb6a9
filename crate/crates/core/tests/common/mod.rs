//! Independent oracles shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

use nls_splitting::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random `n×n` matrix with entries in `[-1, 1]`, rescaled to the given 1-norm.
pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, norm: f64) -> RealMatrix {
    let m = RealMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let s = m.norm_one();
    if s == 0.0 {
        m
    } else {
        m.scale(norm / s)
    }
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> RealMatrix {
    let m = RealMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    m.add(&m.transpose()).unwrap().scale(0.5)
}

fn mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut c = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

fn to_rows(m: &RealMatrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect()).collect()
}

fn from_rows(r: &[Vec<f64>]) -> RealMatrix {
    let refs: Vec<&[f64]> = r.iter().map(Vec::as_slice).collect();
    RealMatrix::from_rows(&refs).unwrap()
}

/// Plain Taylor series of `exp(m)` after halving until `‖m‖₁ ≤ 1/2`, then
/// squaring back. Uses nested `Vec` arithmetic, none of the crate's kernels.
pub fn taylor_expm(m: &RealMatrix) -> RealMatrix {
    let n = m.rows();
    let mut a = to_rows(m);
    let norm = (0..n).map(|j| (0..n).map(|i| a[i][j].abs()).sum::<f64>()).fold(0.0, f64::max);
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.5 {
        s += 1;
    }
    let f = 2f64.powi(-s);
    a.iter_mut().flatten().for_each(|v| *v *= f);
    let mut sum: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    let mut term = sum.clone();
    for k in 1..40 {
        term = mul(&term, &a);
        term.iter_mut().flatten().for_each(|v| *v /= k as f64);
        for i in 0..n {
            for j in 0..n {
                sum[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..s {
        sum = mul(&sum, &sum);
    }
    from_rows(&sum)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(m: &RealMatrix) -> Vec<f64> {
    let n = m.rows();
    let mut a = to_rows(m);
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |j| *j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (lo, hi) = a.split_at_mut(q);
                for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                    let (apk, aqk) = (*x, *y);
                    *x = c * apk - s * aqk;
                    *y = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// `‖m‖₂` as the square root of the largest eigenvalue of `mᵀm`.
pub fn spectral_norm_oracle(m: &RealMatrix) -> f64 {
    let mtm = m.transpose().matmul(m).unwrap();
    jacobi_eigenvalues(&mtm).into_iter().fold(0.0, f64::max).sqrt()
}

/// Classical RK4 for the periodic semi-discrete NLS `i·u_t = (λ/2)·u_xx + ψ·|u|²·u`
/// written directly in complex arithmetic on `(re, im)` pairs.
pub fn rk4_nls(
    x_left: f64,
    x_right: f64,
    m: usize,
    lambda: f64,
    psi: f64,
    t_end: f64,
    n: usize,
) -> (Vec<f64>, Vec<f64>) {
    let dx = (x_right - x_left) / m as f64;
    let mut u: Vec<(f64, f64)> = (0..m).map(|i| exact_soliton(x_left + i as f64 * dx, 0.0)).collect();
    // du/dt = -i·S(u)·u
    let rhs = |u: &[(f64, f64)]| -> Vec<(f64, f64)> {
        (0..m)
            .map(|i| {
                let (l, c, r) = (u[(i + m - 1) % m], u[i], u[(i + 1) % m]);
                let lap = ((l.0 - 2.0 * c.0 + r.0) / (dx * dx), (l.1 - 2.0 * c.1 + r.1) / (dx * dx));
                let nl = psi * (c.0 * c.0 + c.1 * c.1);
                let s = (0.5 * lambda * lap.0 + nl * c.0, 0.5 * lambda * lap.1 + nl * c.1);
                (s.1, -s.0)
            })
            .collect()
    };
    let dt = t_end / n as f64;
    let axpy = |u: &[(f64, f64)], k: &[(f64, f64)], a: f64| -> Vec<(f64, f64)> {
        u.iter().zip(k).map(|(u, k)| (u.0 + a * k.0, u.1 + a * k.1)).collect()
    };
    for _ in 0..n {
        let k1 = rhs(&u);
        let k2 = rhs(&axpy(&u, &k1, 0.5 * dt));
        let k3 = rhs(&axpy(&u, &k2, 0.5 * dt));
        let k4 = rhs(&axpy(&u, &k3, dt));
        for i in 0..m {
            u[i].0 += dt / 6.0 * (k1[i].0 + 2.0 * k2[i].0 + 2.0 * k3[i].0 + k4[i].0);
            u[i].1 += dt / 6.0 * (k1[i].1 + 2.0 * k2[i].1 + 2.0 * k3[i].1 + k4[i].1);
        }
    }
    u.into_iter().unzip()
}

/// Correctly rounded `(a / 2^k)²` for a positive normal `a`, from exact
/// integer arithmetic on the mantissa.
pub fn exact_square_over_pow2(a: f64, k: i32) -> f64 {
    let bits = a.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32 - 1075;
    let mant = u128::from((bits & ((1u64 << 52) - 1)) | (1u64 << 52));
    // a² = mant² · 2^(2·exp); the square has 105 or 106 bits.
    let sq = mant * mant;
    let width = 128 - sq.leading_zeros() as i32;
    let shift = width - 53;
    let mut q = sq >> shift;
    let rem = sq & ((1u128 << shift) - 1);
    let half = 1u128 << (shift - 1);
    if rem > half || (rem == half && q & 1 == 1) {
        q += 1;
    }
    (q as f64) * 2f64.powi(2 * exp + shift - 2 * k)
}

/// Distance in units in the last place.
pub fn ulp_distance(a: f64, b: f64) -> u64 {
    (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
