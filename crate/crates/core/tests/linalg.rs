mod common;

use common::*;
use nls_splitting::linalg::{SkewBlock, MAX_PHI_ORDER};
use nls_splitting::prelude::*;
use proptest::prelude::*;

fn rel(a: &RealMatrix, b: &RealMatrix) -> f64 {
    a.sub(b).unwrap().norm_frobenius() / b.norm_frobenius()
}

#[test]
fn expm_at_zero_time_is_identity() {
    let m = random_matrix(&mut rng(10), 5, 3.0);
    assert_eq!(expm(&m, 0.0).unwrap(), RealMatrix::identity(5));
}

#[test]
fn expm_of_rotation_generator() {
    let theta: f64 = 0.5;
    let g = RealMatrix::from_rows(&[&[0.0, theta], &[-theta, 0.0]]).unwrap();
    let e = expm(&g, 1.0).unwrap();
    let want = RealMatrix::from_rows(&[&[theta.cos(), theta.sin()], &[-theta.sin(), theta.cos()]]).unwrap();
    assert!(e.max_abs_diff(&want) < 1e-15);
}

#[test]
fn expm_matches_taylor_oracle_on_unit_norm() {
    let mut r = rng(11);
    for _ in 0..20 {
        let m = random_matrix(&mut r, 6, 1.0);
        assert!(rel(&expm(&m, 1.0).unwrap(), &taylor_expm(&m)) <= 1e-10);
    }
}

#[test]
fn expm_matches_scaled_taylor_oracle_up_to_norm_ten() {
    let mut r = rng(12);
    for norm in [2.0, 5.0, 10.0] {
        for _ in 0..5 {
            let m = random_matrix(&mut r, 6, norm);
            assert!(rel(&expm(&m, 1.0).unwrap(), &taylor_expm(&m)) <= 1e-12);
            // t scales the generator.
            assert!(rel(&expm(&m.scale(0.5), 2.0).unwrap(), &taylor_expm(&m)) <= 1e-12);
        }
    }
}

#[test]
fn expm_errors() {
    let rect = RealMatrix::zeros(2, 3);
    assert!(matches!(expm(&rect, 1.0), Err(Error::Dimension(_))));
    assert!(expm(&RealMatrix::identity(2), f64::NAN).is_err());
}

#[test]
fn phi_of_zero_matrix() {
    let z = RealMatrix::zeros(3, 3);
    let t = 0.7;
    assert!(phi(&z, t, 1).unwrap().max_abs_diff(&RealMatrix::identity(3).scale(t)) < 1e-15);
    assert!(phi(&z, t, 2).unwrap().max_abs_diff(&RealMatrix::identity(3).scale(t * t / 2.0)) < 1e-15);
}

#[test]
fn phi_one_residual_on_nonsingular_matrix() {
    let mut r = rng(13);
    let m = random_matrix(&mut r, 4, 1.5).add(&RealMatrix::identity(4)).unwrap();
    assert!(m.solve(&RealMatrix::identity(4)).is_ok());
    let t = 0.3;
    let lhs = m.matmul(&phi(&m, t, 1).unwrap()).unwrap();
    let rhs = expm(&m, t).unwrap().sub(&RealMatrix::identity(4)).unwrap();
    assert!(lhs.max_abs_diff(&rhs) < 1e-10);
}

#[test]
fn phi_rejects_high_orders() {
    let m = RealMatrix::identity(2);
    assert!(phi(&m, 1.0, MAX_PHI_ORDER).is_ok());
    assert!(matches!(phi(&m, 1.0, MAX_PHI_ORDER + 1), Err(Error::UnsupportedOrder { .. })));
}

#[test]
fn phi_of_singular_skew_laplacian_is_finite() {
    // The lifted periodic Laplacian has a kernel, so the division recursion is undefined there.
    let grid = SpatialGrid::new(0.0, 1.0, 6).unwrap();
    let a = block_skew(&periodic_laplacian(&grid, -0.5)).unwrap();
    for k in 1..=4 {
        let p = phi(&a, 0.01, k).unwrap();
        assert!(p.is_finite());
    }
}

#[test]
fn commutator_examples() {
    let b = random_matrix(&mut rng(14), 3, 1.0);
    assert_eq!(commutator(&RealMatrix::identity(3), &b).unwrap().max_abs(), 0.0);
    assert_eq!(commutator(&b, &b).unwrap().max_abs(), 0.0);
    let e = RealMatrix::from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
    let f = RealMatrix::from_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
    let h = RealMatrix::from_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
    assert_eq!(commutator(&e, &f).unwrap(), h);
    assert!(commutator(&RealMatrix::identity(2), &RealMatrix::identity(3)).is_err());
}

#[test]
fn block_skew_examples() {
    let a = RealMatrix::from_rows(&[&[2.5]]).unwrap();
    assert_eq!(block_skew(&a).unwrap(), RealMatrix::from_rows(&[&[0.0, 2.5], &[-2.5, 0.0]]).unwrap());
    let s = random_symmetric(&mut rng(15), 4);
    let k = block_skew(&s).unwrap();
    assert_eq!(k.transpose(), k.scale(-1.0));
    // block_skew(I) = [[0, I], [-I, 0]] = -J.
    assert_eq!(block_skew(&RealMatrix::identity(2)).unwrap(), symplectic_j(2).unwrap().scale(-1.0));
    assert!(block_skew(&RealMatrix::zeros(2, 3)).is_err());
}

#[test]
fn symplectic_j_examples() {
    assert_eq!(symplectic_j(1).unwrap(), RealMatrix::from_rows(&[&[0.0, -1.0], &[1.0, 0.0]]).unwrap());
    for d in 1..5 {
        let j = symplectic_j(d).unwrap();
        assert_eq!(j.matmul(&j).unwrap(), RealMatrix::identity(2 * d).scale(-1.0));
        assert_eq!(j.transpose(), j.scale(-1.0));
    }
    assert!(matches!(symplectic_j(0), Err(Error::Dimension(_))));
}

#[test]
fn cyclic_skew_agrees_with_dense_lift() {
    let grid = SpatialGrid::new(0.0, 2.0, 9).unwrap();
    let lap = periodic_laplacian(&grid, 0.8);
    let m = grid.len();
    let lower: Vec<f64> = (0..m).map(|i| lap[(i, (i + m - 1) % m)]).collect();
    let diag = lap.diagonal();
    let upper: Vec<f64> = (0..m).map(|i| lap[(i, (i + 1) % m)]).collect();
    let cyclic = BlockSkew::cyclic(lower, diag, upper).unwrap();
    assert!(matches!(cyclic.block(), SkewBlock::Cyclic { .. }));
    let dense = block_skew(&lap).unwrap();
    assert_eq!(cyclic.to_matrix(), dense);
    let v: Vec<f64> = (0..2 * m).map(|i| (i as f64 * 0.37).sin()).collect();
    let want = expm(&dense, 0.05).unwrap().matvec(&v).unwrap();
    assert!(max_abs_diff(&cyclic.exp_apply(0.05, &v).unwrap(), &want) < 1e-12);
}

#[test]
fn exponential_actions_match_dense_functions() {
    let mut r = rng(16);
    let m = random_matrix(&mut r, 7, 12.0);
    let v: Vec<f64> = (0..7).map(|i| 1.0 - 0.2 * i as f64).collect();
    let want = expm(&m, 0.8).unwrap().matvec(&v).unwrap();
    let got = expm_action(&m, 0.8, &v).unwrap();
    assert!(euclid(&got, &want) <= 1e-11 * want.iter().map(|x| x * x).sum::<f64>().sqrt());
    for k in 1..=4 {
        let want = phi(&m, 0.3, k).unwrap().matvec(&v).unwrap();
        let got = phi_action(&m, 0.3, k, &v).unwrap();
        assert!(max_abs_diff(&got, &want) < 1e-11, "k = {k}");
    }
}

fn small_matrix(max_norm: f64) -> impl Strategy<Value = RealMatrix> {
    (1usize..=5).prop_flat_map(move |n| {
        (prop::collection::vec(-1.0f64..1.0, n * n), 0.0..max_norm).prop_map(move |(v, s)| {
            let m = RealMatrix::new(n, n, v).unwrap();
            let norm = m.norm_one();
            if norm == 0.0 {
                m
            } else {
                m.scale(s / norm)
            }
        })
    })
}

proptest! {
    #[test]
    fn expm_semigroup(m in small_matrix(1.0), s in -1.0f64..1.0, t in -1.0f64..1.0) {
        let lhs = expm(&m, s).unwrap().matmul(&expm(&m, t).unwrap()).unwrap();
        let rhs = expm(&m, s + t).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-10);
    }

    #[test]
    fn skew_exponential_is_orthogonal(m in small_matrix(8.0), t in -2.0f64..2.0) {
        let k = m.sub(&m.transpose()).unwrap();
        let q = expm(&k, t).unwrap();
        let n = q.rows();
        prop_assert!(q.transpose().matmul(&q).unwrap().max_abs_diff(&RealMatrix::identity(n)) <= 1e-10);
    }

    #[test]
    fn phi_residual_identity(m in small_matrix(2.0), t in 0.05f64..1.5) {
        let n = m.rows();
        let mut factorial = 1.0;
        for k in 1..=4usize {
            if k > 1 {
                factorial *= (k - 1) as f64;
            }
            let lhs = m.matmul(&phi(&m, t, k).unwrap()).unwrap();
            let rhs = phi(&m, t, k - 1).unwrap().sub(&RealMatrix::identity(n).scale(t.powi(k as i32 - 1) / factorial)).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-10);
        }
    }

    #[test]
    fn commutator_is_antisymmetric(a in small_matrix(3.0), seed in any::<u64>()) {
        let b = random_matrix(&mut rng(seed), a.rows(), 2.0);
        let ab = commutator(&a, &b).unwrap();
        let ba = commutator(&b, &a).unwrap();
        prop_assert!(ab.add(&ba).unwrap().max_abs() <= 1e-15 * (1.0 + ab.max_abs()));
    }
}
