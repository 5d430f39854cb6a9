//! Matrix exponential, φ-functions and their actions on a vector.
//!
//! Run: `cargo run --example matrix_functions`

use nls_splitting::prelude::*;

fn main() -> Result<()> {
    let grid = SpatialGrid::new(0.0, 1.0, 8)?;
    let a1 = block_skew(&periodic_laplacian(&grid, -0.5))?;
    let t = 1e-3;

    let e = expm(&a1, t)?;
    let orth = e.transpose().matmul(&e)?.max_abs_diff(&RealMatrix::identity(16));
    println!("exp(t·Ã₁) is orthogonal: ‖EᵀE − I‖max = {orth:.2e}");

    // Ã₁ is singular, so φ_k comes from the augmented exponential.
    for k in 1..=3 {
        let p = phi(&a1, t, k)?;
        println!("‖φ_{k}(tÃ₁)‖₁ = {:.6e}", p.norm_one());
    }

    let v: Vec<f64> = (0..16).map(|i| (0.4 * i as f64).sin()).collect();
    let dense = e.matvec(&v)?;
    let action = expm_action(&a1, t, &v)?;
    let diff = dense.iter().zip(&action).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("exp(tÃ₁)·v by Taylor action vs dense: max diff {diff:.2e}");

    let b = block_skew(&noise_diagonal(8, 0.5))?;
    println!("‖[Ã₁, Ã₃]‖max = {:.2e} (scalar noise commutes)", commutator(&a1, &b)?.max_abs());
    Ok(())
}
