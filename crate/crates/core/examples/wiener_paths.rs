//! Sampling, coarsening and the midpoint Stratonovich integral.
//!
//! Run: `cargo run --example wiener_paths`

use nls_splitting::prelude::*;
use nls_splitting::stochastic::sample_path_stream;

fn main() -> Result<()> {
    let fine = sample_path_stream(1024, 1.0 / 1024.0, 42, 0)?;
    let w_end = *fine.cumulative().last().unwrap();
    println!("W(1) on the fine path: {w_end:.6}");

    for factor in [4, 16, 64] {
        let coarse = coarsen(&fine, factor)?;
        println!("factor {factor:>2}: {} increments, W(1) = {:.6}", coarse.len(), coarse.cumulative().last().unwrap());
    }

    let a = RealMatrix::from_rows(&[&[0.0, 1.0], &[-1.0, 0.0]])?;
    let c = stratonovich_expm_integral(&a, &fine, 1.0)?;
    println!("C₁(1) for a rotation generator: [{:.4} {:.4}; {:.4} {:.4}]", c[(0, 0)], c[(0, 1)], c[(1, 0)], c[(1, 1)]);

    let mut csv = Vec::new();
    coarsen(&fine, 256)?.write_csv(&mut csv).expect("in-memory write");
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}
