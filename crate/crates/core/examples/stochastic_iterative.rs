//! Strong error of the iterative scheme on a commuting linear system, where
//! `exp(A·t + B·W(t))·y₀` is exact, for one and two corrector sweeps.
//!
//! Run: `cargo run --release --example stochastic_iterative`

use nls_splitting::diagnostics::fit_power_law;
use nls_splitting::integrators::integrate_from;
use nls_splitting::prelude::*;
use nls_splitting::stochastic::sample_path_stream;

fn main() -> Result<()> {
    let sys = LinearTestSystem::commuting(4, 0.5);
    let y0 = sys.initial_condition();
    let paths = 100;
    let levels = [4usize, 8, 16, 32];
    let refinement = 4;
    let finest = levels[levels.len() - 1] * refinement;

    for m in [1, 2] {
        let mut rms = Vec::new();
        for &n in &levels {
            let mut sq = 0.0;
            for p in 0..paths {
                let fine = sample_path_stream(finest, 1.0 / finest as f64, 9, p)?;
                let path = coarsen(&fine, finest / (n * refinement))?;
                let w: f64 = fine.increments().iter().sum();
                let exact = sys.exact_linear(1.0, w)?;
                let traj = integrate_from(&sys, &SchemeSpec::iterative(m), &y0, 1.0, n, &path, n)?;
                sq += l2_error(&exact, traj.last(), 1.0)?.powi(2);
            }
            rms.push((sq / paths as f64).sqrt());
        }
        let dts: Vec<f64> = levels.iter().map(|n| 1.0 / *n as f64).collect();
        let fit = fit_power_law(&dts, &rms)?;
        let shown: Vec<String> = rms.iter().map(|e| format!("{e:.3e}")).collect();
        println!("m = {m}: RMS errors [{}], strong order {:.2}", shown.join(", "), fit.order);
    }
    Ok(())
}
