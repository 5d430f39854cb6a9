//! One-step symplectic defect of the iterative scheme and the step-size budget.
//!
//! Run: `cargo run --release --example symplectic_defect`

use nls_splitting::diagnostics::{fit_power_law, median};
use nls_splitting::prelude::*;
use nls_splitting::stochastic::sample_path_stream;

fn main() -> Result<()> {
    let sys = LinearTestSystem::frozen_stochastic(8, 1.0);
    let y0 = sys.initial_condition();
    let norm_b = sys.a3().spectral_norm(1e-12);
    let dts = [0.04, 0.02, 0.01, 0.005];

    for m in [1, 2] {
        let mut medians = Vec::new();
        for &dt in &dts {
            let defects: Vec<f64> = (0..50)
                .map(|p| {
                    let path = sample_path_stream(8, dt / 8.0, 4, p)?;
                    let map = |y: &HamiltonianState| step_iterative_stochastic(&sys, y, dt, path.increments(), m);
                    symplectic_defect(&flow_jacobian(map, &y0, 1e-4)?)
                })
                .collect::<Result<_>>()?;
            let med = median(&defects)?;
            let delta = dt.sqrt();
            let budget = SymplecticBudget::new(delta, norm_b, m, med, med / delta.powi(m as i32 + 1))?;
            println!("m = {m}, dt = {dt:<6}: median defect {med:.3e}, τ bound {:.3e}", budget.tau_bound);
            medians.push(med);
        }
        println!("m = {m}: defect slope in dt {:.2}", fit_power_law(&dts, &medians)?.order);
    }
    Ok(())
}
