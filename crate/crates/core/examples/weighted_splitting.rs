//! The two weighted iterative schemes against the exact flow of a
//! non-commuting deterministic pair, with their mass drift.
//!
//! Run: `cargo run --example weighted_splitting`

use nls_splitting::prelude::*;

fn main() -> Result<()> {
    let sys = LinearTestSystem::noncommuting_pair(6);
    let y0 = sys.initial_condition();
    let a = sys.drift().to_matrix();
    let m0 = mass(&y0, 1.0);

    println!("{:>18} {:>8} {:>12} {:>12}", "scheme", "dt", "error", "mass drift");
    for dt in [0.1, 0.05, 0.025] {
        let exact = HamiltonianState::from_stacked(&expm(&a, dt)?.matvec(&y0.to_stacked())?)?;
        let specs = [
            ("lie", SchemeSpec::lie()),
            ("weighted1 k=1", SchemeSpec::weighted1(0.5, 1)),
            ("weighted1 k=2", SchemeSpec::weighted1(0.5, 2)),
            ("weighted1 k=3", SchemeSpec::weighted1(0.5, 3)),
            ("weighted2 ω=0", SchemeSpec::weighted2(0.0, 1)),
            ("weighted2 ω=1", SchemeSpec::weighted2(1.0, 1)),
        ];
        for (name, spec) in specs {
            let y = step(&sys, &spec, &y0, dt, &[0.0])?;
            let err: f64 =
                y.to_stacked().iter().zip(exact.to_stacked()).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
            println!("{name:>18} {dt:>8} {err:>12.3e} {:>12.2e}", (mass(&y, 1.0) - m0) / m0);
        }
    }
    Ok(())
}
