//! Scalar Wiener paths and the midpoint Stratonovich exponential integral.
//!
//! Paths are drawn from ChaCha8 seeded with `seed` and switched to stream
//! `stream` (the path index of an ensemble), so every ensemble member is
//! reproducible on its own and independent of scheduling. Increments are
//! `√dt·X` with `X` standard normal.

use std::io::{self, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{dim_err, param_err, Result};
use crate::linalg::{expm, RealMatrix};

/// Increments `ΔW_j` of a scalar Wiener process on a uniform time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct WienerPath {
    dt: f64,
    increments: Vec<f64>,
    seed: u64,
    stream: u64,
}

impl WienerPath {
    pub fn new(dt: f64, increments: Vec<f64>, seed: u64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return param_err(format!("path time step must be positive, got {dt}"));
        }
        if increments.iter().any(|v| !v.is_finite()) {
            return param_err("path increments must be finite");
        }
        Ok(Self { dt, increments, seed, stream: 0 })
    }

    /// A path with all increments zero, for deterministic runs.
    pub fn zeros(n_steps: usize, dt: f64) -> Result<Self> {
        Self::new(dt, vec![0.0; n_steps], 0)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.dt * self.len() as f64
    }

    /// `W(t_j)` for `j = 0..=n`, starting from `W(0) = 0`.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut w = Vec::with_capacity(self.len() + 1);
        let mut acc = 0.0;
        w.push(acc);
        for d in &self.increments {
            acc += d;
            w.push(acc);
        }
        w
    }

    /// Columns `index,t,dW,W`; row `j` holds the increment ending at `t_j`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "index,t,dW,W")?;
        writeln!(out, "0,0,0,0")?;
        let w = self.cumulative();
        for (j, d) in self.increments.iter().enumerate() {
            writeln!(out, "{},{:?},{:?},{:?}", j + 1, (j + 1) as f64 * self.dt, d, w[j + 1])?;
        }
        Ok(())
    }
}

/// Samples `n_steps` increments of variance `dt` on stream 0.
pub fn sample_path(n_steps: usize, dt: f64, seed: u64) -> Result<WienerPath> {
    sample_path_stream(n_steps, dt, seed, 0)
}

/// Samples path number `stream` of the ensemble identified by `seed`.
pub fn sample_path_stream(n_steps: usize, dt: f64, seed: u64, stream: u64) -> Result<WienerPath> {
    if n_steps == 0 {
        return param_err("a sampled path needs at least one step");
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return param_err(format!("path time step must be positive, got {dt}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let sd = dt.sqrt();
    let increments = (0..n_steps)
        .map(|_| {
            let x: f64 = StandardNormal.sample(&mut rng);
            sd * x
        })
        .collect();
    Ok(WienerPath { dt, increments, seed, stream })
}

/// Sums consecutive groups of `factor` increments.
pub fn coarsen(path: &WienerPath, factor: usize) -> Result<WienerPath> {
    if factor == 0 || !path.len().is_multiple_of(factor) {
        return param_err(format!("factor {factor} does not divide {} increments", path.len()));
    }
    let increments = path.increments.chunks(factor).map(|c| c.iter().sum()).collect();
    Ok(WienerPath { dt: path.dt * factor as f64, increments, seed: path.seed, stream: path.stream })
}

/// `C₁(t) = Σ_j exp(A·(t_j + t_{j+1})/2)·ΔW_j` over the whole path.
pub fn stratonovich_expm_integral(a: &RealMatrix, path: &WienerPath, t: f64) -> Result<RealMatrix> {
    if !a.is_square() {
        return dim_err(format!("Stratonovich integral of non-square {}x{} matrix", a.rows(), a.cols()));
    }
    let span = path.duration();
    if !t.is_finite() || (t - span).abs() > 1e-9 * span.max(1.0) {
        return param_err(format!("time {t} does not match path duration {span}"));
    }
    let n = a.rows();
    let mut sum = RealMatrix::zeros(n, n);
    if path.is_empty() {
        return Ok(sum);
    }
    let step = expm(a, path.dt)?;
    let mut e = expm(a, 0.5 * path.dt)?;
    for (j, dw) in path.increments.iter().enumerate() {
        if j > 0 {
            e = step.matmul(&e)?;
        }
        sum = sum.add_scaled(*dw, &e)?;
    }
    Ok(sum)
}
