use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use super::runner::{DefectRow, ResultRow, RunResult};
use super::svg::{line_plot, Axes, Series};
use crate::error::Result;

pub const RESULTS_HEADER: &str =
    "run_id,scheme,m,omega,dt,dx,seed,path_id,l2_error,mean_error,mass_drift,defect,order_fit";
pub const DEFECT_HEADER: &str = "dt,scheme,m,delta,k1,tau_bound,median_defect,c_fit,slope";

// Shortest round-trip scientific notation, so equal values give equal bytes.
fn num(v: f64) -> String {
    format!("{v:e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn opt_usize(v: Option<usize>) -> String {
    v.map(|n| n.to_string()).unwrap_or_default()
}

pub fn write_results_csv<W: Write>(rows: &[ResultRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{RESULTS_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.run_id,
            r.scheme,
            r.m,
            num(r.omega),
            opt(r.dt),
            num(r.dx),
            r.seed,
            opt_usize(r.path_id),
            opt(r.l2_error),
            opt(r.mean_error),
            opt(r.mass_drift),
            opt(r.defect),
            opt(r.order_fit),
        )?;
    }
    Ok(())
}

pub fn write_defect_csv<W: Write>(rows: &[DefectRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{DEFECT_HEADER}")?;
    for r in rows {
        let b = r.budget.as_ref();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            opt(r.dt),
            r.scheme,
            r.m,
            opt(b.map(|b| b.delta)),
            opt(b.map(|b| b.k1)),
            opt(b.map(|b| b.tau_bound)),
            opt(r.median_defect),
            opt(b.map(|b| b.c_fit)),
            opt(r.slope),
        )?;
    }
    Ok(())
}

fn save(path: PathBuf, bytes: &[u8], written: &mut Vec<PathBuf>) -> Result<()> {
    fs::write(&path, bytes)?;
    written.push(path);
    Ok(())
}

/// Writes `results.csv`, `defect.csv` when the study produced defect rows,
/// and, if requested, `convergence.svg` and `snapshot.svg`. Returns the paths
/// written. The directory is created if missing.
pub fn write_outputs(result: &RunResult, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut csv = Vec::new();
    write_results_csv(&result.rows, &mut csv)?;
    save(dir.join("results.csv"), &csv, &mut written)?;
    if !result.defect_rows.is_empty() {
        let mut csv = Vec::new();
        write_defect_csv(&result.defect_rows, &mut csv)?;
        save(dir.join("defect.csv"), &csv, &mut written)?;
    }
    if !result.svg {
        return Ok(written);
    }
    if !result.curves.is_empty() {
        let series: Vec<Series> =
            result.curves.iter().map(|c| Series { label: &c.label, x: &c.dts, y: &c.errors, dashed: false }).collect();
        let axes = Axes { title: "error against time step", x_label: "dt", y_label: "error", log: true };
        save(dir.join("convergence.svg"), line_plot(&axes, &series).as_bytes(), &mut written)?;
    }
    if let Some(first) = result.snapshots.first() {
        let initial = "|u| at t = 0".to_string();
        let reference = format!("reference |u| at t = {}", first.t_end);
        let approx: Vec<String> = result.snapshots.iter().map(|s| format!("{} |u|", s.label)).collect();
        let mut series = vec![Series { label: &initial, x: &first.x, y: &first.initial, dashed: true }];
        if let Some(r) = &first.reference {
            series.push(Series { label: &reference, x: &first.x, y: r, dashed: true });
        }
        for (s, label) in result.snapshots.iter().zip(&approx) {
            series.push(Series { label, x: &s.x, y: &s.approx, dashed: false });
        }
        let axes = Axes { title: "modulus snapshots", x_label: "x", y_label: "|u|", log: false };
        save(dir.join("snapshot.svg"), line_plot(&axes, &series).as_bytes(), &mut written)?;
    }
    Ok(written)
}
