//! Config-driven experiments: parsing, the four studies, CSV and SVG output.
//!
//! A config is plain `key = value` text:
//!
//! ```text
//! problem = stochastic_nls     # linearized_stochastic | deterministic_perturbed | deterministic_nls
//! grid_points = 64
//! t_end = 0.5
//! dt = 0.01, 0.005, 0.0025     # or: n_steps = 50, 100, 200
//! scheme = iterative           # lie | strang | iterative | weighted1 | weighted2
//! sweeps = 2
//! ensemble = 8
//! seed = 7
//! ```
//!
//! See [`parse_config`] for every key and its default.

mod config;
mod output;
mod runner;
mod svg;

pub use config::{parse_config, ReferenceSpec, RunConfig};
pub use output::{write_defect_csv, write_outputs, write_results_csv, DEFECT_HEADER, RESULTS_HEADER};
pub use runner::{run_experiment, Curve, DefectRow, ResultRow, RunResult, Snapshot, Study};
